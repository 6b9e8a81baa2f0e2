#pragma once

// Small XML reader/writer for the document subset used by CAEX and the
// PLCopen-style output: elements, attributes, character data in leaf
// elements, comments and the XML declaration. DOCTYPE, CDATA, processing
// instructions and mixed content are rejected with their location.

#include "automfm/error.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace automfm::xml {

struct Node
{
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;  // in document order
    std::vector<Node> children;
    std::string text;  // character data of leaf elements, verbatim
    std::size_t line = 0;
    std::size_t column = 0;

    [[nodiscard]] const std::string* attribute(std::string_view key) const
    {
        for (const auto& [k, v] : attributes)
            if (k == key)
                return &v;
        return nullptr;
    }

    Node& add_attribute(std::string key, std::string value)
    {
        attributes.emplace_back(std::move(key), std::move(value));
        return *this;
    }

    Node& add_child(Node child)
    {
        children.push_back(std::move(child));
        return children.back();
    }
};

inline Node element(std::string name) { return Node{std::move(name), {}, {}, {}, 0, 0}; }

namespace detail {

class Reader
{
public:
    explicit Reader(std::string_view input)
        : in_(input)
    {
        if (in_.substr(0, 3) == "\xEF\xBB\xBF")
            in_.remove_prefix(3);
    }

    Node document()
    {
        skip_misc(true);
        if (at_end())
            fail("no root element");
        if (!starts_with("<") || starts_with("</"))
            fail("expected root element");
        Node root = parse_element();
        skip_misc(false);
        if (!at_end())
            fail("content after the root element");
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, line_, column_); }
    [[noreturn]] void unsupported(const std::string& message) const
    {
        throw UnsupportedConstruct(message, line_, column_);
    }

    [[nodiscard]] bool at_end() const noexcept { return pos_ >= in_.size(); }
    [[nodiscard]] bool starts_with(std::string_view s) const noexcept { return in_.substr(pos_, s.size()) == s; }
    [[nodiscard]] char peek() const
    {
        if (at_end())
            fail("unexpected end of input");
        return in_[pos_];
    }

    void advance(std::size_t n = 1)
    {
        for (std::size_t i = 0; i < n && pos_ < in_.size(); ++i, ++pos_) {
            if (in_[pos_] == '\n') {
                ++line_;
                column_ = 1;
            }
            else {
                ++column_;
            }
        }
    }

    void expect(std::string_view s)
    {
        if (!starts_with(s)) {
            if (pos_ + s.size() > in_.size() && in_.substr(pos_) == s.substr(0, in_.size() - pos_))
                fail("unexpected end of input");
            fail("expected '" + std::string(s) + "'");
        }
        advance(s.size());
    }

    static bool is_space(char c) noexcept { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

    void skip_space()
    {
        while (!at_end() && is_space(in_[pos_]))
            advance();
    }

    void skip_comment()
    {
        expect("<!--");
        const auto end = in_.find("-->", pos_);
        if (end == std::string_view::npos) {
            advance(in_.size() - pos_);
            fail("unterminated comment");
        }
        advance(end + 3 - pos_);
    }

    // Whitespace, comments and (in the prolog) the XML declaration.
    void skip_misc(bool prolog)
    {
        bool first = true;
        while (true) {
            if (prolog && first && starts_with("<?xml") && pos_ + 5 < in_.size() && is_space(in_[pos_ + 5])) {
                const auto end = in_.find("?>", pos_);
                if (end == std::string_view::npos) {
                    advance(in_.size() - pos_);
                    fail("unterminated XML declaration");
                }
                advance(end + 2 - pos_);
            }
            first = false;
            skip_space();
            if (starts_with("<!--"))
                skip_comment();
            else if (starts_with("<!DOCTYPE"))
                unsupported("DOCTYPE declarations are not supported");
            else if (starts_with("<?"))
                unsupported("processing instructions are not supported");
            else
                return;
        }
    }

    static bool is_name_start(char c) noexcept
    {
        return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' || c == ':' ||
               static_cast<unsigned char>(c) >= 0x80;
    }

    static bool is_name_char(char c) noexcept
    {
        return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
    }

    std::string parse_name()
    {
        if (!is_name_start(peek()))
            fail("expected a name");
        const auto start = pos_;
        while (!at_end() && is_name_char(in_[pos_]))
            advance();
        return std::string(in_.substr(start, pos_ - start));
    }

    static void append_utf8(std::string& out, std::uint32_t cp)
    {
        if (cp < 0x80) {
            out += static_cast<char>(cp);
        }
        else if (cp < 0x800) {
            out += static_cast<char>(0xC0 | (cp >> 6));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        }
        else if (cp < 0x10000) {
            out += static_cast<char>(0xE0 | (cp >> 12));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        }
        else {
            out += static_cast<char>(0xF0 | (cp >> 18));
            out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        }
    }

    void parse_reference(std::string& out)
    {
        expect("&");
        const auto end = in_.find(';', pos_);
        if (end == std::string_view::npos || end - pos_ > 10)
            fail("unterminated entity reference");
        const auto ref = in_.substr(pos_, end - pos_);
        if (ref == "lt")
            out += '<';
        else if (ref == "gt")
            out += '>';
        else if (ref == "amp")
            out += '&';
        else if (ref == "quot")
            out += '"';
        else if (ref == "apos")
            out += '\'';
        else if (ref.size() > 1 && ref[0] == '#') {
            const bool hex = ref[1] == 'x';
            const auto digits = ref.substr(hex ? 2 : 1);
            if (digits.empty())
                fail("bad character reference");
            std::uint32_t cp = 0;
            for (char c : digits) {
                std::uint32_t d = 0;
                if (c >= '0' && c <= '9')
                    d = static_cast<std::uint32_t>(c - '0');
                else if (hex && c >= 'a' && c <= 'f')
                    d = static_cast<std::uint32_t>(c - 'a' + 10);
                else if (hex && c >= 'A' && c <= 'F')
                    d = static_cast<std::uint32_t>(c - 'A' + 10);
                else
                    fail("bad character reference");
                cp = cp * (hex ? 16 : 10) + d;
            }
            if (cp == 0 || cp > 0x10FFFF)
                fail("character reference out of range");
            append_utf8(out, cp);
        }
        else {
            unsupported("unknown entity '&" + std::string(ref) + ";'");
        }
        advance(end + 1 - pos_);
    }

    std::string parse_attribute_value()
    {
        const char quote = peek();
        if (quote != '"' && quote != '\'')
            fail("expected quoted attribute value");
        advance();
        std::string value;
        while (true) {
            const char c = peek();
            if (c == quote) {
                advance();
                return value;
            }
            if (c == '<')
                fail("'<' in attribute value");
            if (c == '&') {
                parse_reference(value);
                continue;
            }
            value += c;
            advance();
        }
    }

    Node parse_element()
    {
        Node node;
        node.line = line_;
        node.column = column_;
        expect("<");
        node.name = parse_name();
        while (true) {
            const bool had_space = !at_end() && is_space(in_[pos_]);
            skip_space();
            if (starts_with("/>")) {
                advance(2);
                return node;
            }
            if (starts_with(">")) {
                advance();
                break;
            }
            if (at_end())
                fail("unexpected end of input");
            if (!had_space)
                fail("expected whitespace before attribute");
            auto key = parse_name();
            skip_space();
            expect("=");
            skip_space();
            auto value = parse_attribute_value();
            if (node.attribute(key))
                fail("duplicate attribute '" + key + "'");
            node.attributes.emplace_back(std::move(key), std::move(value));
        }

        std::string text;
        bool significant_text = false;
        while (true) {
            if (at_end())
                fail("unexpected end of input inside <" + node.name + ">");
            if (starts_with("</")) {
                advance(2);
                const auto name = parse_name();
                if (name != node.name)
                    fail("mismatched end tag </" + name + ">, expected </" + node.name + ">");
                skip_space();
                expect(">");
                break;
            }
            if (starts_with("<!--")) {
                skip_comment();
                continue;
            }
            if (starts_with("<![CDATA["))
                unsupported("CDATA sections are not supported");
            if (starts_with("<?"))
                unsupported("processing instructions are not supported");
            if (starts_with("<")) {
                if (significant_text)
                    unsupported("mixed content in <" + node.name + ">");
                node.children.push_back(parse_element());
                continue;
            }
            if (peek() == '&') {
                parse_reference(text);
                significant_text = true;
            }
            else {
                if (!is_space(in_[pos_]))
                    significant_text = true;
                text += in_[pos_];
                advance();
            }
            if (significant_text && !node.children.empty())
                unsupported("mixed content in <" + node.name + ">");
        }
        if (node.children.empty())
            node.text = std::move(text);
        return node;
    }

    std::string_view in_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

inline void escape(std::string& out, std::string_view s, bool attribute)
{
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '\r': out += "&#13;"; break;
        case '"':
            out += attribute ? "&quot;" : "\"";
            break;
        case '\n':
            out += attribute ? "&#10;" : "\n";
            break;
        case '\t':
            out += attribute ? "&#9;" : "\t";
            break;
        default: out += c;
        }
    }
}

inline void write_node(std::string& out, const Node& node, std::size_t depth, bool is_root)
{
    out.append(depth * 2, ' ');
    out += '<';
    out += node.name;
    for (const auto& [k, v] : node.attributes) {
        out += ' ';
        out += k;
        out += "=\"";
        escape(out, v, true);
        out += '"';
    }
    if (!node.children.empty() || is_root) {
        out += ">\n";
        for (const auto& child : node.children)
            write_node(out, child, depth + 1, false);
        out.append(depth * 2, ' ');
        out += "</" + node.name + ">\n";
    }
    else if (!node.text.empty()) {
        out += '>';
        escape(out, node.text, false);
        out += "</" + node.name + ">\n";
    }
    else {
        out += "/>\n";
    }
}

}  // namespace detail

// Parses a complete document and returns its root element.
inline Node parse(std::string_view input) { return detail::Reader(input).document(); }

// Canonical writer: XML declaration, 2-space indentation, LF line endings,
// attributes in stored order. The root element is never self-closed.
inline std::string write(const Node& root)
{
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    detail::write_node(out, root, 0, true);
    return out;
}

}  // namespace automfm::xml
