#pragma once

// Mapping rule tables: which AutomationML role classes and interface classes
// an element of a given model class may carry, and validation of a model's
// assignments against such a table.
//
// Text format, one rule per line ('#' starts a comment):
//
//     Control.ControlFunction -> role : ControlEquipment
//     Control.ControlFunction -> iface : AttachmentInterface

#include "automfm/error.hpp"
#include "automfm/metamodel.hpp"
#include "automfm/violation.hpp"

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace automfm::mapping {

enum class RuleKind
{
    role,
    iface,
};

struct MappingEntry
{
    std::string class_path;
    std::vector<std::string> permitted_interfaces;  // insertion order, deduplicated
    std::vector<std::string> permitted_roles;
};

class MappingRuleTable
{
public:
    // Adds one identifier; repeated identifiers are stored once.
    void add(std::string_view class_path, RuleKind kind, std::string_view identifier)
    {
        auto* entry = find_mutable(class_path);
        if (!entry)
            entry = &entries_.emplace_back(MappingEntry{std::string(class_path), {}, {}});
        auto& list = kind == RuleKind::role ? entry->permitted_roles : entry->permitted_interfaces;
        if (std::find(list.begin(), list.end(), identifier) == list.end())
            list.emplace_back(identifier);
    }

    [[nodiscard]] const MappingEntry* find(std::string_view class_path) const
    {
        const auto it = std::find_if(entries_.begin(), entries_.end(),
                                     [&](const auto& e) { return e.class_path == class_path; });
        return it == entries_.end() ? nullptr : &*it;
    }

    [[nodiscard]] const std::vector<MappingEntry>& entries() const noexcept { return entries_; }

    // Equal when both tables cover the same classes with the same identifier sets.
    bool operator==(const MappingRuleTable& other) const
    {
        if (entries_.size() != other.entries_.size())
            return false;
        const auto as_set = [](const std::vector<std::string>& v) { return std::set<std::string>(v.begin(), v.end()); };
        return std::all_of(entries_.begin(), entries_.end(), [&](const MappingEntry& e) {
            const auto* o = other.find(e.class_path);
            return o && as_set(e.permitted_roles) == as_set(o->permitted_roles) &&
                   as_set(e.permitted_interfaces) == as_set(o->permitted_interfaces);
        });
    }

private:
    MappingEntry* find_mutable(std::string_view class_path)
    {
        const auto it = std::find_if(entries_.begin(), entries_.end(),
                                     [&](const auto& e) { return e.class_path == class_path; });
        return it == entries_.end() ? nullptr : &*it;
    }

    std::vector<MappingEntry> entries_;
};

// Built-in rules for three classes. Duplicates within one set collapse to a
// single entry.
inline MappingRuleTable default_table()
{
    MappingRuleTable t;
    const auto add_all = [&](std::string_view cls, RuleKind kind, std::initializer_list<std::string_view> ids) {
        for (const auto id : ids)
            t.add(cls, kind, id);
    };
    add_all("Control.ControlFunction", RuleKind::iface,
            {"AutomationMLBaseInterface", "AttachmentInterface", "AutomationMLBaseInterface",
             "ExternalDataConnector.PLOpenXMLInterface"});
    add_all("Control.ControlFunction", RuleKind::role, {"AutomationMLCSRoleClassLib", "ControlEquipment"});
    add_all("Function.LogisticFunction", RuleKind::iface,
            {"AutomationMLBaseInterface", "AttachmentInterface", "AutomationMLBaseInterface", "ExternalDataConnector",
             "COLLADAInterface"});
    add_all("Function.LogisticFunction", RuleKind::role, {"AutomationMLExtendedRoleClassLib"});
    add_all("General.Identification", RuleKind::iface,
            {"AutomationMLInterfaceClassLib", "AutomationMLBaseInterface", "CommunicationInterfaceClassLib"});
    add_all("General.Identification", RuleKind::role,
            {"AutomationMLDMIRoleClassLib", "DiscManufacturingEquipment", "AutomationMLExtendedRoleClassLib"});
    return t;
}

// nullopt means the class is not covered by the table.
inline std::optional<std::set<std::string>> roles_for(const MappingRuleTable& table, std::string_view class_path)
{
    const auto* e = table.find(class_path);
    if (!e)
        return std::nullopt;
    return std::set<std::string>(e->permitted_roles.begin(), e->permitted_roles.end());
}

inline std::optional<std::set<std::string>> interfaces_for(const MappingRuleTable& table, std::string_view class_path)
{
    const auto* e = table.find(class_path);
    if (!e)
        return std::nullopt;
    return std::set<std::string>(e->permitted_interfaces.begin(), e->permitted_interfaces.end());
}

namespace detail {

inline std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline bool is_identifier(std::string_view s)
{
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-' || c == '/';
    });
}

}  // namespace detail

inline MappingRuleTable parse_rule_table(std::string_view text)
{
    MappingRuleTable table;
    std::vector<std::pair<std::string, std::size_t>> first_line;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty())
            continue;

        const auto arrow = line.find("->");
        const auto colon = line.find(':', arrow == std::string_view::npos ? 0 : arrow);
        if (arrow == std::string_view::npos || colon == std::string_view::npos)
            throw ParseError("expected 'class_path -> role|iface : identifier'", line_no);
        const auto cls = detail::trim(line.substr(0, arrow));
        const auto kind_text = detail::trim(line.substr(arrow + 2, colon - arrow - 2));
        const auto identifier = detail::trim(line.substr(colon + 1));
        if (!detail::is_identifier(cls))
            throw ParseError("invalid class path '" + std::string(cls) + "'", line_no);
        if (!detail::is_identifier(identifier))
            throw ParseError("invalid identifier '" + std::string(identifier) + "'", line_no);
        RuleKind kind;
        if (kind_text == "role")
            kind = RuleKind::role;
        else if (kind_text == "iface")
            kind = RuleKind::iface;
        else
            throw ParseError("rule kind must be 'role' or 'iface', got '" + std::string(kind_text) + "'", line_no);
        if (!table.find(cls))
            first_line.emplace_back(std::string(cls), line_no);
        table.add(cls, kind, identifier);
    }
    for (const auto& [cls, line] : first_line) {
        const auto* e = table.find(cls);
        if (e->permitted_roles.empty())
            throw ParseError("class '" + cls + "' has no role identifiers", line);
        if (e->permitted_interfaces.empty())
            throw ParseError("class '" + cls + "' has no interface identifiers", line);
    }
    return table;
}

inline std::string write_rule_table(const MappingRuleTable& table)
{
    std::string out = "# class_path -> role|iface : identifier\n";
    for (const auto& e : table.entries()) {
        for (const auto& id : e.permitted_interfaces)
            out += e.class_path + " -> iface : " + id + "\n";
        for (const auto& id : e.permitted_roles)
            out += e.class_path + " -> role : " + id + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Validation

enum class AssignmentKind
{
    illegal_role,
    illegal_interface,
    missing_role,
};

inline std::string_view to_string(AssignmentKind k)
{
    switch (k) {
    case AssignmentKind::illegal_role: return "illegal_role";
    case AssignmentKind::illegal_interface: return "illegal_interface";
    case AssignmentKind::missing_role: return "missing_role";
    }
    return {};
}

struct AssignmentViolation
{
    std::string element_path;
    std::string found_identifier;  // empty for missing_role
    std::set<std::string> permitted;
    AssignmentKind kind;

    bool operator==(const AssignmentViolation&) const = default;
};

// One violation per role or interface identifier outside its class's permitted
// set, plus missing_role for covered elements without any role. Elements of
// classes the table does not cover are skipped.
inline std::vector<AssignmentViolation> validate_assignments(const ModuleModel& model, const MappingRuleTable& table)
{
    std::vector<AssignmentViolation> out;
    for (const auto& element : all_elements(model)) {
        const auto* semantics = element.semantics();
        if (!semantics)
            continue;
        const auto* entry = table.find(class_selector(element.kind));
        if (!entry)
            continue;
        const std::set<std::string> roles(entry->permitted_roles.begin(), entry->permitted_roles.end());
        const std::set<std::string> ifaces(entry->permitted_interfaces.begin(), entry->permitted_interfaces.end());
        if (semantics->roles.empty())
            out.push_back({element.path, {}, roles, AssignmentKind::missing_role});
        for (const auto& role : semantics->roles)
            if (!roles.count(role))
                out.push_back({element.path, role, roles, AssignmentKind::illegal_role});
        for (const auto& iface : semantics->interfaces)
            if (!ifaces.count(iface.interface_class))
                out.push_back({element.path, iface.interface_class, ifaces, AssignmentKind::illegal_interface});
    }
    return out;
}

// Classes of elements that carry roles or interfaces but have no table entry,
// each reported once with the first element path seen.
inline std::vector<std::pair<std::string, std::string>> uncovered_classes(const ModuleModel& model,
                                                                          const MappingRuleTable& table)
{
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& element : all_elements(model)) {
        const auto* semantics = element.semantics();
        if (!semantics || semantics->empty())
            continue;
        const std::string cls(class_selector(element.kind));
        if (table.find(cls))
            continue;
        if (std::none_of(out.begin(), out.end(), [&](const auto& p) { return p.first == cls; }))
            out.emplace_back(cls, element.path);
    }
    return out;
}

inline std::string join(const std::set<std::string>& items)
{
    std::string out;
    for (const auto& item : items)
        out += (out.empty() ? "" : ", ") + item;
    return out;
}

// Assignment findings plus the informational uncovered-class notes as Violations.
inline std::vector<Violation> assignment_violations(const ModuleModel& model, const MappingRuleTable& table)
{
    std::vector<Violation> out;
    for (const auto& v : validate_assignments(model, table)) {
        switch (v.kind) {
        case AssignmentKind::illegal_role:
            out.push_back(make_violation("mapping.illegal-role", v.element_path,
                                         "illegal_role '" + v.found_identifier + "' (permitted: " + join(v.permitted) +
                                             ")"));
            break;
        case AssignmentKind::illegal_interface:
            out.push_back(make_violation("mapping.illegal-interface", v.element_path,
                                         "illegal_interface '" + v.found_identifier +
                                             "' (permitted: " + join(v.permitted) + ")"));
            break;
        case AssignmentKind::missing_role:
            out.push_back(make_violation("mapping.missing-role", v.element_path,
                                         "missing_role (permitted: " + join(v.permitted) + ")"));
            break;
        }
    }
    for (const auto& [cls, path] : uncovered_classes(model, table))
        out.push_back(make_violation("mapping.uncovered-class", path, "class " + cls + " is not covered by the rule table"));
    return out;
}

}  // namespace automfm::mapping
