#pragma once

// CAEX-subset AutomationML documents: parsing, canonical serialization and the
// mapping between a CaexDocument and a ModuleModel.
//
// Supported constructs: CAEXFile, RoleClassLib / InterfaceClassLib (referenced
// by name only), InstanceHierarchy, InternalElement, Attribute (nested, with
// Value), RoleRequirements, ExternalInterface and InternalLink. Child element
// names must be unique within their parent so element paths stay unambiguous.

#include "automfm/error.hpp"
#include "automfm/metamodel.hpp"
#include "automfm/violation.hpp"
#include "automfm/xml.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace automfm::caex {

struct AttributeNode
{
    std::string name;
    std::string data_type;
    std::string value;
    std::optional<std::string> unit;
    std::vector<AttributeNode> children;

    bool operator==(const AttributeNode&) const = default;
};

struct ExternalInterface
{
    std::string name;
    std::string interface_class;
    std::vector<AttributeNode> attributes;

    bool operator==(const ExternalInterface&) const = default;
};

struct InternalElement
{
    std::string name;
    std::optional<std::string> id;
    std::vector<AttributeNode> attributes;
    std::vector<std::string> role_requirements;
    std::vector<ExternalInterface> external_interfaces;
    std::vector<InternalElement> children;

    bool operator==(const InternalElement&) const = default;

    [[nodiscard]] const InternalElement* child(std::string_view child_name) const
    {
        const auto it =
            std::find_if(children.begin(), children.end(), [&](const auto& c) { return c.name == child_name; });
        return it == children.end() ? nullptr : &*it;
    }

    [[nodiscard]] const AttributeNode* attribute(std::string_view attr_name) const
    {
        const auto it =
            std::find_if(attributes.begin(), attributes.end(), [&](const auto& a) { return a.name == attr_name; });
        return it == attributes.end() ? nullptr : &*it;
    }
};

struct InstanceHierarchy
{
    std::string name;
    std::vector<InternalElement> elements;

    bool operator==(const InstanceHierarchy&) const = default;
};

struct InternalLink
{
    std::string name;
    std::string side_a;
    std::string side_b;

    bool operator==(const InternalLink&) const = default;
};

struct CaexDocument
{
    std::vector<InstanceHierarchy> instance_hierarchies;
    std::vector<std::string> role_class_lib_refs;
    std::vector<std::string> interface_class_lib_refs;
    std::vector<InternalLink> internal_links;

    bool operator==(const CaexDocument&) const = default;
};

inline constexpr std::string_view schema_version = "3.0";
inline constexpr std::string_view hierarchy_name = "AutoMFM";

// ---------------------------------------------------------------------------
// parse

namespace detail {

[[noreturn]] inline void unsupported(const xml::Node& node, const std::string& message)
{
    throw UnsupportedConstruct(message, node.line, node.column);
}

inline void allow_attributes(const xml::Node& node, std::initializer_list<std::string_view> allowed)
{
    for (const auto& [key, value] : node.attributes)
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            unsupported(node, "unsupported attribute '" + key + "' on <" + node.name + ">");
}

inline std::string required(const xml::Node& node, std::string_view key)
{
    const auto* value = node.attribute(key);
    if (!value || value->empty())
        throw ParseError("<" + node.name + "> requires a non-empty " + std::string(key) + " attribute", node.line,
                         node.column);
    return *value;
}

inline void no_text(const xml::Node& node)
{
    if (node.children.empty() && node.text.find_first_not_of(" \t\r\n") != std::string::npos)
        unsupported(node, "character data in <" + node.name + ">");
}

inline AttributeNode read_attribute(const xml::Node& node)
{
    allow_attributes(node, {"Name", "AttributeDataType", "Unit"});
    no_text(node);
    AttributeNode attr;
    attr.name = required(node, "Name");
    if (const auto* t = node.attribute("AttributeDataType"))
        attr.data_type = *t;
    if (const auto* u = node.attribute("Unit"))
        attr.unit = *u;
    bool seen_value = false;
    for (const auto& child : node.children) {
        if (child.name == "Value") {
            if (seen_value)
                unsupported(child, "repeated <Value>");
            if (!child.children.empty() || !child.attributes.empty())
                unsupported(child, "<Value> holds character data only");
            seen_value = true;
            attr.value = child.text;
        }
        else if (child.name == "Attribute") {
            attr.children.push_back(read_attribute(child));
        }
        else {
            unsupported(child, "unsupported element <" + child.name + "> inside <Attribute>");
        }
    }
    return attr;
}

inline ExternalInterface read_interface(const xml::Node& node)
{
    allow_attributes(node, {"Name", "RefBaseClassPath"});
    no_text(node);
    ExternalInterface iface{required(node, "Name"), required(node, "RefBaseClassPath"), {}};
    for (const auto& child : node.children) {
        if (child.name != "Attribute")
            unsupported(child, "unsupported element <" + child.name + "> inside <ExternalInterface>");
        iface.attributes.push_back(read_attribute(child));
    }
    return iface;
}

template <typename Node>
void check_unique(const xml::Node& at, const std::vector<Node>& items)
{
    std::set<std::string_view> seen;
    for (const auto& item : items)
        if (!seen.insert(item.name).second)
            unsupported(at, "duplicate child name '" + item.name + "' in <" + at.name + ">");
}

inline InternalElement read_element(const xml::Node& node)
{
    allow_attributes(node, {"Name", "ID"});
    no_text(node);
    InternalElement ie;
    ie.name = required(node, "Name");
    if (const auto* id = node.attribute("ID"))
        ie.id = *id;
    for (const auto& child : node.children) {
        if (child.name == "Attribute") {
            ie.attributes.push_back(read_attribute(child));
        }
        else if (child.name == "RoleRequirements") {
            allow_attributes(child, {"RefBaseRoleClassPath"});
            if (!child.children.empty())
                unsupported(child.children.front(), "<RoleRequirements> must be empty");
            ie.role_requirements.push_back(required(child, "RefBaseRoleClassPath"));
        }
        else if (child.name == "ExternalInterface") {
            ie.external_interfaces.push_back(read_interface(child));
        }
        else if (child.name == "InternalElement") {
            ie.children.push_back(read_element(child));
        }
        else {
            unsupported(child, "unsupported element <" + child.name + "> inside <InternalElement>");
        }
    }
    check_unique(node, ie.children);
    return ie;
}

}  // namespace detail

inline CaexDocument parse(std::string_view bytes)
{
    const auto root = xml::parse(bytes);
    if (root.name != "CAEXFile")
        detail::unsupported(root, "root element must be <CAEXFile>, found <" + root.name + ">");
    for (const auto& [key, value] : root.attributes)
        if (key != "SchemaVersion" && key != "FileName" && key.rfind("xmlns", 0) != 0 && key.rfind("xsi:", 0) != 0)
            detail::unsupported(root, "unsupported attribute '" + key + "' on <CAEXFile>");
    detail::no_text(root);

    CaexDocument doc;
    for (const auto& child : root.children) {
        if (child.name == "RoleClassLib" || child.name == "InterfaceClassLib") {
            detail::allow_attributes(child, {"Name"});
            if (!child.children.empty())
                detail::unsupported(child, "library <" + child.name + "> is referenced by name only");
            auto& refs = child.name == "RoleClassLib" ? doc.role_class_lib_refs : doc.interface_class_lib_refs;
            refs.push_back(detail::required(child, "Name"));
        }
        else if (child.name == "InstanceHierarchy") {
            detail::allow_attributes(child, {"Name"});
            detail::no_text(child);
            InstanceHierarchy ih{detail::required(child, "Name"), {}};
            for (const auto& e : child.children) {
                if (e.name != "InternalElement")
                    detail::unsupported(e, "unsupported element <" + e.name + "> inside <InstanceHierarchy>");
                ih.elements.push_back(detail::read_element(e));
            }
            detail::check_unique(child, ih.elements);
            doc.instance_hierarchies.push_back(std::move(ih));
        }
        else if (child.name == "InternalLink") {
            detail::allow_attributes(child, {"Name", "RefPartnerSideA", "RefPartnerSideB"});
            if (!child.children.empty())
                detail::unsupported(child, "<InternalLink> must be empty");
            doc.internal_links.push_back({child.attribute("Name") ? *child.attribute("Name") : std::string{},
                                          detail::required(child, "RefPartnerSideA"),
                                          detail::required(child, "RefPartnerSideB")});
        }
        else {
            detail::unsupported(child, "unknown top-level element <" + child.name + ">");
        }
    }
    return doc;
}

// ---------------------------------------------------------------------------
// serialize

namespace detail {

inline xml::Node write_attribute(const AttributeNode& attr)
{
    auto node = xml::element("Attribute");
    node.add_attribute("Name", attr.name);
    if (!attr.data_type.empty())
        node.add_attribute("AttributeDataType", attr.data_type);
    if (attr.unit)
        node.add_attribute("Unit", *attr.unit);
    if (!attr.value.empty()) {
        auto value = xml::element("Value");
        value.text = attr.value;
        node.add_child(std::move(value));
    }
    for (const auto& child : attr.children)
        node.add_child(write_attribute(child));
    return node;
}

inline xml::Node write_element(const InternalElement& ie)
{
    auto node = xml::element("InternalElement");
    node.add_attribute("Name", ie.name);
    if (ie.id)
        node.add_attribute("ID", *ie.id);
    for (const auto& attr : ie.attributes)
        node.add_child(write_attribute(attr));
    for (const auto& iface : ie.external_interfaces) {
        auto& n = node.add_child(xml::element("ExternalInterface"));
        n.add_attribute("Name", iface.name).add_attribute("RefBaseClassPath", iface.interface_class);
        for (const auto& attr : iface.attributes)
            n.add_child(write_attribute(attr));
    }
    for (const auto& role : ie.role_requirements)
        node.add_child(xml::element("RoleRequirements")).add_attribute("RefBaseRoleClassPath", role);
    for (const auto& child : ie.children)
        node.add_child(write_element(child));
    return node;
}

}  // namespace detail

// Canonical bytes: library references, hierarchies, then links; fixed
// attribute order; 2-space indent; LF endings.
inline std::string serialize(const CaexDocument& doc)
{
    auto root = xml::element("CAEXFile");
    root.add_attribute("SchemaVersion", std::string(schema_version));
    for (const auto& name : doc.role_class_lib_refs)
        root.add_child(xml::element("RoleClassLib")).add_attribute("Name", name);
    for (const auto& name : doc.interface_class_lib_refs)
        root.add_child(xml::element("InterfaceClassLib")).add_attribute("Name", name);
    for (const auto& ih : doc.instance_hierarchies) {
        auto& node = root.add_child(xml::element("InstanceHierarchy"));
        node.add_attribute("Name", ih.name);
        for (const auto& e : ih.elements)
            node.add_child(detail::write_element(e));
    }
    for (const auto& link : doc.internal_links)
        root.add_child(xml::element("InternalLink"))
            .add_attribute("Name", link.name)
            .add_attribute("RefPartnerSideA", link.side_a)
            .add_attribute("RefPartnerSideB", link.side_b);
    return xml::write(root);
}

// ---------------------------------------------------------------------------
// External data connectors

enum class ConnectorKind
{
    collada,
    plcopen_xml,
    attachment,
};

inline std::optional<ConnectorKind> parse_connector_kind(std::string_view name)
{
    if (name == "COLLADAInterface")
        return ConnectorKind::collada;
    if (name == "PLCopenXMLInterface")
        return ConnectorKind::plcopen_xml;
    if (name == "AttachmentInterface")
        return ConnectorKind::attachment;
    return std::nullopt;
}

inline std::string_view connector_label(ConnectorKind kind)
{
    switch (kind) {
    case ConnectorKind::collada: return "COLLADAInterface";
    case ConnectorKind::plcopen_xml: return "PLCopenXMLInterface";
    case ConnectorKind::attachment: return "AttachmentInterface";
    }
    return {};
}

// Interface class identifier recorded for a connector; the PLCopen connector
// keeps the spelling used in the default rule table.
inline std::string_view connector_interface_class(ConnectorKind kind)
{
    switch (kind) {
    case ConnectorKind::collada: return "COLLADAInterface";
    case ConnectorKind::plcopen_xml: return "ExternalDataConnector.PLOpenXMLInterface";
    case ConnectorKind::attachment: return "AttachmentInterface";
    }
    return {};
}

inline ConnectorKind require_connector_kind(std::string_view name)
{
    const auto kind = parse_connector_kind(name);
    if (!kind)
        throw Error("unknown connector kind '" + std::string(name) +
                    "' (expected COLLADAInterface, PLCopenXMLInterface or AttachmentInterface)");
    return *kind;
}

namespace detail {

template <typename List>
std::string unique_interface_name(const List& existing, std::string_view base)
{
    std::string name(base);
    for (int n = 2; std::any_of(existing.begin(), existing.end(), [&](const auto& i) { return i.name == name; }); ++n)
        name = std::string(base) + "_" + std::to_string(n);
    return name;
}

}  // namespace detail

// Adds an ExternalInterface whose refURI attribute holds uri verbatim.
inline InternalElement attach_external_document(InternalElement element, std::string_view connector_kind,
                                                std::string uri)
{
    const auto kind = require_connector_kind(connector_kind);
    ExternalInterface iface;
    iface.name = detail::unique_interface_name(element.external_interfaces, connector_label(kind));
    iface.interface_class = std::string(connector_interface_class(kind));
    iface.attributes.push_back({"refURI", "xs:anyURI", std::move(uri), std::nullopt, {}});
    element.external_interfaces.push_back(std::move(iface));
    return element;
}

// Same operation on a model element that carries semantics.
inline ModuleModel attach_external_document(ModuleModel model, std::string_view element_path,
                                            std::string_view connector_kind, std::string uri)
{
    const auto kind = require_connector_kind(connector_kind);
    auto* semantics = mutable_semantics(model, element_path);
    if (!semantics)
        throw Error("element '" + std::string(element_path) + "' cannot carry external interfaces");
    ExternalInterfaceRef ref;
    ref.name = detail::unique_interface_name(semantics->interfaces, connector_label(kind));
    ref.interface_class = std::string(connector_interface_class(kind));
    ref.ref_uri = std::move(uri);
    semantics->interfaces.push_back(std::move(ref));
    return model;
}

// ---------------------------------------------------------------------------
// from_model

namespace detail {

inline constexpr std::array<std::string_view, 3> xyz_axes{"x", "y", "z"};
inline constexpr std::array<std::string_view, 3> dimension_axes{"length", "width", "height"};

inline AttributeNode text_attribute(std::string name, std::string value)
{
    return {std::move(name), "xs:string", std::move(value), std::nullopt, {}};
}

inline AttributeNode vec_attribute(std::string name, const Vec3& v, const std::array<std::string_view, 3>& axes)
{
    AttributeNode node{std::move(name), {}, {}, std::string("mm"), {}};
    const std::array<const Decimal*, 3> parts{&v.x, &v.y, &v.z};
    for (std::size_t i = 0; i < 3; ++i)
        node.children.push_back({std::string(axes[i]), "xs:string", parts[i]->text(), std::string("mm"), {}});
    return node;
}

inline void write_semantics(InternalElement& ie, const Semantics& s)
{
    ie.role_requirements = s.roles;
    for (const auto& iface : s.interfaces) {
        ExternalInterface out{iface.name, iface.interface_class, {}};
        out.attributes.push_back({"refURI", "xs:anyURI", iface.ref_uri, std::nullopt, {}});
        ie.external_interfaces.push_back(std::move(out));
    }
}

inline InternalElement make_element(std::string name) { return InternalElement{std::move(name), {}, {}, {}, {}, {}}; }

inline void add_list(InternalElement& parent, std::string name, std::vector<InternalElement> entries)
{
    if (entries.empty())
        return;
    auto list = make_element(std::move(name));
    list.children = std::move(entries);
    parent.children.push_back(std::move(list));
}

template <typename T, typename F>
std::vector<InternalElement> map_entries(const std::vector<T>& items, F&& fn)
{
    std::vector<InternalElement> out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        InternalElement ie;
        if constexpr (requires { items[i].name; })
            ie.name = items[i].name;
        else
            ie.name = std::to_string(i);
        fn(ie, items[i]);
        out.push_back(std::move(ie));
    }
    return out;
}

}  // namespace detail

inline CaexDocument from_model(const ModuleModel& m)
{
    using namespace detail;
    auto root = make_element(m.id);
    root.attributes.push_back(text_attribute("name", m.name));
    write_semantics(root, m.semantics);

    auto general = make_element("general");
    if (m.general.main_dimensions)
        general.attributes.push_back(vec_attribute("main_dimensions", *m.general.main_dimensions, dimension_axes));
    write_semantics(general, m.general.semantics);
    const auto& ident = m.general.identification;
    if (ident != Identification{}) {
        auto ie = make_element("identification");
        ie.attributes = {text_attribute("name", ident.name), text_attribute("identifier", ident.identifier),
                         text_attribute("module_type", ident.module_type)};
        write_semantics(ie, ident.semantics);
        general.children.push_back(std::move(ie));
    }
    if (!m.general.static_attributes.empty()) {
        auto list = make_element("static_attributes");
        for (const auto& p : m.general.static_attributes)
            list.attributes.push_back(
                {p.name, p.data_type, p.value, p.unit.empty() ? std::nullopt : std::optional(p.unit), {}});
        general.children.push_back(std::move(list));
    }

    auto status = make_element("status");
    write_semantics(status, m.status.semantics);
    add_list(status, "runtime_variables", map_entries(m.status.runtime_variables, [](auto& ie, const auto& v) {
                 ie.attributes = {text_attribute("data_type", v.data_type), text_attribute("unit", v.unit),
                                  text_attribute("description", v.description)};
             }));

    auto function = make_element("function");
    write_semantics(function, m.function.semantics);
    add_list(function, "logistic_functions", map_entries(m.function.logistic_functions, [](auto& ie, const auto& f) {
                 ie.attributes.push_back(text_attribute("category", std::string(to_string(f.category))));
                 if (f.behavior_ref)
                     ie.attributes.push_back(text_attribute("behavior_ref", *f.behavior_ref));
                 write_semantics(ie, f.semantics);
             }));
    add_list(function, "routes", map_entries(m.function.routes, [](auto& ie, const auto& r) {
                 ie.attributes = {text_attribute("from_port", r.from_port), text_attribute("to_port", r.to_port),
                                  text_attribute("priority", std::to_string(r.priority))};
             }));

    auto iface = make_element("interface");
    write_semantics(iface, m.module_interface.semantics);
    add_list(iface, "ports", map_entries(m.module_interface.ports, [](auto& ie, const auto& p) {
                 ie.attributes.push_back(text_attribute("direction", std::string(to_string(p.direction))));
                 if (p.position)
                     ie.attributes.push_back(vec_attribute("position", *p.position, xyz_axes));
                 write_semantics(ie, p.semantics);
             }));
    add_list(iface, "interaction_spaces",
             map_entries(m.module_interface.interaction_spaces, [](auto& ie, const auto& s) {
                 ie.attributes = {vec_attribute("min", s.box.min, xyz_axes), vec_attribute("max", s.box.max, xyz_axes)};
             }));

    auto control = make_element("control");
    write_semantics(control, m.control.semantics);
    add_list(control, "control_functions", map_entries(m.control.control_functions, [](auto& ie, const auto& f) {
                 ie.attributes.push_back(text_attribute("language_tag", f.language_tag));
                 if (f.body_ref)
                     ie.attributes.push_back(text_attribute("body_ref", *f.body_ref));
                 write_semantics(ie, f.semantics);
             }));
    add_list(control, "variables", map_entries(m.control.variables, [](auto& ie, const auto& v) {
                 ie.attributes = {text_attribute("data_type", v.data_type), text_attribute("scope", v.scope)};
             }));
    add_list(control, "io_mapping", map_entries(m.control.io_mapping, [](auto& ie, const auto& e) {
                 ie.attributes = {text_attribute("component_path", e.component_path),
                                  text_attribute("logical_address", e.logical_address),
                                  text_attribute("variable_name", e.variable_name),
                                  text_attribute("data_type", e.data_type),
                                  text_attribute("direction", std::string(to_string(e.direction)))};
             }));
    if (m.control.platform != Platform{}) {
        auto platform = make_element("platform");
        platform.attributes = {text_attribute("controller_type", m.control.platform.controller_type),
                               text_attribute("bus_coupler_type", m.control.platform.bus_coupler_type)};
        control.children.push_back(std::move(platform));
    }

    root.children = {std::move(general), std::move(status), std::move(function), std::move(iface),
                     std::move(control)};
    add_list(root, "components", map_entries(m.components, [](auto& ie, const Component& c) {
                 ie.attributes.push_back(text_attribute("kind", std::string(to_string(c.kind))));
                 ie.attributes.push_back(text_attribute("component_type", c.component_type));
                 if (c.position)
                     ie.attributes.push_back(vec_attribute("position", *c.position, xyz_axes));
                 if (c.main_dimensions)
                     ie.attributes.push_back(vec_attribute("main_dimensions", *c.main_dimensions, dimension_axes));
                 if (c.latency) {
                     auto latency = text_attribute("latency", c.latency->text());
                     latency.unit = "s";
                     ie.attributes.push_back(std::move(latency));
                 }
                 write_semantics(ie, c.semantics);
             }));
    std::vector<InternalElement> docs;
    for (const auto& d : m.documents) {
        auto ie = make_element(d.id);
        ie.attributes = {text_attribute("discipline", std::string(to_string(d.discipline))),
                         text_attribute("stage", std::string(to_string(d.stage))), text_attribute("name", d.name),
                         text_attribute("server_path", d.server_path),
                         text_attribute("assigned_element", d.assigned_element)};
        docs.push_back(std::move(ie));
    }
    add_list(root, "documents", std::move(docs));

    CaexDocument doc;
    doc.role_class_lib_refs = {"AutomationMLBaseRoleClassLib"};
    doc.interface_class_lib_refs = {"AutomationMLInterfaceClassLib"};
    doc.instance_hierarchies.push_back({std::string(hierarchy_name), {std::move(root)}});
    for (const auto& ref : m.cross_refs)
        doc.internal_links.push_back({ref.kind, ref.source, ref.target});
    return doc;
}

// ---------------------------------------------------------------------------
// to_model

struct ModelReadResult
{
    ModuleModel model;
    std::vector<Violation> violations;
};

namespace detail {

// Reads the fields of one InternalElement and reports what it did not consume.
class ElementReader
{
public:
    ElementReader(const InternalElement& ie, std::string path, std::vector<Violation>& out)
        : ie_(ie)
        , path_(std::move(path))
        , out_(out)
    {
    }

    ElementReader(const ElementReader&) = delete;
    ElementReader& operator=(const ElementReader&) = delete;

    ~ElementReader()
    {
        for (const auto& a : ie_.attributes)
            if (!used_attributes_.count(a.name))
                out_.push_back(make_violation("caex.unknown-attribute", path_,
                                              "attribute '" + a.name + "' is not part of this element"));
        for (const auto& c : ie_.children)
            if (!used_children_.count(c.name))
                out_.push_back(make_violation("caex.unknown-element", path_,
                                              "element '" + c.name + "' is not part of this element"));
        if (!semantics_read_ && (!ie_.role_requirements.empty() || !ie_.external_interfaces.empty()))
            out_.push_back(make_violation("caex.ignored-semantics", path_,
                                          "roles and interfaces are not kept on this element"));
    }

    [[nodiscard]] const std::string& path() const noexcept { return path_; }

    const AttributeNode* attribute(std::string_view name)
    {
        used_attributes_.insert(std::string(name));
        return ie_.attribute(name);
    }

    std::string text(std::string_view name)
    {
        const auto* a = attribute(name);
        return a ? a->value : std::string{};
    }

    std::optional<std::string> optional_text(std::string_view name)
    {
        const auto* a = attribute(name);
        return a ? std::optional(a->value) : std::nullopt;
    }

    std::optional<Decimal> decimal(std::string_view name)
    {
        const auto* a = attribute(name);
        if (!a)
            return std::nullopt;
        auto d = Decimal::parse(a->value);
        if (!d)
            bad_value(name, a->value);
        return d;
    }

    std::optional<Vec3> vec(std::string_view name, const std::array<std::string_view, 3>& axes)
    {
        const auto* a = attribute(name);
        if (!a)
            return std::nullopt;
        std::array<std::optional<Decimal>, 3> parts;
        for (std::size_t i = 0; i < 3; ++i)
            for (const auto& child : a->children)
                if (child.name == axes[i])
                    parts[i] = Decimal::parse(child.value);
        if (!parts[0] || !parts[1] || !parts[2] || a->children.size() != 3) {
            bad_value(name, "(" + std::string(axes[0]) + "," + std::string(axes[1]) + "," + std::string(axes[2]) +
                                " expected)");
            return std::nullopt;
        }
        return Vec3{*parts[0], *parts[1], *parts[2]};
    }

    template <typename E, typename Parse>
    std::optional<E> enumeration(std::string_view name, Parse&& parse)
    {
        const auto value = text(name);
        auto e = parse(value);
        if (!e)
            bad_value(name, value);
        return e;
    }

    std::optional<int> integer(std::string_view name)
    {
        const auto value = text(name);
        int out = 0;
        const auto* end = value.data() + value.size();
        const auto [ptr, ec] = std::from_chars(value.data(), end, out);
        if (value.empty() || ec != std::errc{} || ptr != end) {
            bad_value(name, value);
            return std::nullopt;
        }
        return out;
    }

    Semantics semantics()
    {
        semantics_read_ = true;
        Semantics s;
        s.roles = ie_.role_requirements;
        for (const auto& iface : ie_.external_interfaces) {
            ExternalInterfaceRef ref{iface.name, iface.interface_class, {}};
            for (const auto& a : iface.attributes) {
                if (a.name == "refURI")
                    ref.ref_uri = a.value;
                else
                    out_.push_back(make_violation("caex.unknown-attribute", path_,
                                                  "interface attribute '" + a.name + "' is not kept"));
            }
            s.interfaces.push_back(std::move(ref));
        }
        return s;
    }

    const InternalElement* child(std::string_view name)
    {
        used_children_.insert(std::string(name));
        return ie_.child(name);
    }

private:
    void bad_value(std::string_view name, const std::string& value)
    {
        out_.push_back(make_violation("caex.bad-value", path_,
                                      "attribute '" + std::string(name) + "' has invalid value '" + value + "'"));
    }

    const InternalElement& ie_;
    std::string path_;
    std::vector<Violation>& out_;
    std::set<std::string> used_attributes_;
    std::set<std::string> used_children_;
    bool semantics_read_ = false;
};

// Reads the entries of a list container (e.g. "ports") with fn(reader, entry_name).
template <typename F>
void read_list(ElementReader& parent, std::string_view list_name, bool named, std::vector<Violation>& out, F&& fn)
{
    const auto* list = parent.child(list_name);
    if (!list)
        return;
    ElementReader list_reader(*list, parent.path() + "/" + std::string(list_name), out);
    for (std::size_t i = 0; i < list->children.size(); ++i) {
        const auto& entry = list->children[i];
        list_reader.child(entry.name);
        if (named && !is_valid_entry_name(entry.name)) {
            out.push_back(make_violation("caex.bad-name", list_reader.path(),
                                         "entry name '" + entry.name + "' is not a valid path segment"));
            continue;
        }
        const auto segment = named ? entry.name : std::to_string(i);
        ElementReader reader(entry, list_reader.path() + "/" + segment, out);
        fn(reader, entry.name);
    }
}

inline const InternalElement& module_root(const CaexDocument& doc)
{
    const InternalElement* found = nullptr;
    std::size_t count = 0;
    for (const auto& ih : doc.instance_hierarchies)
        for (const auto& e : ih.elements)
            if (!e.role_requirements.empty()) {
                found = &e;
                ++count;
            }
    if (count != 1)
        throw StructuralError("document must contain exactly one module root, found " + std::to_string(count));
    return *found;
}

}  // namespace detail

inline ModelReadResult to_model(const CaexDocument& doc)
{
    using namespace detail;
    const auto& root_ie = module_root(doc);
    if (!is_valid_path(root_ie.name))
        throw StructuralError("module root name '" + root_ie.name + "' is not a valid element path");

    ModelReadResult result;
    auto& out = result.violations;
    ModuleModel& m = result.model;
    m.id = root_ie.name;
    {
        ElementReader root(root_ie, m.id, out);
        m.name = root.text("name");
        m.semantics = root.semantics();

        const auto subclass = [&](std::string_view name) {
            const auto* ie = root.child(name);
            if (!ie)
                out.push_back(make_violation("caex.missing-container", m.id + "/" + std::string(name),
                                             "sub-class element '" + std::string(name) + "' is missing"));
            return ie;
        };

        if (const auto* ie = subclass("general")) {
            ElementReader r(*ie, m.id + "/general", out);
            m.general.main_dimensions = r.vec("main_dimensions", dimension_axes);
            m.general.semantics = r.semantics();
            if (const auto* id_ie = r.child("identification")) {
                ElementReader ir(*id_ie, r.path() + "/identification", out);
                auto& ident = m.general.identification;
                ident.name = ir.text("name");
                ident.identifier = ir.text("identifier");
                ident.module_type = ir.text("module_type");
                ident.semantics = ir.semantics();
            }
            if (const auto* list = r.child("static_attributes")) {
                ElementReader lr(*list, r.path() + "/static_attributes", out);
                for (const auto& a : list->attributes) {
                    lr.attribute(a.name);
                    if (!is_valid_entry_name(a.name)) {
                        out.push_back(make_violation("caex.bad-name", lr.path(),
                                                     "static attribute name '" + a.name + "' is not a valid path segment"));
                        continue;
                    }
                    m.general.static_attributes.push_back({a.name, a.data_type, a.value, a.unit.value_or("")});
                }
            }
        }

        if (const auto* ie = subclass("status")) {
            ElementReader r(*ie, m.id + "/status", out);
            m.status.semantics = r.semantics();
            read_list(r, "runtime_variables", true, out, [&](ElementReader& e, const std::string& name) {
                m.status.runtime_variables.push_back({name, e.text("data_type"), e.text("unit"), e.text("description")});
            });
        }

        if (const auto* ie = subclass("function")) {
            ElementReader r(*ie, m.id + "/function", out);
            m.function.semantics = r.semantics();
            read_list(r, "logistic_functions", true, out, [&](ElementReader& e, const std::string& name) {
                LogisticFunction f;
                f.name = name;
                const auto category = e.enumeration<FunctionCategory>("category", parse_category);
                f.behavior_ref = e.optional_text("behavior_ref");
                f.semantics = e.semantics();
                if (category) {
                    f.category = *category;
                    m.function.logistic_functions.push_back(std::move(f));
                }
            });
            read_list(r, "routes", false, out, [&](ElementReader& e, const std::string&) {
                Route route{e.text("from_port"), e.text("to_port"), 0};
                if (const auto priority = e.integer("priority")) {
                    route.priority = *priority;
                    m.function.routes.push_back(std::move(route));
                }
            });
        }

        if (const auto* ie = subclass("interface")) {
            ElementReader r(*ie, m.id + "/interface", out);
            m.module_interface.semantics = r.semantics();
            read_list(r, "ports", true, out, [&](ElementReader& e, const std::string& name) {
                Port p;
                p.name = name;
                const auto direction = e.enumeration<PortDirection>("direction", parse_port_direction);
                p.position = e.vec("position", xyz_axes);
                p.semantics = e.semantics();
                if (direction) {
                    p.direction = *direction;
                    m.module_interface.ports.push_back(std::move(p));
                }
            });
            read_list(r, "interaction_spaces", true, out, [&](ElementReader& e, const std::string& name) {
                auto lo = e.vec("min", xyz_axes);
                auto hi = e.vec("max", xyz_axes);
                if (lo && hi)
                    m.module_interface.interaction_spaces.push_back({name, {*lo, *hi}});
            });
        }

        if (const auto* ie = subclass("control")) {
            ElementReader r(*ie, m.id + "/control", out);
            auto& c = m.control;
            c.semantics = r.semantics();
            read_list(r, "control_functions", true, out, [&](ElementReader& e, const std::string& name) {
                c.control_functions.push_back({name, e.text("language_tag"), e.optional_text("body_ref"), e.semantics()});
            });
            read_list(r, "variables", true, out, [&](ElementReader& e, const std::string& name) {
                c.variables.push_back({name, e.text("data_type"), e.text("scope")});
            });
            read_list(r, "io_mapping", false, out, [&](ElementReader& e, const std::string&) {
                IoMapEntry entry{e.text("component_path"), e.text("logical_address"), e.text("variable_name"),
                                 e.text("data_type"), IoDirection::input};
                if (const auto direction = e.enumeration<IoDirection>("direction", parse_io_direction)) {
                    entry.direction = *direction;
                    c.io_mapping.push_back(std::move(entry));
                }
            });
            if (const auto* p = r.child("platform")) {
                ElementReader pr(*p, r.path() + "/platform", out);
                c.platform = {pr.text("controller_type"), pr.text("bus_coupler_type")};
            }
        }

        read_list(root, "components", true, out, [&](ElementReader& e, const std::string& name) {
            Component comp;
            comp.name = name;
            const auto kind = e.enumeration<ComponentKind>("kind", parse_component_kind);
            comp.component_type = e.text("component_type");
            comp.position = e.vec("position", xyz_axes);
            comp.main_dimensions = e.vec("main_dimensions", dimension_axes);
            comp.latency = e.decimal("latency");
            comp.semantics = e.semantics();
            if (kind) {
                comp.kind = *kind;
                m.components.push_back(std::move(comp));
            }
        });

        read_list(root, "documents", true, out, [&](ElementReader& e, const std::string& name) {
            DocumentReference d;
            d.id = name;
            const auto discipline = e.enumeration<Discipline>("discipline", parse_discipline);
            const auto stage = e.enumeration<Stage>("stage", parse_stage);
            d.name = e.text("name");
            d.server_path = e.text("server_path");
            d.assigned_element = e.text("assigned_element");
            if (discipline && stage) {
                d.discipline = *discipline;
                d.stage = *stage;
                m.documents.push_back(std::move(d));
            }
        });
    }

    for (std::size_t i = 0; i < doc.internal_links.size(); ++i) {
        const auto& link = doc.internal_links[i];
        const auto where = m.id + "/cross_refs/" + std::to_string(m.cross_refs.size());
        if (!is_valid_path(link.side_a) || !is_valid_path(link.side_b)) {
            out.push_back(make_violation("caex.bad-value", where,
                                         "InternalLink '" + link.name + "' has a malformed side path"));
            continue;
        }
        if (link.side_a == link.side_b) {
            out.push_back(make_violation("caex.self-link", where, "InternalLink '" + link.name + "' links '" +
                                                                      link.side_a + "' to itself"));
            continue;
        }
        CrossReference ref{link.side_a, link.side_b, link.name};
        if (std::find(m.cross_refs.begin(), m.cross_refs.end(), ref) != m.cross_refs.end()) {
            out.push_back(make_violation("caex.duplicate-link", where,
                                         "InternalLink '" + link.name + "' repeated; kept once"));
            continue;
        }
        m.cross_refs.push_back(std::move(ref));
    }
    return result;
}

// File-level conveniences.
inline ModelReadResult read_model(std::string_view bytes) { return to_model(parse(bytes)); }
inline std::string write_model(const ModuleModel& model) { return serialize(from_model(model)); }

}  // namespace automfm::caex
