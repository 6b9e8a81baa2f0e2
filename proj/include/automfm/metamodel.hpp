#pragma once

// Module model for automated material flow modules: the five description
// sub-classes (general, status, function, interface, control) plus the
// components, engineering documents and cross-discipline references of one
// module. Models are plain values; every mutating operation takes a model by
// value and returns the updated snapshot.

#include "automfm/error.hpp"
#include "automfm/path.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace automfm {

// Decimal number kept in its original spelling, so "0.1" is never rewritten.
// Grammar: -?[0-9]+(.[0-9]+)?
class Decimal
{
public:
    Decimal() = default;

    explicit Decimal(std::string text)
        : text_(std::move(text))
    {
        if (!is_valid(text_))
            throw ModelError("not a decimal number: '" + text_ + "'");
    }

    static bool is_valid(std::string_view text) noexcept
    {
        std::size_t i = 0;
        if (i < text.size() && text[i] == '-')
            ++i;
        const auto digits = [&] {
            const auto begin = i;
            while (i < text.size() && text[i] >= '0' && text[i] <= '9')
                ++i;
            return i > begin;
        };
        if (!digits())
            return false;
        if (i < text.size() && text[i] == '.') {
            ++i;
            if (!digits())
                return false;
        }
        return i == text.size();
    }

    static std::optional<Decimal> parse(std::string_view text)
    {
        if (!is_valid(text))
            return std::nullopt;
        return Decimal(std::string(text));
    }

    [[nodiscard]] const std::string& text() const noexcept { return text_; }

    [[nodiscard]] double value() const noexcept
    {
        double out = 0.0;
        std::from_chars(text_.data(), text_.data() + text_.size(), out);
        return out;
    }

    bool operator==(const Decimal&) const = default;

private:
    std::string text_ = "0";
};

// Millimetre triple.
struct Vec3
{
    Decimal x;
    Decimal y;
    Decimal z;

    bool operator==(const Vec3&) const = default;
};

// "(x,y,z)", the notation used in parameter tables.
inline std::string to_string(const Vec3& v)
{
    return "(" + v.x.text() + "," + v.y.text() + "," + v.z.text() + ")";
}

inline std::optional<Vec3> parse_vec3(std::string_view text)
{
    if (text.size() < 2 || text.front() != '(' || text.back() != ')')
        return std::nullopt;
    text = text.substr(1, text.size() - 2);
    std::array<std::optional<Decimal>, 3> parts;
    for (std::size_t i = 0; i < 3; ++i) {
        const auto comma = text.find(',');
        if ((i < 2) == (comma == std::string_view::npos))
            return std::nullopt;
        parts[i] = Decimal::parse(text.substr(0, comma));
        if (!parts[i])
            return std::nullopt;
        text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    }
    return Vec3{*parts[0], *parts[1], *parts[2]};
}

// ---------------------------------------------------------------------------
// Closed enumerations and their spellings

enum class Stage
{
    process_planning,
    logistics_planning,
    electrical_planning,
    mechanical_eng,
    electrical_eng,
    control_hmi_eng,
};

enum class Discipline
{
    mechanical,
    electrical,
    software,
    logistics,
    process,
};

enum class FunctionCategory
{
    material_flow,
    handling,
    waiting,
};

enum class PortDirection
{
    in,
    out,
};

enum class ComponentKind
{
    sensor,
    actuator,
    conveyor,
    switch_,
};

enum class IoDirection
{
    input,
    output,
};

enum class SubClass
{
    general,
    status,
    function,
    interface,
    control,
};

namespace detail {

template <typename E, std::size_t N>
struct EnumNames
{
    std::array<std::pair<E, std::string_view>, N> entries;

    [[nodiscard]] constexpr std::string_view name(E value) const
    {
        for (const auto& [e, text] : entries)
            if (e == value)
                return text;
        return {};
    }

    [[nodiscard]] constexpr std::optional<E> parse(std::string_view text) const
    {
        for (const auto& [e, name] : entries)
            if (name == text)
                return e;
        return std::nullopt;
    }
};

inline constexpr EnumNames<Stage, 6> stage_names{{{
    {Stage::process_planning, "process_planning"},
    {Stage::logistics_planning, "logistics_planning"},
    {Stage::electrical_planning, "electrical_planning"},
    {Stage::mechanical_eng, "mechanical_eng"},
    {Stage::electrical_eng, "electrical_eng"},
    {Stage::control_hmi_eng, "control_hmi_eng"},
}}};

inline constexpr EnumNames<Discipline, 5> discipline_names{{{
    {Discipline::mechanical, "mechanical"},
    {Discipline::electrical, "electrical"},
    {Discipline::software, "software"},
    {Discipline::logistics, "logistics"},
    {Discipline::process, "process"},
}}};

inline constexpr EnumNames<FunctionCategory, 3> category_names{{{
    {FunctionCategory::material_flow, "material_flow"},
    {FunctionCategory::handling, "handling"},
    {FunctionCategory::waiting, "waiting"},
}}};

inline constexpr EnumNames<PortDirection, 2> port_direction_names{{{
    {PortDirection::in, "in"},
    {PortDirection::out, "out"},
}}};

inline constexpr EnumNames<ComponentKind, 4> component_kind_names{{{
    {ComponentKind::sensor, "sensor"},
    {ComponentKind::actuator, "actuator"},
    {ComponentKind::conveyor, "conveyor"},
    {ComponentKind::switch_, "switch"},
}}};

inline constexpr EnumNames<IoDirection, 2> io_direction_names{{{
    {IoDirection::input, "input"},
    {IoDirection::output, "output"},
}}};

inline constexpr EnumNames<SubClass, 5> subclass_names{{{
    {SubClass::general, "general"},
    {SubClass::status, "status"},
    {SubClass::function, "function"},
    {SubClass::interface, "interface"},
    {SubClass::control, "control"},
}}};

}  // namespace detail

inline constexpr std::array<Stage, 6> all_stages{Stage::process_planning, Stage::logistics_planning,
                                                 Stage::electrical_planning, Stage::mechanical_eng,
                                                 Stage::electrical_eng, Stage::control_hmi_eng};

inline constexpr std::array<Discipline, 5> all_disciplines{Discipline::mechanical, Discipline::electrical,
                                                           Discipline::software, Discipline::logistics,
                                                           Discipline::process};

inline constexpr std::array<SubClass, 5> all_subclasses{SubClass::general, SubClass::status, SubClass::function,
                                                        SubClass::interface, SubClass::control};

inline std::string_view to_string(Stage v) { return detail::stage_names.name(v); }
inline std::string_view to_string(Discipline v) { return detail::discipline_names.name(v); }
inline std::string_view to_string(FunctionCategory v) { return detail::category_names.name(v); }
inline std::string_view to_string(PortDirection v) { return detail::port_direction_names.name(v); }
inline std::string_view to_string(ComponentKind v) { return detail::component_kind_names.name(v); }
inline std::string_view to_string(IoDirection v) { return detail::io_direction_names.name(v); }
inline std::string_view to_string(SubClass v) { return detail::subclass_names.name(v); }

inline std::optional<Stage> parse_stage(std::string_view s) { return detail::stage_names.parse(s); }
inline std::optional<Discipline> parse_discipline(std::string_view s) { return detail::discipline_names.parse(s); }
inline std::optional<FunctionCategory> parse_category(std::string_view s) { return detail::category_names.parse(s); }
inline std::optional<PortDirection> parse_port_direction(std::string_view s)
{
    return detail::port_direction_names.parse(s);
}
inline std::optional<ComponentKind> parse_component_kind(std::string_view s)
{
    return detail::component_kind_names.parse(s);
}
inline std::optional<IoDirection> parse_io_direction(std::string_view s) { return detail::io_direction_names.parse(s); }
inline std::optional<SubClass> parse_subclass(std::string_view s) { return detail::subclass_names.parse(s); }

inline std::size_t stage_rank(Stage s) { return static_cast<std::size_t>(s); }

// Switches are actuated components; conveyors are driven through an actuator.
constexpr bool is_actuating(ComponentKind kind) noexcept
{
    return kind == ComponentKind::actuator || kind == ComponentKind::switch_;
}

// ---------------------------------------------------------------------------
// Model types

// AutomationML role requirements and external interfaces carried by an element.
struct ExternalInterfaceRef
{
    std::string name;
    std::string interface_class;
    std::string ref_uri;

    bool operator==(const ExternalInterfaceRef&) const = default;
};

struct Semantics
{
    std::vector<std::string> roles;
    std::vector<ExternalInterfaceRef> interfaces;

    [[nodiscard]] bool empty() const noexcept { return roles.empty() && interfaces.empty(); }
    bool operator==(const Semantics&) const = default;
};

struct Parameter
{
    std::string name;
    std::string data_type;
    std::string value;
    std::string unit;

    bool operator==(const Parameter&) const = default;
};

struct Identification
{
    std::string name;
    std::string identifier;
    std::string module_type;
    Semantics semantics;

    bool operator==(const Identification&) const = default;
};

struct GeneralDescription
{
    Identification identification;
    std::optional<Vec3> main_dimensions;  // length, width, height
    std::vector<Parameter> static_attributes;
    Semantics semantics;

    bool operator==(const GeneralDescription&) const = default;
};

// Declaration only; no runtime values are stored.
struct RuntimeVariable
{
    std::string name;
    std::string data_type;
    std::string unit;
    std::string description;

    bool operator==(const RuntimeVariable&) const = default;
};

struct StatusDescription
{
    std::vector<RuntimeVariable> runtime_variables;
    Semantics semantics;

    bool operator==(const StatusDescription&) const = default;
};

struct LogisticFunction
{
    std::string name;
    FunctionCategory category = FunctionCategory::material_flow;
    std::optional<std::string> behavior_ref;  // document id
    Semantics semantics;

    bool operator==(const LogisticFunction&) const = default;
};

struct Route
{
    std::string from_port;
    std::string to_port;
    int priority = 0;

    bool operator==(const Route&) const = default;
};

struct FunctionDescription
{
    std::vector<LogisticFunction> logistic_functions;
    std::vector<Route> routes;
    Semantics semantics;

    bool operator==(const FunctionDescription&) const = default;
};

struct Port
{
    std::string name;
    PortDirection direction = PortDirection::in;
    std::optional<Vec3> position;
    Semantics semantics;

    bool operator==(const Port&) const = default;
};

struct BoundingBox
{
    Vec3 min;
    Vec3 max;

    bool operator==(const BoundingBox&) const = default;
};

struct InteractionSpace
{
    std::string name;
    BoundingBox box;

    bool operator==(const InteractionSpace&) const = default;
};

struct InterfaceDescription
{
    std::vector<Port> ports;
    std::vector<InteractionSpace> interaction_spaces;
    Semantics semantics;

    bool operator==(const InterfaceDescription&) const = default;
};

struct ControlFunction
{
    std::string name;
    std::string language_tag;  // IEC 61131-3 language name, free text
    std::optional<std::string> body_ref;
    Semantics semantics;

    bool operator==(const ControlFunction&) const = default;
};

struct ControlVariable
{
    std::string name;
    std::string data_type;
    std::string scope;

    bool operator==(const ControlVariable&) const = default;
};

struct IoMapEntry
{
    std::string component_path;
    std::string logical_address;  // e.g. %I0.1
    std::string variable_name;
    std::string data_type;
    IoDirection direction = IoDirection::input;

    bool operator==(const IoMapEntry&) const = default;
};

struct Platform
{
    std::string controller_type;
    std::string bus_coupler_type;

    bool operator==(const Platform&) const = default;
};

struct ControlDescription
{
    std::vector<ControlFunction> control_functions;
    std::vector<ControlVariable> variables;
    std::vector<IoMapEntry> io_mapping;
    Platform platform;
    Semantics semantics;

    bool operator==(const ControlDescription&) const = default;
};

struct Component
{
    std::string name;
    ComponentKind kind = ComponentKind::sensor;
    std::string component_type;
    std::optional<Vec3> position;
    std::optional<Vec3> main_dimensions;
    std::optional<Decimal> latency;  // seconds
    Semantics semantics;

    bool operator==(const Component&) const = default;
};

struct DocumentReference
{
    std::string id;
    Discipline discipline = Discipline::mechanical;
    Stage stage = Stage::process_planning;
    std::string name;
    std::string server_path;  // stored verbatim
    std::string assigned_element;

    bool operator==(const DocumentReference&) const = default;
};

struct CrossReference
{
    std::string source;
    std::string target;
    std::string kind;

    bool operator==(const CrossReference&) const = default;
};

struct ModuleModel
{
    std::string id;
    std::string name;
    Semantics semantics;
    GeneralDescription general;
    StatusDescription status;
    FunctionDescription function;
    InterfaceDescription module_interface;
    ControlDescription control;
    std::vector<Component> components;
    std::vector<DocumentReference> documents;
    std::vector<CrossReference> cross_refs;

    bool operator==(const ModuleModel&) const = default;
};

// Role given to a module root by new_module; CAEX files identify the module
// root by a non-empty role list.
inline constexpr std::string_view default_module_role = "AutomationMLBaseRoleClassLib";

// ---------------------------------------------------------------------------
// Construction

inline ModuleModel new_module(std::string id, std::string name)
{
    if (id.empty())
        throw ModelError("module id must not be empty");
    if (!is_valid_path(id))
        throw ModelError("module id '" + id + "' is not a valid element path");
    ModuleModel model;
    model.id = std::move(id);
    model.name = std::move(name);
    model.semantics.roles.emplace_back(default_module_role);
    return model;
}

// A set of modules with unique ids.
class Project
{
public:
    const ModuleModel& add(ModuleModel model)
    {
        if (find(model.id))
            throw ModelError("duplicate module id '" + model.id + "'");
        modules_.push_back(std::move(model));
        return modules_.back();
    }

    const ModuleModel& create(std::string id, std::string name) { return add(new_module(std::move(id), std::move(name))); }

    [[nodiscard]] const ModuleModel* find(std::string_view id) const
    {
        const auto it = std::find_if(modules_.begin(), modules_.end(), [&](const auto& m) { return m.id == id; });
        return it == modules_.end() ? nullptr : &*it;
    }

    [[nodiscard]] const std::vector<ModuleModel>& modules() const noexcept { return modules_; }

private:
    std::vector<ModuleModel> modules_;
};

namespace detail {

template <typename T>
auto find_named(std::vector<T>& items, std::string_view name)
{
    return std::find_if(items.begin(), items.end(), [&](const T& item) { return item.name == name; });
}

template <typename T>
const T* find_named(const std::vector<T>& items, std::string_view name)
{
    const auto it = std::find_if(items.begin(), items.end(), [&](const T& item) { return item.name == name; });
    return it == items.end() ? nullptr : &*it;
}

template <typename T>
void insert_named(std::vector<T>& items, T item, std::string_view what, const ModuleModel& model)
{
    if (!is_valid_entry_name(item.name))
        throw ModelError(std::string(what) + " name '" + item.name + "' is not a valid path segment");
    if (find_named(std::as_const(items), item.name))
        throw ModelError(std::string(what) + " '" + item.name + "' already exists in module '" + model.id + "'");
    items.push_back(std::move(item));
}

inline void require_positive(const Vec3& v, std::string_view what)
{
    if (v.x.value() <= 0.0 || v.y.value() <= 0.0 || v.z.value() <= 0.0)
        throw ModelError(std::string(what) + " must be strictly positive, got " + to_string(v));
}

}  // namespace detail

inline ModuleModel add_component(ModuleModel model, Component component)
{
    if (component.latency && component.latency->value() < 0.0)
        throw ModelError("latency of '" + component.name + "' must not be negative");
    if (component.main_dimensions)
        detail::require_positive(*component.main_dimensions, "main dimensions of '" + component.name + "'");
    detail::insert_named(model.components, std::move(component), "component", model);
    return model;
}

inline ModuleModel add_static_attribute(ModuleModel model, Parameter p)
{
    detail::insert_named(model.general.static_attributes, std::move(p), "static attribute", model);
    return model;
}

inline ModuleModel add_runtime_variable(ModuleModel model, RuntimeVariable v)
{
    detail::insert_named(model.status.runtime_variables, std::move(v), "runtime variable", model);
    return model;
}

inline ModuleModel add_logistic_function(ModuleModel model, LogisticFunction f)
{
    detail::insert_named(model.function.logistic_functions, std::move(f), "logistic function", model);
    return model;
}

inline ModuleModel add_route(ModuleModel model, Route r)
{
    model.function.routes.push_back(std::move(r));
    return model;
}

inline ModuleModel add_port(ModuleModel model, Port p)
{
    detail::insert_named(model.module_interface.ports, std::move(p), "port", model);
    return model;
}

inline ModuleModel add_interaction_space(ModuleModel model, InteractionSpace s)
{
    detail::insert_named(model.module_interface.interaction_spaces, std::move(s), "interaction space", model);
    return model;
}

inline ModuleModel add_control_function(ModuleModel model, ControlFunction f)
{
    detail::insert_named(model.control.control_functions, std::move(f), "control function", model);
    return model;
}

inline ModuleModel add_variable(ModuleModel model, ControlVariable v)
{
    detail::insert_named(model.control.variables, std::move(v), "control variable", model);
    return model;
}

inline ModuleModel add_io_mapping(ModuleModel model, IoMapEntry e)
{
    model.control.io_mapping.push_back(std::move(e));
    return model;
}

inline ModuleModel add_document(ModuleModel model, DocumentReference doc)
{
    if (!is_valid_entry_name(doc.id))
        throw ModelError("document id '" + doc.id + "' is not a valid path segment");
    if (std::any_of(model.documents.begin(), model.documents.end(), [&](const auto& d) { return d.id == doc.id; }))
        throw ModelError("document '" + doc.id + "' already exists in module '" + model.id + "'");
    model.documents.push_back(std::move(doc));
    return model;
}

// Endpoints may dangle at insert time; they are checked later by check_links.
inline ModuleModel add_cross_ref(ModuleModel model, std::string source, std::string target, std::string kind)
{
    split_path(source);
    split_path(target);
    if (source == target)
        throw ModelError("cross reference source and target are identical: '" + source + "'");
    CrossReference ref{std::move(source), std::move(target), std::move(kind)};
    if (std::find(model.cross_refs.begin(), model.cross_refs.end(), ref) == model.cross_refs.end())
        model.cross_refs.push_back(std::move(ref));
    return model;
}

// ---------------------------------------------------------------------------
// Addressing

enum class ElementKind
{
    module,
    general,
    identification,
    static_attribute,
    status,
    runtime_variable,
    function,
    logistic_function,
    route,
    interface,
    port,
    interaction_space,
    control,
    control_function,
    variable,
    io_mapping,
    platform,
    component,
    document,
    cross_reference,
    collection,  // a list container such as ".../components"; addressable but not an element
};

// Class selector used by mapping rule tables, e.g. "Control.ControlFunction".
inline std::string_view class_selector(ElementKind kind)
{
    switch (kind) {
    case ElementKind::module: return "Module";
    case ElementKind::general: return "General";
    case ElementKind::identification: return "General.Identification";
    case ElementKind::static_attribute: return "General.StaticAttribute";
    case ElementKind::status: return "Status";
    case ElementKind::runtime_variable: return "Status.RuntimeVariable";
    case ElementKind::function: return "Function";
    case ElementKind::logistic_function: return "Function.LogisticFunction";
    case ElementKind::route: return "Function.Route";
    case ElementKind::interface: return "Interface";
    case ElementKind::port: return "Interface.Port";
    case ElementKind::interaction_space: return "Interface.InteractionSpace";
    case ElementKind::control: return "Control";
    case ElementKind::control_function: return "Control.ControlFunction";
    case ElementKind::variable: return "Control.Variable";
    case ElementKind::io_mapping: return "Control.IoMapping";
    case ElementKind::platform: return "Control.Platform";
    case ElementKind::component: return "Component";
    case ElementKind::document: return "Document";
    case ElementKind::cross_reference: return "CrossReference";
    case ElementKind::collection: return "Collection";
    }
    return {};
}

using ElementPointer =
    std::variant<std::monostate, const ModuleModel*, const GeneralDescription*, const Identification*,
                 const Parameter*, const StatusDescription*, const RuntimeVariable*, const FunctionDescription*,
                 const LogisticFunction*, const Route*, const InterfaceDescription*, const Port*,
                 const InteractionSpace*, const ControlDescription*, const ControlFunction*, const ControlVariable*,
                 const IoMapEntry*, const Platform*, const Component*, const DocumentReference*,
                 const CrossReference*>;

// Non-owning view of one addressed element. Valid while the model lives.
struct ElementHandle
{
    ElementKind kind = ElementKind::module;
    std::string path;  // canonical path (names rather than indices where entries are named)
    ElementPointer target;

    [[nodiscard]] const Semantics* semantics() const
    {
        return std::visit(
            [](const auto& p) -> const Semantics* {
                if constexpr (requires { p->semantics; })
                    return &p->semantics;
                else
                    return nullptr;
            },
            target);
    }

    template <typename T>
    [[nodiscard]] const T* get() const
    {
        const auto* p = std::get_if<const T*>(&target);
        return p ? *p : nullptr;
    }

    bool operator==(const ElementHandle&) const = default;
};

namespace detail {

template <typename T>
std::optional<std::pair<std::size_t, const T*>> lookup_entry(const std::vector<T>& items, std::string_view segment)
{
    if constexpr (requires(const T& t) { t.name; }) {
        for (std::size_t i = 0; i < items.size(); ++i)
            if (items[i].name == segment)
                return std::pair{i, &items[i]};
        if (!is_index_segment(segment))
            return std::nullopt;
    }
    const auto index = parse_index(segment);
    if (!index || *index >= items.size())
        return std::nullopt;
    return std::pair{*index, &items[*index]};
}

template <typename T>
std::string entry_segment(const T& item, std::size_t index)
{
    if constexpr (requires { item.name; })
        return item.name;
    else
        return std::to_string(index);
}

template <typename T>
std::optional<ElementHandle> resolve_list(const std::vector<T>& items, const std::string& base,
                                          const std::vector<std::string>& rest, std::size_t at, ElementKind kind)
{
    if (rest.size() == at)
        return ElementHandle{ElementKind::collection, base, std::monostate{}};
    if (rest.size() != at + 1)
        return std::nullopt;
    const auto found = lookup_entry(items, rest[at]);
    if (!found)
        return std::nullopt;
    return ElementHandle{kind, base + "/" + entry_segment(*found->second, found->first), found->second};
}

}  // namespace detail

inline std::string subclass_path(const ModuleModel& model, SubClass sc)
{
    return model.id + "/" + std::string(to_string(sc));
}

inline std::string component_path(const ModuleModel& model, std::string_view name)
{
    return model.id + "/components/" + std::string(name);
}

// Resolves a path against the model. Not-found is a value; malformed syntax throws PathError.
inline std::optional<ElementHandle> resolve(const ModuleModel& model, std::string_view path)
{
    const auto segments = split_path(path);
    const auto id_segments = split_path(model.id);
    if (segments.size() < id_segments.size() ||
        !std::equal(id_segments.begin(), id_segments.end(), segments.begin()))
        return std::nullopt;
    const std::vector<std::string> rest(segments.begin() + static_cast<std::ptrdiff_t>(id_segments.size()),
                                        segments.end());
    if (rest.empty())
        return ElementHandle{ElementKind::module, model.id, &model};

    const std::string& head = rest[0];
    const std::string base = model.id + "/" + head;
    const auto list = [&](const auto& items, std::string_view name, ElementKind kind) -> std::optional<ElementHandle> {
        if (rest.size() < 2 || rest[1] != name)
            return std::nullopt;
        return detail::resolve_list(items, base + "/" + std::string(name), rest, 2, kind);
    };

    if (head == "general") {
        const auto& g = model.general;
        if (rest.size() == 1)
            return ElementHandle{ElementKind::general, base, &g};
        if (rest.size() == 2 && rest[1] == "identification")
            return ElementHandle{ElementKind::identification, base + "/identification", &g.identification};
        return list(g.static_attributes, "static_attributes", ElementKind::static_attribute);
    }
    if (head == "status") {
        if (rest.size() == 1)
            return ElementHandle{ElementKind::status, base, &model.status};
        return list(model.status.runtime_variables, "runtime_variables", ElementKind::runtime_variable);
    }
    if (head == "function") {
        const auto& f = model.function;
        if (rest.size() == 1)
            return ElementHandle{ElementKind::function, base, &f};
        if (auto h = list(f.logistic_functions, "logistic_functions", ElementKind::logistic_function))
            return h;
        return list(f.routes, "routes", ElementKind::route);
    }
    if (head == "interface") {
        const auto& i = model.module_interface;
        if (rest.size() == 1)
            return ElementHandle{ElementKind::interface, base, &i};
        if (auto h = list(i.ports, "ports", ElementKind::port))
            return h;
        return list(i.interaction_spaces, "interaction_spaces", ElementKind::interaction_space);
    }
    if (head == "control") {
        const auto& c = model.control;
        if (rest.size() == 1)
            return ElementHandle{ElementKind::control, base, &c};
        if (rest.size() == 2 && rest[1] == "platform")
            return ElementHandle{ElementKind::platform, base + "/platform", &c.platform};
        if (auto h = list(c.control_functions, "control_functions", ElementKind::control_function))
            return h;
        if (auto h = list(c.variables, "variables", ElementKind::variable))
            return h;
        return list(c.io_mapping, "io_mapping", ElementKind::io_mapping);
    }
    if (head == "components")
        return detail::resolve_list(model.components, base, rest, 1, ElementKind::component);
    if (head == "cross_refs")
        return detail::resolve_list(model.cross_refs, base, rest, 1, ElementKind::cross_reference);
    if (head == "documents") {
        if (rest.size() == 1)
            return ElementHandle{ElementKind::collection, base, std::monostate{}};
        if (rest.size() != 2)
            return std::nullopt;
        for (const auto& doc : model.documents)
            if (doc.id == rest[1])
                return ElementHandle{ElementKind::document, base + "/" + doc.id, &doc};
        return std::nullopt;
    }
    return std::nullopt;
}

inline bool resolves(const ModuleModel& model, std::string_view path)
{
    try {
        return resolve(model, path).has_value();
    }
    catch (const PathError&) {
        return false;
    }
}

namespace detail {

template <typename T>
void push_entries(std::vector<ElementHandle>& out, const std::vector<T>& items, const std::string& base,
                  ElementKind kind)
{
    for (std::size_t i = 0; i < items.size(); ++i)
        out.push_back({kind, base + "/" + entry_segment(items[i], i), &items[i]});
}

inline void subclass_elements(std::vector<ElementHandle>& out, const ModuleModel& m, SubClass sc)
{
    const auto base = subclass_path(m, sc);
    switch (sc) {
    case SubClass::general:
        out.push_back({ElementKind::identification, base + "/identification", &m.general.identification});
        push_entries(out, m.general.static_attributes, base + "/static_attributes", ElementKind::static_attribute);
        break;
    case SubClass::status:
        push_entries(out, m.status.runtime_variables, base + "/runtime_variables", ElementKind::runtime_variable);
        break;
    case SubClass::function:
        push_entries(out, m.function.logistic_functions, base + "/logistic_functions",
                     ElementKind::logistic_function);
        push_entries(out, m.function.routes, base + "/routes", ElementKind::route);
        break;
    case SubClass::interface:
        push_entries(out, m.module_interface.ports, base + "/ports", ElementKind::port);
        push_entries(out, m.module_interface.interaction_spaces, base + "/interaction_spaces",
                     ElementKind::interaction_space);
        break;
    case SubClass::control:
        push_entries(out, m.control.control_functions, base + "/control_functions", ElementKind::control_function);
        push_entries(out, m.control.variables, base + "/variables", ElementKind::variable);
        push_entries(out, m.control.io_mapping, base + "/io_mapping", ElementKind::io_mapping);
        out.push_back({ElementKind::platform, base + "/platform", &m.control.platform});
        break;
    }
}

inline ElementHandle subclass_handle(const ModuleModel& m, SubClass sc)
{
    const auto path = subclass_path(m, sc);
    switch (sc) {
    case SubClass::general: return {ElementKind::general, path, &m.general};
    case SubClass::status: return {ElementKind::status, path, &m.status};
    case SubClass::function: return {ElementKind::function, path, &m.function};
    case SubClass::interface: return {ElementKind::interface, path, &m.module_interface};
    case SubClass::control: return {ElementKind::control, path, &m.control};
    }
    return {};
}

}  // namespace detail

// Elements beneath one sub-class container, in document order.
inline std::vector<ElementHandle> elements_of_class(const ModuleModel& model, SubClass sc)
{
    std::vector<ElementHandle> out;
    detail::subclass_elements(out, model, sc);
    return out;
}

// Every element of the model in document order, root first.
inline std::vector<ElementHandle> all_elements(const ModuleModel& model)
{
    std::vector<ElementHandle> out{{ElementKind::module, model.id, &model}};
    for (const auto sc : all_subclasses) {
        out.push_back(detail::subclass_handle(model, sc));
        detail::subclass_elements(out, model, sc);
    }
    detail::push_entries(out, model.components, model.id + "/components", ElementKind::component);
    for (const auto& doc : model.documents)
        out.push_back({ElementKind::document, model.id + "/documents/" + doc.id, &doc});
    detail::push_entries(out, model.cross_refs, model.id + "/cross_refs", ElementKind::cross_reference);
    return out;
}

// Semantics carried by the element at path, or nullptr if that element has none.
inline Semantics* mutable_semantics(ModuleModel& model, std::string_view path)
{
    const auto handle = resolve(model, path);
    if (!handle)
        return nullptr;
    return const_cast<Semantics*>(handle->semantics());
}

// Removes a list entry (component, port, document, io_mapping entry, ...).
// Sub-class containers, the identification and the platform cannot be removed.
inline ModuleModel remove_element(ModuleModel model, std::string_view path)
{
    const auto handle = resolve(model, path);
    if (!handle)
        throw ModelError("no element at '" + std::string(path) + "'");
    const auto erase = [&](auto& items) {
        using T = typename std::decay_t<decltype(items)>::value_type;
        const auto* target = handle->template get<T>();
        items.erase(items.begin() + (target - items.data()));
    };
    switch (handle->kind) {
    case ElementKind::static_attribute: erase(model.general.static_attributes); break;
    case ElementKind::runtime_variable: erase(model.status.runtime_variables); break;
    case ElementKind::logistic_function: erase(model.function.logistic_functions); break;
    case ElementKind::route: erase(model.function.routes); break;
    case ElementKind::port: erase(model.module_interface.ports); break;
    case ElementKind::interaction_space: erase(model.module_interface.interaction_spaces); break;
    case ElementKind::control_function: erase(model.control.control_functions); break;
    case ElementKind::variable: erase(model.control.variables); break;
    case ElementKind::io_mapping: erase(model.control.io_mapping); break;
    case ElementKind::component: erase(model.components); break;
    case ElementKind::document: erase(model.documents); break;
    case ElementKind::cross_reference: erase(model.cross_refs); break;
    default: throw ModelError("element '" + std::string(path) + "' cannot be removed");
    }
    return model;
}

inline const Component* find_component(const ModuleModel& model, std::string_view name)
{
    return detail::find_named(model.components, name);
}

inline const DocumentReference* find_document(const ModuleModel& model, std::string_view id)
{
    const auto it = std::find_if(model.documents.begin(), model.documents.end(), [&](const auto& d) { return d.id == id; });
    return it == model.documents.end() ? nullptr : &*it;
}

}  // namespace automfm
