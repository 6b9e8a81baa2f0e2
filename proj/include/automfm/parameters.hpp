#pragma once

// Scalar parameters of model elements, addressed as (element path, parameter
// name). This is the catalog shared by completeness checks, the dependency
// workload metric and the tabular exchange.

#include "automfm/metamodel.hpp"

#include <charconv>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace automfm {

struct ParameterSlot
{
    std::string element_path;
    std::string name;
    std::string value;  // empty when unset
    std::string unit;

    bool operator==(const ParameterSlot&) const = default;
};

enum class WriteStatus
{
    ok,
    unknown_element,
    unknown_parameter,
    bad_value,
};

namespace detail {

inline std::string optional_text(const std::optional<std::string>& s) { return s.value_or(""); }
inline std::string optional_vec(const std::optional<Vec3>& v) { return v ? to_string(*v) : std::string{}; }

// Field descriptor: reads a value as text and writes it back from text.
template <typename T>
struct Field
{
    std::string_view name;
    std::string_view unit;
    std::function<std::string(const T&)> get;
    std::function<bool(T&, const std::string&)> set;
};

inline bool set_vec(std::optional<Vec3>& slot, const std::string& text)
{
    auto v = parse_vec3(text);
    if (!v)
        return false;
    slot = *v;
    return true;
}

template <typename E, typename Parse>
bool set_enum(E& slot, const std::string& text, Parse&& parse)
{
    auto e = parse(text);
    if (!e)
        return false;
    slot = *e;
    return true;
}

// Elements without scalar parameters get the empty list.
template <typename T>
const std::vector<Field<T>>& fields()
{
    static const std::vector<Field<T>> none;
    return none;
}

#define AUTOMFM_TEXT_FIELD(Type, member)                                                                             \
    Field<Type>                                                                                                      \
    {                                                                                                                \
        #member, "", [](const Type& o) { return o.member; }, [](Type& o, const std::string& v) {                     \
            o.member = v;                                                                                            \
            return true;                                                                                             \
        }                                                                                                            \
    }

template <>
inline const std::vector<Field<GeneralDescription>>& fields<GeneralDescription>()
{
    static const std::vector<Field<GeneralDescription>> f{
        {"main_dimensions", "mm", [](const GeneralDescription& g) { return optional_vec(g.main_dimensions); },
         [](GeneralDescription& g, const std::string& v) { return set_vec(g.main_dimensions, v); }},
    };
    return f;
}

template <>
inline const std::vector<Field<Identification>>& fields<Identification>()
{
    static const std::vector<Field<Identification>> f{AUTOMFM_TEXT_FIELD(Identification, name),
                                                      AUTOMFM_TEXT_FIELD(Identification, identifier),
                                                      AUTOMFM_TEXT_FIELD(Identification, module_type)};
    return f;
}

template <>
inline const std::vector<Field<Parameter>>& fields<Parameter>()
{
    static const std::vector<Field<Parameter>> f{AUTOMFM_TEXT_FIELD(Parameter, value)};
    return f;
}

template <>
inline const std::vector<Field<RuntimeVariable>>& fields<RuntimeVariable>()
{
    static const std::vector<Field<RuntimeVariable>> f{AUTOMFM_TEXT_FIELD(RuntimeVariable, data_type),
                                                       AUTOMFM_TEXT_FIELD(RuntimeVariable, unit),
                                                       AUTOMFM_TEXT_FIELD(RuntimeVariable, description)};
    return f;
}

template <>
inline const std::vector<Field<LogisticFunction>>& fields<LogisticFunction>()
{
    static const std::vector<Field<LogisticFunction>> f{
        {"category", "", [](const LogisticFunction& o) { return std::string(to_string(o.category)); },
         [](LogisticFunction& o, const std::string& v) { return set_enum(o.category, v, parse_category); }},
        {"behavior_ref", "", [](const LogisticFunction& o) { return optional_text(o.behavior_ref); },
         [](LogisticFunction& o, const std::string& v) {
             o.behavior_ref = v;
             return true;
         }},
    };
    return f;
}

template <>
inline const std::vector<Field<Route>>& fields<Route>()
{
    static const std::vector<Field<Route>> f{
        AUTOMFM_TEXT_FIELD(Route, from_port),
        AUTOMFM_TEXT_FIELD(Route, to_port),
        {"priority", "", [](const Route& o) { return std::to_string(o.priority); },
         [](Route& o, const std::string& v) {
             int out = 0;
             const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
             if (ec != std::errc{} || ptr != v.data() + v.size())
                 return false;
             o.priority = out;
             return true;
         }},
    };
    return f;
}

template <>
inline const std::vector<Field<Port>>& fields<Port>()
{
    static const std::vector<Field<Port>> f{
        {"direction", "", [](const Port& o) { return std::string(to_string(o.direction)); },
         [](Port& o, const std::string& v) { return set_enum(o.direction, v, parse_port_direction); }},
        {"position", "mm", [](const Port& o) { return optional_vec(o.position); },
         [](Port& o, const std::string& v) { return set_vec(o.position, v); }},
    };
    return f;
}

template <>
inline const std::vector<Field<InteractionSpace>>& fields<InteractionSpace>()
{
    static const std::vector<Field<InteractionSpace>> f{
        {"min", "mm", [](const InteractionSpace& o) { return to_string(o.box.min); },
         [](InteractionSpace& o, const std::string& v) {
             auto p = parse_vec3(v);
             if (p)
                 o.box.min = *p;
             return p.has_value();
         }},
        {"max", "mm", [](const InteractionSpace& o) { return to_string(o.box.max); },
         [](InteractionSpace& o, const std::string& v) {
             auto p = parse_vec3(v);
             if (p)
                 o.box.max = *p;
             return p.has_value();
         }},
    };
    return f;
}

template <>
inline const std::vector<Field<ControlFunction>>& fields<ControlFunction>()
{
    static const std::vector<Field<ControlFunction>> f{
        AUTOMFM_TEXT_FIELD(ControlFunction, language_tag),
        {"body_ref", "", [](const ControlFunction& o) { return optional_text(o.body_ref); },
         [](ControlFunction& o, const std::string& v) {
             o.body_ref = v;
             return true;
         }},
    };
    return f;
}

template <>
inline const std::vector<Field<ControlVariable>>& fields<ControlVariable>()
{
    static const std::vector<Field<ControlVariable>> f{AUTOMFM_TEXT_FIELD(ControlVariable, data_type),
                                                       AUTOMFM_TEXT_FIELD(ControlVariable, scope)};
    return f;
}

template <>
inline const std::vector<Field<IoMapEntry>>& fields<IoMapEntry>()
{
    static const std::vector<Field<IoMapEntry>> f{
        AUTOMFM_TEXT_FIELD(IoMapEntry, component_path),
        AUTOMFM_TEXT_FIELD(IoMapEntry, logical_address),
        AUTOMFM_TEXT_FIELD(IoMapEntry, variable_name),
        AUTOMFM_TEXT_FIELD(IoMapEntry, data_type),
        {"direction", "", [](const IoMapEntry& o) { return std::string(to_string(o.direction)); },
         [](IoMapEntry& o, const std::string& v) { return set_enum(o.direction, v, parse_io_direction); }},
    };
    return f;
}

template <>
inline const std::vector<Field<Platform>>& fields<Platform>()
{
    static const std::vector<Field<Platform>> f{AUTOMFM_TEXT_FIELD(Platform, controller_type),
                                                AUTOMFM_TEXT_FIELD(Platform, bus_coupler_type)};
    return f;
}

template <>
inline const std::vector<Field<Component>>& fields<Component>()
{
    static const std::vector<Field<Component>> f{
        {"kind", "", [](const Component& o) { return std::string(to_string(o.kind)); },
         [](Component& o, const std::string& v) { return set_enum(o.kind, v, parse_component_kind); }},
        AUTOMFM_TEXT_FIELD(Component, component_type),
        {"position", "mm", [](const Component& o) { return optional_vec(o.position); },
         [](Component& o, const std::string& v) { return set_vec(o.position, v); }},
        {"main_dimensions", "mm", [](const Component& o) { return optional_vec(o.main_dimensions); },
         [](Component& o, const std::string& v) { return set_vec(o.main_dimensions, v); }},
        {"latency", "s", [](const Component& o) { return o.latency ? o.latency->text() : std::string{}; },
         [](Component& o, const std::string& v) {
             auto d = Decimal::parse(v);
             if (!d || d->value() < 0.0)
                 return false;
             o.latency = *d;
             return true;
         }},
    };
    return f;
}

#undef AUTOMFM_TEXT_FIELD

// Calls fn(fields, object) for the element behind handle. Documents, cross
// references and containers have no scalar parameters and are skipped.
template <typename F>
bool visit_fields(const ElementHandle& handle, F&& fn)
{
    return std::visit(
        [&](const auto& p) -> bool {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, std::monostate>) {
                return false;
            }
            else {
                using T = std::remove_cv_t<std::remove_pointer_t<P>>;
                const auto& f = fields<T>();
                if (f.empty())
                    return false;
                fn(f, *p);
                return true;
            }
        },
        handle.target);
}

}  // namespace detail

// Every scalar parameter of the model, in element document order.
inline std::vector<ParameterSlot> parameter_catalog(const ModuleModel& model)
{
    std::vector<ParameterSlot> out;
    for (const auto& element : all_elements(model)) {
        detail::visit_fields(element, [&](const auto& fields, const auto& object) {
            for (const auto& f : fields)
                out.push_back({element.path, std::string(f.name), f.get(object), std::string(f.unit)});
        });
    }
    return out;
}

// Value of one parameter; nullopt if the element or parameter does not exist.
inline std::optional<ParameterSlot> parameter(const ModuleModel& model, std::string_view path, std::string_view name)
{
    const auto handle = resolve(model, path);
    if (!handle)
        return std::nullopt;
    std::optional<ParameterSlot> out;
    detail::visit_fields(*handle, [&](const auto& fields, const auto& object) {
        for (const auto& f : fields)
            if (f.name == name)
                out = ParameterSlot{handle->path, std::string(f.name), f.get(object), std::string(f.unit)};
    });
    return out;
}

inline WriteStatus write_parameter(ModuleModel& model, std::string_view path, std::string_view name,
                                   const std::string& value)
{
    std::optional<ElementHandle> handle;
    try {
        handle = resolve(model, path);
    }
    catch (const PathError&) {
        return WriteStatus::unknown_element;
    }
    if (!handle)
        return WriteStatus::unknown_element;
    auto status = WriteStatus::unknown_parameter;
    detail::visit_fields(*handle, [&](const auto& fields, const auto& object) {
        using T = std::decay_t<decltype(object)>;
        // The handle points into model, which is mutable here.
        auto& target = const_cast<T&>(object);
        for (const auto& f : fields)
            if (f.name == name)
                status = f.set(target, value) ? WriteStatus::ok : WriteStatus::bad_value;
    });
    return status;
}

}  // namespace automfm
