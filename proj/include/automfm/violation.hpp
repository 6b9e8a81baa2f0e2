#pragma once

#include "automfm/metamodel.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace automfm {

enum class Severity
{
    error,
    warning,
    info,
};

inline std::string_view to_string(Severity s)
{
    switch (s) {
    case Severity::error: return "error";
    case Severity::warning: return "warning";
    case Severity::info: return "info";
    }
    return {};
}

// One finding of a check. rule_id is drawn from rule_registry.
struct Violation
{
    std::string rule_id;
    Severity severity = Severity::error;
    std::string element_path;
    std::string message;
    std::optional<Stage> stage;

    bool operator==(const Violation&) const = default;
};

struct RuleInfo
{
    std::string_view id;
    Severity severity;
    std::string_view summary;
};

// Every rule id the library can emit.
inline constexpr std::array rule_registry{
    RuleInfo{"caex.missing-container", Severity::warning, "a description sub-class element is absent"},
    RuleInfo{"caex.unknown-element", Severity::warning, "an InternalElement has no meaning at its position"},
    RuleInfo{"caex.unknown-attribute", Severity::warning, "an Attribute has no meaning on its element"},
    RuleInfo{"caex.ignored-semantics", Severity::warning, "roles or interfaces on an element that cannot carry them"},
    RuleInfo{"caex.bad-value", Severity::error, "an attribute value does not parse as its field type"},
    RuleInfo{"caex.bad-name", Severity::error, "an entry name is not a valid path segment"},
    RuleInfo{"caex.self-link", Severity::error, "an InternalLink whose sides are identical"},
    RuleInfo{"caex.duplicate-link", Severity::info, "a repeated InternalLink collapsed into one reference"},
    RuleInfo{"link.dangling-source", Severity::error, "cross reference source does not resolve"},
    RuleInfo{"link.dangling-target", Severity::error, "cross reference target does not resolve"},
    RuleInfo{"link.dangling-assignment", Severity::error, "document assigned to an element that does not resolve"},
    RuleInfo{"struct.route-port", Severity::error, "route names a port that is not declared"},
    RuleInfo{"struct.io-component", Severity::error, "io_mapping entry names a component that does not exist"},
    RuleInfo{"struct.io-variable", Severity::error, "io_mapping entry names an undeclared control variable"},
    RuleInfo{"struct.io-direction", Severity::error, "sensor mapped as output or actuator mapped as input"},
    RuleInfo{"struct.behavior-ref", Severity::error, "logistic function refers to an unknown document"},
    RuleInfo{"struct.body-ref", Severity::error, "control function refers to an unknown document"},
    RuleInfo{"struct.nonpositive-dimension", Severity::error, "main dimensions must be strictly positive"},
    RuleInfo{"struct.negative-latency", Severity::error, "component latency is negative"},
    RuleInfo{"struct.bounding-box", Severity::error, "interaction space with min greater than max"},
    RuleInfo{"struct.duplicate-variable", Severity::error, "runtime variable name declared twice"},
    RuleInfo{"complete.missing-parameter", Severity::error, "a parameter required by the stage is empty"},
    RuleInfo{"mapping.illegal-role", Severity::error, "role identifier outside the permitted set"},
    RuleInfo{"mapping.illegal-interface", Severity::error, "interface identifier outside the permitted set"},
    RuleInfo{"mapping.missing-role", Severity::error, "element of a covered class carries no role"},
    RuleInfo{"mapping.uncovered-class", Severity::info, "element class not covered by the rule table"},
    RuleInfo{"assign.reassigned", Severity::info, "document moved from a previous assignment"},
    RuleInfo{"exchange.unknown-element", Severity::error, "table row addresses an element that does not exist"},
    RuleInfo{"exchange.unknown-parameter", Severity::error, "table row names a parameter the element lacks"},
    RuleInfo{"exchange.bad-value", Severity::error, "table value does not parse as the parameter type"},
    RuleInfo{"exchange.read-only", Severity::error, "table row targets a parameter that cannot be written"},
    RuleInfo{"exchange.duplicate-row", Severity::error, "element_path and parameter_name repeated in a table"},
};

inline const RuleInfo* find_rule(std::string_view id)
{
    const auto it = std::find_if(rule_registry.begin(), rule_registry.end(), [&](const auto& r) { return r.id == id; });
    return it == rule_registry.end() ? nullptr : &*it;
}

// Builds a violation with the registry severity for id.
inline Violation make_violation(std::string_view id, std::string path, std::string message,
                                std::optional<Stage> stage = std::nullopt)
{
    const auto* rule = find_rule(id);
    return Violation{std::string(id), rule ? rule->severity : Severity::error, std::move(path), std::move(message),
                     stage};
}

inline bool has_errors(const std::vector<Violation>& violations)
{
    return std::any_of(violations.begin(), violations.end(),
                       [](const auto& v) { return v.severity == Severity::error; });
}

// "SEVERITY rule_id element_path: message"
inline std::string format_text(const Violation& v)
{
    std::string severity(to_string(v.severity));
    std::transform(severity.begin(), severity.end(), severity.begin(), [](unsigned char c) { return std::toupper(c); });
    return severity + " " + v.rule_id + " " + v.element_path + ": " + v.message;
}

}  // namespace automfm
