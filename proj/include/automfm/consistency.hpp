#pragma once

// Consistency checks over one module model: reference integrity, structural
// integrity, stage completeness against a coverage matrix, document
// aggregation and assignment, and the discipline dependency report.

#include "automfm/error.hpp"
#include "automfm/metamodel.hpp"
#include "automfm/parameters.hpp"
#include "automfm/path.hpp"
#include "automfm/violation.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace automfm {

// ---------------------------------------------------------------------------
// Reference integrity

// One violation per cross reference endpoint or document assignment that
// does not resolve.
inline std::vector<Violation> check_links(const ModuleModel& model)
{
    std::vector<Violation> out;
    for (std::size_t i = 0; i < model.cross_refs.size(); ++i) {
        const auto& ref = model.cross_refs[i];
        const auto path = model.id + "/cross_refs/" + std::to_string(i);
        if (!resolves(model, ref.source))
            out.push_back(make_violation("link.dangling-source", path,
                                         "source '" + ref.source + "' of " + ref.kind + " reference does not resolve"));
        if (!resolves(model, ref.target))
            out.push_back(make_violation("link.dangling-target", path,
                                         "target '" + ref.target + "' of " + ref.kind + " reference does not resolve"));
    }
    for (const auto& doc : model.documents)
        if (!doc.assigned_element.empty() && !resolves(model, doc.assigned_element))
            out.push_back(make_violation("link.dangling-assignment", model.id + "/documents/" + doc.id,
                                         "assigned element '" + doc.assigned_element + "' does not resolve"));
    return out;
}

// Name-based references inside the description classes and value ranges
// that the construction API enforces but a parsed file may violate.
inline std::vector<Violation> check_structure(const ModuleModel& model)
{
    std::vector<Violation> out;
    const auto& ports = model.module_interface.ports;
    const auto has_port = [&](const std::string& name) { return detail::find_named(ports, name) != nullptr; };
    const auto base = model.id + "/";

    for (std::size_t i = 0; i < model.function.routes.size(); ++i) {
        const auto& r = model.function.routes[i];
        const auto path = base + "function/routes/" + std::to_string(i);
        for (const auto* port : {&r.from_port, &r.to_port})
            if (!has_port(*port))
                out.push_back(make_violation("struct.route-port", path, "port '" + *port + "' is not declared"));
    }

    for (std::size_t i = 0; i < model.control.io_mapping.size(); ++i) {
        const auto& e = model.control.io_mapping[i];
        const auto path = base + "control/io_mapping/" + std::to_string(i);
        std::optional<ElementHandle> target;
        try {
            target = resolve(model, e.component_path);
        }
        catch (const PathError&) {
        }
        const auto* component = target ? target->get<Component>() : nullptr;
        if (!component)
            out.push_back(make_violation("struct.io-component", path,
                                         "component '" + e.component_path + "' does not exist"));
        if (!detail::find_named(model.control.variables, e.variable_name))
            out.push_back(make_violation("struct.io-variable", path,
                                         "variable '" + e.variable_name + "' is not declared"));
        if (component) {
            const bool sensor = component->kind == ComponentKind::sensor;
            if (sensor && e.direction == IoDirection::output)
                out.push_back(make_violation("struct.io-direction", path,
                                             "sensor '" + component->name + "' mapped as output"));
            if (!sensor && e.direction == IoDirection::input)
                out.push_back(make_violation("struct.io-direction", path,
                                             std::string(to_string(component->kind)) + " '" + component->name +
                                                 "' mapped as input"));
        }
    }

    for (const auto& f : model.function.logistic_functions)
        if (f.behavior_ref && !find_document(model, *f.behavior_ref))
            out.push_back(make_violation("struct.behavior-ref", base + "function/logistic_functions/" + f.name,
                                         "behavior document '" + *f.behavior_ref + "' does not exist"));
    for (const auto& f : model.control.control_functions)
        if (f.body_ref && !find_document(model, *f.body_ref))
            out.push_back(make_violation("struct.body-ref", base + "control/control_functions/" + f.name,
                                         "body document '" + *f.body_ref + "' does not exist"));

    const auto positive = [](const Vec3& v) { return v.x.value() > 0 && v.y.value() > 0 && v.z.value() > 0; };
    if (model.general.main_dimensions && !positive(*model.general.main_dimensions))
        out.push_back(make_violation("struct.nonpositive-dimension", base + "general",
                                     "main dimensions " + to_string(*model.general.main_dimensions)));
    for (const auto& c : model.components) {
        const auto path = base + "components/" + c.name;
        if (c.main_dimensions && !positive(*c.main_dimensions))
            out.push_back(make_violation("struct.nonpositive-dimension", path,
                                         "main dimensions " + to_string(*c.main_dimensions)));
        if (c.latency && c.latency->value() < 0)
            out.push_back(make_violation("struct.negative-latency", path, "latency " + c.latency->text()));
    }
    for (const auto& s : model.module_interface.interaction_spaces) {
        const auto& b = s.box;
        if (b.min.x.value() > b.max.x.value() || b.min.y.value() > b.max.y.value() ||
            b.min.z.value() > b.max.z.value())
            out.push_back(make_violation("struct.bounding-box", base + "interface/interaction_spaces/" + s.name,
                                         "min " + to_string(b.min) + " exceeds max " + to_string(b.max)));
    }

    std::set<std::string> seen;
    for (const auto& v : model.status.runtime_variables)
        if (!seen.insert(v.name).second)
            out.push_back(make_violation("struct.duplicate-variable", base + "status/runtime_variables/" + v.name,
                                         "runtime variable '" + v.name + "' declared twice"));
    return out;
}

// ---------------------------------------------------------------------------
// Stage coverage matrix
//
// Text format, one requirement per line ('#' starts a comment):
//
//     mechanical_eng: components[conveyor].main_dimensions
//     control_hmi_eng: control.variables
//     electrical_planning:
//
// The first selector segment is a sub-class or "components". Each further
// segment names a singleton child, a list (expanded to its entries) or, as
// the last segment, a parameter. A trailing list segment requires the list
// to be non-empty. "[kind,...]" filters components by kind. A stage line
// without selector declares the stage with no requirements of its own.

struct CoverageRequirement
{
    Stage stage = Stage::process_planning;
    std::vector<std::string> segments;     // selector split at '.'
    std::vector<ComponentKind> kinds;      // filter for the components list, empty = all
    std::size_t line = 0;

    [[nodiscard]] std::string selector() const
    {
        std::string out;
        for (std::size_t i = 0; i < segments.size(); ++i) {
            if (i)
                out += '.';
            out += segments[i];
            if (i == 0 && segments[0] == "components" && !kinds.empty()) {
                out += '[';
                for (std::size_t k = 0; k < kinds.size(); ++k)
                    out += (k ? "," : "") + std::string(to_string(kinds[k]));
                out += ']';
            }
        }
        return out;
    }

    bool operator==(const CoverageRequirement& o) const
    {
        return stage == o.stage && segments == o.segments && kinds == o.kinds;
    }
};

// Pseudo-parameter on the control class: satisfied by at least one cross
// reference with an endpoint inside the control description.
inline constexpr std::string_view sensor_actuator_relations = "sensor_actuator_relations";

class StageCoverageMatrix
{
public:
    void declare_stage(Stage s)
    {
        if (std::find(stages_.begin(), stages_.end(), s) == stages_.end())
            stages_.push_back(s);
    }

    void add(CoverageRequirement r)
    {
        declare_stage(r.stage);
        requirements_.push_back(std::move(r));
    }

    [[nodiscard]] bool covers(Stage s) const
    {
        return std::find(stages_.begin(), stages_.end(), s) != stages_.end();
    }

    [[nodiscard]] const std::vector<Stage>& stages() const noexcept { return stages_; }
    [[nodiscard]] const std::vector<CoverageRequirement>& requirements() const noexcept { return requirements_; }

    bool operator==(const StageCoverageMatrix& o) const
    {
        return std::set<Stage>(stages_.begin(), stages_.end()) == std::set<Stage>(o.stages_.begin(), o.stages_.end()) &&
               requirements_ == o.requirements_;
    }

private:
    std::vector<Stage> stages_;
    std::vector<CoverageRequirement> requirements_;
};

inline constexpr std::string_view default_coverage_text = R"(# stage: selector
process_planning: general.identification.name
process_planning: general.identification.identifier
process_planning: general.identification.module_type
logistics_planning: function.logistic_functions
logistics_planning: interface.ports
logistics_planning: control.sensor_actuator_relations
electrical_planning:
mechanical_eng: general.main_dimensions
mechanical_eng: components.position
mechanical_eng: components[conveyor].main_dimensions
mechanical_eng: components.component_type
mechanical_eng: interface.ports.position
electrical_eng: control.io_mapping.logical_address
electrical_eng: control.platform.controller_type
electrical_eng: control.platform.bus_coupler_type
electrical_eng: components[sensor,actuator,switch].component_type
control_hmi_eng: control.control_functions
control_hmi_eng: control.control_functions.language_tag
control_hmi_eng: control.variables
control_hmi_eng: control.variables.data_type
control_hmi_eng: status.runtime_variables
)";

namespace detail {

inline std::string_view trim_space(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

// Calls fn(line_number, content) for each non-blank line with comments removed.
template <typename F>
void for_each_content_line(std::string_view text, F&& fn)
{
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim_space(line);
        if (!line.empty())
            fn(line_no, line);
    }
}

}  // namespace detail

inline StageCoverageMatrix parse_coverage_matrix(std::string_view text)
{
    StageCoverageMatrix matrix;
    detail::for_each_content_line(text, [&](std::size_t line_no, std::string_view line) {
        const auto colon = line.find(':');
        if (colon == std::string_view::npos)
            throw ParseError("expected 'stage: selector'", line_no);
        const auto stage_text = detail::trim_space(line.substr(0, colon));
        const auto stage = parse_stage(stage_text);
        if (!stage)
            throw ParseError("unknown stage '" + std::string(stage_text) + "'", line_no);
        auto selector = detail::trim_space(line.substr(colon + 1));
        if (selector.empty()) {
            matrix.declare_stage(*stage);
            return;
        }

        CoverageRequirement req;
        req.stage = *stage;
        req.line = line_no;
        if (const auto open = selector.find('['); open != std::string_view::npos) {
            const auto close = selector.find(']', open);
            if (close == std::string_view::npos)
                throw ParseError("unterminated '[' in selector", line_no);
            if (selector.substr(0, open) != "components")
                throw ParseError("a kind filter is only allowed on 'components'", line_no);
            auto list = selector.substr(open + 1, close - open - 1);
            while (true) {
                const auto comma = list.find(',');
                const auto item = detail::trim_space(list.substr(0, comma));
                const auto kind = parse_component_kind(item);
                if (!kind)
                    throw ParseError("unknown component kind '" + std::string(item) + "'", line_no);
                req.kinds.push_back(*kind);
                if (comma == std::string_view::npos)
                    break;
                list = list.substr(comma + 1);
            }
            req.segments.emplace_back("components");
            selector = selector.substr(close + 1);
            if (!selector.empty() && selector.front() != '.')
                throw ParseError("expected '.' after kind filter", line_no);
            if (!selector.empty())
                selector.remove_prefix(1);
        }
        while (!selector.empty() || req.segments.empty()) {
            const auto dot = selector.find('.');
            const auto seg = selector.substr(0, dot);
            if (!is_valid_segment(seg))
                throw ParseError("invalid selector segment '" + std::string(seg) + "'", line_no);
            req.segments.emplace_back(seg);
            selector = dot == std::string_view::npos ? std::string_view{} : selector.substr(dot + 1);
            if (dot != std::string_view::npos && selector.empty())
                throw ParseError("selector ends with '.'", line_no);
        }
        const auto& head = req.segments.front();
        if (head != "components" && !parse_subclass(head))
            throw ParseError("selector must start with a sub-class or 'components', got '" + head + "'", line_no);
        matrix.add(std::move(req));
    });
    return matrix;
}

inline std::string write_coverage_matrix(const StageCoverageMatrix& matrix)
{
    std::string out = "# stage: selector\n";
    for (const auto stage : all_stages) {
        if (!matrix.covers(stage))
            continue;
        bool any = false;
        for (const auto& r : matrix.requirements())
            if (r.stage == stage) {
                out += std::string(to_string(stage)) + ": " + r.selector() + "\n";
                any = true;
            }
        if (!any)
            out += std::string(to_string(stage)) + ":\n";
    }
    return out;
}

inline StageCoverageMatrix default_coverage_matrix() { return parse_coverage_matrix(default_coverage_text); }

// One (element, parameter) pair a stage requires, after expanding lists.
struct RequiredSlot
{
    std::string element_path;
    std::string parameter;
    Stage stage = Stage::process_planning;  // earliest stage requiring it
    bool is_list = false;                   // satisfied by a non-empty list, not a writable value
    bool satisfied = false;
    std::string unit;

    bool operator==(const RequiredSlot&) const = default;
};

namespace detail {

inline bool is_direct_child(const std::string& path, const std::string& parent)
{
    return path.size() > parent.size() + 1 && path.compare(0, parent.size(), parent) == 0 &&
           path[parent.size()] == '/' && path.find('/', parent.size() + 1) == std::string::npos;
}

inline std::vector<ElementHandle> list_entries(const ModuleModel& model, const std::string& list_path,
                                               const std::vector<ComponentKind>& kinds)
{
    std::vector<ElementHandle> out;
    for (auto& e : all_elements(model)) {
        if (e.kind == ElementKind::collection || !is_direct_child(e.path, list_path))
            continue;
        if (const auto* c = e.get<Component>(); c && !kinds.empty() &&
                                                std::find(kinds.begin(), kinds.end(), c->kind) == kinds.end())
            continue;
        out.push_back(std::move(e));
    }
    return out;
}

inline bool has_control_relation(const ModuleModel& model)
{
    const auto control = model.id + "/control";
    return std::any_of(model.cross_refs.begin(), model.cross_refs.end(), [&](const CrossReference& r) {
        return path_within(r.source, control) || path_within(r.target, control);
    });
}

inline void expand_requirement(const ModuleModel& model, const CoverageRequirement& req,
                               std::vector<RequiredSlot>& out)
{
    std::vector<std::string> current{model.id + "/" + req.segments[0]};
    std::size_t first = 1;
    if (req.segments[0] == "components") {
        if (req.segments.size() == 1) {
            out.push_back({model.id, "components", req.stage, true,
                           !list_entries(model, current[0], req.kinds).empty(), ""});
            return;
        }
        std::vector<std::string> entries;
        for (const auto& e : list_entries(model, current[0], req.kinds))
            entries.push_back(e.path);
        current = std::move(entries);
    }
    for (std::size_t i = first; i < req.segments.size(); ++i) {
        const auto& seg = req.segments[i];
        const bool last = i + 1 == req.segments.size();
        std::vector<std::string> next;
        for (const auto& p : current) {
            if (last && seg == sensor_actuator_relations && p == model.id + "/control") {
                out.push_back({p, seg, req.stage, true, has_control_relation(model), ""});
                continue;
            }
            const auto child = p + "/" + seg;
            const auto handle = resolve(model, child);
            if (handle && handle->kind == ElementKind::collection) {
                auto entries = list_entries(model, child, {});
                if (last)
                    out.push_back({p, seg, req.stage, true, !entries.empty(), ""});
                for (const auto& e : entries)
                    next.push_back(e.path);
            }
            else if (handle && !last) {
                next.push_back(handle->path);
            }
            else if (last) {
                const auto slot = parameter(model, p, seg);
                out.push_back({p, seg, req.stage, false, slot && !slot->value.empty(), slot ? slot->unit : ""});
            }
        }
        current = std::move(next);
    }
}

}  // namespace detail

// Every requirement in force at stage (cumulative over earlier stages),
// deduplicated by (element, parameter) keeping the earliest stage.
inline std::vector<RequiredSlot> required_slots(const ModuleModel& model, Stage stage,
                                                const StageCoverageMatrix& matrix)
{
    if (!matrix.covers(stage))
        throw Error("stage '" + std::string(to_string(stage)) + "' is not covered by the coverage matrix");
    std::vector<const CoverageRequirement*> reqs;
    for (const auto& r : matrix.requirements())
        if (stage_rank(r.stage) <= stage_rank(stage))
            reqs.push_back(&r);
    std::stable_sort(reqs.begin(), reqs.end(),
                     [](const auto* a, const auto* b) { return stage_rank(a->stage) < stage_rank(b->stage); });
    std::vector<RequiredSlot> all;
    for (const auto* r : reqs)
        detail::expand_requirement(model, *r, all);
    std::vector<RequiredSlot> out;
    std::set<std::pair<std::string, std::string>> seen;
    for (auto& s : all)
        if (seen.emplace(s.element_path, s.parameter).second)
            out.push_back(std::move(s));
    return out;
}

inline std::vector<Violation> check_completeness(const ModuleModel& model, Stage stage,
                                                 const StageCoverageMatrix& matrix)
{
    std::vector<Violation> out;
    for (const auto& s : required_slots(model, stage, matrix)) {
        if (s.satisfied)
            continue;
        const std::string what = s.is_list ? "at least one entry in '" + s.parameter + "'"
                                           : "parameter '" + s.parameter + "'";
        out.push_back(make_violation("complete.missing-parameter", s.element_path,
                                     what + " required by stage " + std::string(to_string(s.stage)) + " is missing",
                                     s.stage));
    }
    return out;
}

inline std::vector<Violation> check_completeness(const ModuleModel& model, std::string_view stage,
                                                 const StageCoverageMatrix& matrix)
{
    const auto s = parse_stage(stage);
    if (!s)
        throw Error("unknown stage '" + std::string(stage) + "'");
    return check_completeness(model, *s, matrix);
}

// ---------------------------------------------------------------------------
// Documents

struct DisciplineBucket
{
    Discipline discipline = Discipline::mechanical;
    std::vector<DocumentReference> documents;  // sorted by id
    std::vector<std::string> elements;         // assigned element paths, sorted and unique

    bool operator==(const DisciplineBucket&) const = default;
};

// One bucket per discipline in enumeration order.
inline std::vector<DisciplineBucket> aggregate(const ModuleModel& model)
{
    std::vector<DisciplineBucket> out;
    for (const auto d : all_disciplines) {
        DisciplineBucket b{d, {}, {}};
        std::set<std::string> elements;
        for (const auto& doc : model.documents)
            if (doc.discipline == d) {
                b.documents.push_back(doc);
                if (!doc.assigned_element.empty())
                    elements.insert(doc.assigned_element);
            }
        std::sort(b.documents.begin(), b.documents.end(), [](const auto& x, const auto& y) { return x.id < y.id; });
        b.elements.assign(elements.begin(), elements.end());
        out.push_back(std::move(b));
    }
    return out;
}

struct AssignResult
{
    ModuleModel model;
    std::vector<Violation> violations;
};

// Records doc_id -> element_path. An unresolvable target is stored and
// flagged; replacing an earlier assignment is reported as info.
inline AssignResult assign_document(ModuleModel model, std::string_view doc_id, std::string element_path)
{
    const auto it = std::find_if(model.documents.begin(), model.documents.end(),
                                 [&](const auto& d) { return d.id == doc_id; });
    if (it == model.documents.end())
        throw Error("unknown document '" + std::string(doc_id) + "'");
    split_path(element_path);
    std::vector<Violation> violations;
    const auto doc_path = model.id + "/documents/" + it->id;
    if (!it->assigned_element.empty() && it->assigned_element != element_path)
        violations.push_back(make_violation("assign.reassigned", doc_path,
                                            "previously assigned to '" + it->assigned_element + "'"));
    it->assigned_element = std::move(element_path);
    if (!resolves(model, it->assigned_element))
        violations.push_back(make_violation("link.dangling-assignment", doc_path,
                                            "assigned element '" + it->assigned_element + "' does not resolve"));
    return {std::move(model), std::move(violations)};
}

// ---------------------------------------------------------------------------
// Ownership and dependency metrics
//
// Ownership map text format, one entry per line:
//
//     control.io_mapping -> electrical
//
// Keys are a class ("general" ... "control", "components") or a class plus
// one child segment. The longest matching key wins.

class OwnershipMap
{
public:
    void set(std::string key, Discipline d) { owners_[std::move(key)] = d; }

    [[nodiscard]] std::optional<Discipline> find(std::string_view key) const
    {
        const auto it = owners_.find(std::string(key));
        if (it == owners_.end())
            return std::nullopt;
        return it->second;
    }

    [[nodiscard]] const std::map<std::string, Discipline>& entries() const noexcept { return owners_; }

    // Throws Error naming the first class without an owner.
    void require_complete() const
    {
        for (const auto key : required_keys)
            if (!owners_.count(std::string(key)))
                throw Error("ownership map does not cover class '" + std::string(key) + "'");
    }

    // Owner of the element at path. Documents belong to their discipline;
    // the module root, cross references and foreign paths to the owner of general.
    [[nodiscard]] Discipline owner(const ModuleModel& model, std::string_view path) const
    {
        const auto fallback = find("general").value_or(Discipline::logistics);
        std::vector<std::string> segs;
        try {
            segs = split_path(path);
        }
        catch (const PathError&) {
            return fallback;
        }
        const auto id_segs = split_path(model.id);
        if (segs.size() <= id_segs.size() || !std::equal(id_segs.begin(), id_segs.end(), segs.begin()))
            return fallback;
        const auto& cls = segs[id_segs.size()];
        if (cls == "documents") {
            if (segs.size() > id_segs.size() + 1)
                if (const auto* doc = find_document(model, segs[id_segs.size() + 1]))
                    return doc->discipline;
            return fallback;
        }
        if (segs.size() > id_segs.size() + 1)
            if (auto d = find(cls + "." + segs[id_segs.size() + 1]))
                return *d;
        return find(cls).value_or(fallback);
    }

    bool operator==(const OwnershipMap&) const = default;

    static constexpr std::array<std::string_view, 6> required_keys{"general", "status",   "function",
                                                                   "interface", "control", "components"};

private:
    std::map<std::string, Discipline> owners_;
};

inline constexpr std::string_view default_ownership_text = R"(# key -> discipline
general -> logistics
function -> logistics
interface -> logistics
components -> mechanical
control -> software
control.io_mapping -> electrical
control.platform -> electrical
control.control_functions -> software
control.variables -> software
status -> software
)";

inline OwnershipMap parse_ownership_map(std::string_view text)
{
    OwnershipMap map;
    detail::for_each_content_line(text, [&](std::size_t line_no, std::string_view line) {
        const auto arrow = line.find("->");
        if (arrow == std::string_view::npos)
            throw ParseError("expected 'key -> discipline'", line_no);
        const auto key = detail::trim_space(line.substr(0, arrow));
        const auto value = detail::trim_space(line.substr(arrow + 2));
        const auto dot = key.find('.');
        const auto cls = key.substr(0, dot);
        if ((cls != "components" && !parse_subclass(cls)) ||
            (dot != std::string_view::npos && !is_valid_segment(key.substr(dot + 1))))
            throw ParseError("invalid ownership key '" + std::string(key) + "'", line_no);
        const auto d = parse_discipline(value);
        if (!d)
            throw ParseError("unknown discipline '" + std::string(value) + "'", line_no);
        map.set(std::string(key), *d);
    });
    return map;
}

inline std::string write_ownership_map(const OwnershipMap& map)
{
    std::string out = "# key -> discipline\n";
    for (const auto& [key, d] : map.entries())
        out += key + " -> " + std::string(to_string(d)) + "\n";
    return out;
}

inline OwnershipMap default_ownership_map() { return parse_ownership_map(default_ownership_text); }

constexpr std::size_t discipline_count = all_disciplines.size();

struct DependencyMatrix
{
    // counts[a][b]: cross references from an element owned by a to one owned by b
    std::array<std::array<std::size_t, discipline_count>, discipline_count> counts{};
    std::size_t total = 0;

    [[nodiscard]] double cell(Discipline source, Discipline target) const
    {
        if (total == 0)
            return 0.0;
        return static_cast<double>(counts[static_cast<std::size_t>(source)][static_cast<std::size_t>(target)]) /
               static_cast<double>(total);
    }

    bool operator==(const DependencyMatrix&) const = default;
};

struct DependencyReport
{
    DependencyMatrix matrix;
    std::array<double, discipline_count> workload{};  // share of populated parameters per discipline
    std::size_t populated_parameters = 0;
};

inline DependencyReport dependency_report(const ModuleModel& model, const OwnershipMap& ownership)
{
    ownership.require_complete();
    DependencyReport report;
    for (const auto& ref : model.cross_refs) {
        const auto a = static_cast<std::size_t>(ownership.owner(model, ref.source));
        const auto b = static_cast<std::size_t>(ownership.owner(model, ref.target));
        ++report.matrix.counts[a][b];
        ++report.matrix.total;
    }
    std::array<std::size_t, discipline_count> populated{};
    for (const auto& slot : parameter_catalog(model)) {
        if (slot.value.empty())
            continue;
        ++populated[static_cast<std::size_t>(ownership.owner(model, slot.element_path))];
        ++report.populated_parameters;
    }
    if (report.populated_parameters)
        for (std::size_t i = 0; i < discipline_count; ++i)
            report.workload[i] = static_cast<double>(populated[i]) / static_cast<double>(report.populated_parameters);
    return report;
}

}  // namespace automfm
