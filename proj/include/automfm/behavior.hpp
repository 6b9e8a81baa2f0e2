#pragma once

// Logistic behavior graphs: a line grammar for step/edge graphs, the flat
// intermediate form (IML), binding to a module model as a sequential
// function chart, its PLCopen-style XML form, and token simulation over both
// the graph and the chart.

#include "automfm/error.hpp"
#include "automfm/metamodel.hpp"
#include "automfm/path.hpp"
#include "automfm/xml.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace automfm {

enum class ConditionKind
{
    sensor_true,
    sensor_false,
    order_request,
};

struct Condition
{
    ConditionKind kind = ConditionKind::sensor_true;
    std::string subject;

    bool operator==(const Condition&) const = default;
};

enum class ActionKind
{
    activate,
    deactivate,
};

inline std::string_view to_string(ActionKind k) { return k == ActionKind::activate ? "activate" : "deactivate"; }

struct Action
{
    ActionKind kind = ActionKind::activate;
    std::string subject;

    bool operator==(const Action&) const = default;
};

inline std::string to_string(const Action& a) { return std::string(to_string(a.kind)) + " " + a.subject; }

// "LB_in", "NOT LB_in" or "ORDER(output_1)".
inline std::string to_string(const Condition& c)
{
    switch (c.kind) {
    case ConditionKind::sensor_true: return c.subject;
    case ConditionKind::sensor_false: return "NOT " + c.subject;
    case ConditionKind::order_request: return "ORDER(" + c.subject + ")";
    }
    return {};
}

struct BehaviorStep
{
    std::string id;
    std::string description;
    std::vector<Condition> guards;
    std::vector<Action> actions;

    bool operator==(const BehaviorStep&) const = default;
};

struct BehaviorEdge
{
    std::string from;
    std::string to;

    bool operator==(const BehaviorEdge&) const = default;
};

struct BehaviorGraph
{
    std::string id = "behavior";
    std::vector<BehaviorStep> steps;
    std::vector<BehaviorEdge> edges;

    [[nodiscard]] const BehaviorStep* find(std::string_view step_id) const
    {
        const auto it = std::find_if(steps.begin(), steps.end(), [&](const auto& s) { return s.id == step_id; });
        return it == steps.end() ? nullptr : &*it;
    }

    // The step without incoming edges; nullptr for an empty graph.
    [[nodiscard]] const BehaviorStep* entry() const
    {
        for (const auto& s : steps)
            if (std::none_of(edges.begin(), edges.end(), [&](const auto& e) { return e.to == s.id; }))
                return &s;
        return nullptr;
    }

    [[nodiscard]] std::vector<std::string> successors(std::string_view step_id) const
    {
        std::vector<std::string> out;
        for (const auto& e : edges)
            if (e.from == step_id)
                out.push_back(e.to);
        return out;
    }

    bool operator==(const BehaviorGraph&) const = default;
};

// ---------------------------------------------------------------------------
// Text grammar
//
//     graph tjunction
//     step 1.1 "order for output 1" when LB_in, order output_1
//     step 1.2 "convey" do activate Conv1
//     edge 1.1 -> 1.2

namespace detail {

inline bool is_subject(std::string_view s)
{
    return is_valid_segment(s) && s != "not" && s != "order" && s != "do" && s != "when";
}

class BehaviorLineParser
{
public:
    BehaviorLineParser(std::string_view line, std::size_t line_no)
        : line_(line)
        , line_no_(line_no)
    {
    }

    [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, line_no_, pos_ + 1); }

    void skip_space()
    {
        while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t'))
            ++pos_;
    }

    [[nodiscard]] bool at_end()
    {
        skip_space();
        return pos_ >= line_.size();
    }

    // A run of non-space characters, stopping before ','.
    std::string_view word()
    {
        skip_space();
        const auto start = pos_;
        while (pos_ < line_.size() && line_[pos_] != ' ' && line_[pos_] != '\t' && line_[pos_] != ',')
            ++pos_;
        return line_.substr(start, pos_ - start);
    }

    [[nodiscard]] std::string_view peek_word()
    {
        const auto saved = pos_;
        const auto w = word();
        pos_ = saved;
        return w;
    }

    bool comma()
    {
        skip_space();
        if (pos_ < line_.size() && line_[pos_] == ',') {
            ++pos_;
            return true;
        }
        return false;
    }

    std::string subject(std::string_view what)
    {
        const auto before = pos_;
        const auto w = word();
        if (!is_subject(w)) {
            pos_ = before;
            skip_space();
            fail("expected " + std::string(what) + " name, got '" + std::string(w) + "'");
        }
        return std::string(w);
    }

    std::string quoted()
    {
        skip_space();
        if (pos_ >= line_.size() || line_[pos_] != '"')
            fail("expected quoted step description");
        ++pos_;
        std::string out;
        while (true) {
            if (pos_ >= line_.size())
                fail("unterminated description");
            const char c = line_[pos_++];
            if (c == '"')
                return out;
            if (c == '\\' && pos_ < line_.size() && (line_[pos_] == '"' || line_[pos_] == '\\'))
                out += line_[pos_++];
            else
                out += c;
        }
    }

    Condition condition()
    {
        const auto w = peek_word();
        if (w == "not") {
            word();
            return {ConditionKind::sensor_false, subject("sensor")};
        }
        if (w == "order") {
            word();
            return {ConditionKind::order_request, subject("port")};
        }
        return {ConditionKind::sensor_true, subject("sensor")};
    }

    Action action()
    {
        const auto before = pos_;
        const auto w = word();
        ActionKind kind;
        if (w == "activate")
            kind = ActionKind::activate;
        else if (w == "deactivate")
            kind = ActionKind::deactivate;
        else {
            pos_ = before;
            skip_space();
            fail("expected 'activate' or 'deactivate', got '" + std::string(w) + "'");
        }
        return {kind, subject("actuator")};
    }

    [[nodiscard]] std::size_t column() const noexcept { return pos_ + 1; }

private:
    std::string_view line_;
    std::size_t line_no_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline BehaviorGraph parse_behavior(std::string_view text)
{
    BehaviorGraph graph;
    std::map<std::string, std::size_t> step_line;
    std::vector<std::size_t> edge_line;
    bool have_graph_id = false;
    std::size_t line_no = 0;

    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        // '#' starts a comment outside quoted descriptions.
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"' && (i == 0 || line[i - 1] != '\\'))
                quoted = !quoted;
            else if (line[i] == '#' && !quoted) {
                line = line.substr(0, i);
                break;
            }
        }

        detail::BehaviorLineParser p(line, line_no);
        if (p.at_end())
            continue;
        const auto keyword = p.word();
        if (keyword == "graph") {
            if (have_graph_id)
                p.fail("graph id declared twice");
            const auto id = p.word();
            if (!is_valid_segment(id))
                p.fail("invalid graph id '" + std::string(id) + "'");
            graph.id = std::string(id);
            have_graph_id = true;
        }
        else if (keyword == "step") {
            BehaviorStep step;
            const auto id = p.word();
            if (!is_valid_segment(id))
                p.fail("invalid step id '" + std::string(id) + "'");
            step.id = std::string(id);
            if (step_line.count(step.id))
                throw ParseError("duplicate step id '" + step.id + "' (first defined on line " +
                                     std::to_string(step_line[step.id]) + ")",
                                 line_no);
            step.description = p.quoted();
            if (p.peek_word() == "when") {
                p.word();
                do
                    step.guards.push_back(p.condition());
                while (p.comma());
            }
            if (p.peek_word() == "do") {
                p.word();
                do
                    step.actions.push_back(p.action());
                while (p.comma());
            }
            if (!p.at_end())
                p.fail("unexpected '" + std::string(p.peek_word()) + "'");
            step_line[step.id] = line_no;
            graph.steps.push_back(std::move(step));
        }
        else if (keyword == "edge") {
            const auto from = p.word();
            if (!is_valid_segment(from))
                p.fail("invalid step id '" + std::string(from) + "'");
            if (p.word() != "->")
                p.fail("expected '->'");
            const auto to = p.word();
            if (!is_valid_segment(to))
                p.fail("invalid step id '" + std::string(to) + "'");
            if (!p.at_end())
                p.fail("unexpected text after edge");
            BehaviorEdge edge{std::string(from), std::string(to)};
            if (std::find(graph.edges.begin(), graph.edges.end(), edge) != graph.edges.end())
                throw ParseError("duplicate edge " + edge.from + " -> " + edge.to, line_no);
            graph.edges.push_back(std::move(edge));
            edge_line.push_back(line_no);
        }
        else {
            throw ParseError("expected 'graph', 'step' or 'edge', got '" + std::string(keyword) + "'", line_no);
        }
    }

    for (std::size_t i = 0; i < graph.edges.size(); ++i) {
        const auto& e = graph.edges[i];
        for (const auto* end : {&e.from, &e.to})
            if (!step_line.count(*end))
                throw ParseError("edge refers to unknown step '" + *end + "'", edge_line[i]);
    }

    std::vector<const BehaviorStep*> entries;
    for (const auto& s : graph.steps)
        if (std::none_of(graph.edges.begin(), graph.edges.end(), [&](const auto& e) { return e.to == s.id; }))
            entries.push_back(&s);
    if (entries.size() > 1)
        throw ParseError("more than one entry step ('" + entries[0]->id + "' and '" + entries[1]->id + "')",
                         step_line[entries[1]->id]);
    if (!graph.steps.empty() && entries.empty())
        throw ParseError("no entry step: every step has an incoming edge", edge_line.empty() ? 1 : edge_line.front());
    if (!entries.empty() && !entries[0]->guards.empty())
        throw ParseError("entry step '" + entries[0]->id + "' must not have guards", step_line[entries[0]->id]);

    // Acyclicity: Kahn elimination; any step left over lies on or behind a cycle.
    std::map<std::string, std::size_t> indegree;
    for (const auto& s : graph.steps)
        indegree[s.id] = 0;
    for (const auto& e : graph.edges)
        ++indegree[e.to];
    std::vector<std::string> ready;
    for (const auto& [id, d] : indegree)
        if (d == 0)
            ready.push_back(id);
    std::size_t removed = 0;
    while (!ready.empty()) {
        const auto id = ready.back();
        ready.pop_back();
        ++removed;
        for (const auto& e : graph.edges)
            if (e.from == id && --indegree[e.to] == 0)
                ready.push_back(e.to);
    }
    if (removed != graph.steps.size()) {
        for (std::size_t i = 0; i < graph.edges.size(); ++i)
            if (indegree[graph.edges[i].from] > 0 && indegree[graph.edges[i].to] > 0)
                throw ParseError("cycle through edge " + graph.edges[i].from + " -> " + graph.edges[i].to,
                                 edge_line[i]);
    }
    return graph;
}

inline std::string write_behavior(const BehaviorGraph& graph)
{
    std::string out = "graph " + graph.id + "\n";
    for (const auto& s : graph.steps) {
        out += "step " + s.id + " \"";
        for (char c : s.description) {
            if (c == '"' || c == '\\')
                out += '\\';
            out += c;
        }
        out += '"';
        for (std::size_t i = 0; i < s.guards.size(); ++i) {
            out += i ? ", " : " when ";
            const auto& g = s.guards[i];
            if (g.kind == ConditionKind::sensor_false)
                out += "not ";
            else if (g.kind == ConditionKind::order_request)
                out += "order ";
            out += g.subject;
        }
        for (std::size_t i = 0; i < s.actions.size(); ++i)
            out += (i ? ", " : " do ") + to_string(s.actions[i]);
        out += '\n';
    }
    for (const auto& e : graph.edges)
        out += "edge " + e.from + " -> " + e.to + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Intermediate form

struct ImlEntry
{
    std::string step_id;
    std::string description;
    std::vector<Condition> guards;      // sorted by their rendered atom
    std::string guard_expr;             // "TRUE" or atoms joined with " AND "
    std::vector<Action> actions;        // declared order
    std::vector<std::string> predecessors;

    bool operator==(const ImlEntry&) const = default;
};

struct ImlDocument
{
    std::string source_graph_id;
    std::vector<ImlEntry> entries;  // topological order, ties broken by step id

    bool operator==(const ImlDocument&) const = default;
};

inline std::string guard_expression(std::vector<Condition>& guards)
{
    std::sort(guards.begin(), guards.end(),
              [](const Condition& a, const Condition& b) { return to_string(a) < to_string(b); });
    guards.erase(std::unique(guards.begin(), guards.end()), guards.end());
    if (guards.empty())
        return "TRUE";
    std::string out;
    for (const auto& g : guards)
        out += (out.empty() ? "" : " AND ") + to_string(g);
    return out;
}

inline ImlDocument to_iml(const BehaviorGraph& graph)
{
    ImlDocument doc{graph.id, {}};
    std::map<std::string, std::size_t> indegree;
    for (const auto& s : graph.steps)
        indegree[s.id] = 0;
    for (const auto& e : graph.edges)
        ++indegree[e.to];
    std::priority_queue<std::string, std::vector<std::string>, std::greater<>> ready;
    for (const auto& [id, d] : indegree)
        if (d == 0)
            ready.push(id);
    while (!ready.empty()) {
        const auto id = ready.top();
        ready.pop();
        const auto* step = graph.find(id);
        ImlEntry entry{step->id, step->description, step->guards, {}, step->actions, {}};
        entry.guard_expr = guard_expression(entry.guards);
        for (const auto& e : graph.edges)
            if (e.to == id)
                entry.predecessors.push_back(e.from);
        doc.entries.push_back(std::move(entry));
        for (const auto& e : graph.edges)
            if (e.from == id && --indegree[e.to] == 0)
                ready.push(e.to);
    }
    if (doc.entries.size() != graph.steps.size())
        throw StructuralError("behavior graph '" + graph.id + "' contains a cycle");
    return doc;
}

// One line per entry: "<step> | after <preds> | when <guard> | do <actions>".
inline std::string render_iml(const ImlDocument& doc)
{
    std::string out = "iml " + doc.source_graph_id + "\n";
    for (const auto& e : doc.entries) {
        std::string preds;
        for (const auto& p : e.predecessors)
            preds += (preds.empty() ? "" : ",") + p;
        std::string actions;
        for (const auto& a : e.actions)
            actions += (actions.empty() ? "" : "; ") + to_string(a);
        out += e.step_id + " | after " + (preds.empty() ? "-" : preds) + " | when " + e.guard_expr + " | do " +
               (actions.empty() ? "-" : actions) + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sequential function chart

enum class BindingKind
{
    sensor,
    request,
    actuator,
};

inline std::string_view to_string(BindingKind k)
{
    switch (k) {
    case BindingKind::sensor: return "sensor";
    case BindingKind::request: return "request";
    case BindingKind::actuator: return "actuator";
    }
    return {};
}

inline std::optional<BindingKind> parse_binding_kind(std::string_view s)
{
    if (s == "sensor")
        return BindingKind::sensor;
    if (s == "request")
        return BindingKind::request;
    if (s == "actuator")
        return BindingKind::actuator;
    return std::nullopt;
}

struct SfcAction
{
    char qualifier = 'S';  // S sets, R resets
    std::string variable;

    bool operator==(const SfcAction&) const = default;
};

struct SfcStep
{
    std::string name;
    bool initial = false;
    std::vector<SfcAction> actions;

    bool operator==(const SfcStep&) const = default;
};

struct SfcAtom
{
    std::string variable;
    bool negated = false;

    bool operator==(const SfcAtom&) const = default;
};

struct SfcTransition
{
    std::string from;
    std::string to;
    std::vector<SfcAtom> atoms;  // conjunction, empty = TRUE

    bool operator==(const SfcTransition&) const = default;
};

struct SfcVariable
{
    std::string name;
    std::string data_type;
    std::string scope;

    bool operator==(const SfcVariable&) const = default;
};

// Which behavior subject a chart variable stands for.
struct SfcBinding
{
    std::string subject;
    std::string variable;
    BindingKind kind = BindingKind::sensor;

    bool operator==(const SfcBinding&) const = default;
};

struct SfcProgram
{
    std::string name;
    std::vector<SfcStep> steps;
    std::vector<SfcTransition> transitions;
    std::vector<SfcVariable> variables;
    std::vector<SfcBinding> bindings;

    [[nodiscard]] const SfcStep* initial_step() const
    {
        const auto it = std::find_if(steps.begin(), steps.end(), [](const auto& s) { return s.initial; });
        return it == steps.end() ? nullptr : &*it;
    }

    // Steps without outgoing transitions; they jump back to the initial step.
    [[nodiscard]] std::vector<std::string> terminal_steps() const
    {
        std::vector<std::string> out;
        for (const auto& s : steps)
            if (std::none_of(transitions.begin(), transitions.end(), [&](const auto& t) { return t.from == s.name; }))
                out.push_back(s.name);
        return out;
    }

    bool operator==(const SfcProgram&) const = default;
};

inline std::string expression(const std::vector<SfcAtom>& atoms)
{
    if (atoms.empty())
        return "TRUE";
    std::string out;
    for (const auto& a : atoms)
        out += (out.empty() ? "" : " AND ") + std::string(a.negated ? "NOT " : "") + a.variable;
    return out;
}

inline std::string request_variable(std::string_view port) { return "REQ_" + std::string(port); }

namespace detail {

class Binder
{
public:
    explicit Binder(const ModuleModel& model)
        : model_(model)
    {
    }

    std::optional<std::string> bind_condition(const Condition& c)
    {
        if (c.kind == ConditionKind::order_request) {
            const auto* port = find_named(model_.module_interface.ports, c.subject);
            if (!port) {
                problem("order request '" + c.subject + "' names no declared port");
                return std::nullopt;
            }
            if (port->direction != PortDirection::out) {
                problem("order request '" + c.subject + "' names an input port");
                return std::nullopt;
            }
            return record(c.subject, request_variable(c.subject), BindingKind::request);
        }
        const auto* component = find_component(model_, c.subject);
        if (!component) {
            problem("condition subject '" + c.subject + "' is not a component");
            return std::nullopt;
        }
        if (component->kind != ComponentKind::sensor) {
            problem("condition subject '" + c.subject + "' is a " + std::string(to_string(component->kind)) +
                    ", not a sensor");
            return std::nullopt;
        }
        const auto* entry = io_entry(*component, IoDirection::input);
        if (!entry) {
            problem("sensor '" + c.subject + "' has no io_mapping input entry");
            return std::nullopt;
        }
        return record(c.subject, entry->variable_name, BindingKind::sensor);
    }

    std::optional<std::string> bind_action(const Action& a)
    {
        const auto* component = find_component(model_, a.subject);
        if (!component) {
            problem("action subject '" + a.subject + "' is not a component");
            return std::nullopt;
        }
        const Component* actuator = component;
        if (component->kind == ComponentKind::sensor) {
            problem("action subject '" + a.subject + "' is a sensor");
            return std::nullopt;
        }
        if (component->kind == ComponentKind::conveyor) {
            actuator = drive_of(*component);
            if (!actuator)
                return std::nullopt;
        }
        const auto* entry = io_entry(*actuator, IoDirection::output);
        if (!entry) {
            std::string via = actuator == component ? "" : " (driving '" + a.subject + "')";
            problem(std::string(to_string(actuator->kind)) + " '" + actuator->name + "'" + via +
                    " has no io_mapping output entry");
            return std::nullopt;
        }
        return record(a.subject, entry->variable_name, BindingKind::actuator);
    }

    [[nodiscard]] const std::vector<std::string>& problems() const noexcept { return problems_; }
    [[nodiscard]] const std::vector<SfcBinding>& bindings() const noexcept { return bindings_; }

private:
    void problem(std::string p)
    {
        if (std::find(problems_.begin(), problems_.end(), p) == problems_.end())
            problems_.push_back(std::move(p));
    }

    std::string record(const std::string& subject, const std::string& variable, BindingKind kind)
    {
        SfcBinding b{subject, variable, kind};
        if (std::find(bindings_.begin(), bindings_.end(), b) == bindings_.end())
            bindings_.push_back(std::move(b));
        return variable;
    }

    const IoMapEntry* io_entry(const Component& component, IoDirection direction) const
    {
        const auto path = component_path(model_, component.name);
        for (const auto& e : model_.control.io_mapping) {
            if (e.direction != direction)
                continue;
            try {
                const auto h = resolve(model_, e.component_path);
                if (h && h->path == path)
                    return &e;
            }
            catch (const PathError&) {
            }
        }
        return nullptr;
    }

    // The unique actuator with a "drives" reference to the conveyor.
    const Component* drive_of(const Component& conveyor)
    {
        const auto target = component_path(model_, conveyor.name);
        std::vector<const Component*> drives;
        for (const auto& r : model_.cross_refs) {
            if (r.kind != "drives" || r.target != target)
                continue;
            for (const auto& c : model_.components)
                if (is_actuating(c.kind) && component_path(model_, c.name) == r.source)
                    drives.push_back(&c);
        }
        if (drives.size() == 1)
            return drives.front();
        problem(drives.empty() ? "conveyor '" + conveyor.name + "' has no actuator with a drives reference"
                               : "conveyor '" + conveyor.name + "' has more than one driving actuator");
        return nullptr;
    }

    const ModuleModel& model_;
    std::vector<std::string> problems_;
    std::vector<SfcBinding> bindings_;
};

}  // namespace detail

// Binds every guard and action subject against the model and builds the
// chart. All binding problems are collected into one BindingError.
inline SfcProgram iml_to_sfc(const ImlDocument& iml, const ModuleModel& model)
{
    if (iml.entries.empty())
        throw StructuralError("behavior '" + iml.source_graph_id + "' has no entry step");
    detail::Binder binder(model);
    SfcProgram program;
    program.name = iml.source_graph_id;

    std::map<std::string, std::vector<SfcAtom>> guards_of;
    for (const auto& entry : iml.entries) {
        SfcStep step{entry.step_id, entry.predecessors.empty(), {}};
        for (const auto& a : entry.actions)
            if (auto var = binder.bind_action(a))
                step.actions.push_back({a.kind == ActionKind::activate ? 'S' : 'R', *var});
        auto& atoms = guards_of[entry.step_id];
        for (const auto& g : entry.guards)
            if (auto var = binder.bind_condition(g))
                atoms.push_back({*var, g.kind == ConditionKind::sensor_false});
        program.steps.push_back(std::move(step));
    }
    if (!binder.problems().empty())
        throw BindingError(binder.problems());

    for (const auto& entry : iml.entries)
        for (const auto& pred : entry.predecessors)
            program.transitions.push_back({pred, entry.step_id, guards_of[entry.step_id]});

    program.bindings = binder.bindings();
    for (const auto& v : model.control.variables)
        program.variables.push_back({v.name, v.data_type, v.scope});
    const auto declared = [&](const std::string& name) {
        return std::any_of(program.variables.begin(), program.variables.end(),
                           [&](const auto& v) { return v.name == name; });
    };
    for (const auto& b : program.bindings) {
        if (declared(b.variable))
            continue;
        switch (b.kind) {
        case BindingKind::request: program.variables.push_back({b.variable, "BOOL", "request"}); break;
        case BindingKind::sensor: program.variables.push_back({b.variable, "BOOL", "input"}); break;
        case BindingKind::actuator: program.variables.push_back({b.variable, "BOOL", "output"}); break;
        }
    }
    return program;
}

// ---------------------------------------------------------------------------
// PLCopen-style XML
//
// project/types/pous/pou(name, pouType="program")
//   interface/localVars/variable(name, scope)/type(name)
//   addData/binding(subject, variable, kind)
//   body/SFC: step, selectionDivergence, transition, jumpStep

inline std::string emit_plcopen(const SfcProgram& program)
{
    auto project = xml::element("project");
    auto& pous = project.add_child(xml::element("types")).add_child(xml::element("pous"));
    auto& pou = pous.add_child(xml::element("pou"));
    pou.add_attribute("name", program.name).add_attribute("pouType", "program");

    auto& vars = pou.add_child(xml::element("interface")).add_child(xml::element("localVars"));
    for (const auto& v : program.variables) {
        auto& var = vars.add_child(xml::element("variable"));
        var.add_attribute("name", v.name).add_attribute("scope", v.scope);
        var.add_child(xml::element("type")).add_attribute("name", v.data_type);
    }
    auto& add_data = pou.add_child(xml::element("addData"));
    for (const auto& b : program.bindings)
        add_data.add_child(xml::element("binding"))
            .add_attribute("subject", b.subject)
            .add_attribute("variable", b.variable)
            .add_attribute("kind", std::string(to_string(b.kind)));

    auto& sfc = pou.add_child(xml::element("body")).add_child(xml::element("SFC"));
    for (const auto& s : program.steps) {
        auto& step = sfc.add_child(xml::element("step"));
        step.add_attribute("name", s.name).add_attribute("initialStep", s.initial ? "true" : "false");
        if (!s.actions.empty()) {
            auto& block = step.add_child(xml::element("actionBlock"));
            for (const auto& a : s.actions) {
                auto& action = block.add_child(xml::element("action"));
                action.add_attribute("qualifier", std::string(1, a.qualifier));
                action.add_child(xml::element("reference")).add_attribute("name", a.variable);
            }
        }
        const auto branches = std::count_if(program.transitions.begin(), program.transitions.end(),
                                            [&](const auto& t) { return t.from == s.name; });
        if (branches > 1)
            sfc.add_child(xml::element("selectionDivergence"))
                .add_attribute("step", s.name)
                .add_attribute("branches", std::to_string(branches));
    }
    for (const auto& t : program.transitions) {
        auto& tr = sfc.add_child(xml::element("transition"));
        tr.add_attribute("from", t.from).add_attribute("to", t.to);
        auto& st = tr.add_child(xml::element("condition")).add_child(xml::element("inline")).add_child(xml::element("ST"));
        st.text = expression(t.atoms);
    }
    if (const auto* initial = program.initial_step())
        for (const auto& name : program.terminal_steps())
            sfc.add_child(xml::element("jumpStep")).add_attribute("from", name).add_attribute("targetName", initial->name);
    return xml::write(project);
}

namespace detail {

[[noreturn]] inline void plc_fail(const xml::Node& n, const std::string& message)
{
    throw ParseError(message, n.line, n.column);
}

inline const xml::Node& only_child(const xml::Node& n, std::string_view name)
{
    const xml::Node* found = nullptr;
    for (const auto& c : n.children) {
        if (c.name != name)
            continue;
        if (found)
            plc_fail(c, "more than one <" + std::string(name) + "> in <" + n.name + ">");
        found = &c;
    }
    if (!found)
        plc_fail(n, "<" + n.name + "> lacks <" + std::string(name) + ">");
    return *found;
}

inline const std::string& required_attribute(const xml::Node& n, std::string_view key)
{
    const auto* v = n.attribute(key);
    if (!v)
        plc_fail(n, "<" + n.name + "> lacks attribute '" + std::string(key) + "'");
    return *v;
}

inline std::vector<SfcAtom> parse_expression(const xml::Node& n, std::string_view text)
{
    std::vector<SfcAtom> atoms;
    if (text == "TRUE")
        return atoms;
    while (true) {
        const auto sep = text.find(" AND ");
        auto atom = text.substr(0, sep);
        SfcAtom a;
        if (atom.substr(0, 4) == "NOT ") {
            a.negated = true;
            atom.remove_prefix(4);
        }
        if (!is_valid_segment(atom))
            plc_fail(n, "unsupported condition expression '" + std::string(text) + "'");
        a.variable = std::string(atom);
        atoms.push_back(std::move(a));
        if (sep == std::string_view::npos)
            break;
        text = text.substr(sep + 5);
    }
    return atoms;
}

}  // namespace detail

inline SfcProgram parse_plcopen(std::string_view bytes)
{
    const auto root = xml::parse(bytes);
    if (root.name != "project")
        detail::plc_fail(root, "root element must be <project>, got <" + root.name + ">");
    const auto& pous = detail::only_child(detail::only_child(root, "types"), "pous");
    const auto& pou = detail::only_child(pous, "pou");
    SfcProgram program;
    program.name = detail::required_attribute(pou, "name");

    for (const auto& v : detail::only_child(detail::only_child(pou, "interface"), "localVars").children) {
        if (v.name != "variable")
            detail::plc_fail(v, "unexpected <" + v.name + "> in <localVars>");
        program.variables.push_back({detail::required_attribute(v, "name"),
                                     detail::required_attribute(detail::only_child(v, "type"), "name"),
                                     detail::required_attribute(v, "scope")});
    }
    for (const auto& b : pou.children) {
        if (b.name != "addData")
            continue;
        for (const auto& c : b.children) {
            if (c.name != "binding")
                detail::plc_fail(c, "unexpected <" + c.name + "> in <addData>");
            const auto kind = parse_binding_kind(detail::required_attribute(c, "kind"));
            if (!kind)
                detail::plc_fail(c, "unknown binding kind");
            program.bindings.push_back(
                {detail::required_attribute(c, "subject"), detail::required_attribute(c, "variable"), *kind});
        }
    }

    const auto& sfc = detail::only_child(detail::only_child(pou, "body"), "SFC");
    std::map<std::string, std::size_t> divergences;
    std::vector<std::pair<std::string, std::string>> jumps;
    for (const auto& n : sfc.children) {
        if (n.name == "step") {
            SfcStep step{detail::required_attribute(n, "name"), false, {}};
            const auto& initial = detail::required_attribute(n, "initialStep");
            if (initial != "true" && initial != "false")
                detail::plc_fail(n, "initialStep must be true or false");
            step.initial = initial == "true";
            for (const auto& block : n.children) {
                if (block.name != "actionBlock")
                    detail::plc_fail(block, "unexpected <" + block.name + "> in <step>");
                for (const auto& a : block.children) {
                    const auto& q = detail::required_attribute(a, "qualifier");
                    if (a.name != "action" || (q != "S" && q != "R"))
                        detail::plc_fail(a, "expected <action> with qualifier S or R");
                    step.actions.push_back(
                        {q[0], detail::required_attribute(detail::only_child(a, "reference"), "name")});
                }
            }
            program.steps.push_back(std::move(step));
        }
        else if (n.name == "transition") {
            const auto& st = detail::only_child(detail::only_child(detail::only_child(n, "condition"), "inline"), "ST");
            program.transitions.push_back({detail::required_attribute(n, "from"), detail::required_attribute(n, "to"),
                                           detail::parse_expression(st, st.text)});
        }
        else if (n.name == "selectionDivergence") {
            divergences[detail::required_attribute(n, "step")] =
                static_cast<std::size_t>(std::stoul(detail::required_attribute(n, "branches")));
        }
        else if (n.name == "jumpStep") {
            jumps.emplace_back(detail::required_attribute(n, "from"), detail::required_attribute(n, "targetName"));
        }
        else {
            detail::plc_fail(n, "unexpected <" + n.name + "> in <SFC>");
        }
    }

    const auto initials = std::count_if(program.steps.begin(), program.steps.end(), [](const auto& s) { return s.initial; });
    if (!program.steps.empty() && initials != 1)
        detail::plc_fail(sfc, "SFC must have exactly one initial step");
    const auto declared = [&](const std::string& name) {
        return std::any_of(program.variables.begin(), program.variables.end(),
                           [&](const auto& v) { return v.name == name; });
    };
    for (const auto& s : program.steps)
        for (const auto& a : s.actions)
            if (!declared(a.variable))
                detail::plc_fail(sfc, "step '" + s.name + "' refers to undeclared variable '" + a.variable + "'");
    for (const auto& t : program.transitions)
        for (const auto& atom : t.atoms)
            if (!declared(atom.variable))
                detail::plc_fail(sfc, "transition condition refers to undeclared variable '" + atom.variable + "'");
    for (const auto& b : program.bindings)
        if (!declared(b.variable))
            detail::plc_fail(sfc, "binding refers to undeclared variable '" + b.variable + "'");
    for (const auto& t : program.transitions)
        for (const auto* end : {&t.from, &t.to})
            if (std::none_of(program.steps.begin(), program.steps.end(), [&](const auto& s) { return s.name == *end; }))
                detail::plc_fail(sfc, "transition refers to unknown step '" + *end + "'");
    for (const auto& s : program.steps) {
        const auto branches = static_cast<std::size_t>(std::count_if(
            program.transitions.begin(), program.transitions.end(), [&](const auto& t) { return t.from == s.name; }));
        const auto it = divergences.find(s.name);
        if ((branches > 1) != (it != divergences.end()) || (it != divergences.end() && it->second != branches))
            detail::plc_fail(sfc, "selectionDivergence does not match the transitions of step '" + s.name + "'");
    }
    if (const auto* initial = program.initial_step()) {
        std::vector<std::pair<std::string, std::string>> expected;
        for (const auto& name : program.terminal_steps())
            expected.emplace_back(name, initial->name);
        if (expected != jumps)
            detail::plc_fail(sfc, "jumpStep elements do not match the terminal steps");
    }
    return program;
}

// ---------------------------------------------------------------------------
// Simulation
//
// Level-triggered token walk. The token starts on the entry step. After each
// event the walk settles: among the current step's successors, the ones whose
// guards all hold are candidates; two or more is an ambiguity error, exactly
// one moves the token and emits that step's actions, and the walk repeats. A
// step without successors returns the token to the entry step. Entering a
// step guarded by an order request consumes the request.

enum class EventKind
{
    sensor,
    order,
};

struct TraceEvent
{
    EventKind kind = EventKind::sensor;
    std::string subject;
    bool value = true;  // sensor level; always true for orders

    bool operator==(const TraceEvent&) const = default;
};

inline std::string to_string(const TraceEvent& e)
{
    if (e.kind == EventKind::order)
        return "order " + e.subject;
    return "sensor " + e.subject + (e.value ? " on" : " off");
}

// "sensor LB_in on", "sensor LB_in off", "order output_1"; '#' comments.
inline std::vector<TraceEvent> parse_trace(std::string_view text)
{
    std::vector<TraceEvent> out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        std::vector<std::string_view> words;
        while (true) {
            const auto start = line.find_first_not_of(" \t\r");
            if (start == std::string_view::npos)
                break;
            line.remove_prefix(start);
            const auto end = line.find_first_of(" \t\r");
            words.push_back(line.substr(0, end));
            if (end == std::string_view::npos)
                break;
            line.remove_prefix(end);
        }
        if (words.empty())
            continue;
        if (words[0] == "sensor" && words.size() == 3 && is_valid_segment(words[1]) &&
            (words[2] == "on" || words[2] == "off"))
            out.push_back({EventKind::sensor, std::string(words[1]), words[2] == "on"});
        else if (words[0] == "order" && words.size() == 2 && is_valid_segment(words[1]))
            out.push_back({EventKind::order, std::string(words[1]), true});
        else
            throw ParseError("expected 'sensor <name> on|off' or 'order <port>'", line_no);
    }
    return out;
}

inline std::string write_trace(const std::vector<TraceEvent>& trace)
{
    std::string out;
    for (const auto& e : trace)
        out += to_string(e) + "\n";
    return out;
}

struct ActuatorEvent
{
    ActionKind kind = ActionKind::activate;
    std::string subject;

    bool operator==(const ActuatorEvent&) const = default;
};

inline std::string to_string(const ActuatorEvent& e) { return std::string(to_string(e.kind)) + " " + e.subject; }

struct SimulationResult
{
    std::vector<ActuatorEvent> events;
    std::string final_step;

    bool operator==(const SimulationResult&) const = default;
};

inline std::string write_events(const std::vector<ActuatorEvent>& events)
{
    std::string out;
    for (const auto& e : events)
        out += to_string(e) + "\n";
    return out;
}

namespace detail {

// Shared walk over an abstract chart: steps by index, guard check and action
// emission supplied by the caller.
struct Walk
{
    std::size_t entry = 0;
    std::vector<std::vector<std::size_t>> successors;
    std::function<bool(std::size_t)> enabled;   // all guards of the step hold
    std::function<void(std::size_t)> enter;     // consume requests, emit actions
    std::function<std::string(std::size_t)> name;

    std::size_t settle(std::size_t current) const
    {
        const std::size_t limit = 4 * successors.size() + 16;
        for (std::size_t moves = 0;; ++moves) {
            if (moves > limit)
                throw SimulationError("no stable step reached from '" + name(current) +
                                      "' (guards never block the token)");
            if (successors[current].empty()) {
                if (current == entry)
                    return current;
                current = entry;
                enter(current);
                continue;
            }
            std::vector<std::size_t> candidates;
            for (const auto s : successors[current])
                if (enabled(s))
                    candidates.push_back(s);
            if (candidates.empty())
                return current;
            if (candidates.size() > 1)
                throw SimulationError("ambiguous branch after step '" + name(current) + "': both '" +
                                      name(candidates[0]) + "' and '" + name(candidates[1]) + "' are enabled");
            current = candidates.front();
            enter(current);
        }
    }
};

}  // namespace detail

inline SimulationResult simulate(const BehaviorGraph& graph, const std::vector<TraceEvent>& trace)
{
    SimulationResult result;
    const auto* entry = graph.entry();
    if (!entry) {
        if (!trace.empty())
            throw SimulationError("behavior '" + graph.id + "' has no entry step");
        return result;
    }
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < graph.steps.size(); ++i)
        index[graph.steps[i].id] = i;
    std::set<std::string> sensors;
    std::set<std::string> ports;
    for (const auto& s : graph.steps)
        for (const auto& g : s.guards)
            (g.kind == ConditionKind::order_request ? ports : sensors).insert(g.subject);

    std::map<std::string, bool> level;
    std::set<std::string> pending;
    detail::Walk walk;
    walk.entry = index[entry->id];
    walk.successors.resize(graph.steps.size());
    for (const auto& e : graph.edges)
        walk.successors[index[e.from]].push_back(index[e.to]);
    walk.name = [&](std::size_t i) { return graph.steps[i].id; };
    walk.enabled = [&](std::size_t i) {
        return std::all_of(graph.steps[i].guards.begin(), graph.steps[i].guards.end(), [&](const Condition& c) {
            switch (c.kind) {
            case ConditionKind::sensor_true: return level[c.subject];
            case ConditionKind::sensor_false: return !level[c.subject];
            case ConditionKind::order_request: return pending.count(c.subject) > 0;
            }
            return false;
        });
    };
    walk.enter = [&](std::size_t i) {
        for (const auto& c : graph.steps[i].guards)
            if (c.kind == ConditionKind::order_request)
                pending.erase(c.subject);
        for (const auto& a : graph.steps[i].actions)
            result.events.push_back({a.kind, a.subject});
    };

    std::size_t current = walk.entry;
    walk.enter(current);
    current = walk.settle(current);
    for (const auto& ev : trace) {
        if (ev.kind == EventKind::sensor) {
            if (!sensors.count(ev.subject))
                throw SimulationError("trace names unknown sensor '" + ev.subject + "'");
            level[ev.subject] = ev.value;
        }
        else {
            if (!ports.count(ev.subject))
                throw SimulationError("trace names unknown order port '" + ev.subject + "'");
            pending.insert(ev.subject);
        }
        current = walk.settle(current);
    }
    result.final_step = graph.steps[current].id;
    return result;
}

// The same walk over a chart: variables hold levels, request variables are
// reset when a transition that tests them fires, S/R actions map back to the
// subject bound to their variable.
inline SimulationResult simulate_sfc(const SfcProgram& program, const std::vector<TraceEvent>& trace)
{
    SimulationResult result;
    const auto* initial = program.initial_step();
    if (!initial) {
        if (!trace.empty())
            throw SimulationError("chart '" + program.name + "' has no initial step");
        return result;
    }
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < program.steps.size(); ++i)
        index[program.steps[i].name] = i;
    const auto subject_of = [&](const std::string& variable) {
        for (const auto& b : program.bindings)
            if (b.kind == BindingKind::actuator && b.variable == variable)
                return b.subject;
        return variable;
    };
    const auto bound = [&](BindingKind kind, const std::string& subject) -> const SfcBinding* {
        for (const auto& b : program.bindings)
            if (b.kind == kind && b.subject == subject)
                return &b;
        return nullptr;
    };
    std::set<std::string> requests;
    for (const auto& b : program.bindings)
        if (b.kind == BindingKind::request)
            requests.insert(b.variable);

    std::map<std::string, bool> value;
    // Guard atoms of the transition into each step (all incoming transitions share the target's guards).
    std::vector<std::vector<SfcAtom>> guard(program.steps.size());
    detail::Walk walk;
    walk.entry = index[initial->name];
    walk.successors.resize(program.steps.size());
    for (const auto& t : program.transitions) {
        walk.successors[index[t.from]].push_back(index[t.to]);
        guard[index[t.to]] = t.atoms;
    }
    walk.name = [&](std::size_t i) { return program.steps[i].name; };
    walk.enabled = [&](std::size_t i) {
        return std::all_of(guard[i].begin(), guard[i].end(),
                           [&](const SfcAtom& a) { return value[a.variable] != a.negated; });
    };
    walk.enter = [&](std::size_t i) {
        for (const auto& a : guard[i])
            if (!a.negated && requests.count(a.variable))
                value[a.variable] = false;
        for (const auto& a : program.steps[i].actions) {
            value[a.variable] = a.qualifier == 'S';
            result.events.push_back({a.qualifier == 'S' ? ActionKind::activate : ActionKind::deactivate,
                                     subject_of(a.variable)});
        }
    };

    std::size_t current = walk.entry;
    walk.enter(current);
    current = walk.settle(current);
    for (const auto& ev : trace) {
        const auto* b = bound(ev.kind == EventKind::sensor ? BindingKind::sensor : BindingKind::request, ev.subject);
        if (!b)
            throw SimulationError("trace names unbound " +
                                  std::string(ev.kind == EventKind::sensor ? "sensor '" : "order port '") +
                                  ev.subject + "'");
        value[b->variable] = ev.value;
        current = walk.settle(current);
    }
    result.final_step = program.steps[current].name;
    return result;
}

}  // namespace automfm
