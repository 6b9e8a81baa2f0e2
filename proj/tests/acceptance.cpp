// Acceptance run: one PASS/FAIL line per criterion, each with a wall-clock
// limit. Exit status is non-zero when any criterion fails.

#include "cli.hpp"
#include "support/generators.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace fs = std::filesystem;
using namespace automfm;

namespace {

struct Outcome
{
    bool ok = true;
    std::string note;

    void require(bool cond, const std::string& what)
    {
        if (!cond && ok) {
            ok = false;
            note = what;
        }
    }
};

struct Criterion
{
    const char* id;
    const char* title;
    double limit_s;
    std::function<Outcome()> check;
};

using Ids = std::set<std::string>;

Outcome mapping_conformance()
{
    Outcome o;
    const std::map<std::string, std::pair<Ids, Ids>> reference{
        {"Control.ControlFunction",
         {{"AutomationMLCSRoleClassLib", "ControlEquipment"},
          {"AutomationMLBaseInterface", "AttachmentInterface", "ExternalDataConnector.PLOpenXMLInterface"}}},
        {"Function.LogisticFunction",
         {{"AutomationMLExtendedRoleClassLib"},
          {"AutomationMLBaseInterface", "AttachmentInterface", "ExternalDataConnector", "COLLADAInterface"}}},
        {"General.Identification",
         {{"AutomationMLDMIRoleClassLib", "DiscManufacturingEquipment", "AutomationMLExtendedRoleClassLib"},
          {"AutomationMLInterfaceClassLib", "AutomationMLBaseInterface", "CommunicationInterfaceClassLib"}}},
    };
    const auto table = mapping::default_table();
    o.require(table.entries().size() == reference.size(), "entry count");
    for (const auto& [cls, sets] : reference) {
        o.require(mapping::roles_for(table, cls) == sets.first, cls + " roles");
        o.require(mapping::interfaces_for(table, cls) == sets.second, cls + " interfaces");
    }
    o.require(mapping::parse_rule_table(mapping::write_rule_table(table)) == table, "rule text closure");
    o.require(!mapping::roles_for(table, "Status.RuntimeVariable"), "uncovered class must be absent");
    o.require(mapping::validate_assignments(fixture::tjunction(), table).empty(), "fixture assignments");
    return o;
}

Outcome round_trips()
{
    Outcome o;
    const auto once = caex::serialize(caex::parse(caex::write_model(fixture::tjunction())));
    o.require(caex::serialize(caex::parse(once)) == once, "fixture canonical idempotence");
    o.require(caex::to_model(caex::from_model(fixture::tjunction())).model == fixture::tjunction(), "fixture model");
    for (std::uint32_t seed = 0; seed < 200 && o.ok; ++seed) {
        testgen::ModelGenerator gen(seed);
        const auto m = gen.model();
        const auto r = caex::to_model(caex::from_model(m));
        o.require(r.model == m && r.violations.empty(), "model round trip, seed " + std::to_string(seed));
        const auto imported = import_table(m, export_table(m, {}));
        o.require(imported.model == m && imported.violations.empty(),
                  "export/import closure, seed " + std::to_string(seed));
    }
    return o;
}

Outcome link_property()
{
    Outcome o;
    std::size_t checked = 0;
    for (std::uint32_t seed = 0; checked < 500 && seed < 2000; ++seed) {
        testgen::ModelGenerator gen(seed + 10000);
        const auto m = gen.model();
        o.require(check_links(m).empty(), "generated model not clean, seed " + std::to_string(seed));
        const auto candidates = testgen::ModelGenerator::removable_paths(m);
        if (candidates.empty())
            continue;
        const auto victim = gen.pick(candidates);
        const auto after = remove_element(m, victim);
        std::multiset<std::pair<std::string, std::string>> expected, got;
        for (std::size_t i = 0; i < after.cross_refs.size(); ++i) {
            const auto at = after.id + "/cross_refs/" + std::to_string(i);
            if (after.cross_refs[i].source == victim)
                expected.insert({"link.dangling-source", at});
            if (after.cross_refs[i].target == victim)
                expected.insert({"link.dangling-target", at});
        }
        for (const auto& d : after.documents)
            if (d.assigned_element == victim)
                expected.insert({"link.dangling-assignment", after.id + "/documents/" + d.id});
        for (const auto& v : check_links(after))
            got.insert({v.rule_id, v.element_path});
        o.require(got == expected, "seed " + std::to_string(seed) + " removed " + victim);
        ++checked;
    }
    o.require(checked >= 500, "only " + std::to_string(checked) + " models checked");
    if (o.ok)
        o.note = std::to_string(checked) + " models";
    return o;
}

Outcome stage_completeness()
{
    Outcome o;
    const auto matrix = default_coverage_matrix();
    for (const auto s : all_stages)
        if (matrix.covers(s))
            o.require(check_completeness(fixture::tjunction(), s, matrix).empty(),
                      "fixture incomplete at " + std::string(to_string(s)));
    const auto v = check_completeness(fixture::without_electrical(fixture::tjunction()), Stage::control_hmi_eng, matrix);
    std::set<std::string> logical;
    for (const auto& x : v)
        if (x.message.find("logical_address") != std::string::npos)
            logical.insert(x.element_path);
    std::set<std::string> expected;
    for (std::size_t i = 0; i < 8; ++i)
        expected.insert("tjunction-01/control/io_mapping/" + std::to_string(i));
    o.require(logical == expected, "logical_address violations");
    return o;
}

Outcome behavior_pipeline()
{
    Outcome o;
    const auto graph = fixture::behavior();
    const auto sfc = iml_to_sfc(to_iml(graph), fixture::tjunction());
    using E = ActuatorEvent;
    const auto on = ActionKind::activate;
    const auto off = ActionKind::deactivate;
    const std::map<std::string, std::vector<E>> walked{
        {"output_1", {{on, "Conv1"}, {off, "Conv1"}}},
        {"output_2", {{on, "Conv1"}, {on, "Conv2"}, {on, "Switch"}, {off, "Conv1"}, {off, "Conv2"}, {off, "Switch"}}},
    };
    std::size_t traces = 0;
    for (const auto& [port, expected] : walked) {
        const std::string out_sensor = port == "output_1" ? "LB_out1" : "LB_out2";
        for (const bool order_first : {true, false})
            for (const bool leave : {false, true}) {
                std::vector<TraceEvent> t;
                const TraceEvent arrive{EventKind::sensor, "LB_in", true};
                const TraceEvent order{EventKind::order, port, true};
                t = order_first ? std::vector<TraceEvent>{order, arrive} : std::vector<TraceEvent>{arrive, order};
                if (leave)
                    t.push_back({EventKind::sensor, "LB_in", false});
                t.push_back({EventKind::sensor, out_sensor, true});
                const auto a = simulate(graph, t);
                const auto b = simulate_sfc(sfc, t);
                o.require(a.events == expected, "graph walk: " + write_trace(t));
                o.require(a == b, "graph and chart differ: " + write_trace(t));
                o.require(a.final_step == "1.0", "final step: " + write_trace(t));
                ++traces;
            }
    }
    o.require(traces <= 12, "trace budget");
    for (const auto& [text, port] : {std::pair{fixture::trace_output_1, "output_1"}, {fixture::trace_output_2, "output_2"}}) {
        const auto t = parse_trace(text);
        const auto a = simulate(graph, t);
        o.require(a.events == walked.at(port) && a == simulate_sfc(sfc, t), std::string("scenario ") + port);
    }
    if (o.ok)
        o.note = std::to_string(traces) + " traces + 2 scenarios";
    return o;
}

Outcome plcopen()
{
    Outcome o;
    const auto sfc = iml_to_sfc(to_iml(fixture::behavior()), fixture::tjunction());
    o.require(sfc.steps.size() == 7, "7 steps");
    o.require(sfc.transitions.size() == 6, "6 transitions");
    o.require(sfc.initial_step() && sfc.initial_step()->name == "1.0", "initial step");
    std::map<std::string, std::size_t> out_degree;
    for (const auto& t : sfc.transitions)
        ++out_degree[t.from];
    std::size_t divergences = 0;
    for (const auto& [from, n] : out_degree)
        divergences += n > 1;
    o.require(divergences == 1 && out_degree["1.0"] == 2, "one divergence after the entry step");
    const auto text = emit_plcopen(sfc);
    o.require(parse_plcopen(text) == sfc, "re-parse equality");
    o.require(emit_plcopen(parse_plcopen(text)) == text, "re-emit equality");
    return o;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome cli_exit_codes()
{
    Outcome o;
    const auto dir = fs::temp_directory_path() / ("automfm-acceptance-" + std::to_string(std::random_device{}()));
    fs::remove_all(dir);
    const auto run = [](std::vector<std::string> args) {
        std::ostringstream out, err;
        const int code = cli::run(std::move(args), out, err);
        return std::tuple{code, out.str(), err.str()};
    };
    const auto at = [&](const char* f) { return (dir / f).string(); };
    o.require(std::get<0>(run({"init-example", dir.string()})) == 0, "init-example");

    auto text = slurp(dir / "model.aml");
    const auto tamper = [&](const char* name, const std::string& from, const std::string& to) {
        auto t = text;
        const auto pos = t.find(from);
        if (pos != std::string::npos)
            t.replace(pos, from.size(), to);
        std::ofstream(dir / name, std::ios::binary) << t;
        return pos != std::string::npos;
    };
    o.require(tamper("role.aml", "ControlEquipment", "DiscManufacturingEquipment"), "tamper role");
    o.require(tamper("param.aml", "<Value>%I0.0</Value>", "<Value></Value>"), "tamper parameter");

    const std::vector<std::pair<std::vector<std::string>, int>> cases{
        {{"validate", at("model.aml")}, 0},
        {{"complete-check", at("model.aml"), "--stage", "control_hmi_eng"}, 0},
        {{"validate", at("role.aml")}, 1},
        {{"complete-check", at("param.aml"), "--stage", "control_hmi_eng"}, 1},
        {{"validate", at("unreadable.aml")}, 2},
        {{"--format", "structured", "validate", at("role.aml")}, 1},
        {{"--format", "structured", "validate", at("unreadable.aml")}, 2},
    };
    for (const auto& [args, code] : cases) {
        const auto first = run(args);
        const auto second = run(args);
        o.require(std::get<0>(first) == code, args[0] + " " + args.back() + " exit " +
                                                  std::to_string(std::get<0>(first)) + ", want " + std::to_string(code));
        o.require(first == second, "outputs differ across runs: " + args.back());
    }
    fs::remove_all(dir);
    return o;
}

Outcome dependency_report_check()
{
    Outcome o;
    const auto r = dependency_report(fixture::tjunction(), default_ownership_map());
    double sum = 0;
    double best = -1;
    std::pair<Discipline, Discipline> argmax{};
    std::size_t ties = 0;
    for (const auto a : all_disciplines)
        for (const auto b : all_disciplines) {
            const double c = r.matrix.cell(a, b);
            sum += c;
            if (a == b)
                continue;
            if (c > best + 1e-12) {
                best = c;
                argmax = {a, b};
                ties = 1;
            }
            else if (std::abs(c - best) <= 1e-12)
                ++ties;
        }
    o.require(std::abs(sum - 1.0) <= 1e-9, "cells sum to " + std::to_string(sum));
    o.require(argmax == std::pair{Discipline::electrical, Discipline::software} && ties == 1,
              "largest off-diagonal cell is not electrical -> software");
    if (o.ok)
        o.note = "electrical->software " + cli::fixed(best);
    return o;
}

}  // namespace

int main()
{
    const std::vector<Criterion> criteria{
        {"AC1", "default mapping table equals the reference rule sets", 1.0, mapping_conformance},
        {"AC2", "round trips: canonical text, 200 random models, table closure", 10.0, round_trips},
        {"AC3", "link check reports exactly the incident references (500 models)", 30.0, link_property},
        {"AC4", "stage completeness on the fixture and without electrical data", 1.0, stage_completeness},
        {"AC5", "graph and chart simulation agree on all single-unit traces", 5.0, behavior_pipeline},
        {"AC6", "PLCopen chart: 7 steps, 6 transitions, one divergence, re-parse", 1.0, plcopen},
        {"AC7", "CLI exit codes 0/1/2, byte-identical across runs", 5.0, cli_exit_codes},
        {"AC8", "dependency cells sum to 1, electrical->software largest (tol 1e-9)", 1.0, dependency_report_check},
    };
    bool all = true;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        }
        catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (o.ok && elapsed > c.limit_s) {
            o.ok = false;
            o.note = "over time limit";
        }
        all = all && o.ok;
        std::printf("%s %s: %s [%.3fs / limit %.0fs]%s%s\n", o.ok ? "PASS" : "FAIL", c.id, c.title, elapsed, c.limit_s,
                    o.note.empty() ? "" : " - ", o.note.c_str());
    }
    return all ? 0 : 1;
}
