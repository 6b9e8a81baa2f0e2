#pragma once

// The automfm command line. run() takes the arguments after the program name
// and writes to the given streams so it can be driven in-process.

#include "automfm/automfm.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace automfm::cli {

enum ExitCode
{
    exit_clean = 0,
    exit_findings = 1,
    exit_failure = 2,
};

// Operational failure: unreadable file, parse error, bad option value.
struct Failure : Error
{
    using Error::Error;
};

struct Options
{
    std::string rules_path;
    std::string matrix_path;
    std::string ownership_path;
    std::string format = "text";
    bool force = false;

    [[nodiscard]] bool structured() const { return format == "structured"; }
};

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Failure(path + ": cannot open file");
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad())
        throw Failure(path + ": read error");
    return bytes;
}

inline void write_file(const std::string& path, const std::string& bytes)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Failure(path + ": cannot open file for writing");
    out << bytes;
    out.flush();
    if (!out)
        throw Failure(path + ": write error");
}

// Explicit flag, else <AUTOMFM_CONFIG_DIR>/<file> when present, else the built-in default.
inline std::optional<std::string> config_text(const std::string& flag, const char* file_name)
{
    if (!flag.empty())
        return read_file(flag);
    if (const char* dir = std::getenv("AUTOMFM_CONFIG_DIR"); dir && *dir) {
        const auto path = std::filesystem::path(dir) / file_name;
        if (std::filesystem::exists(path))
            return read_file(path.string());
    }
    return std::nullopt;
}

template <typename T, typename Parse, typename Default>
T load_config(const std::string& flag, const char* file_name, Parse&& parse, Default&& fallback)
{
    const auto text = config_text(flag, file_name);
    if (!text)
        return fallback();
    try {
        return parse(*text);
    }
    catch (const ParseError& e) {
        throw Failure((flag.empty() ? std::string(file_name) : flag) + ":" + e.what());
    }
}

inline mapping::MappingRuleTable load_rules(const Options& o)
{
    return load_config<mapping::MappingRuleTable>(o.rules_path, "mapping.rules", mapping::parse_rule_table,
                                                  mapping::default_table);
}

inline StageCoverageMatrix load_matrix(const Options& o)
{
    return load_config<StageCoverageMatrix>(o.matrix_path, "coverage.matrix", parse_coverage_matrix,
                                            default_coverage_matrix);
}

inline OwnershipMap load_ownership(const Options& o)
{
    return load_config<OwnershipMap>(o.ownership_path, "ownership.map", parse_ownership_map, default_ownership_map);
}

inline caex::ModelReadResult load_model(const std::string& path)
{
    const auto bytes = read_file(path);
    try {
        return caex::read_model(bytes);
    }
    catch (const ParseError& e) {
        throw Failure(path + ":" + e.what());
    }
    catch (const StructuralError& e) {
        throw Failure(path + ": " + e.what());
    }
}

inline BehaviorGraph load_behavior(const std::string& path)
{
    const auto text = read_file(path);
    try {
        return parse_behavior(text);
    }
    catch (const ParseError& e) {
        throw Failure(path + ":" + e.what());
    }
}

inline std::vector<TraceEvent> load_trace(const std::string& path)
{
    const auto text = read_file(path);
    try {
        return parse_trace(text);
    }
    catch (const ParseError& e) {
        throw Failure(path + ":" + e.what());
    }
}

inline nlohmann::ordered_json to_json(const Violation& v)
{
    nlohmann::ordered_json j;
    j["rule_id"] = v.rule_id;
    j["severity"] = std::string(to_string(v.severity));
    j["element_path"] = v.element_path;
    j["message"] = v.message;
    j["stage"] = v.stage ? nlohmann::ordered_json(std::string(to_string(*v.stage))) : nlohmann::ordered_json();
    return j;
}

// Result of one file's pipeline, rendered after all files finish.
struct FileReport
{
    std::string file;
    std::vector<Violation> violations;
    std::optional<std::string> failure;

    [[nodiscard]] int exit_code() const
    {
        if (failure)
            return exit_failure;
        return has_errors(violations) ? exit_findings : exit_clean;
    }
};

inline void render(const FileReport& r, const Options& o, std::ostream& out, std::ostream& err)
{
    std::size_t counts[3] = {0, 0, 0};
    for (const auto& v : r.violations)
        ++counts[static_cast<int>(v.severity)];
    if (o.structured()) {
        for (const auto& v : r.violations) {
            auto j = to_json(v);
            j["file"] = r.file;
            out << j.dump() << '\n';
        }
        nlohmann::ordered_json s;
        s["file"] = r.file;
        s["status"] = r.failure ? "failed" : (r.exit_code() == exit_clean ? "clean" : "violations");
        if (r.failure)
            s["error"] = *r.failure;
        s["errors"] = counts[0];
        s["warnings"] = counts[1];
        s["infos"] = counts[2];
        out << s.dump() << '\n';
        return;
    }
    if (r.failure) {
        err << "error: " << *r.failure << '\n';
        return;
    }
    for (const auto& v : r.violations)
        out << r.file << ": " << format_text(v) << '\n';
    out << r.file << ": " << counts[0] << " error(s), " << counts[1] << " warning(s), " << counts[2] << " info(s)\n";
}

// Runs check on every file concurrently and renders in argument order.
template <typename Check>
int run_files(const std::vector<std::string>& files, const Options& o, std::ostream& out, std::ostream& err,
              Check&& check)
{
    std::vector<std::future<FileReport>> jobs;
    for (const auto& file : files)
        jobs.push_back(std::async(std::launch::async, [&check, file] {
            FileReport r{file, {}, std::nullopt};
            try {
                r.violations = check(file);
            }
            catch (const std::exception& e) {
                r.failure = e.what();
            }
            return r;
        }));
    int code = exit_clean;
    for (auto& job : jobs) {
        const auto r = job.get();
        render(r, o, out, err);
        code = std::max(code, r.exit_code());
    }
    return code;
}

inline std::string fixed(double value, int digits = 4)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, value);
    return buf;
}

inline int cmd_report(const std::string& file, const Options& o, std::ostream& out)
{
    const auto ownership = load_ownership(o);
    try {
        ownership.require_complete();
    }
    catch (const Error& e) {
        throw Failure(e.what());
    }
    const auto model = load_model(file).model;
    const auto report = dependency_report(model, ownership);
    const auto& m = report.matrix;
    if (o.structured()) {
        for (const auto a : all_disciplines)
            for (const auto b : all_disciplines) {
                nlohmann::ordered_json j;
                j["record"] = "dependency";
                j["source"] = std::string(to_string(a));
                j["target"] = std::string(to_string(b));
                j["count"] = m.counts[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
                j["share"] = fixed(m.cell(a, b));
                out << j.dump() << '\n';
            }
        for (const auto d : all_disciplines) {
            nlohmann::ordered_json j;
            j["record"] = "workload";
            j["discipline"] = std::string(to_string(d));
            j["share"] = fixed(report.workload[static_cast<std::size_t>(d)]);
            out << j.dump() << '\n';
        }
        nlohmann::ordered_json s;
        s["record"] = "summary";
        s["references"] = m.total;
        s["populated_parameters"] = report.populated_parameters;
        out << s.dump() << '\n';
        return exit_clean;
    }

    out << "dependencies: share of " << m.total << " cross references (row = source owner, column = target owner)\n";
    if (m.total == 0)
        out << "no references\n";
    std::string header = "            ";
    for (const auto d : all_disciplines) {
        std::string name(to_string(d));
        header += " " + std::string(11 - std::min<std::size_t>(11, name.size()), ' ') + name;
    }
    out << header << '\n';
    for (const auto a : all_disciplines) {
        std::string name(to_string(a));
        std::string line = name + std::string(12 - std::min<std::size_t>(12, name.size()), ' ');
        for (const auto b : all_disciplines)
            line += "      " + fixed(m.cell(a, b));
        out << line << '\n';
    }
    out << "workload: share of " << report.populated_parameters << " populated parameters\n";
    for (const auto d : all_disciplines) {
        std::string name(to_string(d));
        out << name << std::string(12 - std::min<std::size_t>(12, name.size()), ' ') << "      "
            << fixed(report.workload[static_cast<std::size_t>(d)]) << '\n';
    }
    return exit_clean;
}

inline int cmd_init_example(const std::string& dir, const Options& o, std::ostream& out)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    if (fs::exists(dir, ec)) {
        if (!fs::is_directory(dir, ec))
            throw Failure(dir + ": exists and is not a directory");
        if (!fs::is_empty(dir, ec) && !o.force)
            throw Failure(dir + ": directory is not empty (use --force to overwrite)");
    }
    fs::create_directories(fs::path(dir) / "traces", ec);
    if (ec)
        throw Failure(dir + ": " + ec.message());
    const auto model = fixture::tjunction();
    const std::vector<std::pair<std::string, std::string>> files{
        {"model.aml", caex::write_model(model)},
        {"behavior.bhv", std::string(fixture::behavior_text)},
        {"traces/output_1.trace", std::string(fixture::trace_output_1)},
        {"traces/output_2.trace", std::string(fixture::trace_output_2)},
        {"mapping.rules", mapping::write_rule_table(mapping::default_table())},
        {"coverage.matrix", std::string(default_coverage_text)},
        {"ownership.map", std::string(default_ownership_text)},
    };
    for (const auto& [name, bytes] : files) {
        write_file((fs::path(dir) / name).string(), bytes);
        out << "wrote " << (fs::path(dir) / name).generic_string() << '\n';
    }
    return exit_clean;
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"AutoMFM module models: validation, completeness, PLCopen generation, simulation, tables"};
    app.name("automfm");
    app.require_subcommand(1);
    Options o;
    app.add_option("--rules", o.rules_path, "mapping rule table file");
    app.add_option("--matrix", o.matrix_path, "stage coverage matrix file");
    app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "structured"}));
    app.add_flag("--force", o.force, "overwrite existing files");

    std::vector<std::string> files;
    std::string model_file, behavior_file, trace_file, table_file, output, iml_output, stage, class_filter, dir;
    std::string via = "graph";
    bool missing_only = false;

    auto* validate = app.add_subcommand("validate", "parse, check assignments, links and structure");
    validate->add_option("files", files, "model files (.aml)")->required();

    auto* complete = app.add_subcommand("complete-check", "list parameters a stage still needs");
    complete->add_option("file", model_file, "model file")->required();
    complete->add_option("--stage", stage, "engineering stage")->required();

    auto* links = app.add_subcommand("link-check", "check cross references and document assignments");
    links->add_option("files", files, "model files")->required();

    auto* gen = app.add_subcommand("gen-plcopen", "generate a PLCopen-style SFC from a behavior graph");
    gen->add_option("model", model_file, "model file")->required();
    gen->add_option("behavior", behavior_file, "behavior graph file")->required();
    gen->add_option("-o,--output", output, "output file")->required();
    gen->add_option("--iml", iml_output, "also write the intermediate form");

    auto* sim = app.add_subcommand("simulate", "run a trace through the behavior");
    sim->add_option("model", model_file, "model file")->required();
    sim->add_option("behavior", behavior_file, "behavior graph file")->required();
    sim->add_option("trace", trace_file, "trace file")->required();
    sim->add_option("--via", via, "interpreter")->check(CLI::IsMember({"graph", "sfc"}));

    auto* exp = app.add_subcommand("export-table", "write a parameter request table");
    exp->add_option("model", model_file, "model file")->required();
    exp->add_option("--stage", stage, "rows required by this stage");
    exp->add_option("--class", class_filter, "restrict to one class");
    exp->add_flag("--missing-only", missing_only, "only still-empty required parameters");
    exp->add_option("-o,--output", output, "output file (default: standard output)");

    auto* imp = app.add_subcommand("import-table", "merge a filled table into a model");
    imp->add_option("model", model_file, "model file")->required();
    imp->add_option("table", table_file, "table file (.csv)")->required();
    imp->add_option("-o,--output", output, "output model file")->required();
    imp->add_option("--ownership", o.ownership_path, "ownership map for new documents");

    auto* rep = app.add_subcommand("report", "discipline dependency matrix and workload");
    rep->add_option("file", model_file, "model file")->required();
    rep->add_option("--ownership", o.ownership_path, "ownership map file");

    auto* init = app.add_subcommand("init-example", "write the T-junction example set");
    init->add_option("dir", dir, "target directory")->required();

    for (auto* sub : {validate, complete, links, gen, sim, exp, imp, rep, init})
        sub->fallthrough();

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_clean : exit_failure;
    }

    try {
        if (*validate) {
            const auto rules = load_rules(o);
            return run_files(files, o, out, err, [&](const std::string& file) {
                auto [model, violations] = load_model(file);
                for (auto&& group : {mapping::assignment_violations(model, rules), check_links(model),
                                     check_structure(model)})
                    violations.insert(violations.end(), group.begin(), group.end());
                return violations;
            });
        }
        if (*links)
            return run_files(files, o, out, err,
                             [&](const std::string& file) { return check_links(load_model(file).model); });
        if (*complete) {
            const auto matrix = load_matrix(o);
            const auto s = parse_stage(stage);
            if (!s)
                throw Failure("unknown stage '" + stage + "'");
            if (!matrix.covers(*s))
                throw Failure("stage '" + stage + "' is not covered by the coverage matrix");
            return run_files({model_file}, o, out, err, [&](const std::string& file) {
                return check_completeness(load_model(file).model, *s, matrix);
            });
        }
        if (*gen) {
            const auto model = load_model(model_file).model;
            const auto graph = load_behavior(behavior_file);
            SfcProgram program;
            ImlDocument iml;
            try {
                iml = to_iml(graph);
                program = iml_to_sfc(iml, model);
            }
            catch (const BindingError& e) {
                err << "binding error: " << e.what() << '\n';
                return exit_findings;
            }
            catch (const StructuralError& e) {
                err << "error: " << behavior_file << ": " << e.what() << '\n';
                return exit_findings;
            }
            write_file(output, emit_plcopen(program));
            if (!iml_output.empty())
                write_file(iml_output, render_iml(iml));
            out << "wrote " << output << " (" << program.steps.size() << " steps, " << program.transitions.size()
                << " transitions)\n";
            return exit_clean;
        }
        if (*sim) {
            const auto model = load_model(model_file).model;
            const auto graph = load_behavior(behavior_file);
            const auto trace = load_trace(trace_file);
            SimulationResult result;
            try {
                const auto program = iml_to_sfc(to_iml(graph), model);
                result = via == "sfc" ? simulate_sfc(program, trace) : simulate(graph, trace);
            }
            catch (const BindingError& e) {
                err << "binding error: " << e.what() << '\n';
                return exit_findings;
            }
            catch (const StructuralError& e) {
                err << "error: " << behavior_file << ": " << e.what() << '\n';
                return exit_findings;
            }
            catch (const SimulationError& e) {
                err << "simulation error: " << e.what() << '\n';
                return exit_findings;
            }
            if (o.structured()) {
                for (const auto& ev : result.events) {
                    nlohmann::ordered_json j;
                    j["action"] = std::string(to_string(ev.kind));
                    j["subject"] = ev.subject;
                    out << j.dump() << '\n';
                }
                nlohmann::ordered_json j;
                j["final_step"] = result.final_step;
                out << j.dump() << '\n';
            }
            else {
                out << write_events(result.events) << "final step " << result.final_step << '\n';
            }
            return exit_clean;
        }
        if (*exp) {
            const auto matrix = load_matrix(o);
            ExportSelector selector;
            if (!stage.empty()) {
                selector.stage = parse_stage(stage);
                if (!selector.stage)
                    throw Failure("unknown stage '" + stage + "'");
                if (!matrix.covers(*selector.stage))
                    throw Failure("stage '" + stage + "' is not covered by the coverage matrix");
            }
            if (!class_filter.empty()) {
                if (class_filter != "components" && !parse_subclass(class_filter))
                    throw Failure("unknown class '" + class_filter + "'");
                selector.class_filter = class_filter;
            }
            selector.missing_only = missing_only;
            const auto table = export_table(load_model(model_file).model, selector, matrix);
            if (output.empty())
                out << table;
            else
                write_file(output, table);
            return exit_clean;
        }
        if (*imp) {
            const auto model = load_model(model_file).model;
            const auto bytes = read_file(table_file);
            ImportResult result;
            try {
                result = import_table(model, bytes, load_ownership(o));
            }
            catch (const TableError& e) {
                throw Failure(table_file + ": " + e.what());
            }
            write_file(output, caex::write_model(result.model));
            FileReport r{table_file, result.violations, std::nullopt};
            render(r, o, out, err);
            return r.exit_code();
        }
        if (*rep)
            return cmd_report(model_file, o, out);
        if (*init)
            return cmd_init_example(dir, o, out);
    }
    catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
    return exit_failure;
}

}  // namespace automfm::cli
