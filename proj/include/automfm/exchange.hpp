#pragma once

// Parameter request/response tables. export_table writes the requested
// parameters of a model as CSV for engineers to fill in; import_table merges
// a completed table back into the model.

#include "automfm/consistency.hpp"
#include "automfm/error.hpp"
#include "automfm/metamodel.hpp"
#include "automfm/parameters.hpp"
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

struct ParameterRow
{
    std::string element_path;
    std::string parameter_name;
    std::string value;  // empty = still requested
    std::string unit;
    std::string document_name;
    std::string document_path;

    bool operator==(const ParameterRow&) const = default;
};

inline constexpr std::array<std::string_view, 6> table_header{"element_path",  "parameter_name", "value",
                                                              "unit",          "document_name",  "document_path"};

// ---------------------------------------------------------------------------
// CSV (comma separated, RFC 4180 quoting, LF record separator)

namespace csv {

inline bool needs_quotes(std::string_view field)
{
    return field.find_first_of(",\"\r\n") != std::string_view::npos;
}

inline void append_field(std::string& out, std::string_view field)
{
    if (!needs_quotes(field)) {
        out += field;
        return;
    }
    out += '"';
    for (char c : field) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
}

inline std::string write(const std::vector<std::vector<std::string>>& records)
{
    std::string out;
    for (const auto& record : records) {
        for (std::size_t i = 0; i < record.size(); ++i) {
            if (i)
                out += ',';
            append_field(out, record[i]);
        }
        out += '\n';
    }
    return out;
}

struct Record
{
    std::vector<std::string> fields;
    std::size_t line = 0;
};

// Accepts LF or CRLF record separators and an optional final separator.
inline std::vector<Record> parse(std::string_view text)
{
    if (text.substr(0, 3) == "\xEF\xBB\xBF")
        text.remove_prefix(3);
    std::vector<Record> records;
    std::size_t i = 0;
    std::size_t line = 1;
    while (i < text.size()) {
        Record record;
        record.line = line;
        std::string field;
        while (true) {
            if (i < text.size() && text[i] == '"') {
                ++i;
                while (true) {
                    if (i >= text.size())
                        throw TableError("line " + std::to_string(record.line) + ": unterminated quoted field");
                    const char c = text[i++];
                    if (c == '"') {
                        if (i < text.size() && text[i] == '"') {
                            field += '"';
                            ++i;
                            continue;
                        }
                        break;
                    }
                    if (c == '\n')
                        ++line;
                    field += c;
                }
                if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r')
                    throw TableError("line " + std::to_string(line) + ": text after closing quote");
            }
            else {
                while (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
                    if (text[i] == '"')
                        throw TableError("line " + std::to_string(line) + ": quote inside unquoted field");
                    field += text[i++];
                }
            }
            record.fields.push_back(std::move(field));
            field.clear();
            if (i >= text.size())
                break;
            if (text[i] == ',') {
                ++i;
                continue;
            }
            if (text[i] == '\r') {
                if (i + 1 >= text.size() || text[i + 1] != '\n')
                    throw TableError("line " + std::to_string(line) + ": bare carriage return");
                ++i;
            }
            ++i;  // '\n'
            ++line;
            break;
        }
        records.push_back(std::move(record));
    }
    return records;
}

}  // namespace csv

// ---------------------------------------------------------------------------
// Export

struct ExportSelector
{
    // Without stage and missing_only the table holds every populated parameter.
    std::optional<Stage> stage;               // parameters required up to this stage
    std::optional<std::string> class_filter;  // "general" ... "control", "components"
    bool missing_only = false;                // required parameters still empty (latest stage if none given)
};

namespace detail {

inline std::string class_of(const ModuleModel& model, const std::string& path)
{
    if (path.size() <= model.id.size() + 1)
        return {};
    const auto rest = std::string_view(path).substr(model.id.size() + 1);
    return std::string(rest.substr(0, rest.find('/')));
}

// Documents are identified by name in tables, so unnamed ones are not listed.
inline const DocumentReference* first_document_of(const ModuleModel& model, const std::string& element_path)
{
    for (const auto& doc : model.documents)
        if (doc.assigned_element == element_path && !doc.name.empty())
            return &doc;
    return nullptr;
}

inline Stage latest_stage(const StageCoverageMatrix& matrix)
{
    Stage latest = Stage::process_planning;
    for (const auto s : matrix.stages())
        if (stage_rank(s) > stage_rank(latest))
            latest = s;
    return latest;
}

}  // namespace detail

inline std::vector<ParameterRow> export_rows(const ModuleModel& model, const ExportSelector& selector,
                                             const StageCoverageMatrix& matrix = default_coverage_matrix())
{
    std::map<std::pair<std::string, std::string>, ParameterRow> rows;
    const auto add = [&](const std::string& path, const std::string& name, const std::string& value,
                         const std::string& unit) {
        ParameterRow row{path, name, value, unit, {}, {}};
        if (const auto* doc = detail::first_document_of(model, path)) {
            row.document_name = doc->name;
            row.document_path = doc->server_path;
        }
        rows.emplace(std::make_pair(path, name), std::move(row));
    };

    if (selector.stage || selector.missing_only) {
        const auto stage = selector.stage ? *selector.stage : detail::latest_stage(matrix);
        for (const auto& slot : required_slots(model, stage, matrix)) {
            if (selector.missing_only && slot.satisfied)
                continue;
            if (slot.is_list && slot.satisfied)
                continue;
            std::string value;
            if (!slot.is_list)
                if (const auto p = parameter(model, slot.element_path, slot.parameter))
                    value = p->value;
            add(slot.element_path, slot.parameter, value, slot.unit);
        }
    }
    else {
        for (const auto& slot : parameter_catalog(model))
            if (!slot.value.empty())
                add(slot.element_path, slot.name, slot.value, slot.unit);
    }

    std::vector<ParameterRow> out;
    for (auto& [key, row] : rows)
        if (!selector.class_filter || detail::class_of(model, row.element_path) == *selector.class_filter)
            out.push_back(std::move(row));
    return out;
}

inline std::string write_table(const std::vector<ParameterRow>& rows)
{
    std::vector<std::vector<std::string>> records;
    records.emplace_back(table_header.begin(), table_header.end());
    for (const auto& r : rows)
        records.push_back({r.element_path, r.parameter_name, r.value, r.unit, r.document_name, r.document_path});
    return csv::write(records);
}

inline std::string export_table(const ModuleModel& model, const ExportSelector& selector,
                                const StageCoverageMatrix& matrix = default_coverage_matrix())
{
    return write_table(export_rows(model, selector, matrix));
}

// Parses a table; throws TableError on malformed CSV or a wrong header.
inline std::vector<std::pair<std::size_t, ParameterRow>> parse_table(std::string_view bytes)
{
    const auto records = csv::parse(bytes);
    if (records.empty())
        throw TableError("table is empty; expected the header row");
    const auto& header = records.front().fields;
    if (!std::equal(header.begin(), header.end(), table_header.begin(), table_header.end()))
        throw TableError("line 1: header must be element_path,parameter_name,value,unit,document_name,document_path");
    std::vector<std::pair<std::size_t, ParameterRow>> rows;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& f = records[i].fields;
        if (f.size() != table_header.size())
            throw TableError("line " + std::to_string(records[i].line) + ": expected 6 fields, got " +
                             std::to_string(f.size()));
        rows.emplace_back(records[i].line, ParameterRow{f[0], f[1], f[2], f[3], f[4], f[5]});
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Import

struct ImportResult
{
    ModuleModel model;
    std::vector<Violation> violations;
    std::size_t applied = 0;  // rows that changed or confirmed a value or document
};

inline Stage default_stage_of(Discipline d)
{
    switch (d) {
    case Discipline::mechanical: return Stage::mechanical_eng;
    case Discipline::electrical: return Stage::electrical_eng;
    case Discipline::software: return Stage::control_hmi_eng;
    case Discipline::logistics: return Stage::logistics_planning;
    case Discipline::process: return Stage::process_planning;
    }
    return Stage::process_planning;
}

namespace detail {

inline std::string document_id_for(const ModuleModel& model, std::string_view name)
{
    std::string base;
    for (char c : name)
        base += is_name_char(c) ? c : '_';
    if (base.empty() || !is_valid_entry_name(base))
        base = "doc_" + base;
    auto id = base;
    for (std::size_t n = 2; find_document(model, id); ++n)
        id = base + "_" + std::to_string(n);
    return id;
}

inline bool is_list_parameter(const ModuleModel& model, const std::string& path, const std::string& name)
{
    if (name == sensor_actuator_relations)
        return path == model.id + "/control";
    try {
        const auto h = resolve(model, path + "/" + name);
        return h && h->kind == ElementKind::collection;
    }
    catch (const PathError&) {
        return false;
    }
}

}  // namespace detail

// Writes non-empty values and document references. Rows with unknown
// elements, unknown or read-only parameters or unparsable values are
// skipped with one violation each.
inline ImportResult import_table(ModuleModel model, std::string_view bytes,
                                 const OwnershipMap& ownership = default_ownership_map())
{
    const auto rows = parse_table(bytes);
    ImportResult result{std::move(model), {}, 0};
    auto& m = result.model;
    std::set<std::pair<std::string, std::string>> seen;

    for (const auto& [line, row] : rows) {
        const auto where = "line " + std::to_string(line) + ": ";
        std::optional<ElementHandle> handle;
        try {
            handle = resolve(m, row.element_path);
        }
        catch (const PathError&) {
        }
        if (!handle) {
            result.violations.push_back(make_violation("exchange.unknown-element", row.element_path,
                                                       where + "no element at '" + row.element_path + "'"));
            continue;
        }
        const auto path = handle->path;
        if (!seen.emplace(path, row.parameter_name).second) {
            result.violations.push_back(make_violation("exchange.duplicate-row", path,
                                                       where + "parameter '" + row.parameter_name +
                                                           "' already appeared in this table"));
            continue;
        }
        const bool list = detail::is_list_parameter(m, path, row.parameter_name);
        const bool scalar = parameter(m, path, row.parameter_name).has_value();
        if (!list && !scalar) {
            result.violations.push_back(make_violation("exchange.unknown-parameter", path,
                                                       where + "element has no parameter '" + row.parameter_name +
                                                           "'"));
            continue;
        }
        if (list && !row.value.empty()) {
            result.violations.push_back(make_violation("exchange.read-only", path,
                                                       where + "'" + row.parameter_name +
                                                           "' is a list and cannot be filled from a table"));
            continue;
        }
        if (row.document_name.empty() && !row.document_path.empty()) {
            result.violations.push_back(make_violation("exchange.bad-value", path,
                                                       where + "document_path given without document_name"));
            continue;
        }
        if (!row.value.empty()) {
            const auto status = write_parameter(m, path, row.parameter_name, row.value);
            if (status != WriteStatus::ok) {
                result.violations.push_back(make_violation("exchange.bad-value", path,
                                                           where + "'" + row.value + "' is not a valid " +
                                                               row.parameter_name));
                continue;
            }
        }
        if (!row.document_name.empty()) {
            auto it = std::find_if(m.documents.begin(), m.documents.end(), [&](const auto& d) {
                return d.name == row.document_name && d.assigned_element == path;
            });
            if (it == m.documents.end())
                it = std::find_if(m.documents.begin(), m.documents.end(),
                                  [&](const auto& d) { return d.name == row.document_name; });
            if (it == m.documents.end()) {
                const auto d = ownership.owner(m, path);
                m.documents.push_back({detail::document_id_for(m, row.document_name), d, default_stage_of(d),
                                       row.document_name, row.document_path, path});
            }
            else {
                it->server_path = row.document_path;
                it->assigned_element = path;
            }
        }
        if (!row.value.empty() || !row.document_name.empty())
            ++result.applied;
    }
    return result;
}

}  // namespace automfm
