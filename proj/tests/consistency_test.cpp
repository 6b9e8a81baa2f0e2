#include "automfm/automfm.hpp"
#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <set>

using namespace automfm;

namespace {

std::multiset<std::pair<std::string, std::string>> keyed(const std::vector<Violation>& vs)
{
    std::multiset<std::pair<std::string, std::string>> out;
    for (const auto& v : vs)
        out.insert({v.rule_id, v.element_path});
    return out;
}

std::set<std::string> paths_of(const std::vector<Violation>& vs)
{
    std::set<std::string> out;
    for (const auto& v : vs)
        out.insert(v.element_path);
    return out;
}

const std::string mod = "tjunction-01/";

}  // namespace

// ---------------------------------------------------------------------------
// check_links

TEST(CheckLinks, FixtureIsClosed) { EXPECT_TRUE(check_links(fixture::tjunction()).empty()); }

TEST(CheckLinks, NoReferences) { EXPECT_TRUE(check_links(new_module("m", "m")).empty()); }

TEST(CheckLinks, DeletingConv1)
{
    // Conv1 is touched by Conv1_drive drives Conv1, output_1 position-of Conv1
    // and the conv1_datasheet assignment.
    const auto m = remove_element(fixture::tjunction(), mod + "components/Conv1");
    const auto v = check_links(m);
    ASSERT_EQ(v.size(), 3u);
    std::size_t refs = 0, assignments = 0;
    for (const auto& x : v) {
        refs += x.rule_id == "link.dangling-target";
        assignments += x.rule_id == "link.dangling-assignment";
    }
    EXPECT_EQ(refs, 2u);
    EXPECT_EQ(assignments, 1u);
    EXPECT_TRUE(paths_of(v).count(mod + "documents/conv1_datasheet"));
}

TEST(CheckLinks, DanglingSourceAndTargetCountedPerEndpoint)
{
    auto m = new_module("m", "m");
    m = add_cross_ref(m, "m/components/A", "m/components/B", "k");
    const auto v = check_links(m);
    EXPECT_EQ(keyed(v), (std::multiset<std::pair<std::string, std::string>>{
                            {"link.dangling-source", "m/cross_refs/0"}, {"link.dangling-target", "m/cross_refs/0"}}));
}

TEST(CheckLinks, MalformedEndpointIsDangling)
{
    auto m = fixture::tjunction();
    m.cross_refs.push_back({"bad path", mod + "general", "k"});
    EXPECT_EQ(check_links(m).size(), 1u);
}

// Deleting one named element yields exactly the violations for references
// and assignments that pointed at it.
TEST(CheckLinksProperty, DeletionReportsIncidentReferences)
{
    std::size_t checked = 0;
    for (std::uint32_t seed = 0; seed < 500; ++seed) {
        testgen::ModelGenerator gen(seed);
        const auto m = gen.model();
        ASSERT_TRUE(check_links(m).empty()) << "seed " << seed;
        const auto candidates = testgen::ModelGenerator::removable_paths(m);
        if (candidates.empty())
            continue;
        const auto victim = gen.pick(candidates);
        const auto after = remove_element(m, victim);
        std::multiset<std::pair<std::string, std::string>> expected;
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
        EXPECT_EQ(keyed(check_links(after)), expected) << "seed " << seed << " removed " << victim;
        ++checked;
    }
    EXPECT_GE(checked, 400u);
}

// ---------------------------------------------------------------------------
// check_structure

TEST(CheckStructure, FixtureIsClean) { EXPECT_TRUE(check_structure(fixture::tjunction()).empty()); }

TEST(CheckStructure, Findings)
{
    auto m = fixture::tjunction();
    m = add_route(m, {"input", "nowhere", 1});
    m.control.io_mapping[0].direction = IoDirection::output;
    m.control.io_mapping[1].variable_name = "undeclared";
    m.control.io_mapping[2].component_path = mod + "components/Ghost";
    m.control.control_functions[0].body_ref = "missing_doc";
    m.module_interface.interaction_spaces[0].box.min.x = Decimal("700");
    const auto v = check_structure(m);
    std::multiset<std::string> ids;
    for (const auto& x : v)
        ids.insert(x.rule_id);
    EXPECT_EQ(ids, (std::multiset<std::string>{"struct.route-port", "struct.io-direction", "struct.io-variable",
                                               "struct.io-component", "struct.body-ref", "struct.bounding-box"}));
}

// ---------------------------------------------------------------------------
// Stage coverage matrix and completeness

TEST(CoverageMatrix, TextClosure)
{
    const auto m = default_coverage_matrix();
    EXPECT_EQ(m.stages().size(), all_stages.size());
    EXPECT_EQ(parse_coverage_matrix(write_coverage_matrix(m)), m);
}

TEST(CoverageMatrix, RejectsBadLines)
{
    EXPECT_THROW(parse_coverage_matrix("testing: general.identification.name\n"), ParseError);
    EXPECT_THROW(parse_coverage_matrix("process_planning general\n"), ParseError);
    EXPECT_THROW(parse_coverage_matrix("process_planning: nothing.here\n"), ParseError);
    EXPECT_THROW(parse_coverage_matrix("process_planning: components[robot].position\n"), ParseError);
}

TEST(Completeness, FixtureCompleteAtEveryStage)
{
    const auto m = fixture::tjunction();
    const auto matrix = default_coverage_matrix();
    for (const auto s : all_stages)
        EXPECT_TRUE(check_completeness(m, s, matrix).empty()) << to_string(s);
}

TEST(Completeness, ElectricalDataRemoved)
{
    const auto m = fixture::without_electrical(fixture::tjunction());
    const auto v = check_completeness(m, Stage::control_hmi_eng, default_coverage_matrix());
    std::set<std::string> expected;
    for (int i = 0; i < 8; ++i)
        expected.insert(mod + "control/io_mapping/" + std::to_string(i));
    std::set<std::string> logical;
    std::size_t platform = 0;
    for (const auto& x : v) {
        EXPECT_EQ(x.rule_id, "complete.missing-parameter");
        EXPECT_EQ(x.stage, Stage::electrical_eng);
        if (x.message.find("'logical_address'") != std::string::npos)
            logical.insert(x.element_path);
        platform += x.element_path == mod + "control/platform";
    }
    EXPECT_EQ(logical, expected);
    EXPECT_EQ(platform, 2u);
    EXPECT_EQ(v.size(), 10u);
    // still complete for the stages before electrical engineering
    EXPECT_TRUE(check_completeness(m, Stage::mechanical_eng, default_coverage_matrix()).empty());
}

TEST(Completeness, EmptyModelFirstStage)
{
    const auto v = check_completeness(new_module("m", "m"), Stage::process_planning, default_coverage_matrix());
    ASSERT_EQ(v.size(), 3u);
    for (const auto& x : v)
        EXPECT_EQ(x.element_path, "m/general/identification");
    EXPECT_NE(v[0].message.find("'name'"), std::string::npos);
}

TEST(Completeness, EmptyModelLogisticsStageAddsLists)
{
    const auto v = check_completeness(new_module("m", "m"), Stage::logistics_planning, default_coverage_matrix());
    EXPECT_EQ(paths_of(v), (std::set<std::string>{"m/general/identification", "m/function", "m/interface", "m/control"}));
    EXPECT_EQ(v.size(), 6u);
}

TEST(Completeness, UnknownOrUncoveredStage)
{
    const auto m = fixture::tjunction();
    EXPECT_THROW(check_completeness(m, "commissioning", default_coverage_matrix()), Error);
    EXPECT_THROW(check_completeness(m, Stage::control_hmi_eng, parse_coverage_matrix("process_planning:\n")), Error);
}

TEST(Completeness, ConveyorOnlyDimensions)
{
    auto m = fixture::tjunction();
    m = add_component(m, {"LB_extra", ComponentKind::sensor, "LB-40",
                          Vec3{Decimal("1"), Decimal("1"), Decimal("1")}, std::nullopt, std::nullopt, {}});
    EXPECT_TRUE(check_completeness(m, Stage::mechanical_eng, default_coverage_matrix()).empty());
    m.components.back().kind = ComponentKind::conveyor;
    const auto v = check_completeness(m, Stage::mechanical_eng, default_coverage_matrix());
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].element_path, mod + "components/LB_extra");
}

// Filling in an empty parameter never adds a violation at any stage.
TEST(CompletenessProperty, Monotonicity)
{
    const auto matrix = default_coverage_matrix();
    const std::vector<std::string> candidates{"(1,2,3)", "x", "1", "BOOL", "SFC", "%I1.0", "(0,0,0)"};
    for (std::uint32_t seed = 0; seed < 150; ++seed) {
        testgen::ModelGenerator gen(seed);
        auto m = gen.model();
        for (int round = 0; round < 5; ++round) {
            std::vector<ParameterSlot> empty;
            for (const auto& slot : parameter_catalog(m))
                if (slot.value.empty())
                    empty.push_back(slot);
            if (empty.empty())
                break;
            const auto slot = gen.pick(empty);
            auto next = m;
            bool written = false;
            for (const auto& value : candidates)
                if (write_parameter(next, slot.element_path, slot.name, value) == WriteStatus::ok) {
                    written = true;
                    break;
                }
            if (!written)
                continue;
            for (const auto s : all_stages)
                EXPECT_LE(check_completeness(next, s, matrix).size(), check_completeness(m, s, matrix).size())
                    << "seed " << seed << " " << slot.element_path << "." << slot.name;
            m = next;
        }
    }
}

// ---------------------------------------------------------------------------
// Documents

TEST(Aggregate, FixtureBuckets)
{
    const auto m = fixture::tjunction();
    const auto buckets = aggregate(m);
    ASSERT_EQ(buckets.size(), 5u);
    std::map<Discipline, std::size_t> counts;
    std::size_t total = 0;
    for (const auto& b : buckets) {
        counts[b.discipline] = b.documents.size();
        total += b.documents.size();
    }
    EXPECT_EQ(counts[Discipline::mechanical], 2u);
    EXPECT_EQ(counts[Discipline::electrical], 1u);
    EXPECT_EQ(counts[Discipline::software], 1u);
    EXPECT_EQ(counts[Discipline::logistics], 1u);
    EXPECT_EQ(counts[Discipline::process], 0u);
    EXPECT_EQ(total, m.documents.size());
}

TEST(Aggregate, NoDocuments)
{
    for (const auto& b : aggregate(new_module("m", "m"))) {
        EXPECT_TRUE(b.documents.empty());
        EXPECT_TRUE(b.elements.empty());
    }
}

TEST(Aggregate, SoftwareOnlyInSoftwareBucket)
{
    auto m = new_module("m", "m");
    m = add_document(m, {"prog", Discipline::software, Stage::control_hmi_eng, "p", "//s/p", "m/control"});
    for (const auto& b : aggregate(m))
        EXPECT_EQ(b.documents.size(), b.discipline == Discipline::software ? 1u : 0u);
}

TEST(AggregateProperty, Partition)
{
    for (std::uint32_t seed = 0; seed < 300; ++seed) {
        testgen::ModelGenerator gen(seed);
        const auto m = gen.model();
        std::multiset<std::string> seen;
        for (const auto& b : aggregate(m)) {
            EXPECT_TRUE(std::is_sorted(b.documents.begin(), b.documents.end(),
                                       [](const auto& x, const auto& y) { return x.id < y.id; }));
            for (const auto& d : b.documents) {
                EXPECT_EQ(d.discipline, b.discipline);
                seen.insert(d.id);
            }
        }
        std::multiset<std::string> all;
        for (const auto& d : m.documents)
            all.insert(d.id);
        EXPECT_EQ(seen, all) << "seed " << seed;
    }
}

TEST(AssignDocument, RecordsAssignment)
{
    const auto m = fixture::tjunction();
    const auto r = assign_document(m, "behavior", mod + "function/logistic_functions/0");
    EXPECT_EQ(find_document(r.model, "behavior")->assigned_element, mod + "function/logistic_functions/0");
    ASSERT_EQ(r.violations.size(), 1u);
    EXPECT_EQ(r.violations[0].rule_id, "assign.reassigned");
    EXPECT_EQ(r.violations[0].severity, Severity::info);
    EXPECT_TRUE(check_links(r.model).empty());
}

TEST(AssignDocument, DanglingTargetStoredAndFlagged)
{
    const auto r = assign_document(fixture::tjunction(), "wiring", mod + "components/NoSuch");
    EXPECT_EQ(find_document(r.model, "wiring")->assigned_element, mod + "components/NoSuch");
    EXPECT_TRUE(keyed(r.violations).count({"link.dangling-assignment", mod + "documents/wiring"}));
    EXPECT_EQ(check_links(r.model).size(), 1u);
}

TEST(AssignDocument, UnknownDocument)
{
    EXPECT_THROW(assign_document(fixture::tjunction(), "nope", mod + "general"), Error);
}

TEST(AssignDocument, SameTargetIsSilent)
{
    const auto r = assign_document(fixture::tjunction(), "layout", mod + "general");
    EXPECT_TRUE(r.violations.empty());
}

// ---------------------------------------------------------------------------
// Ownership and dependency report

TEST(Ownership, DefaultCoversAllClasses)
{
    const auto map = default_ownership_map();
    EXPECT_NO_THROW(map.require_complete());
    EXPECT_EQ(parse_ownership_map(write_ownership_map(map)), map);
    const auto m = fixture::tjunction();
    EXPECT_EQ(map.owner(m, mod + "control/io_mapping/3"), Discipline::electrical);
    EXPECT_EQ(map.owner(m, mod + "control/variables/I_LB_in"), Discipline::software);
    EXPECT_EQ(map.owner(m, mod + "components/Conv1"), Discipline::mechanical);
    EXPECT_EQ(map.owner(m, mod + "interface/ports/input"), Discipline::logistics);
    EXPECT_EQ(map.owner(m, mod + "documents/wiring"), Discipline::electrical);
}

TEST(Ownership, MissingClassIsError)
{
    const auto map = parse_ownership_map("general -> logistics\nfunction -> logistics\n");
    EXPECT_THROW(map.require_complete(), Error);
    EXPECT_THROW(dependency_report(fixture::tjunction(), map), Error);
    EXPECT_THROW(parse_ownership_map("robots -> mechanical\n"), ParseError);
    EXPECT_THROW(parse_ownership_map("general -> marketing\n"), ParseError);
}

TEST(DependencyReport, EmptyModelAllZero)
{
    const auto r = dependency_report(new_module("m", "m"), default_ownership_map());
    EXPECT_EQ(r.matrix.total, 0u);
    for (const auto a : all_disciplines)
        for (const auto b : all_disciplines)
            EXPECT_EQ(r.matrix.cell(a, b), 0.0);
}

TEST(DependencyReport, SingleReferenceNormalizes)
{
    auto m = new_module("m", "m");
    m = add_logistic_function(m, {"lf", FunctionCategory::material_flow, std::nullopt, {}});
    m = add_control_function(m, {"cf", "SFC", std::nullopt, {}});
    m = add_cross_ref(m, "m/function/logistic_functions/lf", "m/control/control_functions/cf", "implemented-by");
    const auto r = dependency_report(m, default_ownership_map());
    EXPECT_EQ(r.matrix.cell(Discipline::logistics, Discipline::software), 1.0);
}

TEST(DependencyReport, FixtureManualCount)
{
    // 5 guard-uses sensor -> route            mechanical -> software
    // 2 drives actuator -> conveyor           mechanical -> mechanical
    // 8 signal-of io_mapping -> variable      electrical -> software
    // 2 implemented-by function -> route      logistics  -> software
    // 5 position-of port -> component         logistics  -> mechanical
    const auto r = dependency_report(fixture::tjunction(), default_ownership_map());
    const auto& c = r.matrix.counts;
    const auto at = [&](Discipline a, Discipline b) { return c[static_cast<int>(a)][static_cast<int>(b)]; };
    EXPECT_EQ(r.matrix.total, 22u);
    EXPECT_EQ(at(Discipline::mechanical, Discipline::software), 5u);
    EXPECT_EQ(at(Discipline::mechanical, Discipline::mechanical), 2u);
    EXPECT_EQ(at(Discipline::electrical, Discipline::software), 8u);
    EXPECT_EQ(at(Discipline::logistics, Discipline::software), 2u);
    EXPECT_EQ(at(Discipline::logistics, Discipline::mechanical), 5u);

    double best = -1;
    std::pair<Discipline, Discipline> arg{};
    for (const auto a : all_disciplines)
        for (const auto b : all_disciplines)
            if (a != b && r.matrix.cell(a, b) > best) {
                best = r.matrix.cell(a, b);
                arg = {a, b};
            }
    EXPECT_EQ(arg, std::make_pair(Discipline::electrical, Discipline::software));
    EXPECT_NEAR(best, 8.0 / 22.0, 1e-12);
}

TEST(DependencyReport, WorkloadSumsToOne)
{
    const auto r = dependency_report(fixture::tjunction(), default_ownership_map());
    EXPECT_GT(r.populated_parameters, 0u);
    EXPECT_NEAR(std::accumulate(r.workload.begin(), r.workload.end(), 0.0), 1.0, 1e-12);
}

TEST(DependencyProperty, MatrixNormalization)
{
    const auto map = default_ownership_map();
    for (std::uint32_t seed = 0; seed < 300; ++seed) {
        testgen::ModelGenerator gen(seed);
        const auto m = gen.model();
        const auto r = dependency_report(m, map);
        double sum = 0, off = 0;
        for (const auto a : all_disciplines)
            for (const auto b : all_disciplines) {
                const auto cell = r.matrix.cell(a, b);
                EXPECT_GE(cell, 0.0);
                sum += cell;
                if (a != b)
                    off += cell;
            }
        EXPECT_EQ(r.matrix.total, m.cross_refs.size());
        if (r.matrix.total)
            EXPECT_NEAR(sum, 1.0, 1e-9) << "seed " << seed;
        else
            EXPECT_EQ(sum, 0.0);
        EXPECT_LE(off, 1.0 + 1e-9);
    }
}
