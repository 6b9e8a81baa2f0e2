#include "automfm/automfm.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>

using namespace automfm;
using namespace automfm::mapping;

namespace {

using Ids = std::set<std::string>;

// Reference rule sets, transcribed by hand with duplicates removed.
const std::map<std::string, std::pair<Ids, Ids>>& reference_rules()
{
    static const std::map<std::string, std::pair<Ids, Ids>> rules{
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
    return rules;
}

// One element of each covered class, none carrying any semantics yet.
ModuleModel bare_model()
{
    auto m = new_module("m", "m");
    m = add_control_function(m, {"route", "SFC", std::nullopt, {}});
    m = add_logistic_function(m, {"lf", FunctionCategory::material_flow, std::nullopt, {}});
    return m;
}

const std::map<std::string, std::string> class_element{
    {"Control.ControlFunction", "m/control/control_functions/route"},
    {"Function.LogisticFunction", "m/function/logistic_functions/lf"},
    {"General.Identification", "m/general/identification"},
};

}  // namespace

TEST(DefaultTable, ConformsToReferenceRules)
{
    const auto table = default_table();
    EXPECT_EQ(table.entries().size(), reference_rules().size());
    for (const auto& [cls, sets] : reference_rules()) {
        EXPECT_EQ(roles_for(table, cls), sets.first) << cls;
        EXPECT_EQ(interfaces_for(table, cls), sets.second) << cls;
    }
    for (const auto& e : table.entries())
        EXPECT_TRUE(reference_rules().count(e.class_path)) << e.class_path;
}

TEST(DefaultTable, Examples)
{
    const auto t = default_table();
    EXPECT_TRUE(roles_for(t, "Control.ControlFunction")->count("ControlEquipment"));
    EXPECT_TRUE(interfaces_for(t, "Function.LogisticFunction")->count("COLLADAInterface"));
    EXPECT_TRUE(roles_for(t, "General.Identification")->count("DiscManufacturingEquipment"));
    EXPECT_EQ(roles_for(t, "Function.LogisticFunction"), (Ids{"AutomationMLExtendedRoleClassLib"}));
    EXPECT_TRUE(interfaces_for(t, "Control.ControlFunction")->count("AttachmentInterface"));
    EXPECT_TRUE(interfaces_for(t, "Control.ControlFunction")->count("ExternalDataConnector.PLOpenXMLInterface"));
    EXPECT_TRUE(interfaces_for(t, "General.Identification")->count("CommunicationInterfaceClassLib"));
}

TEST(DefaultTable, UncoveredIsDistinctFromEmpty)
{
    const auto t = default_table();
    EXPECT_EQ(roles_for(t, "Status.Anything"), std::nullopt);
    EXPECT_EQ(interfaces_for(t, "Status.Anything"), std::nullopt);
}

TEST(RuleTable, TextClosure)
{
    const auto t = default_table();
    const auto text = write_rule_table(t);
    const auto back = parse_rule_table(text);
    EXPECT_EQ(back, t);
    EXPECT_EQ(write_rule_table(back), text);
}

TEST(RuleTable, ParseErrorsCarryLine)
{
    try {
        parse_rule_table("# c\nA.B -> role : R\nA.B -> iface : I\nA.B => role : X\n");
        FAIL();
    }
    catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 4u);
    }
    EXPECT_THROW(parse_rule_table("A.B -> colour : R\n"), ParseError);
    EXPECT_THROW(parse_rule_table("A.B -> role : has space\n"), ParseError);
    // every entry needs both identifier sets
    EXPECT_THROW(parse_rule_table("A.B -> role : R\n"), ParseError);
}

TEST(RuleTable, UserExtension)
{
    const auto t = parse_rule_table(write_rule_table(default_table()) +
                                    "Interface.Port -> role : PortConnector\nInterface.Port -> iface : Port\n");
    EXPECT_EQ(t.entries().size(), 4u);
    EXPECT_EQ(roles_for(t, "Interface.Port"), (Ids{"PortConnector"}));
}

TEST(ValidateAssignments, FixtureIsClean) { EXPECT_TRUE(validate_assignments(fixture::tjunction(), default_table()).empty()); }

TEST(ValidateAssignments, EmptyModelLacksIdentificationRole)
{
    const auto v = validate_assignments(new_module("m", "m"), default_table());
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].kind, AssignmentKind::missing_role);
    EXPECT_EQ(v[0].element_path, "m/general/identification");
}

TEST(ValidateAssignments, IllegalRoleOnControlFunction)
{
    auto m = fixture::tjunction();
    m.control.control_functions[0].semantics.roles = {"DiscManufacturingEquipment"};
    const auto v = validate_assignments(m, default_table());
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].kind, AssignmentKind::illegal_role);
    EXPECT_EQ(v[0].found_identifier, "DiscManufacturingEquipment");
    EXPECT_EQ(v[0].element_path, "tjunction-01/control/control_functions/route");
    EXPECT_EQ(v[0].permitted, *roles_for(default_table(), "Control.ControlFunction"));
}

TEST(ValidateAssignments, MissingRoleOnlyForCoveredClasses)
{
    const auto v = validate_assignments(bare_model(), default_table());
    std::set<std::string> paths;
    for (const auto& x : v) {
        EXPECT_EQ(x.kind, AssignmentKind::missing_role);
        paths.insert(x.element_path);
    }
    EXPECT_EQ(paths, (std::set<std::string>{"m/control/control_functions/route", "m/function/logistic_functions/lf",
                                            "m/general/identification"}));
}

TEST(ValidateAssignments, UncoveredClassesReportedOnceAsInfo)
{
    auto m = fixture::tjunction();
    m = add_port(m, {"extra", PortDirection::in, std::nullopt, {{"SomeRole"}, {}}});
    m.module_interface.ports[0].semantics.roles = {"AnotherRole"};
    const auto v = assignment_violations(m, default_table());
    std::size_t port_notes = 0;
    for (const auto& x : v) {
        EXPECT_EQ(x.severity, Severity::info);
        port_notes += x.message.find("Interface.Port") != std::string::npos;
    }
    EXPECT_EQ(port_notes, 1u);
}

// Exhaustive over every (class, identifier) pair drawn from the table plus a
// foreign identifier: flagged exactly when the identifier is not permitted.
TEST(ValidateAssignments, Soundness)
{
    const auto table = default_table();
    Ids all_ids{"NotInAnyTable"};
    for (const auto& [cls, sets] : reference_rules()) {
        all_ids.insert(sets.first.begin(), sets.first.end());
        all_ids.insert(sets.second.begin(), sets.second.end());
    }
    for (const auto& [cls, sets] : reference_rules()) {
        const auto& path = class_element.at(cls);
        for (const auto& id : all_ids) {
            for (const bool as_role : {true, false}) {
                auto m = bare_model();
                for (const auto& [c, p] : class_element)
                    mutable_semantics(m, p)->roles = {*reference_rules().at(c).first.begin()};
                auto* s = mutable_semantics(m, path);
                if (as_role)
                    s->roles = {id};
                else
                    s->interfaces = {{"i", id, ""}};
                const auto v = validate_assignments(m, table);
                const bool permitted = as_role ? sets.first.count(id) > 0 : sets.second.count(id) > 0;
                ASSERT_EQ(v.size(), permitted ? 0u : 1u) << cls << " " << id << " role=" << as_role;
                if (!permitted) {
                    EXPECT_EQ(v[0].kind, as_role ? AssignmentKind::illegal_role : AssignmentKind::illegal_interface);
                    EXPECT_EQ(v[0].element_path, path);
                    EXPECT_EQ(v[0].permitted, as_role ? sets.first : sets.second);
                }
            }
        }
    }
}

TEST(AssignmentViolations, RuleIdsAreRegistered)
{
    auto m = bare_model();
    m.control.control_functions[0].semantics = {{"Bad"}, {{"i", "BadIface", ""}}};
    for (const auto& v : assignment_violations(m, default_table())) {
        const auto* rule = find_rule(v.rule_id);
        ASSERT_TRUE(rule) << v.rule_id;
        EXPECT_EQ(rule->severity, v.severity);
    }
}
