#pragma once

// T-junction example module: a main conveyor with an input and output_1, a
// second conveyor leading to output_2, a pneumatic switch between them, three
// light barriers and two switch position sensors.

#include "automfm/behavior.hpp"
#include "automfm/caex.hpp"
#include "automfm/consistency.hpp"
#include "automfm/mapping.hpp"
#include "automfm/metamodel.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace automfm::fixture {

inline constexpr std::string_view module_id = "tjunction-01";

namespace detail {

inline Vec3 v(std::string_view x, std::string_view y, std::string_view z)
{
    return Vec3{Decimal(std::string(x)), Decimal(std::string(y)), Decimal(std::string(z))};
}

inline std::string p(std::string_view rest) { return std::string(module_id) + "/" + std::string(rest); }

}  // namespace detail

inline ModuleModel tjunction()
{
    using detail::p;
    using detail::v;
    auto m = new_module(std::string(module_id), "T-Junction");

    m.general.identification = {"T-Junction", "TJ-01", "t_junction", {{"DiscManufacturingEquipment"}, {}}};
    m.general.main_dimensions = v("1000", "800", "900");
    m = add_static_attribute(m, {"max_tu_weight", "xs:decimal", "30", "kg"});
    m = caex::attach_external_document(m, p("general"), "COLLADAInterface", "layout/tjunction.dae");

    m = add_runtime_variable(m, {"operating_mode", "INT", "", "0 off, 1 automatic, 2 manual"});
    m = add_runtime_variable(m, {"energy_consumption", "REAL", "kWh", "accumulated drive energy"});

    for (const auto* output : {"output_1", "output_2"})
        m = add_logistic_function(m, {std::string("route-to-") + output, FunctionCategory::material_flow, "behavior",
                                      {{"AutomationMLExtendedRoleClassLib"}, {}}});

    m = add_port(m, {"input", PortDirection::in, v("0", "75", "800"), {}});
    m = add_port(m, {"output_1", PortDirection::out, v("1000", "75", "800"), {}});
    m = add_port(m, {"output_2", PortDirection::out, v("500", "800", "800"), {}});
    m = add_interaction_space(m, {"transfer_zone", {v("400", "0", "700"), v("600", "300", "900")}});

    m = add_control_function(m, {"route", "SFC", "plc_program", {{"ControlEquipment"}, {}}});
    m = caex::attach_external_document(m, p("control/control_functions/route"), "PLCopenXMLInterface",
                                       "plc/tjunction.plcopen.xml");

    struct Device
    {
        const char* name;
        ComponentKind kind;
        const char* type;
        Vec3 position;
        const char* variable;
        const char* address;
    };
    const std::vector<Device> devices{
        {"LB_in", ComponentKind::sensor, "LB-40", v("20", "75", "820"), "I_LB_in", "%I0.0"},
        {"LB_out1", ComponentKind::sensor, "LB-40", v("980", "75", "820"), "I_LB_out1", "%I0.1"},
        {"LB_out2", ComponentKind::sensor, "LB-40", v("500", "780", "820"), "I_LB_out2", "%I0.2"},
        {"SW_pos1", ComponentKind::sensor, "IS-12", v("480", "60", "760"), "I_SW_pos1", "%I0.3"},
        {"SW_pos2", ComponentKind::sensor, "IS-12", v("520", "60", "760"), "I_SW_pos2", "%I0.4"},
        {"Conv1_drive", ComponentKind::actuator, "DM-24", v("0", "10", "700"), "Q_Conv1_drive", "%Q0.0"},
        {"Conv2_drive", ComponentKind::actuator, "DM-24", v("500", "160", "700"), "Q_Conv2_drive", "%Q0.1"},
        {"Switch", ComponentKind::switch_, "PS-2", v("500", "75", "780"), "Q_Switch", "%Q0.2"},
    };
    for (const auto& d : devices)
        m = add_component(m, {d.name, d.kind, d.type, d.position, std::nullopt, std::nullopt, {}});
    m = add_component(m, {"Conv1", ComponentKind::conveyor, "P100", v("0", "10", "0"), v("50", "150", "800"),
                          Decimal("0.1"), {}});
    m = add_component(m, {"Conv2", ComponentKind::conveyor, "P100", v("500", "160", "0"), v("50", "150", "600"),
                          Decimal("0.1"), {}});

    for (const auto& d : devices) {
        const bool sensor = d.kind == ComponentKind::sensor;
        m = add_variable(m, {d.variable, "BOOL", sensor ? "input" : "output"});
        m = add_io_mapping(m, {p(std::string("components/") + d.name), d.address, d.variable, "BOOL",
                               sensor ? IoDirection::input : IoDirection::output});
    }
    m.control.platform = {"PLC-X1", "BC-8"};

    m = add_document(m, {"layout", Discipline::mechanical, Stage::mechanical_eng, "T-junction layout",
                         "//server/mechanical/tjunction.dwg", p("general")});
    m = add_document(m, {"conv1_datasheet", Discipline::mechanical, Stage::mechanical_eng, "Conv1 datasheet",
                         "//server/mechanical/P100.pdf", p("components/Conv1")});
    m = add_document(m, {"wiring", Discipline::electrical, Stage::electrical_eng, "Wiring diagram",
                         "//server/electrical/tjunction_wiring.pdf", p("control/platform")});
    m = add_document(m, {"behavior", Discipline::logistics, Stage::logistics_planning, "Material flow behavior",
                         "//server/logistics/tjunction.bhv", p("function/logistic_functions/route-to-output_1")});
    m = add_document(m, {"plc_program", Discipline::software, Stage::control_hmi_eng, "PLC program",
                         "//server/software/tjunction.plcopen.xml", p("control/control_functions/route")});

    // Sensors feeding the routing decision.
    for (const auto* s : {"LB_in", "LB_out1", "LB_out2", "SW_pos1", "SW_pos2"})
        m = add_cross_ref(m, p(std::string("components/") + s), p("control/control_functions/route"), "guard-uses");
    m = add_cross_ref(m, p("components/Conv1_drive"), p("components/Conv1"), "drives");
    m = add_cross_ref(m, p("components/Conv2_drive"), p("components/Conv2"), "drives");
    // Each I/O channel and the variable it feeds.
    for (std::size_t i = 0; i < m.control.io_mapping.size(); ++i)
        m = add_cross_ref(m, p("control/io_mapping/" + std::to_string(i)),
                          p("control/variables/" + m.control.io_mapping[i].variable_name), "signal-of");
    m = add_cross_ref(m, p("function/logistic_functions/route-to-output_1"), p("control/control_functions/route"),
                      "implemented-by");
    m = add_cross_ref(m, p("function/logistic_functions/route-to-output_2"), p("control/control_functions/route"),
                      "implemented-by");
    m = add_cross_ref(m, p("interface/ports/input"), p("components/LB_in"), "position-of");
    m = add_cross_ref(m, p("interface/ports/output_1"), p("components/LB_out1"), "position-of");
    m = add_cross_ref(m, p("interface/ports/output_2"), p("components/LB_out2"), "position-of");
    m = add_cross_ref(m, p("interface/ports/output_1"), p("components/Conv1"), "position-of");
    m = add_cross_ref(m, p("interface/ports/output_2"), p("components/Conv2"), "position-of");
    return m;
}

// The fixture as it stands before electrical engineering: I/O addresses and
// the control platform are still open.
inline ModuleModel without_electrical(ModuleModel m)
{
    for (auto& e : m.control.io_mapping)
        e.logical_address.clear();
    m.control.platform = {};
    return m;
}

// Step 1.0 is the idle entry state; the walk for output_1 is
// LB_in on -> order output_1 -> 1.1 -> 1.2 (activate Conv1) -> LB_out1 on
// -> 1.3 (deactivate Conv1) -> back to 1.0.
inline constexpr std::string_view behavior_text = R"(# T-junction material flow behavior
graph tjunction

step 1.0 "TU waits at the input"
step 1.1 "TU at input, request for output_1" when LB_in, order output_1
step 1.2 "convey to output_1" do activate Conv1
step 1.3 "TU reached output_1" when LB_out1 do deactivate Conv1
step 2.1 "TU at input, request for output_2" when LB_in, order output_2
step 2.2 "convey to output_2" do activate Conv1, activate Conv2, activate Switch
step 2.3 "TU reached output_2" when LB_out2 do deactivate Conv1, deactivate Conv2, deactivate Switch

edge 1.0 -> 1.1
edge 1.1 -> 1.2
edge 1.2 -> 1.3
edge 1.0 -> 2.1
edge 2.1 -> 2.2
edge 2.2 -> 2.3
)";

inline BehaviorGraph behavior() { return parse_behavior(behavior_text); }

inline constexpr std::string_view trace_output_1 = R"(# TU for output_1
sensor LB_in on
order output_1
sensor LB_out1 on
)";

inline constexpr std::string_view trace_output_2 = R"(# TU for output_2
sensor LB_in on
order output_2
sensor LB_out2 on
)";

}  // namespace automfm::fixture
