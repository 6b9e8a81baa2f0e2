#include "automfm/automfm.hpp"
#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace automfm;

namespace {

Component conv1()
{
    return {"Conv1", ComponentKind::conveyor, "P100", Vec3{Decimal("0"), Decimal("10"), Decimal("0")},
            Vec3{Decimal("50"), Decimal("150"), Decimal("800")}, Decimal("0.1"), {}};
}

}  // namespace

TEST(Decimal, KeepsSpelling)
{
    const Decimal d("0.10");
    EXPECT_EQ(d.text(), "0.10");
    EXPECT_DOUBLE_EQ(d.value(), 0.1);
    EXPECT_NE(Decimal("0.1"), Decimal("0.10"));
    for (const auto* bad : {"", "1.", ".5", "1e3", "+1", "1,0", " 1"})
        EXPECT_FALSE(Decimal::is_valid(bad)) << bad;
    EXPECT_THROW(Decimal("abc"), ModelError);
}

TEST(Vec3, TextForm)
{
    const auto v = parse_vec3("(50,150,800)");
    ASSERT_TRUE(v);
    EXPECT_EQ(to_string(*v), "(50,150,800)");
    EXPECT_FALSE(parse_vec3("(1,2)"));
    EXPECT_FALSE(parse_vec3("(1,2,3,4)"));
    EXPECT_FALSE(parse_vec3("1,2,3"));
    EXPECT_FALSE(parse_vec3("(1, 2,3)"));
}

TEST(NewModule, HasFiveEmptySubClasses)
{
    const auto m = new_module("tjunction-01", "T-Junction");
    EXPECT_EQ(m.id, "tjunction-01");
    EXPECT_EQ(m.name, "T-Junction");
    for (const auto sc : all_subclasses) {
        EXPECT_TRUE(elements_of_class(m, sc).size() == (sc == SubClass::general || sc == SubClass::control ? 1u : 0u));
        EXPECT_TRUE(resolve(m, subclass_path(m, sc)));
    }
    EXPECT_TRUE(m.components.empty());
    EXPECT_TRUE(m.documents.empty());
    EXPECT_TRUE(m.cross_refs.empty());
}

TEST(NewModule, RejectsEmptyId) { EXPECT_THROW(new_module("", "x"), ModelError); }

TEST(NewModule, AcceptsHierarchicalId)
{
    const auto m = new_module("a/b", "nested");
    EXPECT_EQ(split_path(m.id), (std::vector<std::string>{"a", "b"}));
    ASSERT_TRUE(resolve(m, "a/b/general"));
    EXPECT_EQ(resolve(m, "a/b")->kind, ElementKind::module);
    EXPECT_FALSE(resolve(m, "a/general"));
}

TEST(Project, RejectsDuplicateIds)
{
    Project p;
    p.create("m1", "one");
    EXPECT_THROW(p.create("m1", "again"), ModelError);
    EXPECT_EQ(p.modules().size(), 1u);
}

TEST(AddComponent, Conv1)
{
    const auto m = add_component(new_module("tjunction-01", "T-Junction"), conv1());
    const auto h = resolve(m, "tjunction-01/components/Conv1");
    ASSERT_TRUE(h);
    ASSERT_EQ(h->kind, ElementKind::component);
    const auto* c = h->get<Component>();
    EXPECT_EQ(c->component_type, "P100");
    EXPECT_EQ(c->latency->text(), "0.1");
    EXPECT_EQ(to_string(*c->main_dimensions), "(50,150,800)");
    EXPECT_EQ(to_string(*c->position), "(0,10,0)");
}

TEST(AddComponent, DuplicateNamesCollision)
{
    const auto m = add_component(new_module("m", "m"), conv1());
    try {
        add_component(m, conv1());
        FAIL();
    }
    catch (const ModelError& e) {
        EXPECT_NE(std::string(e.what()).find("Conv1"), std::string::npos);
    }
}

TEST(AddComponent, RejectsBadValues)
{
    auto c = conv1();
    c.latency = Decimal("-0.1");
    EXPECT_THROW(add_component(new_module("m", "m"), c), ModelError);
    c = conv1();
    c.main_dimensions = Vec3{Decimal("0"), Decimal("1"), Decimal("1")};
    EXPECT_THROW(add_component(new_module("m", "m"), c), ModelError);
    c = conv1();
    c.name = "7";
    EXPECT_THROW(add_component(new_module("m", "m"), c), ModelError);
}

TEST(Fixture, ComponentCountMatchesEnumeration)
{
    // 3 light barriers, 2 switch position sensors, 2 conveyor drives, 1 pneumatic switch, 2 conveyors
    const auto m = fixture::tjunction();
    std::size_t sensors = 0, actuators = 0, conveyors = 0;
    for (const auto& c : m.components) {
        sensors += c.kind == ComponentKind::sensor;
        actuators += is_actuating(c.kind);
        conveyors += c.kind == ComponentKind::conveyor;
    }
    EXPECT_EQ(sensors, 5u);
    EXPECT_EQ(actuators, 3u);
    EXPECT_EQ(sensors + actuators, 8u);
    EXPECT_EQ(conveyors, 2u);
    EXPECT_EQ(m.components.size(), 10u);
}

TEST(Resolve, LookupAndNotFound)
{
    const auto m = fixture::tjunction();
    EXPECT_EQ(resolve(m, "tjunction-01/components/Conv1")->get<Component>()->name, "Conv1");
    EXPECT_FALSE(resolve(m, "tjunction-01/components/NoSuch"));
    EXPECT_FALSE(resolve(m, "other/components/Conv1"));
    EXPECT_THROW(resolve(m, "tjunction-01//Conv1"), PathError);
}

TEST(Resolve, IndexAddressing)
{
    const auto m = fixture::tjunction();
    const auto h = resolve(m, "tjunction-01/control/io_mapping/0");
    ASSERT_TRUE(h);
    EXPECT_EQ(h->kind, ElementKind::io_mapping);
    EXPECT_EQ(*h->get<IoMapEntry>(), m.control.io_mapping.front());
    EXPECT_EQ(h->path, "tjunction-01/control/io_mapping/0");
    EXPECT_FALSE(resolve(m, "tjunction-01/control/io_mapping/8"));
    // named entries are also reachable by index; the canonical path uses the name
    EXPECT_EQ(resolve(m, "tjunction-01/components/0")->path, "tjunction-01/components/LB_in");
}

TEST(CrossRef, InsertAndIdempotence)
{
    auto m = fixture::tjunction();
    m.cross_refs.clear();
    m = add_cross_ref(m, "tjunction-01/components/LB_in", "tjunction-01/control/control_functions/route",
                      "guard-uses");
    EXPECT_EQ(m.cross_refs.size(), 1u);
    const auto again = add_cross_ref(m, "tjunction-01/components/LB_in",
                                     "tjunction-01/control/control_functions/route", "guard-uses");
    EXPECT_EQ(again, m);
    EXPECT_THROW(add_cross_ref(m, "x/a", "x/a", "k"), ModelError);
    EXPECT_NO_THROW(add_cross_ref(m, "tjunction-01/components/Nope", "tjunction-01/general", "k"));
}

TEST(ElementsOfClass, EmptyModel)
{
    const auto m = new_module("m", "m");
    EXPECT_TRUE(elements_of_class(m, SubClass::status).empty());
    EXPECT_TRUE(elements_of_class(m, SubClass::function).empty());
    EXPECT_TRUE(elements_of_class(m, SubClass::interface).empty());
}

TEST(ElementsOfClass, FixtureControl)
{
    const auto m = fixture::tjunction();
    const auto elements = elements_of_class(m, SubClass::control);
    std::size_t io = 0, fn = 0, var = 0, platform = 0;
    for (const auto& e : elements) {
        io += e.kind == ElementKind::io_mapping;
        fn += e.kind == ElementKind::control_function;
        var += e.kind == ElementKind::variable;
        platform += e.kind == ElementKind::platform;
        EXPECT_TRUE(resolve(m, e.path)) << e.path;
    }
    EXPECT_EQ(io, 8u);
    EXPECT_EQ(fn, 1u);
    EXPECT_EQ(var, 8u);
    EXPECT_EQ(platform, 1u);
    EXPECT_EQ(elements.size(), 18u);
}

TEST(ElementsOfClass, FixtureFunction)
{
    const auto m = fixture::tjunction();
    std::vector<std::string> paths;
    for (const auto& e : elements_of_class(m, SubClass::function))
        paths.push_back(e.path);
    EXPECT_EQ(paths, (std::vector<std::string>{"tjunction-01/function/logistic_functions/route-to-output_1",
                                               "tjunction-01/function/logistic_functions/route-to-output_2"}));
}

TEST(RemoveElement, ErasesListEntries)
{
    const auto m = fixture::tjunction();
    const auto r = remove_element(m, "tjunction-01/components/Conv1");
    EXPECT_EQ(r.components.size(), 9u);
    EXPECT_FALSE(find_component(r, "Conv1"));
    EXPECT_THROW(remove_element(m, "tjunction-01/general"), ModelError);
    EXPECT_THROW(remove_element(m, "tjunction-01/components/NoSuch"), ModelError);
}

// Every element resolves back to itself through its path.
TEST(MetamodelProperty, PathRoundTrip)
{
    for (std::uint32_t seed = 0; seed < 200; ++seed) {
        testgen::ModelGenerator gen(seed);
        const auto m = gen.model();
        for (const auto& e : all_elements(m)) {
            const auto h = resolve(m, e.path);
            ASSERT_TRUE(h) << e.path;
            EXPECT_EQ(*h, e) << e.path;
        }
    }
}

// Every non-root element lies beneath exactly one top-level partition.
TEST(MetamodelProperty, SubClassPartition)
{
    const std::vector<std::string> parts{"general", "status",    "function",  "interface",
                                         "control", "components", "documents", "cross_refs"};
    for (std::uint32_t seed = 0; seed < 200; ++seed) {
        testgen::ModelGenerator gen(seed);
        const auto m = gen.model();
        const auto elements = all_elements(m);
        for (std::size_t i = 1; i < elements.size(); ++i) {
            std::size_t owners = 0;
            for (const auto& p : parts)
                owners += path_within(elements[i].path, m.id + "/" + p);
            EXPECT_EQ(owners, 1u) << elements[i].path;
        }
    }
}

TEST(MetamodelProperty, CrossRefIdempotence)
{
    for (std::uint32_t seed = 0; seed < 200; ++seed) {
        testgen::ModelGenerator gen(seed);
        const auto m = gen.model();
        for (const auto& r : m.cross_refs)
            EXPECT_EQ(add_cross_ref(m, r.source, r.target, r.kind), m);
    }
}

TEST(MetamodelProperty, SameInsertionsSameBytes)
{
    for (std::uint32_t seed = 0; seed < 50; ++seed) {
        testgen::ModelGenerator a(seed);
        testgen::ModelGenerator b(seed);
        EXPECT_EQ(caex::write_model(a.model()), caex::write_model(b.model()));
    }
}

TEST(Enums, SpellingsRoundTrip)
{
    for (const auto s : all_stages)
        EXPECT_EQ(parse_stage(to_string(s)), s);
    for (const auto d : all_disciplines)
        EXPECT_EQ(parse_discipline(to_string(d)), d);
    EXPECT_EQ(parse_stage("testing"), std::nullopt);
    EXPECT_EQ(parse_component_kind("switch"), ComponentKind::switch_);
}
