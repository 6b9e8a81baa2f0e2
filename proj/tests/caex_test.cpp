#include "automfm/automfm.hpp"
#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <functional>

using namespace automfm;

namespace {

std::size_t count_elements(const std::vector<caex::InternalElement>& elements)
{
    std::size_t n = 0;
    for (const auto& e : elements)
        n += 1 + count_elements(e.children);
    return n;
}

caex::InternalElement& module_root(caex::CaexDocument& doc) { return doc.instance_hierarchies.at(0).elements.at(0); }

}  // namespace

TEST(CaexParse, MinimalDocument)
{
    const auto doc = caex::parse("<CAEXFile SchemaVersion=\"3.0\">\n  <InstanceHierarchy Name=\"IH\"/>\n</CAEXFile>\n");
    ASSERT_EQ(doc.instance_hierarchies.size(), 1u);
    EXPECT_TRUE(doc.instance_hierarchies[0].elements.empty());
}

TEST(CaexParse, FixtureFile)
{
    const auto doc = caex::parse(caex::write_model(fixture::tjunction()));
    ASSERT_EQ(doc.instance_hierarchies.size(), 1u);
    EXPECT_GE(count_elements(doc.instance_hierarchies[0].elements), 10u);
    EXPECT_EQ(doc.internal_links.size(), 22u);
}

TEST(CaexParse, TruncatedFileHasPosition)
{
    const auto text = caex::write_model(fixture::tjunction());
    try {
        caex::parse(std::string_view(text).substr(0, text.size() / 2));
        FAIL();
    }
    catch (const ParseError& e) {
        EXPECT_GT(e.line(), 1u);
    }
}

TEST(CaexParse, UnknownTopLevelElement)
{
    EXPECT_THROW(caex::parse("<CAEXFile><SystemUnitClassLib Name=\"x\"/></CAEXFile>"), UnsupportedConstruct);
    EXPECT_THROW(caex::parse("<Other/>"), UnsupportedConstruct);
}

TEST(CaexParse, DuplicateChildNamesRejected)
{
    EXPECT_THROW(caex::parse("<CAEXFile><InstanceHierarchy Name=\"I\"><InternalElement Name=\"a\"/>"
                             "<InternalElement Name=\"a\"/></InstanceHierarchy></CAEXFile>"),
                 ParseError);
}

TEST(CaexSerialize, EmptyDocumentSkeleton)
{
    EXPECT_EQ(caex::serialize({}), "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                                   "<CAEXFile SchemaVersion=\"3.0\">\n"
                                   "</CAEXFile>\n");
}

TEST(CaexSerialize, CanonicalIdempotence)
{
    const auto once = caex::serialize(caex::parse(caex::write_model(fixture::tjunction())));
    const auto twice = caex::serialize(caex::parse(once));
    EXPECT_EQ(once, twice);
    EXPECT_EQ(once.find('\r'), std::string::npos);
    EXPECT_EQ(once.find('\t'), std::string::npos);
}

TEST(CaexSerialize, LatencyStringPreserved)
{
    const auto text = caex::write_model(fixture::tjunction());
    EXPECT_NE(text.find("<Value>0.1</Value>"), std::string::npos);
    auto m = fixture::tjunction();
    auto c = m.components.back();
    c.name = "Conv3";
    c.latency = Decimal("0.100");
    m = add_component(m, c);
    const auto back = caex::read_model(caex::write_model(m)).model;
    EXPECT_EQ(find_component(back, "Conv3")->latency->text(), "0.100");
    EXPECT_EQ(find_component(back, "Conv1")->latency->text(), "0.1");
}

TEST(CaexModel, FixtureConv1)
{
    const auto r = caex::read_model(caex::write_model(fixture::tjunction()));
    EXPECT_TRUE(r.violations.empty());
    ASSERT_TRUE(find_component(r.model, "Conv1"));
    EXPECT_EQ(find_component(r.model, "Conv1")->component_type, "P100");
}

TEST(CaexModel, FixtureRoundTripEquality)
{
    const auto m = fixture::tjunction();
    const auto r = caex::to_model(caex::from_model(m));
    EXPECT_EQ(r.model, m);
    EXPECT_TRUE(r.violations.empty());
}

TEST(CaexModel, CrossRefsBecomeInternalLinks)
{
    const auto m = fixture::tjunction();
    const auto doc = caex::from_model(m);
    ASSERT_EQ(doc.internal_links.size(), m.cross_refs.size());
    EXPECT_EQ(doc.internal_links[0].side_a, m.cross_refs[0].source);
    EXPECT_EQ(doc.internal_links[0].side_b, m.cross_refs[0].target);
    EXPECT_EQ(doc.internal_links[0].name, m.cross_refs[0].kind);
}

TEST(CaexModel, EmptyModuleHasFiveSubClassElements)
{
    auto doc = caex::from_model(new_module("m", "m"));
    const auto& root = module_root(doc);
    std::vector<std::string> names;
    for (const auto& c : root.children)
        names.push_back(c.name);
    for (const auto* sc : {"general", "status", "function", "interface", "control"})
        EXPECT_NE(std::find(names.begin(), names.end(), sc), names.end()) << sc;
}

TEST(CaexModel, MissingStatusContainer)
{
    auto doc = caex::from_model(fixture::tjunction());
    auto& children = module_root(doc).children;
    children.erase(std::remove_if(children.begin(), children.end(), [](const auto& c) { return c.name == "status"; }),
                   children.end());
    const auto r = caex::to_model(doc);
    EXPECT_TRUE(r.model.status.runtime_variables.empty());
    ASSERT_EQ(r.violations.size(), 1u);
    EXPECT_EQ(r.violations[0].rule_id, "caex.missing-container");
    EXPECT_EQ(find_rule(r.violations[0].rule_id)->severity, r.violations[0].severity);
}

TEST(CaexModel, RootCount)
{
    auto doc = caex::from_model(fixture::tjunction());
    auto second = module_root(doc);
    second.name = "tjunction-02";
    doc.instance_hierarchies[0].elements.push_back(second);
    EXPECT_THROW(caex::to_model(doc), StructuralError);
    doc.instance_hierarchies[0].elements.clear();
    EXPECT_THROW(caex::to_model(doc), StructuralError);
}

TEST(CaexModel, UnknownElementIsWarning)
{
    auto doc = caex::from_model(fixture::tjunction());
    module_root(doc).children.push_back(caex::InternalElement{"extra", {}, {}, {}, {}, {}});
    const auto r = caex::to_model(doc);
    ASSERT_EQ(r.violations.size(), 1u);
    EXPECT_EQ(r.violations[0].rule_id, "caex.unknown-element");
    EXPECT_EQ(r.violations[0].severity, Severity::warning);
}

TEST(ExternalDocument, AttachCollada)
{
    const auto m = caex::attach_external_document(new_module("m", "m"), "m/general", "COLLADAInterface",
                                                  "layout/tjunction.dae");
    ASSERT_EQ(m.general.semantics.interfaces.size(), 1u);
    EXPECT_EQ(m.general.semantics.interfaces[0].interface_class, "COLLADAInterface");
    EXPECT_EQ(m.general.semantics.interfaces[0].ref_uri, "layout/tjunction.dae");
    const auto text = caex::write_model(m);
    EXPECT_NE(text.find("refURI"), std::string::npos);
    EXPECT_EQ(caex::read_model(text).model, m);
}

TEST(ExternalDocument, AttachPlcopenToControlFunction)
{
    const auto m = fixture::tjunction();
    const auto& ifaces = m.control.control_functions[0].semantics.interfaces;
    ASSERT_EQ(ifaces.size(), 1u);
    EXPECT_EQ(ifaces[0].interface_class, "ExternalDataConnector.PLOpenXMLInterface");
    EXPECT_EQ(ifaces[0].ref_uri, "plc/tjunction.plcopen.xml");
}

TEST(ExternalDocument, UnknownConnector)
{
    EXPECT_THROW(caex::attach_external_document(new_module("m", "m"), "m/general", "FooInterface", "x"), Error);
    EXPECT_THROW(caex::attach_external_document(caex::InternalElement{"e", {}, {}, {}, {}, {}}, "FooInterface", "x"),
                 Error);
}

TEST(ExternalDocument, InternalElementRefUriVerbatim)
{
    const auto e = caex::attach_external_document(caex::InternalElement{"e", {}, {}, {}, {}, {}}, "AttachmentInterface",
                                                  "//server/a b/c.pdf");
    ASSERT_EQ(e.external_interfaces.size(), 1u);
    ASSERT_EQ(e.external_interfaces[0].attributes.size(), 1u);
    EXPECT_EQ(e.external_interfaces[0].attributes[0].name, "refURI");
    EXPECT_EQ(e.external_interfaces[0].attributes[0].value, "//server/a b/c.pdf");
}

TEST(CaexProperty, RandomModelRoundTrip)
{
    for (std::uint32_t seed = 0; seed < 200; ++seed) {
        testgen::ModelGenerator gen(seed);
        const auto m = gen.model();
        const auto bytes = caex::write_model(m);
        const auto r = caex::read_model(bytes);
        EXPECT_EQ(r.model, m) << "seed " << seed;
        EXPECT_TRUE(r.violations.empty()) << "seed " << seed;
        EXPECT_EQ(caex::write_model(r.model), bytes) << "seed " << seed;
    }
}

TEST(CaexProperty, EqualDocumentsEqualBytes)
{
    for (std::uint32_t seed = 0; seed < 100; ++seed) {
        testgen::ModelGenerator gen(seed);
        const auto doc = caex::from_model(gen.model());
        const auto copy = caex::parse(caex::serialize(doc));
        EXPECT_EQ(copy, doc);
        EXPECT_EQ(caex::serialize(copy), caex::serialize(doc));
    }
}
