#include <doctest.h>

#include <xcore/json_io.hpp>

#include <json.hpp>

#include <memory>
#include <string>
#include <vector>

using namespace xcore;
using nlohmann::json;

namespace
{
    auto kitchen_sink() -> Instance
    {
        InstanceBuilder b("sink");
        b.set_meta("family", "demo");
        b.set_meta("note", "all forms");
        for (int i = 0; i < 8; ++i)
            b.add_var("x[" + std::to_string(i) + "]", Domain::range(0, 4));
        int y = b.add_var("y", Domain({-2, 0, 1, 2, 3, 7}));

        auto tuples = std::make_shared<Tuples>(Tuples{{0, STAR}, {1, 2}});
        b.post(Constraint{CIntension{ex_lt(ex_var(0) + ex_lit(1), ex_var(1))}});
        b.post(Constraint{CExtension{{0, 1}, tuples, true, true}}, "table");
        b.post(Constraint{CRegular{{0, 1}, Automaton{0, {1}, {{0, 0, 1}, {1, 1, 1}}}}});
        b.post(Constraint{CMdd{{0, 1}, 0, 9, {{0, 0, 1}, {0, 1, 1}, {1, 2, 9}}}});
        b.post(Constraint{CAllDifferent{{0, 1, 2}, Value{0}}});
        b.post(Constraint{CAllDifferentList{{{0, 1}, {2, 3}}}});
        b.post(Constraint{CAllEqual{{4, 5}}});
        b.post(Constraint{COrdered{{0, 1, 2}, true, true}});
        b.post(Constraint{CLex{{{0, 1}, {2, 3}}, false, false}});
        b.post(Constraint{CPrecedence{{0, 1, 2}, {1, 2}}});
        b.post(Constraint{CSum{{0, 1}, {2, -1}, Cmp::Le, ValOrVar::of_var(y)}});
        b.post(Constraint{CCount{{0, 1, 2}, {1, 3}, Cmp::Eq, ValOrVar::of_value(1)}});
        b.post(Constraint{CNValues{{0, 1, 2}, Cmp::Ge, ValOrVar::of_value(2)}});
        b.post(Constraint{CCardinality{{0, 1, 2}, {0, 1}, {0, 1}, {2, 2}}});
        b.post(Constraint{CMaximum{{0, 1, 2}, Cmp::Eq, ValOrVar::of_var(3)}});
        b.post(Constraint{CMinimum{{0, 1, 2}, Cmp::Ne, ValOrVar::of_value(3)}});
        b.post(Constraint{CElement{{ValOrVar::of_var(1), ValOrVar::of_value(5)}, 0,
            ValOrVar::of_var(2)}});
        b.post(Constraint{CChannel{{0, 1}, {2, 3, 4}, {}}});
        b.post(Constraint{CNoOverlap{{{{0, 1}, {2, 2}}, {{2, 3}, {1, 1}}}}});
        b.post(Constraint{CCumulative{{0, 1}, {2, 2}, {1, 1}, Cmp::Le, ValOrVar::of_var(y)}});
        b.post(Constraint{CBinPacking{{0, 1, 2}, {1, 2, 1}, 2, {},
            {ValOrVar::of_value(2), ValOrVar::of_var(4)}}});
        b.post(Constraint{CKnapsack{{0, 1}, {3, 4}, ValOrVar::of_value(8), {5, 6}, Cmp::Ge,
            ValOrVar::of_value(5)}});
        b.post(Constraint{CCircuit{{0, 1, 2}}});
        b.post(Constraint{CInstantiation{{4, 5}, {1, 2}}});
        b.post(Constraint{CSlide{{0, 1, 2, 3}, 2, 1, true,
            std::make_shared<Constraint>(Constraint{CIntension{ex_le(ex_var(0), ex_var(1))}})}},
            "windows");
        b.set_objective(Objective::of_sum(Sense::Minimize, {0, 1}, {1, 1}));
        return b.build();
    }
}

TEST_CASE("write/parse round trip preserves every constraint form")
{
    Instance inst = kitchen_sink();
    std::string text = write_instance(inst);
    ParseResult r = parse_instance(text);
    CHECK(r.warnings.empty());
    const Instance & back = r.instance;

    CHECK(back.name == inst.name);
    CHECK(back.metadata == inst.metadata);
    CHECK(back.variables.size() == inst.variables.size());
    for (size_t i = 0; i < inst.variables.size(); ++i)
    {
        CHECK(back.variables[i].name == inst.variables[i].name);
        CHECK(back.variables[i].domain == inst.variables[i].domain);
    }
    REQUIRE(back.constraints.size() == inst.constraints.size());
    for (size_t i = 0; i < inst.constraints.size(); ++i)
    {
        CHECK(std::string(form_name(back.constraints[i].constraint))
            == form_name(inst.constraints[i].constraint));
        CHECK(back.constraints[i].tag == inst.constraints[i].tag);
        CHECK(constraint_scope(back.constraints[i].constraint)
            == constraint_scope(inst.constraints[i].constraint));
    }
    REQUIRE(back.objective.has_value());
    CHECK(back.objective->kind == ObjectiveKind::Sum);

    // starred cell survives
    const auto & ext = std::get<CExtension>(back.constraints[1].constraint.form);
    CHECK(ext.starred);
    CHECK((*ext.tuples)[0][1] == STAR);

    // canonical writer: a second trip is byte-identical
    CHECK(write_instance(back) == text);
}

TEST_CASE("canonical text does not depend on input key order or whitespace")
{
    InstanceBuilder b("tiny");
    b.add_var("a", Domain({0, 1}));
    b.add_var("b", Domain({0, 1}));
    b.post(Constraint{CSum{{0, 1}, {1, 1}, Cmp::Eq, ValOrVar::of_value(1)}});
    std::string canon = write_instance(b.build());

    std::string shuffled = R"({"variables":[{"domain":[0,1],"name":"a"},
        {"domain":[[0,1]],"name":"b"}],
        "constraints":[{"rhs":1,"cmp":"eq","scope":["a","b"],"coeffs":[1,1],"type":"sum"}],
        "name":"tiny","format":"xcore-json/1"})";
    CHECK(write_instance(parse_instance(shuffled).instance) == canon);
}

TEST_CASE("domains compress runs of three or more")
{
    InstanceBuilder b("dom");
    b.add_var("x", Domain({1, 3, 4, 5, 9}));
    b.add_var("y", Domain({4, 5}));
    std::string text = write_instance(b.build());
    json j = json::parse(text);
    CHECK(j["variables"][0]["domain"] == json::array({1, json::array({3, 5}), 9}));
    CHECK(j["variables"][1]["domain"] == json::array({4, 5}));

    // both spellings read back to the same domain
    auto r = parse_instance(text);
    CHECK(r.instance.variables[0].domain == Domain({1, 3, 4, 5, 9}));
    CHECK(r.instance.variables[1].domain == Domain({4, 5}));
}

TEST_CASE("empty tags and metadata are omitted from the document")
{
    InstanceBuilder b("lean");
    b.add_var("x", Domain({0, 1}));
    b.post(Constraint{CAllEqual{{0}}});
    json j = json::parse(write_instance(b.build()));
    CHECK(! j.contains("metadata"));
    CHECK(! j.contains("objective"));
    CHECK(! j["constraints"][0].contains("tag"));
}

TEST_CASE("parse errors carry a JSON pointer path")
{
    std::string base = R"({"format":"xcore-json/1","name":"t","variables":
        [{"name":"a","domain":[0,1]},{"name":"b","domain":[0,1]}],"constraints":[%]})";
    auto with = [&](const std::string & c)
    {
        std::string doc = base;
        doc.replace(doc.find('%'), 1, c);
        return doc;
    };

    // wildcard in a non-starred table, error at the exact cell
    try
    {
        parse_instance(with(R"({"type":"extension","scope":["a","b"],
            "tuples":[[0,"*"]],"supports":true,"starred":false})"));
        CHECK(false);
    }
    catch (const ParseError & e)
    {
        CHECK(e.path == "/constraints/0/tuples/0/1");
        CHECK(std::string(e.what()).find("(at /constraints/0/tuples/0/1)") != std::string::npos);
    }

    // unknown constraint type fails in strict and lax alike
    CHECK_THROWS_AS(parse_instance(with(R"({"type":"frobnicate","scope":["a"]})")), ParseError);
    CHECK_THROWS_AS(
        parse_instance(with(R"({"type":"frobnicate","scope":["a"]})"), {false}), ParseError);

    // unknown operator inside an expression
    try
    {
        parse_instance(with(R"({"type":"intension","expr":["xor","a","b"]})"));
        CHECK(false);
    }
    catch (const ParseError & e)
    {
        CHECK(e.path == "/constraints/0/expr/0");
    }

    // unresolved variable name
    CHECK_THROWS_AS(parse_instance(with(R"({"type":"allEqual","scope":["a","zz"]})")), ParseError);

    // structural validation failures surface as parse errors too
    CHECK_THROWS_AS(parse_instance(with(
        R"({"type":"sum","scope":["a","b"],"coeffs":[1],"cmp":"eq","rhs":0})")), ParseError);

    // bad format marker
    CHECK_THROWS_AS(parse_instance(R"({"format":"xcore-json/9","name":"t",
        "variables":[{"name":"a","domain":[0]}]})"), ParseError);

    // duplicate variable names
    CHECK_THROWS_AS(parse_instance(R"({"format":"xcore-json/1","name":"t","variables":
        [{"name":"a","domain":[0]},{"name":"a","domain":[0]}]})"), ParseError);
}

TEST_CASE("strict mode rejects unknown fields, lax mode flags and drops them")
{
    std::string doc = R"({"format":"xcore-json/1","name":"t","flavour":"grape",
        "variables":[{"name":"a","domain":[0,1]}],
        "constraints":[{"type":"allEqual","scope":["a"],"color":"red"}]})";
    CHECK_THROWS_AS(parse_instance(doc), ParseError);

    ParseResult lax = parse_instance(doc, {false});
    REQUIRE(lax.warnings.size() == 2);
    CHECK(lax.warnings[0].find("flavour") != std::string::npos);
    CHECK(lax.warnings[1].find("color") != std::string::npos);
    CHECK(lax.warnings[1].find("/constraints/0") != std::string::npos);

    // dropped fields do not reach the canonical output
    json j = json::parse(write_instance(lax.instance));
    CHECK(! j.contains("flavour"));
    CHECK(! j["constraints"][0].contains("color"));
}

TEST_CASE("slide windows use positional references")
{
    InstanceBuilder b("sl");
    for (int i = 0; i < 3; ++i)
        b.add_var("v" + std::to_string(i), Domain({0, 1}));
    b.post(Constraint{CSlide{{0, 1, 2}, 2, 1, false,
        std::make_shared<Constraint>(Constraint{CIntension{ex_ne(ex_var(0), ex_var(1))}})}});
    std::string text = write_instance(b.build());
    json j = json::parse(text);
    CHECK(j["constraints"][0]["window"]["expr"] == json::array({"ne", "%0", "%1"}));

    auto back = parse_instance(text).instance;
    const auto & slide = std::get<CSlide>(back.constraints[0].constraint.form);
    CHECK(slide.window_arity == 2);
    CHECK(write_instance(back) == text);

    // positional reference beyond the window arity
    std::string bad = text;
    auto pos = bad.find("%1");
    REQUIRE(pos != std::string::npos);
    bad.replace(pos, 2, "%7");
    CHECK_THROWS_AS(parse_instance(bad), ParseError);
}

TEST_CASE("solution documents round trip")
{
    InstanceBuilder b("sol");
    b.add_var("x", Domain({0, 1, 2}));
    b.add_var("y", Domain({0, 1, 2}));
    b.set_objective(Objective::of_var(Sense::Minimize, 0));
    Instance inst = b.build();

    std::string text = write_solution(inst, {2, 1}, Value{2});
    SolutionDoc doc = parse_solution(text);
    CHECK(doc.instance == "sol");
    CHECK(doc.objective == Value{2});
    CHECK(solution_assignment(inst, doc) == Assignment{2, 1});

    CHECK_THROWS_AS(write_solution(inst, {2}), BuildError);

    SolutionDoc alien = doc;
    alien.assignment["zz"] = 0;
    CHECK_THROWS_AS(solution_assignment(inst, alien), ParseError);

    SolutionDoc missing = doc;
    missing.assignment.erase("y");
    CHECK_THROWS_AS(solution_assignment(inst, missing), ParseError);
}

TEST_CASE("value-or-variable fields accept both spellings")
{
    std::string doc = R"({"format":"xcore-json/1","name":"vv","variables":
        [{"name":"a","domain":[0,1,2]},{"name":"b","domain":[0,1,2]}],
        "constraints":[
          {"type":"sum","scope":["a"],"coeffs":[1],"cmp":"le","rhs":{"var":"b"}},
          {"type":"cumulative","origins":["a"],"lengths":[1],"heights":[1],
           "cmp":"le","limit":3}]})";
    auto inst = parse_instance(doc).instance;
    const auto & sum = std::get<CSum>(inst.constraints[0].constraint.form);
    CHECK(sum.rhs.is_var);
    CHECK(sum.rhs.var() == 1);
    const auto & cum = std::get<CCumulative>(inst.constraints[1].constraint.form);
    CHECK(! cum.limit.is_var);
    CHECK(cum.limit.value == 3);
    CHECK(write_instance(parse_instance(write_instance(inst)).instance) == write_instance(inst));
}
