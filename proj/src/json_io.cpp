#include <xcore/json_io.hpp>

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <map>

namespace xcore
{
    namespace
    {
        using nlohmann::json;

        using Namer = std::function<std::string(int)>;
        using Resolver = std::function<int(const std::string &, const std::string &)>;

        [[noreturn]] auto fail(const std::string & msg, const std::string & path) -> void
        {
            throw ParseError(msg, path);
        }

        // ---- writing --------------------------------------------------------

        const std::map<ExprOp, const char *> op_names =
        {
            {ExprOp::Add, "add"}, {ExprOp::Sub, "sub"}, {ExprOp::Mul, "mul"},
            {ExprOp::FloorDiv, "div"}, {ExprOp::Mod, "mod"}, {ExprOp::Abs, "abs"},
            {ExprOp::Dist, "dist"}, {ExprOp::Min, "min"}, {ExprOp::Max, "max"},
            {ExprOp::Lt, "lt"}, {ExprOp::Le, "le"}, {ExprOp::Eq, "eq"},
            {ExprOp::Ne, "ne"}, {ExprOp::Ge, "ge"}, {ExprOp::Gt, "gt"},
            {ExprOp::And, "and"}, {ExprOp::Or, "or"}, {ExprOp::Not, "not"},
            {ExprOp::Iff, "iff"}, {ExprOp::Imp, "imp"}, {ExprOp::Ift, "ift"},
            {ExprOp::InSet, "in"},
        };

        auto domain_json(const Domain & d) -> json
        {
            json out = json::array();
            const auto & vals = d.values();
            size_t i = 0;
            while (i < vals.size())
            {
                size_t j = i;
                while (j + 1 < vals.size() && vals[j + 1] == vals[j] + 1)
                    ++j;
                if (j - i >= 2)
                    out.push_back(json::array({vals[i], vals[j]}));
                else
                    for (size_t q = i; q <= j; ++q)
                        out.push_back(vals[q]);
                i = j + 1;
            }
            return out;
        }

        auto expr_json(const Expr & e, const Namer & name) -> json
        {
            switch (e.op)
            {
                case ExprOp::Const:
                    return json(e.value);
                case ExprOp::VarRef:
                    return json(name(e.var));
                case ExprOp::InSet:
                {
                    json set = json::array();
                    for (Value v : e.set_values)
                        set.push_back(v);
                    return json::array({"in", expr_json(e.kids[0], name), std::move(set)});
                }
                default:
                {
                    json out = json::array();
                    out.push_back(op_names.at(e.op));
                    for (const auto & kid : e.kids)
                        out.push_back(expr_json(kid, name));
                    return out;
                }
            }
        }

        auto scope_json(const std::vector<int> & scope, const Namer & name) -> json
        {
            json out = json::array();
            for (int v : scope)
                out.push_back(name(v));
            return out;
        }

        auto lists_json(const std::vector<std::vector<int>> & lists, const Namer & name) -> json
        {
            json out = json::array();
            for (const auto & l : lists)
                out.push_back(scope_json(l, name));
            return out;
        }

        auto vov_json(const ValOrVar & v, const Namer & name) -> json
        {
            if (v.is_var)
                return json{{"var", name(v.var())}};
            return json(v.value);
        }

        auto tuples_json(const Tuples & tuples) -> json
        {
            json out = json::array();
            for (const auto & row : tuples)
            {
                json r = json::array();
                for (Value v : row)
                {
                    if (v == STAR)
                        r.push_back("*");
                    else
                        r.push_back(v);
                }
                out.push_back(std::move(r));
            }
            return out;
        }

        auto constraint_json(const Constraint & c, const Namer & name) -> json;

        auto form_json(const CIntension & c, const Namer & name) -> json
        {
            return {{"type", "intension"}, {"expr", expr_json(c.expr, name)}};
        }

        auto form_json(const CExtension & c, const Namer & name) -> json
        {
            return {{"type", "extension"}, {"scope", scope_json(c.scope, name)},
                {"tuples", tuples_json(*c.tuples)}, {"supports", c.supports},
                {"starred", c.starred}};
        }

        auto form_json(const CRegular & c, const Namer & name) -> json
        {
            json trans = json::array();
            for (const auto & t : c.automaton.transitions)
                trans.push_back(json::array({t.from, t.symbol, t.to}));
            return {{"type", "regular"}, {"scope", scope_json(c.scope, name)},
                {"start", c.automaton.start}, {"finals", c.automaton.finals},
                {"transitions", std::move(trans)}};
        }

        auto form_json(const CMdd & c, const Namer & name) -> json
        {
            json trans = json::array();
            for (const auto & t : c.transitions)
                trans.push_back(json::array({t.from, t.value, t.to}));
            return {{"type", "mdd"}, {"scope", scope_json(c.scope, name)},
                {"root", c.root}, {"terminal", c.terminal}, {"transitions", std::move(trans)}};
        }

        auto form_json(const CAllDifferent & c, const Namer & name) -> json
        {
            json out = {{"type", "allDifferent"}, {"scope", scope_json(c.scope, name)}};
            if (c.except)
                out["except"] = *c.except;
            return out;
        }

        auto form_json(const CAllDifferentList & c, const Namer & name) -> json
        {
            return {{"type", "allDifferentList"}, {"lists", lists_json(c.lists, name)}};
        }

        auto form_json(const CAllEqual & c, const Namer & name) -> json
        {
            return {{"type", "allEqual"}, {"scope", scope_json(c.scope, name)}};
        }

        auto form_json(const COrdered & c, const Namer & name) -> json
        {
            return {{"type", "ordered"}, {"scope", scope_json(c.scope, name)},
                {"increasing", c.increasing}, {"strict", c.strict}};
        }

        auto form_json(const CLex & c, const Namer & name) -> json
        {
            return {{"type", "lex"}, {"lists", lists_json(c.lists, name)},
                {"increasing", c.increasing}, {"strict", c.strict}};
        }

        auto form_json(const CPrecedence & c, const Namer & name) -> json
        {
            return {{"type", "precedence"}, {"scope", scope_json(c.scope, name)},
                {"values", c.values}};
        }

        auto form_json(const CSum & c, const Namer & name) -> json
        {
            return {{"type", "sum"}, {"scope", scope_json(c.scope, name)},
                {"coeffs", c.coeffs}, {"cmp", cmp_name(c.cmp)}, {"rhs", vov_json(c.rhs, name)}};
        }

        auto form_json(const CCount & c, const Namer & name) -> json
        {
            return {{"type", "count"}, {"scope", scope_json(c.scope, name)},
                {"values", c.values}, {"cmp", cmp_name(c.cmp)}, {"rhs", vov_json(c.rhs, name)}};
        }

        auto form_json(const CNValues & c, const Namer & name) -> json
        {
            return {{"type", "nValues"}, {"scope", scope_json(c.scope, name)},
                {"cmp", cmp_name(c.cmp)}, {"rhs", vov_json(c.rhs, name)}};
        }

        auto form_json(const CCardinality & c, const Namer & name) -> json
        {
            return {{"type", "cardinality"}, {"scope", scope_json(c.scope, name)},
                {"values", c.values}, {"occursLo", c.occurs_lo}, {"occursHi", c.occurs_hi}};
        }

        auto form_json(const CMaximum & c, const Namer & name) -> json
        {
            return {{"type", "maximum"}, {"scope", scope_json(c.scope, name)},
                {"cmp", cmp_name(c.cmp)}, {"rhs", vov_json(c.rhs, name)}};
        }

        auto form_json(const CMinimum & c, const Namer & name) -> json
        {
            return {{"type", "minimum"}, {"scope", scope_json(c.scope, name)},
                {"cmp", cmp_name(c.cmp)}, {"rhs", vov_json(c.rhs, name)}};
        }

        auto form_json(const CElement & c, const Namer & name) -> json
        {
            json list = json::array();
            for (const auto & item : c.list)
                list.push_back(vov_json(item, name));
            return {{"type", "element"}, {"list", std::move(list)},
                {"index", name(c.index)}, {"value", vov_json(c.value, name)}};
        }

        auto form_json(const CChannel & c, const Namer & name) -> json
        {
            json out = {{"type", "channel"}, {"list1", scope_json(c.list1, name)}};
            if (!c.list2.empty())
                out["list2"] = scope_json(c.list2, name);
            if (c.value)
                out["value"] = name(*c.value);
            return out;
        }

        auto form_json(const CNoOverlap & c, const Namer & name) -> json
        {
            json items = json::array();
            for (const auto & item : c.items)
                items.push_back(json{{"origins", scope_json(item.origins, name)},
                    {"lengths", item.lengths}});
            return {{"type", "noOverlap"}, {"items", std::move(items)}};
        }

        auto form_json(const CCumulative & c, const Namer & name) -> json
        {
            return {{"type", "cumulative"}, {"origins", scope_json(c.origins, name)},
                {"lengths", c.lengths}, {"heights", c.heights},
                {"cmp", cmp_name(c.cmp)}, {"limit", vov_json(c.limit, name)}};
        }

        auto form_json(const CBinPacking & c, const Namer & name) -> json
        {
            json out = {{"type", "binPacking"}, {"scope", scope_json(c.scope, name)},
                {"sizes", c.sizes}, {"bins", c.bins}};
            if (c.limit)
                out["limit"] = vov_json(*c.limit, name);
            if (!c.loads.empty())
            {
                json loads = json::array();
                for (const auto & l : c.loads)
                    loads.push_back(vov_json(l, name));
                out["loads"] = std::move(loads);
            }
            return out;
        }

        auto form_json(const CKnapsack & c, const Namer & name) -> json
        {
            return {{"type", "knapsack"}, {"scope", scope_json(c.scope, name)},
                {"weights", c.weights}, {"weightLimit", vov_json(c.weight_limit, name)},
                {"profits", c.profits}, {"profitCmp", cmp_name(c.profit_cmp)},
                {"profitRhs", vov_json(c.profit_rhs, name)}};
        }

        auto form_json(const CCircuit & c, const Namer & name) -> json
        {
            return {{"type", "circuit"}, {"scope", scope_json(c.scope, name)}};
        }

        auto form_json(const CInstantiation & c, const Namer & name) -> json
        {
            return {{"type", "instantiation"}, {"scope", scope_json(c.scope, name)},
                {"values", c.values}};
        }

        auto form_json(const CSlide & c, const Namer & name) -> json
        {
            Namer window_name = [](int v) { return "%" + std::to_string(v); };
            return {{"type", "slide"}, {"scope", scope_json(c.scope, name)},
                {"arity", c.window_arity}, {"offset", c.offset}, {"circular", c.circular},
                {"window", constraint_json(*c.window, window_name)}};
        }

        auto constraint_json(const Constraint & c, const Namer & name) -> json
        {
            return std::visit([&](const auto & form) { return form_json(form, name); }, c.form);
        }

        // ---- reading --------------------------------------------------------

        struct Ctx
        {
            ParseOptions opts;
            std::vector<std::string> * warnings = nullptr;
        };

        auto check_fields(const json & j, const std::vector<const char *> & allowed,
            const std::string & path, const Ctx & ctx) -> void
        {
            for (const auto & [key, value] : j.items())
            {
                (void)value;
                bool known = std::any_of(allowed.begin(), allowed.end(),
                    [&](const char * a) { return key == a; });
                if (known)
                    continue;
                if (ctx.opts.strict)
                    fail("unknown field \"" + key + "\"", path);
                ctx.warnings->push_back("ignored unknown field \"" + key + "\" at " + path);
            }
        }

        auto need(const json & j, const char * key, const std::string & path) -> const json &
        {
            if (!j.is_object() || !j.contains(key))
                fail(std::string("missing field \"") + key + "\"", path);
            return j.at(key);
        }

        auto as_str(const json & j, const std::string & path) -> std::string
        {
            if (!j.is_string())
                fail("expected a string", path);
            return j.get<std::string>();
        }

        auto as_value(const json & j, const std::string & path) -> Value
        {
            if (!j.is_number_integer())
                fail("expected an integer", path);
            return j.get<Value>();
        }

        auto as_int(const json & j, const std::string & path) -> int
        {
            return static_cast<int>(as_value(j, path));
        }

        auto as_bool(const json & j, const std::string & path) -> bool
        {
            if (!j.is_boolean())
                fail("expected a boolean", path);
            return j.get<bool>();
        }

        auto as_array(const json & j, const std::string & path) -> const json &
        {
            if (!j.is_array())
                fail("expected an array", path);
            return j;
        }

        auto value_list(const json & j, const std::string & path) -> std::vector<Value>
        {
            as_array(j, path);
            std::vector<Value> out;
            for (size_t i = 0; i < j.size(); ++i)
                out.push_back(as_value(j[i], path + "/" + std::to_string(i)));
            return out;
        }

        auto int_list(const json & j, const std::string & path) -> std::vector<int>
        {
            std::vector<int> out;
            for (Value v : value_list(j, path))
                out.push_back(static_cast<int>(v));
            return out;
        }

        auto parse_domain(const json & j, const std::string & path) -> Domain
        {
            as_array(j, path);
            std::vector<Value> values;
            for (size_t i = 0; i < j.size(); ++i)
            {
                std::string ipath = path + "/" + std::to_string(i);
                const auto & item = j[i];
                if (item.is_array())
                {
                    if (item.size() != 2)
                        fail("domain runs are [lo, hi]", ipath);
                    Value lo = as_value(item[0], ipath), hi = as_value(item[1], ipath);
                    if (lo > hi)
                        fail("empty domain run", ipath);
                    for (Value v = lo; v <= hi; ++v)
                        values.push_back(v);
                }
                else
                {
                    values.push_back(as_value(item, ipath));
                }
            }
            try
            {
                return Domain(std::move(values));
            }
            catch (const BuildError & e)
            {
                fail(e.what(), path);
            }
        }

        auto parse_scope(const json & j, const std::string & path, const Resolver & resolve)
            -> std::vector<int>
        {
            as_array(j, path);
            std::vector<int> out;
            for (size_t i = 0; i < j.size(); ++i)
            {
                std::string ipath = path + "/" + std::to_string(i);
                out.push_back(resolve(as_str(j[i], ipath), ipath));
            }
            return out;
        }

        auto parse_lists(const json & j, const std::string & path, const Resolver & resolve)
            -> std::vector<std::vector<int>>
        {
            as_array(j, path);
            std::vector<std::vector<int>> out;
            for (size_t i = 0; i < j.size(); ++i)
                out.push_back(parse_scope(j[i], path + "/" + std::to_string(i), resolve));
            return out;
        }

        auto parse_cmp(const json & j, const std::string & path) -> Cmp
        {
            auto s = as_str(j, path);
            if (s == "lt") return Cmp::Lt;
            if (s == "le") return Cmp::Le;
            if (s == "eq") return Cmp::Eq;
            if (s == "ne") return Cmp::Ne;
            if (s == "ge") return Cmp::Ge;
            if (s == "gt") return Cmp::Gt;
            fail("unknown comparison \"" + s + "\"", path);
        }

        auto parse_vov(const json & j, const std::string & path, const Resolver & resolve,
            const Ctx & ctx) -> ValOrVar
        {
            if (j.is_object())
            {
                check_fields(j, {"var"}, path, ctx);
                return ValOrVar::of_var(resolve(as_str(need(j, "var", path), path + "/var"),
                    path + "/var"));
            }
            return ValOrVar::of_value(as_value(j, path));
        }

        auto parse_expr(const json & j, const std::string & path, const Resolver & resolve) -> Expr
        {
            if (j.is_number_integer())
                return ex_lit(j.get<Value>());
            if (j.is_string())
                return ex_var(resolve(j.get<std::string>(), path));
            if (!j.is_array() || j.empty() || !j[0].is_string())
                fail("expected an expression (integer, variable name, or [op, ...])", path);

            auto op_token = j[0].get<std::string>();
            ExprOp op = ExprOp::Const;
            bool found = false;
            for (const auto & [candidate, token] : op_names)
                if (op_token == token)
                {
                    op = candidate;
                    found = true;
                    break;
                }
            if (!found || op == ExprOp::Const || op == ExprOp::VarRef)
                fail("unknown operator \"" + op_token + "\"", path + "/0");

            auto arg = [&](size_t i)
            {
                return parse_expr(j[i], path + "/" + std::to_string(i), resolve);
            };
            size_t argc = j.size() - 1;
            auto want = [&](size_t count)
            {
                if (argc != count)
                    fail("operator \"" + op_token + "\" takes " + std::to_string(count)
                        + " arguments", path);
            };

            switch (op)
            {
                case ExprOp::Add: case ExprOp::Mul: case ExprOp::Min: case ExprOp::Max:
                case ExprOp::And: case ExprOp::Or:
                {
                    if (argc < 1)
                        fail("operator \"" + op_token + "\" needs arguments", path);
                    std::vector<Expr> kids;
                    for (size_t i = 1; i < j.size(); ++i)
                        kids.push_back(arg(i));
                    return Expr::nary(op, std::move(kids));
                }
                case ExprOp::Sub: case ExprOp::FloorDiv: case ExprOp::Mod: case ExprOp::Dist:
                case ExprOp::Lt: case ExprOp::Le: case ExprOp::Eq: case ExprOp::Ne:
                case ExprOp::Ge: case ExprOp::Gt: case ExprOp::Iff: case ExprOp::Imp:
                    want(2);
                    return Expr::binary(op, arg(1), arg(2));
                case ExprOp::Abs: case ExprOp::Not:
                    want(1);
                    return Expr::unary(op, arg(1));
                case ExprOp::Ift:
                    want(3);
                    return Expr::ift(arg(1), arg(2), arg(3));
                case ExprOp::InSet:
                    want(2);
                    return ex_in(arg(1), value_list(j[2], path + "/2"));
                default:
                    fail("unknown operator \"" + op_token + "\"", path + "/0");
            }
        }

        auto parse_tuples(const json & j, const std::string & path, bool starred) -> Tuples
        {
            as_array(j, path);
            Tuples out;
            for (size_t i = 0; i < j.size(); ++i)
            {
                std::string rpath = path + "/" + std::to_string(i);
                as_array(j[i], rpath);
                std::vector<Value> row;
                for (size_t q = 0; q < j[i].size(); ++q)
                {
                    std::string cpath = rpath + "/" + std::to_string(q);
                    const auto & cell = j[i][q];
                    if (cell.is_string())
                    {
                        if (cell.get<std::string>() != "*")
                            fail("tuple cells are integers or \"*\"", cpath);
                        if (!starred)
                            fail("wildcard in a non-starred table", cpath);
                        row.push_back(STAR);
                    }
                    else
                    {
                        row.push_back(as_value(cell, cpath));
                    }
                }
                out.push_back(std::move(row));
            }
            return out;
        }

        auto parse_constraint(const json & j, const std::string & path, const Resolver & resolve,
            const Ctx & ctx) -> PostedConstraint;

        auto parse_form(const std::string & type, const json & j, const std::string & path,
            const Resolver & resolve, const Ctx & ctx) -> ConstraintForm
        {
            auto fields = [&](std::vector<const char *> allowed)
            {
                allowed.push_back("type");
                allowed.push_back("tag");
                check_fields(j, allowed, path, ctx);
            };

            if (type == "intension")
            {
                fields({"expr"});
                return CIntension{parse_expr(need(j, "expr", path), path + "/expr", resolve)};
            }
            if (type == "extension")
            {
                fields({"scope", "tuples", "supports", "starred"});
                bool starred = j.contains("starred") && as_bool(j.at("starred"), path + "/starred");
                bool supports = !j.contains("supports") || as_bool(j.at("supports"), path + "/supports");
                auto tuples = parse_tuples(need(j, "tuples", path), path + "/tuples", starred);
                return CExtension{parse_scope(need(j, "scope", path), path + "/scope", resolve),
                    std::make_shared<const Tuples>(std::move(tuples)), supports, starred};
            }
            if (type == "regular")
            {
                fields({"scope", "start", "finals", "transitions"});
                Automaton a;
                a.start = as_int(need(j, "start", path), path + "/start");
                a.finals = int_list(need(j, "finals", path), path + "/finals");
                const auto & trans = as_array(need(j, "transitions", path), path + "/transitions");
                for (size_t i = 0; i < trans.size(); ++i)
                {
                    std::string tpath = path + "/transitions/" + std::to_string(i);
                    auto row = value_list(trans[i], tpath);
                    if (row.size() != 3)
                        fail("transitions are [from, symbol, to]", tpath);
                    a.transitions.push_back({static_cast<int>(row[0]), row[1],
                        static_cast<int>(row[2])});
                }
                return CRegular{parse_scope(need(j, "scope", path), path + "/scope", resolve),
                    std::move(a)};
            }
            if (type == "mdd")
            {
                fields({"scope", "root", "terminal", "transitions"});
                CMdd c;
                c.scope = parse_scope(need(j, "scope", path), path + "/scope", resolve);
                c.root = as_int(need(j, "root", path), path + "/root");
                c.terminal = as_int(need(j, "terminal", path), path + "/terminal");
                const auto & trans = as_array(need(j, "transitions", path), path + "/transitions");
                for (size_t i = 0; i < trans.size(); ++i)
                {
                    std::string tpath = path + "/transitions/" + std::to_string(i);
                    auto row = value_list(trans[i], tpath);
                    if (row.size() != 3)
                        fail("transitions are [from, value, to]", tpath);
                    c.transitions.push_back({static_cast<int>(row[0]), row[1],
                        static_cast<int>(row[2])});
                }
                return c;
            }
            if (type == "allDifferent")
            {
                fields({"scope", "except"});
                CAllDifferent c{parse_scope(need(j, "scope", path), path + "/scope", resolve), {}};
                if (j.contains("except"))
                    c.except = as_value(j.at("except"), path + "/except");
                return c;
            }
            if (type == "allDifferentList")
            {
                fields({"lists"});
                return CAllDifferentList{parse_lists(need(j, "lists", path), path + "/lists", resolve)};
            }
            if (type == "allEqual")
            {
                fields({"scope"});
                return CAllEqual{parse_scope(need(j, "scope", path), path + "/scope", resolve)};
            }
            if (type == "ordered")
            {
                fields({"scope", "increasing", "strict"});
                return COrdered{parse_scope(need(j, "scope", path), path + "/scope", resolve),
                    as_bool(need(j, "increasing", path), path + "/increasing"),
                    as_bool(need(j, "strict", path), path + "/strict")};
            }
            if (type == "lex")
            {
                fields({"lists", "increasing", "strict"});
                return CLex{parse_lists(need(j, "lists", path), path + "/lists", resolve),
                    as_bool(need(j, "increasing", path), path + "/increasing"),
                    as_bool(need(j, "strict", path), path + "/strict")};
            }
            if (type == "precedence")
            {
                fields({"scope", "values"});
                return CPrecedence{parse_scope(need(j, "scope", path), path + "/scope", resolve),
                    value_list(need(j, "values", path), path + "/values")};
            }
            if (type == "sum")
            {
                fields({"scope", "coeffs", "cmp", "rhs"});
                return CSum{parse_scope(need(j, "scope", path), path + "/scope", resolve),
                    value_list(need(j, "coeffs", path), path + "/coeffs"),
                    parse_cmp(need(j, "cmp", path), path + "/cmp"),
                    parse_vov(need(j, "rhs", path), path + "/rhs", resolve, ctx)};
            }
            if (type == "count")
            {
                fields({"scope", "values", "cmp", "rhs"});
                return CCount{parse_scope(need(j, "scope", path), path + "/scope", resolve),
                    value_list(need(j, "values", path), path + "/values"),
                    parse_cmp(need(j, "cmp", path), path + "/cmp"),
                    parse_vov(need(j, "rhs", path), path + "/rhs", resolve, ctx)};
            }
            if (type == "nValues")
            {
                fields({"scope", "cmp", "rhs"});
                return CNValues{parse_scope(need(j, "scope", path), path + "/scope", resolve),
                    parse_cmp(need(j, "cmp", path), path + "/cmp"),
                    parse_vov(need(j, "rhs", path), path + "/rhs", resolve, ctx)};
            }
            if (type == "cardinality")
            {
                fields({"scope", "values", "occursLo", "occursHi"});
                return CCardinality{parse_scope(need(j, "scope", path), path + "/scope", resolve),
                    value_list(need(j, "values", path), path + "/values"),
                    value_list(need(j, "occursLo", path), path + "/occursLo"),
                    value_list(need(j, "occursHi", path), path + "/occursHi")};
            }
            if (type == "maximum")
            {
                fields({"scope", "cmp", "rhs"});
                return CMaximum{parse_scope(need(j, "scope", path), path + "/scope", resolve),
                    parse_cmp(need(j, "cmp", path), path + "/cmp"),
                    parse_vov(need(j, "rhs", path), path + "/rhs", resolve, ctx)};
            }
            if (type == "minimum")
            {
                fields({"scope", "cmp", "rhs"});
                return CMinimum{parse_scope(need(j, "scope", path), path + "/scope", resolve),
                    parse_cmp(need(j, "cmp", path), path + "/cmp"),
                    parse_vov(need(j, "rhs", path), path + "/rhs", resolve, ctx)};
            }
            if (type == "element")
            {
                fields({"list", "index", "value"});
                CElement c;
                const auto & list = as_array(need(j, "list", path), path + "/list");
                for (size_t i = 0; i < list.size(); ++i)
                    c.list.push_back(parse_vov(list[i], path + "/list/" + std::to_string(i),
                        resolve, ctx));
                c.index = resolve(as_str(need(j, "index", path), path + "/index"), path + "/index");
                c.value = parse_vov(need(j, "value", path), path + "/value", resolve, ctx);
                return c;
            }
            if (type == "channel")
            {
                fields({"list1", "list2", "value"});
                CChannel c;
                c.list1 = parse_scope(need(j, "list1", path), path + "/list1", resolve);
                if (j.contains("list2"))
                    c.list2 = parse_scope(j.at("list2"), path + "/list2", resolve);
                if (j.contains("value"))
                    c.value = resolve(as_str(j.at("value"), path + "/value"), path + "/value");
                return c;
            }
            if (type == "noOverlap")
            {
                fields({"items"});
                CNoOverlap c;
                const auto & items = as_array(need(j, "items", path), path + "/items");
                for (size_t i = 0; i < items.size(); ++i)
                {
                    std::string ipath = path + "/items/" + std::to_string(i);
                    check_fields(items[i], {"origins", "lengths"}, ipath, ctx);
                    c.items.push_back({parse_scope(need(items[i], "origins", ipath),
                        ipath + "/origins", resolve),
                        value_list(need(items[i], "lengths", ipath), ipath + "/lengths")});
                }
                return c;
            }
            if (type == "cumulative")
            {
                fields({"origins", "lengths", "heights", "cmp", "limit"});
                return CCumulative{parse_scope(need(j, "origins", path), path + "/origins", resolve),
                    value_list(need(j, "lengths", path), path + "/lengths"),
                    value_list(need(j, "heights", path), path + "/heights"),
                    parse_cmp(need(j, "cmp", path), path + "/cmp"),
                    parse_vov(need(j, "limit", path), path + "/limit", resolve, ctx)};
            }
            if (type == "binPacking")
            {
                fields({"scope", "sizes", "bins", "limit", "loads"});
                CBinPacking c;
                c.scope = parse_scope(need(j, "scope", path), path + "/scope", resolve);
                c.sizes = value_list(need(j, "sizes", path), path + "/sizes");
                c.bins = as_int(need(j, "bins", path), path + "/bins");
                if (j.contains("limit"))
                    c.limit = parse_vov(j.at("limit"), path + "/limit", resolve, ctx);
                if (j.contains("loads"))
                {
                    const auto & loads = as_array(j.at("loads"), path + "/loads");
                    for (size_t i = 0; i < loads.size(); ++i)
                        c.loads.push_back(parse_vov(loads[i], path + "/loads/" + std::to_string(i),
                            resolve, ctx));
                }
                return c;
            }
            if (type == "knapsack")
            {
                fields({"scope", "weights", "weightLimit", "profits", "profitCmp", "profitRhs"});
                return CKnapsack{parse_scope(need(j, "scope", path), path + "/scope", resolve),
                    value_list(need(j, "weights", path), path + "/weights"),
                    parse_vov(need(j, "weightLimit", path), path + "/weightLimit", resolve, ctx),
                    value_list(need(j, "profits", path), path + "/profits"),
                    parse_cmp(need(j, "profitCmp", path), path + "/profitCmp"),
                    parse_vov(need(j, "profitRhs", path), path + "/profitRhs", resolve, ctx)};
            }
            if (type == "circuit")
            {
                fields({"scope"});
                return CCircuit{parse_scope(need(j, "scope", path), path + "/scope", resolve)};
            }
            if (type == "instantiation")
            {
                fields({"scope", "values"});
                return CInstantiation{parse_scope(need(j, "scope", path), path + "/scope", resolve),
                    value_list(need(j, "values", path), path + "/values")};
            }
            if (type == "slide")
            {
                fields({"scope", "arity", "offset", "circular", "window"});
                CSlide c;
                c.scope = parse_scope(need(j, "scope", path), path + "/scope", resolve);
                c.window_arity = as_int(need(j, "arity", path), path + "/arity");
                c.offset = as_int(need(j, "offset", path), path + "/offset");
                c.circular = j.contains("circular")
                    && as_bool(j.at("circular"), path + "/circular");
                int arity = c.window_arity;
                Resolver window_resolve = [arity](const std::string & token,
                    const std::string & tpath) -> int
                {
                    if (token.size() < 2 || token[0] != '%')
                        fail("window variables are \"%0\", \"%1\", ...", tpath);
                    int pos = 0;
                    for (size_t q = 1; q < token.size(); ++q)
                    {
                        if (token[q] < '0' || token[q] > '9')
                            fail("window variables are \"%0\", \"%1\", ...", tpath);
                        pos = pos * 10 + (token[q] - '0');
                    }
                    if (pos >= arity)
                        fail("window variable out of range", tpath);
                    return pos;
                };
                auto window = parse_constraint(need(j, "window", path), path + "/window",
                    window_resolve, ctx);
                if (!window.tag.empty())
                    fail("window constraints cannot carry tags", path + "/window");
                c.window = std::make_shared<const Constraint>(std::move(window.constraint));
                return c;
            }
            fail("unknown constraint type \"" + type + "\"", path + "/type");
        }

        auto parse_constraint(const json & j, const std::string & path, const Resolver & resolve,
            const Ctx & ctx) -> PostedConstraint
        {
            if (!j.is_object())
                fail("expected a constraint object", path);
            auto type = as_str(need(j, "type", path), path + "/type");
            PostedConstraint out;
            out.constraint = Constraint{parse_form(type, j, path, resolve, ctx)};
            if (j.contains("tag"))
                out.tag = as_str(j.at("tag"), path + "/tag");
            return out;
        }

        auto objective_json(const Objective & o, const Namer & name) -> json
        {
            json out;
            out["sense"] = o.sense == Sense::Minimize ? "minimize" : "maximize";
            switch (o.kind)
            {
                case ObjectiveKind::Var:
                    out["kind"] = "var";
                    out["var"] = name(o.var);
                    break;
                case ObjectiveKind::Sum:
                    out["kind"] = "sum";
                    out["scope"] = scope_json(o.scope, name);
                    out["coeffs"] = o.coeffs;
                    break;
                case ObjectiveKind::Max:
                case ObjectiveKind::Min:
                {
                    out["kind"] = o.kind == ObjectiveKind::Max ? "max" : "min";
                    json exprs = json::array();
                    for (const auto & e : o.exprs)
                        exprs.push_back(expr_json(e, name));
                    out["exprs"] = std::move(exprs);
                    break;
                }
                case ObjectiveKind::Expr:
                    out["kind"] = "expr";
                    out["expr"] = expr_json(*o.expr, name);
                    break;
            }
            return out;
        }

        auto parse_objective(const json & j, const std::string & path, const Resolver & resolve,
            const Ctx & ctx) -> Objective
        {
            if (!j.is_object())
                fail("expected an objective object", path);
            auto sense_token = as_str(need(j, "sense", path), path + "/sense");
            Sense sense;
            if (sense_token == "minimize")
                sense = Sense::Minimize;
            else if (sense_token == "maximize")
                sense = Sense::Maximize;
            else
                fail("sense must be \"minimize\" or \"maximize\"", path + "/sense");

            auto kind = as_str(need(j, "kind", path), path + "/kind");
            if (kind == "var")
            {
                check_fields(j, {"sense", "kind", "var"}, path, ctx);
                return Objective::of_var(sense,
                    resolve(as_str(need(j, "var", path), path + "/var"), path + "/var"));
            }
            if (kind == "sum")
            {
                check_fields(j, {"sense", "kind", "scope", "coeffs"}, path, ctx);
                return Objective::of_sum(sense,
                    parse_scope(need(j, "scope", path), path + "/scope", resolve),
                    value_list(need(j, "coeffs", path), path + "/coeffs"));
            }
            if (kind == "max" || kind == "min")
            {
                check_fields(j, {"sense", "kind", "exprs"}, path, ctx);
                const auto & arr = as_array(need(j, "exprs", path), path + "/exprs");
                std::vector<Expr> exprs;
                for (size_t i = 0; i < arr.size(); ++i)
                    exprs.push_back(parse_expr(arr[i], path + "/exprs/" + std::to_string(i), resolve));
                return kind == "max" ? Objective::of_max(sense, std::move(exprs))
                    : Objective::of_min(sense, std::move(exprs));
            }
            if (kind == "expr")
            {
                check_fields(j, {"sense", "kind", "expr"}, path, ctx);
                return Objective::of_expr(sense,
                    parse_expr(need(j, "expr", path), path + "/expr", resolve));
            }
            fail("unknown objective kind \"" + kind + "\"", path + "/kind");
        }
    }

    ParseError::ParseError(const std::string & msg, std::string path_in)
        : std::runtime_error(path_in.empty() ? msg : msg + " (at " + path_in + ")"),
          path(std::move(path_in))
    {
    }

    auto write_instance(const Instance & inst) -> std::string
    {
        Namer name = [&](int id) { return inst.variables[id].name; };
        json doc;
        doc["format"] = "xcore-json/1";
        doc["name"] = inst.name;
        if (!inst.metadata.empty())
        {
            json meta = json::object();
            for (const auto & [k, v] : inst.metadata)
                meta[k] = v;
            doc["metadata"] = std::move(meta);
        }
        json vars = json::array();
        for (const auto & v : inst.variables)
            vars.push_back(json{{"name", v.name}, {"domain", domain_json(v.domain)}});
        doc["variables"] = std::move(vars);
        json constraints = json::array();
        for (const auto & pc : inst.constraints)
        {
            json c = constraint_json(pc.constraint, name);
            if (!pc.tag.empty())
                c["tag"] = pc.tag;
            constraints.push_back(std::move(c));
        }
        doc["constraints"] = std::move(constraints);
        if (inst.objective)
            doc["objective"] = objective_json(*inst.objective, name);
        return doc.dump(2) + "\n";
    }

    auto parse_instance(const std::string & text, const ParseOptions & opts) -> ParseResult
    {
        ParseResult result;
        Ctx ctx{opts, &result.warnings};

        json doc;
        try
        {
            doc = json::parse(text);
        }
        catch (const std::exception & e)
        {
            fail(std::string("invalid json: ") + e.what(), "");
        }
        if (!doc.is_object())
            fail("expected a document object", "");
        check_fields(doc, {"format", "name", "metadata", "variables", "constraints", "objective"},
            "", ctx);
        if (as_str(need(doc, "format", ""), "/format") != "xcore-json/1")
            fail("unsupported format (expected \"xcore-json/1\")", "/format");

        InstanceBuilder b(as_str(need(doc, "name", ""), "/name"));
        if (doc.contains("metadata"))
        {
            const auto & meta = doc.at("metadata");
            if (!meta.is_object())
                fail("expected an object", "/metadata");
            for (const auto & [k, v] : meta.items())
                b.set_meta(k, as_str(v, "/metadata/" + k));
        }

        std::map<std::string, int> index;
        const auto & vars = as_array(need(doc, "variables", ""), "/variables");
        for (size_t i = 0; i < vars.size(); ++i)
        {
            std::string vpath = "/variables/" + std::to_string(i);
            if (!vars[i].is_object())
                fail("expected a variable object", vpath);
            check_fields(vars[i], {"name", "domain"}, vpath, ctx);
            auto vname = as_str(need(vars[i], "name", vpath), vpath + "/name");
            if (index.count(vname))
                fail("duplicate variable name \"" + vname + "\"", vpath + "/name");
            auto dom = parse_domain(need(vars[i], "domain", vpath), vpath + "/domain");
            try
            {
                index[vname] = b.add_var(vname, std::move(dom));
            }
            catch (const BuildError & e)
            {
                fail(e.what(), vpath);
            }
        }

        Resolver resolve = [&index](const std::string & vname, const std::string & path) -> int
        {
            auto it = index.find(vname);
            if (it == index.end())
                fail("unknown variable \"" + vname + "\"", path);
            return it->second;
        };

        if (doc.contains("constraints"))
        {
            const auto & cons = as_array(doc.at("constraints"), "/constraints");
            for (size_t i = 0; i < cons.size(); ++i)
            {
                auto pc = parse_constraint(cons[i], "/constraints/" + std::to_string(i),
                    resolve, ctx);
                b.post(std::move(pc.constraint), std::move(pc.tag));
            }
        }

        if (doc.contains("objective"))
            b.set_objective(parse_objective(doc.at("objective"), "/objective", resolve, ctx));

        try
        {
            result.instance = b.build();
        }
        catch (const BuildError & e)
        {
            fail(e.what(), "");
        }
        return result;
    }

    auto write_solution(const Instance & inst, const Assignment & a,
        std::optional<Value> objective) -> std::string
    {
        if (a.size() != inst.variables.size())
            throw BuildError("solution document needs one value per variable");
        json doc;
        doc["format"] = "xcore-solution/1";
        doc["instance"] = inst.name;
        json assign = json::object();
        for (size_t i = 0; i < inst.variables.size(); ++i)
            assign[inst.variables[i].name] = a[i];
        doc["assignment"] = std::move(assign);
        if (objective)
            doc["objective"] = *objective;
        return doc.dump(2) + "\n";
    }

    auto parse_solution(const std::string & text, const ParseOptions & opts) -> SolutionDoc
    {
        std::vector<std::string> warnings;
        Ctx ctx{opts, &warnings};

        json doc;
        try
        {
            doc = json::parse(text);
        }
        catch (const std::exception & e)
        {
            fail(std::string("invalid json: ") + e.what(), "");
        }
        if (!doc.is_object())
            fail("expected a document object", "");
        check_fields(doc, {"format", "instance", "assignment", "objective"}, "", ctx);
        if (as_str(need(doc, "format", ""), "/format") != "xcore-solution/1")
            fail("unsupported format (expected \"xcore-solution/1\")", "/format");

        SolutionDoc out;
        out.instance = as_str(need(doc, "instance", ""), "/instance");
        const auto & assign = need(doc, "assignment", "");
        if (!assign.is_object())
            fail("expected an object", "/assignment");
        for (const auto & [k, v] : assign.items())
            out.assignment[k] = as_value(v, "/assignment/" + k);
        if (doc.contains("objective"))
            out.objective = as_value(doc.at("objective"), "/objective");
        return out;
    }

    auto solution_assignment(const Instance & inst, const SolutionDoc & doc) -> Assignment
    {
        Assignment a(inst.variables.size(), 0);
        std::vector<bool> seen(inst.variables.size(), false);
        for (const auto & [vname, value] : doc.assignment)
        {
            int id = inst.var_index(vname);
            if (id < 0)
                fail("assignment names unknown variable \"" + vname + "\"",
                    "/assignment/" + vname);
            a[id] = value;
            seen[id] = true;
        }
        for (size_t i = 0; i < seen.size(); ++i)
            if (!seen[i])
                fail("assignment is missing variable \"" + inst.variables[i].name + "\"",
                    "/assignment");
        return a;
    }
}
