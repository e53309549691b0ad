#include <xcore/constraint.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <string>

namespace xcore
{
    auto cmp_holds(Cmp cmp, Value a, Value b) -> bool
    {
        switch (cmp)
        {
        case Cmp::Lt: return a < b;
        case Cmp::Le: return a <= b;
        case Cmp::Eq: return a == b;
        case Cmp::Ne: return a != b;
        case Cmp::Ge: return a >= b;
        case Cmp::Gt: return a > b;
        }
        return false;
    }

    auto cmp_name(Cmp cmp) -> const char *
    {
        switch (cmp)
        {
        case Cmp::Lt: return "lt";
        case Cmp::Le: return "le";
        case Cmp::Eq: return "eq";
        case Cmp::Ne: return "ne";
        case Cmp::Ge: return "ge";
        case Cmp::Gt: return "gt";
        }
        return "?";
    }

    auto form_name(const Constraint & c) -> const char *
    {
        return std::visit([](const auto & f) -> const char *
        {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, CIntension>) return "intension";
            else if constexpr (std::is_same_v<T, CExtension>) return "extension";
            else if constexpr (std::is_same_v<T, CRegular>) return "regular";
            else if constexpr (std::is_same_v<T, CMdd>) return "mdd";
            else if constexpr (std::is_same_v<T, CAllDifferent>) return "allDifferent";
            else if constexpr (std::is_same_v<T, CAllDifferentList>) return "allDifferentList";
            else if constexpr (std::is_same_v<T, CAllEqual>) return "allEqual";
            else if constexpr (std::is_same_v<T, COrdered>) return "ordered";
            else if constexpr (std::is_same_v<T, CLex>) return "lex";
            else if constexpr (std::is_same_v<T, CPrecedence>) return "precedence";
            else if constexpr (std::is_same_v<T, CSum>) return "sum";
            else if constexpr (std::is_same_v<T, CCount>) return "count";
            else if constexpr (std::is_same_v<T, CNValues>) return "nValues";
            else if constexpr (std::is_same_v<T, CCardinality>) return "cardinality";
            else if constexpr (std::is_same_v<T, CMaximum>) return "maximum";
            else if constexpr (std::is_same_v<T, CMinimum>) return "minimum";
            else if constexpr (std::is_same_v<T, CElement>) return "element";
            else if constexpr (std::is_same_v<T, CChannel>) return "channel";
            else if constexpr (std::is_same_v<T, CNoOverlap>) return "noOverlap";
            else if constexpr (std::is_same_v<T, CCumulative>) return "cumulative";
            else if constexpr (std::is_same_v<T, CBinPacking>) return "binPacking";
            else if constexpr (std::is_same_v<T, CKnapsack>) return "knapsack";
            else if constexpr (std::is_same_v<T, CCircuit>) return "circuit";
            else if constexpr (std::is_same_v<T, CInstantiation>) return "instantiation";
            else if constexpr (std::is_same_v<T, CSlide>) return "slide";
            else return "?";
        }, c.form);
    }

    namespace
    {
        auto add_scope(std::vector<int> & out, const std::vector<int> & vars) -> void
        {
            out.insert(out.end(), vars.begin(), vars.end());
        }

        auto add_vov(std::vector<int> & out, const ValOrVar & v) -> void
        {
            if (v.is_var)
                out.push_back(v.var());
        }
    }

    auto constraint_scope(const Constraint & c) -> std::vector<int>
    {
        std::vector<int> out;
        std::visit([&](const auto & f)
        {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, CIntension>)
            {
                out = expr_vars(f.expr);
                return;
            }
            else if constexpr (std::is_same_v<T, CExtension>) add_scope(out, f.scope);
            else if constexpr (std::is_same_v<T, CRegular>) add_scope(out, f.scope);
            else if constexpr (std::is_same_v<T, CMdd>) add_scope(out, f.scope);
            else if constexpr (std::is_same_v<T, CAllDifferent>) add_scope(out, f.scope);
            else if constexpr (std::is_same_v<T, CAllDifferentList>)
            {
                for (const auto & l : f.lists)
                    add_scope(out, l);
            }
            else if constexpr (std::is_same_v<T, CAllEqual>) add_scope(out, f.scope);
            else if constexpr (std::is_same_v<T, COrdered>) add_scope(out, f.scope);
            else if constexpr (std::is_same_v<T, CLex>)
            {
                for (const auto & l : f.lists)
                    add_scope(out, l);
            }
            else if constexpr (std::is_same_v<T, CPrecedence>) add_scope(out, f.scope);
            else if constexpr (std::is_same_v<T, CSum>)
            {
                add_scope(out, f.scope);
                add_vov(out, f.rhs);
            }
            else if constexpr (std::is_same_v<T, CCount>)
            {
                add_scope(out, f.scope);
                add_vov(out, f.rhs);
            }
            else if constexpr (std::is_same_v<T, CNValues>)
            {
                add_scope(out, f.scope);
                add_vov(out, f.rhs);
            }
            else if constexpr (std::is_same_v<T, CCardinality>) add_scope(out, f.scope);
            else if constexpr (std::is_same_v<T, CMaximum>)
            {
                add_scope(out, f.scope);
                add_vov(out, f.rhs);
            }
            else if constexpr (std::is_same_v<T, CMinimum>)
            {
                add_scope(out, f.scope);
                add_vov(out, f.rhs);
            }
            else if constexpr (std::is_same_v<T, CElement>)
            {
                for (const auto & item : f.list)
                    add_vov(out, item);
                out.push_back(f.index);
                add_vov(out, f.value);
            }
            else if constexpr (std::is_same_v<T, CChannel>)
            {
                add_scope(out, f.list1);
                add_scope(out, f.list2);
                if (f.value)
                    out.push_back(*f.value);
            }
            else if constexpr (std::is_same_v<T, CNoOverlap>)
            {
                for (const auto & item : f.items)
                    add_scope(out, item.origins);
            }
            else if constexpr (std::is_same_v<T, CCumulative>)
            {
                add_scope(out, f.origins);
                add_vov(out, f.limit);
            }
            else if constexpr (std::is_same_v<T, CBinPacking>)
            {
                add_scope(out, f.scope);
                if (f.limit)
                    add_vov(out, *f.limit);
                for (const auto & l : f.loads)
                    add_vov(out, l);
            }
            else if constexpr (std::is_same_v<T, CKnapsack>)
            {
                add_scope(out, f.scope);
                add_vov(out, f.weight_limit);
                add_vov(out, f.profit_rhs);
            }
            else if constexpr (std::is_same_v<T, CCircuit>) add_scope(out, f.scope);
            else if constexpr (std::is_same_v<T, CInstantiation>) add_scope(out, f.scope);
            else if constexpr (std::is_same_v<T, CSlide>) add_scope(out, f.scope);
        }, c.form);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    namespace
    {
        auto fail(const std::string & what, const Constraint & c) -> void
        {
            throw BuildError(std::string{form_name(c)} + ": " + what);
        }

        auto check_ids(const std::vector<int> & vars, int n_vars, const char * what,
            const Constraint & c) -> void
        {
            for (int v : vars)
                if (v < 0 || v >= n_vars)
                    fail(std::string{what} + " var id " + std::to_string(v) + " out of range", c);
        }

        auto check_vov(const ValOrVar & v, int n_vars, const char * what, const Constraint & c) -> void
        {
            if (v.is_var && (v.var() < 0 || v.var() >= n_vars))
                fail(std::string{what} + " var id out of range", c);
        }
    }

    auto validate_constraint(const Constraint & c, int n_vars) -> void
    {
        std::visit([&](const auto & f)
        {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, CIntension>)
            {
                if (infer_type(f.expr) != ExprType::Bool)
                    fail("expression is not boolean: " + to_string(f.expr), c);
                check_ids(expr_vars(f.expr), n_vars, "expr", c);
            }
            else if constexpr (std::is_same_v<T, CExtension>)
            {
                if (f.scope.empty())
                    fail("empty scope", c);
                check_ids(f.scope, n_vars, "scope", c);
                if (! f.tuples)
                    fail("missing tuple table", c);
                for (const auto & t : *f.tuples)
                {
                    if (t.size() != f.scope.size())
                        fail("tuple arity mismatch", c);
                    for (Value v : t)
                        if (v == STAR && ! f.starred)
                            fail("starred tuple in a non-starred table", c);
                }
            }
            else if constexpr (std::is_same_v<T, CRegular>)
            {
                if (f.scope.empty())
                    fail("empty scope", c);
                check_ids(f.scope, n_vars, "scope", c);
                std::set<std::pair<int, Value>> seen;
                for (const auto & t : f.automaton.transitions)
                    if (! seen.insert({t.from, t.symbol}).second)
                        fail("nondeterministic automaton: duplicate (state, symbol)", c);
            }
            else if constexpr (std::is_same_v<T, CMdd>)
            {
                if (f.scope.empty())
                    fail("empty scope", c);
                check_ids(f.scope, n_vars, "scope", c);
                // Layered: every node sits at one distance from the root, the
                // terminal at distance == arity, edges go layer k -> k+1.
                std::map<int, int> layer{{f.root, 0}};
                int arity = static_cast<int>(f.scope.size());
                for (int pass = 0; pass < arity; ++pass)
                    for (const auto & t : f.transitions)
                    {
                        auto it = layer.find(t.from);
                        if (it == layer.end())
                            continue;
                        auto [jt, inserted] = layer.insert({t.to, it->second + 1});
                        if (! inserted && jt->second != it->second + 1)
                            fail("not layered: node reachable at two depths", c);
                    }
                std::set<std::pair<int, Value>> seen;
                for (const auto & t : f.transitions)
                {
                    if (! layer.count(t.from))
                        fail("transition from unreachable node", c);
                    if (layer.at(t.from) >= arity)
                        fail("transition beyond terminal layer", c);
                    if (! seen.insert({t.from, t.value}).second)
                        fail("duplicate (node, value) edge", c);
                }
                if (layer.count(f.terminal) && layer.at(f.terminal) != arity)
                    fail("terminal not at final layer", c);
            }
            else if constexpr (std::is_same_v<T, CAllDifferent>)
            {
                check_ids(f.scope, n_vars, "scope", c);
            }
            else if constexpr (std::is_same_v<T, CAllDifferentList>)
            {
                if (f.lists.empty())
                    fail("no lists", c);
                for (const auto & l : f.lists)
                {
                    if (l.size() != f.lists.front().size())
                        fail("lists of unequal length", c);
                    check_ids(l, n_vars, "list", c);
                }
            }
            else if constexpr (std::is_same_v<T, CAllEqual>)
            {
                check_ids(f.scope, n_vars, "scope", c);
            }
            else if constexpr (std::is_same_v<T, COrdered>)
            {
                check_ids(f.scope, n_vars, "scope", c);
            }
            else if constexpr (std::is_same_v<T, CLex>)
            {
                if (f.lists.empty())
                    fail("no lists", c);
                for (const auto & l : f.lists)
                {
                    if (l.size() != f.lists.front().size())
                        fail("lists of unequal length", c);
                    check_ids(l, n_vars, "list", c);
                }
            }
            else if constexpr (std::is_same_v<T, CPrecedence>)
            {
                check_ids(f.scope, n_vars, "scope", c);
                std::set<Value> seen(f.values.begin(), f.values.end());
                if (seen.size() != f.values.size())
                    fail("duplicate value in precedence order", c);
            }
            else if constexpr (std::is_same_v<T, CSum>)
            {
                if (f.coeffs.size() != f.scope.size())
                    fail("coefficient count != scope size", c);
                check_ids(f.scope, n_vars, "scope", c);
                check_vov(f.rhs, n_vars, "rhs", c);
            }
            else if constexpr (std::is_same_v<T, CCount>)
            {
                if (f.values.empty())
                    fail("empty target value set", c);
                check_ids(f.scope, n_vars, "scope", c);
                check_vov(f.rhs, n_vars, "rhs", c);
            }
            else if constexpr (std::is_same_v<T, CNValues>)
            {
                check_ids(f.scope, n_vars, "scope", c);
                check_vov(f.rhs, n_vars, "rhs", c);
            }
            else if constexpr (std::is_same_v<T, CCardinality>)
            {
                if (f.occurs_lo.size() != f.values.size() || f.occurs_hi.size() != f.values.size())
                    fail("occurrence bounds count != value count", c);
                std::set<Value> seen(f.values.begin(), f.values.end());
                if (seen.size() != f.values.size())
                    fail("duplicate value", c);
                for (size_t i = 0; i < f.values.size(); ++i)
                    if (f.occurs_lo[i] > f.occurs_hi[i])
                        fail("empty occurrence range", c);
                check_ids(f.scope, n_vars, "scope", c);
            }
            else if constexpr (std::is_same_v<T, CMaximum> || std::is_same_v<T, CMinimum>)
            {
                if (f.scope.empty())
                    fail("empty scope", c);
                check_ids(f.scope, n_vars, "scope", c);
                check_vov(f.rhs, n_vars, "rhs", c);
            }
            else if constexpr (std::is_same_v<T, CElement>)
            {
                if (f.list.empty())
                    fail("empty list", c);
                for (const auto & item : f.list)
                    check_vov(item, n_vars, "list", c);
                check_ids({f.index}, n_vars, "index", c);
                check_vov(f.value, n_vars, "value", c);
            }
            else if constexpr (std::is_same_v<T, CChannel>)
            {
                check_ids(f.list1, n_vars, "list1", c);
                check_ids(f.list2, n_vars, "list2", c);
                if (f.value)
                {
                    if (! f.list2.empty())
                        fail("value channel takes a single list", c);
                    check_ids({*f.value}, n_vars, "value", c);
                }
                if (! f.list2.empty() && f.list1.size() > f.list2.size())
                    fail("list1 longer than list2", c);
            }
            else if constexpr (std::is_same_v<T, CNoOverlap>)
            {
                if (f.items.empty())
                    fail("no items", c);
                size_t dims = f.items.front().origins.size();
                if (dims == 0)
                    fail("zero dimensions", c);
                for (const auto & item : f.items)
                {
                    if (item.origins.size() != dims || item.lengths.size() != dims)
                        fail("inconsistent dimensionality", c);
                    check_ids(item.origins, n_vars, "origins", c);
                    for (Value l : item.lengths)
                        if (l < 0)
                            fail("negative length", c);
                }
            }
            else if constexpr (std::is_same_v<T, CCumulative>)
            {
                if (f.lengths.size() != f.origins.size() || f.heights.size() != f.origins.size())
                    fail("lengths/heights count != origin count", c);
                for (Value l : f.lengths)
                    if (l < 0)
                        fail("negative length", c);
                for (Value h : f.heights)
                    if (h < 0)
                        fail("negative height", c);
                if (f.cmp != Cmp::Le && f.cmp != Cmp::Lt)
                    fail("profile comparator must be le or lt", c);
                check_ids(f.origins, n_vars, "origins", c);
                check_vov(f.limit, n_vars, "limit", c);
            }
            else if constexpr (std::is_same_v<T, CBinPacking>)
            {
                if (f.sizes.size() != f.scope.size())
                    fail("size count != item count", c);
                if (f.bins <= 0)
                    fail("bin count must be positive", c);
                for (Value s : f.sizes)
                    if (s < 0)
                        fail("negative size", c);
                if (f.limit.has_value() == ! f.loads.empty())
                    fail("exactly one of limit/loads required", c);
                if (! f.loads.empty() && f.loads.size() != static_cast<size_t>(f.bins))
                    fail("load count != bin count", c);
                check_ids(f.scope, n_vars, "scope", c);
                if (f.limit)
                    check_vov(*f.limit, n_vars, "limit", c);
                for (const auto & l : f.loads)
                    check_vov(l, n_vars, "loads", c);
            }
            else if constexpr (std::is_same_v<T, CKnapsack>)
            {
                if (f.weights.size() != f.scope.size() || f.profits.size() != f.scope.size())
                    fail("weights/profits count != scope size", c);
                check_ids(f.scope, n_vars, "scope", c);
                check_vov(f.weight_limit, n_vars, "weight limit", c);
                check_vov(f.profit_rhs, n_vars, "profit rhs", c);
            }
            else if constexpr (std::is_same_v<T, CCircuit>)
            {
                if (f.scope.empty())
                    fail("empty scope", c);
                check_ids(f.scope, n_vars, "scope", c);
            }
            else if constexpr (std::is_same_v<T, CInstantiation>)
            {
                if (f.values.size() != f.scope.size())
                    fail("value count != scope size", c);
                check_ids(f.scope, n_vars, "scope", c);
            }
            else if constexpr (std::is_same_v<T, CSlide>)
            {
                if (! f.window)
                    fail("missing window template", c);
                if (f.window_arity <= 0 || f.window_arity > static_cast<int>(f.scope.size()))
                    fail("bad window arity", c);
                if (f.offset <= 0)
                    fail("offset must be positive", c);
                check_ids(f.scope, n_vars, "scope", c);
                // The template addresses local slots 0..arity-1.
                validate_constraint(*f.window, f.window_arity);
            }
        }, c.form);
    }

    namespace
    {
        auto remap_expr(const Expr & e, const std::vector<int> & map) -> Expr
        {
            Expr out = e;
            if (out.op == ExprOp::VarRef)
                out.var = map.at(static_cast<size_t>(out.var));
            for (auto & k : out.kids)
                k = remap_expr(k, map);
            return out;
        }

        auto remap_vov(const ValOrVar & v, const std::vector<int> & map) -> ValOrVar
        {
            if (! v.is_var)
                return v;
            return ValOrVar::of_var(map.at(static_cast<size_t>(v.var())));
        }

        auto remap_ids(std::vector<int> & vars, const std::vector<int> & map) -> void
        {
            for (int & v : vars)
                v = map.at(static_cast<size_t>(v));
        }

        // Rewrites a constraint over local ids 0..k-1 onto concrete vars.
        auto remap_constraint(const Constraint & c, const std::vector<int> & map) -> Constraint
        {
            Constraint out = c;
            std::visit([&](auto & f)
            {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, CIntension>)
                    f.expr = remap_expr(f.expr, map);
                else if constexpr (std::is_same_v<T, CExtension>) remap_ids(f.scope, map);
                else if constexpr (std::is_same_v<T, CRegular>) remap_ids(f.scope, map);
                else if constexpr (std::is_same_v<T, CMdd>) remap_ids(f.scope, map);
                else if constexpr (std::is_same_v<T, CAllDifferent>) remap_ids(f.scope, map);
                else if constexpr (std::is_same_v<T, CAllDifferentList>)
                {
                    for (auto & l : f.lists)
                        remap_ids(l, map);
                }
                else if constexpr (std::is_same_v<T, CAllEqual>) remap_ids(f.scope, map);
                else if constexpr (std::is_same_v<T, COrdered>) remap_ids(f.scope, map);
                else if constexpr (std::is_same_v<T, CLex>)
                {
                    for (auto & l : f.lists)
                        remap_ids(l, map);
                }
                else if constexpr (std::is_same_v<T, CPrecedence>) remap_ids(f.scope, map);
                else if constexpr (std::is_same_v<T, CSum>)
                {
                    remap_ids(f.scope, map);
                    f.rhs = remap_vov(f.rhs, map);
                }
                else if constexpr (std::is_same_v<T, CCount>)
                {
                    remap_ids(f.scope, map);
                    f.rhs = remap_vov(f.rhs, map);
                }
                else if constexpr (std::is_same_v<T, CNValues>)
                {
                    remap_ids(f.scope, map);
                    f.rhs = remap_vov(f.rhs, map);
                }
                else if constexpr (std::is_same_v<T, CCardinality>) remap_ids(f.scope, map);
                else if constexpr (std::is_same_v<T, CMaximum> || std::is_same_v<T, CMinimum>)
                {
                    remap_ids(f.scope, map);
                    f.rhs = remap_vov(f.rhs, map);
                }
                else if constexpr (std::is_same_v<T, CElement>)
                {
                    for (auto & item : f.list)
                        item = remap_vov(item, map);
                    f.index = map.at(static_cast<size_t>(f.index));
                    f.value = remap_vov(f.value, map);
                }
                else if constexpr (std::is_same_v<T, CChannel>)
                {
                    remap_ids(f.list1, map);
                    remap_ids(f.list2, map);
                    if (f.value)
                        f.value = map.at(static_cast<size_t>(*f.value));
                }
                else if constexpr (std::is_same_v<T, CNoOverlap>)
                {
                    for (auto & item : f.items)
                        remap_ids(item.origins, map);
                }
                else if constexpr (std::is_same_v<T, CCumulative>)
                {
                    remap_ids(f.origins, map);
                    f.limit = remap_vov(f.limit, map);
                }
                else if constexpr (std::is_same_v<T, CBinPacking>)
                {
                    remap_ids(f.scope, map);
                    if (f.limit)
                        f.limit = remap_vov(*f.limit, map);
                    for (auto & l : f.loads)
                        l = remap_vov(l, map);
                }
                else if constexpr (std::is_same_v<T, CKnapsack>)
                {
                    remap_ids(f.scope, map);
                    f.weight_limit = remap_vov(f.weight_limit, map);
                    f.profit_rhs = remap_vov(f.profit_rhs, map);
                }
                else if constexpr (std::is_same_v<T, CCircuit>) remap_ids(f.scope, map);
                else if constexpr (std::is_same_v<T, CInstantiation>) remap_ids(f.scope, map);
                else if constexpr (std::is_same_v<T, CSlide>)
                {
                    remap_ids(f.scope, map);
                }
            }, out.form);
            return out;
        }
    }

    auto alldifferent_list_as_tables(const CAllDifferentList & c,
        const std::vector<Variable> & vars) -> std::vector<Constraint>
    {
        std::vector<Constraint> out;
        size_t len = c.lists.empty() ? 0 : c.lists.front().size();
        for (size_t i = 0; i < c.lists.size(); ++i)
            for (size_t j = i + 1; j < c.lists.size(); ++j)
            {
                // Two lists differ iff they differ at some position: one
                // starred row per (position, value pair with a != b).
                auto tuples = std::make_shared<Tuples>();
                for (size_t p = 0; p < len; ++p)
                {
                    const auto & da = vars.at(static_cast<size_t>(c.lists[i][p])).domain;
                    const auto & db = vars.at(static_cast<size_t>(c.lists[j][p])).domain;
                    for (Value a : da.values())
                        for (Value b : db.values())
                        {
                            if (a == b)
                                continue;
                            std::vector<Value> row(2 * len, STAR);
                            row[p] = a;
                            row[len + p] = b;
                            tuples->push_back(std::move(row));
                        }
                }
                CExtension ext;
                ext.scope = c.lists[i];
                ext.scope.insert(ext.scope.end(), c.lists[j].begin(), c.lists[j].end());
                ext.tuples = std::move(tuples);
                ext.supports = true;
                ext.starred = true;
                out.push_back(Constraint{std::move(ext)});
            }
        return out;
    }

    auto slide_windows(const CSlide & c) -> std::vector<Constraint>
    {
        std::vector<Constraint> out;
        int n = static_cast<int>(c.scope.size());
        for (int start = 0;; start += c.offset)
        {
            if (c.circular ? start >= n : start + c.window_arity > n)
                break;
            std::vector<int> map;
            for (int t = 0; t < c.window_arity; ++t)
                map.push_back(c.scope[static_cast<size_t>((start + t) % n)]);
            out.push_back(remap_constraint(*c.window, map));
        }
        return out;
    }
}
