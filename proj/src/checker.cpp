#include <xcore/checker.hpp>

#include <algorithm>
#include <map>
#include <set>

namespace xcore
{
    namespace
    {
        auto value_of(const ValOrVar & v, const Assignment & a) -> Value
        {
            return v.is_var ? a.at(static_cast<size_t>(v.var())) : v.value;
        }

        auto tuple_matches(const std::vector<Value> & tuple, const std::vector<int> & scope,
            const Assignment & a) -> bool
        {
            for (size_t i = 0; i < scope.size(); ++i)
            {
                if (tuple[i] == STAR)
                    continue;
                if (a.at(static_cast<size_t>(scope[i])) != tuple[i])
                    return false;
            }
            return true;
        }

        auto check_extension(const CExtension & c, const Assignment & a) -> bool
        {
            bool hit = false;
            for (const auto & t : *c.tuples)
                if (tuple_matches(t, c.scope, a))
                {
                    hit = true;
                    break;
                }
            return c.supports == hit;
        }

        auto check_regular(const CRegular & c, const Assignment & a) -> bool
        {
            int state = c.automaton.start;
            for (int v : c.scope)
            {
                Value symbol = a.at(static_cast<size_t>(v));
                bool moved = false;
                for (const auto & t : c.automaton.transitions)
                    if (t.from == state && t.symbol == symbol)
                    {
                        state = t.to;
                        moved = true;
                        break;
                    }
                if (! moved)
                    return false;
            }
            return std::find(c.automaton.finals.begin(), c.automaton.finals.end(), state) !=
                c.automaton.finals.end();
        }

        auto check_mdd(const CMdd & c, const Assignment & a) -> bool
        {
            int node = c.root;
            for (int v : c.scope)
            {
                Value value = a.at(static_cast<size_t>(v));
                bool moved = false;
                for (const auto & t : c.transitions)
                    if (t.from == node && t.value == value)
                    {
                        node = t.to;
                        moved = true;
                        break;
                    }
                if (! moved)
                    return false;
            }
            return node == c.terminal;
        }

        auto check_alldifferent(const CAllDifferent & c, const Assignment & a) -> bool
        {
            for (size_t i = 0; i < c.scope.size(); ++i)
            {
                Value vi = a.at(static_cast<size_t>(c.scope[i]));
                if (c.except && vi == *c.except)
                    continue;
                for (size_t j = i + 1; j < c.scope.size(); ++j)
                    if (vi == a.at(static_cast<size_t>(c.scope[j])))
                        return false;
            }
            return true;
        }

        auto list_values(const std::vector<int> & list, const Assignment & a) -> std::vector<Value>
        {
            std::vector<Value> out;
            for (int v : list)
                out.push_back(a.at(static_cast<size_t>(v)));
            return out;
        }

        auto check_ordered(const COrdered & c, const Assignment & a) -> bool
        {
            for (size_t i = 0; i + 1 < c.scope.size(); ++i)
            {
                Value x = a.at(static_cast<size_t>(c.scope[i]));
                Value y = a.at(static_cast<size_t>(c.scope[i + 1]));
                if (! c.increasing)
                    std::swap(x, y);
                if (c.strict ? ! (x < y) : ! (x <= y))
                    return false;
            }
            return true;
        }

        auto check_lex(const CLex & c, const Assignment & a) -> bool
        {
            for (size_t i = 0; i + 1 < c.lists.size(); ++i)
            {
                auto x = list_values(c.lists[i], a);
                auto y = list_values(c.lists[i + 1], a);
                if (! c.increasing)
                    std::swap(x, y);
                bool lt = std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
                if (c.strict ? ! lt : ! (lt || x == y))
                    return false;
            }
            return true;
        }

        auto check_precedence(const CPrecedence & c, const Assignment & a) -> bool
        {
            // first(values[k]) must exist and precede first(values[k+1])
            // whenever values[k+1] occurs.
            for (size_t k = 0; k + 1 < c.values.size(); ++k)
            {
                int first_u = -1, first_w = -1;
                for (size_t i = 0; i < c.scope.size(); ++i)
                {
                    Value v = a.at(static_cast<size_t>(c.scope[i]));
                    if (first_u < 0 && v == c.values[k])
                        first_u = static_cast<int>(i);
                    if (first_w < 0 && v == c.values[k + 1])
                        first_w = static_cast<int>(i);
                }
                if (first_w >= 0 && (first_u < 0 || first_u > first_w))
                    return false;
            }
            return true;
        }

        auto check_sum(const CSum & c, const Assignment & a) -> bool
        {
            Value s = 0;
            for (size_t i = 0; i < c.scope.size(); ++i)
                s += c.coeffs[i] * a.at(static_cast<size_t>(c.scope[i]));
            return cmp_holds(c.cmp, s, value_of(c.rhs, a));
        }

        auto check_count(const CCount & c, const Assignment & a) -> bool
        {
            Value n = 0;
            for (int v : c.scope)
                if (std::find(c.values.begin(), c.values.end(), a.at(static_cast<size_t>(v))) !=
                    c.values.end())
                    ++n;
            return cmp_holds(c.cmp, n, value_of(c.rhs, a));
        }

        auto check_nvalues(const CNValues & c, const Assignment & a) -> bool
        {
            std::set<Value> distinct;
            for (int v : c.scope)
                distinct.insert(a.at(static_cast<size_t>(v)));
            return cmp_holds(c.cmp, static_cast<Value>(distinct.size()), value_of(c.rhs, a));
        }

        auto check_cardinality(const CCardinality & c, const Assignment & a) -> bool
        {
            for (size_t k = 0; k < c.values.size(); ++k)
            {
                Value n = 0;
                for (int v : c.scope)
                    if (a.at(static_cast<size_t>(v)) == c.values[k])
                        ++n;
                if (n < c.occurs_lo[k] || n > c.occurs_hi[k])
                    return false;
            }
            return true;
        }

        auto check_maximum(const CMaximum & c, const Assignment & a) -> bool
        {
            Value m = a.at(static_cast<size_t>(c.scope.front()));
            for (int v : c.scope)
                m = std::max(m, a.at(static_cast<size_t>(v)));
            return cmp_holds(c.cmp, m, value_of(c.rhs, a));
        }

        auto check_minimum(const CMinimum & c, const Assignment & a) -> bool
        {
            Value m = a.at(static_cast<size_t>(c.scope.front()));
            for (int v : c.scope)
                m = std::min(m, a.at(static_cast<size_t>(v)));
            return cmp_holds(c.cmp, m, value_of(c.rhs, a));
        }

        auto check_element(const CElement & c, const Assignment & a) -> bool
        {
            Value idx = a.at(static_cast<size_t>(c.index));
            if (idx < 0 || idx >= static_cast<Value>(c.list.size()))
                return false;
            return value_of(c.list[static_cast<size_t>(idx)], a) == value_of(c.value, a);
        }

        auto check_channel(const CChannel & c, const Assignment & a) -> bool
        {
            if (c.value)
            {
                // list is 0/1; list[i] == 1 exactly when value == i.
                Value v = a.at(static_cast<size_t>(*c.value));
                if (v < 0 || v >= static_cast<Value>(c.list1.size()))
                    return false;
                for (size_t i = 0; i < c.list1.size(); ++i)
                {
                    Value x = a.at(static_cast<size_t>(c.list1[i]));
                    if (x != (static_cast<Value>(i) == v ? 1 : 0))
                        return false;
                }
                return true;
            }
            if (c.list2.empty())
            {
                // Self-inverse permutation: x[x[i]] == i.
                Value n = static_cast<Value>(c.list1.size());
                for (size_t i = 0; i < c.list1.size(); ++i)
                {
                    Value j = a.at(static_cast<size_t>(c.list1[i]));
                    if (j < 0 || j >= n)
                        return false;
                    if (a.at(static_cast<size_t>(c.list1[static_cast<size_t>(j)])) !=
                        static_cast<Value>(i))
                        return false;
                }
                return true;
            }
            // Dual: biconditional when lengths match, one-directional
            // list2[list1[i]] == i otherwise.
            Value n2 = static_cast<Value>(c.list2.size());
            for (size_t i = 0; i < c.list1.size(); ++i)
            {
                Value j = a.at(static_cast<size_t>(c.list1[i]));
                if (j < 0 || j >= n2)
                    return false;
                if (a.at(static_cast<size_t>(c.list2[static_cast<size_t>(j)])) !=
                    static_cast<Value>(i))
                    return false;
            }
            if (c.list1.size() == c.list2.size())
            {
                Value n1 = static_cast<Value>(c.list1.size());
                for (size_t j = 0; j < c.list2.size(); ++j)
                {
                    Value i = a.at(static_cast<size_t>(c.list2[j]));
                    if (i < 0 || i >= n1)
                        return false;
                    if (a.at(static_cast<size_t>(c.list1[static_cast<size_t>(i)])) !=
                        static_cast<Value>(j))
                        return false;
                }
            }
            return true;
        }

        auto check_nooverlap(const CNoOverlap & c, const Assignment & a) -> bool
        {
            size_t dims = c.items.front().origins.size();
            for (size_t i = 0; i < c.items.size(); ++i)
                for (size_t j = i + 1; j < c.items.size(); ++j)
                {
                    bool separated = false;
                    for (size_t d = 0; d < dims && ! separated; ++d)
                    {
                        Value oi = a.at(static_cast<size_t>(c.items[i].origins[d]));
                        Value oj = a.at(static_cast<size_t>(c.items[j].origins[d]));
                        if (oi + c.items[i].lengths[d] <= oj || oj + c.items[j].lengths[d] <= oi)
                            separated = true;
                    }
                    if (! separated)
                        return false;
                }
            return true;
        }

        auto check_cumulative(const CCumulative & c, const Assignment & a) -> bool
        {
            // Profile peak (0 when nothing runs) compared against the limit.
            Value peak = 0;
            for (size_t i = 0; i < c.origins.size(); ++i)
            {
                if (c.lengths[i] == 0)
                    continue;
                Value start = a.at(static_cast<size_t>(c.origins[i]));
                Value at_start = 0;
                for (size_t j = 0; j < c.origins.size(); ++j)
                {
                    if (c.lengths[j] == 0)
                        continue;
                    Value sj = a.at(static_cast<size_t>(c.origins[j]));
                    if (sj <= start && start < sj + c.lengths[j])
                        at_start += c.heights[j];
                }
                peak = std::max(peak, at_start);
            }
            return cmp_holds(c.cmp, peak, value_of(c.limit, a));
        }

        auto check_binpacking(const CBinPacking & c, const Assignment & a) -> bool
        {
            std::vector<Value> load(static_cast<size_t>(c.bins), 0);
            for (size_t i = 0; i < c.scope.size(); ++i)
            {
                Value b = a.at(static_cast<size_t>(c.scope[i]));
                if (b < 0 || b >= c.bins)
                    return false;
                load[static_cast<size_t>(b)] += c.sizes[i];
            }
            if (c.limit)
            {
                Value lim = value_of(*c.limit, a);
                for (Value l : load)
                    if (l > lim)
                        return false;
                return true;
            }
            for (size_t b = 0; b < load.size(); ++b)
                if (load[b] != value_of(c.loads[b], a))
                    return false;
            return true;
        }

        auto check_knapsack(const CKnapsack & c, const Assignment & a) -> bool
        {
            Value w = 0, p = 0;
            for (size_t i = 0; i < c.scope.size(); ++i)
            {
                Value x = a.at(static_cast<size_t>(c.scope[i]));
                w += c.weights[i] * x;
                p += c.profits[i] * x;
            }
            return w <= value_of(c.weight_limit, a) &&
                cmp_holds(c.profit_cmp, p, value_of(c.profit_rhs, a));
        }

        // Exactly one cycle in the successor graph (self-loops count as
        // cycles) and that cycle covers every non-self-loop node.
        auto check_circuit(const CCircuit & c, const Assignment & a) -> bool
        {
            int n = static_cast<int>(c.scope.size());
            std::vector<int> succ(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i)
            {
                Value v = a.at(static_cast<size_t>(c.scope[static_cast<size_t>(i)]));
                if (v < 0 || v >= n)
                    return false;
                succ[static_cast<size_t>(i)] = static_cast<int>(v);
            }
            // A node lies on a cycle iff following successors n steps from it
            // returns to it at some point >= 1.
            std::vector<bool> on_cycle(static_cast<size_t>(n), false);
            for (int i = 0; i < n; ++i)
            {
                int cur = i;
                for (int step = 0; step < n; ++step)
                {
                    cur = succ[static_cast<size_t>(cur)];
                    if (cur == i)
                    {
                        on_cycle[static_cast<size_t>(i)] = true;
                        break;
                    }
                }
            }
            int cycles = 0;
            std::vector<bool> seen(static_cast<size_t>(n), false);
            for (int i = 0; i < n; ++i)
            {
                if (! on_cycle[static_cast<size_t>(i)] || seen[static_cast<size_t>(i)])
                    continue;
                ++cycles;
                int cur = i;
                while (! seen[static_cast<size_t>(cur)])
                {
                    seen[static_cast<size_t>(cur)] = true;
                    cur = succ[static_cast<size_t>(cur)];
                }
            }
            if (cycles != 1)
                return false;
            for (int i = 0; i < n; ++i)
                if (succ[static_cast<size_t>(i)] != i && ! on_cycle[static_cast<size_t>(i)])
                    return false;
            return true;
        }

        auto check_instantiation(const CInstantiation & c, const Assignment & a) -> bool
        {
            for (size_t i = 0; i < c.scope.size(); ++i)
                if (a.at(static_cast<size_t>(c.scope[i])) != c.values[i])
                    return false;
            return true;
        }
    }

    auto check_constraint(const Constraint & c, const Assignment & a) -> bool
    {
        return std::visit([&](const auto & f) -> bool
        {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, CIntension>)
            {
                try
                {
                    return eval_expr(f.expr, a) != 0;
                }
                catch (const EvalError &)
                {
                    return false;  // undefined means violated
                }
            }
            else if constexpr (std::is_same_v<T, CExtension>) return check_extension(f, a);
            else if constexpr (std::is_same_v<T, CRegular>) return check_regular(f, a);
            else if constexpr (std::is_same_v<T, CMdd>) return check_mdd(f, a);
            else if constexpr (std::is_same_v<T, CAllDifferent>) return check_alldifferent(f, a);
            else if constexpr (std::is_same_v<T, CAllDifferentList>)
            {
                for (size_t i = 0; i < f.lists.size(); ++i)
                    for (size_t j = i + 1; j < f.lists.size(); ++j)
                        if (list_values(f.lists[i], a) == list_values(f.lists[j], a))
                            return false;
                return true;
            }
            else if constexpr (std::is_same_v<T, CAllEqual>)
            {
                for (size_t i = 0; i + 1 < f.scope.size(); ++i)
                    if (a.at(static_cast<size_t>(f.scope[i])) !=
                        a.at(static_cast<size_t>(f.scope[i + 1])))
                        return false;
                return true;
            }
            else if constexpr (std::is_same_v<T, COrdered>) return check_ordered(f, a);
            else if constexpr (std::is_same_v<T, CLex>) return check_lex(f, a);
            else if constexpr (std::is_same_v<T, CPrecedence>) return check_precedence(f, a);
            else if constexpr (std::is_same_v<T, CSum>) return check_sum(f, a);
            else if constexpr (std::is_same_v<T, CCount>) return check_count(f, a);
            else if constexpr (std::is_same_v<T, CNValues>) return check_nvalues(f, a);
            else if constexpr (std::is_same_v<T, CCardinality>) return check_cardinality(f, a);
            else if constexpr (std::is_same_v<T, CMaximum>) return check_maximum(f, a);
            else if constexpr (std::is_same_v<T, CMinimum>) return check_minimum(f, a);
            else if constexpr (std::is_same_v<T, CElement>) return check_element(f, a);
            else if constexpr (std::is_same_v<T, CChannel>) return check_channel(f, a);
            else if constexpr (std::is_same_v<T, CNoOverlap>) return check_nooverlap(f, a);
            else if constexpr (std::is_same_v<T, CCumulative>) return check_cumulative(f, a);
            else if constexpr (std::is_same_v<T, CBinPacking>) return check_binpacking(f, a);
            else if constexpr (std::is_same_v<T, CKnapsack>) return check_knapsack(f, a);
            else if constexpr (std::is_same_v<T, CCircuit>) return check_circuit(f, a);
            else if constexpr (std::is_same_v<T, CInstantiation>) return check_instantiation(f, a);
            else if constexpr (std::is_same_v<T, CSlide>)
            {
                for (const auto & w : slide_windows(f))
                    if (! check_constraint(w, a))
                        return false;
                return true;
            }
            else
                return false;
        }, c.form);
    }

    auto check_instance(const Instance & inst, const Assignment & a) -> Verdict
    {
        if (a.size() != static_cast<size_t>(inst.n_vars()))
            throw BuildError("assignment covers " + std::to_string(a.size()) + " of " +
                std::to_string(inst.n_vars()) + " variables");
        Verdict verdict;
        for (int v = 0; v < inst.n_vars(); ++v)
            if (! inst.variables[static_cast<size_t>(v)].domain.contains(a[static_cast<size_t>(v)]))
                verdict.out_of_domain.push_back(v);
        for (size_t i = 0; i < inst.constraints.size(); ++i)
            if (! check_constraint(inst.constraints[i].constraint, a))
                verdict.violated.push_back(static_cast<int>(i));
        if (inst.objective)
        {
            try
            {
                verdict.objective = objective_value(*inst.objective, a);
            }
            catch (const EvalError &)
            {
                // leave unset; an erroring objective cannot be reported
            }
        }
        verdict.ok = verdict.violated.empty() && verdict.out_of_domain.empty();
        return verdict;
    }

    auto objective_value(const Objective & o, const Assignment & a) -> Value
    {
        return eval_expr(o.as_expr(), a);
    }
}
