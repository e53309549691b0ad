#include "oracle.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace oracle
{
    using namespace xcore;

    namespace
    {
        auto val(const ValOrVar & v, const Assignment & a) -> Value
        {
            return v.is_var ? a[static_cast<size_t>(v.var())] : v.value;
        }

        auto at(const Assignment & a, int var) -> Value
        {
            return a[static_cast<size_t>(var)];
        }

        auto holds(Cmp cmp, Value x, Value y) -> bool
        {
            switch (cmp)
            {
                case Cmp::Lt: return x < y;
                case Cmp::Le: return x <= y;
                case Cmp::Eq: return x == y;
                case Cmp::Ne: return x != y;
                case Cmp::Ge: return x >= y;
                case Cmp::Gt: return x > y;
            }
            return false;
        }

        // Floor division from first principles: round the exact quotient down.
        auto naive_floor_div(Value a, Value b) -> Value
        {
            Value q = a / b;
            if (q * b != a && ((a < 0) != (b < 0)))
                --q;
            return q;
        }

        auto word_of(const std::vector<int> & scope, const Assignment & a) -> std::vector<Value>
        {
            std::vector<Value> out;
            for (int v : scope)
                out.push_back(at(a, v));
            return out;
        }

        // All words accepted by the automaton at the given length.
        auto accepted_words(const Automaton & m, size_t length) -> std::set<std::vector<Value>>
        {
            std::set<std::vector<Value>> out;
            std::function<void(int, std::vector<Value> &)> walk =
                [&](int state, std::vector<Value> & prefix)
            {
                if (prefix.size() == length)
                {
                    if (std::count(m.finals.begin(), m.finals.end(), state) > 0)
                        out.insert(prefix);
                    return;
                }
                for (const auto & t : m.transitions)
                    if (t.from == state)
                    {
                        prefix.push_back(t.symbol);
                        walk(t.to, prefix);
                        prefix.pop_back();
                    }
            };
            std::vector<Value> prefix;
            walk(m.start, prefix);
            return out;
        }

        // All root-to-terminal value paths of the MDD.
        auto mdd_paths(const CMdd & c) -> std::set<std::vector<Value>>
        {
            std::set<std::vector<Value>> out;
            size_t arity = c.scope.size();
            std::function<void(int, std::vector<Value> &)> walk =
                [&](int node, std::vector<Value> & prefix)
            {
                if (prefix.size() == arity)
                {
                    if (node == c.terminal)
                        out.insert(prefix);
                    return;
                }
                for (const auto & t : c.transitions)
                    if (t.from == node)
                    {
                        prefix.push_back(t.value);
                        walk(t.to, prefix);
                        prefix.pop_back();
                    }
            };
            std::vector<Value> prefix;
            walk(c.root, prefix);
            return out;
        }

        auto ref_circuit(const CCircuit & c, const Assignment & a) -> bool
        {
            int n = static_cast<int>(c.scope.size());
            std::vector<int> succ;
            for (int v : c.scope)
            {
                Value s = at(a, v);
                if (s < 0 || s >= n)
                    return false;
                succ.push_back(static_cast<int>(s));
            }
            // Decompose the functional graph into its cycles.
            std::vector<int> color(static_cast<size_t>(n), 0);  // 0 new, 1 active, 2 done
            std::vector<std::vector<int>> cycles;
            for (int i = 0; i < n; ++i)
            {
                if (color[static_cast<size_t>(i)] != 0)
                    continue;
                std::vector<int> path;
                int cur = i;
                while (color[static_cast<size_t>(cur)] == 0)
                {
                    color[static_cast<size_t>(cur)] = 1;
                    path.push_back(cur);
                    cur = succ[static_cast<size_t>(cur)];
                }
                if (color[static_cast<size_t>(cur)] == 1)
                {
                    auto it = std::find(path.begin(), path.end(), cur);
                    cycles.emplace_back(it, path.end());
                }
                for (int node : path)
                    color[static_cast<size_t>(node)] = 2;
            }
            if (cycles.size() != 1)
                return false;
            const auto & cycle = cycles.front();
            for (int i = 0; i < n; ++i)
                if (succ[static_cast<size_t>(i)] != i
                    && std::count(cycle.begin(), cycle.end(), i) == 0)
                    return false;
            return true;
        }

        auto ref_channel(const CChannel & c, const Assignment & a) -> bool
        {
            auto x = word_of(c.list1, a);
            Value n1 = static_cast<Value>(x.size());
            if (c.value)
            {
                Value v = at(a, *c.value);
                if (v < 0 || v >= n1)
                    return false;
                for (Value i = 0; i < n1; ++i)
                    if (x[static_cast<size_t>(i)] != (i == v ? 1 : 0))
                        return false;
                return true;
            }
            if (c.list2.empty())
            {
                for (Value i = 0; i < n1; ++i)
                {
                    Value j = x[static_cast<size_t>(i)];
                    if (j < 0 || j >= n1 || x[static_cast<size_t>(j)] != i)
                        return false;
                }
                return true;
            }
            auto y = word_of(c.list2, a);
            Value n2 = static_cast<Value>(y.size());
            for (Value i = 0; i < n1; ++i)
            {
                Value j = x[static_cast<size_t>(i)];
                if (j < 0 || j >= n2 || y[static_cast<size_t>(j)] != i)
                    return false;
            }
            if (n1 == n2)
                for (Value j = 0; j < n2; ++j)
                {
                    Value i = y[static_cast<size_t>(j)];
                    if (i < 0 || i >= n1 || x[static_cast<size_t>(i)] != j)
                        return false;
                }
            return true;
        }

        auto ref_cumulative(const CCumulative & c, const Assignment & a) -> bool
        {
            // Walk the whole profile span one time point at a time.
            Value peak = 0;
            Value lo = 0, hi = 0;
            bool any = false;
            for (size_t i = 0; i < c.origins.size(); ++i)
            {
                if (c.lengths[i] == 0)
                    continue;
                Value s = at(a, c.origins[i]);
                lo = any ? std::min(lo, s) : s;
                hi = any ? std::max(hi, s + c.lengths[i]) : s + c.lengths[i];
                any = true;
            }
            for (Value t = lo; any && t < hi; ++t)
            {
                Value load = 0;
                for (size_t i = 0; i < c.origins.size(); ++i)
                {
                    Value s = at(a, c.origins[i]);
                    if (s <= t && t < s + c.lengths[i])
                        load += c.heights[i];
                }
                peak = std::max(peak, load);
            }
            return holds(c.cmp, peak, val(c.limit, a));
        }

        // Window start offsets of a slide over n variables.
        auto slide_starts(const CSlide & c, int n) -> std::vector<int>
        {
            std::vector<int> out;
            for (int start = 0; c.circular ? start < n : start + c.window_arity <= n;
                start += c.offset)
                out.push_back(start);
            return out;
        }
    }

    auto naive_eval(const Expr & e, const Assignment & a) -> std::optional<Value>
    {
        using E = std::optional<Value>;
        auto kid = [&](size_t i) { return naive_eval(e.kids[i], a); };
        switch (e.op)
        {
            case ExprOp::Const: return e.value;
            case ExprOp::VarRef: return at(a, e.var);
            case ExprOp::Add:
            {
                Value s = 0;
                for (const auto & k : e.kids)
                {
                    E v = naive_eval(k, a);
                    if (!v)
                        return std::nullopt;
                    s += *v;
                }
                return s;
            }
            case ExprOp::Sub:
            {
                E x = kid(0), y = kid(1);
                return x && y ? E(*x - *y) : std::nullopt;
            }
            case ExprOp::Mul:
            {
                Value s = 1;
                for (const auto & k : e.kids)
                {
                    E v = naive_eval(k, a);
                    if (!v)
                        return std::nullopt;
                    s *= *v;
                }
                return s;
            }
            case ExprOp::FloorDiv:
            {
                E x = kid(0), y = kid(1);
                if (!x || !y || *y == 0)
                    return std::nullopt;
                return naive_floor_div(*x, *y);
            }
            case ExprOp::Mod:
            {
                E x = kid(0), y = kid(1);
                if (!x || !y || *y == 0)
                    return std::nullopt;
                return *x - naive_floor_div(*x, *y) * *y;
            }
            case ExprOp::Abs:
            {
                E x = kid(0);
                return x ? E(*x < 0 ? -*x : *x) : std::nullopt;
            }
            case ExprOp::Dist:
            {
                E x = kid(0), y = kid(1);
                if (!x || !y)
                    return std::nullopt;
                Value d = *x - *y;
                return d < 0 ? -d : d;
            }
            case ExprOp::Min:
            case ExprOp::Max:
            {
                E best;
                for (const auto & k : e.kids)
                {
                    E v = naive_eval(k, a);
                    if (!v)
                        return std::nullopt;
                    if (!best || (e.op == ExprOp::Min ? *v < *best : *v > *best))
                        best = v;
                }
                return best;
            }
            case ExprOp::Lt: case ExprOp::Le: case ExprOp::Eq:
            case ExprOp::Ne: case ExprOp::Ge: case ExprOp::Gt:
            {
                E x = kid(0), y = kid(1);
                if (!x || !y)
                    return std::nullopt;
                Cmp cmp = e.op == ExprOp::Lt ? Cmp::Lt : e.op == ExprOp::Le ? Cmp::Le
                    : e.op == ExprOp::Eq ? Cmp::Eq : e.op == ExprOp::Ne ? Cmp::Ne
                    : e.op == ExprOp::Ge ? Cmp::Ge : Cmp::Gt;
                return holds(cmp, *x, *y) ? 1 : 0;
            }
            case ExprOp::And:
            case ExprOp::Or:
            {
                // Lazy: stop at the deciding kid.
                bool want = e.op == ExprOp::Or;
                for (const auto & k : e.kids)
                {
                    E v = naive_eval(k, a);
                    if (!v)
                        return std::nullopt;
                    if ((*v != 0) == want)
                        return want ? 1 : 0;
                }
                return want ? 0 : 1;
            }
            case ExprOp::Not:
            {
                E x = kid(0);
                return x ? E(*x == 0 ? 1 : 0) : std::nullopt;
            }
            case ExprOp::Iff:
            {
                E x = kid(0), y = kid(1);
                if (!x || !y)
                    return std::nullopt;
                return (*x != 0) == (*y != 0) ? 1 : 0;
            }
            case ExprOp::Imp:
            {
                E x = kid(0);
                if (!x)
                    return std::nullopt;
                if (*x == 0)
                    return 1;
                E y = kid(1);
                return y ? E(*y != 0 ? 1 : 0) : std::nullopt;
            }
            case ExprOp::Ift:
            {
                E cond = kid(0);
                if (!cond)
                    return std::nullopt;
                return *cond != 0 ? kid(1) : kid(2);
            }
            case ExprOp::InSet:
            {
                E x = kid(0);
                if (!x)
                    return std::nullopt;
                return std::count(e.set_values.begin(), e.set_values.end(), *x) > 0 ? 1 : 0;
            }
        }
        return std::nullopt;
    }

    auto reference_check(const Constraint & c, const Assignment & a) -> bool
    {
        return std::visit([&](const auto & f) -> bool
        {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, CIntension>)
            {
                auto v = naive_eval(f.expr, a);
                return v.has_value() && *v != 0;
            }
            else if constexpr (std::is_same_v<T, CExtension>)
            {
                bool matched = false;
                for (const auto & t : *f.tuples)
                {
                    bool fits = true;
                    for (size_t i = 0; i < f.scope.size() && fits; ++i)
                        fits = t[i] == STAR || t[i] == at(a, f.scope[i]);
                    if (fits)
                    {
                        matched = true;
                        break;
                    }
                }
                return f.supports ? matched : !matched;
            }
            else if constexpr (std::is_same_v<T, CRegular>)
            {
                auto words = accepted_words(f.automaton, f.scope.size());
                return words.count(word_of(f.scope, a)) > 0;
            }
            else if constexpr (std::is_same_v<T, CMdd>)
            {
                return mdd_paths(f).count(word_of(f.scope, a)) > 0;
            }
            else if constexpr (std::is_same_v<T, CAllDifferent>)
            {
                auto w = word_of(f.scope, a);
                if (f.except)
                    w.erase(std::remove(w.begin(), w.end(), *f.except), w.end());
                std::set<Value> distinct(w.begin(), w.end());
                return distinct.size() == w.size();
            }
            else if constexpr (std::is_same_v<T, CAllDifferentList>)
            {
                std::set<std::vector<Value>> seen;
                for (const auto & l : f.lists)
                    if (!seen.insert(word_of(l, a)).second)
                        return false;
                return true;
            }
            else if constexpr (std::is_same_v<T, CAllEqual>)
            {
                auto w = word_of(f.scope, a);
                return std::set<Value>(w.begin(), w.end()).size() <= 1;
            }
            else if constexpr (std::is_same_v<T, COrdered>)
            {
                auto w = word_of(f.scope, a);
                if (!f.increasing)
                    std::reverse(w.begin(), w.end());
                for (size_t i = 0; i + 1 < w.size(); ++i)
                    if (f.strict ? w[i] >= w[i + 1] : w[i] > w[i + 1])
                        return false;
                return true;
            }
            else if constexpr (std::is_same_v<T, CLex>)
            {
                for (size_t i = 0; i + 1 < f.lists.size(); ++i)
                {
                    auto x = word_of(f.lists[i], a);
                    auto y = word_of(f.lists[i + 1], a);
                    if (!f.increasing)
                        std::swap(x, y);
                    // first difference decides; equal words need !strict
                    size_t k = 0;
                    while (k < x.size() && x[k] == y[k])
                        ++k;
                    if (k == x.size() ? f.strict : x[k] > y[k])
                        return false;
                }
                return true;
            }
            else if constexpr (std::is_same_v<T, CPrecedence>)
            {
                auto w = word_of(f.scope, a);
                auto first = [&](Value v) -> int
                {
                    for (size_t i = 0; i < w.size(); ++i)
                        if (w[i] == v)
                            return static_cast<int>(i);
                    return -1;
                };
                for (size_t k = 0; k + 1 < f.values.size(); ++k)
                {
                    int u = first(f.values[k]), v = first(f.values[k + 1]);
                    if (v >= 0 && (u < 0 || u > v))
                        return false;
                }
                return true;
            }
            else if constexpr (std::is_same_v<T, CSum>)
            {
                Value s = 0;
                for (size_t i = 0; i < f.scope.size(); ++i)
                    s += f.coeffs[i] * at(a, f.scope[i]);
                return holds(f.cmp, s, val(f.rhs, a));
            }
            else if constexpr (std::is_same_v<T, CCount>)
            {
                Value n = 0;
                for (int v : f.scope)
                    n += std::count(f.values.begin(), f.values.end(), at(a, v)) > 0 ? 1 : 0;
                return holds(f.cmp, n, val(f.rhs, a));
            }
            else if constexpr (std::is_same_v<T, CNValues>)
            {
                auto w = word_of(f.scope, a);
                std::set<Value> distinct(w.begin(), w.end());
                return holds(f.cmp, static_cast<Value>(distinct.size()), val(f.rhs, a));
            }
            else if constexpr (std::is_same_v<T, CCardinality>)
            {
                auto w = word_of(f.scope, a);
                for (size_t k = 0; k < f.values.size(); ++k)
                {
                    Value n = std::count(w.begin(), w.end(), f.values[k]);
                    if (n < f.occurs_lo[k] || n > f.occurs_hi[k])
                        return false;
                }
                return true;
            }
            else if constexpr (std::is_same_v<T, CMaximum>)
            {
                auto w = word_of(f.scope, a);
                return holds(f.cmp, *std::max_element(w.begin(), w.end()), val(f.rhs, a));
            }
            else if constexpr (std::is_same_v<T, CMinimum>)
            {
                auto w = word_of(f.scope, a);
                return holds(f.cmp, *std::min_element(w.begin(), w.end()), val(f.rhs, a));
            }
            else if constexpr (std::is_same_v<T, CElement>)
            {
                Value idx = at(a, f.index);
                if (idx < 0 || idx >= static_cast<Value>(f.list.size()))
                    return false;
                return val(f.list[static_cast<size_t>(idx)], a) == val(f.value, a);
            }
            else if constexpr (std::is_same_v<T, CChannel>)
            {
                return ref_channel(f, a);
            }
            else if constexpr (std::is_same_v<T, CNoOverlap>)
            {
                // each pair needs a dimension where one box fully precedes
                // the other; zero-length boxes are points that still may not
                // sit strictly inside another box
                for (size_t i = 0; i < f.items.size(); ++i)
                    for (size_t j = i + 1; j < f.items.size(); ++j)
                    {
                        int separations = 0;
                        for (size_t d = 0; d < f.items[i].origins.size(); ++d)
                        {
                            Value oi = at(a, f.items[i].origins[d]);
                            Value oj = at(a, f.items[j].origins[d]);
                            if (oi + f.items[i].lengths[d] <= oj
                                || oj + f.items[j].lengths[d] <= oi)
                                ++separations;
                        }
                        if (separations == 0)
                            return false;
                    }
                return true;
            }
            else if constexpr (std::is_same_v<T, CCumulative>)
            {
                return ref_cumulative(f, a);
            }
            else if constexpr (std::is_same_v<T, CBinPacking>)
            {
                std::map<Value, Value> load;
                for (size_t i = 0; i < f.scope.size(); ++i)
                {
                    Value b = at(a, f.scope[i]);
                    if (b < 0 || b >= f.bins)
                        return false;
                    load[b] += f.sizes[i];
                }
                for (Value b = 0; b < f.bins; ++b)
                {
                    Value l = load.count(b) ? load[b] : 0;
                    if (f.limit ? l > val(*f.limit, a)
                        : l != val(f.loads[static_cast<size_t>(b)], a))
                        return false;
                }
                return true;
            }
            else if constexpr (std::is_same_v<T, CKnapsack>)
            {
                Value w = 0, p = 0;
                for (size_t i = 0; i < f.scope.size(); ++i)
                {
                    w += f.weights[i] * at(a, f.scope[i]);
                    p += f.profits[i] * at(a, f.scope[i]);
                }
                return w <= val(f.weight_limit, a) && holds(f.profit_cmp, p, val(f.profit_rhs, a));
            }
            else if constexpr (std::is_same_v<T, CCircuit>)
            {
                return ref_circuit(f, a);
            }
            else if constexpr (std::is_same_v<T, CInstantiation>)
            {
                return word_of(f.scope, a) == f.values;
            }
            else if constexpr (std::is_same_v<T, CSlide>)
            {
                int n = static_cast<int>(f.scope.size());
                for (int start : slide_starts(f, n))
                {
                    // score the window template against the remapped slice
                    Assignment local(static_cast<size_t>(f.window_arity));
                    for (int t = 0; t < f.window_arity; ++t)
                        local[static_cast<size_t>(t)] =
                            at(a, f.scope[static_cast<size_t>((start + t) % n)]);
                    if (!reference_check(*f.window, local))
                        return false;
                }
                return true;
            }
            else
            {
                return false;
            }
        }, c.form);
    }

    auto for_each_assignment(const std::vector<Variable> & vars,
        const std::function<void(const Assignment &)> & fn) -> void
    {
        Assignment a(vars.size());
        std::function<void(size_t)> spin = [&](size_t i)
        {
            if (i == vars.size())
            {
                fn(a);
                return;
            }
            for (Value v : vars[i].domain.values())
            {
                a[i] = v;
                spin(i + 1);
            }
        };
        spin(0);
    }

    namespace
    {
        auto satisfies_all(const Instance & inst, const Assignment & a) -> bool
        {
            for (const auto & pc : inst.constraints)
                if (!reference_check(pc.constraint, a))
                    return false;
            return true;
        }

        auto naive_objective(const Objective & o, const Assignment & a) -> std::optional<Value>
        {
            switch (o.kind)
            {
                case ObjectiveKind::Var:
                    return at(a, o.var);
                case ObjectiveKind::Sum:
                {
                    Value s = 0;
                    for (size_t i = 0; i < o.scope.size(); ++i)
                        s += o.coeffs[i] * at(a, o.scope[i]);
                    return s;
                }
                case ObjectiveKind::Max:
                case ObjectiveKind::Min:
                {
                    std::optional<Value> best;
                    for (const auto & e : o.exprs)
                    {
                        auto v = naive_eval(e, a);
                        if (!v)
                            return std::nullopt;
                        if (!best || (o.kind == ObjectiveKind::Max ? *v > *best : *v < *best))
                            best = v;
                    }
                    return best;
                }
                case ObjectiveKind::Expr:
                    return naive_eval(*o.expr, a);
            }
            return std::nullopt;
        }
    }

    auto brute_solutions(const Instance & inst) -> std::vector<Assignment>
    {
        std::vector<Assignment> out;
        for_each_assignment(inst.variables, [&](const Assignment & a)
        {
            if (satisfies_all(inst, a))
                out.push_back(a);
        });
        return out;
    }

    auto brute_decide(const Instance & inst) -> bool
    {
        bool found = false;
        for_each_assignment(inst.variables, [&](const Assignment & a)
        {
            found = found || satisfies_all(inst, a);
        });
        return found;
    }

    auto brute_optimum(const Instance & inst) -> std::optional<Value>
    {
        std::optional<Value> best;
        bool minimize = inst.objective->sense == Sense::Minimize;
        for_each_assignment(inst.variables, [&](const Assignment & a)
        {
            if (!satisfies_all(inst, a))
                return;
            auto v = naive_objective(*inst.objective, a);
            if (!v)
                return;
            if (!best || (minimize ? *v < *best : *v > *best))
                best = v;
        });
        return best;
    }

    // ---- random cases ------------------------------------------------------

    namespace
    {
        auto pick(std::mt19937_64 & rng, int lo, int hi) -> int
        {
            return static_cast<int>(lo + rng() % static_cast<unsigned long long>(hi - lo + 1));
        }

        auto coin(std::mt19937_64 & rng) -> bool
        {
            return (rng() & 1) != 0;
        }

        auto random_domain(std::mt19937_64 & rng) -> Domain
        {
            std::set<Value> values;
            int size = pick(rng, 1, 4);
            while (static_cast<int>(values.size()) < size)
                values.insert(pick(rng, -3, 5));
            return Domain(std::vector<Value>(values.begin(), values.end()));
        }

        auto random_vars(std::mt19937_64 & rng, int count) -> std::vector<Variable>
        {
            std::vector<Variable> out;
            for (int i = 0; i < count; ++i)
                out.push_back({"v" + std::to_string(i), random_domain(rng)});
            return out;
        }

        auto random_cmp(std::mt19937_64 & rng) -> Cmp
        {
            Cmp all[] = {Cmp::Lt, Cmp::Le, Cmp::Eq, Cmp::Ne, Cmp::Ge, Cmp::Gt};
            return all[pick(rng, 0, 5)];
        }

        auto random_vov(std::mt19937_64 & rng, int n_vars, int lo, int hi) -> ValOrVar
        {
            if (coin(rng))
                return ValOrVar::of_var(pick(rng, 0, n_vars - 1));
            return ValOrVar::of_value(pick(rng, lo, hi));
        }

        // Random integer expression over vars 0..n-1, depth-bounded. Division
        // and modulo are generated freely, so undefined cases appear.
        auto random_int_expr(std::mt19937_64 & rng, int n_vars, int depth) -> Expr;

        auto random_bool_expr(std::mt19937_64 & rng, int n_vars, int depth) -> Expr
        {
            if (depth <= 0 || pick(rng, 0, 3) == 0)
            {
                Expr x = random_int_expr(rng, n_vars, 0);
                Expr y = random_int_expr(rng, n_vars, 0);
                switch (pick(rng, 0, 5))
                {
                    case 0: return ex_lt(x, y);
                    case 1: return ex_le(x, y);
                    case 2: return ex_eq(x, y);
                    case 3: return ex_ne(x, y);
                    case 4: return ex_ge(x, y);
                    default: return ex_gt(x, y);
                }
            }
            switch (pick(rng, 0, 5))
            {
                case 0: return ex_and({random_bool_expr(rng, n_vars, depth - 1),
                    random_bool_expr(rng, n_vars, depth - 1)});
                case 1: return ex_or({random_bool_expr(rng, n_vars, depth - 1),
                    random_bool_expr(rng, n_vars, depth - 1)});
                case 2: return ex_not(random_bool_expr(rng, n_vars, depth - 1));
                case 3: return ex_iff(random_bool_expr(rng, n_vars, depth - 1),
                    random_bool_expr(rng, n_vars, depth - 1));
                case 4: return ex_imp(random_bool_expr(rng, n_vars, depth - 1),
                    random_bool_expr(rng, n_vars, depth - 1));
                default: return ex_in(random_int_expr(rng, n_vars, depth - 1),
                    {static_cast<Value>(pick(rng, -2, 2)), static_cast<Value>(pick(rng, -2, 2))});
            }
        }

        auto random_int_expr(std::mt19937_64 & rng, int n_vars, int depth) -> Expr
        {
            if (depth <= 0)
                return coin(rng) ? ex_var(pick(rng, 0, n_vars - 1))
                    : ex_lit(pick(rng, -3, 3));
            switch (pick(rng, 0, 8))
            {
                case 0: return random_int_expr(rng, n_vars, depth - 1)
                    + random_int_expr(rng, n_vars, depth - 1);
                case 1: return random_int_expr(rng, n_vars, depth - 1)
                    - random_int_expr(rng, n_vars, depth - 1);
                case 2: return random_int_expr(rng, n_vars, depth - 1)
                    * random_int_expr(rng, n_vars, depth - 1);
                case 3: return ex_div(random_int_expr(rng, n_vars, depth - 1),
                    random_int_expr(rng, n_vars, depth - 1));
                case 4: return ex_mod(random_int_expr(rng, n_vars, depth - 1),
                    random_int_expr(rng, n_vars, depth - 1));
                case 5: return ex_abs(random_int_expr(rng, n_vars, depth - 1));
                case 6: return ex_dist(random_int_expr(rng, n_vars, depth - 1),
                    random_int_expr(rng, n_vars, depth - 1));
                case 7: return ex_ift(random_bool_expr(rng, n_vars, depth - 1),
                    random_int_expr(rng, n_vars, depth - 1),
                    random_int_expr(rng, n_vars, depth - 1));
                default: return coin(rng)
                    ? ex_min({random_int_expr(rng, n_vars, depth - 1),
                        random_int_expr(rng, n_vars, depth - 1)})
                    : ex_max({random_int_expr(rng, n_vars, depth - 1),
                        random_int_expr(rng, n_vars, depth - 1)});
            }
        }

        auto scope_of(int n) -> std::vector<int>
        {
            std::vector<int> out;
            for (int i = 0; i < n; ++i)
                out.push_back(i);
            return out;
        }

        auto random_values(std::mt19937_64 & rng, int count, int lo, int hi) -> std::vector<Value>
        {
            std::vector<Value> out;
            for (int i = 0; i < count; ++i)
                out.push_back(pick(rng, lo, hi));
            return out;
        }

        auto distinct_values(std::mt19937_64 & rng, int count, int lo, int hi) -> std::vector<Value>
        {
            std::set<Value> seen;
            while (static_cast<int>(seen.size()) < count)
                seen.insert(pick(rng, lo, hi));
            return {seen.begin(), seen.end()};
        }
    }

    auto case_forms() -> const std::vector<std::string> &
    {
        static const std::vector<std::string> forms =
        {
            "intension", "extension", "regular", "mdd",
            "allDifferent", "allDifferentList", "allEqual",
            "ordered", "lex", "precedence",
            "sum", "count", "nValues", "cardinality",
            "maximum", "minimum", "element", "channel",
            "noOverlap", "cumulative", "binPacking", "knapsack",
            "circuit", "instantiation", "slide",
        };
        return forms;
    }

    auto random_case(const std::string & form, std::mt19937_64 & rng) -> RandomCase
    {
        RandomCase rc;
        auto make = [&](int n_vars, ConstraintForm f)
        {
            rc.constraint = Constraint{std::move(f)};
            validate_constraint(rc.constraint, n_vars);
        };

        if (form == "intension")
        {
            int n = pick(rng, 1, 4);
            rc.vars = random_vars(rng, n);
            make(n, CIntension{random_bool_expr(rng, n, 2)});
        }
        else if (form == "extension")
        {
            int n = pick(rng, 1, 3);
            rc.vars = random_vars(rng, n);
            bool starred = coin(rng);
            Tuples tuples;
            int rows = pick(rng, 0, 6);
            for (int r = 0; r < rows; ++r)
            {
                std::vector<Value> row;
                for (int i = 0; i < n; ++i)
                {
                    if (starred && pick(rng, 0, 3) == 0)
                        row.push_back(STAR);
                    else if (coin(rng))
                        row.push_back(rc.vars[static_cast<size_t>(i)].domain.at(
                            static_cast<size_t>(pick(rng, 0,
                                static_cast<int>(rc.vars[static_cast<size_t>(i)].domain.size()) - 1))));
                    else
                        row.push_back(pick(rng, -3, 5));
                }
                tuples.push_back(std::move(row));
            }
            make(n, CExtension{scope_of(n), std::make_shared<const Tuples>(std::move(tuples)),
                coin(rng), starred});
        }
        else if (form == "regular")
        {
            int n = pick(rng, 1, 4);
            rc.vars = random_vars(rng, n);
            Automaton m;
            int states = pick(rng, 1, 3);
            m.start = 0;
            for (int s = 0; s < states; ++s)
                if (coin(rng))
                    m.finals.push_back(s);
            std::set<Value> symbols;
            for (const auto & v : rc.vars)
                for (Value x : v.domain.values())
                    symbols.insert(x);
            for (int s = 0; s < states; ++s)
                for (Value x : symbols)
                    if (pick(rng, 0, 2) != 0)
                        m.transitions.push_back({s, x, pick(rng, 0, states - 1)});
            make(n, CRegular{scope_of(n), std::move(m)});
        }
        else if (form == "mdd")
        {
            int n = pick(rng, 1, 3);
            rc.vars = random_vars(rng, n);
            CMdd c;
            c.scope = scope_of(n);
            // nodes are numbered per layer: layer k holds ids k*3..k*3+widths[k)-1
            std::vector<int> widths{1};
            for (int k = 1; k < n; ++k)
                widths.push_back(pick(rng, 1, 2));
            widths.push_back(1);
            c.root = 0;
            c.terminal = n * 3;
            for (int k = 0; k < n; ++k)
                for (int from = 0; from < widths[static_cast<size_t>(k)]; ++from)
                    for (Value x : rc.vars[static_cast<size_t>(k)].domain.values())
                        if (pick(rng, 0, 2) != 0)
                            c.transitions.push_back({k * 3 + from, x,
                                (k + 1) * 3 + pick(rng, 0, widths[static_cast<size_t>(k + 1)] - 1)});
            // drop edges from nodes the root cannot reach; validation rejects them
            std::set<int> reachable{c.root};
            for (int k = 0; k < n; ++k)
                for (const auto & t : c.transitions)
                    if (t.from / 3 == k && reachable.count(t.from))
                        reachable.insert(t.to);
            std::vector<MddTransition> kept;
            for (const auto & t : c.transitions)
                if (reachable.count(t.from))
                    kept.push_back(t);
            c.transitions = std::move(kept);
            make(n, std::move(c));
        }
        else if (form == "allDifferent")
        {
            int n = pick(rng, 1, 4);
            rc.vars = random_vars(rng, n);
            CAllDifferent c{scope_of(n), {}};
            if (coin(rng))
                c.except = pick(rng, -1, 2);
            make(n, std::move(c));
        }
        else if (form == "allDifferentList")
        {
            int len = pick(rng, 1, 2);
            int lists = pick(rng, 2, 4 / len);
            int n = len * lists;
            rc.vars = random_vars(rng, n);
            CAllDifferentList c;
            for (int l = 0; l < lists; ++l)
            {
                std::vector<int> list;
                for (int i = 0; i < len; ++i)
                    list.push_back(l * len + i);
                c.lists.push_back(std::move(list));
            }
            make(n, std::move(c));
        }
        else if (form == "allEqual")
        {
            int n = pick(rng, 1, 4);
            rc.vars = random_vars(rng, n);
            make(n, CAllEqual{scope_of(n)});
        }
        else if (form == "ordered")
        {
            int n = pick(rng, 1, 4);
            rc.vars = random_vars(rng, n);
            make(n, COrdered{scope_of(n), coin(rng), coin(rng)});
        }
        else if (form == "lex")
        {
            int len = pick(rng, 1, 2);
            int lists = pick(rng, 2, 4 / len);
            int n = len * lists;
            rc.vars = random_vars(rng, n);
            CLex c;
            for (int l = 0; l < lists; ++l)
            {
                std::vector<int> list;
                for (int i = 0; i < len; ++i)
                    list.push_back(l * len + i);
                c.lists.push_back(std::move(list));
            }
            c.increasing = coin(rng);
            c.strict = coin(rng);
            make(n, std::move(c));
        }
        else if (form == "precedence")
        {
            int n = pick(rng, 2, 4);
            rc.vars = random_vars(rng, n);
            make(n, CPrecedence{scope_of(n), distinct_values(rng, pick(rng, 2, 3), -2, 4)});
        }
        else if (form == "sum")
        {
            int n = pick(rng, 1, 4);
            rc.vars = random_vars(rng, n);
            make(n, CSum{scope_of(n), random_values(rng, n, -2, 2), random_cmp(rng),
                random_vov(rng, n, -6, 10)});
        }
        else if (form == "count")
        {
            int n = pick(rng, 1, 4);
            rc.vars = random_vars(rng, n);
            make(n, CCount{scope_of(n), distinct_values(rng, pick(rng, 1, 2), -2, 4),
                random_cmp(rng), random_vov(rng, n, 0, n)});
        }
        else if (form == "nValues")
        {
            int n = pick(rng, 1, 4);
            rc.vars = random_vars(rng, n);
            make(n, CNValues{scope_of(n), random_cmp(rng), random_vov(rng, n, 0, n)});
        }
        else if (form == "cardinality")
        {
            int n = pick(rng, 1, 4);
            rc.vars = random_vars(rng, n);
            auto values = distinct_values(rng, pick(rng, 1, 3), -2, 4);
            std::vector<Value> lo, hi;
            for (size_t k = 0; k < values.size(); ++k)
            {
                Value l = pick(rng, 0, 2);
                lo.push_back(l);
                hi.push_back(l + pick(rng, 0, 2));
            }
            make(n, CCardinality{scope_of(n), std::move(values), std::move(lo), std::move(hi)});
        }
        else if (form == "maximum")
        {
            int n = pick(rng, 1, 4);
            rc.vars = random_vars(rng, n);
            make(n, CMaximum{scope_of(n), random_cmp(rng), random_vov(rng, n, -3, 5)});
        }
        else if (form == "minimum")
        {
            int n = pick(rng, 1, 4);
            rc.vars = random_vars(rng, n);
            make(n, CMinimum{scope_of(n), random_cmp(rng), random_vov(rng, n, -3, 5)});
        }
        else if (form == "element")
        {
            int n = pick(rng, 2, 4);
            rc.vars = random_vars(rng, n);
            CElement c;
            int len = pick(rng, 1, 4);
            for (int i = 0; i < len; ++i)
                c.list.push_back(random_vov(rng, n, -2, 4));
            c.index = pick(rng, 0, n - 1);
            c.value = random_vov(rng, n, -2, 4);
            make(n, std::move(c));
        }
        else if (form == "channel")
        {
            int shape = pick(rng, 0, 3);
            if (shape == 0)
            {
                // self-inverse
                int n = pick(rng, 1, 4);
                rc.vars = random_vars(rng, n);
                make(n, CChannel{scope_of(n), {}, {}});
            }
            else if (shape == 1)
            {
                // dual, equal lengths
                int half = pick(rng, 1, 2);
                int n = 2 * half;
                rc.vars = random_vars(rng, n);
                std::vector<int> l1, l2;
                for (int i = 0; i < half; ++i)
                {
                    l1.push_back(i);
                    l2.push_back(half + i);
                }
                make(n, CChannel{std::move(l1), std::move(l2), {}});
            }
            else if (shape == 2)
            {
                // dual, list1 shorter
                int n = pick(rng, 3, 4);
                rc.vars = random_vars(rng, n);
                std::vector<int> l1{0}, l2;
                for (int i = 1; i < n; ++i)
                    l2.push_back(i);
                make(n, CChannel{std::move(l1), std::move(l2), {}});
            }
            else
            {
                // 0/1 list + value
                int n = pick(rng, 2, 4);
                rc.vars = random_vars(rng, n);
                std::vector<int> l1;
                for (int i = 0; i + 1 < n; ++i)
                    l1.push_back(i);
                make(n, CChannel{std::move(l1), {}, n - 1});
            }
        }
        else if (form == "noOverlap")
        {
            int dims = pick(rng, 1, 2);
            int items = dims == 1 ? pick(rng, 2, 4) : 2;
            int n = dims * items;
            rc.vars = random_vars(rng, n);
            CNoOverlap c;
            for (int i = 0; i < items; ++i)
            {
                NoOverlapItem item;
                for (int d = 0; d < dims; ++d)
                {
                    item.origins.push_back(i * dims + d);
                    item.lengths.push_back(pick(rng, 0, 3));
                }
                c.items.push_back(std::move(item));
            }
            make(n, std::move(c));
        }
        else if (form == "cumulative")
        {
            int tasks = pick(rng, 1, 3);
            int n = tasks + 1;
            rc.vars = random_vars(rng, n);
            CCumulative c;
            c.origins = scope_of(tasks);
            c.lengths = random_values(rng, tasks, 0, 3);
            c.heights = random_values(rng, tasks, 0, 3);
            c.cmp = coin(rng) ? Cmp::Le : Cmp::Lt;
            c.limit = coin(rng) ? ValOrVar::of_var(tasks)
                : ValOrVar::of_value(pick(rng, 0, 5));
            make(n, std::move(c));
        }
        else if (form == "binPacking")
        {
            int items = pick(rng, 1, 3);
            int n = items + 1;
            rc.vars = random_vars(rng, n);
            CBinPacking c;
            c.scope = scope_of(items);
            c.sizes = random_values(rng, items, 0, 3);
            c.bins = pick(rng, 1, 3);
            if (coin(rng))
                c.limit = coin(rng) ? ValOrVar::of_var(items)
                    : ValOrVar::of_value(pick(rng, 0, 5));
            else
                for (int b = 0; b < c.bins; ++b)
                    c.loads.push_back(b == 0 && coin(rng) ? ValOrVar::of_var(items)
                        : ValOrVar::of_value(pick(rng, 0, 4)));
            make(n, std::move(c));
        }
        else if (form == "knapsack")
        {
            int items = pick(rng, 1, 3);
            int n = items + 1;
            rc.vars = random_vars(rng, n);
            make(n, CKnapsack{scope_of(items), random_values(rng, items, 0, 3),
                random_vov(rng, n, 0, 6), random_values(rng, items, 0, 3),
                random_cmp(rng), coin(rng) ? ValOrVar::of_var(items)
                    : ValOrVar::of_value(pick(rng, 0, 6))});
        }
        else if (form == "circuit")
        {
            int n = pick(rng, 1, 4);
            rc.vars.clear();
            for (int i = 0; i < n; ++i)
            {
                // successor-flavored domains, occasionally with stray values;
                // the candidate pool [-1, n] holds n + 2 values
                std::set<Value> values;
                int size = pick(rng, 1, std::min(4, n + 2));
                while (static_cast<int>(values.size()) < size)
                    values.insert(pick(rng, -1, n));
                rc.vars.push_back({"v" + std::to_string(i),
                    Domain(std::vector<Value>(values.begin(), values.end()))});
            }
            make(n, CCircuit{scope_of(n)});
        }
        else if (form == "instantiation")
        {
            int n = pick(rng, 1, 4);
            rc.vars = random_vars(rng, n);
            make(n, CInstantiation{scope_of(n), random_values(rng, n, -3, 5)});
        }
        else if (form == "slide")
        {
            int n = pick(rng, 2, 4);
            rc.vars = random_vars(rng, n);
            CSlide c;
            c.scope = scope_of(n);
            c.window_arity = 2;
            c.offset = pick(rng, 1, 2);
            c.circular = coin(rng);
            c.window = std::make_shared<const Constraint>(
                Constraint{CIntension{random_bool_expr(rng, 2, 1)}});
            make(n, std::move(c));
        }
        else
        {
            throw BuildError("oracle: unknown case form " + form);
        }
        return rc;
    }

    auto case_instance(const RandomCase & rc) -> Instance
    {
        InstanceBuilder b("case");
        for (const auto & v : rc.vars)
            b.add_var(v.name, v.domain);
        b.post(rc.constraint);
        return b.build();
    }
}
