#include <xcore/propagate.hpp>

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace xcore
{
    auto PropagationResult::changed(std::vector<int> touched) -> PropagationResult
    {
        PropagationResult r;
        r.kind = Kind::Changed;
        r.touched = std::move(touched);
        return r;
    }

    auto PropagationResult::inconsistent(int cid) -> PropagationResult
    {
        PropagationResult r;
        r.kind = Kind::Inconsistent;
        r.failed_constraint = cid;
        return r;
    }

    namespace
    {
        // ---- saturating interval arithmetic -------------------------------

        constexpr Value INF = Value{1} << 62;

        struct IV
        {
            Value lo, hi;
        };

        auto sat(__int128 v) -> Value
        {
            if (v > INF)
                return INF;
            if (v < -INF)
                return -INF;
            return static_cast<Value>(v);
        }

        auto iv_add(IV a, IV b) -> IV
        {
            return {sat(static_cast<__int128>(a.lo) + b.lo), sat(static_cast<__int128>(a.hi) + b.hi)};
        }

        auto iv_sub(IV a, IV b) -> IV
        {
            return {sat(static_cast<__int128>(a.lo) - b.hi), sat(static_cast<__int128>(a.hi) - b.lo)};
        }

        auto iv_mul(IV a, IV b) -> IV
        {
            __int128 c1 = static_cast<__int128>(a.lo) * b.lo;
            __int128 c2 = static_cast<__int128>(a.lo) * b.hi;
            __int128 c3 = static_cast<__int128>(a.hi) * b.lo;
            __int128 c4 = static_cast<__int128>(a.hi) * b.hi;
            return {sat(std::min(std::min(c1, c2), std::min(c3, c4))),
                sat(std::max(std::max(c1, c2), std::max(c3, c4)))};
        }

        auto iv_abs(IV a) -> IV
        {
            if (a.lo >= 0)
                return a;
            if (a.hi <= 0)
                return {-a.hi, -a.lo};
            return {0, std::max(-a.lo, a.hi)};
        }

        // Quotient range under floor division; full range when the divisor
        // may be zero everywhere (exactness is not needed, only soundness).
        auto iv_floordiv(IV a, IV b) -> IV
        {
            bool any = false;
            Value lo = INF, hi = -INF;
            auto consider = [&](Value bl, Value bh)
            {
                if (bl > bh)
                    return;
                for (Value av : {a.lo, a.hi})
                    for (Value bv : {bl, bh})
                    {
                        Value q = floor_div(av, bv);
                        lo = std::min(lo, q);
                        hi = std::max(hi, q);
                        any = true;
                    }
            };
            consider(std::max<Value>(b.lo, 1), b.hi);
            consider(b.lo, std::min<Value>(b.hi, -1));
            if (! any)
                return {-INF, INF};
            return {lo, hi};
        }

        auto iv_floormod(IV b) -> IV
        {
            // floor_mod sign follows the divisor: (b,0] for b<0, [0,b) for b>0.
            Value lo = INF, hi = -INF;
            if (b.hi >= 1)
            {
                lo = std::min<Value>(lo, 0);
                hi = std::max(hi, b.hi - 1);
            }
            if (b.lo <= -1)
            {
                lo = std::min(lo, b.lo + 1);
                hi = std::max<Value>(hi, 0);
            }
            if (lo > hi)
                return {-INF, INF};
            return {lo, hi};
        }

        auto iv_union(IV a, IV b) -> IV
        {
            return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
        }

        auto iv_cmp(ExprOp op, IV a, IV b) -> IV
        {
            auto of = [](bool can_false, bool can_true) -> IV
            {
                return {can_false ? 0 : 1, can_true ? 1 : 0};
            };
            switch (op)
            {
            case ExprOp::Lt: return of(a.hi >= b.lo, a.lo < b.hi);
            case ExprOp::Le: return of(a.hi > b.lo, a.lo <= b.hi);
            case ExprOp::Gt: return of(a.lo <= b.hi, a.hi > b.lo);
            case ExprOp::Ge: return of(a.lo < b.hi, a.hi >= b.lo);
            case ExprOp::Eq:
                return of(! (a.lo == a.hi && b.lo == b.hi && a.lo == b.lo),
                    std::max(a.lo, b.lo) <= std::min(a.hi, b.hi));
            case ExprOp::Ne:
                return of(std::max(a.lo, b.lo) <= std::min(a.hi, b.hi),
                    ! (a.lo == a.hi && b.lo == b.hi && a.lo == b.lo));
            default: return {0, 1};
            }
        }

        // Bounds of e under current domains, with one var optionally pinned.
        auto iv_eval(const Expr & e, const DomainStore & store, int pin_var, Value pin_val) -> IV
        {
            switch (e.op)
            {
            case ExprOp::Const:
                return {e.value, e.value};
            case ExprOp::VarRef:
                if (e.var == pin_var)
                    return {pin_val, pin_val};
                return {store.min(e.var), store.max(e.var)};
            case ExprOp::Add:
            {
                IV acc{0, 0};
                for (const auto & k : e.kids)
                    acc = iv_add(acc, iv_eval(k, store, pin_var, pin_val));
                return acc;
            }
            case ExprOp::Sub:
                return iv_sub(iv_eval(e.kids[0], store, pin_var, pin_val),
                    iv_eval(e.kids[1], store, pin_var, pin_val));
            case ExprOp::Mul:
            {
                IV acc{1, 1};
                for (const auto & k : e.kids)
                    acc = iv_mul(acc, iv_eval(k, store, pin_var, pin_val));
                return acc;
            }
            case ExprOp::FloorDiv:
                return iv_floordiv(iv_eval(e.kids[0], store, pin_var, pin_val),
                    iv_eval(e.kids[1], store, pin_var, pin_val));
            case ExprOp::Mod:
                return iv_floormod(iv_eval(e.kids[1], store, pin_var, pin_val));
            case ExprOp::Abs:
                return iv_abs(iv_eval(e.kids[0], store, pin_var, pin_val));
            case ExprOp::Dist:
                return iv_abs(iv_sub(iv_eval(e.kids[0], store, pin_var, pin_val),
                    iv_eval(e.kids[1], store, pin_var, pin_val)));
            case ExprOp::Min:
            {
                IV acc{INF, INF};
                for (const auto & k : e.kids)
                {
                    IV kv = iv_eval(k, store, pin_var, pin_val);
                    acc = {std::min(acc.lo, kv.lo), std::min(acc.hi, kv.hi)};
                }
                return acc;
            }
            case ExprOp::Max:
            {
                IV acc{-INF, -INF};
                for (const auto & k : e.kids)
                {
                    IV kv = iv_eval(k, store, pin_var, pin_val);
                    acc = {std::max(acc.lo, kv.lo), std::max(acc.hi, kv.hi)};
                }
                return acc;
            }
            case ExprOp::Lt:
            case ExprOp::Le:
            case ExprOp::Eq:
            case ExprOp::Ne:
            case ExprOp::Ge:
            case ExprOp::Gt:
                return iv_cmp(e.op, iv_eval(e.kids[0], store, pin_var, pin_val),
                    iv_eval(e.kids[1], store, pin_var, pin_val));
            case ExprOp::And:
            {
                IV acc{1, 1};
                for (const auto & k : e.kids)
                {
                    IV kv = iv_eval(k, store, pin_var, pin_val);
                    acc = {std::min(acc.lo, kv.lo), std::min(acc.hi, kv.hi)};
                }
                return acc;
            }
            case ExprOp::Or:
            {
                IV acc{0, 0};
                for (const auto & k : e.kids)
                {
                    IV kv = iv_eval(k, store, pin_var, pin_val);
                    acc = {std::max(acc.lo, kv.lo), std::max(acc.hi, kv.hi)};
                }
                return acc;
            }
            case ExprOp::Not:
            {
                IV kv = iv_eval(e.kids[0], store, pin_var, pin_val);
                return {1 - kv.hi, 1 - kv.lo};
            }
            case ExprOp::Iff:
            {
                IV a = iv_eval(e.kids[0], store, pin_var, pin_val);
                IV b = iv_eval(e.kids[1], store, pin_var, pin_val);
                bool a_fix = a.lo == a.hi, b_fix = b.lo == b.hi;
                if (a_fix && b_fix)
                    return a.lo == b.lo ? IV{1, 1} : IV{0, 0};
                return {0, 1};
            }
            case ExprOp::Imp:
            {
                IV a = iv_eval(e.kids[0], store, pin_var, pin_val);
                IV b = iv_eval(e.kids[1], store, pin_var, pin_val);
                return {std::max<Value>(1 - a.hi, b.lo), std::max<Value>(1 - a.lo, b.hi)};
            }
            case ExprOp::Ift:
            {
                IV cond = iv_eval(e.kids[0], store, pin_var, pin_val);
                if (cond.lo >= 1)
                    return iv_eval(e.kids[1], store, pin_var, pin_val);
                if (cond.hi <= 0)
                    return iv_eval(e.kids[2], store, pin_var, pin_val);
                return iv_union(iv_eval(e.kids[1], store, pin_var, pin_val),
                    iv_eval(e.kids[2], store, pin_var, pin_val));
            }
            case ExprOp::InSet:
            {
                IV kv = iv_eval(e.kids[0], store, pin_var, pin_val);
                auto first = std::lower_bound(e.set_values.begin(), e.set_values.end(), kv.lo);
                auto last = std::upper_bound(e.set_values.begin(), e.set_values.end(), kv.hi);
                Value inside = last - first;
                if (inside == 0)
                    return {0, 0};
                // Membership certain only when every value in [lo,hi] is in
                // the set; widths beyond the set size cannot qualify.
                __int128 width = static_cast<__int128>(kv.hi) - kv.lo + 1;
                if (width == inside)
                    return {1, 1};
                return {0, 1};
            }
            }
            return {-INF, INF};
        }

        // ---- plumbing ------------------------------------------------------

        class Pruner
        {
        public:
            explicit Pruner(DomainStore & store) :
                store_(store)
            {
            }

            auto remove(int var, Value v) -> bool { return note(store_.remove(var, v)); }
            auto assign(int var, Value v) -> bool { return note(store_.assign(var, v)); }
            auto tighten_lo(int var, Value lo) -> bool { return note(store_.tighten_lo(var, lo)); }
            auto tighten_hi(int var, Value hi) -> bool { return note(store_.tighten_hi(var, hi)); }
            auto tighten(int var, Value lo, Value hi) -> bool
            {
                return tighten_lo(var, lo) && tighten_hi(var, hi);
            }

            auto failed() const -> bool { return failed_; }
            auto fail() -> void { failed_ = true; }

        private:
            auto note(DomainStore::Prune p) -> bool
            {
                if (p == DomainStore::Prune::Empty)
                    failed_ = true;
                return ! failed_;
            }

            DomainStore & store_;
            bool failed_ = false;
        };

        auto vov_lo(const ValOrVar & v, const DomainStore & s) -> Value
        {
            return v.is_var ? s.min(v.var()) : v.value;
        }

        auto vov_hi(const ValOrVar & v, const DomainStore & s) -> Value
        {
            return v.is_var ? s.max(v.var()) : v.value;
        }

        auto vov_tighten(const ValOrVar & v, Pruner & p, Value lo, Value hi) -> void
        {
            if (v.is_var)
                p.tighten(v.var(), lo, hi);
            else if (v.value < lo || v.value > hi)
                p.fail();
        }

        // Required interval for `lhs cmp rhs` to be satisfiable, given the
        // rhs bounds. Ne yields the full range (handled separately).
        auto required_interval(Cmp cmp, Value rlo, Value rhi) -> IV
        {
            switch (cmp)
            {
            case Cmp::Lt: return {-INF, rhi - 1};
            case Cmp::Le: return {-INF, rhi};
            case Cmp::Eq: return {rlo, rhi};
            case Cmp::Ne: return {-INF, INF};
            case Cmp::Ge: return {rlo, INF};
            case Cmp::Gt: return {rlo + 1, INF};
            }
            return {-INF, INF};
        }

        // Tightens rhs so that some lhs value in [llo, lhi] can satisfy cmp.
        auto tighten_rhs(Cmp cmp, const ValOrVar & rhs, Value llo, Value lhi, Pruner & p) -> void
        {
            switch (cmp)
            {
            case Cmp::Lt: vov_tighten(rhs, p, sat(static_cast<__int128>(llo) + 1), INF); break;
            case Cmp::Le: vov_tighten(rhs, p, llo, INF); break;
            case Cmp::Eq: vov_tighten(rhs, p, llo, lhi); break;
            case Cmp::Ne:
                if (llo == lhi && rhs.is_var)
                    p.remove(rhs.var(), llo);
                else if (llo == lhi && ! rhs.is_var && rhs.value == llo)
                    p.fail();
                break;
            case Cmp::Ge: vov_tighten(rhs, p, -INF, lhi); break;
            case Cmp::Gt: vov_tighten(rhs, p, -INF, sat(static_cast<__int128>(lhi) - 1)); break;
            }
        }

        // ---- per-form propagators -----------------------------------------

        constexpr int SHAVE_VAR_LIMIT = 24;
        constexpr int SHAVE_VALUE_BUDGET = 512;

        auto prop_intension(const CIntension & c, const std::vector<int> & scope,
            DomainStore & store, Pruner & p) -> void
        {
            IV root = iv_eval(c.expr, store, -1, 0);
            if (root.hi <= 0)
            {
                p.fail();
                return;
            }
            if (root.lo >= 1)
                return;  // entailed
            int budget = 0;
            for (int v : scope)
                budget += store.size(v);
            if (static_cast<int>(scope.size()) > SHAVE_VAR_LIMIT || budget > SHAVE_VALUE_BUDGET)
                return;
            for (int v : scope)
            {
                if (store.fixed(v))
                    continue;
                for (Value a : store.values(v))
                {
                    IV iv = iv_eval(c.expr, store, v, a);
                    if (iv.hi <= 0 && ! p.remove(v, a))
                        return;
                }
            }
        }

        auto prop_extension_supports(const CExtension & c, DomainStore & store, Pruner & p) -> void
        {
            size_t arity = c.scope.size();
            std::vector<std::vector<Value>> vals(arity);
            std::vector<std::vector<char>> hit(arity);
            std::vector<char> star(arity, 0);
            for (size_t i = 0; i < arity; ++i)
            {
                vals[i] = store.values(c.scope[i]);
                hit[i].assign(vals[i].size(), 0);
            }
            bool any_valid = false;
            for (const auto & t : *c.tuples)
            {
                bool valid = true;
                for (size_t i = 0; i < arity && valid; ++i)
                    if (t[i] != STAR && ! store.contains(c.scope[i], t[i]))
                        valid = false;
                if (! valid)
                    continue;
                any_valid = true;
                for (size_t i = 0; i < arity; ++i)
                {
                    if (t[i] == STAR)
                    {
                        star[i] = 1;
                        continue;
                    }
                    auto it = std::lower_bound(vals[i].begin(), vals[i].end(), t[i]);
                    if (it != vals[i].end() && *it == t[i])
                        hit[i][static_cast<size_t>(it - vals[i].begin())] = 1;
                }
            }
            if (! any_valid)
            {
                p.fail();
                return;
            }
            for (size_t i = 0; i < arity; ++i)
            {
                if (star[i])
                    continue;
                for (size_t k = 0; k < vals[i].size(); ++k)
                    if (! hit[i][k] && ! p.remove(c.scope[i], vals[i][k]))
                        return;
            }
        }

        constexpr long long CONFLICT_GAC_BUDGET = 4096;

        auto conflicts_matches(const Tuples & tuples, const std::vector<Value> & point) -> bool
        {
            for (const auto & t : tuples)
            {
                bool match = true;
                for (size_t i = 0; i < point.size() && match; ++i)
                    if (t[i] != STAR && t[i] != point[i])
                        match = false;
                if (match)
                    return true;
            }
            return false;
        }

        auto prop_extension_conflicts(const CExtension & c, DomainStore & store, Pruner & p) -> void
        {
            size_t arity = c.scope.size();
            long long product = 1;
            for (int v : c.scope)
            {
                product *= store.size(v);
                if (product > CONFLICT_GAC_BUDGET)
                    break;
            }
            if (product > CONFLICT_GAC_BUDGET)
            {
                // Too wide for exact support search: prune only when a single
                // var is unfixed (forward checking).
                int unfixed = -1, n_unfixed = 0;
                for (int v : c.scope)
                    if (! store.fixed(v))
                    {
                        unfixed = v;
                        ++n_unfixed;
                    }
                if (n_unfixed != 1)
                    return;
                std::vector<Value> point(arity);
                size_t upos = 0;
                for (size_t i = 0; i < arity; ++i)
                {
                    if (c.scope[i] == unfixed)
                        upos = i;
                    else
                        point[i] = store.value(c.scope[i]);
                }
                for (Value a : store.values(unfixed))
                {
                    point[upos] = a;
                    if (conflicts_matches(*c.tuples, point) && ! p.remove(unfixed, a))
                        return;
                }
                return;
            }
            std::vector<Value> point(arity);
            for (size_t i = 0; i < arity; ++i)
            {
                for (Value a : store.values(c.scope[i]))
                {
                    point[i] = a;
                    bool supported = [&]
                    {
                        std::vector<Value> probe(arity);
                        probe[i] = a;
                        auto rec = [&](auto && self, size_t pos) -> bool
                        {
                            if (pos == arity)
                                return ! conflicts_matches(*c.tuples, probe);
                            if (pos == i)
                                return self(self, pos + 1);
                            for (Value b : store.values(c.scope[pos]))
                            {
                                probe[pos] = b;
                                if (self(self, pos + 1))
                                    return true;
                            }
                            return false;
                        };
                        return rec(rec, 0);
                    }();
                    if (! supported && ! p.remove(c.scope[i], a))
                        return;
                }
            }
        }

        auto prop_regular(const CRegular & c, DomainStore & store, Pruner & p) -> void
        {
            size_t n = c.scope.size();
            std::set<int> states;
            states.insert(c.automaton.start);
            for (const auto & t : c.automaton.transitions)
            {
                states.insert(t.from);
                states.insert(t.to);
            }
            for (int f : c.automaton.finals)
                states.insert(f);
            std::map<int, int> dense;
            for (int s : states)
                dense.emplace(s, static_cast<int>(dense.size()));
            size_t ns = dense.size();

            std::vector<std::vector<char>> fwd(n + 1, std::vector<char>(ns, 0));
            fwd[0][static_cast<size_t>(dense.at(c.automaton.start))] = 1;
            for (size_t i = 0; i < n; ++i)
                for (const auto & t : c.automaton.transitions)
                    if (fwd[i][static_cast<size_t>(dense.at(t.from))] &&
                        store.contains(c.scope[i], t.symbol))
                        fwd[i + 1][static_cast<size_t>(dense.at(t.to))] = 1;

            std::vector<std::vector<char>> bwd(n + 1, std::vector<char>(ns, 0));
            for (int f : c.automaton.finals)
                bwd[n][static_cast<size_t>(dense.at(f))] = 1;
            for (size_t i = n; i-- > 0;)
                for (const auto & t : c.automaton.transitions)
                    if (bwd[i + 1][static_cast<size_t>(dense.at(t.to))] &&
                        store.contains(c.scope[i], t.symbol))
                        bwd[i][static_cast<size_t>(dense.at(t.from))] = 1;

            bool reachable = false;
            for (size_t s = 0; s < ns; ++s)
                if (fwd[n][s] && bwd[n][s])
                    reachable = true;
            if (! reachable)
            {
                p.fail();
                return;
            }

            for (size_t i = 0; i < n; ++i)
            {
                std::set<Value> supported;
                for (const auto & t : c.automaton.transitions)
                    if (fwd[i][static_cast<size_t>(dense.at(t.from))] &&
                        bwd[i + 1][static_cast<size_t>(dense.at(t.to))] &&
                        store.contains(c.scope[i], t.symbol))
                        supported.insert(t.symbol);
                for (Value v : store.values(c.scope[i]))
                    if (! supported.count(v) && ! p.remove(c.scope[i], v))
                        return;
            }
        }

        auto prop_mdd(const CMdd & c, DomainStore & store, Pruner & p) -> void
        {
            size_t n = c.scope.size();
            std::map<int, int> layer{{c.root, 0}};
            for (size_t pass = 0; pass < n; ++pass)
                for (const auto & t : c.transitions)
                {
                    auto it = layer.find(t.from);
                    if (it != layer.end())
                        layer.emplace(t.to, it->second + 1);
                }
            std::set<int> fwd{c.root};
            std::vector<std::vector<const MddTransition *>> by_layer(n);
            for (const auto & t : c.transitions)
            {
                auto it = layer.find(t.from);
                if (it != layer.end() && it->second < static_cast<int>(n))
                    by_layer[static_cast<size_t>(it->second)].push_back(&t);
            }
            std::vector<std::set<int>> fwd_nodes(n + 1);
            fwd_nodes[0].insert(c.root);
            for (size_t i = 0; i < n; ++i)
                for (const auto * t : by_layer[i])
                    if (fwd_nodes[i].count(t->from) && store.contains(c.scope[i], t->value))
                        fwd_nodes[i + 1].insert(t->to);
            std::vector<std::set<int>> bwd_nodes(n + 1);
            if (fwd_nodes[n].count(c.terminal))
                bwd_nodes[n].insert(c.terminal);
            for (size_t i = n; i-- > 0;)
                for (const auto * t : by_layer[i])
                    if (bwd_nodes[i + 1].count(t->to) && store.contains(c.scope[i], t->value))
                        bwd_nodes[i].insert(t->from);
            if (bwd_nodes[n].empty())
            {
                p.fail();
                return;
            }
            for (size_t i = 0; i < n; ++i)
            {
                std::set<Value> supported;
                for (const auto * t : by_layer[i])
                    if (fwd_nodes[i].count(t->from) && bwd_nodes[i + 1].count(t->to) &&
                        store.contains(c.scope[i], t->value))
                        supported.insert(t->value);
                for (Value v : store.values(c.scope[i]))
                    if (! supported.count(v) && ! p.remove(c.scope[i], v))
                        return;
            }
        }

        auto prop_alldifferent(const CAllDifferent & c, DomainStore & store, Pruner & p) -> void
        {
            // Singleton elimination to a local fixpoint.
            std::deque<int> queue;
            for (int v : c.scope)
                if (store.fixed(v) && (! c.except || store.value(v) != *c.except))
                    queue.push_back(v);
            std::set<int> queued(queue.begin(), queue.end());
            while (! queue.empty())
            {
                int v = queue.front();
                queue.pop_front();
                Value val = store.value(v);
                for (int w : c.scope)
                {
                    if (w == v)
                        continue;
                    bool was_fixed = store.fixed(w);
                    if (was_fixed && store.value(w) == val)
                    {
                        p.fail();
                        return;
                    }
                    if (! p.remove(w, val))
                        return;
                    if (! was_fixed && store.fixed(w) &&
                        (! c.except || store.value(w) != *c.except) && queued.insert(w).second)
                        queue.push_back(w);
                }
            }
            // Pigeonhole over the vars that cannot take the escape value.
            std::set<Value> candidates;
            int strict = 0;
            for (int v : c.scope)
            {
                if (c.except && store.contains(v, *c.except))
                    continue;
                ++strict;
                for (Value val : store.values(v))
                    candidates.insert(val);
            }
            if (c.except)
                candidates.erase(*c.except);
            if (static_cast<int>(candidates.size()) < strict)
                p.fail();
        }

        auto prop_alldifferent_list(const CAllDifferentList & c, DomainStore & store, Pruner & p) -> void
        {
            size_t len = c.lists.front().size();
            for (size_t i = 0; i < c.lists.size(); ++i)
                for (size_t j = i + 1; j < c.lists.size(); ++j)
                {
                    int free_pos = -1;
                    int n_free = 0;
                    bool can_be_equal = true;
                    for (size_t pos = 0; pos < len && can_be_equal; ++pos)
                    {
                        int x = c.lists[i][pos], y = c.lists[j][pos];
                        if (store.fixed(x) && store.fixed(y))
                        {
                            if (store.value(x) != store.value(y))
                                can_be_equal = false;
                        }
                        else
                        {
                            free_pos = static_cast<int>(pos);
                            ++n_free;
                        }
                    }
                    if (! can_be_equal)
                        continue;
                    if (n_free == 0)
                    {
                        p.fail();
                        return;
                    }
                    if (n_free == 1)
                    {
                        int x = c.lists[i][static_cast<size_t>(free_pos)];
                        int y = c.lists[j][static_cast<size_t>(free_pos)];
                        if (store.fixed(x))
                        {
                            if (! p.remove(y, store.value(x)))
                                return;
                        }
                        else if (store.fixed(y))
                        {
                            if (! p.remove(x, store.value(y)))
                                return;
                        }
                    }
                }
        }

        auto prop_allequal(const CAllEqual & c, DomainStore & store, Pruner & p) -> void
        {
            if (c.scope.size() < 2)
                return;
            std::vector<Value> common;
            for (Value v : store.values(c.scope.front()))
            {
                bool everywhere = true;
                for (size_t i = 1; i < c.scope.size() && everywhere; ++i)
                    if (! store.contains(c.scope[i], v))
                        everywhere = false;
                if (everywhere)
                    common.push_back(v);
            }
            if (common.empty())
            {
                p.fail();
                return;
            }
            for (int v : c.scope)
                for (Value val : store.values(v))
                    if (! std::binary_search(common.begin(), common.end(), val) &&
                        ! p.remove(v, val))
                        return;
        }

        auto prop_ordered(const COrdered & c, DomainStore & store, Pruner & p) -> void
        {
            Value step = c.strict ? 1 : 0;
            // Normalize to an increasing chain over a view.
            std::vector<int> chain = c.scope;
            if (! c.increasing)
                std::reverse(chain.begin(), chain.end());
            for (size_t i = 0; i + 1 < chain.size(); ++i)
                if (! p.tighten_lo(chain[i + 1], store.min(chain[i]) + step))
                    return;
            for (size_t i = chain.size(); i-- > 1;)
                if (! p.tighten_hi(chain[i - 1], store.max(chain[i]) - step))
                    return;
        }

        auto prop_lex_pair(const std::vector<int> & xs, const std::vector<int> & ys, bool strict,
            DomainStore & store, Pruner & p) -> void
        {
            size_t alpha = 0;
            while (alpha < xs.size() && store.fixed(xs[alpha]) && store.fixed(ys[alpha]) &&
                store.value(xs[alpha]) == store.value(ys[alpha]))
                ++alpha;
            if (alpha == xs.size())
            {
                if (strict)
                    p.fail();
                return;
            }
            int x = xs[alpha], y = ys[alpha];
            if (store.fixed(x) && store.fixed(y))
            {
                // Differ here: decided one way or the other.
                if (store.value(x) > store.value(y))
                    p.fail();
                return;
            }
            bool last = alpha + 1 == xs.size();
            Value margin = (strict && last) ? 1 : 0;
            if (! p.tighten_hi(x, store.max(y) - margin))
                return;
            p.tighten_lo(y, store.min(x) + margin);
        }

        auto prop_lex(const CLex & c, DomainStore & store, Pruner & p) -> void
        {
            for (size_t i = 0; i + 1 < c.lists.size() && ! p.failed(); ++i)
            {
                const auto & a = c.lists[c.increasing ? i : i + 1];
                const auto & b = c.lists[c.increasing ? i + 1 : i];
                prop_lex_pair(a, b, c.strict, store, p);
            }
        }

        auto prop_precedence(const CPrecedence & c, DomainStore & store, Pruner & p) -> void
        {
            for (size_t k = 0; k + 1 < c.values.size() && ! p.failed(); ++k)
            {
                Value u = c.values[k], w = c.values[k + 1];
                bool u_possible = false;
                for (int v : c.scope)
                {
                    if (! u_possible && ! p.remove(v, w))
                        return;
                    if (store.contains(v, u))
                        u_possible = true;
                }
            }
        }

        struct Term
        {
            Value coeff;
            int var;
        };

        // sum(coeff_i * x_i) cmp rhs_const, after folding a var rhs in as a
        // -1 coefficient term.
        auto prop_linear(const std::vector<Term> & terms, Cmp cmp, Value rhs, DomainStore & store,
            Pruner & p) -> void
        {
            __int128 total_lo = 0, total_hi = 0;
            std::vector<Value> t_lo(terms.size()), t_hi(terms.size());
            for (size_t i = 0; i < terms.size(); ++i)
            {
                Value a = terms[i].coeff * store.min(terms[i].var);
                Value b = terms[i].coeff * store.max(terms[i].var);
                t_lo[i] = std::min(a, b);
                t_hi[i] = std::max(a, b);
                total_lo += t_lo[i];
                total_hi += t_hi[i];
            }
            auto le_side = [&](Value bound) -> void
            {
                // sum <= bound
                if (total_lo > bound)
                {
                    p.fail();
                    return;
                }
                for (size_t i = 0; i < terms.size() && ! p.failed(); ++i)
                {
                    __int128 rest = total_lo - t_lo[i];
                    __int128 allow = bound - rest;  // coeff*x <= allow
                    Value coeff = terms[i].coeff;
                    if (coeff > 0)
                        p.tighten_hi(terms[i].var,
                            static_cast<Value>(floor_div(sat(allow), coeff)));
                    else if (coeff < 0)
                        p.tighten_lo(terms[i].var,
                            static_cast<Value>(-floor_div(sat(allow), -coeff)));
                    else if (allow < 0)
                        p.fail();
                }
            };
            auto ge_side = [&](Value bound) -> void
            {
                // sum >= bound
                if (total_hi < bound)
                {
                    p.fail();
                    return;
                }
                for (size_t i = 0; i < terms.size() && ! p.failed(); ++i)
                {
                    __int128 rest = total_hi - t_hi[i];
                    __int128 need = bound - rest;  // coeff*x >= need
                    Value coeff = terms[i].coeff;
                    if (coeff > 0)
                        p.tighten_lo(terms[i].var,
                            static_cast<Value>(-floor_div(-sat(need), coeff)));
                    else if (coeff < 0)
                        p.tighten_hi(terms[i].var,
                            static_cast<Value>(floor_div(-sat(need), -coeff)));
                    else if (need > 0)
                        p.fail();
                }
            };
            switch (cmp)
            {
            case Cmp::Le: le_side(rhs); break;
            case Cmp::Lt: le_side(rhs - 1); break;
            case Cmp::Ge: ge_side(rhs); break;
            case Cmp::Gt: ge_side(rhs + 1); break;
            case Cmp::Eq:
                le_side(rhs);
                if (! p.failed())
                    ge_side(rhs);
                break;
            case Cmp::Ne:
            {
                // Only the endgame prunes: one unfixed var left.
                int unfixed = -1, n_unfixed = 0;
                __int128 fixed_sum = 0;
                for (const auto & t : terms)
                {
                    if (store.fixed(t.var))
                        fixed_sum += static_cast<__int128>(t.coeff) * store.value(t.var);
                    else
                    {
                        unfixed = static_cast<int>(&t - terms.data());
                        ++n_unfixed;
                    }
                }
                if (n_unfixed == 0)
                {
                    if (fixed_sum == rhs)
                        p.fail();
                }
                else if (n_unfixed == 1)
                {
                    const auto & t = terms[static_cast<size_t>(unfixed)];
                    __int128 need = rhs - fixed_sum;
                    if (t.coeff != 0 && need % t.coeff == 0)
                        p.remove(t.var, static_cast<Value>(need / t.coeff));
                    else if (t.coeff == 0 && need == 0)
                        p.fail();
                }
                break;
            }
            }
        }

        auto prop_sum(const CSum & c, DomainStore & store, Pruner & p) -> void
        {
            std::vector<Term> terms;
            for (size_t i = 0; i < c.scope.size(); ++i)
                terms.push_back({c.coeffs[i], c.scope[i]});
            Value rhs = 0;
            if (c.rhs.is_var)
                terms.push_back({-1, c.rhs.var()});
            else
                rhs = c.rhs.value;
            prop_linear(terms, c.cmp, rhs, store, p);
        }

        auto prop_count(const CCount & c, DomainStore & store, Pruner & p) -> void
        {
            std::vector<Value> sorted_vals = c.values;
            std::sort(sorted_vals.begin(), sorted_vals.end());
            auto in_set = [&](Value v)
            {
                return std::binary_search(sorted_vals.begin(), sorted_vals.end(), v);
            };
            int lb = 0, ub = 0;
            for (int v : c.scope)
            {
                bool can = false, must = true;
                for (Value val : store.values(v))
                {
                    if (in_set(val))
                        can = true;
                    else
                        must = false;
                }
                if (can)
                    ++ub;
                if (can && must)
                    ++lb;
            }
            tighten_rhs(c.cmp, c.rhs, lb, ub, p);
            if (p.failed())
                return;
            IV need = required_interval(c.cmp, vov_lo(c.rhs, store), vov_hi(c.rhs, store));
            if (c.cmp == Cmp::Ne)
            {
                if (lb == ub && ! c.rhs.is_var && lb == c.rhs.value)
                    p.fail();
                return;
            }
            if (ub < need.lo || lb > need.hi)
            {
                p.fail();
                return;
            }
            if (ub == need.lo)
            {
                // Every var that can hit the set must.
                for (int v : c.scope)
                {
                    bool can = false;
                    for (Value val : store.values(v))
                        if (in_set(val))
                            can = true;
                    if (! can)
                        continue;
                    for (Value val : store.values(v))
                        if (! in_set(val) && ! p.remove(v, val))
                            return;
                }
            }
            if (lb == need.hi)
            {
                // Vars not already pinned inside the set must avoid it.
                for (int v : c.scope)
                {
                    bool must = true;
                    for (Value val : store.values(v))
                        if (! in_set(val))
                            must = false;
                    if (must)
                        continue;
                    for (Value val : store.values(v))
                        if (in_set(val) && ! p.remove(v, val))
                            return;
                }
            }
        }

        auto prop_nvalues(const CNValues & c, DomainStore & store, Pruner & p) -> void
        {
            std::set<Value> fixed_vals;
            std::set<Value> union_vals;
            int unfixed = 0;
            for (int v : c.scope)
            {
                if (store.fixed(v))
                    fixed_vals.insert(store.value(v));
                else
                    ++unfixed;
                for (Value val : store.values(v))
                    union_vals.insert(val);
            }
            Value lb = std::max<Value>(static_cast<Value>(fixed_vals.size()),
                c.scope.empty() ? 0 : 1);
            Value ub = std::min<Value>(static_cast<Value>(c.scope.size()),
                static_cast<Value>(union_vals.size()));
            tighten_rhs(c.cmp, c.rhs, lb, ub, p);
            if (p.failed())
                return;
            if (c.cmp == Cmp::Ne)
                return;
            IV need = required_interval(c.cmp, vov_lo(c.rhs, store), vov_hi(c.rhs, store));
            if (ub < need.lo || lb > need.hi)
            {
                p.fail();
                return;
            }
            if (need.hi == 1)
            {
                // All vars must collapse onto one common value.
                CAllEqual eq{c.scope};
                prop_allequal(eq, store, p);
                return;
            }
            if (unfixed == 1 && lb + 1 == need.lo)
            {
                // The last free var must introduce a fresh value.
                for (int v : c.scope)
                {
                    if (store.fixed(v))
                        continue;
                    for (Value val : fixed_vals)
                        if (! p.remove(v, val))
                            return;
                }
            }
        }

        auto prop_cardinality(const CCardinality & c, DomainStore & store, Pruner & p) -> void
        {
            for (size_t k = 0; k < c.values.size() && ! p.failed(); ++k)
            {
                Value val = c.values[k];
                int cnt_min = 0, cnt_max = 0;
                for (int v : c.scope)
                {
                    if (store.contains(v, val))
                    {
                        ++cnt_max;
                        if (store.fixed(v))
                            ++cnt_min;
                    }
                }
                if (cnt_min > c.occurs_hi[k] || cnt_max < c.occurs_lo[k])
                {
                    p.fail();
                    return;
                }
                if (cnt_min == c.occurs_hi[k])
                {
                    for (int v : c.scope)
                        if (! store.fixed(v) && store.contains(v, val) && ! p.remove(v, val))
                            return;
                }
                if (cnt_max == c.occurs_lo[k])
                {
                    for (int v : c.scope)
                        if (store.contains(v, val) && ! store.fixed(v) && ! p.assign(v, val))
                            return;
                }
            }
        }

        auto prop_extremum(const std::vector<int> & scope, bool is_max, Cmp cmp,
            const ValOrVar & rhs, DomainStore & store, Pruner & p) -> void
        {
            // Mirror minimum into maximum over negated bounds conceptually;
            // here both sides are written out for clarity.
            Value ext_lo, ext_hi;
            if (is_max)
            {
                ext_lo = store.min(scope.front());
                ext_hi = store.max(scope.front());
                for (int v : scope)
                {
                    ext_lo = std::max(ext_lo, store.min(v));
                    ext_hi = std::max(ext_hi, store.max(v));
                }
            }
            else
            {
                ext_lo = store.min(scope.front());
                ext_hi = store.max(scope.front());
                for (int v : scope)
                {
                    ext_lo = std::min(ext_lo, store.min(v));
                    ext_hi = std::min(ext_hi, store.max(v));
                }
            }
            tighten_rhs(cmp, rhs, ext_lo, ext_hi, p);
            if (p.failed() || cmp == Cmp::Ne)
                return;
            IV need = required_interval(cmp, vov_lo(rhs, store), vov_hi(rhs, store));
            if (ext_hi < need.lo || ext_lo > need.hi)
            {
                p.fail();
                return;
            }
            if (is_max)
            {
                // No member may exceed the cap; someone must reach the floor.
                for (int v : scope)
                    if (need.hi < INF && ! p.tighten_hi(v, need.hi))
                        return;
                if (need.lo > -INF)
                {
                    int reacher = -1, n_reach = 0;
                    for (int v : scope)
                        if (store.max(v) >= need.lo)
                        {
                            reacher = v;
                            ++n_reach;
                        }
                    if (n_reach == 0)
                        p.fail();
                    else if (n_reach == 1)
                        p.tighten_lo(reacher, need.lo);
                }
            }
            else
            {
                for (int v : scope)
                    if (need.lo > -INF && ! p.tighten_lo(v, need.lo))
                        return;
                if (need.hi < INF)
                {
                    int reacher = -1, n_reach = 0;
                    for (int v : scope)
                        if (store.min(v) <= need.hi)
                        {
                            reacher = v;
                            ++n_reach;
                        }
                    if (n_reach == 0)
                        p.fail();
                    else if (n_reach == 1)
                        p.tighten_hi(reacher, need.hi);
                }
            }
        }

        auto prop_element(const CElement & c, DomainStore & store, Pruner & p) -> void
        {
            Value len = static_cast<Value>(c.list.size());
            if (! p.tighten(c.index, 0, len - 1))
                return;
            auto item_can = [&](size_t i, Value v) -> bool
            {
                const auto & item = c.list[i];
                return item.is_var ? store.contains(item.var(), v) : item.value == v;
            };
            auto value_can = [&](Value v) -> bool
            {
                return c.value.is_var ? store.contains(c.value.var(), v) : c.value.value == v;
            };
            // Index values must point at a compatible item.
            for (Value i : store.values(c.index))
            {
                const auto & item = c.list[static_cast<size_t>(i)];
                bool ok = false;
                if (item.is_var)
                {
                    for (Value v : store.values(item.var()))
                        if (value_can(v))
                        {
                            ok = true;
                            break;
                        }
                }
                else
                    ok = value_can(item.value);
                if (! ok && ! p.remove(c.index, i))
                    return;
            }
            if (store.empty(c.index))
                return;
            // Result values need a supporting index.
            if (c.value.is_var)
            {
                for (Value v : store.values(c.value.var()))
                {
                    bool ok = false;
                    for (Value i : store.values(c.index))
                        if (item_can(static_cast<size_t>(i), v))
                        {
                            ok = true;
                            break;
                        }
                    if (! ok && ! p.remove(c.value.var(), v))
                        return;
                }
            }
            else
            {
                bool ok = false;
                for (Value i : store.values(c.index))
                    if (item_can(static_cast<size_t>(i), c.value.value))
                    {
                        ok = true;
                        break;
                    }
                if (! ok)
                {
                    p.fail();
                    return;
                }
            }
            // Pinned index: the chosen item and the result must agree.
            if (store.fixed(c.index))
            {
                const auto & item = c.list[static_cast<size_t>(store.value(c.index))];
                if (item.is_var)
                {
                    for (Value v : store.values(item.var()))
                        if (! value_can(v) && ! p.remove(item.var(), v))
                            return;
                    if (c.value.is_var)
                    {
                        for (Value v : store.values(c.value.var()))
                            if (! store.contains(item.var(), v) && ! p.remove(c.value.var(), v))
                                return;
                    }
                }
                else if (c.value.is_var)
                {
                    if (! p.assign(c.value.var(), item.value))
                        return;
                }
            }
        }

        auto prop_channel(const CChannel & c, DomainStore & store, Pruner & p) -> void
        {
            if (c.value)
            {
                Value n = static_cast<Value>(c.list1.size());
                if (! p.tighten(*c.value, 0, n - 1))
                    return;
                for (Value i : store.values(*c.value))
                    if (! store.contains(c.list1[static_cast<size_t>(i)], 1) &&
                        ! p.remove(*c.value, i))
                        return;
                for (size_t i = 0; i < c.list1.size(); ++i)
                {
                    if (! p.tighten(c.list1[i], 0, 1))
                        return;
                    if (! store.contains(*c.value, static_cast<Value>(i)))
                    {
                        if (! p.assign(c.list1[i], 0))
                            return;
                    }
                    else if (store.fixed(c.list1[i]))
                    {
                        bool lit = store.value(c.list1[i]) == 1;
                        if (lit && ! p.assign(*c.value, static_cast<Value>(i)))
                            return;
                        if (! lit && ! p.remove(*c.value, static_cast<Value>(i)))
                            return;
                    }
                }
                if (store.fixed(*c.value))
                    p.assign(c.list1[static_cast<size_t>(store.value(*c.value))], 1);
                return;
            }
            const auto & l1 = c.list1;
            const auto & l2 = c.list2.empty() ? c.list1 : c.list2;
            bool mutual = c.list2.empty() || c.list1.size() == c.list2.size();
            Value n2 = static_cast<Value>(l2.size());
            for (size_t i = 0; i < l1.size(); ++i)
            {
                if (! p.tighten(l1[i], 0, n2 - 1))
                    return;
                for (Value j : store.values(l1[i]))
                    if (! store.contains(l2[static_cast<size_t>(j)], static_cast<Value>(i)) &&
                        ! p.remove(l1[i], j))
                        return;
                if (store.fixed(l1[i]))
                {
                    if (! p.assign(l2[static_cast<size_t>(store.value(l1[i]))],
                            static_cast<Value>(i)))
                        return;
                }
            }
            if (! mutual)
                return;
            Value n1 = static_cast<Value>(l1.size());
            for (size_t j = 0; j < l2.size(); ++j)
            {
                if (! p.tighten(l2[j], 0, n1 - 1))
                    return;
                for (Value i : store.values(l2[j]))
                    if (! store.contains(l1[static_cast<size_t>(i)], static_cast<Value>(j)) &&
                        ! p.remove(l2[j], i))
                        return;
                if (store.fixed(l2[j]))
                {
                    if (! p.assign(l1[static_cast<size_t>(store.value(l2[j]))],
                            static_cast<Value>(j)))
                        return;
                }
            }
        }

        auto prop_nooverlap(const CNoOverlap & c, DomainStore & store, Pruner & p) -> void
        {
            size_t dims = c.items.front().origins.size();
            for (size_t i = 0; i < c.items.size() && ! p.failed(); ++i)
                for (size_t j = i + 1; j < c.items.size() && ! p.failed(); ++j)
                {
                    const auto & a = c.items[i];
                    const auto & b = c.items[j];
                    int free_dim = -1;
                    int n_free = 0;
                    for (size_t d = 0; d < dims; ++d)
                    {
                        bool ab = store.min(a.origins[d]) + a.lengths[d] <= store.max(b.origins[d]);
                        bool ba = store.min(b.origins[d]) + b.lengths[d] <= store.max(a.origins[d]);
                        if (ab || ba)
                        {
                            free_dim = static_cast<int>(d);
                            ++n_free;
                        }
                    }
                    if (n_free == 0)
                    {
                        p.fail();
                        return;
                    }
                    if (n_free > 1)
                        continue;
                    size_t d = static_cast<size_t>(free_dim);
                    bool ab = store.min(a.origins[d]) + a.lengths[d] <= store.max(b.origins[d]);
                    bool ba = store.min(b.origins[d]) + b.lengths[d] <= store.max(a.origins[d]);
                    if (ab && ba)
                        continue;
                    const auto & first = ab ? a : b;
                    const auto & second = ab ? b : a;
                    // first must end before second starts in dim d.
                    if (! p.tighten_hi(first.origins[d], store.max(second.origins[d]) - first.lengths[d]))
                        return;
                    if (! p.tighten_lo(second.origins[d], store.min(first.origins[d]) + first.lengths[d]))
                        return;
                }
        }

        struct ProfilePart
        {
            Value start, end, height;
        };

        // Merged mandatory-part profile, skipping task `skip`.
        auto build_profile(const CCumulative & c, const DomainStore & store, int skip)
            -> std::vector<ProfilePart>
        {
            std::vector<std::pair<Value, Value>> events;  // (time, +/-height)
            for (size_t i = 0; i < c.origins.size(); ++i)
            {
                if (static_cast<int>(i) == skip || c.lengths[i] == 0 || c.heights[i] == 0)
                    continue;
                Value ms = store.max(c.origins[i]);
                Value me = store.min(c.origins[i]) + c.lengths[i];
                if (ms < me)
                {
                    events.push_back({ms, c.heights[i]});
                    events.push_back({me, -c.heights[i]});
                }
            }
            std::sort(events.begin(), events.end());
            std::vector<ProfilePart> parts;
            Value height = 0;
            size_t k = 0;
            while (k < events.size())
            {
                Value t = events[k].first;
                while (k < events.size() && events[k].first == t)
                {
                    height += events[k].second;
                    ++k;
                }
                if (! parts.empty())
                    parts.back().end = t;
                if (height > 0)
                    parts.push_back({t, t, height});
            }
            return parts;
        }

        auto prop_cumulative(const CCumulative & c, DomainStore & store, Pruner & p) -> void
        {
            Value cap_hi = vov_hi(c.limit, store);
            Value cap = c.cmp == Cmp::Le ? cap_hi : cap_hi - 1;
            auto full = build_profile(c, store, -1);
            Value peak = 0;
            for (const auto & part : full)
                peak = std::max(peak, part.height);
            // The limit must cover at least the mandatory peak.
            vov_tighten(c.limit, p, c.cmp == Cmp::Le ? peak : peak + 1, INF);
            if (p.failed())
                return;
            for (size_t i = 0; i < c.origins.size() && ! p.failed(); ++i)
            {
                if (c.lengths[i] == 0 || c.heights[i] == 0)
                    continue;
                auto profile = build_profile(c, store, static_cast<int>(i));
                Value h = c.heights[i], len = c.lengths[i];
                // Push the earliest start right past conflicting parts.
                Value t = store.min(c.origins[i]);
                for (size_t guard = 0; guard <= profile.size(); ++guard)
                {
                    bool moved = false;
                    for (const auto & part : profile)
                        if (part.height + h > cap && part.start < t + len && t < part.end)
                        {
                            t = part.end;
                            moved = true;
                        }
                    if (! moved)
                        break;
                }
                if (! p.tighten_lo(c.origins[i], t))
                    return;
                // And the latest start left.
                Value u = store.max(c.origins[i]);
                for (size_t guard = 0; guard <= profile.size(); ++guard)
                {
                    bool moved = false;
                    for (size_t k = profile.size(); k-- > 0;)
                    {
                        const auto & part = profile[k];
                        if (part.height + h > cap && part.start < u + len && u < part.end)
                        {
                            u = part.start - len;
                            moved = true;
                        }
                    }
                    if (! moved)
                        break;
                }
                if (! p.tighten_hi(c.origins[i], u))
                    return;
            }
        }

        auto prop_binpacking(const CBinPacking & c, DomainStore & store, Pruner & p) -> void
        {
            Value bins = c.bins;
            for (int v : c.scope)
                if (! p.tighten(v, 0, bins - 1))
                    return;
            std::vector<Value> min_load(static_cast<size_t>(bins), 0);
            std::vector<Value> max_load(static_cast<size_t>(bins), 0);
            Value total = 0;
            for (size_t i = 0; i < c.scope.size(); ++i)
            {
                total += c.sizes[i];
                if (store.fixed(c.scope[i]))
                    min_load[static_cast<size_t>(store.value(c.scope[i]))] += c.sizes[i];
                for (Value b : store.values(c.scope[i]))
                    max_load[static_cast<size_t>(b)] += c.sizes[i];
            }
            auto bin_cap = [&](size_t b) -> Value
            {
                return c.limit ? vov_hi(*c.limit, store) : vov_hi(c.loads[b], store);
            };
            __int128 reachable = 0, committed = 0;
            for (Value b = 0; b < bins; ++b)
            {
                size_t bi = static_cast<size_t>(b);
                if (min_load[bi] > bin_cap(bi))
                {
                    p.fail();
                    return;
                }
                reachable += std::min(max_load[bi], bin_cap(bi));
                if (! c.limit)
                {
                    vov_tighten(c.loads[bi], p, min_load[bi], max_load[bi]);
                    if (p.failed())
                        return;
                    committed += vov_lo(c.loads[bi], store);
                }
            }
            if (reachable < total || (! c.limit && committed > total))
            {
                p.fail();
                return;
            }
            if (c.limit)
            {
                Value peak = 0;
                for (Value l : min_load)
                    peak = std::max(peak, l);
                vov_tighten(*c.limit, p, peak, INF);
                if (p.failed())
                    return;
            }
            for (size_t i = 0; i < c.scope.size(); ++i)
            {
                if (store.fixed(c.scope[i]))
                    continue;
                for (Value b : store.values(c.scope[i]))
                    if (min_load[static_cast<size_t>(b)] + c.sizes[i] >
                        bin_cap(static_cast<size_t>(b)) &&
                        ! p.remove(c.scope[i], b))
                        return;
            }
        }

        auto prop_knapsack(const CKnapsack & c, DomainStore & store, Pruner & p) -> void
        {
            std::vector<Term> wterms, pterms;
            for (size_t i = 0; i < c.scope.size(); ++i)
            {
                wterms.push_back({c.weights[i], c.scope[i]});
                pterms.push_back({c.profits[i], c.scope[i]});
            }
            Value wrhs = 0;
            if (c.weight_limit.is_var)
                wterms.push_back({-1, c.weight_limit.var()});
            else
                wrhs = c.weight_limit.value;
            prop_linear(wterms, Cmp::Le, wrhs, store, p);
            if (p.failed())
                return;
            Value prhs = 0;
            if (c.profit_rhs.is_var)
                pterms.push_back({-1, c.profit_rhs.var()});
            else
                prhs = c.profit_rhs.value;
            prop_linear(pterms, c.profit_cmp, prhs, store, p);
        }

        auto prop_circuit(const CCircuit & c, DomainStore & store, Pruner & p) -> void
        {
            int n = static_cast<int>(c.scope.size());
            for (size_t i = 0; i < c.scope.size(); ++i)
            {
                if (! p.tighten(c.scope[i], 0, n - 1))
                    return;
                // No satisfying assignment keeps a self-loop when n >= 2.
                if (n >= 2 && ! p.remove(c.scope[i], static_cast<Value>(i)))
                    return;
            }
            if (n < 2)
                return;
            CAllDifferent ad{c.scope, std::nullopt};
            prop_alldifferent(ad, store, p);
            if (p.failed())
                return;
            // Walk fixed chains; closing a short cycle is a failure, and the
            // endpoint of a short open chain must not loop back to its start.
            for (int i = 0; i < n; ++i)
            {
                int cur = i, steps = 0;
                while (steps < n && store.fixed(c.scope[static_cast<size_t>(cur)]))
                {
                    cur = static_cast<int>(store.value(c.scope[static_cast<size_t>(cur)]));
                    ++steps;
                    if (cur == i)
                        break;
                }
                if (cur == i && steps > 0 && steps < n)
                {
                    p.fail();
                    return;
                }
                if (cur != i && steps > 0 && steps < n - 1)
                {
                    if (! p.remove(c.scope[static_cast<size_t>(cur)], static_cast<Value>(i)))
                        return;
                }
            }
        }

        auto prop_instantiation(const CInstantiation & c, DomainStore &, Pruner & p) -> void
        {
            for (size_t i = 0; i < c.scope.size(); ++i)
                if (! p.assign(c.scope[i], c.values[i]))
                    return;
        }
    }

    auto propagate_one(const Constraint & c, DomainStore & store, int cid) -> PropagationResult
    {
        store.take_touched();  // propagate_one owns the touched buffer
        auto scope = constraint_scope(c);

        // Completeness floor: a fully instantiated scope defers to the checker.
        bool all_fixed = true;
        for (int v : scope)
            if (! store.fixed(v))
            {
                all_fixed = false;
                break;
            }
        if (all_fixed)
        {
            Assignment a(static_cast<size_t>(store.n_vars()), 0);
            for (int v : scope)
                a[static_cast<size_t>(v)] = store.value(v);
            if (check_constraint(c, a))
                return PropagationResult::fixpoint();
            return PropagationResult::inconsistent(cid);
        }

        Pruner p(store);
        std::vector<int> nested_touched;  // from slide windows, which recurse
        std::visit([&](const auto & f)
        {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, CIntension>) prop_intension(f, scope, store, p);
            else if constexpr (std::is_same_v<T, CExtension>)
            {
                if (f.supports)
                    prop_extension_supports(f, store, p);
                else
                    prop_extension_conflicts(f, store, p);
            }
            else if constexpr (std::is_same_v<T, CRegular>) prop_regular(f, store, p);
            else if constexpr (std::is_same_v<T, CMdd>) prop_mdd(f, store, p);
            else if constexpr (std::is_same_v<T, CAllDifferent>) prop_alldifferent(f, store, p);
            else if constexpr (std::is_same_v<T, CAllDifferentList>) prop_alldifferent_list(f, store, p);
            else if constexpr (std::is_same_v<T, CAllEqual>) prop_allequal(f, store, p);
            else if constexpr (std::is_same_v<T, COrdered>) prop_ordered(f, store, p);
            else if constexpr (std::is_same_v<T, CLex>) prop_lex(f, store, p);
            else if constexpr (std::is_same_v<T, CPrecedence>) prop_precedence(f, store, p);
            else if constexpr (std::is_same_v<T, CSum>) prop_sum(f, store, p);
            else if constexpr (std::is_same_v<T, CCount>) prop_count(f, store, p);
            else if constexpr (std::is_same_v<T, CNValues>) prop_nvalues(f, store, p);
            else if constexpr (std::is_same_v<T, CCardinality>) prop_cardinality(f, store, p);
            else if constexpr (std::is_same_v<T, CMaximum>)
                prop_extremum(f.scope, true, f.cmp, f.rhs, store, p);
            else if constexpr (std::is_same_v<T, CMinimum>)
                prop_extremum(f.scope, false, f.cmp, f.rhs, store, p);
            else if constexpr (std::is_same_v<T, CElement>) prop_element(f, store, p);
            else if constexpr (std::is_same_v<T, CChannel>) prop_channel(f, store, p);
            else if constexpr (std::is_same_v<T, CNoOverlap>) prop_nooverlap(f, store, p);
            else if constexpr (std::is_same_v<T, CCumulative>) prop_cumulative(f, store, p);
            else if constexpr (std::is_same_v<T, CBinPacking>) prop_binpacking(f, store, p);
            else if constexpr (std::is_same_v<T, CKnapsack>) prop_knapsack(f, store, p);
            else if constexpr (std::is_same_v<T, CCircuit>) prop_circuit(f, store, p);
            else if constexpr (std::is_same_v<T, CInstantiation>) prop_instantiation(f, store, p);
            else if constexpr (std::is_same_v<T, CSlide>)
            {
                for (const auto & w : slide_windows(f))
                {
                    auto r = propagate_one(w, store, cid);
                    if (r.kind == PropagationResult::Kind::Inconsistent)
                    {
                        p.fail();
                        break;
                    }
                    nested_touched.insert(nested_touched.end(), r.touched.begin(),
                        r.touched.end());
                }
            }
        }, c.form);

        auto touched = store.take_touched();
        touched.insert(touched.end(), nested_touched.begin(), nested_touched.end());
        std::sort(touched.begin(), touched.end());
        touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
        if (p.failed())
            return PropagationResult::inconsistent(cid);
        if (touched.empty())
            return PropagationResult::fixpoint();
        return PropagationResult::changed(std::move(touched));
    }

    auto fixpoint(const std::vector<Constraint> & constraints, DomainStore & store,
        std::vector<int> dirty) -> PropagationResult
    {
        // var -> constraints watching it
        std::vector<std::vector<int>> watchers(static_cast<size_t>(store.n_vars()));
        for (size_t i = 0; i < constraints.size(); ++i)
            for (int v : constraint_scope(constraints[i]))
                watchers[static_cast<size_t>(v)].push_back(static_cast<int>(i));

        std::deque<int> queue;
        std::vector<char> in_queue(constraints.size(), 0);
        auto enqueue = [&](int cid)
        {
            if (! in_queue[static_cast<size_t>(cid)])
            {
                in_queue[static_cast<size_t>(cid)] = 1;
                queue.push_back(cid);
            }
        };
        if (dirty.empty())
            for (size_t i = 0; i < constraints.size(); ++i)
                enqueue(static_cast<int>(i));
        else
            for (int cid : dirty)
                enqueue(cid);

        std::vector<int> all_touched;
        while (! queue.empty())
        {
            int cid = queue.front();
            queue.pop_front();
            in_queue[static_cast<size_t>(cid)] = 0;
            auto r = propagate_one(constraints[static_cast<size_t>(cid)], store, cid);
            if (r.kind == PropagationResult::Kind::Inconsistent)
                return r;
            for (int v : r.touched)
            {
                all_touched.push_back(v);
                for (int w : watchers[static_cast<size_t>(v)])
                    enqueue(w);
            }
        }
        std::sort(all_touched.begin(), all_touched.end());
        all_touched.erase(std::unique(all_touched.begin(), all_touched.end()), all_touched.end());
        auto out = PropagationResult::fixpoint();
        out.touched = std::move(all_touched);
        return out;
    }

    auto propagator_strength_report() -> std::vector<StrengthEntry>
    {
        return {
            {"intension", "adaptive (interval reasoning + small-scope shaving; exact when instantiated)"},
            {"extension", "generalized arc consistency"},
            {"regular", "generalized arc consistency"},
            {"mdd", "generalized arc consistency"},
            {"allDifferent", "singleton elimination + pigeonhole bound"},
            {"allDifferentList", "pairwise near-equality filtering"},
            {"allEqual", "generalized arc consistency"},
            {"ordered", "bounds consistency"},
            {"lex", "prefix bounds filtering"},
            {"precedence", "first-occurrence filtering"},
            {"sum", "bounds consistency"},
            {"count", "bounds consistency"},
            {"nValues", "bounds consistency"},
            {"cardinality", "bounds consistency"},
            {"maximum", "bounds consistency"},
            {"minimum", "bounds consistency"},
            {"element", "generalized arc consistency"},
            {"channel", "generalized arc consistency"},
            {"noOverlap", "pairwise interval reasoning"},
            {"cumulative", "time-table filtering"},
            {"binPacking", "bounds consistency"},
            {"knapsack", "bounds consistency"},
            {"circuit", "self-loop and subcycle elimination with pairwise distinctness"},
            {"instantiation", "generalized arc consistency"},
            {"slide", "window expansion"},
        };
    }
}
