#include <xcore/search.hpp>

#include <xcore/checker.hpp>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <deque>
#include <numeric>
#include <random>
#include <stdexcept>

namespace xcore
{
    auto status_name(Status s) -> const char *
    {
        switch (s)
        {
        case Status::Sat: return "SAT";
        case Status::Unsat: return "UNSAT";
        case Status::Optimum: return "OPT";
        case Status::Best: return "BEST";
        case Status::Unknown: return "UNKNOWN";
        }
        return "UNKNOWN";
    }

    namespace
    {
        // Vacuous strict bound that no toolkit objective can reach.
        constexpr Value BOUND_SENTINEL = Value{1} << 60;

        auto luby(long long i) -> long long
        {
            long long k = 1;
            while ((1LL << k) - 1 < i)
                ++k;
            if ((1LL << k) - 1 == i)
                return 1LL << (k - 1);
            return luby(i - (1LL << (k - 1)) + 1);
        }

        enum class Walk
        {
            Exhausted,  // subtree fully explored
            Stop,       // found what the caller asked for
            Abort,      // a limit fired
            Restart,    // failure budget exceeded
        };

        class Engine
        {
        public:
            enum class Mode { Decision, Optimize, Enumerate };

            Engine(const Instance & inst, Mode mode, const SearchOptions & opts,
                const Limits & limits, long long max_solutions) :
                inst_(inst),
                mode_(mode),
                opts_(opts),
                limits_(limits),
                max_solutions_(max_solutions),
                store_(inst),
                rng_(opts.seed)
            {
                for (const auto & pc : inst.constraints)
                    constraints_.push_back(pc.constraint);
                if (mode_ == Mode::Optimize)
                {
                    if (! inst.objective)
                        throw BuildError("optimization requested on an instance without an objective");
                    minimize_ = inst.objective->sense == Sense::Minimize;
                    bound_cid_ = static_cast<int>(constraints_.size());
                    constraints_.push_back(
                        bound_constraint(minimize_ ? BOUND_SENTINEL : -BOUND_SENTINEL));
                }
                watchers_.resize(static_cast<size_t>(store_.n_vars()));
                for (size_t i = 0; i < constraints_.size(); ++i)
                    for (int v : constraint_scope(constraints_[i]))
                        watchers_[static_cast<size_t>(v)].push_back(static_cast<int>(i));
                weights_.assign(constraints_.size(), 1.0);
            }

            auto run() -> SolveResult
            {
                Walk w = drive();
                SolveResult r;
                r.stats = stats_;
                r.bound_log = bound_log_;
                bool aborted = w == Walk::Abort;
                if (mode_ == Mode::Decision)
                {
                    if (w == Walk::Stop)
                    {
                        r.status = Status::Sat;
                        r.assignment = best_;
                    }
                    else
                        r.status = aborted ? Status::Unknown : Status::Unsat;
                }
                else
                {
                    if (best_bound_)
                    {
                        r.status = aborted ? Status::Best : Status::Optimum;
                        r.assignment = best_;
                        r.bound = best_bound_;
                    }
                    else
                        r.status = aborted ? Status::Unknown : Status::Unsat;
                }
                return r;
            }

            auto run_enumerate() -> EnumerationResult
            {
                Walk w = drive();
                EnumerationResult r;
                r.solutions = std::move(solutions_);
                r.complete = w == Walk::Exhausted;
                r.stats = stats_;
                return r;
            }

        private:
            auto drive() -> Walk
            {
                cpu_start_ = std::clock();
                wall_start_ = std::chrono::steady_clock::now();
                bool restarts = opts_.luby_restarts && mode_ != Mode::Enumerate;
                while (true)
                {
                    std::vector<int> all(constraints_.size());
                    std::iota(all.begin(), all.end(), 0);
                    Walk w = dfs(all, 0);
                    if (restarts && w == Walk::Restart)
                    {
                        ++stats_.restarts;
                        ++restart_index_;
                        failures_at_restart_ = stats_.failures;
                        continue;
                    }
                    return w;
                }
            }

            auto wall_elapsed() const -> double
            {
                return std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - wall_start_).count();
            }

            auto within_limits() const -> bool
            {
                if (limits_.max_nodes > 0 && stats_.nodes >= limits_.max_nodes)
                    return false;
                if (limits_.cpu_seconds > 0 &&
                    static_cast<double>(std::clock() - cpu_start_) / CLOCKS_PER_SEC >=
                        limits_.cpu_seconds)
                    return false;
                if (limits_.wall_seconds > 0 && wall_elapsed() >= limits_.wall_seconds)
                    return false;
                return true;
            }

            auto restart_due() const -> bool
            {
                if (! opts_.luby_restarts || mode_ == Mode::Enumerate)
                    return false;
                long long budget = luby(restart_index_ + 1) * std::max<long long>(opts_.luby_scale, 1);
                return stats_.failures - failures_at_restart_ >= budget;
            }

            auto bound_constraint(Value strict_bound) const -> Constraint
            {
                const auto & o = *inst_.objective;
                if (o.kind == ObjectiveKind::Var || o.kind == ObjectiveKind::Sum)
                {
                    CSum s;
                    if (o.kind == ObjectiveKind::Var)
                    {
                        s.scope = {o.var};
                        s.coeffs = {1};
                    }
                    else
                    {
                        s.scope = o.scope;
                        s.coeffs = o.coeffs;
                    }
                    s.cmp = minimize_ ? Cmp::Le : Cmp::Ge;
                    s.rhs = ValOrVar::of_value(minimize_ ? strict_bound - 1 : strict_bound + 1);
                    return Constraint{s};
                }
                Expr obj = o.as_expr();
                Expr cut = minimize_ ? ex_lt(obj, ex_lit(strict_bound))
                                     : ex_gt(obj, ex_lit(strict_bound));
                return Constraint{CIntension{std::move(cut)}};
            }

            auto propagate(const std::vector<int> & dirty) -> bool
            {
                std::deque<int> queue;
                std::vector<char> in_queue(constraints_.size(), 0);
                auto enqueue = [&](int cid)
                {
                    if (! in_queue[static_cast<size_t>(cid)])
                    {
                        in_queue[static_cast<size_t>(cid)] = 1;
                        queue.push_back(cid);
                    }
                };
                for (int cid : dirty)
                    enqueue(cid);
                if (bound_dirty_)
                {
                    enqueue(bound_cid_);
                    bound_dirty_ = false;
                }
                while (! queue.empty())
                {
                    int cid = queue.front();
                    queue.pop_front();
                    in_queue[static_cast<size_t>(cid)] = 0;
                    ++stats_.propagations;
                    auto r = propagate_one(constraints_[static_cast<size_t>(cid)], store_, cid);
                    if (r.kind == PropagationResult::Kind::Inconsistent)
                    {
                        ++stats_.failures;
                        weights_[static_cast<size_t>(cid)] += 1.0;
                        return false;
                    }
                    for (int v : r.touched)
                        for (int w : watchers_[static_cast<size_t>(v)])
                            enqueue(w);
                }
                return true;
            }

            auto pick_var() -> int
            {
                if (opts_.heuristic == Heuristic::Rand)
                {
                    std::vector<int> open;
                    for (int v = 0; v < store_.n_vars(); ++v)
                        if (! store_.fixed(v))
                            open.push_back(v);
                    std::uniform_int_distribution<size_t> d(0, open.size() - 1);
                    return open[d(rng_)];
                }
                int best = -1;
                double best_score = 0.0;
                for (int v = 0; v < store_.n_vars(); ++v)
                {
                    if (store_.fixed(v))
                        continue;
                    double score = static_cast<double>(store_.size(v));
                    if (opts_.heuristic == Heuristic::DomWdeg)
                    {
                        double wdeg = 0.0;
                        for (int cid : watchers_[static_cast<size_t>(v)])
                            wdeg += weights_[static_cast<size_t>(cid)];
                        score /= std::max(wdeg, 1.0);
                    }
                    if (best < 0 || score < best_score)
                    {
                        best = v;
                        best_score = score;
                    }
                }
                return best;
            }

            auto pick_value(int var) -> Value
            {
                if (opts_.heuristic == Heuristic::Rand)
                {
                    auto vals = store_.values(var);
                    std::uniform_int_distribution<size_t> d(0, vals.size() - 1);
                    return vals[d(rng_)];
                }
                return store_.min(var);
            }

            auto emit() -> Walk
            {
                Assignment a = store_.assignment();
                auto verdict = check_instance(inst_, a);
                if (! verdict.ok)
                    throw std::logic_error("solver emitted an assignment that fails checking");
                ++stats_.solutions;
                if (mode_ == Mode::Decision)
                {
                    best_ = a;
                    return Walk::Stop;
                }
                if (mode_ == Mode::Enumerate)
                {
                    solutions_.push_back(std::move(a));
                    if (max_solutions_ > 0 &&
                        static_cast<long long>(solutions_.size()) >= max_solutions_)
                        return Walk::Stop;
                    return Walk::Exhausted;
                }
                if (! verdict.objective)
                    throw std::logic_error("objective undefined on an emitted solution");
                Value z = *verdict.objective;
                if (best_bound_ && ! (minimize_ ? z < *best_bound_ : z > *best_bound_))
                    throw std::logic_error("bound constraint admitted a non-improving solution");
                best_ = std::move(a);
                best_bound_ = z;
                bound_log_.push_back({stats_.nodes, wall_elapsed(), z});
                constraints_[static_cast<size_t>(bound_cid_)] = bound_constraint(z);
                bound_dirty_ = true;
                return Walk::Exhausted;
            }

            auto dfs(const std::vector<int> & dirty, long long depth) -> Walk
            {
                if (! within_limits())
                    return Walk::Abort;
                ++stats_.nodes;
                stats_.max_depth = std::max(stats_.max_depth, depth);
                if (! propagate(dirty))
                    return Walk::Exhausted;
                if (store_.all_fixed())
                    return emit();

                int var = pick_var();
                Value val = pick_value(var);
                const auto & seed = watchers_[static_cast<size_t>(var)];

                store_.push_level();
                store_.assign(var, val);
                Walk w = dfs(seed, depth + 1);
                store_.undo_level();
                if (w != Walk::Exhausted)
                    return w;
                if (restart_due())
                    return Walk::Restart;

                store_.push_level();
                store_.remove(var, val);
                w = dfs(seed, depth + 1);
                store_.undo_level();
                if (w != Walk::Exhausted)
                    return w;
                if (restart_due())
                    return Walk::Restart;
                return Walk::Exhausted;
            }

            const Instance & inst_;
            Mode mode_;
            SearchOptions opts_;
            Limits limits_;
            long long max_solutions_;
            DomainStore store_;
            std::mt19937_64 rng_;

            std::vector<Constraint> constraints_;
            std::vector<std::vector<int>> watchers_;
            std::vector<double> weights_;

            bool minimize_ = true;
            int bound_cid_ = -1;
            bool bound_dirty_ = false;

            std::optional<Assignment> best_;
            std::optional<Value> best_bound_;
            std::vector<BoundEvent> bound_log_;
            std::vector<Assignment> solutions_;

            SearchStats stats_;
            long long restart_index_ = 0;
            long long failures_at_restart_ = 0;
            std::clock_t cpu_start_ = 0;
            std::chrono::steady_clock::time_point wall_start_;
        };
    }

    auto solve_decision(const Instance & inst, const SearchOptions & opts, const Limits & limits)
        -> SolveResult
    {
        Engine e(inst, Engine::Mode::Decision, opts, limits, 0);
        return e.run();
    }

    auto solve_optimize(const Instance & inst, const SearchOptions & opts, const Limits & limits)
        -> SolveResult
    {
        Engine e(inst, Engine::Mode::Optimize, opts, limits, 0);
        return e.run();
    }

    auto solve(const Instance & inst, const SearchOptions & opts, const Limits & limits)
        -> SolveResult
    {
        return inst.objective ? solve_optimize(inst, opts, limits)
                              : solve_decision(inst, opts, limits);
    }

    auto solve_all(const Instance & inst, long long max_solutions, const SearchOptions & opts,
        const Limits & limits) -> EnumerationResult
    {
        if (inst.objective)
            throw BuildError("solution enumeration expects a decision instance");
        Engine e(inst, Engine::Mode::Enumerate, opts, limits, max_solutions);
        return e.run_enumerate();
    }
}
