#include <xcore/scoring.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace xcore
{
    namespace
    {
        using nlohmann::json;

        auto lower(std::string s) -> std::string
        {
            for (auto & c : s)
                c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            return s;
        }

        auto track_is_cop(const std::string & track) -> bool
        {
            return lower(track).find("cop") != std::string::npos;
        }

        auto track_is_mini(const std::string & track) -> bool
        {
            return lower(track).find("mini") != std::string::npos;
        }

        // Strictly better under the instance's sense.
        auto dominates(Sense sense, Value a, Value b) -> bool
        {
            return sense == Sense::Minimize ? a < b : a > b;
        }

        struct InstanceRuns
        {
            std::string instance;
            Sense sense = Sense::Minimize;
            std::vector<const RunRecord *> runs;
        };

        auto group_checked(const std::vector<RunRecord> & runs, bool cop) -> InstanceRuns
        {
            InstanceRuns g;
            if (runs.empty())
                return g;
            g.instance = runs[0].instance;
            g.sense = runs[0].sense;
            std::set<std::string> seen;
            for (const auto & r : runs)
            {
                validate_run(r);
                if (r.instance != g.instance)
                    throw BuildError("scoring: mixed instances in one group ("
                        + g.instance + " vs " + r.instance + ")");
                if (cop && r.sense != g.sense)
                    throw BuildError("scoring: mixed objective senses for " + g.instance);
                if (!seen.insert(r.solver).second)
                    throw BuildError("scoring: duplicate run of solver " + r.solver
                        + " on " + g.instance);
                if (cop && r.status == RunStatus::Sat)
                    throw BuildError("scoring: SAT status is not a COP claim (solver "
                        + r.solver + ")");
                if (!cop && (r.status == RunStatus::Opt || r.status == RunStatus::Best))
                    throw BuildError("scoring: bound status in CSP scoring (solver "
                        + r.solver + ")");
                g.runs.push_back(&r);
            }
            return g;
        }
    }

    auto run_status_name(RunStatus s) -> const char *
    {
        switch (s)
        {
            case RunStatus::Sat: return "SAT";
            case RunStatus::Unsat: return "UNSAT";
            case RunStatus::Opt: return "OPT";
            case RunStatus::Best: return "BEST";
            case RunStatus::Unknown: return "UNKNOWN";
        }
        return "UNKNOWN";
    }

    auto parse_run_status(const std::string & name) -> RunStatus
    {
        if (name == "SAT") return RunStatus::Sat;
        if (name == "UNSAT") return RunStatus::Unsat;
        if (name == "OPT") return RunStatus::Opt;
        if (name == "BEST") return RunStatus::Best;
        if (name == "UNKNOWN") return RunStatus::Unknown;
        throw BuildError("unknown run status: " + name);
    }

    auto validate_run(const RunRecord & r) -> void
    {
        bool needs_bound = r.status == RunStatus::Opt || r.status == RunStatus::Best;
        if (needs_bound && !r.bound)
            throw BuildError("run of " + r.solver + " on " + r.instance + ": "
                + run_status_name(r.status) + " requires a bound");
        if (!needs_bound && r.bound)
            throw BuildError("run of " + r.solver + " on " + r.instance + ": "
                + run_status_name(r.status) + " forbids a bound");
    }

    ScoringError::ScoringError(const std::string & msg) : std::runtime_error(msg) {}

    auto score_csp(const std::vector<RunRecord> & runs,
        const std::optional<InstanceTruth> & truth) -> ScoreOutcome
    {
        auto g = group_checked(runs, false);
        ScoreOutcome out;
        for (const auto * r : g.runs)
            out.points[r->solver] = 0.0;

        auto disqualify = [&](const RunRecord & r, const std::string & why)
        {
            out.disqualified.insert(r.solver);
            out.flags.push_back(r.solver + " on " + r.instance + ": " + why);
        };

        std::vector<const RunRecord *> live;
        for (const auto * r : g.runs)
        {
            if (truth && truth->satisfiable)
            {
                if (*truth->satisfiable && r->status == RunStatus::Unsat)
                {
                    disqualify(*r, "claimed UNSAT on a satisfiable instance");
                    continue;
                }
                if (!*truth->satisfiable && r->status == RunStatus::Sat)
                {
                    disqualify(*r, "claimed SAT on an unsatisfiable instance");
                    continue;
                }
            }
            live.push_back(r);
        }

        bool any_sat = std::any_of(live.begin(), live.end(),
            [](const RunRecord * r) { return r->status == RunStatus::Sat; });
        bool any_unsat = std::any_of(live.begin(), live.end(),
            [](const RunRecord * r) { return r->status == RunStatus::Unsat; });
        if (any_sat && any_unsat)
            throw ScoringError("contradictory SAT and UNSAT claims on " + g.instance
                + " with no ground truth to arbitrate");

        for (const auto * r : live)
            if (r->status == RunStatus::Sat || r->status == RunStatus::Unsat)
                out.points[r->solver] = 1.0;
        return out;
    }

    auto score_cop(const std::vector<RunRecord> & runs,
        const std::optional<InstanceTruth> & truth) -> ScoreOutcome
    {
        auto g = group_checked(runs, true);
        ScoreOutcome out;
        for (const auto * r : g.runs)
            out.points[r->solver] = 0.0;

        auto disqualify = [&](const RunRecord & r, const std::string & why)
        {
            out.disqualified.insert(r.solver);
            out.flags.push_back(r.solver + " on " + r.instance + ": " + why);
        };

        // Ground-truth arbitration first: contradicted claims drop out.
        std::vector<const RunRecord *> live;
        for (const auto * r : g.runs)
        {
            bool dropped = false;
            if (truth)
            {
                bool known_sat = truth->satisfiable.value_or(truth->optimum.has_value());
                if (truth->satisfiable && !*truth->satisfiable && r->bound)
                {
                    disqualify(*r, "claimed a bound on an unsatisfiable instance");
                    dropped = true;
                }
                else if (known_sat && r->status == RunStatus::Unsat)
                {
                    disqualify(*r, "claimed UNSAT on a satisfiable instance");
                    dropped = true;
                }
                else if (truth->optimum && r->status == RunStatus::Opt && *r->bound != *truth->optimum)
                {
                    disqualify(*r, "claimed a wrong optimum");
                    dropped = true;
                }
                else if (truth->optimum && r->bound && dominates(g.sense, *r->bound, *truth->optimum))
                {
                    disqualify(*r, "claimed a bound better than the known optimum");
                    dropped = true;
                }
            }
            if (!dropped)
                live.push_back(r);
        }

        bool any_unsat = std::any_of(live.begin(), live.end(),
            [](const RunRecord * r) { return r->status == RunStatus::Unsat; });
        bool any_bound = std::any_of(live.begin(), live.end(),
            [](const RunRecord * r) { return r->bound.has_value(); });
        if (any_unsat && any_bound)
            throw ScoringError("contradictory UNSAT and bound claims on " + g.instance
                + " with no ground truth to arbitrate");

        if (any_unsat)
        {
            for (const auto * r : live)
                if (r->status == RunStatus::Unsat)
                    out.points[r->solver] = 1.0;
            return out;
        }

        // An OPT claim beaten by any strictly better bound is a false proof.
        std::vector<const RunRecord *> holders;
        for (const auto * r : live)
        {
            if (r->status != RunStatus::Opt)
                continue;
            bool contradicted = std::any_of(live.begin(), live.end(), [&](const RunRecord * o)
            {
                return o->bound && dominates(g.sense, *o->bound, *r->bound);
            });
            if (contradicted)
                disqualify(*r, "claimed optimum contradicted by a better bound");
        }
        for (const auto * r : live)
            if (!out.disqualified.count(r->solver) && r->bound)
                holders.push_back(r);

        if (holders.empty())
            return out;

        Value best = (*holders.begin())->bound.value();
        for (const auto * r : holders)
            if (dominates(g.sense, *r->bound, best))
                best = *r->bound;
        bool proved = std::any_of(holders.begin(), holders.end(), [&](const RunRecord * r)
        {
            return r->status == RunStatus::Opt && *r->bound == best;
        });

        for (const auto * r : holders)
        {
            if (*r->bound != best)
                continue;  // strictly dominated: 0
            if (r->status == RunStatus::Opt)
                out.points[r->solver] = 1.0;
            else
                out.points[r->solver] = proved ? 0.5 : 1.0;
        }
        return out;
    }

    auto score_track(const std::vector<RunRecord> & runs,
        const std::map<std::string, InstanceTruth> & truths) -> ScoreTable
    {
        ScoreTable table;
        if (runs.empty())
            return table;

        const std::string & track = runs[0].track;
        for (const auto & r : runs)
            if (r.track != track)
                throw BuildError("scoring: mixed tracks in one table ("
                    + track + " vs " + r.track + ")");
        bool cop = track_is_cop(track);

        std::map<std::string, std::vector<RunRecord>> by_instance;
        std::set<std::string> solvers;
        for (const auto & r : runs)
        {
            by_instance[r.instance].push_back(r);
            solvers.insert(r.solver);
        }

        table.solvers.assign(solvers.begin(), solvers.end());
        for (const auto & [instance, group] : by_instance)
        {
            table.instances.push_back(instance);
            std::optional<InstanceTruth> truth;
            if (auto it = truths.find(instance); it != truths.end())
                truth = it->second;
            auto outcome = cop ? score_cop(group, truth) : score_csp(group, truth);
            for (const auto & [solver, pts] : outcome.points)
                table.cells[solver][instance] = pts;
            table.flags.insert(table.flags.end(), outcome.flags.begin(), outcome.flags.end());
            table.disqualified.insert(outcome.disqualified.begin(), outcome.disqualified.end());
        }

        for (const auto & solver : table.solvers)
        {
            double total = 0.0;
            for (const auto & [instance, pts] : table.cells[solver])
                total += pts;
            table.totals[solver] = total;
        }
        return table;
    }

    auto rank_solvers(const std::string & track, const std::map<std::string, double> & totals,
        const std::map<std::string, SolverFlags> & flags) -> std::vector<RankedEntry>
    {
        auto flags_of = [&](const std::string & solver) -> SolverFlags
        {
            auto it = flags.find(solver);
            return it == flags.end() ? SolverFlags{} : it->second;
        };

        std::vector<std::string> alive;
        for (const auto & [solver, pts] : totals)
        {
            (void)pts;
            if (!flags_of(solver).off_competition)
                alive.push_back(solver);
        }

        if (track_is_mini(track))
        {
            std::vector<std::string> kept;
            for (const auto & solver : alive)
            {
                auto f = flags_of(solver);
                if (!f.main_rank)
                    throw BuildError("mini-track ranking requires the main-track rank of " + solver);
                if (*f.main_rank > 3)
                    kept.push_back(solver);
            }
            alive = std::move(kept);
        }

        // Within a variant group only the best-scoring member survives.
        std::map<std::string, std::string> group_team;
        std::map<std::string, std::string> group_best;
        for (const auto & solver : alive)
        {
            auto f = flags_of(solver);
            if (f.variant_group.empty())
                continue;
            auto [it, inserted] = group_team.emplace(f.variant_group, f.team);
            if (!inserted && it->second != f.team)
                throw BuildError("variant group " + f.variant_group + " spans two teams");
            auto & best = group_best[f.variant_group];
            if (best.empty() || totals.at(solver) > totals.at(best))
                best = solver;
        }
        std::vector<std::string> kept;
        for (const auto & solver : alive)
        {
            auto f = flags_of(solver);
            if (!f.variant_group.empty() && group_best[f.variant_group] != solver)
                continue;
            kept.push_back(solver);
        }

        std::sort(kept.begin(), kept.end(), [&](const std::string & a, const std::string & b)
        {
            if (totals.at(a) != totals.at(b))
                return totals.at(a) > totals.at(b);
            return a < b;
        });

        std::vector<RankedEntry> out;
        for (const auto & solver : kept)
        {
            RankedEntry e;
            e.solver = solver;
            e.points = totals.at(solver);
            e.rank = 1 + static_cast<int>(std::count_if(kept.begin(), kept.end(),
                [&](const std::string & o) { return totals.at(o) > e.points; }));
            e.medal = e.rank == 1 ? "gold" : e.rank == 2 ? "silver" : e.rank == 3 ? "bronze" : "";
            out.push_back(std::move(e));
        }
        return out;
    }

    auto parse_runs_jsonl(const std::string & text) -> std::vector<RunRecord>
    {
        std::vector<RunRecord> runs;
        std::istringstream in(text);
        std::string line;
        int line_no = 0;
        while (std::getline(in, line))
        {
            ++line_no;
            if (line.find_first_not_of(" \t\r") == std::string::npos)
                continue;
            json j;
            try
            {
                j = json::parse(line);
            }
            catch (const std::exception & e)
            {
                throw BuildError("runs line " + std::to_string(line_no) + ": " + e.what());
            }
            try
            {
                RunRecord r;
                r.solver = j.at("solver").get<std::string>();
                r.instance = j.at("instance").get<std::string>();
                r.track = j.at("track").get<std::string>();
                r.status = parse_run_status(j.at("status").get<std::string>());
                if (j.contains("bound") && !j.at("bound").is_null())
                    r.bound = j.at("bound").get<Value>();
                std::string sense = j.value("sense", "minimize");
                if (sense != "minimize" && sense != "maximize")
                    throw BuildError("runs line " + std::to_string(line_no)
                        + ": sense must be minimize or maximize");
                r.sense = sense == "minimize" ? Sense::Minimize : Sense::Maximize;
                r.elapsed = j.value("elapsed", 0.0);
                validate_run(r);
                runs.push_back(std::move(r));
            }
            catch (const json::exception & e)
            {
                throw BuildError("runs line " + std::to_string(line_no) + ": " + e.what());
            }
        }
        return runs;
    }

    auto write_runs_jsonl(const std::vector<RunRecord> & runs) -> std::string
    {
        std::string out;
        for (const auto & r : runs)
        {
            json j;
            j["solver"] = r.solver;
            j["instance"] = r.instance;
            j["track"] = r.track;
            j["status"] = run_status_name(r.status);
            if (r.bound)
                j["bound"] = *r.bound;
            j["sense"] = r.sense == Sense::Minimize ? "minimize" : "maximize";
            j["elapsed"] = r.elapsed;
            out += j.dump();
            out += '\n';
        }
        return out;
    }

    namespace
    {
        auto points_text(double p) -> std::string
        {
            if (p == std::floor(p))
                return std::to_string(static_cast<long long>(p));
            std::ostringstream s;
            s << p;
            return s.str();
        }
    }

    auto table_csv(const ScoreTable & t) -> std::string
    {
        std::string out = "solver";
        for (const auto & instance : t.instances)
            out += "," + instance;
        out += ",total\n";

        auto order = t.solvers;
        std::sort(order.begin(), order.end(), [&](const std::string & a, const std::string & b)
        {
            double ta = t.totals.count(a) ? t.totals.at(a) : 0.0;
            double tb = t.totals.count(b) ? t.totals.at(b) : 0.0;
            if (ta != tb)
                return ta > tb;
            return a < b;
        });
        for (const auto & solver : order)
        {
            out += solver;
            for (const auto & instance : t.instances)
            {
                auto row = t.cells.find(solver);
                double p = 0.0;
                if (row != t.cells.end())
                    if (auto cell = row->second.find(instance); cell != row->second.end())
                        p = cell->second;
                out += "," + points_text(p);
            }
            out += "," + points_text(t.totals.count(solver) ? t.totals.at(solver) : 0.0) + "\n";
        }
        return out;
    }

    auto table_json(const ScoreTable & t) -> std::string
    {
        json j;
        j["instances"] = t.instances;
        j["solvers"] = t.solvers;
        json cells = json::object();
        for (const auto & [solver, row] : t.cells)
        {
            json jrow = json::object();
            for (const auto & [instance, pts] : row)
                jrow[instance] = pts;
            cells[solver] = std::move(jrow);
        }
        j["cells"] = std::move(cells);
        json totals = json::object();
        for (const auto & [solver, pts] : t.totals)
            totals[solver] = pts;
        j["totals"] = std::move(totals);
        j["flags"] = t.flags;
        j["disqualified"] = std::vector<std::string>(t.disqualified.begin(), t.disqualified.end());
        return j.dump(2) + "\n";
    }
}
