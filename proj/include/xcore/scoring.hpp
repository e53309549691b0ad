#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "xcore/instance.hpp"

namespace xcore
{
    // One solver attempt on one instance within a track.
    enum class RunStatus { Sat, Unsat, Opt, Best, Unknown };

    auto run_status_name(RunStatus s) -> const char *;
    auto parse_run_status(const std::string & name) -> RunStatus;

    struct RunRecord
    {
        std::string solver;
        std::string instance;
        std::string track;           // e.g. "CSP", "COP", "MINI COP", "FAST COP"
        RunStatus status = RunStatus::Unknown;
        std::optional<Value> bound;  // objective value, OPT/BEST only
        Sense sense = Sense::Minimize;
        double elapsed = 0.0;        // seconds
    };

    // OPT and BEST require a bound; UNSAT and UNKNOWN forbid one.
    auto validate_run(const RunRecord & r) -> void;

    // Optional per-instance ground truth used to arbitrate contradictions.
    struct InstanceTruth
    {
        std::optional<bool> satisfiable;
        std::optional<Value> optimum;
    };

    // Contradictory claims with no ground truth to arbitrate them.
    struct ScoringError : std::runtime_error
    {
        explicit ScoringError(const std::string & msg);
    };

    struct ScoreOutcome
    {
        std::map<std::string, double> points;  // every input solver appears
        std::vector<std::string> flags;        // integrity findings
        std::set<std::string> disqualified;    // zeroed for this instance
    };

    // Decision track: one point for deciding the instance either way.
    // A SAT and an UNSAT claim on the same instance is an integrity error
    // unless ground truth disqualifies one side.
    auto score_csp(const std::vector<RunRecord> & runs,
        const std::optional<InstanceTruth> & truth = {}) -> ScoreOutcome;

    // Optimization track, in rule order: consistent UNSAT reports earn 1;
    // a strictly dominated bound earns 0; a proved optimum earns 1; the best
    // unproved bound earns 1 when nobody proved that bound optimal, 0.5
    // otherwise. An OPT claim contradicted by a strictly better bound is
    // disqualified, as is any claim contradicted by ground truth.
    auto score_cop(const std::vector<RunRecord> & runs,
        const std::optional<InstanceTruth> & truth = {}) -> ScoreOutcome;

    struct ScoreTable
    {
        std::vector<std::string> solvers;    // sorted by name
        std::vector<std::string> instances;  // sorted by name
        std::map<std::string, std::map<std::string, double>> cells;  // solver -> instance -> points
        std::map<std::string, double> totals;                        // row sums
        std::vector<std::string> flags;
        std::set<std::string> disqualified;
    };

    // Groups one track's runs by instance and applies the track scorer
    // (COP rules when the track name mentions COP, CSP rules otherwise).
    auto score_track(const std::vector<RunRecord> & runs,
        const std::map<std::string, InstanceTruth> & truths = {}) -> ScoreTable;

    struct SolverFlags
    {
        bool off_competition = false;
        std::optional<int> main_rank;  // rank in the corresponding main track
        std::string team;
        std::string variant_group;     // same-solver variations share a group and a team
    };

    struct RankedEntry
    {
        std::string solver;
        double points = 0.0;
        int rank = 0;          // 1-based; ties share a rank
        std::string medal;     // "gold", "silver", "bronze" or ""
    };

    // Competition ranking. Discards, in order: off-competition solvers;
    // in mini tracks, solvers ranked top-3 in the corresponding main track
    // (their main rank is then required input); all but the best variant
    // within each variant group. Survivors are sorted by points descending.
    auto rank_solvers(const std::string & track, const std::map<std::string, double> & totals,
        const std::map<std::string, SolverFlags> & flags) -> std::vector<RankedEntry>;

    // Line-delimited JSON run records:
    // {"solver","instance","track","status","bound"?,"sense","elapsed"}.
    auto parse_runs_jsonl(const std::string & text) -> std::vector<RunRecord>;
    auto write_runs_jsonl(const std::vector<RunRecord> & runs) -> std::string;

    auto table_csv(const ScoreTable & t) -> std::string;
    auto table_json(const ScoreTable & t) -> std::string;
}
