#pragma once

#include <xcore/propagate.hpp>

#include <optional>

namespace xcore
{
    // Non-positive values disable the corresponding limit.
    struct Limits
    {
        double cpu_seconds = 2400.0;
        double wall_seconds = 7200.0;
        long long max_nodes = 0;
    };

    enum class Heuristic
    {
        DomMin,   // smallest domain, ties by var id; smallest value
        DomWdeg,  // domain size over failure-weighted degree
        Rand,     // uniform var and value draws from a seeded generator
    };

    struct SearchOptions
    {
        Heuristic heuristic = Heuristic::DomMin;
        unsigned long long seed = 0;
        bool luby_restarts = false;
        long long luby_scale = 64;  // failures per unit restart budget
    };

    enum class Status
    {
        Sat,
        Unsat,
        Optimum,
        Best,     // solution found, optimality not proved
        Unknown,  // limit hit before any conclusion
    };

    auto status_name(Status s) -> const char *;

    struct BoundEvent
    {
        long long nodes = 0;
        double wall_seconds = 0.0;
        Value bound = 0;
    };

    struct SearchStats
    {
        long long nodes = 0;
        long long failures = 0;
        long long propagations = 0;
        long long solutions = 0;
        long long restarts = 0;
        long long max_depth = 0;
    };

    struct SolveResult
    {
        Status status = Status::Unknown;
        std::optional<Assignment> assignment;
        std::optional<Value> bound;     // objective of `assignment` when present
        std::vector<BoundEvent> bound_log;
        SearchStats stats;
    };

    // Every assignment these return has passed check_instance.
    auto solve_decision(const Instance & inst, const SearchOptions & opts = {},
        const Limits & limits = {}) -> SolveResult;
    auto solve_optimize(const Instance & inst, const SearchOptions & opts = {},
        const Limits & limits = {}) -> SolveResult;

    // Dispatches on the presence of an objective.
    auto solve(const Instance & inst, const SearchOptions & opts = {},
        const Limits & limits = {}) -> SolveResult;

    struct EnumerationResult
    {
        std::vector<Assignment> solutions;
        bool complete = false;
        SearchStats stats;
    };

    // All solutions of a decision instance, up to max_solutions (0 = all).
    // Restart options are ignored here; the traversal must stay exhaustive.
    auto solve_all(const Instance & inst, long long max_solutions = 0,
        const SearchOptions & opts = {}, const Limits & limits = {}) -> EnumerationResult;
}
