// Per-form propagators and the fixpoint loop.
//
// Contract: a propagator never removes a value that appears in some
// satisfying assignment built from the current domains (soundness), and on a
// fully instantiated scope it reports Inconsistent exactly when the checker
// rejects the assignment (the completeness floor).
#pragma once

#include <xcore/checker.hpp>
#include <xcore/domain_store.hpp>
#include <xcore/instance.hpp>

#include <string>
#include <vector>

namespace xcore
{
    struct PropagationResult
    {
        enum class Kind { Fixpoint, Changed, Inconsistent };
        Kind kind = Kind::Fixpoint;
        std::vector<int> touched;     // vars pruned (Changed only)
        int failed_constraint = -1;   // Inconsistent only

        static auto fixpoint() -> PropagationResult { return {}; }
        static auto changed(std::vector<int> touched) -> PropagationResult;
        static auto inconsistent(int cid) -> PropagationResult;
    };

    // Runs one constraint to its local fixpoint against the store. cid is
    // echoed into Inconsistent results.
    auto propagate_one(const Constraint & c, DomainStore & store, int cid = -1)
        -> PropagationResult;

    // FIFO constraint queue with a dirty set. `dirty` seeds the queue (empty
    // means all). Returns Fixpoint (touched = everything pruned overall) or
    // Inconsistent.
    auto fixpoint(const std::vector<Constraint> & constraints, DomainStore & store,
        std::vector<int> dirty = {}) -> PropagationResult;

    struct StrengthEntry
    {
        std::string form;
        std::string strength;
    };

    // Declared consistency level per form, for documentation and tests.
    auto propagator_strength_report() -> std::vector<StrengthEntry>;
}
