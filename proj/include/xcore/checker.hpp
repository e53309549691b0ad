// The solution checker: total yes/no semantics for every constraint form,
// independent of the propagation machinery.
#pragma once

#include <xcore/instance.hpp>

#include <optional>
#include <vector>

namespace xcore
{
    // True iff the (total) assignment satisfies the constraint. Never throws
    // on domain values: an evaluation error inside an intension (division by
    // zero on the taken branch) counts as violated.
    auto check_constraint(const Constraint & c, const Assignment & a) -> bool;

    struct Verdict
    {
        bool ok = false;
        std::vector<int> violated;        // constraint ids, ascending
        std::vector<int> out_of_domain;   // var ids whose value left the domain
        std::optional<Value> objective;   // evaluated whenever present and evaluable
    };

    // Assignment must cover every variable (size == n_vars), otherwise a
    // BuildError is thrown: a partial assignment is a structural error, not a
    // violation.
    auto check_instance(const Instance & inst, const Assignment & a) -> Verdict;

    auto objective_value(const Objective & o, const Assignment & a) -> Value;
}
