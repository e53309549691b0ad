#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "xcore/instance.hpp"

namespace xcore
{
    // Instance documents use the "xcore-json/1" format:
    //   {
    //     "format": "xcore-json/1",
    //     "name": "...",
    //     "metadata": {"key": "value", ...},
    //     "variables": [{"name": "x[0]", "domain": [1, [3, 6], 9]}, ...],
    //     "constraints": [{"type": "sum", "scope": [...], ...,
    //                      "tag": "symmetry-breaking"?}, ...],
    //     "objective": {"sense": "minimize", "kind": "sum", ...}?
    //   }
    // Domains list values and inclusive [lo, hi] runs. Expressions are
    // s-expression arrays ["eq", ["add", "x[0]", 1], 3]; strings are variable
    // names, numbers are literals, and ["in", e, [v...]] tests set membership.
    // Extension tuples write the wildcard as "*". Inside a slide window,
    // variables are the positional references "%0", "%1", ...
    //
    // Constant-or-variable fields (sum right-hand sides, element lists,
    // cumulative limits, ...) are a bare integer or {"var": "name"}.

    struct ParseError : std::runtime_error
    {
        std::string path;  // JSON pointer to the offending node
        ParseError(const std::string & msg, std::string path);
    };

    struct ParseOptions
    {
        bool strict = true;  // strict: unknown fields are errors; lax: warnings
    };

    struct ParseResult
    {
        Instance instance;
        std::vector<std::string> warnings;  // lax-mode ignored fields
    };

    auto parse_instance(const std::string & text, const ParseOptions & opts = {}) -> ParseResult;

    // Canonical form: sorted keys, fixed member layout, 2-space indent,
    // trailing newline. Structurally equal instances serialize byte-equal,
    // and parse_instance(write_instance(i)) reproduces i.
    auto write_instance(const Instance & inst) -> std::string;

    // Solution documents ("xcore-solution/1"): instance name, a name->value
    // assignment map, and the objective value when present.
    struct SolutionDoc
    {
        std::string instance;
        std::map<std::string, Value> assignment;
        std::optional<Value> objective;
    };

    auto write_solution(const Instance & inst, const Assignment & a,
        std::optional<Value> objective = {}) -> std::string;
    auto parse_solution(const std::string & text, const ParseOptions & opts = {}) -> SolutionDoc;

    // Resolves the document's name map against the instance variables; each
    // variable must be assigned exactly once.
    auto solution_assignment(const Instance & inst, const SolutionDoc & doc) -> Assignment;
}
