// The constraint vocabulary: a tagged union over the global constraint forms,
// plus the automaton/MDD companions. Semantics live in checker.cpp, filtering
// in propagate.cpp.
#pragma once

#include <xcore/domain.hpp>
#include <xcore/expr.hpp>

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace xcore
{
    // Wildcard tuple component for starred extension tables. Deliberately
    // outside every representable domain; never a legal variable value.
    inline constexpr Value STAR = std::numeric_limits<Value>::min();

    enum class Cmp { Lt, Le, Eq, Ne, Ge, Gt };

    auto cmp_holds(Cmp cmp, Value a, Value b) -> bool;
    auto cmp_name(Cmp cmp) -> const char *;

    // Right-hand sides and element lists accept either a constant or a var id.
    struct ValOrVar
    {
        bool is_var = false;
        Value value = 0; // var id when is_var

        static auto of_value(Value v) -> ValOrVar { return {false, v}; }
        static auto of_var(int v) -> ValOrVar { return {true, v}; }
        auto var() const -> int { return static_cast<int>(value); }
    };

    struct Automaton
    {
        int start = 0;
        std::vector<int> finals;
        struct Transition { int from; Value symbol; int to; };
        std::vector<Transition> transitions;   // deterministic: (from, symbol) unique
    };

    struct MddTransition { int from; Value value; int to; };

    struct CIntension { Expr expr; };

    using Tuples = std::vector<std::vector<Value>>;

    struct CExtension
    {
        std::vector<int> scope;
        std::shared_ptr<const Tuples> tuples;  // shared so table reuse is cheap
        bool supports = true;                  // false: tuples are conflicts
        bool starred = false;                  // STAR components allowed
    };

    struct CRegular
    {
        std::vector<int> scope;
        Automaton automaton;
    };

    struct CMdd
    {
        std::vector<int> scope;
        int root = 0;
        int terminal = 1;
        std::vector<MddTransition> transitions;  // layered: validated at build
    };

    struct CAllDifferent
    {
        std::vector<int> scope;
        std::optional<Value> except;
    };

    struct CAllDifferentList { std::vector<std::vector<int>> lists; };

    struct CAllEqual { std::vector<int> scope; };

    struct COrdered
    {
        std::vector<int> scope;
        bool increasing = true;
        bool strict = false;
    };

    struct CLex
    {
        std::vector<std::vector<int>> lists;   // equal lengths
        bool increasing = true;
        bool strict = false;
    };

    struct CPrecedence
    {
        std::vector<int> scope;
        std::vector<Value> values;  // covered values, in precedence order
    };

    struct CSum
    {
        std::vector<int> scope;
        std::vector<Value> coeffs;
        Cmp cmp = Cmp::Eq;
        ValOrVar rhs;
    };

    struct CCount
    {
        std::vector<int> scope;
        std::vector<Value> values;  // sorted target set
        Cmp cmp = Cmp::Eq;
        ValOrVar rhs;
    };

    struct CNValues
    {
        std::vector<int> scope;
        Cmp cmp = Cmp::Eq;
        ValOrVar rhs;
    };

    struct CCardinality
    {
        std::vector<int> scope;
        std::vector<Value> values;
        std::vector<Value> occurs_lo;  // per value, inclusive
        std::vector<Value> occurs_hi;
    };

    struct CMaximum
    {
        std::vector<int> scope;
        Cmp cmp = Cmp::Eq;
        ValOrVar rhs;
    };

    struct CMinimum
    {
        std::vector<int> scope;
        Cmp cmp = Cmp::Eq;
        ValOrVar rhs;
    };

    struct CElement
    {
        std::vector<ValOrVar> list;
        int index = -1;      // 0-based into list
        ValOrVar value;      // list[index] == value
    };

    // Three shapes: self (list2 empty, no value), dual (list2 set), and
    // value-channel (0/1 list + value var). Dual lists of unequal length are
    // one-directional: list2[list1[i]] == i.
    struct CChannel
    {
        std::vector<int> list1;
        std::vector<int> list2;
        std::optional<int> value;
    };

    struct NoOverlapItem
    {
        std::vector<int> origins;     // one var per dimension
        std::vector<Value> lengths;   // per dimension, constant
    };

    struct CNoOverlap { std::vector<NoOverlapItem> items; };

    struct CCumulative
    {
        std::vector<int> origins;
        std::vector<Value> lengths;
        std::vector<Value> heights;
        Cmp cmp = Cmp::Le;            // Le or Lt against the profile peak
        ValOrVar limit;
    };

    // Per-bin load is either bounded by one shared limit or pinned to loads[b].
    struct CBinPacking
    {
        std::vector<int> scope;       // item -> bin index
        std::vector<Value> sizes;
        int bins = 0;                 // bins are 0..bins-1
        std::optional<ValOrVar> limit;
        std::vector<ValOrVar> loads;  // used when limit is absent; size == bins
    };

    struct CKnapsack
    {
        std::vector<int> scope;       // 0/1 or general quantity vars
        std::vector<Value> weights;
        ValOrVar weight_limit;        // sum(weights*x) <= weight_limit
        std::vector<Value> profits;
        Cmp profit_cmp = Cmp::Ge;
        ValOrVar profit_rhs;          // sum(profits*x) cmp profit_rhs
    };

    struct CCircuit { std::vector<int> scope; };

    struct CInstantiation
    {
        std::vector<int> scope;
        std::vector<Value> values;
    };

    struct Constraint;

    // Template window over local ids 0..window_arity-1, instantiated at each
    // offset step; checked and propagated by expansion.
    struct CSlide
    {
        std::vector<int> scope;
        int window_arity = 0;
        int offset = 1;
        bool circular = false;
        std::shared_ptr<const Constraint> window;
    };

    using ConstraintForm = std::variant<
        CIntension, CExtension, CRegular, CMdd,
        CAllDifferent, CAllDifferentList, CAllEqual,
        COrdered, CLex, CPrecedence,
        CSum, CCount, CNValues, CCardinality,
        CMaximum, CMinimum, CElement, CChannel,
        CNoOverlap, CCumulative, CBinPacking, CKnapsack,
        CCircuit, CInstantiation, CSlide>;

    struct Constraint
    {
        ConstraintForm form;
    };

    auto form_name(const Constraint & c) -> const char *;

    // All referenced var ids, sorted, deduplicated (includes rhs vars).
    auto constraint_scope(const Constraint & c) -> std::vector<int>;

    // Structural validation: array lengths agree, starred tuples only under
    // the starred flag, automaton deterministic, MDD layered, var ids within
    // [0, n_vars). Throws BuildError.
    auto validate_constraint(const Constraint & c, int n_vars) -> void;

    // Expands an AllDifferentList into one starred-table extension per list
    // pair; domains supply the per-position value candidates.
    auto alldifferent_list_as_tables(const CAllDifferentList & c,
        const std::vector<Variable> & vars) -> std::vector<Constraint>;

    // Expands a slide into its window instances (also used for checking).
    auto slide_windows(const CSlide & c) -> std::vector<Constraint>;
}
