// Integer/boolean expression trees used by intension constraints and objectives.
// Booleans are the integers 0/1; division and modulo follow floor semantics
// (quotient rounded toward negative infinity, remainder sign follows divisor).
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace xcore
{
    using Value = long long;

    enum class ExprOp
    {
        Const,    // leaf: value
        VarRef,   // leaf: var
        Add,      // n-ary
        Sub,      // binary
        Mul,      // n-ary
        FloorDiv, // binary
        Mod,      // binary
        Abs,      // unary
        Dist,     // binary, |a - b|
        Min,      // n-ary
        Max,      // n-ary
        Lt, Le, Eq, Ne, Ge, Gt, // binary, result 0/1
        And, Or,  // n-ary over booleans
        Not,      // unary
        Iff, Imp, // binary over booleans
        Ift,      // ift(cond, a, b)
        InSet,    // kid[0] in values
    };

    struct Expr
    {
        ExprOp op = ExprOp::Const;
        Value value = 0;                // Const payload
        int var = -1;                   // VarRef payload
        std::vector<Expr> kids;
        std::vector<Value> set_values;  // InSet payload, kept sorted

        static auto lit(Value v) -> Expr;
        static auto var_ref(int var) -> Expr;
        static auto nary(ExprOp op, std::vector<Expr> kids) -> Expr;
        static auto binary(ExprOp op, Expr a, Expr b) -> Expr;
        static auto unary(ExprOp op, Expr a) -> Expr;
        static auto ift(Expr cond, Expr a, Expr b) -> Expr;
        static auto in_set(Expr a, std::vector<Value> values) -> Expr;
    };

    // Convenience builders; generators lean on these heavily.
    auto operator+(Expr a, Expr b) -> Expr;
    auto operator-(Expr a, Expr b) -> Expr;
    auto operator*(Expr a, Expr b) -> Expr;
    auto ex_lit(Value v) -> Expr;
    auto ex_var(int v) -> Expr;
    auto ex_sum(std::vector<Expr> terms) -> Expr;
    auto ex_div(Expr a, Expr b) -> Expr;
    auto ex_mod(Expr a, Expr b) -> Expr;
    auto ex_abs(Expr a) -> Expr;
    auto ex_dist(Expr a, Expr b) -> Expr;
    auto ex_min(std::vector<Expr> terms) -> Expr;
    auto ex_max(std::vector<Expr> terms) -> Expr;
    auto ex_lt(Expr a, Expr b) -> Expr;
    auto ex_le(Expr a, Expr b) -> Expr;
    auto ex_eq(Expr a, Expr b) -> Expr;
    auto ex_ne(Expr a, Expr b) -> Expr;
    auto ex_ge(Expr a, Expr b) -> Expr;
    auto ex_gt(Expr a, Expr b) -> Expr;
    auto ex_and(std::vector<Expr> terms) -> Expr;
    auto ex_or(std::vector<Expr> terms) -> Expr;
    auto ex_not(Expr a) -> Expr;
    auto ex_iff(Expr a, Expr b) -> Expr;
    auto ex_imp(Expr a, Expr b) -> Expr;
    auto ex_ift(Expr cond, Expr a, Expr b) -> Expr;
    auto ex_in(Expr a, std::vector<Value> values) -> Expr;

    // Raised when evaluation hits division or modulo by zero; message names
    // the offending subexpression.
    struct EvalError : std::runtime_error
    {
        std::string subexpr;
        EvalError(std::string msg, std::string subexpr);
    };

    // Raised on structurally invalid input (ill-typed expressions, malformed
    // constraints, bad generator parameters).
    struct BuildError : std::runtime_error
    {
        explicit BuildError(const std::string & msg);
    };

    auto floor_div(Value a, Value b) -> Value;  // b != 0
    auto floor_mod(Value a, Value b) -> Value;  // b != 0

    // Evaluates under a total assignment (indexed by var id). And/or/ift are
    // lazy, so errors under an untaken branch do not surface.
    auto eval_expr(const Expr & e, const std::vector<Value> & assignment) -> Value;

    enum class ExprType { Int, Bool };

    // Infers the type, enforcing: logic ops take Bool kids, comparisons and
    // arithmetic take Int kids (Bool narrows to Int as 0/1, not vice versa),
    // ift conditions are Bool. Throws BuildError with the subexpression text.
    auto infer_type(const Expr & e) -> ExprType;

    // Collects referenced var ids, sorted, deduplicated.
    auto expr_vars(const Expr & e) -> std::vector<int>;

    // Prefix s-expression rendering, e.g. (add x3 2).
    auto to_string(const Expr & e) -> std::string;
}
