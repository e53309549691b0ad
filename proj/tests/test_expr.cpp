#include <doctest.h>

#include <xcore/expr.hpp>

#include "oracle.hpp"

#include <optional>
#include <random>
#include <vector>

using namespace xcore;

namespace
{
    auto ev(const Expr & e, std::vector<Value> a = {}) -> Value
    {
        return eval_expr(e, a);
    }
}

TEST_CASE("floor division rounds toward negative infinity")
{
    CHECK(floor_div(13, 8) == 1);
    CHECK(floor_div(-13, 8) == -2);
    CHECK(floor_div(13, -8) == -2);
    CHECK(floor_div(-13, -8) == 1);
    CHECK(floor_div(-8, 4) == -2);
    CHECK(floor_div(0, 5) == 0);

    // remainder sign follows the divisor, and a == b*div + mod
    CHECK(floor_mod(13, 8) == 5);
    CHECK(floor_mod(-13, 8) == 3);
    CHECK(floor_mod(13, -8) == -3);
    CHECK(floor_mod(-13, -8) == -5);
    for (Value a = -9; a <= 9; ++a)
        for (Value b = -4; b <= 4; ++b)
        {
            if (b == 0)
                continue;
            CHECK(a == b * floor_div(a, b) + floor_mod(a, b));
            Value m = floor_mod(a, b);
            CHECK((b > 0 ? m >= 0 && m < b : m <= 0 && m > b));
        }
}

TEST_CASE("eval_expr basics")
{
    CHECK(ev(ex_ift(ex_lt(ex_lit(1), ex_lit(2)), ex_lit(10), ex_lit(20))) == 10);
    CHECK(ev(ex_dist(ex_lit(3), ex_lit(7))) == 4);
    CHECK(ev(ex_div(ex_lit(13), ex_lit(8))) == 1);
    CHECK(ev(ex_abs(ex_lit(-5))) == 5);
    CHECK(ev(ex_lit(2) - ex_lit(7)) == -5);
    CHECK(ev(ex_sum({ex_lit(1), ex_lit(2), ex_lit(3)})) == 6);
    CHECK(ev(ex_lit(3) * ex_lit(-4)) == -12);
    CHECK(ev(ex_min({ex_lit(4), ex_lit(-1), ex_lit(2)})) == -1);
    CHECK(ev(ex_max({ex_lit(4), ex_lit(-1), ex_lit(2)})) == 4);
    CHECK(ev(ex_mod(ex_lit(-13), ex_lit(8))) == 3);
    CHECK(ev(ex_var(1), {7, 9}) == 9);
}

TEST_CASE("comparisons and logic yield 0/1")
{
    CHECK(ev(ex_lt(ex_lit(2), ex_lit(2))) == 0);
    CHECK(ev(ex_le(ex_lit(2), ex_lit(2))) == 1);
    CHECK(ev(ex_eq(ex_lit(3), ex_lit(3))) == 1);
    CHECK(ev(ex_ne(ex_lit(3), ex_lit(3))) == 0);
    CHECK(ev(ex_ge(ex_lit(2), ex_lit(3))) == 0);
    CHECK(ev(ex_gt(ex_lit(4), ex_lit(3))) == 1);
    Expr t = ex_eq(ex_lit(1), ex_lit(1));
    Expr f = ex_eq(ex_lit(1), ex_lit(0));
    CHECK(ev(ex_and({t, f})) == 0);
    CHECK(ev(ex_or({f, t})) == 1);
    CHECK(ev(ex_not(f)) == 1);
    CHECK(ev(ex_iff(t, f)) == 0);
    CHECK(ev(ex_imp(f, f)) == 1);
    CHECK(ev(ex_imp(t, f)) == 0);
    CHECK(ev(ex_in(ex_lit(3), {1, 3, 5})) == 1);
    CHECK(ev(ex_in(ex_lit(2), {1, 3, 5})) == 0);
}

TEST_CASE("division or modulo by zero raises EvalError")
{
    CHECK_THROWS_AS(ev(ex_div(ex_lit(1), ex_lit(0))), EvalError);
    CHECK_THROWS_AS(ev(ex_mod(ex_lit(1), ex_lit(0))), EvalError);
    CHECK_THROWS_AS(ev(ex_div(ex_lit(1), ex_var(0)), {0}), EvalError);
    try
    {
        ev(ex_div(ex_lit(1), ex_lit(0)));
        CHECK(false);
    }
    catch (const EvalError & e)
    {
        CHECK(e.subexpr == "(div 1 0)");
    }
}

TEST_CASE("and/or/imp/ift are lazy")
{
    Expr boom = ex_eq(ex_div(ex_lit(1), ex_lit(0)), ex_lit(1));
    Expr t = ex_eq(ex_lit(1), ex_lit(1));
    Expr f = ex_eq(ex_lit(1), ex_lit(0));
    CHECK(ev(ex_and({f, boom})) == 0);
    CHECK(ev(ex_or({t, boom})) == 1);
    CHECK(ev(ex_imp(f, boom)) == 1);
    CHECK(ev(ex_ift(t, ex_lit(5), ex_div(ex_lit(1), ex_lit(0)))) == 5);
    CHECK(ev(ex_ift(f, ex_div(ex_lit(1), ex_lit(0)), ex_lit(6))) == 6);
    // errors in a taken operand still surface
    CHECK_THROWS_AS(ev(ex_and({t, boom})), EvalError);
}

TEST_CASE("infer_type enforces boolean positions")
{
    CHECK(infer_type(ex_lit(3)) == ExprType::Int);
    CHECK(infer_type(ex_var(0)) == ExprType::Int);
    CHECK(infer_type(ex_eq(ex_var(0), ex_lit(1))) == ExprType::Bool);
    // booleans narrow to int, so comparing comparisons is fine
    CHECK(infer_type(ex_eq(ex_eq(ex_var(0), ex_lit(1)), ex_lit(1))) == ExprType::Bool);
    CHECK(infer_type(ex_sum({ex_eq(ex_var(0), ex_lit(1)), ex_lit(2)})) == ExprType::Int);
    CHECK(infer_type(ex_ift(ex_lt(ex_var(0), ex_lit(2)), ex_lit(1), ex_lit(0))) == ExprType::Int);
    CHECK(infer_type(ex_in(ex_var(0), {1, 2})) == ExprType::Bool);
    // ints never widen to bool
    CHECK_THROWS_AS(infer_type(ex_not(ex_lit(1))), BuildError);
    CHECK_THROWS_AS(infer_type(ex_and({ex_var(0)})), BuildError);
    CHECK_THROWS_AS(infer_type(ex_ift(ex_lit(1), ex_lit(2), ex_lit(3))), BuildError);
    CHECK_THROWS_AS(infer_type(ex_imp(ex_var(0), ex_eq(ex_var(0), ex_lit(1)))), BuildError);
}

TEST_CASE("expr_vars is sorted and deduplicated")
{
    Expr e = ex_sum({ex_var(3), ex_var(1), ex_dist(ex_var(3), ex_lit(2))});
    CHECK(expr_vars(e) == std::vector<int>{1, 3});
    CHECK(expr_vars(ex_lit(5)).empty());
}

TEST_CASE("to_string renders prefix form")
{
    CHECK(to_string(ex_var(3) + ex_lit(2)) == "(add x3 2)");
    CHECK(to_string(ex_lit(-7)) == "-7");
    CHECK(to_string(ex_in(ex_var(0), {1, 2})) == "(in x0 {1,2})");
}

TEST_CASE("eval_expr agrees with the naive evaluator on random expressions")
{
    std::mt19937_64 rng(20230815);
    int error_cases = 0;
    for (int trial = 0; trial < 300; ++trial)
    {
        auto rc = oracle::random_case("intension", rng);
        const auto & expr = std::get<xcore::CIntension>(rc.constraint.form).expr;
        oracle::for_each_assignment(rc.vars, [&](const Assignment & a)
        {
            auto want = oracle::naive_eval(expr, a);
            std::optional<Value> got;
            try
            {
                got = eval_expr(expr, a);
            }
            catch (const EvalError &)
            {
            }
            CHECK(got == want);
            if (! want)
                ++error_cases;
        });
    }
    // the corpus must actually exercise the error path
    CHECK(error_cases > 0);
}
