#include <xcore/expr.hpp>

#include <algorithm>
#include <utility>

namespace xcore
{
    namespace
    {
        auto op_name(ExprOp op) -> const char *
        {
            switch (op)
            {
            case ExprOp::Const: return "const";
            case ExprOp::VarRef: return "var";
            case ExprOp::Add: return "add";
            case ExprOp::Sub: return "sub";
            case ExprOp::Mul: return "mul";
            case ExprOp::FloorDiv: return "div";
            case ExprOp::Mod: return "mod";
            case ExprOp::Abs: return "abs";
            case ExprOp::Dist: return "dist";
            case ExprOp::Min: return "min";
            case ExprOp::Max: return "max";
            case ExprOp::Lt: return "lt";
            case ExprOp::Le: return "le";
            case ExprOp::Eq: return "eq";
            case ExprOp::Ne: return "ne";
            case ExprOp::Ge: return "ge";
            case ExprOp::Gt: return "gt";
            case ExprOp::And: return "and";
            case ExprOp::Or: return "or";
            case ExprOp::Not: return "not";
            case ExprOp::Iff: return "iff";
            case ExprOp::Imp: return "imp";
            case ExprOp::Ift: return "ift";
            case ExprOp::InSet: return "in";
            }
            return "?";
        }

        auto arity_ok(ExprOp op, size_t n) -> bool
        {
            switch (op)
            {
            case ExprOp::Const:
            case ExprOp::VarRef: return n == 0;
            case ExprOp::Abs:
            case ExprOp::Not:
            case ExprOp::InSet: return n == 1;
            case ExprOp::Sub:
            case ExprOp::FloorDiv:
            case ExprOp::Mod:
            case ExprOp::Dist:
            case ExprOp::Lt:
            case ExprOp::Le:
            case ExprOp::Eq:
            case ExprOp::Ne:
            case ExprOp::Ge:
            case ExprOp::Gt:
            case ExprOp::Iff:
            case ExprOp::Imp: return n == 2;
            case ExprOp::Ift: return n == 3;
            case ExprOp::Add:
            case ExprOp::Mul:
            case ExprOp::Min:
            case ExprOp::Max:
            case ExprOp::And:
            case ExprOp::Or: return n >= 1;
            }
            return false;
        }
    }

    EvalError::EvalError(std::string msg, std::string sub) :
        std::runtime_error(msg + ": " + sub),
        subexpr(std::move(sub))
    {
    }

    BuildError::BuildError(const std::string & msg) :
        std::runtime_error(msg)
    {
    }

    auto Expr::lit(Value v) -> Expr
    {
        Expr e;
        e.op = ExprOp::Const;
        e.value = v;
        return e;
    }

    auto Expr::var_ref(int var) -> Expr
    {
        Expr e;
        e.op = ExprOp::VarRef;
        e.var = var;
        return e;
    }

    auto Expr::nary(ExprOp op, std::vector<Expr> kids) -> Expr
    {
        if (! arity_ok(op, kids.size()))
            throw BuildError(std::string{"bad arity for "} + op_name(op));
        Expr e;
        e.op = op;
        e.kids = std::move(kids);
        return e;
    }

    auto Expr::binary(ExprOp op, Expr a, Expr b) -> Expr
    {
        std::vector<Expr> kids;
        kids.push_back(std::move(a));
        kids.push_back(std::move(b));
        return nary(op, std::move(kids));
    }

    auto Expr::unary(ExprOp op, Expr a) -> Expr
    {
        std::vector<Expr> kids;
        kids.push_back(std::move(a));
        return nary(op, std::move(kids));
    }

    auto Expr::ift(Expr cond, Expr a, Expr b) -> Expr
    {
        std::vector<Expr> kids;
        kids.push_back(std::move(cond));
        kids.push_back(std::move(a));
        kids.push_back(std::move(b));
        return nary(ExprOp::Ift, std::move(kids));
    }

    auto Expr::in_set(Expr a, std::vector<Value> values) -> Expr
    {
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        Expr e = unary(ExprOp::InSet, std::move(a));
        e.set_values = std::move(values);
        return e;
    }

    auto operator+(Expr a, Expr b) -> Expr { return Expr::binary(ExprOp::Add, std::move(a), std::move(b)); }
    auto operator-(Expr a, Expr b) -> Expr { return Expr::binary(ExprOp::Sub, std::move(a), std::move(b)); }
    auto operator*(Expr a, Expr b) -> Expr { return Expr::binary(ExprOp::Mul, std::move(a), std::move(b)); }
    auto ex_lit(Value v) -> Expr { return Expr::lit(v); }
    auto ex_var(int v) -> Expr { return Expr::var_ref(v); }
    auto ex_sum(std::vector<Expr> terms) -> Expr { return Expr::nary(ExprOp::Add, std::move(terms)); }
    auto ex_div(Expr a, Expr b) -> Expr { return Expr::binary(ExprOp::FloorDiv, std::move(a), std::move(b)); }
    auto ex_mod(Expr a, Expr b) -> Expr { return Expr::binary(ExprOp::Mod, std::move(a), std::move(b)); }
    auto ex_abs(Expr a) -> Expr { return Expr::unary(ExprOp::Abs, std::move(a)); }
    auto ex_dist(Expr a, Expr b) -> Expr { return Expr::binary(ExprOp::Dist, std::move(a), std::move(b)); }
    auto ex_min(std::vector<Expr> terms) -> Expr { return Expr::nary(ExprOp::Min, std::move(terms)); }
    auto ex_max(std::vector<Expr> terms) -> Expr { return Expr::nary(ExprOp::Max, std::move(terms)); }
    auto ex_lt(Expr a, Expr b) -> Expr { return Expr::binary(ExprOp::Lt, std::move(a), std::move(b)); }
    auto ex_le(Expr a, Expr b) -> Expr { return Expr::binary(ExprOp::Le, std::move(a), std::move(b)); }
    auto ex_eq(Expr a, Expr b) -> Expr { return Expr::binary(ExprOp::Eq, std::move(a), std::move(b)); }
    auto ex_ne(Expr a, Expr b) -> Expr { return Expr::binary(ExprOp::Ne, std::move(a), std::move(b)); }
    auto ex_ge(Expr a, Expr b) -> Expr { return Expr::binary(ExprOp::Ge, std::move(a), std::move(b)); }
    auto ex_gt(Expr a, Expr b) -> Expr { return Expr::binary(ExprOp::Gt, std::move(a), std::move(b)); }
    auto ex_and(std::vector<Expr> terms) -> Expr { return Expr::nary(ExprOp::And, std::move(terms)); }
    auto ex_or(std::vector<Expr> terms) -> Expr { return Expr::nary(ExprOp::Or, std::move(terms)); }
    auto ex_not(Expr a) -> Expr { return Expr::unary(ExprOp::Not, std::move(a)); }
    auto ex_iff(Expr a, Expr b) -> Expr { return Expr::binary(ExprOp::Iff, std::move(a), std::move(b)); }
    auto ex_imp(Expr a, Expr b) -> Expr { return Expr::binary(ExprOp::Imp, std::move(a), std::move(b)); }
    auto ex_ift(Expr cond, Expr a, Expr b) -> Expr { return Expr::ift(std::move(cond), std::move(a), std::move(b)); }
    auto ex_in(Expr a, std::vector<Value> values) -> Expr { return Expr::in_set(std::move(a), std::move(values)); }

    auto floor_div(Value a, Value b) -> Value
    {
        Value q = a / b;
        if ((a % b != 0) && ((a < 0) != (b < 0)))
            --q;
        return q;
    }

    auto floor_mod(Value a, Value b) -> Value
    {
        return a - floor_div(a, b) * b;
    }

    auto eval_expr(const Expr & e, const std::vector<Value> & a) -> Value
    {
        switch (e.op)
        {
        case ExprOp::Const:
            return e.value;
        case ExprOp::VarRef:
            return a.at(static_cast<size_t>(e.var));
        case ExprOp::Add:
        {
            Value s = 0;
            for (const auto & k : e.kids)
                s += eval_expr(k, a);
            return s;
        }
        case ExprOp::Sub:
            return eval_expr(e.kids[0], a) - eval_expr(e.kids[1], a);
        case ExprOp::Mul:
        {
            Value p = 1;
            for (const auto & k : e.kids)
                p *= eval_expr(k, a);
            return p;
        }
        case ExprOp::FloorDiv:
        {
            Value d = eval_expr(e.kids[1], a);
            if (d == 0)
                throw EvalError("division by zero", to_string(e));
            return floor_div(eval_expr(e.kids[0], a), d);
        }
        case ExprOp::Mod:
        {
            Value d = eval_expr(e.kids[1], a);
            if (d == 0)
                throw EvalError("modulo by zero", to_string(e));
            return floor_mod(eval_expr(e.kids[0], a), d);
        }
        case ExprOp::Abs:
        {
            Value v = eval_expr(e.kids[0], a);
            return v < 0 ? -v : v;
        }
        case ExprOp::Dist:
        {
            Value v = eval_expr(e.kids[0], a) - eval_expr(e.kids[1], a);
            return v < 0 ? -v : v;
        }
        case ExprOp::Min:
        {
            Value m = eval_expr(e.kids[0], a);
            for (size_t i = 1; i < e.kids.size(); ++i)
                m = std::min(m, eval_expr(e.kids[i], a));
            return m;
        }
        case ExprOp::Max:
        {
            Value m = eval_expr(e.kids[0], a);
            for (size_t i = 1; i < e.kids.size(); ++i)
                m = std::max(m, eval_expr(e.kids[i], a));
            return m;
        }
        case ExprOp::Lt: return eval_expr(e.kids[0], a) < eval_expr(e.kids[1], a) ? 1 : 0;
        case ExprOp::Le: return eval_expr(e.kids[0], a) <= eval_expr(e.kids[1], a) ? 1 : 0;
        case ExprOp::Eq: return eval_expr(e.kids[0], a) == eval_expr(e.kids[1], a) ? 1 : 0;
        case ExprOp::Ne: return eval_expr(e.kids[0], a) != eval_expr(e.kids[1], a) ? 1 : 0;
        case ExprOp::Ge: return eval_expr(e.kids[0], a) >= eval_expr(e.kids[1], a) ? 1 : 0;
        case ExprOp::Gt: return eval_expr(e.kids[0], a) > eval_expr(e.kids[1], a) ? 1 : 0;
        case ExprOp::And:
            for (const auto & k : e.kids)
                if (eval_expr(k, a) == 0)
                    return 0;
            return 1;
        case ExprOp::Or:
            for (const auto & k : e.kids)
                if (eval_expr(k, a) != 0)
                    return 1;
            return 0;
        case ExprOp::Not:
            return eval_expr(e.kids[0], a) == 0 ? 1 : 0;
        case ExprOp::Iff:
            return (eval_expr(e.kids[0], a) != 0) == (eval_expr(e.kids[1], a) != 0) ? 1 : 0;
        case ExprOp::Imp:
            return eval_expr(e.kids[0], a) == 0 ? 1 : (eval_expr(e.kids[1], a) != 0 ? 1 : 0);
        case ExprOp::Ift:
            return eval_expr(e.kids[0], a) != 0 ? eval_expr(e.kids[1], a) : eval_expr(e.kids[2], a);
        case ExprOp::InSet:
            return std::binary_search(e.set_values.begin(), e.set_values.end(), eval_expr(e.kids[0], a)) ? 1 : 0;
        }
        throw BuildError("unreachable expr op");
    }

    auto infer_type(const Expr & e) -> ExprType
    {
        auto require = [&](const Expr & k, ExprType want)
        {
            ExprType got = infer_type(k);
            // Bool narrows to Int (0/1), never the other way around.
            if (want == ExprType::Bool && got != ExprType::Bool)
                throw BuildError("expected boolean operand in " + to_string(e));
        };
        switch (e.op)
        {
        case ExprOp::Const:
        case ExprOp::VarRef:
            return ExprType::Int;
        case ExprOp::Add:
        case ExprOp::Sub:
        case ExprOp::Mul:
        case ExprOp::FloorDiv:
        case ExprOp::Mod:
        case ExprOp::Abs:
        case ExprOp::Dist:
        case ExprOp::Min:
        case ExprOp::Max:
            for (const auto & k : e.kids)
                require(k, ExprType::Int);
            return ExprType::Int;
        case ExprOp::Lt:
        case ExprOp::Le:
        case ExprOp::Eq:
        case ExprOp::Ne:
        case ExprOp::Ge:
        case ExprOp::Gt:
            require(e.kids[0], ExprType::Int);
            require(e.kids[1], ExprType::Int);
            return ExprType::Bool;
        case ExprOp::And:
        case ExprOp::Or:
            for (const auto & k : e.kids)
                require(k, ExprType::Bool);
            return ExprType::Bool;
        case ExprOp::Not:
        case ExprOp::Iff:
        case ExprOp::Imp:
            for (const auto & k : e.kids)
                require(k, ExprType::Bool);
            return ExprType::Bool;
        case ExprOp::Ift:
            require(e.kids[0], ExprType::Bool);
            require(e.kids[1], ExprType::Int);
            require(e.kids[2], ExprType::Int);
            return ExprType::Int;
        case ExprOp::InSet:
            require(e.kids[0], ExprType::Int);
            return ExprType::Bool;
        }
        throw BuildError("unreachable expr op");
    }

    namespace
    {
        auto collect_vars(const Expr & e, std::vector<int> & out) -> void
        {
            if (e.op == ExprOp::VarRef)
                out.push_back(e.var);
            for (const auto & k : e.kids)
                collect_vars(k, out);
        }
    }

    auto expr_vars(const Expr & e) -> std::vector<int>
    {
        std::vector<int> out;
        collect_vars(e, out);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    auto to_string(const Expr & e) -> std::string
    {
        switch (e.op)
        {
        case ExprOp::Const:
            return std::to_string(e.value);
        case ExprOp::VarRef:
            return "x" + std::to_string(e.var);
        default:
        {
            std::string s = "(";
            s += op_name(e.op);
            for (const auto & k : e.kids)
                s += " " + to_string(k);
            if (e.op == ExprOp::InSet)
            {
                s += " {";
                for (size_t i = 0; i < e.set_values.size(); ++i)
                    s += (i ? "," : "") + std::to_string(e.set_values[i]);
                s += "}";
            }
            s += ")";
            return s;
        }
        }
    }
}
