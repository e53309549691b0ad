#include <xcore/instance.hpp>

#include <algorithm>
#include <set>

namespace xcore
{
    Domain::Domain(std::vector<Value> values) :
        values_(std::move(values))
    {
        std::sort(values_.begin(), values_.end());
        values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
        for (Value v : values_)
            if (v == STAR)
                throw BuildError("domain contains the reserved wildcard value");
    }

    auto Domain::range(Value lo, Value hi) -> Domain
    {
        std::vector<Value> values;
        for (Value v = lo; v <= hi; ++v)
            values.push_back(v);
        return Domain(std::move(values));
    }

    auto Domain::contains(Value v) const -> bool
    {
        return std::binary_search(values_.begin(), values_.end(), v);
    }

    auto Domain::index_of(Value v) const -> int
    {
        auto it = std::lower_bound(values_.begin(), values_.end(), v);
        if (it == values_.end() || *it != v)
            return -1;
        return static_cast<int>(it - values_.begin());
    }

    auto Objective::of_var(Sense s, int var) -> Objective
    {
        Objective o;
        o.sense = s;
        o.kind = ObjectiveKind::Var;
        o.var = var;
        return o;
    }

    auto Objective::of_sum(Sense s, std::vector<int> scope, std::vector<Value> coeffs) -> Objective
    {
        if (scope.size() != coeffs.size())
            throw BuildError("objective: coefficient count != scope size");
        Objective o;
        o.sense = s;
        o.kind = ObjectiveKind::Sum;
        o.scope = std::move(scope);
        o.coeffs = std::move(coeffs);
        return o;
    }

    auto Objective::of_max(Sense s, std::vector<Expr> exprs) -> Objective
    {
        if (exprs.empty())
            throw BuildError("objective: empty expression list");
        Objective o;
        o.sense = s;
        o.kind = ObjectiveKind::Max;
        o.exprs = std::move(exprs);
        return o;
    }

    auto Objective::of_min(Sense s, std::vector<Expr> exprs) -> Objective
    {
        Objective o = of_max(s, std::move(exprs));
        o.kind = ObjectiveKind::Min;
        return o;
    }

    auto Objective::of_expr(Sense s, Expr expr) -> Objective
    {
        Objective o;
        o.sense = s;
        o.kind = ObjectiveKind::Expr;
        o.expr = std::move(expr);
        return o;
    }

    auto Objective::as_expr() const -> Expr
    {
        switch (kind)
        {
        case ObjectiveKind::Var:
            return ex_var(var);
        case ObjectiveKind::Sum:
        {
            std::vector<Expr> terms;
            for (size_t i = 0; i < scope.size(); ++i)
                terms.push_back(coeffs[i] == 1 ? ex_var(scope[i]) : ex_lit(coeffs[i]) * ex_var(scope[i]));
            if (terms.empty())
                return ex_lit(0);
            return ex_sum(std::move(terms));
        }
        case ObjectiveKind::Max:
            return ex_max(exprs);
        case ObjectiveKind::Min:
            return ex_min(exprs);
        case ObjectiveKind::Expr:
            return *expr;
        }
        throw BuildError("unreachable objective kind");
    }

    auto Instance::var_index(const std::string & name) const -> int
    {
        for (size_t i = 0; i < variables.size(); ++i)
            if (variables[i].name == name)
                return static_cast<int>(i);
        return -1;
    }

    InstanceBuilder::InstanceBuilder(std::string name)
    {
        inst_.name = std::move(name);
    }

    auto InstanceBuilder::add_var(const std::string & name, Domain domain) -> int
    {
        if (domain.empty())
            throw BuildError("variable " + name + " has an empty domain");
        if (! index_.emplace(name, inst_.n_vars()).second)
            throw BuildError("duplicate variable name " + name);
        inst_.variables.push_back({name, std::move(domain)});
        return inst_.n_vars() - 1;
    }

    auto InstanceBuilder::post(Constraint c, std::string tag) -> void
    {
        inst_.constraints.push_back({std::move(c), std::move(tag)});
    }

    auto InstanceBuilder::post(ConstraintForm form, std::string tag) -> void
    {
        post(Constraint{std::move(form)}, std::move(tag));
    }

    auto InstanceBuilder::set_objective(Objective o) -> void
    {
        inst_.objective = std::move(o);
    }

    auto InstanceBuilder::set_meta(const std::string & key, const std::string & value) -> void
    {
        inst_.metadata[key] = value;
    }

    auto InstanceBuilder::build() -> Instance
    {
        validate_instance(inst_);
        return std::move(inst_);
    }

    auto validate_instance(const Instance & inst) -> void
    {
        std::set<std::string> names;
        for (const auto & v : inst.variables)
        {
            if (v.domain.empty())
                throw BuildError("variable " + v.name + " has an empty domain");
            if (! names.insert(v.name).second)
                throw BuildError("duplicate variable name " + v.name);
        }
        for (size_t i = 0; i < inst.constraints.size(); ++i)
        {
            try
            {
                validate_constraint(inst.constraints[i].constraint, inst.n_vars());
            }
            catch (const BuildError & e)
            {
                throw BuildError("constraint " + std::to_string(i) + ": " + e.what());
            }
        }
        if (inst.objective)
        {
            const auto & o = *inst.objective;
            switch (o.kind)
            {
            case ObjectiveKind::Var:
                if (o.var < 0 || o.var >= inst.n_vars())
                    throw BuildError("objective var id out of range");
                break;
            case ObjectiveKind::Sum:
                if (o.scope.size() != o.coeffs.size())
                    throw BuildError("objective: coefficient count != scope size");
                for (int v : o.scope)
                    if (v < 0 || v >= inst.n_vars())
                        throw BuildError("objective var id out of range");
                break;
            case ObjectiveKind::Max:
            case ObjectiveKind::Min:
            case ObjectiveKind::Expr:
                for (int v : expr_vars(o.as_expr()))
                    if (v < 0 || v >= inst.n_vars())
                        throw BuildError("objective var id out of range");
                if (infer_type(o.as_expr()) != ExprType::Int)
                    throw BuildError("objective expression must be integer-valued");
                break;
            }
        }
    }

    auto strip_tagged(const Instance & inst, const std::string & tag) -> Instance
    {
        Instance out = inst;
        out.constraints.clear();
        for (const auto & pc : inst.constraints)
            if (pc.tag != tag)
                out.constraints.push_back(pc);
        return out;
    }
}
