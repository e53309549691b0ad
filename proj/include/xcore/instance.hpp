// Instances: variables + tagged constraints + optional objective + metadata.
#pragma once

#include <xcore/constraint.hpp>
#include <xcore/domain.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace xcore
{
    enum class Sense { Minimize, Maximize };

    enum class ObjectiveKind { Var, Sum, Max, Min, Expr };

    struct Objective
    {
        Sense sense = Sense::Minimize;
        ObjectiveKind kind = ObjectiveKind::Var;
        int var = -1;                  // Var
        std::vector<int> scope;        // Sum
        std::vector<Value> coeffs;     // Sum
        std::vector<Expr> exprs;       // Max / Min
        std::optional<Expr> expr;      // Expr

        static auto of_var(Sense s, int var) -> Objective;
        static auto of_sum(Sense s, std::vector<int> scope, std::vector<Value> coeffs) -> Objective;
        static auto of_max(Sense s, std::vector<Expr> exprs) -> Objective;
        static auto of_min(Sense s, std::vector<Expr> exprs) -> Objective;
        static auto of_expr(Sense s, Expr expr) -> Objective;

        // Equivalent expression tree (used for bounding and evaluation).
        auto as_expr() const -> Expr;
    };

    struct PostedConstraint
    {
        Constraint constraint;
        std::string tag;  // "" or a group label, e.g. "symmetry-breaking"
    };

    struct Instance
    {
        std::string name;
        std::vector<Variable> variables;
        std::vector<PostedConstraint> constraints;
        std::optional<Objective> objective;
        std::map<std::string, std::string> metadata;

        auto n_vars() const -> int { return static_cast<int>(variables.size()); }
        auto var_index(const std::string & name) const -> int;  // -1 when absent
    };

    // Incremental construction helper used by generators and the reader.
    class InstanceBuilder
    {
    public:
        explicit InstanceBuilder(std::string name);

        auto add_var(const std::string & name, Domain domain) -> int;
        auto post(Constraint c, std::string tag = "") -> void;
        auto post(ConstraintForm form, std::string tag = "") -> void;
        auto set_objective(Objective o) -> void;
        auto set_meta(const std::string & key, const std::string & value) -> void;

        // Validates everything (unique names, non-empty domains, constraint
        // structure, typed intensions) and returns the finished instance.
        auto build() -> Instance;

    private:
        Instance inst_;
        std::map<std::string, int> index_;
    };

    // Structural validation for already-assembled instances (reader path).
    auto validate_instance(const Instance & inst) -> void;

    // Copy without constraints carrying the given tag (e.g. to compare
    // solution sets with and without symmetry breaking).
    auto strip_tagged(const Instance & inst, const std::string & tag) -> Instance;

    using Assignment = std::vector<Value>;
}
