// Model-level domains: ordered integer sets with logarithmic membership.
#pragma once

#include <xcore/expr.hpp>

#include <string>
#include <vector>

namespace xcore
{
    class Domain
    {
    public:
        Domain() = default;
        explicit Domain(std::vector<Value> values);           // sorted + deduplicated
        static auto range(Value lo, Value hi) -> Domain;      // inclusive; empty when lo > hi

        auto empty() const -> bool { return values_.empty(); }
        auto size() const -> size_t { return values_.size(); }
        auto min() const -> Value { return values_.front(); }
        auto max() const -> Value { return values_.back(); }
        auto contains(Value v) const -> bool;
        auto index_of(Value v) const -> int;                  // -1 when absent
        auto at(size_t i) const -> Value { return values_[i]; }
        auto values() const -> const std::vector<Value> & { return values_; }
        auto operator==(const Domain & other) const -> bool = default;

    private:
        std::vector<Value> values_;
    };

    struct Variable
    {
        std::string name;
        Domain domain;
    };
}
