// Trailed current domains: O(1) removal, exact LIFO restoration on backtrack.
#pragma once

#include <xcore/instance.hpp>

#include <vector>

namespace xcore
{
    class DomainStore
    {
    public:
        explicit DomainStore(const Instance & inst);

        auto n_vars() const -> int { return static_cast<int>(doms_.size()); }
        auto size(int var) const -> int { return doms_[static_cast<size_t>(var)].count; }
        auto empty(int var) const -> bool { return size(var) == 0; }
        auto fixed(int var) const -> bool { return size(var) == 1; }
        auto min(int var) const -> Value;
        auto max(int var) const -> Value;
        auto value(int var) const -> Value;  // requires fixed
        auto contains(int var, Value v) const -> bool;

        // Current values in ascending order (copied out).
        auto values(int var) const -> std::vector<Value>;

        enum class Prune { NoChange, Changed, Empty };

        auto remove(int var, Value v) -> Prune;
        auto assign(int var, Value v) -> Prune;
        auto tighten_lo(int var, Value lo) -> Prune;   // drop values < lo
        auto tighten_hi(int var, Value hi) -> Prune;   // drop values > hi

        auto push_level() -> void;
        auto undo_level() -> void;
        auto level() const -> int { return static_cast<int>(marks_.size()); }

        // Vars changed since the last take_touched(), deduplicated.
        auto take_touched() -> std::vector<int>;

        auto all_fixed() const -> bool;
        auto assignment() const -> Assignment;  // requires all fixed

    private:
        struct VarDom
        {
            std::vector<Value> values;     // the original domain, sorted
            std::vector<unsigned char> present;
            int count = 0;
            int min_idx = 0;
            int max_idx = 0;
        };

        auto remove_idx(int var, int idx) -> void;

        std::vector<VarDom> doms_;
        std::vector<std::pair<int, int>> trail_;  // (var, value index)
        std::vector<size_t> marks_;
        std::vector<int> touched_;
        std::vector<unsigned char> touched_flag_;
    };
}
