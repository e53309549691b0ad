#include <xcore/domain_store.hpp>

#include <algorithm>

namespace xcore
{
    DomainStore::DomainStore(const Instance & inst)
    {
        doms_.reserve(inst.variables.size());
        for (const auto & v : inst.variables)
        {
            VarDom d;
            d.values = v.domain.values();
            d.present.assign(d.values.size(), 1);
            d.count = static_cast<int>(d.values.size());
            d.min_idx = 0;
            d.max_idx = d.count - 1;
            doms_.push_back(std::move(d));
        }
        touched_flag_.assign(doms_.size(), 0);
    }

    auto DomainStore::min(int var) const -> Value
    {
        const auto & d = doms_[static_cast<size_t>(var)];
        return d.values[static_cast<size_t>(d.min_idx)];
    }

    auto DomainStore::max(int var) const -> Value
    {
        const auto & d = doms_[static_cast<size_t>(var)];
        return d.values[static_cast<size_t>(d.max_idx)];
    }

    auto DomainStore::value(int var) const -> Value
    {
        return min(var);
    }

    auto DomainStore::contains(int var, Value v) const -> bool
    {
        const auto & d = doms_[static_cast<size_t>(var)];
        auto it = std::lower_bound(d.values.begin(), d.values.end(), v);
        if (it == d.values.end() || *it != v)
            return false;
        return d.present[static_cast<size_t>(it - d.values.begin())] != 0;
    }

    auto DomainStore::values(int var) const -> std::vector<Value>
    {
        const auto & d = doms_[static_cast<size_t>(var)];
        std::vector<Value> out;
        out.reserve(static_cast<size_t>(d.count));
        for (int i = d.min_idx; i <= d.max_idx; ++i)
            if (d.present[static_cast<size_t>(i)])
                out.push_back(d.values[static_cast<size_t>(i)]);
        return out;
    }

    auto DomainStore::remove_idx(int var, int idx) -> void
    {
        auto & d = doms_[static_cast<size_t>(var)];
        d.present[static_cast<size_t>(idx)] = 0;
        --d.count;
        trail_.emplace_back(var, idx);
        if (! touched_flag_[static_cast<size_t>(var)])
        {
            touched_flag_[static_cast<size_t>(var)] = 1;
            touched_.push_back(var);
        }
        if (d.count > 0)
        {
            while (! d.present[static_cast<size_t>(d.min_idx)])
                ++d.min_idx;
            while (! d.present[static_cast<size_t>(d.max_idx)])
                --d.max_idx;
        }
    }

    auto DomainStore::remove(int var, Value v) -> Prune
    {
        const auto & d = doms_[static_cast<size_t>(var)];
        auto it = std::lower_bound(d.values.begin(), d.values.end(), v);
        if (it == d.values.end() || *it != v)
            return Prune::NoChange;
        int idx = static_cast<int>(it - d.values.begin());
        if (! d.present[static_cast<size_t>(idx)])
            return Prune::NoChange;
        remove_idx(var, idx);
        return doms_[static_cast<size_t>(var)].count == 0 ? Prune::Empty : Prune::Changed;
    }

    auto DomainStore::assign(int var, Value v) -> Prune
    {
        auto & d = doms_[static_cast<size_t>(var)];
        int lo = d.min_idx, hi = d.max_idx;  // snapshot: remove_idx moves them
        if (! contains(var, v))
        {
            // Empty the domain so the caller sees a failure it can undo.
            for (int i = lo; i <= hi && d.count > 0; ++i)
                if (d.present[static_cast<size_t>(i)])
                    remove_idx(var, i);
            return Prune::Empty;
        }
        bool changed = false;
        for (int i = lo; i <= hi; ++i)
        {
            if (! d.present[static_cast<size_t>(i)] || d.values[static_cast<size_t>(i)] == v)
                continue;
            remove_idx(var, i);
            changed = true;
        }
        return changed ? Prune::Changed : Prune::NoChange;
    }

    auto DomainStore::tighten_lo(int var, Value lo) -> Prune
    {
        auto & d = doms_[static_cast<size_t>(var)];
        bool changed = false;
        while (d.count > 0 && d.values[static_cast<size_t>(d.min_idx)] < lo)
        {
            remove_idx(var, d.min_idx);
            changed = true;
        }
        if (d.count == 0)
            return Prune::Empty;
        return changed ? Prune::Changed : Prune::NoChange;
    }

    auto DomainStore::tighten_hi(int var, Value hi) -> Prune
    {
        auto & d = doms_[static_cast<size_t>(var)];
        bool changed = false;
        while (d.count > 0 && d.values[static_cast<size_t>(d.max_idx)] > hi)
        {
            remove_idx(var, d.max_idx);
            changed = true;
        }
        if (d.count == 0)
            return Prune::Empty;
        return changed ? Prune::Changed : Prune::NoChange;
    }

    auto DomainStore::push_level() -> void
    {
        marks_.push_back(trail_.size());
    }

    auto DomainStore::undo_level() -> void
    {
        size_t mark = marks_.back();
        marks_.pop_back();
        while (trail_.size() > mark)
        {
            auto [var, idx] = trail_.back();
            trail_.pop_back();
            auto & d = doms_[static_cast<size_t>(var)];
            d.present[static_cast<size_t>(idx)] = 1;
            if (d.count == 0)
            {
                d.min_idx = d.max_idx = idx;
            }
            else
            {
                d.min_idx = std::min(d.min_idx, idx);
                d.max_idx = std::max(d.max_idx, idx);
            }
            ++d.count;
        }
    }

    auto DomainStore::take_touched() -> std::vector<int>
    {
        for (int v : touched_)
            touched_flag_[static_cast<size_t>(v)] = 0;
        std::vector<int> out;
        out.swap(touched_);
        return out;
    }

    auto DomainStore::all_fixed() const -> bool
    {
        for (const auto & d : doms_)
            if (d.count != 1)
                return false;
        return true;
    }

    auto DomainStore::assignment() const -> Assignment
    {
        Assignment a;
        a.reserve(doms_.size());
        for (size_t v = 0; v < doms_.size(); ++v)
            a.push_back(min(static_cast<int>(v)));
        return a;
    }
}
