// Shared helpers for the test executables: tiny random instances and
// reference computations written independently of the library internals.
#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "kiva/model.hpp"

namespace kt {

using kiva::Instance;
using kiva::OrderIdx;
using kiva::RackIdx;
using kiva::SkuId;

struct TinyShape {
    std::size_t max_orders = 6;
    std::size_t max_stations = 2;
    std::size_t max_racks = 5;
    std::size_t max_capacity = 2;
    std::size_t max_skus = 8;
    std::size_t max_order_size = 2;
};

// Random instance within `shape`; every order SKU is stocked by some rack.
inline Instance tiny_instance(std::uint64_t seed, const TinyShape& shape = {}) {
    std::mt19937_64 rng(seed);
    auto draw = [&](std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    };
    const std::size_t skus = draw(2, shape.max_skus);
    const std::size_t m = draw(1, shape.max_stations);
    const std::size_t n = draw(std::max<std::size_t>(m, 2), shape.max_orders);
    const std::size_t racks = draw(2, shape.max_racks);
    const std::size_t capacity = draw(1, shape.max_capacity);

    std::vector<std::vector<SkuId>> rack_lists(racks);
    std::set<SkuId> stocked;
    for (auto& r : rack_lists) {
        const std::size_t size = draw(1, std::min<std::size_t>(3, skus));
        std::vector<SkuId> all(skus);
        std::iota(all.begin(), all.end(), 0);
        std::shuffle(all.begin(), all.end(), rng);
        r.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(size));
        std::sort(r.begin(), r.end());
        stocked.insert(r.begin(), r.end());
    }
    const std::vector<SkuId> pool(stocked.begin(), stocked.end());
    std::vector<std::vector<SkuId>> order_lists(n);
    for (auto& o : order_lists) {
        const std::size_t size = draw(1, std::min(shape.max_order_size, pool.size()));
        std::vector<SkuId> shuffled = pool;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        o.assign(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(size));
        std::sort(o.begin(), o.end());
    }
    return Instance::from_lists(skus, m, capacity, order_lists, rack_lists);
}

// Straightforward bench simulation over std::set: true when `racks` finishes
// every order of `seq`.
inline bool naive_completes(const Instance& inst, const std::vector<OrderIdx>& seq, const std::vector<RackIdx>& racks) {
    const auto orders = inst.order_lists();
    const auto rack_lists = inst.rack_lists();
    std::vector<std::set<SkuId>> bench;
    std::size_t next = 0;
    auto refill = [&] {
        bench.erase(std::remove_if(bench.begin(), bench.end(), [](const auto& s) { return s.empty(); }), bench.end());
        while (bench.size() < inst.capacity && next < seq.size()) {
            bench.emplace_back(orders[seq[next]].begin(), orders[seq[next]].end());
            ++next;
        }
    };
    refill();
    for (RackIdx r : racks) {
        // Newcomers still pick from the rack at hand, so repeat until no order finishes.
        while (true) {
            for (auto& s : bench)
                for (SkuId k : rack_lists[r]) s.erase(k);
            if (std::none_of(bench.begin(), bench.end(), [](const auto& s) { return s.empty(); })) break;
            refill();
        }
    }
    return bench.empty() && next == seq.size();
}

// Shortest rack sequence finishing `seq`, by trying every sequence of each
// length in turn. Only for very small rack counts.
inline std::size_t naive_min_visits(const Instance& inst, const std::vector<OrderIdx>& seq, std::size_t max_len) {
    for (std::size_t len = 0; len <= max_len; ++len) {
        std::vector<RackIdx> racks(len, 0);
        while (true) {
            if (naive_completes(inst, seq, racks)) return len;
            std::size_t i = 0;
            while (i < len && ++racks[i] == inst.rack_count()) racks[i++] = 0;
            if (i == len) break;
        }
    }
    return SIZE_MAX;
}

// Minimum rack count covering `demand` using racks from `racks`, by subset
// enumeration. Returns SIZE_MAX when no cover exists.
inline std::size_t min_cover_size(const std::set<SkuId>& demand, const std::vector<RackIdx>& racks, const Instance& inst) {
    const auto rack_lists = inst.rack_lists();
    std::size_t best = SIZE_MAX;
    for (std::uint32_t mask = 0; mask < (1u << racks.size()); ++mask) {
        std::set<SkuId> got;
        for (std::size_t i = 0; i < racks.size(); ++i)
            if (mask >> i & 1u) got.insert(rack_lists[racks[i]].begin(), rack_lists[racks[i]].end());
        if (std::includes(got.begin(), got.end(), demand.begin(), demand.end()))
            best = std::min<std::size_t>(best, static_cast<std::size_t>(std::popcount(mask)));
    }
    return best;
}

inline std::set<SkuId> demand_of(const Instance& inst, const std::vector<OrderIdx>& orders) {
    std::set<SkuId> out;
    const auto lists = inst.order_lists();
    for (OrderIdx o : orders) out.insert(lists[o].begin(), lists[o].end());
    return out;
}

// Calls `visit` with every assignment of orders to stations whose sizes
// match `sizes` (station order sets ascending).
inline void for_each_partition(std::size_t n, const std::vector<std::size_t>& sizes,
                               const std::function<void(const std::vector<std::vector<OrderIdx>>&)>& visit) {
    std::vector<std::vector<OrderIdx>> parts(sizes.size());
    std::function<void(OrderIdx)> rec = [&](OrderIdx o) {
        if (o == n) {
            visit(parts);
            return;
        }
        for (std::size_t p = 0; p < sizes.size(); ++p) {
            if (parts[p].size() == sizes[p]) continue;
            parts[p].push_back(o);
            rec(o + 1);
            parts[p].pop_back();
        }
    };
    rec(0);
}

inline std::vector<RackIdx> all_racks(const Instance& inst) {
    std::vector<RackIdx> out(inst.rack_count());
    std::iota(out.begin(), out.end(), 0);
    return out;
}

} // namespace kt
