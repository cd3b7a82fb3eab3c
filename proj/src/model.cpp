#include "kiva/model.hpp"

#include <algorithm>
#include <cmath>

#include "kiva/error.hpp"

namespace kiva {

namespace {

SkuSet make_set(std::size_t sku_count, const std::vector<SkuId>& ids, const char* what, std::size_t index) {
    SkuSet set(sku_count);
    for (SkuId id : ids) {
        if (id >= sku_count)
            fail(ErrorKind::invalid_instance, std::string(what) + " " + std::to_string(index) +
                                                  " references SKU " + std::to_string(id) +
                                                  " outside the universe");
        set.insert(id);
    }
    return set;
}

} // namespace

Instance Instance::from_lists(std::size_t sku_count, std::size_t stations, std::size_t capacity,
                              const std::vector<std::vector<SkuId>>& orders,
                              const std::vector<std::vector<SkuId>>& racks) {
    Instance inst;
    inst.sku_count = sku_count;
    inst.stations = stations;
    inst.capacity = capacity;
    inst.orders.reserve(orders.size());
    for (std::size_t i = 0; i < orders.size(); ++i) inst.orders.push_back(make_set(sku_count, orders[i], "order", i));
    inst.racks.reserve(racks.size());
    for (std::size_t i = 0; i < racks.size(); ++i) inst.racks.push_back(make_set(sku_count, racks[i], "rack", i));
    return inst;
}

std::size_t Instance::max_order_size() const noexcept {
    std::size_t best = 0;
    for (const auto& o : orders) best = std::max(best, o.size());
    return best;
}

std::vector<std::vector<SkuId>> Instance::order_lists() const {
    std::vector<std::vector<SkuId>> out;
    for (const auto& o : orders) out.push_back(o.to_vector());
    return out;
}

std::vector<std::vector<SkuId>> Instance::rack_lists() const {
    std::vector<std::vector<SkuId>> out;
    for (const auto& r : racks) out.push_back(r.to_vector());
    return out;
}

std::size_t OrderSchedule::token_count() const noexcept {
    std::size_t n = 0;
    for (const auto& s : stations) n += s.size();
    return n;
}

OrderSequence OrderSchedule::flatten() const {
    OrderSequence out;
    out.reserve(token_count());
    for (const auto& s : stations) out.insert(out.end(), s.begin(), s.end());
    return out;
}

std::vector<std::size_t> OrderSchedule::segment_sizes() const {
    std::vector<std::size_t> out;
    for (const auto& s : stations) out.push_back(s.size());
    return out;
}

OrderSchedule OrderSchedule::split(const OrderSequence& tokens, const std::vector<std::size_t>& sizes) {
    OrderSchedule theta;
    theta.stations.reserve(sizes.size());
    auto it = tokens.begin();
    for (std::size_t size : sizes) {
        if (static_cast<std::size_t>(tokens.end() - it) < size)
            fail(ErrorKind::invalid_input, "segment sizes exceed token count");
        theta.stations.emplace_back(it, it + static_cast<std::ptrdiff_t>(size));
        it += static_cast<std::ptrdiff_t>(size);
    }
    if (it != tokens.end()) fail(ErrorKind::invalid_input, "segment sizes do not cover all tokens");
    return theta;
}

void SolverParams::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorKind::invalid_input, "alpha must lie in (0, 1)");
    if (!(w > 0.0)) fail(ErrorKind::invalid_input, "w must be positive");
    if (k0 < 1) fail(ErrorKind::invalid_input, "initial epoch length must be at least 1");
    if (gamma.empty()) fail(ErrorKind::invalid_input, "beam width list is empty");
    if (gamma.front() < 1) fail(ErrorKind::invalid_input, "beam widths must be positive");
    for (std::size_t i = 1; i < gamma.size(); ++i)
        if (gamma[i] <= gamma[i - 1]) fail(ErrorKind::invalid_input, "beam widths must be strictly increasing");
    if (restarts < 1) fail(ErrorKind::invalid_input, "restarts must be at least 1");
}

std::vector<std::size_t> balance_counts(std::size_t n, std::size_t m) {
    if (m == 0) fail(ErrorKind::invalid_instance, "station count must be positive");
    if (n < m) fail(ErrorKind::invalid_instance, "fewer orders than stations");
    std::vector<std::size_t> counts(m, n / m);
    for (std::size_t p = 0; p < n % m; ++p) ++counts[p];
    return counts;
}

std::size_t time_slot_upper_bound(const Instance& instance) {
    if (instance.stations == 0) return 0;
    const std::size_t per_station = (instance.order_count() + instance.stations - 1) / instance.stations;
    return per_station * instance.max_order_size() * instance.rack_count();
}

std::vector<std::string> validate_instance(const Instance& instance) {
    std::vector<std::string> issues;
    if (instance.stations == 0) issues.emplace_back("no stations");
    if (instance.capacity < 1) issues.emplace_back("capacity below 1");
    if (instance.order_count() < instance.stations) issues.emplace_back("fewer orders than stations");

    SkuSet stocked(instance.sku_count);
    for (std::size_t r = 0; r < instance.racks.size(); ++r) {
        if (instance.racks[r].universe() != instance.sku_count)
            issues.push_back("rack " + std::to_string(r) + " has wrong universe width");
        else if (instance.racks[r].empty())
            issues.push_back("empty rack " + std::to_string(r));
        else
            stocked |= instance.racks[r];
    }
    for (std::size_t o = 0; o < instance.orders.size(); ++o) {
        const SkuSet& order = instance.orders[o];
        if (order.universe() != instance.sku_count) {
            issues.push_back("order " + std::to_string(o) + " has wrong universe width");
            continue;
        }
        if (order.empty()) {
            issues.push_back("empty order " + std::to_string(o));
            continue;
        }
        for (SkuId sku : (order - stocked).to_vector())
            issues.push_back("uncoverable SKU " + std::to_string(sku) + " in order " + std::to_string(o));
    }
    return issues;
}

std::vector<std::string> validate_order_schedule(const Instance& instance, const OrderSchedule& theta) {
    std::vector<std::string> issues;
    if (theta.stations.size() != instance.stations) {
        issues.push_back("schedule has " + std::to_string(theta.stations.size()) + " stations, instance has " +
                         std::to_string(instance.stations));
        return issues;
    }
    const auto counts = balance_counts(instance.order_count(), instance.stations);
    for (std::size_t p = 0; p < counts.size(); ++p)
        if (theta.stations[p].size() != counts[p])
            issues.push_back("station " + std::to_string(p) + " holds " + std::to_string(theta.stations[p].size()) +
                             " orders, expected " + std::to_string(counts[p]));
    std::vector<int> seen(instance.order_count(), 0);
    for (OrderIdx o : theta.flatten()) {
        if (o >= instance.order_count()) {
            issues.push_back("unknown order " + std::to_string(o));
            continue;
        }
        ++seen[o];
    }
    for (std::size_t o = 0; o < seen.size(); ++o) {
        if (seen[o] == 0) issues.push_back("order " + std::to_string(o) + " unassigned");
        if (seen[o] > 1) issues.push_back("order " + std::to_string(o) + " assigned " + std::to_string(seen[o]) + " times");
    }
    return issues;
}

} // namespace kiva
