#include "kiva/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kiva/error.hpp"

namespace kiva {

std::size_t GenParams::default_rack_count() const {
    const double mean_size = 0.5 * static_cast<double>(order_min + order_max);
    const auto racks_needed =
        static_cast<std::size_t>(std::ceil(static_cast<double>(n) * mean_size / static_cast<double>(beta)));
    return std::max(2 * m, 2 * racks_needed);
}

std::size_t GenParams::effective_rack_count() const { return rack_count ? rack_count : default_rack_count(); }

double GenParams::effective_rank_scale() const {
    return rank_scale > 0.0 ? rank_scale : static_cast<double>(sku_count) / 10.0;
}

void GenParams::validate() const {
    if (m < 1) fail(ErrorKind::invalid_input, "station count must be positive");
    if (n < m) fail(ErrorKind::invalid_input, "fewer orders than stations");
    if (capacity < 1) fail(ErrorKind::invalid_input, "capacity must be positive");
    if (sku_count < 1) fail(ErrorKind::invalid_input, "SKU universe is empty");
    if (beta < 1 || beta > sku_count) fail(ErrorKind::invalid_input, "beta must lie in [1, sku_count]");
    if (order_min < 1 || order_max < order_min) fail(ErrorKind::invalid_input, "order size range is invalid");
    if (order_max > sku_count) fail(ErrorKind::invalid_input, "order size exceeds the SKU universe");
    if (!(skew >= 0.0)) fail(ErrorKind::invalid_input, "skew must be non-negative");
}

std::vector<double> popularity_weights(const GenParams& params) {
    const double scale = params.effective_rank_scale();
    std::vector<double> weights(params.sku_count);
    for (std::size_t k = 0; k < weights.size(); ++k)
        weights[k] = std::exp(-params.skew * static_cast<double>(k) / scale);
    return weights;
}

std::vector<SkuId> sample_skus(const std::vector<double>& weights, std::size_t count, std::mt19937_64& rng) {
    // Gumbel-top-k: the k largest log(w) + Gumbel keys form a successive
    // weighted sample without replacement.
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::pair<double, SkuId>> keys;
    keys.reserve(weights.size());
    for (std::size_t k = 0; k < weights.size(); ++k) {
        double u = unit(rng);
        while (u <= 0.0) u = unit(rng);
        keys.emplace_back(std::log(weights[k]) - std::log(-std::log(u)), static_cast<SkuId>(k));
    }
    std::partial_sort(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(count), keys.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<SkuId> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(keys[i].second);
    std::sort(out.begin(), out.end());
    return out;
}

Instance generate_instance(const GenParams& params) {
    params.validate();
    std::mt19937_64 rng(params.seed);
    const auto weights = popularity_weights(params);

    std::vector<std::vector<SkuId>> orders;
    std::uniform_int_distribution<std::size_t> order_size(params.order_min, params.order_max);
    for (std::size_t i = 0; i < params.n; ++i) orders.push_back(sample_skus(weights, order_size(rng), rng));

    const std::size_t rack_total = params.effective_rack_count();
    std::vector<std::vector<SkuId>> racks;
    for (std::size_t j = 0; j < rack_total; ++j) racks.push_back(sample_skus(weights, params.beta, rng));

    std::vector<std::size_t> holders(params.sku_count, 0);
    std::vector<bool> demanded(params.sku_count, false);
    for (const auto& r : racks)
        for (SkuId s : r) ++holders[s];
    for (const auto& o : orders)
        for (SkuId s : o) demanded[s] = true;
    const auto demanded_total = static_cast<std::size_t>(std::count(demanded.begin(), demanded.end(), true));
    if (demanded_total > rack_total * params.beta)
        fail(ErrorKind::invalid_input, "racks cannot stock every demanded SKU");

    std::uniform_int_distribution<std::size_t> pick_rack(0, rack_total - 1);
    std::uniform_int_distribution<std::size_t> pick_slot(0, params.beta - 1);
    for (std::size_t sku = 0; sku < params.sku_count; ++sku) {
        if (!demanded[sku] || holders[sku] > 0) continue;
        while (true) {
            auto& rack = racks[pick_rack(rng)];
            SkuId& slot = rack[pick_slot(rng)];
            // Never strip the last holder of a demanded SKU.
            if (demanded[slot] && holders[slot] == 1) continue;
            --holders[slot];
            slot = static_cast<SkuId>(sku);
            ++holders[sku];
            std::sort(rack.begin(), rack.end());
            break;
        }
    }
    return Instance::from_lists(params.sku_count, params.m, params.capacity, orders, racks);
}

} // namespace kiva
