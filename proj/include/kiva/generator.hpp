#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "kiva/model.hpp"

namespace kiva {

struct GenParams {
    std::size_t n = 100;            // orders
    std::size_t m = 2;              // stations
    std::size_t capacity = 10;      // bench positions
    std::size_t beta = 15;          // SKUs per rack
    std::size_t rack_count = 0;     // 0 selects default_rack_count()
    std::size_t sku_count = 200;
    std::size_t order_min = 1;      // SKUs per order, drawn uniformly from [order_min, order_max]
    std::size_t order_max = 2;
    double skew = 0.5;              // exponential rate over the popularity axis
    double rank_scale = 0.0;        // SKU ranks per popularity unit; 0 selects sku_count / 10
    std::uint64_t seed = 1;

    /// max(2m, 2 * ceil(n * mean order size / beta)).
    std::size_t default_rack_count() const;
    std::size_t effective_rack_count() const;
    double effective_rank_scale() const;
    /// Throws invalid_input on inconsistent values.
    void validate() const;
};

/// Relative popularity of each SKU rank: exp(-skew * rank / rank_scale).
std::vector<double> popularity_weights(const GenParams& params);

/// Draws `count` distinct SKUs, successively without replacement, with
/// probability proportional to `weights`.
std::vector<SkuId> sample_skus(const std::vector<double>& weights, std::size_t count, std::mt19937_64& rng);

/// Random instance; deterministic per seed. Every demanded SKU is guaranteed a
/// rack: an unstocked SKU overwrites a random slot of a random rack.
Instance generate_instance(const GenParams& params);

} // namespace kiva
