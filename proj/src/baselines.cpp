#include "kiva/baselines.hpp"

#include <algorithm>
#include <numeric>

#include "kiva/error.hpp"
#include "kiva/evaluation.hpp"

namespace kiva {

OrderSchedule round_robin_assignment(const Instance& instance) {
    if (instance.stations == 0) fail(ErrorKind::invalid_instance, "station count must be positive");
    OrderSchedule theta;
    theta.stations.resize(instance.stations);
    for (std::size_t o = 0; o < instance.order_count(); ++o)
        theta.stations[o % instance.stations].push_back(static_cast<OrderIdx>(o));
    return theta;
}

RackSequence greedy_rack_sequence(const Instance& instance, std::span<const OrderIdx> sequence) {
    BenchReplay bench(instance, sequence);
    RackSequence racks;
    while (!bench.done()) {
        const auto residuals = bench.residuals();
        std::size_t best_units = 0;
        RackIdx best = 0;
        for (std::size_t r = 0; r < instance.rack_count(); ++r) {
            std::size_t units = 0;
            for (const auto& res : residuals) units += res.intersection_size(instance.racks[r]);
            if (units > best_units) {
                best_units = units;
                best = static_cast<RackIdx>(r);
            }
        }
        if (best_units == 0) fail(ErrorKind::infeasible, "active order demands a SKU no rack stocks");
        bench.visit(best);
        racks.push_back(best);
    }
    return racks;
}

Solution rb_solve(const Instance& instance) {
    Solution s;
    s.theta = round_robin_assignment(instance);
    for (const auto& seq : s.theta.stations) s.mu.stations.push_back(greedy_rack_sequence(instance, seq));
    return s;
}

OrderSchedule random_assignment(const Instance& instance, std::mt19937_64& rng) {
    const auto counts = balance_counts(instance.order_count(), instance.stations);
    OrderSequence tokens(instance.order_count());
    std::iota(tokens.begin(), tokens.end(), 0);
    std::shuffle(tokens.begin(), tokens.end(), rng);
    return OrderSchedule::split(tokens, counts);
}

SaResult roa_solve(const Instance& instance, const SolverParams& params) {
    params.validate();
    if (!validate_instance(instance).empty())
        fail(ErrorKind::invalid_instance, "instance failed validation: " + validate_instance(instance).front());
    std::mt19937_64 rng(params.rng_seed);
    const OrderSchedule theta0 = random_assignment(instance, rng);
    return anneal(instance, theta0, params, Neighborhood::within_station, rng);
}

} // namespace kiva
