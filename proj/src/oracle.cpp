#include "kiva/oracle.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "kiva/error.hpp"
#include "kiva/evaluation.hpp"

namespace kiva {

namespace {

void check_limits(const Instance& instance, std::size_t orders, const OracleLimits& limits) {
    if (orders > limits.max_orders || instance.rack_count() > limits.max_racks ||
        instance.capacity > limits.max_capacity || instance.stations > limits.max_stations)
        fail(ErrorKind::limit_exceeded, "instance exceeds the exhaustive solver limits");
}

class SequenceEnumerator {
public:
    SequenceEnumerator(const Instance& instance, std::size_t bound) : instance_(instance), best_(bound + 1) {}

    void run(const BenchReplay& bench) {
        chosen_.clear();
        dfs(bench);
    }
    std::size_t best() const { return best_; }
    const RackSequence& best_racks() const { return best_racks_; }
    bool improved() const { return improved_; }
    void reset_flag() { improved_ = false; }

private:
    void dfs(const BenchReplay& bench) {
        if (bench.done()) {
            if (chosen_.size() < best_) {
                best_ = chosen_.size();
                best_racks_ = chosen_;
                improved_ = true;
            }
            return;
        }
        if (chosen_.size() + 1 >= best_) return;
        for (std::size_t r = 0; r < instance_.rack_count(); ++r) {
            BenchReplay next = bench;
            // A visit that delivers nothing can be dropped from any sequence.
            if (next.visit(static_cast<RackIdx>(r)) == 0) continue;
            chosen_.push_back(static_cast<RackIdx>(r));
            dfs(next);
            chosen_.pop_back();
        }
    }

    const Instance& instance_;
    std::size_t best_;
    RackSequence chosen_;
    RackSequence best_racks_;
    bool improved_ = false;
};

} // namespace

StationOptimum exact_station_optimum(const Instance& instance, std::span<const OrderIdx> orders,
                                     const OracleLimits& limits) {
    check_limits(instance, orders.size(), limits);
    for (OrderIdx o : orders)
        if (o >= instance.order_count()) fail(ErrorKind::invalid_input, "unknown order index " + std::to_string(o));
    SkuSet stock(instance.sku_count);
    for (const auto& r : instance.racks) stock |= r;
    for (OrderIdx o : orders)
        if (!instance.orders[o].is_subset_of(stock))
            fail(ErrorKind::infeasible, "order " + std::to_string(o) + " demands a SKU no rack stocks");

    OrderSequence perm(orders.begin(), orders.end());
    std::sort(perm.begin(), perm.end());
    StationOptimum best;
    if (perm.empty()) return best;

    std::size_t max_size = 0;
    for (OrderIdx o : perm) max_size = std::max(max_size, instance.orders[o].size());
    SequenceEnumerator search(instance, perm.size() * max_size * instance.rack_count());
    do {
        search.reset_flag();
        search.run(BenchReplay(instance, perm));
        if (search.improved()) {
            best.sequence = perm;
            best.racks = search.best_racks();
            best.visits = search.best();
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (best.sequence.empty()) fail(ErrorKind::infeasible, "no rack sequence within the slot bound");
    return best;
}

OracleResult brute_force_solve(const Instance& instance, const OracleLimits& limits) {
    check_limits(instance, instance.order_count(), limits);
    const auto counts = balance_counts(instance.order_count(), instance.stations);

    std::map<std::uint64_t, StationOptimum> memo;
    auto station = [&](const std::vector<OrderIdx>& members) -> const StationOptimum& {
        std::uint64_t key = 0;
        for (OrderIdx o : members) key |= std::uint64_t{1} << o;
        auto it = memo.find(key);
        if (it == memo.end()) it = memo.emplace(key, exact_station_optimum(instance, members, limits)).first;
        return it->second;
    };

    std::vector<std::vector<OrderIdx>> members(instance.stations);
    OracleResult best;
    best.objective = std::numeric_limits<std::size_t>::max();

    // Order o goes to any station with room left; every balanced partition is visited.
    auto assign = [&](auto&& self, std::size_t o) -> void {
        if (o == instance.order_count()) {
            std::size_t total = 0;
            for (const auto& m : members) total += station(m).visits;
            if (total < best.objective) {
                best.objective = total;
                best.solution = {};
                for (const auto& m : members) {
                    const auto& opt = station(m);
                    best.solution.theta.stations.push_back(opt.sequence);
                    best.solution.mu.stations.push_back(opt.racks);
                }
            }
            return;
        }
        for (std::size_t p = 0; p < members.size(); ++p) {
            if (members[p].size() >= counts[p]) continue;
            members[p].push_back(static_cast<OrderIdx>(o));
            self(self, o + 1);
            members[p].pop_back();
        }
    };
    assign(assign, 0);
    return best;
}

Instance reference_instance() {
    enum : SkuId { A, B, C, D, E, F, G };
    return Instance::from_lists(7, 1, 3, {{E}, {G}, {C}, {F}, {A, B}}, {{A, B}, {C, F}, {D}, {E, G}});
}

Solution reference_solution() {
    Solution s;
    s.theta.stations = {{0, 1, 2, 3, 4}};
    s.mu.stations = {{3, 1, 0}};
    return s;
}

} // namespace kiva
