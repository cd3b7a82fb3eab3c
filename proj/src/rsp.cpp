#include "kiva/rsp.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

#include "kiva/error.hpp"

namespace kiva {

namespace {

SkuSet demand_of(const Instance& instance, std::span<const OrderIdx> orders) {
    SkuSet demand(instance.sku_count);
    for (OrderIdx o : orders) demand |= instance.orders[o];
    return demand;
}

SkuSet stock_of(const Instance& instance, std::span<const RackIdx> racks) {
    SkuSet stock(instance.sku_count);
    for (RackIdx r : racks) stock |= instance.racks[r];
    return stock;
}

void check_indices(const Instance& instance, std::span<const OrderIdx> orders, std::span<const RackIdx> racks) {
    for (OrderIdx o : orders)
        if (o >= instance.order_count()) fail(ErrorKind::invalid_input, "unknown order index " + std::to_string(o));
    for (RackIdx r : racks)
        if (r >= instance.rack_count()) fail(ErrorKind::invalid_input, "unknown rack index " + std::to_string(r));
}

// Branch and bound for a minimum rack cover. `nodes` is a caller-owned
// counter so several searches can draw on one budget.
class CoverSearch {
public:
    CoverSearch(const Instance& instance, std::span<const RackIdx> racks, std::size_t budget, std::size_t& nodes)
        : instance_(instance), racks_(racks.begin(), racks.end()), budget_(budget), nodes_(nodes) {}

    // Returns false when the budget ran out.
    bool run(const SkuSet& demand, std::vector<RackIdx> incumbent) {
        best_ = std::move(incumbent);
        std::vector<RackIdx> chosen;
        dfs(demand, chosen);
        return !exhausted_;
    }
    const std::vector<RackIdx>& best() const { return best_; }

private:
    void dfs(const SkuSet& uncovered, std::vector<RackIdx>& chosen) {
        if (exhausted_) return;
        if (++nodes_ > budget_) {
            exhausted_ = true;
            return;
        }
        if (uncovered.empty()) {
            if (chosen.size() < best_.size()) best_ = chosen;
            return;
        }
        std::size_t widest = 0;
        for (RackIdx r : racks_) widest = std::max(widest, uncovered.intersection_size(instance_.racks[r]));
        if (widest == 0) return;
        const std::size_t need = (uncovered.size() + widest - 1) / widest;
        if (chosen.size() + need >= best_.size()) return;

        // Branch on the uncovered SKU with the fewest holders.
        SkuId pivot = 0;
        std::size_t fewest = std::numeric_limits<std::size_t>::max();
        for (SkuId sku : uncovered.to_vector()) {
            std::size_t holders = 0;
            for (RackIdx r : racks_) holders += instance_.racks[r].contains(sku) ? 1 : 0;
            if (holders < fewest) {
                fewest = holders;
                pivot = sku;
            }
        }
        std::vector<std::pair<std::size_t, RackIdx>> branches;
        for (RackIdx r : racks_)
            if (instance_.racks[r].contains(pivot))
                branches.emplace_back(uncovered.intersection_size(instance_.racks[r]), r);
        std::stable_sort(branches.begin(), branches.end(),
                         [](const auto& a, const auto& b) { return a.first > b.first; });
        for (const auto& [gain, r] : branches) {
            chosen.push_back(r);
            dfs(uncovered - instance_.racks[r], chosen);
            chosen.pop_back();
            if (exhausted_) return;
        }
    }

    const Instance& instance_;
    std::vector<RackIdx> racks_;
    std::size_t budget_;
    std::size_t& nodes_;
    bool exhausted_ = false;
    std::vector<RackIdx> best_;
};

std::optional<std::vector<RackIdx>> counted_cover(const SkuSet& demand, std::span<const RackIdx> racks,
                                                  const Instance& instance, std::size_t budget, std::size_t& nodes) {
    auto incumbent = greedy_cover(demand, racks, instance);
    std::sort(incumbent.begin(), incumbent.end());
    CoverSearch search(instance, racks, budget, nodes);
    if (!search.run(demand, incumbent)) return std::nullopt;
    auto best = search.best();
    std::sort(best.begin(), best.end());
    return best;
}

// Rack subsets of a fixed size covering at least k candidate orders.
class SubsetSearch {
public:
    SubsetSearch(const Instance& instance, std::span<const OrderIdx> candidates, std::span<const RackIdx> racks,
                 std::size_t k, std::size_t budget)
        : instance_(instance), candidates_(candidates.begin(), candidates.end()), racks_(racks.begin(), racks.end()),
          k_(k), budget_(budget) {
        suffix_.assign(racks_.size() + 1, SkuSet(instance.sku_count));
        for (std::size_t i = racks_.size(); i-- > 0;) suffix_[i] = suffix_[i + 1] | instance.racks[racks_[i]];
    }

    // Searches subsets of exactly `size` racks. Returns true on success.
    bool run(std::size_t size) {
        size_ = size;
        chosen_.clear();
        return dfs(0, SkuSet(instance_.sku_count));
    }
    bool exhausted() const { return exhausted_; }
    const std::vector<RackIdx>& chosen() const { return chosen_; }
    const std::vector<OrderIdx>& picked() const { return picked_; }

private:
    bool dfs(std::size_t start, const SkuSet& stock) {
        if (++nodes_ > budget_) {
            exhausted_ = true;
            return false;
        }
        std::vector<OrderIdx> covered;
        std::vector<std::size_t> open;  // candidate positions still completable
        for (std::size_t i = 0; i < candidates_.size(); ++i) {
            const SkuSet& o = instance_.orders[candidates_[i]];
            if (o.is_subset_of(stock))
                covered.push_back(candidates_[i]);
            else if ((o - stock).is_subset_of(suffix_[start]))
                open.push_back(i);
        }
        if (covered.size() >= k_) {
            picked_.assign(covered.begin(), covered.begin() + static_cast<std::ptrdiff_t>(k_));
            return true;
        }
        if (chosen_.size() == size_ || covered.size() + open.size() < k_) return false;

        SkuSet wanted(instance_.sku_count);
        for (std::size_t i : open) wanted |= instance_.orders[candidates_[i]] - stock;
        for (std::size_t j = start; j < racks_.size(); ++j) {
            if (!instance_.racks[racks_[j]].intersects(wanted)) continue;
            chosen_.push_back(racks_[j]);
            if (dfs(j + 1, stock | instance_.racks[racks_[j]])) return true;
            chosen_.pop_back();
            if (exhausted_) return false;
        }
        return false;
    }

    const Instance& instance_;
    std::vector<OrderIdx> candidates_;
    std::vector<RackIdx> racks_;
    std::vector<SkuSet> suffix_;
    std::size_t k_;
    std::size_t budget_;
    std::size_t nodes_ = 0;
    std::size_t size_ = 0;
    bool exhausted_ = false;
    std::vector<RackIdx> chosen_;
    std::vector<OrderIdx> picked_;
};

StationCover greedy_station(const Instance& instance, std::span<const OrderIdx> candidates,
                            std::span<const RackIdx> racks, std::size_t k) {
    std::vector<OrderIdx> pool(candidates.begin(), candidates.end());
    StationCover out;
    SkuSet demand(instance.sku_count);
    std::vector<bool> taken(pool.size(), false);
    for (std::size_t step = 0; step < k; ++step) {
        std::size_t best = pool.size();
        std::size_t best_overlap = 0;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (taken[i]) continue;
            const std::size_t overlap = instance.orders[pool[i]].intersection_size(demand);
            if (best == pool.size() || overlap > best_overlap) {
                best = i;
                best_overlap = overlap;
            }
        }
        taken[best] = true;
        out.orders.push_back(pool[best]);
        demand |= instance.orders[pool[best]];
    }
    std::sort(out.orders.begin(), out.orders.end());
    out.racks = greedy_cover(demand, racks, instance);
    std::sort(out.racks.begin(), out.racks.end());
    return out;
}

std::size_t station_count_cover(const Instance& instance, std::span<const OrderIdx> orders,
                                std::span<const RackIdx> pool) {
    return greedy_cover(demand_of(instance, orders), pool, instance).size();
}

std::vector<RackIdx> best_cover(const Instance& instance, const SkuSet& demand, std::span<const RackIdx> pool,
                                std::size_t budget) {
    if (auto exact = exact_cover(demand, pool, instance, budget)) return *exact;
    auto cover = greedy_cover(demand, pool, instance);
    std::sort(cover.begin(), cover.end());
    return cover;
}

// Exhaustive balanced partition search with per-station minimum covers as the
// bound. Covers are memoised by station order set.
class JointSearch {
public:
    JointSearch(const Instance& instance, std::span<const RackIdx> pool, std::size_t budget)
        : instance_(instance), pool_(pool.begin(), pool.end()), budget_(budget),
          counts_(balance_counts(instance.order_count(), instance.stations)),
          members_(instance.stations), cost_(instance.stations, 0) {}

    std::optional<std::vector<std::vector<OrderIdx>>> run() {
        assign(0, 0);
        if (exhausted_ || best_total_ == std::numeric_limits<std::size_t>::max()) return std::nullopt;
        return best_;
    }

private:
    std::size_t cover_size(const std::vector<OrderIdx>& orders) {
        std::vector<std::uint64_t> key((instance_.order_count() + 63) / 64, 0);
        for (OrderIdx o : orders) key[o / 64] |= std::uint64_t{1} << (o % 64);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        auto cover = counted_cover(demand_of(instance_, orders), pool_, instance_, budget_, nodes_);
        const std::size_t size = cover ? cover->size() : std::numeric_limits<std::size_t>::max() / 4;
        if (!cover) exhausted_ = true;
        memo_.emplace(std::move(key), size);
        return size;
    }

    void assign(std::size_t order, std::size_t total) {
        if (exhausted_) return;
        if (++nodes_ > budget_) {
            exhausted_ = true;
            return;
        }
        if (total >= best_total_) return;
        if (order == instance_.order_count()) {
            best_total_ = total;
            best_ = members_;
            return;
        }
        bool tried_empty_of_size[2] = {false, false};
        for (std::size_t p = 0; p < members_.size(); ++p) {
            if (members_[p].size() >= counts_[p]) continue;
            // Empty stations of equal target size are interchangeable.
            if (members_[p].empty()) {
                const std::size_t cls = counts_[p] == counts_.front() ? 0 : 1;
                if (tried_empty_of_size[cls]) continue;
                tried_empty_of_size[cls] = true;
            }
            const std::size_t before = cost_[p];
            members_[p].push_back(static_cast<OrderIdx>(order));
            cost_[p] = cover_size(members_[p]);
            assign(order + 1, total - before + cost_[p]);
            cost_[p] = before;
            members_[p].pop_back();
            if (exhausted_) return;
        }
    }

    const Instance& instance_;
    std::vector<RackIdx> pool_;
    std::size_t budget_;
    std::vector<std::size_t> counts_;
    std::vector<std::vector<OrderIdx>> members_;
    std::vector<std::size_t> cost_;
    std::map<std::vector<std::uint64_t>, std::size_t> memo_;
    std::size_t nodes_ = 0;
    bool exhausted_ = false;
    std::size_t best_total_ = std::numeric_limits<std::size_t>::max();
    std::vector<std::vector<OrderIdx>> best_;
};

RspAssignment covers_for(const Instance& instance, const std::vector<std::vector<OrderIdx>>& members,
                         std::span<const RackIdx> pool, std::size_t budget) {
    RspAssignment out;
    for (auto orders : members) {
        std::sort(orders.begin(), orders.end());
        StationCover sc;
        sc.racks = best_cover(instance, demand_of(instance, orders), pool, budget);
        sc.orders = std::move(orders);
        out.stations.push_back(std::move(sc));
    }
    return out;
}

RspAssignment local_search(const Instance& instance, std::span<const RackIdx> pool, const RspAssignment& start,
                           std::size_t budget) {
    std::vector<std::vector<OrderIdx>> members;
    for (const auto& s : start.stations) members.push_back(s.orders);
    std::vector<std::size_t> cost;
    for (const auto& m : members) cost.push_back(station_count_cover(instance, m, pool));

    const std::size_t per_eval = std::max<std::size_t>(1, pool.size());
    std::size_t spent = 0;
    bool improved = true;
    while (improved && spent < budget) {
        improved = false;
        for (std::size_t p = 0; p < members.size() && spent < budget; ++p)
            for (std::size_t q = p + 1; q < members.size() && spent < budget; ++q)
                for (std::size_t i = 0; i < members[p].size() && spent < budget; ++i)
                    for (std::size_t j = 0; j < members[q].size() && spent < budget; ++j) {
                        std::swap(members[p][i], members[q][j]);
                        const std::size_t cp = station_count_cover(instance, members[p], pool);
                        const std::size_t cq = station_count_cover(instance, members[q], pool);
                        spent += 2 * per_eval;
                        if (cp + cq < cost[p] + cost[q]) {
                            cost[p] = cp;
                            cost[q] = cq;
                            improved = true;
                        } else {
                            std::swap(members[p][i], members[q][j]);
                        }
                    }
    }
    return covers_for(instance, members, pool, budget);
}

} // namespace

std::size_t RspAssignment::total_racks() const {
    std::size_t total = 0;
    for (const auto& s : stations) total += s.racks.size();
    return total;
}

std::vector<RackIdx> RspAssignment::rack_pool() const {
    std::vector<RackIdx> pool;
    for (const auto& s : stations) pool.insert(pool.end(), s.racks.begin(), s.racks.end());
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    return pool;
}

std::vector<RackIdx> greedy_cover(const SkuSet& demand, std::span<const RackIdx> racks, const Instance& instance) {
    SkuSet uncovered = demand;
    std::vector<RackIdx> chosen;
    while (!uncovered.empty()) {
        std::size_t best_gain = 0;
        RackIdx best = 0;
        for (RackIdx r : racks) {
            const std::size_t gain = uncovered.intersection_size(instance.racks[r]);
            if (gain > best_gain || (gain == best_gain && gain > 0 && r < best)) {
                best_gain = gain;
                best = r;
            }
        }
        if (best_gain == 0) fail(ErrorKind::infeasible, "demanded SKU is stocked on none of the racks");
        chosen.push_back(best);
        uncovered -= instance.racks[best];
    }
    return chosen;
}

std::optional<std::vector<RackIdx>> exact_cover(const SkuSet& demand, std::span<const RackIdx> racks,
                                                const Instance& instance, std::size_t node_budget) {
    std::size_t nodes = 0;
    return counted_cover(demand, racks, instance, node_budget, nodes);
}

StationCover solve_single_station_rsp(const Instance& instance, std::span<const OrderIdx> candidates,
                                      std::span<const RackIdx> racks, std::size_t k, RspMode mode,
                                      std::size_t node_budget, bool* fell_back) {
    check_indices(instance, candidates, racks);
    if (k > candidates.size())
        fail(ErrorKind::invalid_input, "cannot pick " + std::to_string(k) + " of " +
                                           std::to_string(candidates.size()) + " candidate orders");
    if (!demand_of(instance, candidates).is_subset_of(stock_of(instance, racks)))
        fail(ErrorKind::infeasible, "a candidate order demands a SKU none of the racks stocks");
    if (fell_back) *fell_back = false;

    std::vector<OrderIdx> sorted(candidates.begin(), candidates.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<RackIdx> rack_list(racks.begin(), racks.end());
    std::sort(rack_list.begin(), rack_list.end());
    rack_list.erase(std::unique(rack_list.begin(), rack_list.end()), rack_list.end());

    StationCover greedy = greedy_station(instance, sorted, rack_list, k);
    if (mode == RspMode::greedy || k == 0) return greedy;

    const std::size_t budget = mode == RspMode::exact ? std::numeric_limits<std::size_t>::max() : node_budget;
    SubsetSearch search(instance, sorted, rack_list, k, budget);
    for (std::size_t size = 1; size < greedy.racks.size(); ++size) {
        if (search.run(size)) {
            StationCover out;
            out.orders = search.picked();
            out.racks = search.chosen();
            return out;
        }
        if (search.exhausted()) {
            if (fell_back) *fell_back = true;
            return greedy;
        }
    }
    return greedy;
}

RspAssignment rsp_sequential(const Instance& instance, RspMode mode, std::size_t node_budget) {
    const auto counts = balance_counts(instance.order_count(), instance.stations);
    std::vector<OrderIdx> remaining(instance.order_count());
    std::iota(remaining.begin(), remaining.end(), 0);
    std::vector<RackIdx> racks(instance.rack_count());
    std::iota(racks.begin(), racks.end(), 0);

    RspAssignment out;
    for (std::size_t p = 0; p < instance.stations; ++p) {
        bool fell_back = false;
        StationCover sc = solve_single_station_rsp(instance, remaining, racks, counts[p], mode, node_budget, &fell_back);
        out.used_fallback = out.used_fallback || fell_back;
        ++out.solves;
        std::vector<OrderIdx> left;
        std::set_difference(remaining.begin(), remaining.end(), sc.orders.begin(), sc.orders.end(),
                            std::back_inserter(left));
        remaining = std::move(left);
        out.stations.push_back(std::move(sc));
    }
    return out;
}

std::optional<RspAssignment> rsp_joint(const Instance& instance, std::span<const RackIdx> pool, RspMode mode,
                                       std::size_t node_budget, const RspAssignment* start) {
    std::vector<RackIdx> racks(pool.begin(), pool.end());
    std::sort(racks.begin(), racks.end());
    racks.erase(std::unique(racks.begin(), racks.end()), racks.end());
    check_indices(instance, {}, racks);
    std::vector<OrderIdx> all(instance.order_count());
    std::iota(all.begin(), all.end(), 0);
    if (!demand_of(instance, all).is_subset_of(stock_of(instance, racks))) return std::nullopt;

    if (mode != RspMode::greedy) {
        JointSearch search(instance, racks, node_budget);
        if (auto members = search.run()) return covers_for(instance, *members, racks, node_budget);
    }
    if (!start) return std::nullopt;
    return local_search(instance, racks, *start, node_budget);
}

RspAssignment rsp_consolidate(const Instance& instance, const RspAssignment& assignment, RspMode mode,
                              std::size_t node_budget) {
    RspAssignment out = assignment;
    ++out.solves;
    if (instance.stations <= 1) return out;
    const auto pool = assignment.rack_pool();
    auto joint = rsp_joint(instance, pool, mode, node_budget, &assignment);
    if (joint && joint->total_racks() < assignment.total_racks()) {
        joint->solves = out.solves;
        joint->used_fallback = out.used_fallback;
        return *joint;
    }
    return out;
}

RspAssignment rsp_reduce(const Instance& instance, RspMode mode, std::size_t node_budget) {
    return rsp_consolidate(instance, rsp_sequential(instance, mode, node_budget), mode, node_budget);
}

OrderSchedule theta_from_rsp(const RspAssignment& assignment, std::mt19937_64& rng) {
    OrderSchedule theta;
    for (const auto& station : assignment.stations) {
        OrderSequence seq = station.orders;
        std::sort(seq.begin(), seq.end());
        std::shuffle(seq.begin(), seq.end(), rng);
        theta.stations.push_back(std::move(seq));
    }
    return theta;
}

} // namespace kiva
