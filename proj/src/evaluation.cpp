#include "kiva/evaluation.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "kiva/error.hpp"

namespace kiva {

BenchReplay::BenchReplay(const Instance& instance, std::span<const OrderIdx> sequence)
    : instance_(&instance), sequence_(sequence.begin(), sequence.end()) {
    for (OrderIdx o : sequence_)
        if (o >= instance.order_count()) fail(ErrorKind::invalid_input, "unknown order index " + std::to_string(o));
    bench_.resize(instance.capacity);
    for (auto& pos : bench_) {
        pos.residual = SkuSet(instance.sku_count);
        if (next_ < sequence_.size()) {
            pos.order = sequence_[next_];
            pos.residual = instance.orders[sequence_[next_]];
            ++next_;
        }
    }
}

bool BenchReplay::done() const noexcept {
    if (next_ < sequence_.size()) return false;
    return std::none_of(bench_.begin(), bench_.end(), [](const Position& p) { return p.order.has_value(); });
}

std::vector<OrderIdx> BenchReplay::active() const {
    std::vector<OrderIdx> out;
    for (const auto& pos : bench_)
        if (pos.order) out.push_back(*pos.order);
    return out;
}

std::vector<SkuSet> BenchReplay::residuals() const {
    std::vector<SkuSet> out;
    for (const auto& pos : bench_)
        if (pos.order) out.push_back(pos.residual);
    return out;
}

TraceSlot BenchReplay::snapshot(RackIdx rack) const {
    TraceSlot slot;
    slot.racks = {rack};
    slot.visit = visits_;
    return slot;
}

std::size_t BenchReplay::visit(RackIdx rack, StationTrace* trace) {
    if (rack >= instance_->rack_count()) fail(ErrorKind::invalid_input, "unknown rack index " + std::to_string(rack));
    const SkuSet& shelf = instance_->racks[rack];
    std::size_t delivered = 0;

    // Positions that pick from the rack in the current slot.
    std::vector<std::size_t> picking;
    for (std::size_t c = 0; c < bench_.size(); ++c)
        if (bench_[c].order) picking.push_back(c);

    bool first = true;
    while (true) {
        TraceSlot slot = snapshot(rack);
        slot.rack_change = first;
        for (const auto& pos : bench_)
            if (pos.order) slot.active.push_back(*pos.order);

        for (std::size_t c : picking) {
            auto& pos = bench_[c];
            const SkuSet got = pos.residual & shelf;
            if (trace)
                for (SkuId sku : got.to_vector()) slot.picks.push_back({*pos.order, sku});
            delivered += got.size();
            pos.residual -= shelf;
        }
        if (trace) {
            for (const auto& pos : bench_)
                if (pos.order) slot.residuals.push_back(pos.residual);
            trace->slots.push_back(std::move(slot));
        }
        first = false;

        // Finished orders leave; their positions take the next pending orders.
        picking.clear();
        for (std::size_t c = 0; c < bench_.size(); ++c) {
            auto& pos = bench_[c];
            if (!pos.order || !pos.residual.empty()) continue;
            pos.order.reset();
            if (next_ < sequence_.size()) {
                pos.order = sequence_[next_];
                pos.residual = instance_->orders[sequence_[next_]];
                ++next_;
                picking.push_back(c);
            }
        }
        if (picking.empty()) break;
    }

    if (trace && delivered == 0) trace->idle_visits.push_back(visits_);
    ++visits_;
    return delivered;
}

StationTrace replay_station(const Instance& instance, std::span<const OrderIdx> orders,
                            std::span<const RackIdx> racks) {
    StationTrace trace;
    BenchReplay bench(instance, orders);
    for (RackIdx r : racks) bench.visit(r, &trace);
    trace.complete = bench.done();
    return trace;
}

std::optional<StationTrace> simulate_station(const Instance& instance, std::span<const OrderIdx> orders,
                                             std::span<const RackIdx> racks) {
    StationTrace trace = replay_station(instance, orders, racks);
    if (!trace.complete) return std::nullopt;
    return trace;
}

std::size_t evaluate_fitness(const RackSchedule& mu) {
    std::size_t total = 0;
    for (const auto& seq : mu.stations) total += seq.size();
    return total;
}

std::string_view to_string(Constraint c) {
    switch (c) {
    case Constraint::balance: return "balance";
    case Constraint::single_assignment: return "single-assignment";
    case Constraint::active_only_if_assigned: return "active-only-if-assigned";
    case Constraint::assigned_must_be_active: return "assigned-must-be-active";
    case Constraint::bench_capacity: return "bench-capacity";
    case Constraint::single_rack: return "single-rack";
    case Constraint::rack_only_if_assigned: return "rack-only-if-assigned";
    case Constraint::assigned_rack_visits: return "assigned-rack-visits";
    case Constraint::demand_delivered: return "unsatisfied-residual";
    case Constraint::pick_requires_presence: return "pick-requires-presence";
    case Constraint::order_contiguity: return "order-contiguity";
    case Constraint::rack_change: return "rack-change";
    }
    return "unknown";
}

bool FeasibilityReport::has(Constraint c) const {
    return std::any_of(violations.begin(), violations.end(), [c](const Violation& v) { return v.constraint == c; });
}

void FeasibilityReport::add(Constraint c, std::size_t station, std::string detail) {
    violations.push_back({c, station, std::move(detail)});
    feasible = false;
}

namespace {

// Assignment-level checks. Returns false when theta or mu is too malformed to
// replay.
bool check_schedules(const Instance& instance, const Solution& solution, FeasibilityReport& report) {
    const auto& theta = solution.theta.stations;
    const auto& mu = solution.mu.stations;
    bool replayable = true;
    if (theta.size() != instance.stations) {
        report.add(Constraint::balance, 0,
                   "order schedule has " + std::to_string(theta.size()) + " stations, expected " +
                       std::to_string(instance.stations));
        replayable = false;
    }
    if (mu.size() != instance.stations) {
        report.add(Constraint::rack_change, 0,
                   "rack schedule has " + std::to_string(mu.size()) + " stations, expected " +
                       std::to_string(instance.stations));
        replayable = false;
    }
    if (!replayable) return false;

    if (instance.order_count() >= instance.stations && instance.stations > 0) {
        const auto counts = balance_counts(instance.order_count(), instance.stations);
        for (std::size_t p = 0; p < counts.size(); ++p)
            if (theta[p].size() != counts[p])
                report.add(Constraint::balance, p,
                           "holds " + std::to_string(theta[p].size()) + " orders, expected " + std::to_string(counts[p]));
    }

    std::vector<std::size_t> seen(instance.order_count(), 0);
    for (std::size_t p = 0; p < theta.size(); ++p) {
        for (OrderIdx o : theta[p]) {
            if (o >= instance.order_count()) {
                report.add(Constraint::single_assignment, p, "unknown order " + std::to_string(o));
                replayable = false;
                continue;
            }
            ++seen[o];
        }
    }
    for (std::size_t o = 0; o < seen.size(); ++o) {
        if (seen[o] == 0) report.add(Constraint::single_assignment, 0, "order " + std::to_string(o) + " unassigned");
        if (seen[o] > 1)
            report.add(Constraint::single_assignment, 0,
                       "order " + std::to_string(o) + " assigned " + std::to_string(seen[o]) + " times");
    }
    for (std::size_t p = 0; p < mu.size(); ++p)
        for (RackIdx r : mu[p])
            if (r >= instance.rack_count()) {
                report.add(Constraint::rack_only_if_assigned, p, "unknown rack " + std::to_string(r));
                replayable = false;
            }
    return replayable;
}

void check_station_trace(const Instance& instance, std::size_t p, const OrderSequence& orders,
                         const RackSequence& racks, const StationTrace& trace, FeasibilityReport& report) {
    const std::set<OrderIdx> assigned(orders.begin(), orders.end());
    const std::set<RackIdx> scheduled(racks.begin(), racks.end());
    std::set<OrderIdx> ever_active;
    std::set<RackIdx> ever_visiting;
    std::vector<SkuSet> delivered;  // indexed by order, only for assigned orders
    std::vector<std::vector<std::size_t>> active_slots(instance.order_count());
    delivered.reserve(instance.order_count());
    for (std::size_t o = 0; o < instance.order_count(); ++o) delivered.emplace_back(instance.sku_count);

    std::size_t changes = 0;
    const std::vector<RackIdx>* previous = nullptr;
    for (std::size_t t = 0; t < trace.slots.size(); ++t) {
        const TraceSlot& slot = trace.slots[t];
        const std::string at = "slot " + std::to_string(t);

        if (slot.active.size() > instance.capacity)
            report.add(Constraint::bench_capacity, p,
                       at + " has " + std::to_string(slot.active.size()) + " active orders");
        if (slot.racks.size() > 1)
            report.add(Constraint::single_rack, p, at + " has " + std::to_string(slot.racks.size()) + " visiting racks");

        for (OrderIdx o : slot.active) {
            if (o >= instance.order_count()) {
                report.add(Constraint::active_only_if_assigned, p, at + " activates unknown order " + std::to_string(o));
                continue;
            }
            if (!assigned.count(o))
                report.add(Constraint::active_only_if_assigned, p,
                           at + " processes order " + std::to_string(o) + " assigned elsewhere");
            ever_active.insert(o);
            if (active_slots[o].empty() || active_slots[o].back() != t) active_slots[o].push_back(t);
        }
        SkuSet shelf(instance.sku_count);
        for (RackIdx r : slot.racks) {
            if (r >= instance.rack_count()) {
                report.add(Constraint::rack_only_if_assigned, p, at + " shows unknown rack " + std::to_string(r));
                continue;
            }
            if (!scheduled.count(r))
                report.add(Constraint::rack_only_if_assigned, p,
                           at + " shows rack " + std::to_string(r) + " not scheduled for the station");
            ever_visiting.insert(r);
            shelf |= instance.racks[r];
        }

        for (const Pick& pick : slot.picks) {
            const bool known = pick.order < instance.order_count() && pick.sku < instance.sku_count;
            const bool present = known &&
                                 std::find(slot.active.begin(), slot.active.end(), pick.order) != slot.active.end() &&
                                 shelf.contains(pick.sku) && instance.orders[pick.order].contains(pick.sku);
            if (!present) {
                report.add(Constraint::pick_requires_presence, p,
                           at + " delivers SKU " + std::to_string(pick.sku) + " to order " +
                               std::to_string(pick.order) + " without the order active and a rack holding it");
                continue;
            }
            delivered[pick.order].insert(pick.sku);
        }

        const bool differs = previous == nullptr ? !slot.racks.empty() : *previous != slot.racks;
        if (differs && !slot.rack_change)
            report.add(Constraint::rack_change, p, at + " changes rack without a recorded rack change");
        if (slot.rack_change) {
            if (changes >= racks.size() || slot.racks.size() != 1 || slot.racks.front() != racks[changes])
                report.add(Constraint::rack_change, p,
                           at + " records a rack change that does not match visit " + std::to_string(changes));
            ++changes;
        }
        previous = &slot.racks;
    }
    if (changes != racks.size())
        report.add(Constraint::rack_change, p,
                   std::to_string(changes) + " rack changes recorded for " + std::to_string(racks.size()) + " visits");

    for (RackIdx r : scheduled)
        if (!ever_visiting.count(r))
            report.add(Constraint::assigned_rack_visits, p, "scheduled rack " + std::to_string(r) + " never visits");

    for (OrderIdx o : assigned) {
        if (!ever_active.count(o)) {
            report.add(Constraint::assigned_must_be_active, p, "order " + std::to_string(o) + " is never processed");
        }
        const SkuSet missing = instance.orders[o] - delivered[o];
        if (!missing.empty())
            report.add(Constraint::demand_delivered, p,
                       "order " + std::to_string(o) + " misses " + std::to_string(missing.size()) + " SKU(s)");
        const auto& ts = active_slots[o];
        for (std::size_t k = 1; k < ts.size(); ++k)
            if (ts[k] != ts[k - 1] + 1) {
                report.add(Constraint::order_contiguity, p,
                           "order " + std::to_string(o) + " leaves the bench at slot " + std::to_string(ts[k - 1]) +
                               " and returns at slot " + std::to_string(ts[k]));
                break;
            }
    }

    for (std::size_t v : trace.idle_visits)
        report.warnings.push_back("station " + std::to_string(p) + " visit " + std::to_string(v) +
                                  " is a wasteful visit");
}

} // namespace

FeasibilityReport verify_traces(const Instance& instance, const Solution& solution,
                                std::span<const StationTrace> traces) {
    FeasibilityReport report;
    if (!check_schedules(instance, solution, report)) return report;
    if (traces.size() != instance.stations) {
        report.add(Constraint::rack_change, 0, "trace count does not match station count");
        return report;
    }
    for (std::size_t p = 0; p < instance.stations; ++p)
        check_station_trace(instance, p, solution.theta.stations[p], solution.mu.stations[p], traces[p], report);
    return report;
}

FeasibilityReport check_solution_feasibility(const Instance& instance, const Solution& solution) {
    FeasibilityReport report;
    if (!check_schedules(instance, solution, report)) return report;
    std::vector<StationTrace> traces;
    for (std::size_t p = 0; p < instance.stations; ++p)
        traces.push_back(replay_station(instance, solution.theta.stations[p], solution.mu.stations[p]));
    return verify_traces(instance, solution, traces);
}

std::string format_trace(std::size_t station, const StationTrace& trace) {
    std::ostringstream out;
    for (std::size_t t = 0; t < trace.slots.size(); ++t) {
        const auto& slot = trace.slots[t];
        out << "station " << station << " slot " << t << " rack ";
        for (std::size_t i = 0; i < slot.racks.size(); ++i) out << (i ? "," : "") << slot.racks[i];
        out << " active [";
        for (std::size_t i = 0; i < slot.active.size(); ++i) out << (i ? "," : "") << slot.active[i];
        out << "]\n";
    }
    return out.str();
}

} // namespace kiva
