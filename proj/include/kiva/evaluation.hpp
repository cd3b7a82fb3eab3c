#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kiva/model.hpp"

namespace kiva {

struct Pick {
    OrderIdx order;
    SkuId sku;
    friend bool operator==(const Pick&, const Pick&) = default;
};

/// One time slot at a station: a maximal interval with a fixed set of active
/// orders and a fixed visiting rack.
struct TraceSlot {
    std::vector<RackIdx> racks;      // visiting racks; a well-formed trace has exactly one
    std::vector<OrderIdx> active;    // orders on the bench during the slot
    std::vector<SkuSet> residuals;   // per active order, SKUs still missing after the slot
    std::vector<Pick> picks;         // SKU deliveries made during the slot
    bool rack_change = false;        // first slot of a rack visit
    std::size_t visit = 0;           // position of the visit in the station's rack sequence
};

struct StationTrace {
    std::vector<TraceSlot> slots;
    bool complete = false;                 // every order finished within the rack sequence
    std::vector<std::size_t> idle_visits;  // visits that delivered nothing
};

/// Incremental replay of a single station bench. The first C orders of the
/// sequence are loaded; each rack visit removes its SKUs from every active
/// residual and finished orders are replaced by the next pending order, which
/// still picks from the rack at hand. Replacement cascades within a visit.
class BenchReplay {
public:
    /// Throws invalid_input on an unknown order index.
    BenchReplay(const Instance& instance, std::span<const OrderIdx> sequence);

    /// Applies one rack visit. Returns the number of SKU units delivered.
    /// Throws invalid_input on an unknown rack index.
    std::size_t visit(RackIdx rack, StationTrace* trace = nullptr);

    bool done() const noexcept;
    std::size_t next_pending() const noexcept { return next_; }
    std::size_t visits() const noexcept { return visits_; }
    /// Orders currently on the bench, by bench position.
    std::vector<OrderIdx> active() const;
    /// Residuals of the orders returned by active().
    std::vector<SkuSet> residuals() const;

private:
    struct Position {
        std::optional<OrderIdx> order;
        SkuSet residual;
    };

    TraceSlot snapshot(RackIdx rack) const;

    const Instance* instance_;
    std::vector<OrderIdx> sequence_;
    std::vector<Position> bench_;
    std::size_t next_ = 0;
    std::size_t visits_ = 0;
};

/// Replays a station and returns the trace, complete or not.
StationTrace replay_station(const Instance& instance, std::span<const OrderIdx> orders,
                            std::span<const RackIdx> racks);

/// Replays a station; empty when the rack sequence leaves unsatisfied residuals.
std::optional<StationTrace> simulate_station(const Instance& instance, std::span<const OrderIdx> orders,
                                             std::span<const RackIdx> racks);

/// Objective: total number of rack visits over all stations.
std::size_t evaluate_fitness(const RackSchedule& mu);

enum class Constraint {
    balance,                 // station workloads follow balance_counts
    single_assignment,       // each order sits at exactly one station
    active_only_if_assigned, // an order is processed only at its own station
    assigned_must_be_active, // an assigned order is processed in some slot
    bench_capacity,          // at most C active orders per slot
    single_rack,             // at most one visiting rack per slot
    rack_only_if_assigned,   // a rack visits only stations it is scheduled for
    assigned_rack_visits,    // a scheduled rack visits at least once
    demand_delivered,        // every SKU of every assigned order is delivered
    pick_requires_presence,  // a delivery needs the order active and a rack holding the SKU
    order_contiguity,        // an order is processed in consecutive slots
    rack_change,             // rack-change events match the rack sequence
};

inline constexpr std::size_t constraint_family_count = 12;

std::string_view to_string(Constraint c);

struct Violation {
    Constraint constraint;
    std::size_t station;
    std::string detail;
};

struct FeasibilityReport {
    bool feasible = true;
    std::vector<Violation> violations;
    std::vector<std::string> warnings;

    bool has(Constraint c) const;
    void add(Constraint c, std::size_t station, std::string detail);
};

/// Replays every station of the solution and checks all constraint families.
FeasibilityReport check_solution_feasibility(const Instance& instance, const Solution& solution);

/// Checks the given station traces against the solution they claim to realise.
FeasibilityReport verify_traces(const Instance& instance, const Solution& solution,
                                std::span<const StationTrace> traces);

/// Line-oriented trace export: `station p slot t rack r active [o,...]`.
std::string format_trace(std::size_t station, const StationTrace& trace);

} // namespace kiva
