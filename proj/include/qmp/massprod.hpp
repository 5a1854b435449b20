#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmp/circuit.hpp"
#include "qmp/cost.hpp"
#include "qmp/table.hpp"

namespace qmp {

// r = 2^t copies of O_f. k_schedule[d] is the prefix width at level d,
// outermost first. Leaf lookups use a modified QROAM with lambda_leaf.
struct MassProductionPlan {
    int n = 1;
    int m = 1;
    int t = 0;
    std::vector<int> k_schedule;
    std::int64_t lambda_leaf = 1;

    std::int64_t copies() const { return std::int64_t{1} << t; }
    int leaf_bits() const;
    // Throws std::invalid_argument on a bad plan.
    void check() const;
    std::string schedule_string(char sep = '-') const;
};

std::string plan_to_json(const MassProductionPlan& p);
MassProductionPlan plan_from_json(const std::string& s);
std::vector<int> parse_schedule(const std::string& s);

// Registers for t >= 1: "x<i>" (n) and "out<i>" (m) for each copy i, then
// per-cell comparator/control/parking registers, shared scratch "cin",
// "aux", "ladder", and leaf scratch "anc", "iter". For t = 0 the circuit is
// exactly build_qroam_modified(f, lambda_leaf).
Circuit build_mass_production(const FunctionTable& f, const MassProductionPlan& plan);
Circuit build_two_copy(const FunctionTable& f, int k, std::int64_t lambda);

// Standalone A_l over registers "c", "xl", "yl", "xr", "yr", "alpha",
// "beta", "aux", "ladder". nr is the width of x_R and y_R.
Circuit build_advance(std::uint64_t l, int k, int nr, int m);

struct MassCost {
    GateTally tally;          // whole circuit
    GateTally lookup_tally;   // leaf lookups only
    int width = 0;
};
// Closed form; equals tally_gates(build_mass_production(...)) gate for gate.
MassCost mass_tally(const MassProductionPlan& plan);
CostSummary cost_only(const MassProductionPlan& plan, const CostModel& model);
TaggedCost cost_only_tagged(const MassProductionPlan& plan, const CostModel& model);
int mass_width(const MassProductionPlan& plan);

// Pieces of the closed form, shared with the optimizer.
GateTally comparator_tally(int k);          // one compute (or uncompute)
GateTally advance_tally(int k, int nr, int m);  // all of A_0 .. A_{2^k-1}
GateTally cell_tally(int k, int nr, int m);     // everything a cell adds at its level
GateTally route_tally(int m);                   // park/unpark around one controlled batch

// Control bit and swap flag seen by G_l in a cell with prefixes xl <= yl.
struct RoutingState {
    bool control = false;
    bool swapped = false;
};
RoutingState routing_state(std::uint64_t l, std::uint64_t xl, std::uint64_t yl);

}  // namespace qmp
