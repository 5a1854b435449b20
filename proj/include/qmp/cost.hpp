#pragma once

#include <cstdint>
#include <iosfwd>

#include "qmp/circuit.hpp"

namespace qmp {

enum class CountingMode : std::uint8_t { upper_bound, data_exact };

struct CostModel {
    double xi = 1.0;
    int toffoli_t_count = 4;
    int toffoli_clifford_overhead = 11;
    int cswap_toffolis = 1;
    int cswap_cnots = 2;
    int swap_cnots = 3;
    CountingMode counting_mode = CountingMode::upper_bound;

    void check() const;
};

// Raw per-kind gate tallies. Closed-form evaluators produce these directly,
// so they can be compared against a builder without going through a model.
struct GateTally {
    std::int64_t h = 0, x = 0, z = 0, s = 0, cnot = 0, cz = 0, swap = 0, cswap = 0, toffoli = 0;
    std::int64_t measure = 0, classical = 0;
    std::int64_t data = 0;        // data gates actually emitted
    std::int64_t data_slots = 0;  // data positions under upper_bound

    GateTally& operator+=(const GateTally& o);
    GateTally operator*(std::int64_t k) const;
    bool operator==(const GateTally& o) const = default;
};
GateTally operator+(GateTally a, const GateTally& b);
std::ostream& operator<<(std::ostream& os, const GateTally& t);

struct CostSummary {
    std::int64_t clifford_count = 0;
    std::int64_t t_count = 0;
    std::int64_t toffoli_count = 0;
    std::int64_t measurement_count = 0;
    int qubit_count = 0;
    double total = 0.0;

    CostSummary& operator+=(const CostSummary& o);
    bool same_counts(const CostSummary& o) const;
};
CostSummary operator+(CostSummary a, const CostSummary& b);

GateTally tally_gates(const Circuit& c);
GateTally tally_gates(const Circuit& c, Tag tag);

CostSummary summarize(const GateTally& t, const CostModel& model, int qubits);
CostSummary count_costs(const Circuit& c, const CostModel& model);

// Split of a circuit's cost into (control, lookup) by gate tag.
struct TaggedCost {
    CostSummary control;
    CostSummary lookup;
};
TaggedCost count_costs_by_tag(const Circuit& c, const CostModel& model);

// Rewrites SWAP as three CNOTs and CSWAP as CNOT, TOFFOLI, CNOT. The result
// is semantically identical and must count the same under the default model.
Circuit decompose_swaps(const Circuit& c);

}  // namespace qmp
