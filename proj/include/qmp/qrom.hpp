#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qmp/circuit.hpp"
#include "qmp/cost.hpp"
#include "qmp/table.hpp"

namespace qmp {

struct QroamParams {
    int n = 1;
    int m = 1;
    std::int64_t lambda = 1;
    bool controlled = false;

    void check() const;
};

int log2_exact(std::int64_t v);

// Registers: "x" (n, address, bit 0 least significant), "out" (m),
// optional "ctrl", then clean ancilla "anc" ((lambda-1) m) and "iter".
struct QromCircuit {
    Circuit circuit;
    QroamParams params;
    int h_bits = 0;  // log2(N / lambda)
    int l_bits = 0;  // log2(lambda)
    int clean_ancilla = 0;
};

QromCircuit build_plain_qrom(const FunctionTable& f, bool controlled);
QromCircuit build_qroam_modified(const FunctionTable& f, std::int64_t lambda);
QromCircuit build_qroam_controlled(const FunctionTable& f, std::int64_t lambda);

// Ancilla needed by the unary iteration over `a` address bits.
int iteration_ancilla(int a, bool controlled);
int qroam_clean_ancilla(const QroamParams& p);

// Emits the lookup into an existing circuit. `addr` lists address qubits,
// least significant first; `anc` must hold at least (lambda-1) m clean
// qubits and `iter` at least iteration_ancilla(...) clean qubits. Gates are
// tagged `lookup`.
struct LookupWires {
    std::vector<int> addr;
    std::vector<int> out;
    std::optional<int> ctrl;
    std::vector<int> anc;
    std::vector<int> iter;
};
void emit_qroam(Circuit& c, const FunctionTable& f, std::int64_t lambda, const LookupWires& w);

// Closed forms. They reproduce the builders gate for gate; data gates are
// reported as slots (upper_bound), which is exact for all-ones tables.
GateTally qroam_tally(const QroamParams& p);
CostSummary qroam_cost(const QroamParams& p, const CostModel& model);

// Formula-only variants (no builder).
CostSummary measurement_uncompute_cost(int n, std::int64_t lambda, const CostModel& model);
CostSummary dirty_qroam_cost(int n, int m, std::int64_t lambda, const CostModel& model);

}  // namespace qmp
