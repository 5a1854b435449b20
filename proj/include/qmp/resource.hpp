#pragma once

#include <cstdint>
#include <vector>

#include "qmp/circuit.hpp"
#include "qmp/cost.hpp"
#include "qmp/massprod.hpp"
#include "qmp/sim.hpp"
#include "qmp/table.hpp"

namespace qmp {

// Register layout shared by every protocol circuit: "x" (query input),
// "y" (resource address), "out" (resource output, holds the answer at the
// end), then lookup scratch "anc" and "iter". Circuits built for the same
// layout can be run one after another on the same state.
struct ProtocolLayout {
    int n = 1;
    int m = 1;
    int anc = 0;
    int iter = 0;

    static ProtocolLayout for_lookups(int n, int m, std::int64_t lambda_f, std::int64_t lambda_g);
    Circuit shell() const;
    int width() const { return 2 * n + m + anc + iter; }
};

// H on y then O_f from y into out: the state 2^{-n/2} sum_y |y>|f(y)>.
Circuit resource_prep_circuit(const FunctionTable& f, std::int64_t lambda, const ProtocolLayout& lay);

// CNOT x_i -> y_i, measure y_i (record i) and reset it. Leaves f(x ^ b) in out.
Circuit consume_circuit(const ProtocolLayout& lay);

struct ConsumptionOutcome {
    BitString b;
    int case_tag = 1;
    StateVector state;
    double probability = 0.0;
};
// Prepares one resource state and consumes it against the basis input x.
// Branches are returned in order of b; a policy with forced outcomes picks b.
std::vector<ConsumptionOutcome> consume(const FunctionTable& f, std::uint64_t x, const MeasurementPolicy& policy,
                                        std::int64_t lambda = 1, const SimOptions& opts = {});

struct CorrectionCircuit {
    Circuit circuit;  // empty for b = 0
    int case_tag = 1;
    Correction table;  // unset for b = 0
};
// Turns f(x ^ b) in out into f(x). For nonzero b the lookup of g runs over
// n-1 address wires: the relabeled low bits, XORed with b' when the leading
// (relabeled) bit is set.
CorrectionCircuit correct(const FunctionTable& f, BitString b, std::int64_t lambda_g, const ProtocolLayout& lay);

struct QueryBranch {
    std::uint64_t b = 0;
    int case_tag = 1;
    double probability = 0.0;  // of this b
    bool output_ok = false;
    bool input_ok = false;
    bool ancilla_clean = false;
};
// Full serial query for basis input x: prep, consume (every b unless the
// policy forces some), correction. Every correction branch is checked.
std::vector<QueryBranch> serial_query(const FunctionTable& f, std::uint64_t x, const MeasurementPolicy& policy,
                                      std::int64_t lambda_f = 1, std::int64_t lambda_g = 1,
                                      const SimOptions& opts = {});

// Batch preparation on the simulator: |+> inputs through the
// mass-production circuit. Returns the fidelity of the final state with
// the product of c resource states (ancilla zero).
struct BatchSimulation {
    Circuit circuit;
    double fidelity = 0.0;
    int branches = 0;
};
BatchSimulation prepare_batch(const FunctionTable& f, const MassProductionPlan& plan, const SimOptions& opts = {});

// Cost path. c must be a power of two below 2^n. The c states come from
// c / batch runs of the best plan for `batch` copies, or from c separate
// lookups (batch = 1) when that is cheaper. n H gates are charged per state.
struct BatchCost {
    std::int64_t c = 1;
    std::int64_t batch = 1;
    bool mass_produced = false;
    MassProductionPlan plan;  // for one batch
    std::int64_t lambda = 1;  // of a single lookup
    CostSummary cost;
};
BatchCost prepare_batch_cost(int n, int m, std::int64_t c, const CostModel& model);

struct AmortizationReport {
    int n = 0;
    int m = 0;
    std::int64_t c = 1;
    BatchCost prep;
    CostSummary consume;     // per query
    CostSummary correction;  // per query, worst case over the four cases
    std::int64_t correction_lambda = 1;
    CostSummary single;      // one optimized O_f
    std::int64_t single_lambda = 1;
    double total = 0.0;
    double ratio = 0.0;             // total / (c * single)
    double correction_ratio = 0.0;  // Cost(O_g) / Cost(O_f)
};
AmortizationReport amortized_cost(int n, int m, std::int64_t c, const CostModel& model);

// Lookup that XORs into an arbitrary output register: a zero-state query,
// m CNOTs into the real output, then a measurement-based uncompute.
CostSummary general_alpha_wrap_cost(int n, int m, std::int64_t lambda, const CostModel& model);

}  // namespace qmp
