#pragma once

#include <cstdint>
#include <vector>

#include "qmp/cost.hpp"
#include "qmp/massprod.hpp"

// Leading-term calculators. Suppressed o(1) and polylog factors are dropped;
// every number here is a model estimate.
namespace qmp {

// Success probability of r parallel attempts: 1 - p_r = (1 - p)^r.
double p_r(double p, std::int64_t r);

struct AmpAmpParams {
    double p = 1e-4;
    std::int64_t r = 1;
    double delta = 0.01;
    double q = 1;       // oracle queries per run of A
    double c = 0;       // other gates per run of A
    double kappa = 1;   // constant of the fixed-point query count
    double lookup_constant = 1;  // cost per table entry bit
};
struct AmpAmpReport {
    double p_r = 0;
    std::int64_t queries = 0;
    double round_cost = 0;
    double total = 0;
    double speedup = 1;     // total at r = 1 over total at r
    bool rp_warning = false;  // r p is not small
};
AmpAmpReport amp_amp_cost(const AmpAmpParams& a, int n, int m);

// Coherent alias sampling PREP over N items with mu keep bits.
struct AliasCost {
    int index_bits = 0;
    int out_bits = 0;
    std::int64_t lambda = 1;
    CostSummary lookup;
    CostSummary other;  // uniform superposition, comparator, swaps
    CostSummary total;
    double fraction_non_lookup = 0;
};
AliasCost alias_sampling_prep_cost(std::int64_t N, int mu, const CostModel& model);

struct ChemistryModel {
    double a = 1;
    double b = 1.78;
    int mu = 10;
    double c_sel = 1;
    double c_other = 1;
    CostModel model;

    std::int64_t items(double n_orb) const;  // round(a n_orb^b), at least 1
};
struct SparseRow {
    double n_orb = 0;
    std::int64_t items = 0;
    int input_bits = 0;
    double lookup = 0;
    double non_lookup = 0;
    double fraction_non_lookup = 0;
};
// Non-lookup part: (c_sel n_orb + c_other) Toffolis at the model's Toffoli
// cost. The lookup part comes from the optimized QROAM of the alias table.
std::vector<SparseRow> sparse_fraction_curve(const ChemistryModel& cm, const std::vector<double>& n_orb);

enum class QpeMode { sparse, thc };
struct QpePair {
    double standard = 0;
    double mass_produced = 0;
    double ratio = 0;  // standard / mass_produced
};
// sparse: N_orb^b against N_orb + N_orb^(b log2(3/2)); thc: R^2 + R N + N
// against R^log2(9/4) + R^log2(3/2) N + N. `scale` multiplies both (the
// block-encoding norm over the target precision).
QpePair parallel_qpe_compare(QpeMode mode, double n_orb, double b_or_rank, double scale = 1);

struct MaxCopies {
    MassProductionPlan plan;
    CostSummary cost;
    double improvement = 0;  // r Cost(O_f) / cost
};
// r = 2^(n-a) copies with an all-ones schedule and the best leaf lambda.
MaxCopies max_copies_cost(int n, int m, int a, const CostModel& model);
// Least-squares slope of log2(improvement) against n.
double improvement_exponent(int n_from, int n_to, int m, int a, const CostModel& model);

enum class KretschmerKind { state, unitary };
double kretschmer_counts(int n, double eps, KretschmerKind kind);

double mps_prep_cost(double n_sites, double chi, double eps, double c = 1);

// Least-squares slope of ys against xs.
double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace qmp
