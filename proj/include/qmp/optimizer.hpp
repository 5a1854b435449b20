#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "qmp/cost.hpp"
#include "qmp/massprod.hpp"

namespace qmp {

// total: minimize clifford + xi * T. toffoli: the xi -> infinity limit,
// minimize Toffolis first and break ties on the total.
enum class Objective : std::uint8_t { total, toffoli };

struct SearchOptions {
    Objective objective = Objective::total;
    int k_max = 0;          // 0 -> ceil(log2 n) + 1
    int lambda_cap_log = -1;  // -1 -> ceil(n_leaf / 2)
};

struct QromChoice {
    std::int64_t lambda = 1;
    CostSummary cost;
};
QromChoice optimize_qrom(int n, int m, const CostModel& model, const SearchOptions& opts = {});

struct OptimizationResult {
    MassProductionPlan plan;
    CostSummary cost_mp;
    CostSummary cost_naive;  // r copies of the best single lookup
    std::int64_t naive_lambda = 1;
    // naive / min(naive, mp): the naive plan is always available
    double improvement = 1.0;
    // naive / mp for the best mass-production plan alone
    double improvement_mp = 1.0;
};

struct InfeasiblePlan : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

OptimizationResult optimize_plan(int n, int m, const CostModel& model, std::int64_t r, const SearchOptions& opts = {});

// Exhaustive reference for the dynamic program (small n and t only).
OptimizationResult brute_force_plan(int n, int m, const CostModel& model, std::int64_t r,
                                    const SearchOptions& opts = {});

double fraction_non_lookup(const MassProductionPlan& plan, const CostModel& model);

struct SweepSpec {
    std::vector<int> n;
    std::vector<int> m{40};
    std::vector<double> xi{1.0};
    std::vector<std::int64_t> r;
    bool toffoli_only = false;
    bool skip_infeasible = false;  // drop points with 2^t copies beyond reach of n
    int k_max = 0;
    int lambda_cap_log = -1;

    void check() const;
};
SweepSpec sweep_spec_from_json(const std::string& s);

struct SweepRow {
    int n = 0;
    int m = 0;
    double xi = 1.0;  // infinity in Toffoli-only mode
    std::int64_t r = 1;
    std::int64_t lambda = 1;
    std::string k_schedule;
    std::int64_t clifford = 0, t_count = 0, toffoli = 0;
    double cost_naive = 0, cost_mp = 0, improvement = 1, improvement_mp = 1, fraction_non_lookup = 0;
};

// Rows ordered by (m, n, xi, r) regardless of thread scheduling. Worker count
// is min(hardware threads, QMP_THREADS) when that variable is set.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);
const char* sweep_csv_header();
int worker_count();

}  // namespace qmp
