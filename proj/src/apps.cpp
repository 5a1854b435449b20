#include "qmp/apps.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qmp/optimizer.hpp"
#include "qmp/qrom.hpp"

namespace qmp {

double p_r(double p, std::int64_t r) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p_r: p must lie in (0, 1)");
    if (r < 1) throw std::invalid_argument("p_r: r must be >= 1");
    // -expm1(r log1p(-p)) keeps precision when r p is tiny
    return -std::expm1(static_cast<double>(r) * std::log1p(-p));
}

namespace {

AmpAmpReport amp_amp_one(const AmpAmpParams& a, int n, int m) {
    if (!(a.delta > 0.0 && a.delta < 1.0)) throw std::invalid_argument("amp_amp: delta must lie in (0, 1)");
    if (a.kappa <= 0 || a.q < 0 || a.c < 0) throw std::invalid_argument("amp_amp: bad constants");
    if (n < 1 || m < 1) throw std::invalid_argument("amp_amp: n and m must be >= 1");
    AmpAmpReport rep;
    rep.p_r = p_r(a.p, a.r);
    rep.rp_warning = static_cast<double>(a.r) * a.p >= 0.1;
    rep.queries = static_cast<std::int64_t>(std::ceil(a.kappa * std::log(1.0 / a.delta) / std::sqrt(rep.p_r)));
    if (rep.queries < 1) rep.queries = 1;
    rep.round_cost = std::ldexp(1.0, n) * m * a.q * a.lookup_constant + static_cast<double>(a.r) * a.c;
    rep.total = static_cast<double>(rep.queries) * rep.round_cost;
    return rep;
}

}  // namespace

AmpAmpReport amp_amp_cost(const AmpAmpParams& a, int n, int m) {
    AmpAmpReport rep = amp_amp_one(a, n, m);
    AmpAmpParams base = a;
    base.r = 1;
    rep.speedup = amp_amp_one(base, n, m).total / rep.total;
    return rep;
}

AliasCost alias_sampling_prep_cost(std::int64_t N, int mu, const CostModel& model) {
    if (N < 2) throw std::invalid_argument("alias: N must be >= 2");
    if (mu < 1) throw std::invalid_argument("alias: mu must be >= 1");
    AliasCost ac;
    ac.index_bits = std::bit_width(static_cast<std::uint64_t>(N - 1));
    ac.out_bits = ac.index_bits + mu;
    QromChoice q = optimize_qrom(ac.index_bits, ac.out_bits, model);
    ac.lambda = q.lambda;
    ac.lookup = q.cost;

    // H on the index (plus an n-bit comparison against N when N is not a
    // power of two), H on the mu-bit sigma register, one mu-bit comparator
    // and a controlled swap of the index with the alternate
    GateTally t;
    t.h = ac.index_bits + mu;
    if (!std::has_single_bit(static_cast<std::uint64_t>(N))) t += comparator_tally(ac.index_bits) * 2;
    t += comparator_tally(mu);
    t.cswap += ac.index_bits;
    ac.other = summarize(t, model, 0);
    ac.total = ac.lookup + ac.other;
    ac.fraction_non_lookup = ac.other.total / ac.total.total;
    return ac;
}

std::int64_t ChemistryModel::items(double n_orb) const {
    if (!(n_orb > 0) || !(a > 0)) throw std::invalid_argument("chemistry: a and N_orb must be positive");
    const double v = std::round(a * std::pow(n_orb, b));
    if (!(v < 1e18)) throw std::invalid_argument("chemistry: N overflows");
    return v < 1 ? 1 : static_cast<std::int64_t>(v);
}

std::vector<SparseRow> sparse_fraction_curve(const ChemistryModel& cm, const std::vector<double>& n_orb) {
    cm.model.check();
    const double tof = cm.model.toffoli_clifford_overhead + cm.model.xi * cm.model.toffoli_t_count;
    std::vector<SparseRow> rows;
    for (double no : n_orb) {
        SparseRow r;
        r.n_orb = no;
        r.items = cm.items(no);
        r.input_bits = std::max(1, static_cast<int>(std::bit_width(static_cast<std::uint64_t>(r.items - 1))));
        r.lookup = optimize_qrom(r.input_bits, r.input_bits + cm.mu, cm.model).cost.total;
        r.non_lookup = (cm.c_sel * no + cm.c_other) * tof;
        r.fraction_non_lookup = r.non_lookup / (r.lookup + r.non_lookup);
        rows.push_back(r);
    }
    return rows;
}

QpePair parallel_qpe_compare(QpeMode mode, double n_orb, double b_or_rank, double scale) {
    if (!(n_orb > 0) || !(b_or_rank > 0) || !(scale > 0)) throw std::invalid_argument("qpe: inputs must be positive");
    const double l32 = std::log2(1.5), l94 = std::log2(2.25);
    QpePair q;
    if (mode == QpeMode::sparse) {
        const double b = b_or_rank;
        q.standard = scale * std::pow(n_orb, b);
        q.mass_produced = scale * (n_orb + std::pow(n_orb, b * l32));
    } else {
        const double R = b_or_rank;
        q.standard = scale * (R * R + R * n_orb + n_orb);
        q.mass_produced = scale * (std::pow(R, l94) + std::pow(R, l32) * n_orb + n_orb);
    }
    q.ratio = q.standard / q.mass_produced;
    return q;
}

MaxCopies max_copies_cost(int n, int m, int a, const CostModel& model) {
    if (a < 1 || n <= a) throw InfeasiblePlan("max copies: need n > a >= 1");
    MaxCopies mc;
    const int t = n - a;
    bool first = true;
    for (std::int64_t lam = 1; lam <= (std::int64_t{1} << a); lam *= 2) {
        MassProductionPlan p{n, m, t, std::vector<int>(static_cast<std::size_t>(t), 1), lam};
        CostSummary s = cost_only(p, model);
        if (first || s.total < mc.cost.total) {
            mc.plan = p;
            mc.cost = s;
            first = false;
        }
    }
    const double single = optimize_qrom(n, m, model).cost.total;
    mc.improvement = std::ldexp(single, t) / mc.cost.total;
    return mc;
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("fit_slope: need two or more points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(ys.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if (sxx == 0) throw std::invalid_argument("fit_slope: xs are all equal");
    return sxy / sxx;
}

double improvement_exponent(int n_from, int n_to, int m, int a, const CostModel& model) {
    std::vector<double> xs, ys;
    for (int n = n_from; n <= n_to; ++n) {
        xs.push_back(n);
        ys.push_back(std::log2(max_copies_cost(n, m, a, model).improvement));
    }
    return fit_slope(xs, ys);
}

double kretschmer_counts(int n, double eps, KretschmerKind kind) {
    if (n < 1) throw std::invalid_argument("kretschmer: n must be >= 1");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("kretschmer: eps must lie in (0, 1)");
    if (kind == KretschmerKind::state) return 24.0 * std::ldexp(1.0, n) * (n + std::log2(6.0 / eps));
    return 60.0 * std::ldexp(1.0, 2 * n) * (2.0 * n + std::log2(15.0 / eps));
}

double mps_prep_cost(double n_sites, double chi, double eps, double c) {
    if (!(n_sites > 0) || chi < 1 || !(eps > 0.0 && eps < 1.0) || !(c > 0))
        throw std::invalid_argument("mps: need n_sites > 0, chi >= 1, eps in (0, 1), c > 0");
    return c * n_sites * (chi * chi + chi * std::log2(1.0 / eps));
}

}  // namespace qmp
