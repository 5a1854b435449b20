// Acceptance checks. One line per criterion; exit status 1 if any fails.
// Usage: acceptance [criterion numbers...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qmp/apps.hpp"
#include "qmp/cost.hpp"
#include "qmp/massprod.hpp"
#include "qmp/optimizer.hpp"
#include "qmp/qrom.hpp"
#include "qmp/resource.hpp"
#include "qmp/table.hpp"
#include "qmp/verify.hpp"

using namespace qmp;

namespace {

// Pinned tolerances and windows.
constexpr int kTablesPerPoint = 20;
constexpr int kMirrorMinPoints = 200;
constexpr double kFig2Lo = 50, kFig2Hi = 500;
constexpr double kToffoliSlack = 1e-9;
constexpr double kGrowthLo = 2.7, kGrowthHi = 3.3;
constexpr double kExpLo = 0.35, kExpHi = 0.48;
constexpr double kProbTol = 1e-9;
constexpr double kAmortMax = 0.65;
constexpr double kCorrLo = 0.45, kCorrHi = 0.55;
constexpr int kRandomGInstances = 100;
constexpr double kIdentityTol = 1e-12;
constexpr double kSpeedLo = 0.8, kSpeedHi = 1.25;
constexpr int kBitsLo = 14, kBitsHi = 18;

const std::vector<std::int64_t> kRGrid{2, 8, 32, 128, 512, 2048};
const std::vector<double> kXiGrid{1, 2, 5, 10, 30, 100, 300};

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

// All schedules of length t with entries >= 1 and sum < n.
std::vector<std::vector<int>> schedules(int n, int t, int kmax) {
    std::vector<std::vector<int>> out{{}};
    for (int d = 0; d < t; ++d) {
        std::vector<std::vector<int>> next;
        for (auto& s : out)
            for (int k = 1; k <= kmax; ++k) {
                auto s2 = s;
                s2.push_back(k);
                int sum = 0;
                for (int v : s2) sum += v;
                if (sum < n) next.push_back(s2);
            }
        out = next;
    }
    return out;
}

Outcome semantic_correctness() {
    std::int64_t circuits = 0, inputs = 0, failed = 0;
    std::string first;
    for (int n = 1; n <= 5; ++n)
        for (int m = 1; m <= 2; ++m)
            for (int t = 0; t <= 2; ++t)
                for (auto& s : schedules(n, t, n))
                    for (std::int64_t lam : {2, 4}) {
                        int sum = 0;
                        for (int k : s) sum += k;
                        if (lam > (std::int64_t{1} << (n - sum))) continue;
                        MassProductionPlan p{n, m, t, s, lam};
                        for (int i = 0; i < kTablesPerPoint; ++i) {
                            auto f = random_table(n, m, static_cast<std::uint64_t>(1000003 * n + 10007 * m + 101 * t + 7 * lam + i) ^
                                                            std::hash<std::string>{}(p.schedule_string()));
                            auto rep = check_mass_production(f, p);
                            ++circuits;
                            inputs += static_cast<std::int64_t>(rep.inputs);
                            if (!rep.ok()) {
                                ++failed;
                                if (first.empty()) first = plan_to_json(p) + ": " + rep.first_failure;
                            }
                        }
                    }
    std::string d = std::to_string(circuits) + " circuits, " + std::to_string(inputs) + " basis inputs, " +
                    std::to_string(failed) + " failing";
    if (!first.empty()) d += "; first: " + first;
    return {failed == 0 && circuits > 0, d};
}

std::vector<MassProductionPlan> count_grid() {
    std::vector<MassProductionPlan> g;
    for (int n = 2; n <= 12; n += 1)
        for (int m : {1, 4, 16})
            for (int t = 0; t <= 2; ++t)
                for (auto& s : schedules(n, t, 2)) {
                    int sum = 0;
                    for (int k : s) sum += k;
                    for (std::int64_t lam = 1; lam <= (std::int64_t{1} << (n - sum)) && lam <= 8; lam *= 4)
                        g.push_back({n, m, t, s, lam});
                }
    return g;
}

Outcome count_mirror() {
    CostModel cm;
    cm.counting_mode = CountingMode::upper_bound;
    int points = 0, bad = 0;
    std::string first;
    for (const auto& p : count_grid()) {
        FunctionTable f = random_table(p.n, p.m, static_cast<std::uint64_t>(points));
        auto a = count_costs(build_mass_production(f, p), cm);
        auto b = cost_only(p, cm);
        ++points;
        if (!a.same_counts(b) || a.qubit_count != b.qubit_count || a.total != b.total) {
            ++bad;
            if (first.empty()) first = plan_to_json(p);
        }
    }
    std::string d = std::to_string(points) + " points, " + std::to_string(bad) + " deviations";
    if (!first.empty()) d += "; first: " + first;
    return {bad == 0 && points >= kMirrorMinPoints, d};
}

Outcome qroam_formula() {
    int points = 0, bad = 0;
    std::set<std::int64_t> offsets;
    for (int n = 1; n <= 12; ++n)
        for (int m : {1, 4, 16})
            for (std::int64_t lam = 2; lam <= (std::int64_t{1} << n) && lam <= 64; lam *= 2)
                for (bool ctl : {false, true}) {
                    FunctionTable f = random_table(n, m, static_cast<std::uint64_t>(n * 131 + m));
                    auto q = ctl ? build_qroam_controlled(f, lam) : build_qroam_modified(f, lam);
                    const std::int64_t built = count_costs(q.circuit, {}).toffoli_count;
                    const std::int64_t want = ((std::int64_t{1} << n) + lam - 1) / lam + m * (lam - 1);
                    ++points;
                    if (built != want) {
                        ++bad;
                        offsets.insert(built - want);
                    }
                }
    std::string d = std::to_string(points) + " points, " + std::to_string(bad) + " mismatches";
    if (!offsets.empty()) {
        d += "; builder minus formula in {";
        bool firstv = true;
        for (auto o : offsets) {
            d += (firstv ? "" : ",") + std::to_string(o);
            firstv = false;
        }
        d += "} (unary iteration uses 2^a-1 Toffolis controlled, 2^a-2 uncontrolled)";
    }
    return {bad == 0, d};
}

Outcome fig2() {
    CostModel cm;
    const double at = optimize_plan(30, 40, cm, 2048).improvement_mp;
    bool mono = true;
    std::string where;
    for (auto r : kRGrid) {
        double prev = 0;
        for (int n = 10; n <= 30; ++n) {
            if ((std::int64_t{1} << (n - 1)) < r) continue;
            const double v = optimize_plan(n, 40, cm, r).improvement_mp;
            if (v < prev) {
                mono = false;
                if (where.empty()) where = " (drop at n=" + std::to_string(n) + ", r=" + std::to_string(r) + ")";
            }
            prev = v;
        }
    }
    const bool in = at >= kFig2Lo && at <= kFig2Hi;
    return {in && mono, "improvement(n=30, r=2048) = " + fmt("%.2f", at) + ", monotone in n: " + (mono ? "yes" : "no") + where};
}

Outcome fig3() {
    bool mono = true;
    std::string where;
    for (auto r : kRGrid) {
        double prev = 1e300;
        for (double xi : kXiGrid) {
            CostModel cm;
            cm.xi = xi;
            const double v = optimize_plan(20, 40, cm, r).improvement_mp;
            if (v > prev) {
                mono = false;
                if (where.empty()) where = "; rise at xi=" + fmt("%g", xi) + ", r=" + std::to_string(r);
            }
            prev = v;
        }
    }
    return {mono, std::string("n=20, m=40, non-increasing in xi for every r: ") + (mono ? "yes" : "no") + where};
}

Outcome toffoli_only() {
    SearchOptions so;
    so.objective = Objective::toffoli;
    double worst = 0;
    int points = 0;
    for (int n = 10; n <= 30; ++n)
        for (auto r : kRGrid) {
            if ((std::int64_t{1} << (n - 1)) < r) continue;
            worst = std::max(worst, optimize_plan(n, 40, {}, r, so).improvement_mp);
            ++points;
        }
    return {worst <= 1 + kToffoliSlack, std::to_string(points) + " points, max improvement " + fmt("%.6f", worst)};
}

Outcome proposition() {
    CostModel cm;
    double lo = 1e300, hi = 0;
    for (int n = 12; n <= 20; ++n) {
        const double g = max_copies_cost(n + 1, 40, 4, cm).cost.total / max_copies_cost(n, 40, 4, cm).cost.total;
        lo = std::min(lo, g);
        hi = std::max(hi, g);
    }
    const double e = improvement_exponent(12, 22, 40, 4, cm);
    const bool ok = lo >= kGrowthLo && hi <= kGrowthHi && e >= kExpLo && e <= kExpHi;
    return {ok, "cost growth in [" + fmt("%.4f", lo) + ", " + fmt("%.4f", hi) + "], exponent " + fmt("%.4f", e) +
                    " (2 - log2 3 = " + fmt("%.4f", 2 - std::log2(3.0)) + ")"};
}

Outcome resource_state() {
    int runs = 0, bad = 0;
    double worst_p = 0;
    for (int n = 1; n <= 5; ++n)
        for (int m = 1; m <= 2; ++m) {
            auto f = random_table(n, m, static_cast<std::uint64_t>(77 * n + m));
            const double want = std::ldexp(1.0, -n);
            for (std::uint64_t x = 0; x < f.size(); ++x) {
                auto br = serial_query(f, x, MeasurementPolicy::all(), n >= 2 ? 2 : 1, n >= 3 ? 2 : 1);
                if (br.size() != f.size()) ++bad;
                for (const auto& b : br) {
                    ++runs;
                    worst_p = std::max(worst_p, std::abs(b.probability - want));
                    if (!b.output_ok || !b.input_ok || !b.ancilla_clean) ++bad;
                }
            }
        }
    CostModel cm;
    auto a = amortized_cost(16, 40, 64, cm);
    const bool sem = bad == 0 && worst_p <= kProbTol;
    const bool amort = a.ratio <= kAmortMax;
    const bool corr = a.correction_ratio >= kCorrLo && a.correction_ratio <= kCorrHi;
    std::string d = std::to_string(runs) + " (x, b) branches, " + std::to_string(bad) + " bad, max prob error " +
                    fmt("%.2e", worst_p) + "; amortized ratio(c=64) " + fmt("%.4f", a.ratio) + " (need <= 0.65); correction ratio " +
                    fmt("%.4f", a.correction_ratio);
    return {sem && amort && corr, d};
}

Outcome g_family() {
    std::int64_t checks = 0, bad = 0;
    auto check = [&](const FunctionTable& f, int k) {
        auto fam = build_g_family(f, k);
        const std::uint64_t top = std::uint64_t{1} << k;
        const std::uint64_t zs = std::uint64_t{1} << (f.n() - k);
        std::vector<Word> acc(zs, 0);
        // suffix sums from the top: g_{l+1} ^ ... ^ g_{2^k}
        std::vector<std::vector<Word>> hi(top + 1, std::vector<Word>(zs, 0));
        for (std::uint64_t l = top; l-- > 0;)
            for (std::uint64_t z = 0; z < zs; ++z) hi[l][z] = hi[l + 1][z] ^ fam.members[l + 1](z);
        for (std::uint64_t l = 0; l < top; ++l)
            for (std::uint64_t z = 0; z < zs; ++z) {
                acc[z] ^= fam.members[l](z);
                const Word direct = f((l << (f.n() - k)) | z);
                ++checks;
                if (acc[z] != direct || hi[l][z] != direct) ++bad;
            }
    };
    for (int n = 1; n <= 10; ++n)
        for (int k = 1; k <= 4 && k < n; ++k) check(random_table(n, 8, static_cast<std::uint64_t>(n * 10 + k)), k);
    std::mt19937_64 rng(2024);
    for (int i = 0; i < kRandomGInstances; ++i) {
        const int n = 11 + static_cast<int>(rng() % 6);
        const int k = 1 + static_cast<int>(rng() % 6);
        const int m = 1 + static_cast<int>(rng() % 40);
        check(random_table(n, m, rng()), k);
    }
    return {bad == 0, std::to_string(checks) + " (l, z) checks, " + std::to_string(bad) + " failures"};
}

Outcome amp_amp() {
    double worst = 0;
    for (double p : {1e-6, 1e-4, 1e-2, 0.2})
        for (std::int64_t r : {1, 2, 4, 16, 64, 1000}) {
            worst = std::max(worst, std::abs((1 - p_r(p, r)) - std::pow(1 - p, static_cast<double>(r))));
        }
    bool win = true;
    std::string d = "identity error " + fmt("%.1e", worst) + "; speedup/sqrt(r):";
    for (std::int64_t r : {4, 16, 64}) {
        AmpAmpParams a;
        a.p = 1e-4;
        a.r = r;
        const double s = amp_amp_cost(a, 10, 8).speedup / std::sqrt(static_cast<double>(r));
        win = win && s >= kSpeedLo && s <= kSpeedHi;
        d += " " + fmt("%.4f", s);
    }
    return {worst <= kIdentityTol && win, d};
}

Outcome chemistry() {
    std::vector<double> grid;
    for (int no = 100; no <= 200; no += 10) grid.push_back(no);
    struct Cal {
        const char* name;
        double b, a;
    };
    const Cal cals[] = {{"b=1.78, a=4", 1.78, 4.0}, {"b=3.83, a=2^-12", 3.83, std::ldexp(1.0, -12)}};
    bool any = false;
    std::string d;
    for (const auto& c : cals) {
        ChemistryModel cm;
        cm.b = c.b;
        cm.a = c.a;
        int lo = 99, hi = 0;
        for (const auto& r : sparse_fraction_curve(cm, grid)) {
            lo = std::min(lo, r.input_bits);
            hi = std::max(hi, r.input_bits);
        }
        const bool ok = lo >= kBitsLo && hi <= kBitsHi;
        any = any || ok;
        d += std::string(d.empty() ? "" : "; ") + c.name + ": bits " + std::to_string(lo) + ".." + std::to_string(hi);
    }
    return {any, d};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> all{
        {"semantic correctness", semantic_correctness},
        {"count mirror", count_mirror},
        {"qroam toffoli formula", qroam_formula},
        {"improvement at n=30", fig2},
        {"xi suppression", fig3},
        {"toffoli-only", toffoli_only},
        {"max-copies scaling", proposition},
        {"resource-state protocol", resource_state},
        {"g-family identities", g_family},
        {"amplitude amplification", amp_amp},
        {"chemistry input bits", chemistry},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    int failed = 0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        const int id = static_cast<int>(i + 1);
        if (!only.empty() && !only.count(id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = all[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %2d %s  %s: %s [%.1fs]\n", id, o.pass ? "PASS" : "FAIL", all[i].first, o.detail.c_str(), s);
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
