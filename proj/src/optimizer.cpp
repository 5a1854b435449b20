#include "qmp/optimizer.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <thread>

#include "json.hpp"
#include "qmp/qrom.hpp"

namespace qmp {

namespace {

// Lexicographic objective value. Additive, so the DP may work on keys.
struct Key {
    double primary = 0, secondary = 0;

    Key operator+(const Key& o) const { return {primary + o.primary, secondary + o.secondary}; }
    Key operator*(double k) const { return {primary * k, secondary * k}; }
    bool operator<(const Key& o) const {
        if (primary != o.primary) return primary < o.primary;
        return secondary < o.secondary;
    }
};

const Key kInf{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};

Key key_of(const CostSummary& s, Objective obj) {
    if (obj == Objective::toffoli) return {static_cast<double>(s.toffoli_count), s.total};
    return {s.total, 0};
}

Key key_of(const GateTally& t, const CostModel& model, Objective obj) { return key_of(summarize(t, model, 0), obj); }

int ceil_log2(int v) { return v <= 1 ? 0 : std::bit_width(static_cast<unsigned>(v - 1)); }

int k_limit(int n, const SearchOptions& o) { return o.k_max > 0 ? o.k_max : ceil_log2(n) + 1; }

int lambda_cap(int bits, const SearchOptions& o) {
    const int c = o.lambda_cap_log >= 0 ? o.lambda_cap_log : (bits + 1) / 2;
    return std::min(c, bits);
}

int depth_of(std::int64_t r) {
    if (r < 1 || !std::has_single_bit(static_cast<std::uint64_t>(r)))
        throw std::invalid_argument("r must be a power of two");
    return std::countr_zero(static_cast<std::uint64_t>(r));
}

}  // namespace

QromChoice optimize_qrom(int n, int m, const CostModel& model, const SearchOptions& opts) {
    model.check();
    QromChoice best;
    Key bk = kInf;
    const int cap = lambda_cap(n, opts);
    for (int a = 0; a <= cap; ++a) {
        const std::int64_t lam = std::int64_t{1} << a;
        CostSummary s = qroam_cost({n, m, lam, false}, model);
        const Key k = key_of(s, opts.objective);
        if (k < bk) {
            bk = k;
            best = {lam, s};
        }
    }
    return best;
}

namespace {

OptimizationResult finish(const MassProductionPlan& plan, int n, int m, const CostModel& model, std::int64_t r,
                          const SearchOptions& opts) {
    OptimizationResult res;
    res.plan = plan;
    res.cost_mp = cost_only(plan, model);
    QromChoice single = optimize_qrom(n, m, model, opts);
    res.naive_lambda = single.lambda;
    res.cost_naive = summarize(GateTally{}, model, 0);
    {
        // r independent copies run side by side
        CostSummary s = single.cost;
        s.clifford_count *= r;
        s.t_count *= r;
        s.toffoli_count *= r;
        s.measurement_count *= r;
        s.total *= static_cast<double>(r);
        s.qubit_count = static_cast<int>(single.cost.qubit_count * r);
        res.cost_naive = s;
    }
    auto ratio = [&](const CostSummary& num, const CostSummary& den) {
        if (opts.objective == Objective::toffoli)
            return static_cast<double>(num.toffoli_count) / static_cast<double>(den.toffoli_count);
        return num.total / den.total;
    };
    res.improvement_mp = ratio(res.cost_naive, res.cost_mp);
    res.improvement = std::max(1.0, res.improvement_mp);
    return res;
}

}  // namespace

OptimizationResult optimize_plan(int n, int m, const CostModel& model, std::int64_t r, const SearchOptions& opts) {
    model.check();
    const int t = depth_of(r);
    if (t >= n) throw InfeasiblePlan("no schedule with t = " + std::to_string(t) + " fits n = " + std::to_string(n));
    const int kmax = k_limit(n, opts);
    const Objective obj = opts.objective;

    MassProductionPlan best_plan;
    Key best_key = kInf;
    const GateTally route = route_tally(m);

    for (int la = 0; la < n; ++la) {
        const std::int64_t lam = std::int64_t{1} << la;
        // M[b][d]: best key for an MP over b bits with 2^d slots
        std::vector<std::vector<Key>> M(static_cast<std::size_t>(n + 1), std::vector<Key>(static_cast<std::size_t>(t + 1), kInf));
        std::vector<std::vector<int>> arg(static_cast<std::size_t>(n + 1), std::vector<int>(static_cast<std::size_t>(t + 1), 0));
        std::vector<Key> Mc(static_cast<std::size_t>(n + 1), kInf);
        bool any_leaf = false;
        for (int b = 1; b <= n; ++b) {
            if (la > lambda_cap(b, opts)) continue;
            M[static_cast<std::size_t>(b)][0] = key_of(qroam_tally({b, m, lam, false}), model, obj);
            Mc[static_cast<std::size_t>(b)] = key_of(qroam_tally({b, m, lam, true}), model, obj);
            any_leaf = true;
        }
        if (!any_leaf) break;
        for (int d = 1; d <= t; ++d) {
            const double cells = std::ldexp(1.0, d - 1);
            for (int b = 2; b <= n; ++b) {
                Key best = kInf;
                int bk = 0;
                for (int k = 1; k <= kmax && b - k >= 1; ++k) {
                    const Key& sub = M[static_cast<std::size_t>(b - k)][static_cast<std::size_t>(d - 1)];
                    if (!(sub < kInf)) continue;
                    const double rounds = std::ldexp(1.0, k);
                    Key v = key_of(cell_tally(k, b - k, m), model, obj) * cells + sub;
                    if (d == 1)
                        v = v + Mc[static_cast<std::size_t>(b - k)] * rounds;
                    else
                        v = v + (key_of(route, model, obj) * cells + sub) * rounds;
                    if (v < best) {
                        best = v;
                        bk = k;
                    }
                }
                M[static_cast<std::size_t>(b)][static_cast<std::size_t>(d)] = best;
                arg[static_cast<std::size_t>(b)][static_cast<std::size_t>(d)] = bk;
            }
        }
        const Key top = M[static_cast<std::size_t>(n)][static_cast<std::size_t>(t)];
        if (!(top < kInf)) continue;
        MassProductionPlan p{n, m, t, {}, lam};
        for (int d = t, b = n; d > 0; --d) {
            const int k = arg[static_cast<std::size_t>(b)][static_cast<std::size_t>(d)];
            p.k_schedule.push_back(k);
            b -= k;
        }
        const Key exact = key_of(cost_only(p, model), obj);
        if (exact < best_key) {
            best_key = exact;
            best_plan = p;
        }
    }
    if (!(best_key < kInf)) throw InfeasiblePlan("no feasible plan");
    return finish(best_plan, n, m, model, r, opts);
}

OptimizationResult brute_force_plan(int n, int m, const CostModel& model, std::int64_t r, const SearchOptions& opts) {
    model.check();
    const int t = depth_of(r);
    if (t >= n) throw InfeasiblePlan("no schedule fits");
    const int kmax = k_limit(n, opts);
    std::vector<std::vector<int>> scheds{{}};
    for (int d = 0; d < t; ++d) {
        std::vector<std::vector<int>> next;
        for (auto& s : scheds)
            for (int k = 1; k <= kmax; ++k) {
                auto s2 = s;
                s2.push_back(k);
                next.push_back(std::move(s2));
            }
        scheds = std::move(next);
    }
    MassProductionPlan best;
    Key bk = kInf;
    for (auto& s : scheds) {
        int sum = 0;
        for (int k : s) sum += k;
        if (sum >= n) continue;
        const int leaf = n - sum;
        for (int la = 0; la <= lambda_cap(leaf, opts); ++la) {
            MassProductionPlan p{n, m, t, s, std::int64_t{1} << la};
            const Key k = key_of(cost_only(p, model), opts.objective);
            if (k < bk) {
                bk = k;
                best = p;
            }
        }
    }
    if (!(bk < kInf)) throw InfeasiblePlan("no feasible plan");
    return finish(best, n, m, model, r, opts);
}

double fraction_non_lookup(const MassProductionPlan& plan, const CostModel& model) {
    const TaggedCost tc = cost_only_tagged(plan, model);
    const double total = tc.control.total + tc.lookup.total;
    return total > 0 ? tc.control.total / total : 0.0;
}

void SweepSpec::check() const {
    if (n.empty() || xi.empty() || r.empty()) throw std::invalid_argument("sweep: every axis needs at least one value");
    if (m.empty()) throw std::invalid_argument("sweep: every axis needs at least one value");
    for (int v : m)
        if (v < 1) throw std::invalid_argument("sweep: m must be >= 1");
    for (double x : xi)
        if (!(x >= 1.0)) throw std::invalid_argument("sweep: xi must be >= 1");
    for (auto v : r) depth_of(v);
}

SweepSpec sweep_spec_from_json(const std::string& s) {
    const auto j = nlohmann::json::parse(s);
    SweepSpec spec;
    const auto& jn = j.at("n");
    if (jn.is_object()) {
        for (int v = jn.at("from").get<int>(); v <= jn.at("to").get<int>(); ++v) spec.n.push_back(v);
    } else {
        spec.n = jn.get<std::vector<int>>();
    }
    if (j.contains("m")) {
        const auto& jm = j.at("m");
        spec.m = jm.is_array() ? jm.get<std::vector<int>>() : std::vector<int>{jm.get<int>()};
    }
    if (j.contains("xi")) spec.xi = j.at("xi").get<std::vector<double>>();
    spec.r = j.at("r").get<std::vector<std::int64_t>>();
    spec.toffoli_only = j.value("toffoli_only", false);
    spec.skip_infeasible = j.value("skip_infeasible", false);
    spec.k_max = j.value("k_max", 0);
    spec.lambda_cap_log = j.value("lambda_cap_log", -1);
    spec.check();
    return spec;
}

int worker_count() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("QMP_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) hw = std::min(hw, v);
    }
    return hw;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    spec.check();
    struct Point {
        int m;
        int n;
        double xi;
        std::int64_t r;
    };
    std::vector<Point> pts;
    for (int m : spec.m)
        for (int n : spec.n)
            for (double xi : spec.xi)
                for (auto r : spec.r) pts.push_back({m, n, xi, r});
    std::vector<SweepRow> rows(pts.size());
    std::vector<std::string> errors(pts.size());
    std::vector<char> skipped(pts.size(), 0);

    auto eval = [&](std::size_t i) {
        const Point& p = pts[i];
        CostModel cm;
        cm.xi = p.xi;
        SearchOptions so;
        so.objective = spec.toffoli_only ? Objective::toffoli : Objective::total;
        so.k_max = spec.k_max;
        so.lambda_cap_log = spec.lambda_cap_log;
        SweepRow row;
        row.n = p.n;
        row.m = p.m;
        row.xi = spec.toffoli_only ? std::numeric_limits<double>::infinity() : p.xi;
        row.r = p.r;
        try {
            auto res = optimize_plan(p.n, p.m, cm, p.r, so);
            row.lambda = res.plan.lambda_leaf;
            row.k_schedule = res.plan.schedule_string('-');
            row.clifford = res.cost_mp.clifford_count;
            row.t_count = res.cost_mp.t_count;
            row.toffoli = res.cost_mp.toffoli_count;
            if (spec.toffoli_only) {
                row.cost_naive = static_cast<double>(res.cost_naive.toffoli_count);
                row.cost_mp = static_cast<double>(res.cost_mp.toffoli_count);
            } else {
                row.cost_naive = res.cost_naive.total;
                row.cost_mp = res.cost_mp.total;
            }
            row.improvement = res.improvement;
            row.improvement_mp = res.improvement_mp;
            row.fraction_non_lookup = fraction_non_lookup(res.plan, cm);
        } catch (const InfeasiblePlan& e) {
            if (!spec.skip_infeasible) errors[i] = e.what();
            skipped[i] = 1;
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
        rows[i] = row;
    };

    const int nw = std::min<int>(worker_count(), static_cast<int>(pts.size()));
    if (nw <= 1) {
        for (std::size_t i = 0; i < pts.size(); ++i) eval(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < nw; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < pts.size(); i = next++) eval(i);
            });
        for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (!errors[i].empty())
            throw std::invalid_argument("sweep point n=" + std::to_string(pts[i].n) + " r=" + std::to_string(pts[i].r) +
                                        ": " + errors[i]);
    std::vector<SweepRow> kept;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (!skipped[i]) kept.push_back(rows[i]);
    return kept;
}

const char* sweep_csv_header() {
    return "n,m,xi,r,lambda,k_schedule,clifford,t_count,toffoli,cost_naive,cost_mp,improvement,fraction_non_lookup";
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << sweep_csv_header() << "\n";
    const auto flags = os.flags();
    const auto prec = os.precision();
    os << std::setprecision(6);
    for (const auto& r : rows) {
        os << r.n << "," << r.m << ",";
        if (std::isinf(r.xi))
            os << "inf";
        else
            os << r.xi;
        os << "," << r.r << "," << r.lambda << "," << r.k_schedule << "," << r.clifford << "," << r.t_count << ","
           << r.toffoli << "," << r.cost_naive << "," << r.cost_mp << "," << r.improvement << ","
           << r.fraction_non_lookup << "\n";
    }
    os.flags(flags);
    os.precision(prec);
}

}  // namespace qmp
