#include <random>

#include "doctest.h"
#include "qmp/cost.hpp"
#include "qmp/massprod.hpp"
#include "qmp/qrom.hpp"
#include "qmp/sim.hpp"

using namespace qmp;

namespace {

struct Layout {
    std::vector<int> x, out;
};

Layout layout(const Circuit& c, int r) {
    Layout l;
    for (int i = 0; i < r; ++i) {
        l.x.push_back(c.reg("x" + std::to_string(i)).start);
        l.out.push_back(c.reg("out" + std::to_string(i)).start);
    }
    return l;
}

// Runs one basis input through every branch and compares against r
// independent table lookups.
int mismatches(const Circuit& c, const FunctionTable& f, const std::vector<std::uint64_t>& xs,
               const std::vector<std::uint64_t>& as, const SimOptions& opts) {
    const int r = static_cast<int>(xs.size());
    Layout l = layout(c, r);
    std::uint64_t in = 0, want = 0;
    for (int i = 0; i < r; ++i) {
        in |= xs[static_cast<std::size_t>(i)] << l.x[static_cast<std::size_t>(i)];
        in |= as[static_cast<std::size_t>(i)] << l.out[static_cast<std::size_t>(i)];
        want |= xs[static_cast<std::size_t>(i)] << l.x[static_cast<std::size_t>(i)];
        want |= (as[static_cast<std::size_t>(i)] ^ f(xs[static_cast<std::size_t>(i)])) << l.out[static_cast<std::size_t>(i)];
    }
    int bad = 0;
    double tot = 0;
    for (auto& rr : run(c, in, MeasurementPolicy::all(), opts)) {
        tot += rr.probability;
        auto b = rr.state.as_basis();
        if (!b || *b != want) ++bad;
    }
    if (std::abs(tot - 1.0) > 1e-9) ++bad;
    return bad;
}

}  // namespace

TEST_CASE("routing model invariant") {
    for (int k = 1; k <= 4; ++k) {
        const std::uint64_t top = 1ULL << k;
        for (std::uint64_t xl = 0; xl < top; ++xl)
            for (std::uint64_t yl = xl; yl < top; ++yl)
                for (std::uint64_t l = 0; l <= top; ++l) {
                    auto s = routing_state(l, xl, yl);
                    CHECK(s.control == (l <= xl || l > yl));
                    CHECK(s.swapped == (l > yl));
                }
    }
    // x_L = 0, y_L = 1, k = 1: G_1 is skipped, G_2 hits the swapped side
    CHECK(routing_state(1, 0, 1).control == false);
    CHECK(routing_state(2, 0, 1).control == true);
    CHECK(routing_state(2, 0, 1).swapped == true);
}

TEST_CASE("advance gate semantics") {
    for (int k = 1; k <= 3; ++k)
        for (int nr : {1, 2})
            for (std::uint64_t l = 0; l < (1ULL << k); ++l) {
                Circuit c = build_advance(l, k, nr, 1);
                const int w = 1 + 2 * k + 2 * nr + 2;  // without scratch
                for (std::uint64_t in = 0; in < (1ULL << w); ++in) {
                    const std::uint64_t cbit = in & 1U;
                    const std::uint64_t xl = (in >> 1) & ((1ULL << k) - 1);
                    const std::uint64_t yl = (in >> (1 + k)) & ((1ULL << k) - 1);
                    const std::uint64_t xr = (in >> (1 + 2 * k)) & ((1ULL << nr) - 1);
                    const std::uint64_t yr = (in >> (1 + 2 * k + nr)) & ((1ULL << nr) - 1);
                    const std::uint64_t al = (in >> (1 + 2 * k + 2 * nr)) & 1U;
                    const std::uint64_t be = (in >> (2 + 2 * k + 2 * nr)) & 1U;
                    std::uint64_t c2 = cbit ^ (xl == l) ^ (yl == l);
                    std::uint64_t xr2 = xr, yr2 = yr, al2 = al, be2 = be;
                    if (yl == l) {
                        std::swap(xr2, yr2);
                        std::swap(al2, be2);
                    }
                    const std::uint64_t want = c2 | (xl << 1) | (yl << (1 + k)) | (xr2 << (1 + 2 * k)) |
                                               (yr2 << (1 + 2 * k + nr)) | (al2 << (1 + 2 * k + 2 * nr)) |
                                               (be2 << (2 + 2 * k + 2 * nr));
                    for (auto& rr : run(c, in, MeasurementPolicy::all())) CHECK(rr.state.as_basis() == want);
                }
            }
}

TEST_CASE("two copy: every table at n=2") {
    for (Word e = 0; e < 16; ++e) {
        FunctionTable f(2, 1, {e & 1, (e >> 1) & 1, (e >> 2) & 1, (e >> 3) & 1});
        Circuit c = build_two_copy(f, 1, 1);
        int bad = 0;
        for (std::uint64_t x = 0; x < 4; ++x)
            for (std::uint64_t y = 0; y < 4; ++y)
                for (std::uint64_t a = 0; a < 2; ++a)
                    for (std::uint64_t b = 0; b < 2; ++b) bad += mismatches(c, f, {x, y}, {a, b}, {});
        CHECK(bad == 0);
    }
}

TEST_CASE("two copy with lambda and wider outputs") {
    for (int n = 2; n <= 4; ++n)
        for (int k = 1; k < n; ++k)
            for (std::int64_t lam = 1; lam <= 2 && lam <= (1LL << (n - k)); lam *= 2) {
                auto f = random_table(n, 2, 71 * n + 7 * k + lam);
                Circuit c = build_two_copy(f, k, lam);
                int bad = 0;
                for (std::uint64_t x = 0; x < f.size(); ++x)
                    for (std::uint64_t y = 0; y < f.size(); ++y) bad += mismatches(c, f, {x, y}, {x & 3, 3 - (y & 3)}, {});
                CHECK(bad == 0);
            }
}

TEST_CASE("four copies n=3 k=[1,1]") {
    auto f = random_table(3, 1, 5);
    MassProductionPlan p{3, 1, 2, {1, 1}, 1};
    Circuit c = build_mass_production(f, p);
    SimOptions o;
    o.width_cap = 64;
    int bad = 0;
    for (std::uint64_t in = 0; in < (1ULL << 16); in += 7) {
        std::vector<std::uint64_t> xs, as;
        for (int i = 0; i < 4; ++i) {
            xs.push_back((in >> (4 * i)) & 7);
            as.push_back((in >> (4 * i + 3)) & 1);
        }
        bad += mismatches(c, f, xs, as, o);
    }
    CHECK(bad == 0);
}

TEST_CASE("t=0 is the plain lookup") {
    auto f = random_table(5, 3, 2);
    MassProductionPlan p{5, 3, 0, {}, 4};
    Circuit a = build_mass_production(f, p);
    Circuit b = build_qroam_modified(f, 4).circuit;
    CHECK(a.gates().size() == b.gates().size());
    CHECK(tally_gates(a) == tally_gates(b));
    CHECK(a.width() == b.width());
    CostModel cm;
    CHECK(cost_only(p, cm).same_counts(qroam_cost({5, 3, 4, false}, cm)));
}

TEST_CASE("cost_only mirrors the builder") {
    int points = 0;
    for (int n = 2; n <= 9; ++n)
        for (int m : {1, 2, 5})
            for (int t = 0; t <= 3; ++t) {
                std::vector<std::vector<int>> scheds{{}};
                for (int d = 0; d < t; ++d) {
                    std::vector<std::vector<int>> next;
                    for (auto& s : scheds)
                        for (int k = 1; k <= 3; ++k) {
                            auto s2 = s;
                            s2.push_back(k);
                            next.push_back(s2);
                        }
                    scheds = next;
                }
                for (auto& s : scheds) {
                    int sum = 0;
                    for (int k : s) sum += k;
                    if (sum >= n) continue;
                    for (std::int64_t lam = 1; lam <= (1LL << (n - sum)) && lam <= 4; lam *= 2) {
                        MassProductionPlan p{n, m, t, s, lam};
                        FunctionTable ones(n, m, std::vector<Word>(1ULL << n, (1ULL << m) - 1));
                        Circuit c = build_mass_production(ones, p);
                        MassCost mc = mass_tally(p);
                        // g-members of an all-ones table are zero, so emitted data
                        // gates differ from the slot count; the slots must agree
                        GateTally a = tally_gates(c), al = tally_gates(c, Tag::lookup);
                        a.data = mc.tally.data;
                        al.data = mc.lookup_tally.data;
                        CHECK(a == mc.tally);
                        CHECK(al == mc.lookup_tally);
                        CostModel cm;
                        cm.xi = 2.5;
                        CHECK(count_costs(c, cm).same_counts(cost_only(p, cm)));
                        CHECK(c.width() == mc.width);
                        CHECK(validate(c).empty());
                        ++points;
                    }
                }
            }
    CHECK(points >= 200);
}

TEST_CASE("plan json and schedule parsing") {
    MassProductionPlan p{12, 8, 3, {2, 2, 1}, 4};
    auto q = plan_from_json(plan_to_json(p));
    CHECK(q.k_schedule == p.k_schedule);
    CHECK(q.lambda_leaf == 4);
    CHECK(p.schedule_string() == "2-2-1");
    CHECK(parse_schedule("1,1,2") == std::vector<int>{1, 1, 2});
    CHECK(parse_schedule("3-1") == std::vector<int>{3, 1});
    CHECK_THROWS(parse_schedule("1,x"));
    MassProductionPlan bad{4, 1, 2, {2, 2}, 1};
    CHECK_THROWS(bad.check());
}

TEST_CASE("fraction of lookup cost") {
    CostModel cm;
    MassProductionPlan p0{8, 4, 0, {}, 2};
    auto t0 = cost_only_tagged(p0, cm);
    CHECK(t0.control.total == 0.0);
    MassProductionPlan p1{6, 2, 1, {1}, 2};
    FunctionTable ones(6, 2, std::vector<Word>(64, 3));
    auto byc = count_costs_by_tag(build_mass_production(ones, p1), cm);
    auto cf = cost_only_tagged(p1, cm);
    CHECK(byc.control.same_counts(cf.control));
    CHECK(byc.lookup.same_counts(cf.lookup));
}
