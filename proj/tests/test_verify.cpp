#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "qmp/massprod.hpp"
#include "qmp/qrom.hpp"
#include "qmp/sim.hpp"
#include "qmp/verify.hpp"

using namespace qmp;

namespace {

// Independent oracle: a random superposition over x and the initial output
// (and ctrl), run through the sparse simulator over every branch. Each
// branch must equal the ideal lookup state up to a global phase. Random
// amplitudes matter: a uniform output superposition is blind to XORs.
bool sim_ok(const Circuit& c, const FunctionTable& f, const std::string& ctrl = "") {
    const Register& x = c.reg("x");
    const Register& out = c.reg("out");
    const int cq = ctrl.empty() ? -1 : c.reg(ctrl).start;
    std::mt19937_64 rng(99);
    std::normal_distribution<double> nd;
    StateVector in(c.width()), want(c.width());
    for (std::uint64_t xv = 0; xv < f.size(); ++xv)
        for (std::uint64_t a = 0; a <= f.mask(); ++a)
            for (int cv = 0; cv <= (cq >= 0 ? 1 : 0); ++cv) {
                std::uint64_t b = (xv << x.start) | (a << out.start);
                const bool on = cq < 0 || cv == 1;
                if (cq >= 0 && cv) b |= 1ULL << cq;
                const std::uint64_t o = on ? a ^ f(xv) : a;
                const Amp amp(nd(rng), nd(rng));
                in.terms().push_back({b, amp});
                want.terms().push_back({(b & ~(f.mask() << out.start)) | (o << out.start), amp});
            }
    in.canonicalize();
    want.canonicalize();
    const double n0 = in.norm();
    for (auto& t : in.terms()) t.second /= n0;
    for (auto& t : want.terms()) t.second /= n0;
    try {
        for (auto& r : run(c, in, MeasurementPolicy{})) {
            StateVector s = r.state;
            const double nrm = s.norm();
            for (auto& t : s.terms()) t.second /= nrm;
            if (s.fidelity(want) < 1 - 1e-9) return false;
        }
    } catch (const SimError&) {
        return false;
    }
    return true;
}

// The checker is sound but not complete: it may reject a correct circuit
// that leaves its fragment, and must say so, but never accepts a wrong one.
void compare_with_sim(const Circuit& c, const FunctionTable& f, const std::string& cn, int& fragment) {
    auto rep = check_lookup_circuit(c, f, {{"x", "out"}}, cn);
    const bool s = sim_ok(c, f, cn);
    if (rep.ok()) {
        CHECK(s);
    } else if (s) {
        CHECK(rep.first_failure.rfind("gate ", 0) == 0);
        ++fragment;
    }
}

}  // namespace

TEST_CASE("lookup circuits pass the exhaustive check") {
    for (int n = 1; n <= 5; ++n)
        for (int m = 1; m <= 3; ++m) {
            auto f = random_table(n, m, static_cast<std::uint64_t>(17 * n + m));
            auto plain = build_plain_qrom(f, false);
            CHECK(check_lookup_circuit(plain.circuit, f, {{"x", "out"}}).ok());
            auto pc = build_plain_qrom(f, true);
            CHECK(check_lookup_circuit(pc.circuit, f, {{"x", "out"}}, "ctrl").ok());
            for (std::int64_t lam = 1; lam <= (std::int64_t{1} << n); lam *= 2) {
                auto q = build_qroam_modified(f, lam);
                auto rep = check_lookup_circuit(q.circuit, f, {{"x", "out"}});
                CHECK_MESSAGE(rep.ok(), rep.first_failure);
                CHECK(rep.inputs == (std::uint64_t{1} << n));
                auto qc = build_qroam_controlled(f, lam);
                CHECK(check_lookup_circuit(qc.circuit, f, {{"x", "out"}}, "ctrl").ok());
            }
        }
}

TEST_CASE("mass production passes the exhaustive check") {
    for (int n = 2; n <= 4; ++n)
        for (int m = 1; m <= 2; ++m) {
            auto f = random_table(n, m, static_cast<std::uint64_t>(5 * n + m));
            for (int k = 1; k < n; ++k)
                for (std::int64_t lam : {1, 2}) {
                    auto rep = check_mass_production(f, {n, m, 1, {k}, lam});
                    CHECK_MESSAGE(rep.ok(), rep.first_failure);
                    CHECK(rep.inputs == (std::uint64_t{1} << (2 * n)));
                }
        }
    auto f = random_table(4, 1, 3);
    CHECK(check_mass_production(f, {4, 1, 2, {1, 1}, 2}).ok());
    CHECK(check_mass_production(f, {4, 1, 0, {}, 2}).ok());
}

TEST_CASE("a different table is rejected") {
    auto f = random_table(4, 2, 1);
    auto g = f;
    g[9] ^= 1;
    auto q = build_qroam_modified(f, 4);
    auto rep = check_lookup_circuit(q.circuit, g, {{"x", "out"}});
    CHECK_FALSE(rep.ok());
    CHECK(rep.failed_inputs == 1);
}

TEST_CASE("every single-gate deletion agrees with the simulator") {
    for (std::int64_t lam : {1, 2, 4}) {
        auto f = random_table(3, 2, static_cast<std::uint64_t>(lam));
        for (bool ctl : {false, true}) {
            auto base = ctl ? build_qroam_controlled(f, lam) : build_qroam_modified(f, lam);
            const std::string cn = ctl ? "ctrl" : "";
            const auto& gs = base.circuit.gates();
            int fragment = 0, caught = 0, tried = 0;
            for (std::size_t i = 0; i < gs.size(); ++i) {
                // deleting a measurement orphans its fix-ups
                if (gs[i].is_measurement()) continue;
                Circuit c = base.circuit;
                c.mutable_gates().erase(c.mutable_gates().begin() + static_cast<std::ptrdiff_t>(i));
                compare_with_sim(c, f, cn, fragment);
                ++tried;
                if (!check_lookup_circuit(c, f, {{"x", "out"}}, cn).ok()) ++caught;
                // a missing phase fix-up is always wrong
                if (gs[i].kind == GateKind::CLASSICAL_CZ) CHECK_FALSE(sim_ok(c, f, cn));
            }
            CHECK(caught > tried / 2);
            CHECK(fragment <= tried / 10);
        }
    }
}

TEST_CASE("random gate insertions agree with the simulator") {
    std::mt19937_64 rng(7);
    auto f = random_table(3, 1, 11);
    auto base = build_qroam_modified(f, 2);
    const int w = base.circuit.width();
    int fragment = 0;
    for (int trial = 0; trial < 150; ++trial) {
        Circuit c = base.circuit;
        Gate g;
        const int a = static_cast<int>(rng() % static_cast<std::uint64_t>(w));
        int b = static_cast<int>(rng() % static_cast<std::uint64_t>(w - 1));
        if (b >= a) ++b;
        switch (rng() % 4) {
            case 0: g.kind = GateKind::X; g.ntargets = 1; g.targets = {a, 0}; break;
            case 1: g.kind = GateKind::Z; g.ntargets = 1; g.targets = {a, 0}; break;
            case 2: g.kind = GateKind::CNOT; g.ncontrols = 1; g.ntargets = 1; g.controls = {a, 0}; g.targets = {b, 0}; break;
            default: g.kind = GateKind::CZ; g.ntargets = 2; g.targets = {a, b}; break;
        }
        auto& gs = c.mutable_gates();
        gs.insert(gs.begin() + static_cast<std::ptrdiff_t>(rng() % (gs.size() + 1)), g);
        compare_with_sim(c, f, "", fragment);
    }
    CHECK(fragment <= 15);
}

TEST_CASE("flipped data gate is caught") {
    auto f = random_table(5, 2, 4);
    auto q = build_qroam_modified(f, 4);
    auto& gs = q.circuit.mutable_gates();
    auto it = std::find_if(gs.begin(), gs.end(), [](const Gate& g) { return g.data; });
    REQUIRE(it != gs.end());
    gs.erase(it);
    auto rep = check_lookup_circuit(q.circuit, f, {{"x", "out"}});
    CHECK_FALSE(rep.ok());
    CHECK(rep.failed_inputs >= 1);
    CHECK(rep.failed_inputs < rep.inputs);
}

TEST_CASE("bad arguments") {
    auto f = random_table(3, 2, 1);
    auto q = build_qroam_modified(f, 2);
    auto g = random_table(4, 2, 1);
    CHECK_THROWS(check_lookup_circuit(q.circuit, g, {{"x", "out"}}));
    CHECK_THROWS(check_lookup_circuit(q.circuit, f, {{"x", "nope"}}));
}
