#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "qmp/circuit.hpp"
#include "qmp/sim.hpp"
#include "qmp/table.hpp"

using namespace qmp;

namespace {

// Brute-force oracle: f(l ++ z) read by decoding bit strings explicitly.
Word slice_oracle(const FunctionTable& f, std::uint64_t l, int k, std::uint64_t z) {
    std::uint64_t idx = 0;
    for (int i = k - 1; i >= 0; --i) idx = (idx << 1) | ((l >> i) & 1U);
    for (int i = f.n() - k - 1; i >= 0; --i) idx = (idx << 1) | ((z >> i) & 1U);
    return f(idx);
}

}  // namespace

TEST_CASE("restrict_prefix examples") {
    FunctionTable f(2, 1, {1, 0, 1, 1});
    CHECK(restrict_prefix(f, {1, 0}, 1).entries() == std::vector<Word>{1, 0});
    CHECK(restrict_prefix(f, {1, 1}, 1).entries() == std::vector<Word>{1, 1});
    CHECK(restrict_prefix(f, {0, 0}, 0) == f);
    CHECK_THROWS_AS(restrict_prefix(f, {3, 0}, 3), TableError);
}

TEST_CASE("restrict_prefix matches slicing oracle") {
    for (int n = 1; n <= 7; ++n)
        for (int k = 0; k <= n; ++k) {
            auto f = random_table(n, 5, 100 + n * 10 + k);
            for (std::uint64_t l = 0; l < (1ULL << k); ++l) {
                auto r = restrict_prefix(f, {k, l}, k);
                for (std::uint64_t z = 0; z < r.size(); ++z) CHECK(r(z) == slice_oracle(f, l, k, z));
            }
        }
}

TEST_CASE("g family examples") {
    FunctionTable f(2, 1, {1, 0, 1, 1});
    auto fam = build_g_family(f, 1);
    REQUIRE(fam.members.size() == 3);
    CHECK(fam.members[0].entries() == std::vector<Word>{1, 0});
    CHECK(fam.members[1].entries() == std::vector<Word>{0, 1});
    CHECK(fam.members[2].entries() == std::vector<Word>{1, 1});
    for (std::uint64_t z = 0; z < 2; ++z) CHECK((fam.members[0](z) ^ fam.members[1](z)) == 1);

    FunctionTable zero(4, 3);
    const auto zfam = build_g_family(zero, 2);
    for (const auto& g : zfam.members)
        for (Word w : g.entries()) CHECK(w == 0);
    CHECK_THROWS_AS(build_g_family(f, 2), TableError);
    CHECK_THROWS_AS(build_g_family(f, 0), TableError);
}

TEST_CASE("g family telescoping both forms") {
    for (int n = 2; n <= 8; ++n)
        for (int k = 1; k < n && k <= 4; ++k) {
            auto f = random_table(n, 7, 31 * n + k);
            auto fam = build_g_family(f, k);
            const std::uint64_t top = 1ULL << k;
            for (std::uint64_t l = 0; l < top; ++l)
                for (std::uint64_t z = 0; z < (1ULL << (n - k)); ++z) {
                    Word lo = 0, hi = 0;
                    for (std::uint64_t j = 0; j <= l; ++j) lo ^= fam.members[j](z);
                    for (std::uint64_t j = l + 1; j <= top; ++j) hi ^= fam.members[j](z);
                    CHECK(lo == slice_oracle(f, l, k, z));
                    CHECK(hi == slice_oracle(f, l, k, z));
                }
        }
}

TEST_CASE("shift_input") {
    FunctionTable f(2, 4, {0xa, 0xb, 0xc, 0xd});
    CHECK(shift_input(f, {2, 0}) == f);
    CHECK(shift_input(f, {2, 2}).entries() == std::vector<Word>{0xc, 0xd, 0xa, 0xb});
    auto g = random_table(6, 3, 9);
    CHECK(shift_input(shift_input(g, {6, 37}), {6, 37}) == g);
    CHECK_THROWS_AS(shift_input(f, {3, 1}), TableError);
}

TEST_CASE("permute_input_bits") {
    FunctionTable f(2, 4, {0xa, 0xb, 0xc, 0xd});
    CHECK(permute_input_bits(f, {0, 1}) == f);
    CHECK(permute_input_bits(f, {1, 0}).entries() == std::vector<Word>{0xa, 0xc, 0xb, 0xd});
    auto g = random_table(5, 2, 4);
    std::vector<int> p{3, 0, 4, 1, 2}, inv(5);
    for (int i = 0; i < 5; ++i) inv[static_cast<std::size_t>(p[static_cast<std::size_t>(i)])] = i;
    CHECK(permute_input_bits(permute_input_bits(g, p), inv) == g);
    CHECK_THROWS_AS(permute_input_bits(f, {0, 0}), TableError);
}

TEST_CASE("correction_table examples") {
    FunctionTable f(2, 4, {0x1, 0x2, 0x4, 0x8});
    auto c2 = correction_table(f, {2, 2});
    CHECK(c2.g.entries() == std::vector<Word>{0x1 ^ 0x4, 0x2 ^ 0x8});
    auto c3 = correction_table(f, {2, 3});
    CHECK(c3.g.entries() == std::vector<Word>{0x1 ^ 0x8, 0x2 ^ 0x4});
    FunctionTable k(3, 2, std::vector<Word>(8, 3));
    const auto ck = correction_table(k, {3, 5});
    for (Word w : ck.g.entries()) CHECK(w == 0);
    CHECK_THROWS_AS(correction_table(f, {2, 0}), TableError);
    CHECK(correction_case({3, 0}) == 1);
    CHECK(correction_case({3, 4}) == 2);
    CHECK(correction_case({3, 6}) == 3);
    CHECK(correction_case({3, 3}) == 4);
}

TEST_CASE("correction identity exhaustive") {
    // Replays the classical correction sequence: relabel, conditional XOR of
    // b' into the low bits when the leading bit is set, then look up g.
    for (int n = 1; n <= 7; ++n) {
        auto f = random_table(n, 3, 500 + n);
        const std::uint64_t lead = 1ULL << (n - 1);
        for (std::uint64_t b = 1; b < f.size(); ++b) {
            auto c = correction_table(f, {n, b});
            CHECK((c.b_perm & lead) != 0);
            const std::uint64_t bp = c.b_perm & (lead - 1);
            for (std::uint64_t x = 0; x < f.size(); ++x) {
                const std::uint64_t xp = permute_bits(x, c.perm);
                std::uint64_t low = xp & (lead - 1);
                if (xp & lead) low ^= bp;
                CHECK((f(x ^ b) ^ c.g(low)) == f(x));
                // G(x) = f(x) ^ f(x ^ b) is b-periodic
                CHECK((f(x) ^ f(x ^ b)) == (f(x ^ b) ^ f(x)));
            }
        }
    }
}

TEST_CASE("random_table determinism and io") {
    auto a = random_table(6, 9, 77), b = random_table(6, 9, 77);
    CHECK(a == b);
    for (Word w : a.entries()) CHECK(w < (1ULL << 9));
    CHECK(random_table(10, 40, 1).size() == 1024);
    std::stringstream ss;
    write_table(ss, a);
    CHECK(read_table(ss) == a);
    std::stringstream bad("2 1\n1\n0\nzz\n1\n");
    CHECK_THROWS_AS(read_table(bad), TableError);
    std::stringstream shortf("2 1\n1\n0\n");
    CHECK_THROWS_AS(read_table(shortf), TableError);
    CHECK_THROWS_AS(FunctionTable(1, 1, {0, 2}), TableError);
}

TEST_CASE("sim H then measure") {
    Circuit c;
    c.add_register("q", 1, RegRole::input);
    c.h(0);
    c.measure_z(0);
    auto runs = run(c, 0, MeasurementPolicy::all());
    REQUIRE(runs.size() == 2);
    double tot = 0;
    for (auto& r : runs) {
        CHECK(r.probability == doctest::Approx(0.5));
        CHECK(r.state.as_basis() == r.outcomes.at(0));
        tot += r.probability;
    }
    CHECK(tot == doctest::Approx(1.0));

    auto forced = run(c, 0, MeasurementPolicy::forced_outcomes({{0, 1}}));
    REQUIRE(forced.size() == 1);
    CHECK(forced[0].state.as_basis() == 1);

    Circuit z;
    z.add_register("q", 1, RegRole::input);
    z.measure_z(0);
    CHECK_THROWS_AS(run(z, 0, MeasurementPolicy::forced_outcomes({{0, 1}})), SimError);
}

TEST_CASE("sim classical feed-forward resets a qubit") {
    Circuit c;
    c.add_register("q", 2, RegRole::input);
    c.h(0);
    c.cnot(0, 1);
    int r = c.measure_z(1);
    c.classical_x(r, 1);
    c.classical_x(r, 0);
    auto runs = run(c, 0, MeasurementPolicy::all());
    REQUIRE(runs.size() == 1);  // both branches end at |00> and merge
    CHECK(runs[0].state.as_basis() == 0);
    CHECK(runs[0].probability == doctest::Approx(1.0));
}

TEST_CASE("sim width cap") {
    Circuit c;
    c.add_register("q", 30, RegRole::input);
    CHECK_THROWS_AS(run(c, 0, MeasurementPolicy::all()), SimError);
    SimOptions o;
    o.width_cap = 40;
    CHECK(run(c, 0, MeasurementPolicy::all(), o).size() == 1);
}

TEST_CASE("run_basis agrees with statevector on reversible circuits") {
    std::mt19937_64 rng(2024);
    for (int width = 3; width <= 8; ++width) {
        Circuit c;
        c.add_register("q", width, RegRole::input);
        std::uniform_int_distribution<int> qd(0, width - 1), kd(0, 4);
        for (int i = 0; i < 40; ++i) {
            int a = qd(rng), b = qd(rng), d = qd(rng);
            while (b == a) b = qd(rng);
            while (d == a || d == b) d = qd(rng);
            switch (kd(rng)) {
            case 0: c.x(a); break;
            case 1: c.cnot(a, b); break;
            case 2: c.swap(a, b); break;
            case 3: c.cswap(a, b, d); break;
            default: c.toffoli(a, b, d); break;
            }
        }
        for (std::uint64_t in = 0; in < (1ULL << width); ++in) {
            auto runs = run(c, in, MeasurementPolicy::all());
            REQUIRE(runs.size() == 1);
            CHECK(runs[0].state.as_basis() == run_basis(c, in));
        }
    }
    Circuit h;
    h.add_register("q", 1, RegRole::input);
    h.h(0);
    CHECK_THROWS_AS(run_basis(h, 0), SimError);
    CHECK(run_basis([] {
        Circuit t;
        t.add_register("q", 3, RegRole::input);
        t.toffoli(0, 1, 2);
        return t;
    }(), 0b011) == 0b111);
}

TEST_CASE("sim preserves norm through H layers") {
    Circuit c;
    c.add_register("q", 6, RegRole::input);
    for (int i = 0; i < 6; ++i) c.h(i);
    for (int i = 0; i + 1 < 6; ++i) c.cz(i, i + 1);
    c.s(2);
    for (int i = 0; i < 6; ++i) c.h(i);
    auto runs = run(c, 5, MeasurementPolicy::all());
    CHECK(runs[0].state.norm() == doctest::Approx(1.0).epsilon(1e-12));
}
