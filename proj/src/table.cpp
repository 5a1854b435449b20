#include "qmp/table.hpp"

#include <algorithm>
#include <bit>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

namespace qmp {

namespace {

void check_shape(int n, int m) {
    if (n < 0 || n > 40) throw TableError("table: n out of range: " + std::to_string(n));
    if (m < 1 || m > 64) throw TableError("table: m out of range: " + std::to_string(m));
}

}  // namespace

FunctionTable::FunctionTable(int n, int m) : n_(n), m_(m) {
    check_shape(n, m);
    entries_.assign(std::size_t{1} << n, 0);
}

FunctionTable::FunctionTable(int n, int m, std::vector<Word> entries)
    : n_(n), m_(m), entries_(std::move(entries)) {
    check_shape(n, m);
    if (entries_.size() != (std::size_t{1} << n))
        throw TableError("table: expected " + std::to_string(std::size_t{1} << n) + " entries, got " +
                         std::to_string(entries_.size()));
    for (Word w : entries_)
        if (w & ~mask()) throw TableError("table: entry does not fit in m bits");
}

FunctionTable restrict_prefix(const FunctionTable& f, BitString prefix, int k) {
    if (k < 0 || k > f.n()) throw TableError("restrict_prefix: k out of range");
    if (prefix.width != k || (k < 64 && (prefix.value >> k) != 0))
        throw TableError("restrict_prefix: prefix width mismatch");
    const int rest = f.n() - k;
    std::vector<Word> e(std::size_t{1} << rest);
    const std::uint64_t base = prefix.value << rest;
    for (std::uint64_t z = 0; z < e.size(); ++z) e[z] = f(base | z);
    return FunctionTable(rest, f.m(), std::move(e));
}

FunctionTable g_member(const FunctionTable& f, int k, std::uint64_t l) {
    if (k < 1 || k >= f.n()) throw TableError("g-family: need 1 <= k < n");
    const std::uint64_t top = std::uint64_t{1} << k;
    if (l > top) throw TableError("g-family: member index out of range");
    const int rest = f.n() - k;
    std::vector<Word> e(std::size_t{1} << rest);
    for (std::uint64_t z = 0; z < e.size(); ++z) {
        Word w = 0;
        if (l < top) w ^= f((l << rest) | z);
        if (l > 0) w ^= f(((l - 1) << rest) | z);
        e[z] = w;
    }
    return FunctionTable(rest, f.m(), std::move(e));
}

GFamily build_g_family(const FunctionTable& f, int k) {
    if (k < 1 || k >= f.n()) throw TableError("build_g_family: need 1 <= k < n");
    GFamily fam;
    fam.k = k;
    const std::uint64_t top = std::uint64_t{1} << k;
    for (std::uint64_t l = 0; l <= top; ++l) fam.members.push_back(g_member(f, k, l));
    return fam;
}

FunctionTable shift_input(const FunctionTable& f, BitString b) {
    if (b.width != f.n()) throw TableError("shift_input: width mismatch");
    if (b.value >= f.size()) throw TableError("shift_input: shift out of range");
    std::vector<Word> e(f.size());
    for (std::uint64_t x = 0; x < e.size(); ++x) e[x] = f(x ^ b.value);
    return FunctionTable(f.n(), f.m(), std::move(e));
}

std::uint64_t permute_bits(std::uint64_t x, const std::vector<int>& perm) {
    std::uint64_t y = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
        if ((x >> i) & 1U) y |= std::uint64_t{1} << perm[i];
    return y;
}

FunctionTable permute_input_bits(const FunctionTable& f, const std::vector<int>& perm) {
    if (static_cast<int>(perm.size()) != f.n()) throw TableError("permute_input_bits: wrong length");
    std::vector<char> seen(perm.size(), 0);
    for (int p : perm) {
        if (p < 0 || p >= f.n() || seen[static_cast<std::size_t>(p)])
            throw TableError("permute_input_bits: not a permutation");
        seen[static_cast<std::size_t>(p)] = 1;
    }
    std::vector<Word> e(f.size());
    for (std::uint64_t x = 0; x < e.size(); ++x) e[x] = f(permute_bits(x, perm));
    return FunctionTable(f.n(), f.m(), std::move(e));
}

int correction_case(BitString b) {
    if (b.value == 0) return 1;
    const std::uint64_t lead = std::uint64_t{1} << (b.width - 1);
    if (b.value == lead) return 2;
    if (b.value & lead) return 3;
    return 4;
}

Correction correction_table(const FunctionTable& f, BitString b) {
    const int n = f.n();
    if (b.width != n || n < 1) throw TableError("correction_table: width mismatch");
    if (b.value == 0) throw TableError("correction_table: b = 0 needs no correction");
    if (b.value >= f.size()) throw TableError("correction_table: shift out of range");

    Correction c;
    c.perm.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) c.perm[static_cast<std::size_t>(i)] = i;
    const std::uint64_t lead = std::uint64_t{1} << (n - 1);
    c.pivot = n - 1;
    const FunctionTable* src = &f;
    FunctionTable relabeled;
    if (!(b.value & lead)) {
        // smallest index i >= 2 counted from the leading bit is the highest set bit
        c.pivot = std::bit_width(b.value) - 1;
        std::swap(c.perm[static_cast<std::size_t>(c.pivot)], c.perm[static_cast<std::size_t>(n - 1)]);
        relabeled = permute_input_bits(f, c.perm);
        src = &relabeled;
    }
    c.b_perm = permute_bits(b.value, c.perm);
    const std::uint64_t bp = c.b_perm & (lead - 1);
    std::vector<Word> e(std::size_t{1} << (n - 1));
    for (std::uint64_t z = 0; z < e.size(); ++z) e[z] = (*src)(z) ^ (*src)(lead | (z ^ bp));
    c.g = FunctionTable(n - 1, f.m(), std::move(e));
    return c;
}

FunctionTable random_table(int n, int m, std::uint64_t seed) {
    FunctionTable f(n, m);
    std::mt19937_64 rng(seed);
    const Word mask = f.mask();
    for (std::uint64_t x = 0; x < f.size(); ++x) f[x] = rng() & mask;
    return f;
}

void write_table(std::ostream& os, const FunctionTable& f) {
    os << f.n() << " " << f.m() << "\n";
    for (Word w : f.entries()) os << std::hex << w << std::dec << "\n";
}

FunctionTable read_table(std::istream& is) {
    int n = -1, m = -1;
    if (!(is >> n >> m)) throw TableError("table file: missing 'n m' header");
    check_shape(n, m);
    std::vector<Word> e;
    e.reserve(std::size_t{1} << n);
    std::string tok;
    while (is >> tok) {
        Word w = 0;
        std::size_t used = 0;
        try {
            w = std::stoull(tok, &used, 16);
        } catch (const std::exception&) {
            throw TableError("table file: bad hex word '" + tok + "' at entry " + std::to_string(e.size()));
        }
        if (used != tok.size())
            throw TableError("table file: bad hex word '" + tok + "' at entry " + std::to_string(e.size()));
        e.push_back(w);
    }
    return FunctionTable(n, m, std::move(e));
}

}  // namespace qmp
