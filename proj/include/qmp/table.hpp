#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace qmp {

using Word = std::uint64_t;

// Dense truth table of f: {0,1}^n -> {0,1}^m. Index bit n-1 is the leading
// bit, so f(l ++ z) for a k-bit prefix l lives at (l << (n-k)) | z.
class FunctionTable {
public:
    FunctionTable() = default;
    FunctionTable(int n, int m);
    FunctionTable(int n, int m, std::vector<Word> entries);

    int n() const { return n_; }
    int m() const { return m_; }
    std::size_t size() const { return entries_.size(); }
    Word operator()(std::uint64_t x) const { return entries_[x]; }
    Word& operator[](std::uint64_t x) { return entries_[x]; }
    const std::vector<Word>& entries() const { return entries_; }
    Word mask() const { return m_ >= 64 ? ~Word{0} : ((Word{1} << m_) - 1); }

    bool operator==(const FunctionTable& o) const = default;

private:
    int n_ = 0;
    int m_ = 0;
    std::vector<Word> entries_;
};

struct TableError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct BitString {
    int width = 0;
    std::uint64_t value = 0;
};

FunctionTable restrict_prefix(const FunctionTable& f, BitString prefix, int k);

struct GFamily {
    int k = 0;
    std::vector<FunctionTable> members;  // 2^k + 1 tables over n-k inputs
};
GFamily build_g_family(const FunctionTable& f, int k);
// g_l alone, without materializing the whole family.
FunctionTable g_member(const FunctionTable& f, int k, std::uint64_t l);

FunctionTable shift_input(const FunctionTable& f, BitString b);

// perm[i] is the source position of output bit i: result(x) = f(y) where
// bit perm[i] of y equals bit i of x.
FunctionTable permute_input_bits(const FunctionTable& f, const std::vector<int>& perm);
std::uint64_t permute_bits(std::uint64_t x, const std::vector<int>& perm);

// Correction over n-1 inputs for a nonzero shift b. When the leading bit of
// b is clear the table is built for the relabeled (f, b); `pivot` reports
// which input position was moved to the front (n-1 when no relabeling).
struct Correction {
    FunctionTable g;
    int pivot = 0;
    std::vector<int> perm;      // relabeling applied to f (identity if none)
    std::uint64_t b_perm = 0;   // b after relabeling, leading bit set
};
Correction correction_table(const FunctionTable& f, BitString b);
int correction_case(BitString b);

FunctionTable random_table(int n, int m, std::uint64_t seed);

// Text format: "n m" then 2^n hex words, one per line.
void write_table(std::ostream& os, const FunctionTable& f);
FunctionTable read_table(std::istream& is);

}  // namespace qmp
