#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qmp {

enum class GateKind : std::uint8_t {
    H, X, Z, S, CNOT, CZ, SWAP, CSWAP, TOFFOLI,
    MEASURE_X, MEASURE_Z, CLASSICAL_CZ, CLASSICAL_X
};

const char* kind_name(GateKind k);
std::optional<GateKind> kind_from_name(const std::string& s);

// Provenance of a gate. Leaf data lookups are tagged `lookup`; comparators,
// routing and swaps are `control`.
enum class Tag : std::uint8_t { control, lookup };

// Gate operands are tiny, so they live inline. CZ stores its two qubits as
// targets; CSWAP has one control and two targets; TOFFOLI two controls.
struct Gate {
    GateKind kind = GateKind::X;
    std::uint8_t ncontrols = 0;
    std::uint8_t ntargets = 0;
    Tag tag = Tag::control;
    bool data = false;  // data-load CNOT/X emitted by a lookup leaf
    std::array<std::int32_t, 2> controls{};
    std::array<std::int32_t, 2> targets{};
    std::int32_t record = -1;  // produced by MEASURE_*, referenced by CLASSICAL_*

    std::int32_t control(int i) const { return controls[static_cast<std::size_t>(i)]; }
    std::int32_t target(int i) const { return targets[static_cast<std::size_t>(i)]; }
    bool is_measurement() const { return kind == GateKind::MEASURE_X || kind == GateKind::MEASURE_Z; }
    bool is_classical() const { return kind == GateKind::CLASSICAL_CZ || kind == GateKind::CLASSICAL_X; }
};

enum class RegRole : std::uint8_t { input, output, ancilla_clean, control, junk };

const char* role_name(RegRole r);
std::optional<RegRole> role_from_name(const std::string& s);

struct Register {
    std::string name;
    int start = 0;
    int size = 0;
    RegRole role = RegRole::ancilla_clean;

    int operator[](int i) const { return start + i; }
    std::vector<int> qubits() const;
};

struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Circuit {
public:
    int width() const { return width_; }
    const std::vector<Register>& registers() const { return registers_; }
    const std::vector<Gate>& gates() const { return gates_; }
    std::vector<Gate>& mutable_gates() { return gates_; }
    int num_records() const { return records_; }
    // Potential data-gate positions (one per output bit per address), used
    // by the upper_bound counting mode.
    std::int64_t data_slots() const { return data_slots_; }
    void add_data_slots(std::int64_t s) { data_slots_ += s; }
    std::vector<std::string>& metadata() { return metadata_; }
    const std::vector<std::string>& metadata() const { return metadata_; }

    const Register& add_register(const std::string& name, int size, RegRole role);
    const Register* find_register(const std::string& name) const;
    const Register& reg(const std::string& name) const;

    Tag current_tag = Tag::control;

    void h(int q) { one(GateKind::H, q); }
    void x(int q) { one(GateKind::X, q); }
    void z(int q) { one(GateKind::Z, q); }
    void s(int q) { one(GateKind::S, q); }
    void cnot(int c, int t);
    void cz(int a, int b);
    void swap(int a, int b);
    void cswap(int c, int a, int b);
    void toffoli(int c0, int c1, int t);
    int measure_z(int q);
    int measure_x(int q);
    void classical_cz(int rec, int a, int b);
    void classical_x(int rec, int q);
    void data_x(int q);
    void data_cnot(int c, int t);
    void append(const Gate& g);

    // Measurement-based uncompute of t = a AND b: H, measure, CZ fix-up on
    // (a, b) and reset of t, both conditioned on the outcome.
    void uncompute_and(int t, int a, int b);

private:
    void one(GateKind k, int q);

    int width_ = 0;
    int records_ = 0;
    std::int64_t data_slots_ = 0;
    std::vector<Register> registers_;
    std::vector<Gate> gates_;
    std::vector<std::string> metadata_;
};

// Diagnostics never throw. An empty list means the circuit is well formed.
std::vector<std::string> validate(const Circuit& c);

// b's gates are appended after a's. Each (b_register, a_register) pair in
// `mapping` identifies registers; unmapped b registers become new registers.
Circuit concat(const Circuit& a, const Circuit& b,
               const std::vector<std::pair<std::string, std::string>>& mapping = {});

void write_circuit(std::ostream& os, const Circuit& c);
Circuit read_circuit(std::istream& is);

}  // namespace qmp
