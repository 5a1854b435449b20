#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qmp/circuit.hpp"

namespace qmp {

using Amp = std::complex<double>;

// Amplitudes stored as (basis index, amplitude) pairs, zero amplitudes
// omitted. Qubit q is bit q of the basis index.
class StateVector {
public:
    StateVector() = default;
    explicit StateVector(int width) : width_(width) {}
    static StateVector basis(int width, std::uint64_t value);
    static StateVector from_dense(int width, const std::vector<Amp>& amps);

    int width() const { return width_; }
    std::size_t support() const { return terms_.size(); }
    const std::vector<std::pair<std::uint64_t, Amp>>& terms() const { return terms_; }
    std::vector<std::pair<std::uint64_t, Amp>>& terms() { return terms_; }

    double norm() const;
    Amp amplitude(std::uint64_t b) const;
    std::vector<Amp> to_dense() const;
    // Sorts by basis index and merges duplicates; drops |a| below 1e-14.
    void canonicalize();
    // |<this|other>|^2 for normalized states.
    double fidelity(const StateVector& other) const;
    // The unique basis state if the support is a single term.
    std::optional<std::uint64_t> as_basis() const;

private:
    int width_ = 0;
    std::vector<std::pair<std::uint64_t, Amp>> terms_;
};

struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class PolicyMode { sampled, forced, enumerate_all };

struct MeasurementPolicy {
    PolicyMode mode = PolicyMode::enumerate_all;
    std::uint64_t seed = 0;
    // Forced outcome per record id. Records not listed are enumerated.
    std::map<int, int> forced;
    // Merge branches whose records are no longer referenced and whose
    // states coincide. Sound because no later gate can tell them apart.
    bool merge = true;

    static MeasurementPolicy sampled(std::uint64_t seed);
    static MeasurementPolicy forced_outcomes(std::map<int, int> outcomes);
    static MeasurementPolicy all();
};

struct RunRecord {
    StateVector state;
    std::map<int, int> outcomes;  // records still distinguishing this branch
    double probability = 1.0;
};

struct SimOptions {
    int width_cap = 24;
    double norm_tolerance = 1e-10;
};

std::vector<RunRecord> run(const Circuit& c, const StateVector& input, const MeasurementPolicy& policy,
                           const SimOptions& opts = {});
std::vector<RunRecord> run(const Circuit& c, std::uint64_t basis_input, const MeasurementPolicy& policy,
                           const SimOptions& opts = {});

// Measurement-free permutation circuits only (X, CNOT, SWAP, CSWAP, TOFFOLI).
std::uint64_t run_basis(const Circuit& c, std::uint64_t input);

}  // namespace qmp
