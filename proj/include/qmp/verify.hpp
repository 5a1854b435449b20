#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmp/circuit.hpp"
#include "qmp/massprod.hpp"
#include "qmp/table.hpp"

namespace qmp {

// Exhaustive check of a lookup circuit over every basis value of the input
// registers, many inputs per pass. Output registers are carried as affine
// functions of their initial bits, so every initial output value is covered
// at once. Random measurement outcomes are carried symbolically and must be
// undone by their classical fix-ups, so every branch is covered. The phase
// of each input must be the same constant, which catches a wrong
// measurement-based uncompute. Circuits that leave this fragment (an output
// bit used as a control, an outcome read before its fix-up) fail with a
// message.
struct LookupCopy {
    std::string x;
    std::string out;
};

struct BasisCheckReport {
    std::uint64_t inputs = 0;
    std::uint64_t failed_inputs = 0;
    std::string first_failure;

    bool ok() const { return failed_inputs == 0 && first_failure.empty(); }
};

// Each copy must end with out = out0 ^ f(x) (ctrl ? f(x) : 0 when `ctrl`
// names a one-qubit register); every other qubit returns to zero.
BasisCheckReport check_lookup_circuit(const Circuit& c, const FunctionTable& f, const std::vector<LookupCopy>& copies,
                                      const std::string& ctrl = "");

BasisCheckReport check_mass_production(const FunctionTable& f, const MassProductionPlan& plan);

}  // namespace qmp
