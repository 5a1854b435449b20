#include <ostream>
#include "qmp/cost.hpp"

#include <stdexcept>

namespace qmp {

std::ostream& operator<<(std::ostream& os, const GateTally& t) {
    return os << "{h=" << t.h << " x=" << t.x << " z=" << t.z << " s=" << t.s << " cnot=" << t.cnot << " cz=" << t.cz
              << " swap=" << t.swap << " cswap=" << t.cswap << " toffoli=" << t.toffoli << " measure=" << t.measure
              << " classical=" << t.classical << " data=" << t.data << " slots=" << t.data_slots << "}";
}

void CostModel::check() const {
    if (!(xi >= 1.0)) throw std::invalid_argument("cost model: xi must be >= 1");
    if (toffoli_t_count < 0 || toffoli_clifford_overhead < 0 || cswap_toffolis < 0 ||
        cswap_cnots < 0 || swap_cnots < 0)
        throw std::invalid_argument("cost model: decomposition constants must be >= 0");
}

GateTally& GateTally::operator+=(const GateTally& o) {
    h += o.h; x += o.x; z += o.z; s += o.s; cnot += o.cnot; cz += o.cz;
    swap += o.swap; cswap += o.cswap; toffoli += o.toffoli;
    measure += o.measure; classical += o.classical;
    data += o.data; data_slots += o.data_slots;
    return *this;
}

GateTally GateTally::operator*(std::int64_t k) const {
    GateTally r;
    r.h = h * k; r.x = x * k; r.z = z * k; r.s = s * k; r.cnot = cnot * k; r.cz = cz * k;
    r.swap = swap * k; r.cswap = cswap * k; r.toffoli = toffoli * k;
    r.measure = measure * k; r.classical = classical * k;
    r.data = data * k; r.data_slots = data_slots * k;
    return r;
}

GateTally operator+(GateTally a, const GateTally& b) { return a += b; }

CostSummary& CostSummary::operator+=(const CostSummary& o) {
    clifford_count += o.clifford_count;
    t_count += o.t_count;
    toffoli_count += o.toffoli_count;
    measurement_count += o.measurement_count;
    qubit_count = qubit_count > o.qubit_count ? qubit_count : o.qubit_count;
    total += o.total;
    return *this;
}

CostSummary operator+(CostSummary a, const CostSummary& b) { return a += b; }

bool CostSummary::same_counts(const CostSummary& o) const {
    return clifford_count == o.clifford_count && t_count == o.t_count &&
           toffoli_count == o.toffoli_count && measurement_count == o.measurement_count &&
           qubit_count == o.qubit_count;
}

namespace {

void add_gate(GateTally& t, const Gate& g) {
    if (g.data) {
        ++t.data;
        return;
    }
    switch (g.kind) {
    case GateKind::H: ++t.h; break;
    case GateKind::X: ++t.x; break;
    case GateKind::Z: ++t.z; break;
    case GateKind::S: ++t.s; break;
    case GateKind::CNOT: ++t.cnot; break;
    case GateKind::CZ: ++t.cz; break;
    case GateKind::SWAP: ++t.swap; break;
    case GateKind::CSWAP: ++t.cswap; break;
    case GateKind::TOFFOLI: ++t.toffoli; break;
    case GateKind::MEASURE_X:
    case GateKind::MEASURE_Z: ++t.measure; break;
    case GateKind::CLASSICAL_CZ:
    case GateKind::CLASSICAL_X: ++t.classical; break;
    }
}

}  // namespace

GateTally tally_gates(const Circuit& c) {
    GateTally t;
    for (const Gate& g : c.gates()) add_gate(t, g);
    t.data_slots = c.data_slots();
    return t;
}

GateTally tally_gates(const Circuit& c, Tag tag) {
    GateTally t;
    for (const Gate& g : c.gates())
        if (g.tag == tag) add_gate(t, g);
    // data slots only ever come from lookup leaves
    if (tag == Tag::lookup) t.data_slots = c.data_slots();
    return t;
}

CostSummary summarize(const GateTally& t, const CostModel& m, int qubits) {
    CostSummary s;
    const std::int64_t toffolis = t.toffoli + t.cswap * m.cswap_toffolis;
    const std::int64_t data_gates =
        m.counting_mode == CountingMode::upper_bound ? t.data_slots : t.data;
    s.clifford_count = t.h + t.x + t.z + t.s + t.cnot + t.cz + t.classical + data_gates +
                       t.swap * m.swap_cnots + t.cswap * m.cswap_cnots +
                       toffolis * m.toffoli_clifford_overhead;
    s.t_count = toffolis * m.toffoli_t_count;
    s.toffoli_count = toffolis;
    s.measurement_count = t.measure;
    s.qubit_count = qubits;
    s.total = static_cast<double>(s.clifford_count) + m.xi * static_cast<double>(s.t_count);
    return s;
}

CostSummary count_costs(const Circuit& c, const CostModel& model) {
    auto diags = validate(c);
    if (!diags.empty()) throw StructuralError("count_costs: " + diags.front());
    return summarize(tally_gates(c), model, c.width());
}

TaggedCost count_costs_by_tag(const Circuit& c, const CostModel& model) {
    auto diags = validate(c);
    if (!diags.empty()) throw StructuralError("count_costs: " + diags.front());
    return {summarize(tally_gates(c, Tag::control), model, c.width()),
            summarize(tally_gates(c, Tag::lookup), model, c.width())};
}

Circuit decompose_swaps(const Circuit& c) {
    Circuit out;
    for (const auto& r : c.registers()) out.add_register(r.name, r.size, r.role);
    out.add_data_slots(c.data_slots());
    out.metadata() = c.metadata();
    for (const Gate& g : c.gates()) {
        out.current_tag = g.tag;
        if (g.kind == GateKind::SWAP) {
            const int a = g.target(0), b = g.target(1);
            out.cnot(a, b);
            out.cnot(b, a);
            out.cnot(a, b);
        } else if (g.kind == GateKind::CSWAP) {
            const int ctl = g.control(0), a = g.target(0), b = g.target(1);
            out.cnot(b, a);
            out.toffoli(ctl, a, b);
            out.cnot(b, a);
        } else {
            out.append(g);
        }
    }
    out.current_tag = Tag::control;
    return out;
}

}  // namespace qmp
