#include "qmp/qrom.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace qmp {

void QroamParams::check() const {
    if (n < 1) throw std::invalid_argument("qroam: n must be >= 1");
    if (m < 1) throw std::invalid_argument("qroam: m must be >= 1");
    if (lambda < 1 || !std::has_single_bit(static_cast<std::uint64_t>(lambda)))
        throw std::invalid_argument("qroam: lambda must be a power of two");
    if (log2_exact(lambda) > n) throw std::invalid_argument("qroam: lambda exceeds 2^n");
}

int log2_exact(std::int64_t v) {
    if (v < 1 || !std::has_single_bit(static_cast<std::uint64_t>(v)))
        throw std::invalid_argument("not a power of two: " + std::to_string(v));
    return std::countr_zero(static_cast<std::uint64_t>(v));
}

int iteration_ancilla(int a, bool controlled) {
    if (controlled) return a;
    return a > 0 ? a - 1 : 0;
}

int qroam_clean_ancilla(const QroamParams& p) {
    const int a = p.n - log2_exact(p.lambda);
    return static_cast<int>((p.lambda - 1) * p.m) + iteration_ancilla(a, p.controlled);
}

namespace {

// Unary iteration: leaf(prefix, ctrl) runs once per address value with
// `ctrl` set exactly when the high address bits equal `prefix`.
template <class Leaf>
void iterate(Circuit& c, int ctrl, const std::vector<int>& bits, int a, std::uint64_t prefix,
             const std::vector<int>& iter, std::size_t depth, Leaf& leaf) {
    if (a == 0) {
        leaf(prefix, ctrl);
        return;
    }
    const int q = bits[static_cast<std::size_t>(a - 1)];
    const int t = iter[depth];
    c.x(q);
    c.toffoli(ctrl, q, t);
    c.x(q);
    iterate(c, t, bits, a - 1, prefix << 1, iter, depth + 1, leaf);
    c.cnot(ctrl, t);
    iterate(c, t, bits, a - 1, (prefix << 1) | 1U, iter, depth + 1, leaf);
    c.uncompute_and(t, ctrl, q);
}

template <class Leaf>
void iterate_root(Circuit& c, std::optional<int> ctrl, const std::vector<int>& bits, const std::vector<int>& iter,
                  Leaf& leaf) {
    const int a = static_cast<int>(bits.size());
    if (ctrl) {
        iterate(c, *ctrl, bits, a, 0, iter, 0, leaf);
        return;
    }
    if (a == 0) {
        leaf(0, -1);
        return;
    }
    // the top address bit serves as the control of each half
    const int q = bits[static_cast<std::size_t>(a - 1)];
    c.x(q);
    iterate(c, q, bits, a - 1, 0, iter, 0, leaf);
    c.x(q);
    iterate(c, q, bits, a - 1, 1, iter, 0, leaf);
}

}  // namespace

void emit_qroam(Circuit& c, const FunctionTable& f, std::int64_t lambda, const LookupWires& w) {
    const int n = f.n(), m = f.m();
    if (static_cast<int>(w.addr.size()) != n) throw std::invalid_argument("emit_qroam: address width mismatch");
    if (static_cast<int>(w.out.size()) != m) throw std::invalid_argument("emit_qroam: output width mismatch");
    QroamParams p{n, m, lambda, w.ctrl.has_value()};
    p.check();
    const int lbits = log2_exact(lambda);
    const int hbits = n - lbits;
    const auto lam = static_cast<std::size_t>(lambda);
    if (w.anc.size() < (lam - 1) * static_cast<std::size_t>(m)) throw std::invalid_argument("emit_qroam: too few ancilla");
    if (static_cast<int>(w.iter.size()) < iteration_ancilla(hbits, p.controlled))
        throw std::invalid_argument("emit_qroam: too few iteration ancilla");

    const Tag saved = c.current_tag;
    c.current_tag = Tag::lookup;

    // position i of the swap network; position 0 is the output register
    auto wire = [&](std::size_t pos, int b) {
        return pos == 0 ? w.out[static_cast<std::size_t>(b)]
                        : w.anc[(pos - 1) * static_cast<std::size_t>(m) + static_cast<std::size_t>(b)];
    };
    std::vector<int> low(w.addr.begin(), w.addr.begin() + lbits);
    std::vector<int> high(w.addr.begin() + lbits, w.addr.end());

    auto leaf = [&](std::uint64_t prefix, int ctrl) {
        for (std::size_t i = 0; i < lam; ++i) {
            const Word word = f((prefix << lbits) | i);
            for (int b = 0; b < m; ++b) {
                if (!((word >> b) & 1U)) continue;
                if (ctrl < 0)
                    c.data_x(wire(i, b));
                else
                    c.data_cnot(ctrl, wire(i, b));
            }
        }
    };

    if (lambda == 1) {
        iterate_root(c, w.ctrl, high, w.iter, leaf);
        c.add_data_slots(static_cast<std::int64_t>(f.size()) * m);
        c.current_tag = saved;
        return;
    }

    for (std::size_t i = 0; i < (lam - 1) * static_cast<std::size_t>(m); ++i) c.h(w.anc[i]);

    struct Sw { int ctl, a, b; };
    std::vector<Sw> net;
    for (int j = lbits - 1; j >= 0; --j) {
        const std::size_t step = std::size_t{1} << j;
        for (std::size_t q = 0; q < lam; q += 2 * step)
            for (int b = 0; b < m; ++b)
                net.push_back({low[static_cast<std::size_t>(j)], wire(q, b), wire(q + step, b)});
    }
    for (const Sw& s : net) c.cswap(s.ctl, s.a, s.b);

    iterate_root(c, w.ctrl, high, w.iter, leaf);
    c.add_data_slots(static_cast<std::int64_t>(f.size()) * m);

    for (std::size_t pos = 0; pos < lam; ++pos)
        for (int b = 0; b < m; ++b) c.h(wire(pos, b));

    // undo the swap network knowing every position but the output ends at |0>
    for (auto it = net.rbegin(); it != net.rend(); ++it) {
        c.cnot(it->b, it->a);
        c.h(it->b);
        const int r = c.measure_z(it->b);
        c.classical_cz(r, it->ctl, it->a);
        c.classical_x(r, it->b);
    }

    for (int b = 0; b < m; ++b) c.h(w.out[static_cast<std::size_t>(b)]);
    c.current_tag = saved;
}

namespace {

QromCircuit build(const FunctionTable& f, std::int64_t lambda, bool controlled) {
    QroamParams p{f.n(), f.m(), lambda, controlled};
    p.check();
    QromCircuit q;
    q.params = p;
    q.l_bits = log2_exact(lambda);
    q.h_bits = p.n - q.l_bits;
    q.clean_ancilla = qroam_clean_ancilla(p);
    Circuit& c = q.circuit;
    LookupWires w;
    w.addr = c.add_register("x", p.n, RegRole::input).qubits();
    w.out = c.add_register("out", p.m, RegRole::output).qubits();
    if (controlled) w.ctrl = c.add_register("ctrl", 1, RegRole::control).start;
    w.anc = c.add_register("anc", static_cast<int>((lambda - 1) * p.m), RegRole::ancilla_clean).qubits();
    w.iter = c.add_register("iter", iteration_ancilla(q.h_bits, controlled), RegRole::ancilla_clean).qubits();
    c.metadata().push_back(std::string("builder=") + (lambda == 1 ? "plain_qrom" : "qroam_modified"));
    c.metadata().push_back("n=" + std::to_string(p.n) + " m=" + std::to_string(p.m) +
                           " lambda=" + std::to_string(lambda) + " controlled=" + (controlled ? "1" : "0"));
    emit_qroam(c, f, lambda, w);
    return q;
}

}  // namespace

QromCircuit build_plain_qrom(const FunctionTable& f, bool controlled) { return build(f, 1, controlled); }

QromCircuit build_qroam_modified(const FunctionTable& f, std::int64_t lambda) { return build(f, lambda, false); }

QromCircuit build_qroam_controlled(const FunctionTable& f, std::int64_t lambda) { return build(f, lambda, true); }

GateTally qroam_tally(const QroamParams& p) {
    p.check();
    const int a = p.n - log2_exact(p.lambda);
    const std::int64_t leaves = std::int64_t{1} << a;
    std::int64_t internal = 0, root_x = 0;
    if (p.controlled) {
        internal = leaves - 1;
    } else if (a >= 1) {
        internal = leaves - 2;
        root_x = 2;
    }
    GateTally t;
    t.toffoli = internal;
    t.x = 2 * internal + root_x;
    t.cnot = internal;
    t.h = internal;
    t.measure = internal;
    t.classical = 2 * internal;
    t.data_slots = (std::int64_t{1} << p.n) * p.m;
    t.data = t.data_slots;
    if (p.lambda >= 2) {
        const std::int64_t sw = (p.lambda - 1) * p.m;
        t.h += 2 * sw + p.lambda * p.m + p.m;
        t.cswap += sw;
        t.cnot += sw;
        t.measure += sw;
        t.classical += 2 * sw;
    }
    return t;
}

CostSummary qroam_cost(const QroamParams& p, const CostModel& model) {
    const int width = p.n + p.m + (p.controlled ? 1 : 0) + qroam_clean_ancilla(p);
    return summarize(qroam_tally(p), model, width);
}

CostSummary measurement_uncompute_cost(int n, std::int64_t lambda, const CostModel& model) {
    QroamParams{n, 1, lambda, false}.check();
    const int a = n - log2_exact(lambda);
    const std::int64_t big_n = std::int64_t{1} << n;
    GateTally t;
    t.toffoli = (big_n / lambda) + lambda;
    // one phase gate per address plus an H pair per swap-register qubit
    t.cz = big_n;
    t.h = 2 * lambda;
    CostSummary s = summarize(t, model, n + static_cast<int>(lambda) + a);
    return s;
}

CostSummary dirty_qroam_cost(int n, int m, std::int64_t lambda, const CostModel& model) {
    QroamParams{n, m, lambda, false}.check();
    const int a = n - log2_exact(lambda);
    const std::int64_t big_n = std::int64_t{1} << n;
    GateTally t;
    t.toffoli = 2 * (big_n / lambda) + 4 * m * (lambda - 1);
    // the lookup runs twice, so every data slot is paid twice
    t.data_slots = 2 * big_n * m;
    return summarize(t, model, n + m + a + static_cast<int>((lambda - 1) * m));
}

}  // namespace qmp
