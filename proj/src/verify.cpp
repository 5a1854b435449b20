#include "qmp/verify.hpp"

#include <bit>
#include <stdexcept>

namespace qmp {

namespace {

constexpr int L = 4;  // 64-bit words per pass
constexpr std::uint64_t kLanes = 64 * L;

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bit-sliced state: for every qubit one word per 64 inputs for its value,
// whether it sits in the X basis (value is then the sign), and whether it
// still carries an uncorrected measurement outcome. Qubits that can depend
// on the initial output bits also carry one mask plane per output bit.
class Evaluator {
public:
    Evaluator(const Circuit& c, const std::vector<int>& out_qubits) : c_(c), w_(c.width()) {
        midx_.assign(static_cast<std::size_t>(w_), -1);
        nm_ = static_cast<int>(out_qubits.size());
        std::vector<char> taint(static_cast<std::size_t>(w_), 0);
        for (int q : out_qubits) taint[static_cast<std::size_t>(q)] = 1;
        for (const Gate& g : c.gates()) {
            auto T = [&](int q) -> char& { return taint[static_cast<std::size_t>(q)]; };
            switch (g.kind) {
                case GateKind::CNOT:
                    if (T(g.control(0))) T(g.target(0)) = 1;
                    break;
                case GateKind::SWAP:
                case GateKind::CSWAP:
                    if (T(g.target(0)) || T(g.target(1))) T(g.target(0)) = T(g.target(1)) = 1;
                    break;
                default:
                    break;
            }
        }
        int k = 0;
        for (int q = 0; q < w_; ++q)
            if (taint[static_cast<std::size_t>(q)]) midx_[static_cast<std::size_t>(q)] = k++;
        v_.assign(static_cast<std::size_t>(w_ * L), 0);
        p_ = tie_ = v_;
        tie_rec_.assign(static_cast<std::size_t>(w_), -1);
        masks_.assign(static_cast<std::size_t>(k * nm_ * L), 0);
        const auto nr = static_cast<std::size_t>(c.num_records());
        recval_.assign(nr * L, 0);
        rand_ = pending_ = recval_;
        for (int i = 0; i < static_cast<int>(out_qubits.size()); ++i)
            unit_.push_back({out_qubits[static_cast<std::size_t>(i)], i});
    }

    std::uint64_t* v(int q) { return &v_[static_cast<std::size_t>(q * L)]; }
    std::uint64_t* p(int q) { return &p_[static_cast<std::size_t>(q * L)]; }
    std::uint64_t* tie(int q) { return &tie_[static_cast<std::size_t>(q * L)]; }
    std::uint64_t* mask(int q, int j) {
        return &masks_[static_cast<std::size_t>((midx_[static_cast<std::size_t>(q)] * nm_ + j) * L)];
    }
    bool tainted(int q) const { return midx_[static_cast<std::size_t>(q)] >= 0; }
    std::uint64_t* phase() { return phase_; }

    void reset(const std::uint64_t* active) {
        std::fill(v_.begin(), v_.end(), 0);
        std::fill(p_.begin(), p_.end(), 0);
        std::fill(tie_.begin(), tie_.end(), 0);
        std::fill(masks_.begin(), masks_.end(), 0);
        std::fill(tie_rec_.begin(), tie_rec_.end(), -1);
        std::fill(pending_.begin(), pending_.end(), 0);
        for (int w = 0; w < L; ++w) phase_[w] = 0;
        for (auto [q, j] : unit_) {
            std::uint64_t* m = mask(q, j);
            for (int w = 0; w < L; ++w) m[w] = ~std::uint64_t{0};
        }
        active_ = active;
    }

    void run() {
        const auto& gs = c_.gates();
        for (std::size_t gi = 0; gi < gs.size(); ++gi) {
            const Gate& g = gs[gi];
            if (g.kind == GateKind::CNOT && gi + 2 < gs.size() && gs[gi + 1].kind == GateKind::H &&
                gs[gi + 1].target(0) == g.control(0) && gs[gi + 2].kind == GateKind::MEASURE_Z &&
                gs[gi + 2].target(0) == g.control(0) && any(p(g.control(0)))) {
                cnot_h_measure(g.control(0), g.target(0), gs[gi + 2].record, gi);
                gi += 2;
                continue;
            }
            apply(g, gi);
        }
    }

private:
    [[noreturn]] void fail(std::size_t gi, const std::string& what) const {
        throw Failure("gate " + std::to_string(gi) + " (" + kind_name(c_.gates()[gi].kind) + "): " + what);
    }

    bool any(const std::uint64_t* a) const {
        std::uint64_t r = 0;
        for (int w = 0; w < L; ++w) r |= a[w] & active_[w];
        return r != 0;
    }
    // Lanes where q depends on the initial output bits.
    void dep(int q, std::uint64_t* out) {
        for (int w = 0; w < L; ++w) out[w] = 0;
        if (!tainted(q)) return;
        for (int j = 0; j < nm_; ++j) {
            const std::uint64_t* M = mask(q, j);
            for (int w = 0; w < L; ++w) out[w] |= M[w];
        }
    }
    bool mask_free(int q) {
        std::uint64_t d[L];
        dep(q, d);
        return !any(d);
    }
    // A control must hold a definite, output-independent bit.
    void control(int q, std::size_t gi) {
        if (any(p(q))) fail(gi, "control qubit " + std::to_string(q) + " is in the X basis");
        if (any(tie(q))) fail(gi, "control qubit " + std::to_string(q) + " holds an uncorrected outcome");
        if (!mask_free(q)) fail(gi, "output bit " + std::to_string(q) + " used as a control");
    }
    void require_none(const std::uint64_t* lanes, std::size_t gi, const char* what) {
        if (any(lanes)) fail(gi, what);
    }
    void bind_tie(int q, int rec, std::size_t gi) {
        int& tr = tie_rec_[static_cast<std::size_t>(q)];
        if (!any(tie(q))) {
            tr = -1;
            return;
        }
        if (tr >= 0 && tr != rec) fail(gi, "qubit mixes two outcomes");
        tr = rec;
    }
    void xor_masks(int src, int dst, const std::uint64_t* sel) {
        if (!tainted(src)) return;
        for (int j = 0; j < nm_; ++j) {
            const std::uint64_t* S = mask(src, j);
            std::uint64_t* D = mask(dst, j);
            for (int w = 0; w < L; ++w) D[w] ^= S[w] & sel[w];
        }
    }

    // CNOT(b -> a), H(b), MEASURE_Z(b): where b is in the X basis and a holds
    // a bit, a takes b's sign XOR the outcome and b holds the outcome.
    void cnot_h_measure(int b, int a, int rec, std::size_t gi) {
        std::uint64_t *Vb = v(b), *Pb = p(b), *Tb = tie(b), *Va = v(a), *Pa = p(a), *Ta = tie(a);
        require_none(Tb, gi, "uncorrected outcome as a control");
        std::uint64_t db[L], da[L], bad[L];
        dep(b, db);
        dep(a, da);
        const auto r = static_cast<std::size_t>(rec);
        for (int w = 0; w < L; ++w) {
            const std::uint64_t A = ~Pb[w], B = Pb[w] & ~Pa[w], C = Pb[w] & Pa[w];
            bad[w] = (A & Pa[w] & (db[w] | (Vb[w] & (da[w] | Ta[w])))) | (A & db[w]) | (B & (da[w] | Ta[w])) |
                     (B & Va[w] & db[w]) | (C & (db[w] ^ da[w]));
        }
        require_none(bad, gi, "unsupported measured un-swap");
        std::uint64_t selA[L], selB[L], selC[L];
        for (int w = 0; w < L; ++w) {
            selA[w] = ~Pb[w];
            selB[w] = Pb[w] & ~Pa[w];
            selC[w] = Pb[w] & Pa[w];
        }
        // C: an X-basis CNOT moves a's sign onto b
        xor_masks(a, b, selC);
        for (int w = 0; w < L; ++w) {
            const std::uint64_t A = selA[w], B = selB[w], C = selC[w];
            // A: plain CNOT, then b is |sign Vb> and measured at random
            phase_[w] ^= A & Pa[w] & Vb[w] & Va[w];
            Va[w] ^= A & ~Pa[w] & Vb[w];
            // C: signs combine, then b is a definite bit
            Vb[w] ^= C & Va[w];
            // B: a inherits the sign, picks up (-1)^((s ^ o) v)
            phase_[w] ^= B & Vb[w] & Va[w];
            const std::uint64_t pend = (A & Vb[w]) | (B & Va[w]);
            const std::uint64_t newVa = (Va[w] & ~B) | (Vb[w] & B);
            Va[w] = newVa;
            Pa[w] |= B;
            Ta[w] ^= B;
            rand_[r * L + w] = A | B;
            recval_[r * L + w] = C & Vb[w];
            pending_[r * L + w] = pend;
            Vb[w] &= C;
            Tb[w] = A | B;
            Pb[w] = 0;
        }
        // B moves b's output dependence onto a
        if (tainted(b)) {
            for (int j = 0; j < nm_; ++j) {
                std::uint64_t *Mb = mask(b, j), *Ma = mask(a, j);
                for (int w = 0; w < L; ++w) {
                    Ma[w] = (Ma[w] & ~selB[w]) | (Mb[w] & selB[w]);
                    Mb[w] &= ~selB[w];
                }
            }
        }
        bind_tie(a, rec, gi);
        bind_tie(b, rec, gi);
    }

    // Exchange every plane of a and b on the lanes in sel (all when null).
    void swap_planes(int a, int b, const std::uint64_t* sel) {
        auto sw = [&](std::uint64_t* x, std::uint64_t* y) {
            for (int w = 0; w < L; ++w) {
                const std::uint64_t s = sel ? sel[w] : ~std::uint64_t{0};
                const std::uint64_t d = (x[w] ^ y[w]) & s;
                x[w] ^= d;
                y[w] ^= d;
            }
        };
        sw(v(a), v(b));
        sw(p(a), p(b));
        sw(tie(a), tie(b));
        if (tainted(a) && tainted(b))
            for (int j = 0; j < nm_; ++j) sw(mask(a, j), mask(b, j));
    }

    void apply(const Gate& g, std::size_t gi) {
        std::uint64_t d[L], bad[L];
        switch (g.kind) {
            case GateKind::X: {
                const int q = g.target(0);
                std::uint64_t *V = v(q), *P = p(q), *T = tie(q);
                dep(q, d);
                for (int w = 0; w < L; ++w) bad[w] = P[w] & (d[w] | T[w]);
                require_none(bad, gi, "X on an output-dependent or uncorrected X-basis qubit");
                for (int w = 0; w < L; ++w) {
                    phase_[w] ^= P[w] & V[w];
                    V[w] ^= ~P[w];
                }
                break;
            }
            case GateKind::Z: {
                const int q = g.target(0);
                std::uint64_t *V = v(q), *P = p(q), *T = tie(q);
                dep(q, d);
                for (int w = 0; w < L; ++w) bad[w] = ~P[w] & (d[w] | T[w]);
                require_none(bad, gi, "Z on an output-dependent or uncorrected bit");
                for (int w = 0; w < L; ++w) {
                    phase_[w] ^= V[w] & ~P[w];
                    V[w] ^= P[w];
                }
                break;
            }
            case GateKind::S:
                fail(gi, "S is outside the checked fragment");
            case GateKind::H: {
                std::uint64_t* P = p(g.target(0));
                for (int w = 0; w < L; ++w) P[w] = ~P[w];
                break;
            }
            case GateKind::CNOT: {
                const int c = g.control(0), t = g.target(0);
                require_none(p(c), gi, "CNOT control in the X basis");
                require_none(tie(c), gi, "CNOT control holds an uncorrected outcome");
                std::uint64_t *Vc = v(c), *Vt = v(t), *Pt = p(t), *Tt = tie(t);
                std::uint64_t dc[L];
                dep(c, dc);
                dep(t, d);
                for (int w = 0; w < L; ++w) bad[w] = Pt[w] & (dc[w] | (Vc[w] & (d[w] | Tt[w])));
                require_none(bad, gi, "output-dependent phase");
                std::uint64_t sel[L];
                for (int w = 0; w < L; ++w) {
                    phase_[w] ^= Vc[w] & Pt[w] & Vt[w];
                    Vt[w] ^= Vc[w] & ~Pt[w];
                    sel[w] = ~Pt[w];
                }
                xor_masks(c, t, sel);
                break;
            }
            case GateKind::CZ: {
                const int a = g.target(0), b = g.target(1);
                control(a, gi);
                control(b, gi);
                std::uint64_t *Va = v(a), *Vb = v(b);
                for (int w = 0; w < L; ++w) phase_[w] ^= Va[w] & Vb[w];
                break;
            }
            case GateKind::SWAP: {
                const int a = g.target(0), b = g.target(1);
                swap_planes(a, b, nullptr);
                std::swap(tie_rec_[static_cast<std::size_t>(a)], tie_rec_[static_cast<std::size_t>(b)]);
                break;
            }
            case GateKind::CSWAP: {
                const int c = g.control(0), a = g.target(0), b = g.target(1);
                control(c, gi);
                const int ra = tie_rec_[static_cast<std::size_t>(a)], rb = tie_rec_[static_cast<std::size_t>(b)];
                if (ra >= 0 && rb >= 0 && ra != rb) fail(gi, "controlled swap mixes two outcomes");
                swap_planes(a, b, v(c));
                const int rr = ra >= 0 ? ra : rb;
                bind_tie(a, rr, gi);
                bind_tie(b, rr, gi);
                break;
            }
            case GateKind::TOFFOLI: {
                const int a = g.control(0), b = g.control(1), t = g.target(0);
                control(a, gi);
                control(b, gi);
                std::uint64_t *Va = v(a), *Vb = v(b), *Vt = v(t), *Pt = p(t), *Tt = tie(t);
                dep(t, d);
                for (int w = 0; w < L; ++w) bad[w] = Pt[w] & Va[w] & Vb[w] & (d[w] | Tt[w]);
                require_none(bad, gi, "output-dependent phase");
                for (int w = 0; w < L; ++w) {
                    const std::uint64_t s = Va[w] & Vb[w];
                    phase_[w] ^= s & Pt[w] & Vt[w];
                    Vt[w] ^= s & ~Pt[w];
                }
                break;
            }
            case GateKind::MEASURE_X:
            case GateKind::MEASURE_Z: {
                const int q = g.target(0);
                if (any(tie(q))) fail(gi, "measuring an uncorrected outcome");
                if (!mask_free(q)) fail(gi, "measuring an output-dependent qubit");
                std::uint64_t *V = v(q), *P = p(q), *T = tie(q);
                if (g.kind == GateKind::MEASURE_X)
                    for (int w = 0; w < L; ++w) P[w] = ~P[w];
                const auto r = static_cast<std::size_t>(g.record);
                for (int w = 0; w < L; ++w) {
                    rand_[r * L + w] = P[w];
                    recval_[r * L + w] = V[w] & ~P[w];
                    // a sign-s state measured as o picks up (-1)^(o s)
                    pending_[r * L + w] = V[w] & P[w];
                    T[w] = P[w];
                    V[w] &= ~P[w];
                    P[w] = 0;
                }
                bind_tie(q, g.record, gi);
                if (g.kind == GateKind::MEASURE_X) {
                    if (any(T)) fail(gi, "X measurement leaves an uncorrected outcome");
                    for (int w = 0; w < L; ++w) P[w] = ~P[w];
                }
                break;
            }
            case GateKind::CLASSICAL_X: {
                const int q = g.target(0);
                const auto r = static_cast<std::size_t>(g.record);
                std::uint64_t *V = v(q), *P = p(q), *T = tie(q);
                dep(q, d);
                for (int w = 0; w < L; ++w)
                    bad[w] = P[w] & (recval_[r * L + w] | rand_[r * L + w]) & (d[w] | T[w]);
                require_none(bad, gi, "outcome-controlled X on an output-dependent X-basis qubit");
                for (int w = 0; w < L; ++w) {
                    const std::uint64_t det = recval_[r * L + w], rnd = rand_[r * L + w];
                    phase_[w] ^= det & P[w] & V[w];
                    pending_[r * L + w] ^= rnd & P[w] & V[w];
                    V[w] ^= det & ~P[w];
                    T[w] ^= rnd & ~P[w];
                }
                bind_tie(q, g.record, gi);
                break;
            }
            case GateKind::CLASSICAL_CZ: {
                const int c = g.target(0), a = g.target(1);
                control(c, gi);
                const auto r = static_cast<std::size_t>(g.record);
                std::uint64_t *Vc = v(c), *Va = v(a), *Pa = p(a), *Ta = tie(a);
                dep(a, d);
                for (int w = 0; w < L; ++w)
                    bad[w] = ~Pa[w] & Vc[w] & (recval_[r * L + w] | rand_[r * L + w]) & (d[w] | Ta[w]);
                require_none(bad, gi, "outcome-controlled phase on an output-dependent bit");
                for (int w = 0; w < L; ++w) {
                    const std::uint64_t det = recval_[r * L + w], rnd = rand_[r * L + w];
                    // bit lanes: a phase; X-basis lanes: a sign flip
                    phase_[w] ^= det & Vc[w] & Va[w] & ~Pa[w];
                    pending_[r * L + w] ^= rnd & Vc[w] & Va[w] & ~Pa[w];
                    Va[w] ^= det & Vc[w] & Pa[w];
                    Ta[w] ^= rnd & Vc[w] & Pa[w];
                }
                bind_tie(a, g.record, gi);
                break;
            }
        }
    }

public:
    // Lanes that violate the end-of-circuit conditions other than register
    // contents: leftover X-basis states, uncorrected outcomes, unfixed
    // outcome phases.
    void residue(std::uint64_t* bad) {
        for (int w = 0; w < L; ++w) bad[w] = 0;
        for (std::size_t i = 0; i < p_.size(); ++i) bad[i % L] |= p_[i] | tie_[i];
        for (std::size_t i = 0; i < pending_.size(); ++i) bad[i % L] |= pending_[i];
    }
    int mask_planes() const { return nm_; }

private:
    const Circuit& c_;
    int w_;
    int nm_ = 0;
    std::vector<int> midx_;
    std::vector<std::uint64_t> v_, p_, tie_, masks_;
    std::vector<int> tie_rec_;
    std::vector<std::uint64_t> recval_, rand_, pending_;
    std::vector<std::pair<int, int>> unit_;
    std::uint64_t phase_[L] = {};
    const std::uint64_t* active_ = nullptr;
};

// Word w of bit b over inputs base + 64 w + lane.
std::uint64_t input_word(std::uint64_t base, int w, int b) {
    static constexpr std::uint64_t pat[6] = {0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
                                             0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL};
    if (b < 6) return pat[b];
    return ((base + 64 * static_cast<std::uint64_t>(w)) >> b) & 1U ? ~std::uint64_t{0} : 0;
}

}  // namespace

BasisCheckReport check_lookup_circuit(const Circuit& c, const FunctionTable& f, const std::vector<LookupCopy>& copies,
                                      const std::string& ctrl) {
    BasisCheckReport rep;
    const int n = f.n(), m = f.m();
    std::vector<std::vector<int>> xq, oq;
    std::vector<int> outs, input_bits;
    for (const auto& cp : copies) {
        const Register& x = c.reg(cp.x);
        const Register& o = c.reg(cp.out);
        if (x.size != n || o.size != m) throw std::invalid_argument("check_lookup_circuit: register size mismatch");
        xq.push_back(x.qubits());
        oq.push_back(o.qubits());
        for (int q : x.qubits()) input_bits.push_back(q);
        for (int q : o.qubits()) outs.push_back(q);
    }
    int ctrl_q = -1;
    if (!ctrl.empty()) {
        const Register& r = c.reg(ctrl);
        if (r.size != 1) throw std::invalid_argument("check_lookup_circuit: control must be one qubit");
        ctrl_q = r.start;
        input_bits.push_back(ctrl_q);
    }
    const int nbits = static_cast<int>(input_bits.size());
    if (nbits > 40) throw std::invalid_argument("check_lookup_circuit: too many input bits");
    if (static_cast<int>(outs.size()) > 64) throw std::invalid_argument("check_lookup_circuit: too many output bits");
    std::vector<char> role(static_cast<std::size_t>(c.width()), 0);  // 1 input, 2 output
    for (int q : input_bits) role[static_cast<std::size_t>(q)] = 1;
    for (int q : outs) role[static_cast<std::size_t>(q)] = 2;

    Evaluator ev(c, outs);
    const std::uint64_t total = std::uint64_t{1} << nbits;
    rep.inputs = total;
    int ref_phase = -1;
    for (std::uint64_t base = 0; base < total; base += kLanes) {
        std::uint64_t active[L];
        for (int w = 0; w < L; ++w) {
            const std::uint64_t lo = base + 64 * static_cast<std::uint64_t>(w);
            if (lo >= total)
                active[w] = 0;
            else if (total - lo >= 64)
                active[w] = ~std::uint64_t{0};
            else
                active[w] = (std::uint64_t{1} << (total - lo)) - 1;
        }
        ev.reset(active);
        for (int b = 0; b < nbits; ++b) {
            std::uint64_t* V = ev.v(input_bits[static_cast<std::size_t>(b)]);
            for (int w = 0; w < L; ++w) V[w] = input_word(base, w, b);
        }
        try {
            ev.run();
        } catch (const Failure& e) {
            rep.first_failure = e.what();
            rep.failed_inputs = total;
            return rep;
        }

        std::uint64_t bad[L];
        ev.residue(bad);
        // inputs keep their values and carry no output dependence
        for (int b = 0; b < nbits; ++b) {
            const int q = input_bits[static_cast<std::size_t>(b)];
            for (int w = 0; w < L; ++w) bad[w] |= ev.v(q)[w] ^ input_word(base, w, b);
            if (ev.tainted(q))
                for (int j = 0; j < ev.mask_planes(); ++j)
                    for (int w = 0; w < L; ++w) bad[w] |= ev.mask(q, j)[w];
        }
        // scratch returns to zero
        for (int q = 0; q < c.width(); ++q) {
            if (role[static_cast<std::size_t>(q)] != 0) continue;
            for (int w = 0; w < L; ++w) bad[w] |= ev.v(q)[w];
            if (ev.tainted(q))
                for (int j = 0; j < ev.mask_planes(); ++j)
                    for (int w = 0; w < L; ++w) bad[w] |= ev.mask(q, j)[w];
        }
        // outputs: own initial bit XOR the table entry
        for (std::size_t i = 0; i < copies.size(); ++i) {
            for (int w = 0; w < L; ++w) {
                const std::uint64_t act = active[w];
                if (!act) continue;
                for (int lane = 0; lane < 64; ++lane) {
                    if (!((act >> lane) & 1U)) continue;
                    const std::uint64_t in = base + 64 * static_cast<std::uint64_t>(w) + static_cast<std::uint64_t>(lane);
                    std::uint64_t x = 0;
                    for (int b = 0; b < n; ++b) x |= ((in >> (static_cast<int>(i) * n + b)) & 1U) << b;
                    Word want = f(x);
                    if (ctrl_q >= 0 && !((in >> (nbits - 1)) & 1U)) want = 0;
                    for (int j = 0; j < m; ++j) {
                        const int q = oq[i][static_cast<std::size_t>(j)];
                        if (((ev.v(q)[w] >> lane) & 1U) != ((want >> j) & 1U)) bad[w] |= std::uint64_t{1} << lane;
                    }
                }
            }
            for (int j = 0; j < m; ++j) {
                const int q = oq[i][static_cast<std::size_t>(j)];
                const int own = static_cast<int>(i) * m + j;
                for (int k = 0; k < ev.mask_planes(); ++k)
                    for (int w = 0; w < L; ++w) bad[w] |= ev.mask(q, k)[w] ^ (k == own ? ~std::uint64_t{0} : 0);
            }
        }
        // one global phase for every input
        for (int w = 0; w < L; ++w) {
            if (!active[w]) continue;
            if (ref_phase < 0) ref_phase = static_cast<int>(ev.phase()[w] & 1U);
            bad[w] |= ev.phase()[w] ^ (ref_phase ? ~std::uint64_t{0} : 0);
        }
        for (int w = 0; w < L; ++w) rep.failed_inputs += static_cast<std::uint64_t>(std::popcount(bad[w] & active[w]));
        if (rep.failed_inputs && rep.first_failure.empty())
            rep.first_failure = "wrong final state for some input in pass starting at " + std::to_string(base);
    }
    return rep;
}

BasisCheckReport check_mass_production(const FunctionTable& f, const MassProductionPlan& plan) {
    Circuit c = build_mass_production(f, plan);
    std::vector<LookupCopy> copies;
    if (plan.t == 0) {
        copies.push_back({"x", "out"});
    } else {
        for (std::int64_t i = 0; i < plan.copies(); ++i)
            copies.push_back({"x" + std::to_string(i), "out" + std::to_string(i)});
    }
    return check_lookup_circuit(c, f, copies);
}

}  // namespace qmp
