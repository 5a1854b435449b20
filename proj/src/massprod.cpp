#include "qmp/massprod.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "qmp/qrom.hpp"

namespace qmp {

int MassProductionPlan::leaf_bits() const {
    int s = 0;
    for (int k : k_schedule) s += k;
    return n - s;
}

void MassProductionPlan::check() const {
    if (n < 1) throw std::invalid_argument("plan: n must be >= 1");
    if (m < 1 || m > 64) throw std::invalid_argument("plan: m out of range");
    if (t < 0 || t > 20) throw std::invalid_argument("plan: t out of range");
    if (static_cast<int>(k_schedule.size()) != t)
        throw std::invalid_argument("plan: k schedule must have t = " + std::to_string(t) + " entries");
    for (int k : k_schedule)
        if (k < 1) throw std::invalid_argument("plan: every k must be >= 1");
    if (leaf_bits() < 1) throw std::invalid_argument("plan: sum of k schedule must be < n");
    QroamParams{leaf_bits(), m, lambda_leaf, false}.check();
}

std::string MassProductionPlan::schedule_string(char sep) const {
    std::string s;
    for (std::size_t i = 0; i < k_schedule.size(); ++i) {
        if (i) s += sep;
        s += std::to_string(k_schedule[i]);
    }
    return s;
}

std::string plan_to_json(const MassProductionPlan& p) {
    nlohmann::json j;
    j["n"] = p.n;
    j["m"] = p.m;
    j["t"] = p.t;
    j["k_schedule"] = p.k_schedule;
    j["lambda_leaf"] = p.lambda_leaf;
    return j.dump();
}

MassProductionPlan plan_from_json(const std::string& s) {
    const auto j = nlohmann::json::parse(s);
    MassProductionPlan p;
    p.n = j.at("n").get<int>();
    p.m = j.at("m").get<int>();
    p.k_schedule = j.at("k_schedule").get<std::vector<int>>();
    p.t = j.value("t", static_cast<int>(p.k_schedule.size()));
    p.lambda_leaf = j.value("lambda_leaf", std::int64_t{1});
    p.check();
    return p;
}

std::vector<int> parse_schedule(const std::string& s) {
    std::vector<int> out;
    std::string norm = s;
    std::replace(norm.begin(), norm.end(), '-', ',');
    std::string tok;
    std::stringstream ss(norm);
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(tok, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad k schedule entry '" + tok + "'");
        }
        if (used != tok.size()) throw std::invalid_argument("bad k schedule entry '" + tok + "'");
        out.push_back(v);
    }
    return out;
}

RoutingState routing_state(std::uint64_t l, std::uint64_t xl, std::uint64_t yl) {
    if (xl > yl) throw std::invalid_argument("routing_state: needs xl <= yl");
    RoutingState r;
    // A_j flips c at j = xl and at j = yl (and swaps there); G_l sees A_0..A_{l-1}
    const bool past_x = xl < l, past_y = yl < l;
    r.control = !(past_x != past_y);
    r.swapped = past_y;
    return r;
}

namespace {

// k controls -> target, target arbitrary. Ladder is clean scratch.
void emit_mcx(Circuit& c, const std::vector<int>& ctl, int target, const std::vector<int>& ladder) {
    const std::size_t k = ctl.size();
    if (k == 1) {
        c.cnot(ctl[0], target);
        return;
    }
    if (k == 2) {
        c.toffoli(ctl[0], ctl[1], target);
        return;
    }
    c.toffoli(ctl[0], ctl[1], ladder[0]);
    for (std::size_t j = 1; j + 2 < k; ++j) c.toffoli(ladder[j - 1], ctl[j + 1], ladder[j]);
    c.toffoli(ladder[k - 3], ctl[k - 1], target);
    for (std::size_t j = k - 2; j-- > 0;) c.uncompute_and(ladder[j], j ? ladder[j - 1] : ctl[0], ctl[j + 1]);
}

// aux = AND(ctl), aux clean. The ladder stays live until uncompute_and_k.
void compute_and_k(Circuit& c, const std::vector<int>& ctl, int aux, const std::vector<int>& ladder) {
    const std::size_t k = ctl.size();
    if (k == 1) {
        c.cnot(ctl[0], aux);
        return;
    }
    if (k == 2) {
        c.toffoli(ctl[0], ctl[1], aux);
        return;
    }
    c.toffoli(ctl[0], ctl[1], ladder[0]);
    for (std::size_t j = 1; j + 2 < k; ++j) c.toffoli(ladder[j - 1], ctl[j + 1], ladder[j]);
    c.toffoli(ladder[k - 3], ctl[k - 1], aux);
}

void uncompute_and_k(Circuit& c, const std::vector<int>& ctl, int aux, const std::vector<int>& ladder) {
    const std::size_t k = ctl.size();
    if (k == 1) {
        c.cnot(ctl[0], aux);
        return;
    }
    if (k == 2) {
        c.uncompute_and(aux, ctl[0], ctl[1]);
        return;
    }
    c.uncompute_and(aux, ladder[k - 3], ctl[k - 1]);
    for (std::size_t j = k - 2; j-- > 0;) c.uncompute_and(ladder[j], j ? ladder[j - 1] : ctl[0], ctl[j + 1]);
}

struct AdvanceWires {
    int c = 0, aux = 0;
    std::vector<int> xl, yl, xr, yr, alpha, beta, ladder;
};

void emit_advance(Circuit& c, std::uint64_t l, const AdvanceWires& w) {
    const std::size_t k = w.xl.size();
    auto flip_zeros = [&](const std::vector<int>& reg) {
        for (std::size_t j = 0; j < k; ++j)
            if (!((l >> j) & 1U)) c.x(reg[j]);
    };
    flip_zeros(w.xl);
    emit_mcx(c, w.xl, w.c, w.ladder);
    flip_zeros(w.xl);

    flip_zeros(w.yl);
    compute_and_k(c, w.yl, w.aux, w.ladder);
    c.cnot(w.aux, w.c);
    for (std::size_t b = 0; b < w.xr.size(); ++b) c.cswap(w.aux, w.xr[b], w.yr[b]);
    for (std::size_t b = 0; b < w.alpha.size(); ++b) c.cswap(w.aux, w.alpha[b], w.beta[b]);
    uncompute_and_k(c, w.yl, w.aux, w.ladder);
    flip_zeros(w.yl);
}

// s ^= [x > y] for k-bit x, y (bit 0 least significant) via the carry of
// x + not(y). The MAJ chain is undone, so cin and the inputs are restored.
void emit_compare(Circuit& c, const std::vector<int>& x, const std::vector<int>& y, int cin, int s) {
    const std::size_t k = x.size();
    for (int q : y) c.x(q);
    int carry = cin;
    for (std::size_t i = 0; i < k; ++i) {
        c.cnot(x[i], y[i]);
        c.cnot(x[i], carry);
        c.toffoli(carry, y[i], x[i]);
        carry = x[i];
    }
    c.cnot(x[k - 1], s);
    for (std::size_t i = k; i-- > 0;) {
        const int prev = i ? x[i - 1] : cin;
        c.toffoli(prev, y[i], x[i]);
        c.cnot(x[i], prev);
        c.cnot(x[i], y[i]);
    }
    for (int q : y) c.x(q);
}

class Builder {
public:
    Builder(const MassProductionPlan& p) : p_(p) {}

    Circuit build(const FunctionTable& f) {
        const int t = p_.t;
        const int r = 1 << t;
        for (int i = 0; i < r; ++i) {
            x_.push_back(c_.add_register("x" + std::to_string(i), p_.n, RegRole::input).start);
            out_.push_back(c_.add_register("out" + std::to_string(i), p_.m, RegRole::output).start);
        }
        for (int d = 0; d < t; ++d) {
            const int cells = 1 << (t - d - 1);
            Level lv;
            for (int j = 0; j < cells; ++j) {
                const std::string tag = std::to_string(d) + "_" + std::to_string(j);
                lv.s.push_back(c_.add_register("s" + tag, 1, RegRole::ancilla_clean).start);
                lv.c.push_back(c_.add_register("c" + tag, 1, RegRole::ancilla_clean).start);
                if (d < t - 1) lv.park.push_back(c_.add_register("p" + tag, p_.m, RegRole::ancilla_clean).start);
            }
            levels_.push_back(lv);
        }
        cin_ = c_.add_register("cin", 1, RegRole::ancilla_clean).start;
        aux_ = c_.add_register("aux", 1, RegRole::ancilla_clean).start;
        const int maxk = *std::max_element(p_.k_schedule.begin(), p_.k_schedule.end());
        if (maxk > 2) ladder_ = c_.add_register("ladder", maxk - 2, RegRole::ancilla_clean).qubits();
        const std::int64_t lam = p_.lambda_leaf;
        const int nl = p_.leaf_bits();
        if (lam > 1) anc_ = c_.add_register("anc", static_cast<int>((lam - 1) * p_.m), RegRole::ancilla_clean).qubits();
        const int it = iteration_ancilla(nl - log2_exact(lam), true);
        if (it > 0) iter_ = c_.add_register("iter", it, RegRole::ancilla_clean).qubits();

        c_.metadata().push_back("builder=mass_production");
        c_.metadata().push_back("plan=" + plan_to_json(p_));
        emit_mp(f, 0);
        return std::move(c_);
    }

private:
    struct Level {
        std::vector<int> s, c, park;
    };

    int level_bits(int d) const {
        int b = p_.n;
        for (int i = 0; i < d; ++i) b -= p_.k_schedule[static_cast<std::size_t>(i)];
        return b;
    }

    std::vector<int> xbits(int slot, int lo, int hi) const {
        std::vector<int> v;
        for (int b = lo; b < hi; ++b) v.push_back(x_[static_cast<std::size_t>(slot)] + b);
        return v;
    }
    std::vector<int> obits(int slot) const {
        std::vector<int> v;
        for (int b = 0; b < p_.m; ++b) v.push_back(out_[static_cast<std::size_t>(slot)] + b);
        return v;
    }

    void leaf(const FunctionTable& f, int slot, std::optional<int> ctrl) {
        LookupWires w;
        w.addr = xbits(slot, 0, f.n());
        w.out = obits(slot);
        w.ctrl = ctrl;
        w.anc = anc_;
        w.iter = iter_;
        emit_qroam(c_, f, p_.lambda_leaf, w);
    }

    // All slots that are multiples of 2^d take part at level d.
    void emit_mp(const FunctionTable& f, int d) {
        if (d == p_.t) {
            leaf(f, 0, std::nullopt);
            return;
        }
        const int k = p_.k_schedule[static_cast<std::size_t>(d)];
        const int nd = level_bits(d);
        const int nr = nd - k;
        const Level& lv = levels_[static_cast<std::size_t>(d)];
        const int cells = static_cast<int>(lv.s.size());
        const int step = 1 << d;
        auto first = [&](int j) { return 2 * j * step; };
        auto second = [&](int j) { return 2 * j * step + step; };

        for (int j = 0; j < cells; ++j) {
            emit_compare(c_, xbits(first(j), nr, nd), xbits(second(j), nr, nd), cin_, lv.s[static_cast<std::size_t>(j)]);
            swap_slots(lv.s[static_cast<std::size_t>(j)], first(j), second(j), nd);
            c_.x(lv.c[static_cast<std::size_t>(j)]);
        }

        const bool leaf_next = d + 1 == p_.t;
        emit_mp(g_member(f, k, 0), d + 1);
        const std::uint64_t top = std::uint64_t{1} << k;
        for (std::uint64_t l = 0; l < top; ++l) {
            for (int j = 0; j < cells; ++j) {
                AdvanceWires w;
                w.c = lv.c[static_cast<std::size_t>(j)];
                w.aux = aux_;
                w.xl = xbits(first(j), nr, nd);
                w.yl = xbits(second(j), nr, nd);
                w.xr = xbits(first(j), 0, nr);
                w.yr = xbits(second(j), 0, nr);
                w.alpha = obits(first(j));
                w.beta = obits(second(j));
                w.ladder = ladder_;
                emit_advance(c_, l, w);
            }
            const FunctionTable g = g_member(f, k, l + 1);
            if (leaf_next) {
                leaf(g, 0, lv.c[0]);
            } else {
                for (int j = 0; j < cells; ++j) park(lv, j, first(j));
                emit_mp(g, d + 1);
                for (int j = cells; j-- > 0;) unpark(lv, j, first(j));
            }
        }

        for (int j = 0; j < cells; ++j) {
            for (int b = 0; b < nr; ++b) c_.swap(x_[static_cast<std::size_t>(first(j))] + b, x_[static_cast<std::size_t>(second(j))] + b);
            for (int b = 0; b < p_.m; ++b) c_.swap(out_[static_cast<std::size_t>(first(j))] + b, out_[static_cast<std::size_t>(second(j))] + b);
            c_.x(lv.c[static_cast<std::size_t>(j)]);
        }
        for (int j = cells; j-- > 0;) {
            swap_slots(lv.s[static_cast<std::size_t>(j)], first(j), second(j), nd);
            emit_compare(c_, xbits(first(j), nr, nd), xbits(second(j), nr, nd), cin_, lv.s[static_cast<std::size_t>(j)]);
        }
    }

    void swap_slots(int s, int a, int b, int nd) {
        for (int q = 0; q < nd; ++q) c_.cswap(s, x_[static_cast<std::size_t>(a)] + q, x_[static_cast<std::size_t>(b)] + q);
        for (int q = 0; q < p_.m; ++q) c_.cswap(s, out_[static_cast<std::size_t>(a)] + q, out_[static_cast<std::size_t>(b)] + q);
    }

    // With c = 0 the slot's output is exchanged for a |+> register, which
    // every lookup leaves unchanged.
    void park(const Level& lv, int j, int slot) {
        const int cq = lv.c[static_cast<std::size_t>(j)];
        const int pk = lv.park[static_cast<std::size_t>(j)];
        for (int b = 0; b < p_.m; ++b) c_.h(pk + b);
        c_.x(cq);
        for (int b = 0; b < p_.m; ++b) c_.cswap(cq, out_[static_cast<std::size_t>(slot)] + b, pk + b);
        c_.x(cq);
    }
    void unpark(const Level& lv, int j, int slot) {
        const int cq = lv.c[static_cast<std::size_t>(j)];
        const int pk = lv.park[static_cast<std::size_t>(j)];
        c_.x(cq);
        for (int b = 0; b < p_.m; ++b) c_.cswap(cq, out_[static_cast<std::size_t>(slot)] + b, pk + b);
        c_.x(cq);
        for (int b = 0; b < p_.m; ++b) c_.h(pk + b);
    }

    const MassProductionPlan& p_;
    Circuit c_;
    std::vector<int> x_, out_;
    std::vector<Level> levels_;
    int cin_ = -1, aux_ = -1;
    std::vector<int> ladder_, anc_, iter_;
};

}  // namespace

Circuit build_mass_production(const FunctionTable& f, const MassProductionPlan& plan) {
    plan.check();
    if (f.n() != plan.n || f.m() != plan.m) throw std::invalid_argument("mass production: table shape does not match plan");
    if (plan.t == 0) return build_qroam_modified(f, plan.lambda_leaf).circuit;
    return Builder(plan).build(f);
}

Circuit build_two_copy(const FunctionTable& f, int k, std::int64_t lambda) {
    MassProductionPlan p{f.n(), f.m(), 1, {k}, lambda};
    return build_mass_production(f, p);
}

Circuit build_advance(std::uint64_t l, int k, int nr, int m) {
    if (k < 1 || l >= (std::uint64_t{1} << k)) throw std::invalid_argument("advance: need l < 2^k");
    Circuit c;
    AdvanceWires w;
    w.c = c.add_register("c", 1, RegRole::control).start;
    w.xl = c.add_register("xl", k, RegRole::input).qubits();
    w.yl = c.add_register("yl", k, RegRole::input).qubits();
    if (nr > 0) {
        w.xr = c.add_register("xr", nr, RegRole::input).qubits();
        w.yr = c.add_register("yr", nr, RegRole::input).qubits();
    }
    w.alpha = c.add_register("alpha", m, RegRole::output).qubits();
    w.beta = c.add_register("beta", m, RegRole::output).qubits();
    w.aux = c.add_register("aux", 1, RegRole::ancilla_clean).start;
    if (k > 2) w.ladder = c.add_register("ladder", k - 2, RegRole::ancilla_clean).qubits();
    emit_advance(c, l, w);
    return c;
}

GateTally comparator_tally(int k) {
    GateTally t;
    t.x = 2 * k;
    t.cnot = 4 * k + 1;
    t.toffoli = 2 * k;
    return t;
}

namespace {

GateTally and_uncompute(std::int64_t count) {
    GateTally t;
    t.h = count;
    t.measure = count;
    t.classical = 2 * count;
    return t;
}

}  // namespace

GateTally advance_tally(int k, int nr, int m) {
    const std::int64_t rounds = std::int64_t{1} << k;
    GateTally one;
    // multi-controlled flip of c and the clean AND into aux
    if (k == 1) {
        one.cnot += 1 + 2;
    } else if (k == 2) {
        one.toffoli += 2;
        one += and_uncompute(1);
    } else {
        one.toffoli += 2 * (k - 1);
        one += and_uncompute((k - 2) + (k - 1));
    }
    one.cnot += 1;
    one.cswap += nr + m;
    GateTally t = one * rounds;
    // X conjugation on the zero bits of l, for both prefixes
    t.x += 4 * static_cast<std::int64_t>(k) * (rounds / 2);
    return t;
}

GateTally route_tally(int m) {
    GateTally t;
    t.h = 2 * m;
    t.x = 4;
    t.cswap = 2 * m;
    return t;
}

GateTally cell_tally(int k, int nr, int m) {
    GateTally t = comparator_tally(k) * 2;
    GateTally sw;
    sw.cswap = 2 * (k + nr + m);
    t += sw;
    t.x += 2;
    t.swap += nr + m;
    t += advance_tally(k, nr, m);
    return t;
}

namespace {

// Tally of an MP over nb bits with 2^depth slots, starting at schedule index d.
struct Split {
    GateTally all, lookup;
};

Split mp_tally(const MassProductionPlan& p, int d, int nb) {
    const int depth = p.t - d;
    if (depth == 0) {
        GateTally q = qroam_tally({nb, p.m, p.lambda_leaf, false});
        return {q, q};
    }
    const int k = p.k_schedule[static_cast<std::size_t>(d)];
    const std::int64_t cells = std::int64_t{1} << (depth - 1);
    const std::int64_t rounds = std::int64_t{1} << k;
    Split sub = mp_tally(p, d + 1, nb - k);
    Split out;
    out.all = cell_tally(k, nb - k, p.m) * cells;
    out.all += sub.all;
    out.lookup = sub.lookup;
    if (depth == 1) {
        GateTally q = qroam_tally({nb - k, p.m, p.lambda_leaf, true});
        out.all += q * rounds;
        out.lookup += q * rounds;
    } else {
        out.all += (route_tally(p.m) * cells + sub.all) * rounds;
        out.lookup += sub.lookup * rounds;
    }
    return out;
}

}  // namespace

int mass_width(const MassProductionPlan& plan) {
    plan.check();
    const int nl = plan.leaf_bits();
    const int a = nl - log2_exact(plan.lambda_leaf);
    const int scratch = static_cast<int>((plan.lambda_leaf - 1) * plan.m);
    if (plan.t == 0) return plan.n + plan.m + scratch + iteration_ancilla(a, false);
    const int r = 1 << plan.t;
    int w = r * (plan.n + plan.m);
    for (int d = 0; d < plan.t; ++d) {
        const int cells = 1 << (plan.t - d - 1);
        w += cells * (2 + (d < plan.t - 1 ? plan.m : 0));
    }
    const int maxk = *std::max_element(plan.k_schedule.begin(), plan.k_schedule.end());
    w += 2 + std::max(0, maxk - 2);
    w += scratch + iteration_ancilla(a, true);
    return w;
}

MassCost mass_tally(const MassProductionPlan& plan) {
    plan.check();
    Split s = mp_tally(plan, 0, plan.n);
    return {s.all, s.lookup, mass_width(plan)};
}

CostSummary cost_only(const MassProductionPlan& plan, const CostModel& model) {
    MassCost mc = mass_tally(plan);
    return summarize(mc.tally, model, mc.width);
}

TaggedCost cost_only_tagged(const MassProductionPlan& plan, const CostModel& model) {
    MassCost mc = mass_tally(plan);
    GateTally ctl = mc.tally;
    // the control part is the difference of the two tallies
    ctl.h -= mc.lookup_tally.h;
    ctl.x -= mc.lookup_tally.x;
    ctl.z -= mc.lookup_tally.z;
    ctl.s -= mc.lookup_tally.s;
    ctl.cnot -= mc.lookup_tally.cnot;
    ctl.cz -= mc.lookup_tally.cz;
    ctl.swap -= mc.lookup_tally.swap;
    ctl.cswap -= mc.lookup_tally.cswap;
    ctl.toffoli -= mc.lookup_tally.toffoli;
    ctl.measure -= mc.lookup_tally.measure;
    ctl.classical -= mc.lookup_tally.classical;
    ctl.data -= mc.lookup_tally.data;
    ctl.data_slots -= mc.lookup_tally.data_slots;
    return {summarize(ctl, model, mc.width), summarize(mc.lookup_tally, model, mc.width)};
}

}  // namespace qmp
