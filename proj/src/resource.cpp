#include "qmp/resource.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qmp/optimizer.hpp"
#include "qmp/qrom.hpp"

namespace qmp {

ProtocolLayout ProtocolLayout::for_lookups(int n, int m, std::int64_t lambda_f, std::int64_t lambda_g) {
    if (n < 1 || m < 1) throw std::invalid_argument("protocol: n and m must be >= 1");
    QroamParams{n, m, lambda_f, false}.check();
    ProtocolLayout l;
    l.n = n;
    l.m = m;
    l.anc = static_cast<int>((lambda_f - 1) * m);
    l.iter = iteration_ancilla(n - log2_exact(lambda_f), false);
    if (n >= 2) {
        QroamParams{n - 1, m, lambda_g, false}.check();
        l.anc = std::max(l.anc, static_cast<int>((lambda_g - 1) * m));
        l.iter = std::max(l.iter, iteration_ancilla(n - 1 - log2_exact(lambda_g), false));
    }
    return l;
}

Circuit ProtocolLayout::shell() const {
    Circuit c;
    c.add_register("x", n, RegRole::input);
    c.add_register("y", n, RegRole::ancilla_clean);
    c.add_register("out", m, RegRole::output);
    if (anc > 0) c.add_register("anc", anc, RegRole::ancilla_clean);
    if (iter > 0) c.add_register("iter", iter, RegRole::ancilla_clean);
    return c;
}

namespace {

std::vector<int> reg_qubits(const Circuit& c, const char* name) {
    const Register* r = c.find_register(name);
    return r ? r->qubits() : std::vector<int>{};
}

LookupWires wires(const Circuit& c, std::vector<int> addr) {
    LookupWires w;
    w.addr = std::move(addr);
    w.out = reg_qubits(c, "out");
    w.anc = reg_qubits(c, "anc");
    w.iter = reg_qubits(c, "iter");
    return w;
}

void check_table(const FunctionTable& f, const ProtocolLayout& lay) {
    if (f.n() != lay.n || f.m() != lay.m) throw std::invalid_argument("protocol: table does not match layout");
}

}  // namespace

Circuit resource_prep_circuit(const FunctionTable& f, std::int64_t lambda, const ProtocolLayout& lay) {
    check_table(f, lay);
    Circuit c = lay.shell();
    const auto y = reg_qubits(c, "y");
    for (int q : y) c.h(q);
    emit_qroam(c, f, lambda, wires(c, y));
    return c;
}

Circuit consume_circuit(const ProtocolLayout& lay) {
    Circuit c = lay.shell();
    const Register& x = c.reg("x");
    const Register& y = c.reg("y");
    for (int i = 0; i < lay.n; ++i) c.cnot(x[i], y[i]);
    for (int i = 0; i < lay.n; ++i) {
        const int rec = c.measure_z(y[i]);
        c.classical_x(rec, y[i]);
    }
    return c;
}

namespace {

std::uint64_t record_value(const std::map<int, int>& outcomes, int n) {
    std::uint64_t b = 0;
    for (int i = 0; i < n; ++i) {
        auto it = outcomes.find(i);
        if (it == outcomes.end()) throw SimError("consume: missing measurement record " + std::to_string(i));
        if (it->second) b |= std::uint64_t{1} << i;
    }
    return b;
}

}  // namespace

std::vector<ConsumptionOutcome> consume(const FunctionTable& f, std::uint64_t x, const MeasurementPolicy& policy,
                                        std::int64_t lambda, const SimOptions& opts) {
    if (x >= f.size()) throw std::invalid_argument("consume: input out of range");
    const ProtocolLayout lay = ProtocolLayout::for_lookups(f.n(), f.m(), lambda, 1);
    Circuit prep = resource_prep_circuit(f, lambda, lay);
    const int xs = prep.reg("x").start;
    auto prepared = run(prep, x << xs, MeasurementPolicy::all(), opts);

    MeasurementPolicy p = policy;
    p.merge = false;  // b must stay visible on every branch
    std::vector<ConsumptionOutcome> res;
    Circuit cons = consume_circuit(lay);
    for (const auto& pr : prepared) {
        for (auto& br : run(cons, pr.state, p, opts)) {
            ConsumptionOutcome o;
            o.b = {f.n(), record_value(br.outcomes, f.n())};
            o.case_tag = correction_case(o.b);
            o.probability = pr.probability * br.probability;
            o.state = std::move(br.state);
            res.push_back(std::move(o));
        }
    }
    std::stable_sort(res.begin(), res.end(),
                     [](const ConsumptionOutcome& a, const ConsumptionOutcome& b) { return a.b.value < b.b.value; });
    return res;
}

CorrectionCircuit correct(const FunctionTable& f, BitString b, std::int64_t lambda_g, const ProtocolLayout& lay) {
    check_table(f, lay);
    if (b.width != f.n() || b.value >= f.size()) throw std::invalid_argument("correct: shift does not match table");
    CorrectionCircuit cc;
    cc.circuit = lay.shell();
    cc.case_tag = correction_case(b);
    if (cc.case_tag == 1) return cc;
    cc.table = correction_table(f, b);

    Circuit& c = cc.circuit;
    const int n = f.n();
    const Register& x = c.reg("x");
    if (n == 1) {
        // zero address bits: g is a constant
        const Register& out = c.reg("out");
        const Tag saved = c.current_tag;
        c.current_tag = Tag::lookup;
        for (int j = 0; j < f.m(); ++j)
            if ((cc.table.g(0) >> j) & 1U) c.data_x(out[j]);
        c.add_data_slots(f.m());
        c.current_tag = saved;
        return cc;
    }
    // wire of relabeled bit j is x[perm[j]]
    const auto& perm = cc.table.perm;
    const int lead = x[perm[static_cast<std::size_t>(n - 1)]];
    std::vector<int> addr;
    for (int j = 0; j + 1 < n; ++j) addr.push_back(x[perm[static_cast<std::size_t>(j)]]);
    std::vector<int> flips;
    for (int j = 0; j + 1 < n; ++j)
        if ((cc.table.b_perm >> j) & 1U) flips.push_back(addr[static_cast<std::size_t>(j)]);
    for (int q : flips) c.cnot(lead, q);
    emit_qroam(c, cc.table.g, lambda_g, wires(c, addr));
    for (int q : flips) c.cnot(lead, q);
    return cc;
}

std::vector<QueryBranch> serial_query(const FunctionTable& f, std::uint64_t x, const MeasurementPolicy& policy,
                                      std::int64_t lambda_f, std::int64_t lambda_g, const SimOptions& opts) {
    const int n = f.n();
    if (x >= f.size()) throw std::invalid_argument("serial_query: input out of range");
    const ProtocolLayout lay = ProtocolLayout::for_lookups(n, f.m(), lambda_f, n >= 2 ? lambda_g : 1);
    Circuit prep = resource_prep_circuit(f, lambda_f, lay);
    Circuit cons = consume_circuit(lay);
    const int xs = prep.reg("x").start;
    const int os = prep.reg("out").start;
    const std::uint64_t want = (x << xs) | (f(x) << os);

    auto prepared = run(prep, x << xs, MeasurementPolicy::all(), opts);
    MeasurementPolicy p = policy;
    p.merge = false;

    std::vector<QueryBranch> res;
    for (const auto& pr : prepared) {
        for (auto& br : run(cons, pr.state, p, opts)) {
            QueryBranch q;
            q.b = record_value(br.outcomes, n);
            q.case_tag = correction_case({n, q.b});
            q.probability = pr.probability * br.probability;
            CorrectionCircuit cc = correct(f, {n, q.b}, n >= 2 ? lambda_g : 1, lay);
            q.output_ok = q.input_ok = q.ancilla_clean = true;
            double tot = 0;
            for (auto& fin : run(cc.circuit, br.state, MeasurementPolicy::all(), opts)) {
                tot += fin.probability;
                auto v = fin.state.as_basis();
                if (!v) {
                    q.output_ok = q.input_ok = q.ancilla_clean = false;
                    continue;
                }
                const std::uint64_t outmask = f.mask() << os;
                const std::uint64_t xmask = (f.size() - 1) << xs;
                if ((*v & outmask) != (want & outmask)) q.output_ok = false;
                if ((*v & xmask) != (want & xmask)) q.input_ok = false;
                if ((*v & ~(outmask | xmask)) != 0) q.ancilla_clean = false;
            }
            if (std::abs(tot - 1.0) > 1e-9) q.output_ok = false;
            res.push_back(q);
        }
    }
    std::stable_sort(res.begin(), res.end(), [](const QueryBranch& a, const QueryBranch& b) { return a.b < b.b; });
    return res;
}

BatchSimulation prepare_batch(const FunctionTable& f, const MassProductionPlan& plan, const SimOptions& opts) {
    if (plan.n != f.n() || plan.m != f.m()) throw std::invalid_argument("prepare_batch: plan does not match table");
    plan.check();
    BatchSimulation bs;
    bs.circuit = build_mass_production(f, plan);
    const Circuit& c = bs.circuit;
    const int copies = static_cast<int>(plan.copies());
    std::vector<int> xstart, ostart;
    if (plan.t == 0) {
        xstart.push_back(c.reg("x").start);
        ostart.push_back(c.reg("out").start);
    } else {
        for (int i = 0; i < copies; ++i) {
            xstart.push_back(c.reg("x" + std::to_string(i)).start);
            ostart.push_back(c.reg("out" + std::to_string(i)).start);
        }
    }
    const int n = f.n();
    if (n * copies > 20) throw std::invalid_argument("prepare_batch: too many input qubits to simulate");
    const std::uint64_t total = std::uint64_t{1} << (n * copies);
    const double amp = std::pow(2.0, -0.5 * n * copies);

    StateVector in(c.width()), want(c.width());
    const std::uint64_t ymask = f.size() - 1;
    for (std::uint64_t all = 0; all < total; ++all) {
        std::uint64_t b = 0, w = 0;
        for (int i = 0; i < copies; ++i) {
            const std::uint64_t y = (all >> (n * i)) & ymask;
            b |= y << xstart[static_cast<std::size_t>(i)];
            w |= (y << xstart[static_cast<std::size_t>(i)]) | (f(y) << ostart[static_cast<std::size_t>(i)]);
        }
        in.terms().emplace_back(b, Amp{amp, 0.0});
        want.terms().emplace_back(w, Amp{amp, 0.0});
    }
    in.canonicalize();
    want.canonicalize();
    bs.fidelity = 1.0;
    for (auto& rr : run(c, in, MeasurementPolicy::all(), opts)) {
        bs.fidelity = std::min(bs.fidelity, rr.state.fidelity(want));
        ++bs.branches;
    }
    return bs;
}

namespace {

CostSummary h_layer(int count, const CostModel& model) {
    GateTally t;
    t.h = count;
    return summarize(t, model, 0);
}

}  // namespace

BatchCost prepare_batch_cost(int n, int m, std::int64_t c, const CostModel& model) {
    if (c < 1 || !std::has_single_bit(static_cast<std::uint64_t>(c)))
        throw std::invalid_argument("prepare_batch: c must be a power of two");
    if (std::countr_zero(static_cast<std::uint64_t>(c)) >= n)
        throw InfeasiblePlan("prepare_batch: c = " + std::to_string(c) + " copies need n > log2 c");
    BatchCost bc;
    bc.c = c;
    const CostSummary hs = h_layer(static_cast<int>(n * c), model);
    QromChoice q = optimize_qrom(n, m, model);
    bc.lambda = q.lambda;
    bc.batch = 1;
    bc.plan = MassProductionPlan{n, m, 0, {}, q.lambda};
    CostSummary best = q.cost;
    best.clifford_count *= c;
    best.t_count *= c;
    best.toffoli_count *= c;
    best.measurement_count *= c;
    best.total *= static_cast<double>(c);
    // c states may come from c / r batches of r copies each
    for (std::int64_t r = 2; r <= c; r *= 2) {
        OptimizationResult res = optimize_plan(n, m, model, r);
        const std::int64_t k = c / r;
        if (static_cast<double>(k) * res.cost_mp.total >= best.total) continue;
        best = res.cost_mp;
        best.clifford_count *= k;
        best.t_count *= k;
        best.toffoli_count *= k;
        best.measurement_count *= k;
        best.total *= static_cast<double>(k);
        bc.batch = r;
        bc.plan = res.plan;
        bc.mass_produced = true;
    }
    bc.cost = best + hs;
    return bc;
}

AmortizationReport amortized_cost(int n, int m, std::int64_t c, const CostModel& model) {
    if (n < 2) throw std::invalid_argument("amortized_cost: n must be >= 2");
    AmortizationReport rep;
    rep.n = n;
    rep.m = m;
    rep.c = c;
    rep.prep = prepare_batch_cost(n, m, c, model);

    GateTally ct;
    ct.cnot = n;
    ct.classical = n;
    ct.measure = n;
    rep.consume = summarize(ct, model, 0);

    // cases 2-4 all run one (n-1)-bit lookup; case 3 and 4 add at most
    // 2(n-1) CNOTs around it
    QromChoice g = optimize_qrom(n - 1, m, model);
    GateTally flips;
    flips.cnot = 2 * (n - 1);
    rep.correction = g.cost + summarize(flips, model, 0);
    rep.correction_lambda = g.lambda;

    QromChoice s = optimize_qrom(n, m, model);
    rep.single = s.cost;
    rep.single_lambda = s.lambda;

    const CostSummary per = rep.consume + rep.correction;
    rep.total = rep.prep.cost.total + static_cast<double>(c) * per.total;
    rep.ratio = rep.total / (static_cast<double>(c) * s.cost.total);
    rep.correction_ratio = g.cost.total / s.cost.total;
    return rep;
}

CostSummary general_alpha_wrap_cost(int n, int m, std::int64_t lambda, const CostModel& model) {
    CostSummary base = qroam_cost({n, m, lambda, false}, model);
    GateTally t;
    t.cnot = m;
    return base + summarize(t, model, 0) + measurement_uncompute_cost(n, lambda, model);
}

}  // namespace qmp
