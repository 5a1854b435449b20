// qmp: command-line front end.
//
// Exit codes: 0 success, 1 usage or input error, 2 verification failure.
// Options can also come from a JSON file given with --config; flags on the
// command line win over the file.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qmp/apps.hpp"
#include "qmp/cost.hpp"
#include "qmp/massprod.hpp"
#include "qmp/optimizer.hpp"
#include "qmp/qrom.hpp"
#include "qmp/resource.hpp"
#include "qmp/sim.hpp"
#include "qmp/table.hpp"
#include "qmp/verify.hpp"

using nlohmann::json;
using namespace qmp;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// JSON config: top-level keys name options of the running subcommand (or
// of the root); an object keyed by a running subcommand's name is read as
// that subcommand's section. Keys for other subcommands are ignored.
class JsonConfig : public CLI::Config {
public:
    explicit JsonConfig(const CLI::App* root) : root_(root) {}

    std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

    std::vector<CLI::ConfigItem> from_config(std::istream& is) const override {
        json j;
        try {
            is >> j;
        } catch (const json::exception& e) {
            throw CLI::ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!j.is_object()) throw CLI::ConfigError("config must be a JSON object");
        std::vector<const CLI::App*> path{root_};
        for (const CLI::App* a = root_;;) {
            auto subs = a->get_subcommands();
            if (subs.empty()) break;
            a = subs.front();
            path.push_back(a);
        }
        std::vector<CLI::ConfigItem> items;
        collect(j, path, 0, items);
        return items;
    }

private:
    static std::vector<std::string> parents_of(const std::vector<const CLI::App*>& path, std::size_t level) {
        std::vector<std::string> p;
        for (std::size_t i = 1; i <= level; ++i) p.push_back(path[i]->get_name());
        return p;
    }

    static void collect(const json& obj, const std::vector<const CLI::App*>& path, std::size_t level,
                        std::vector<CLI::ConfigItem>& items) {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            const std::string& key = it.key();
            if (it->is_object()) {
                if (level + 1 < path.size() && path[level + 1]->get_name() == key) collect(*it, path, level + 1, items);
                continue;
            }
            // the deepest running command that owns the option takes it
            std::size_t owner = path.size();
            for (std::size_t l = path.size(); l-- > level;)
                if (path[l]->get_option_no_throw("--" + key)) {
                    owner = l;
                    break;
                }
            if (owner == path.size()) continue;
            CLI::ConfigItem item;
            item.parents = parents_of(path, owner);
            item.name = key;
            if (it->is_array()) {
                for (const auto& v : *it) item.inputs.push_back(v.is_string() ? v.get<std::string>() : v.dump());
            } else if (it->is_boolean()) {
                item.inputs.push_back(it->get<bool>() ? "true" : "false");
            } else {
                item.inputs.push_back(it->is_string() ? it->get<std::string>() : it->dump());
            }
            items.push_back(std::move(item));
        }
    }

    const CLI::App* root_;
};

struct ModelOpts {
    double xi = 1.0;
    int toffoli_t = 4;
    int toffoli_clifford = 11;
    std::string counting = "upper_bound";

    CostModel model() const {
        CostModel m;
        m.xi = xi;
        m.toffoli_t_count = toffoli_t;
        m.toffoli_clifford_overhead = toffoli_clifford;
        if (counting == "upper_bound")
            m.counting_mode = CountingMode::upper_bound;
        else if (counting == "data_exact")
            m.counting_mode = CountingMode::data_exact;
        else
            throw UsageError("--counting-mode must be upper_bound or data_exact");
        m.check();
        return m;
    }
};

struct TableOpts {
    std::string file;
    bool random = false;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int n = 0, m = 0;

    FunctionTable load() const {
        if (!file.empty()) {
            std::ifstream in(file);
            if (!in) throw UsageError("cannot open table file " + file);
            return read_table(in);
        }
        if (!seed_given) throw UsageError("a random table needs --seed (or give --table <file>)");
        if (n < 1 || m < 1) throw UsageError("a random table needs --n and --m");
        return random_table(n, m, seed);
    }
};

void add_table_opts(CLI::App* c, TableOpts& t) {
    c->add_option("--table", t.file, "Table file (header 'n m', then 2^n hex words)");
    c->add_flag("--random", t.random, "Use a random table (needs --seed, --n, --m)");
    c->add_option("--n", t.n, "Address bits");
    c->add_option("--m", t.m, "Output bits");
    c->add_option("--seed", t.seed, "Seed for random tables")->each([&t](const std::string&) { t.seed_given = true; });
}

json summary_json(const CostSummary& s) {
    return {{"clifford", s.clifford_count}, {"t_count", s.t_count},       {"toffoli", s.toffoli_count},
            {"measurements", s.measurement_count}, {"qubits", s.qubit_count}, {"total", s.total}};
}

json tally_json(const GateTally& t) {
    return {{"h", t.h},         {"x", t.x},           {"z", t.z},           {"s", t.s},
            {"cnot", t.cnot},   {"cz", t.cz},         {"swap", t.swap},     {"cswap", t.cswap},
            {"toffoli", t.toffoli}, {"measure", t.measure}, {"classical", t.classical}, {"data", t.data},
            {"data_slots", t.data_slots}};
}

json plan_json(const MassProductionPlan& p) { return json::parse(plan_to_json(p)); }

std::int64_t pow2_or_throw(std::int64_t v, const char* what) {
    if (v < 1 || (v & (v - 1)) != 0) throw UsageError(std::string(what) + " must be a power of two");
    return v;
}

std::string bits_of(std::uint64_t v, int width) {
    std::string s(static_cast<std::size_t>(width), '0');
    for (int i = 0; i < width; ++i)
        if ((v >> i) & 1U) s[static_cast<std::size_t>(width - 1 - i)] = '1';
    return s;
}

// Rightmost character is qubit (or bit) 0.
std::uint64_t parse_bits(const std::string& s, int max_width) {
    if (s.empty() || static_cast<int>(s.size()) > max_width) throw UsageError("bit string '" + s + "' has the wrong length");
    std::uint64_t v = 0;
    for (char ch : s) {
        if (ch != '0' && ch != '1') throw UsageError("bit string '" + s + "' may only contain 0 and 1");
        v = (v << 1) | static_cast<std::uint64_t>(ch - '0');
    }
    return v;
}

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

MassProductionPlan make_plan(int n, int m, int t, const std::string& sched, std::int64_t lambda) {
    MassProductionPlan p;
    p.n = n;
    p.m = m;
    p.t = t;
    p.k_schedule = sched.empty() ? std::vector<int>(static_cast<std::size_t>(t), 1) : parse_schedule(sched);
    p.lambda_leaf = lambda;
    try {
        p.check();
    } catch (const std::invalid_argument& e) {
        throw InfeasiblePlan(e.what());
    }
    return p;
}

// ---- subcommands ----

struct BuildOpts {
    TableOpts table;
    std::string kind = "qroam";
    bool massprod = false;
    bool controlled = false;
    std::int64_t lambda = 1;
    int t = 0;
    std::string schedule;
    std::string emit;
};

int cmd_build(const BuildOpts& o, const CostModel& cm) {
    FunctionTable f = o.table.load();
    Circuit c;
    json out;
    pow2_or_throw(o.lambda, "--lambda");
    if (o.massprod || o.kind == "massprod") {
        auto p = make_plan(f.n(), f.m(), o.t, o.schedule, o.lambda);
        c = build_mass_production(f, p);
        out["kind"] = "massprod";
        out["plan"] = plan_json(p);
    } else if (o.kind == "plain") {
        c = build_plain_qrom(f, o.controlled).circuit;
        out["kind"] = "plain";
    } else if (o.kind == "qroam") {
        c = (o.controlled ? build_qroam_controlled(f, o.lambda) : build_qroam_modified(f, o.lambda)).circuit;
        out["kind"] = "qroam";
        out["lambda"] = o.lambda;
    } else {
        throw UsageError("--kind must be plain, qroam or massprod");
    }
    out["controlled"] = o.controlled;
    out["width"] = c.width();
    out["gates"] = c.gates().size();
    out["records"] = c.num_records();
    out["tally"] = tally_json(tally_gates(c));
    out["cost"] = summary_json(count_costs(c, cm));
    if (!o.emit.empty()) {
        std::ofstream os(o.emit);
        if (!os) throw UsageError("cannot write " + o.emit);
        write_circuit(os, c);
        out["emitted"] = o.emit;
    }
    print_json(out);
    return 0;
}

struct SimulateOpts {
    std::string circuit;
    std::string input;
    std::string policy = "all";
    std::uint64_t seed = 0;
    bool seed_given = false;
    int width_cap = 24;
};

int cmd_simulate(const SimulateOpts& o) {
    std::ifstream in(o.circuit);
    if (!in) throw UsageError("cannot open circuit file " + o.circuit);
    Circuit c = read_circuit(in);
    const std::uint64_t input = o.input.empty() ? 0 : parse_bits(o.input, c.width());
    MeasurementPolicy pol;
    if (o.policy == "all") {
        pol = MeasurementPolicy::all();
    } else if (o.policy == "sampled") {
        if (!o.seed_given) throw UsageError("--policy sampled needs --seed");
        pol = MeasurementPolicy::sampled(o.seed);
    } else if (o.policy.rfind("forced=", 0) == 0) {
        // character i is the outcome of record i
        std::map<int, int> f;
        const std::string bits = o.policy.substr(7);
        for (std::size_t i = 0; i < bits.size(); ++i) {
            if (bits[i] != '0' && bits[i] != '1') throw UsageError("forced outcomes may only contain 0 and 1");
            f[static_cast<int>(i)] = bits[i] - '0';
        }
        pol = MeasurementPolicy::forced_outcomes(f);
    } else {
        throw UsageError("--policy must be all, sampled or forced=<bits>");
    }
    SimOptions so;
    so.width_cap = o.width_cap;
    json runs = json::array();
    for (const auto& r : run(c, input, pol, so)) {
        json terms = json::array();
        for (const auto& [b, a] : r.state.terms())
            terms.push_back({{"basis", bits_of(b, c.width())}, {"re", a.real()}, {"im", a.imag()}});
        json oc = json::object();
        for (const auto& [k, v] : r.outcomes) oc[std::to_string(k)] = v;
        runs.push_back({{"probability", r.probability}, {"outcomes", oc}, {"state", terms}});
    }
    print_json({{"width", c.width()}, {"input", bits_of(input, c.width())}, {"branches", runs.size()}, {"runs", runs}});
    return 0;
}

struct VerifyOpts {
    TableOpts table;
    int t = 1;
    std::string schedule;
    std::int64_t lambda = 0;
};

int cmd_verify(const VerifyOpts& o) {
    FunctionTable f = o.table.load();
    std::int64_t lam = o.lambda;
    int sum = 0;
    for (int k : (o.schedule.empty() ? std::vector<int>(static_cast<std::size_t>(o.t), 1) : parse_schedule(o.schedule)))
        sum += k;
    if (lam == 0) lam = f.n() - sum >= 1 ? 2 : 1;
    pow2_or_throw(lam, "--lambda");
    auto p = make_plan(f.n(), f.m(), o.t, o.schedule, lam);
    Circuit c = build_mass_production(f, p);
    auto rep = check_mass_production(f, p);
    json out{{"plan", plan_json(p)},
             {"copies", p.copies()},
             {"width", c.width()},
             {"gates", c.gates().size()},
             {"measurement_records", c.num_records()},
             {"basis_inputs", rep.inputs},
             {"failed_inputs", rep.failed_inputs},
             {"ok", rep.ok()}};
    if (!rep.first_failure.empty()) out["first_failure"] = rep.first_failure;
    print_json(out);
    return rep.ok() ? 0 : 2;
}

struct CostOpts {
    std::string kind = "qroam";
    int n = 0, m = 0;
    std::int64_t lambda = 1;
    bool controlled = false;
    int t = 0;
    std::string schedule;
};

int cmd_cost(const CostOpts& o, const CostModel& cm) {
    if (o.n < 1 || o.m < 1) throw UsageError("cost needs --n and --m");
    pow2_or_throw(o.lambda, "--lambda");
    json out{{"n", o.n}, {"m", o.m}, {"xi", cm.xi}};
    if (o.kind == "massprod") {
        auto p = make_plan(o.n, o.m, o.t, o.schedule, o.lambda);
        auto tc = cost_only_tagged(p, cm);
        out["kind"] = "massprod";
        out["plan"] = plan_json(p);
        out["cost"] = summary_json(cost_only(p, cm));
        out["control"] = summary_json(tc.control);
        out["lookup"] = summary_json(tc.lookup);
        out["fraction_non_lookup"] = fraction_non_lookup(p, cm);
    } else if (o.kind == "qroam" || o.kind == "plain") {
        const std::int64_t lam = o.kind == "plain" ? 1 : o.lambda;
        QroamParams qp{o.n, o.m, lam, o.controlled};
        qp.check();
        out["kind"] = o.kind;
        out["lambda"] = lam;
        out["controlled"] = o.controlled;
        out["tally"] = tally_json(qroam_tally(qp));
        out["cost"] = summary_json(qroam_cost(qp, cm));
    } else {
        throw UsageError("--kind must be plain, qroam or massprod");
    }
    print_json(out);
    return 0;
}

struct OptimizeOpts {
    int n = 0, m = 40;
    std::int64_t r = 2;
    bool toffoli_only = false;
    int k_max = 0;
    int lambda_cap_log = -1;
};

int cmd_optimize(const OptimizeOpts& o, const CostModel& cm) {
    pow2_or_throw(o.r, "--r");
    SearchOptions so;
    so.objective = o.toffoli_only ? Objective::toffoli : Objective::total;
    so.k_max = o.k_max;
    so.lambda_cap_log = o.lambda_cap_log;
    auto res = optimize_plan(o.n, o.m, cm, o.r, so);
    json out{{"n", o.n},
             {"m", o.m},
             {"r", o.r},
             {"objective", o.toffoli_only ? "toffoli" : "total"},
             {"plan", plan_json(res.plan)},
             {"cost_mp", summary_json(res.cost_mp)},
             {"cost_naive", summary_json(res.cost_naive)},
             {"naive_lambda", res.naive_lambda},
             {"improvement", res.improvement},
             {"improvement_mp", res.improvement_mp},
             {"fraction_non_lookup", fraction_non_lookup(res.plan, cm)}};
    if (o.toffoli_only)
        out["xi"] = "inf";
    else
        out["xi"] = cm.xi;
    print_json(out);
    return 0;
}

struct SweepOpts {
    std::string spec;
    std::string out;
};

int cmd_sweep(const SweepOpts& o) {
    std::ifstream in(o.spec);
    if (!in) throw UsageError("cannot open sweep spec " + o.spec);
    std::stringstream ss;
    ss << in.rdbuf();
    auto rows = run_sweep(sweep_spec_from_json(ss.str()));
    if (o.out.empty() || o.out == "-") {
        write_sweep_csv(std::cout, rows);
    } else {
        std::ofstream os(o.out, std::ios::binary);
        if (!os) throw UsageError("cannot write " + o.out);
        write_sweep_csv(os, rows);
    }
    return 0;
}

struct DemoOpts {
    int n = 3, m = 2;
    std::int64_t c = 4;
    std::uint64_t seed = 0;
    bool seed_given = false;
    bool json_out = false;
    int verify_max_n = 5;
};

json amort_json(const AmortizationReport& a) {
    return {{"n", a.n},
            {"m", a.m},
            {"c", a.c},
            {"prep",
             {{"batch", a.prep.batch},
              {"mass_produced", a.prep.mass_produced},
              {"plan", plan_json(a.prep.plan)},
              {"single_lambda", a.prep.lambda},
              {"cost", summary_json(a.prep.cost)}}},
            {"consume_per_query", summary_json(a.consume)},
            {"correction_per_query", summary_json(a.correction)},
            {"correction_lambda", a.correction_lambda},
            {"single", summary_json(a.single)},
            {"single_lambda", a.single_lambda},
            {"total", a.total},
            {"ratio", a.ratio},
            {"correction_ratio", a.correction_ratio}};
}

int cmd_resource_demo(const DemoOpts& o, const CostModel& cm) {
    if (!o.seed_given) throw UsageError("resource-demo needs --seed");
    pow2_or_throw(o.c, "--c");
    json out{{"n", o.n}, {"m", o.m}, {"c", o.c}, {"seed", o.seed}};
    bool ok = true;
    if (o.n <= o.verify_max_n) {
        auto f = random_table(o.n, o.m, o.seed);
        std::int64_t branches = 0, bad = 0;
        double worst = 0;
        std::map<int, std::int64_t> by_case;
        for (std::uint64_t x = 0; x < f.size(); ++x)
            for (const auto& b : serial_query(f, x, MeasurementPolicy::all(), o.n >= 2 ? 2 : 1, o.n >= 3 ? 2 : 1)) {
                ++branches;
                ++by_case[b.case_tag];
                worst = std::max(worst, std::abs(b.probability - std::ldexp(1.0, -o.n)));
                if (!b.output_ok || !b.input_ok || !b.ancilla_clean) ++bad;
            }
        json cases = json::object();
        for (auto [k, v] : by_case) cases[std::to_string(k)] = v;
        ok = bad == 0 && worst <= 1e-9;
        out["verification"] = {{"inputs", f.size()},   {"branches", branches},   {"bad_branches", bad},
                               {"max_probability_error", worst}, {"branches_by_case", cases}, {"ok", ok}};
    } else {
        out["verification"] = nullptr;
    }
    if (o.n >= 2)
        out["amortization"] = amort_json(amortized_cost(o.n, o.m, o.c, cm));
    else
        out["amortization"] = nullptr;
    if (o.json_out) {
        print_json(out);
    } else {
        if (!out["verification"].is_null())
            std::cout << "verification: " << out["verification"]["branches"] << " branches, "
                      << out["verification"]["bad_branches"] << " bad\n";
        if (!out["amortization"].is_null())
            std::cout << "amortized ratio: " << out["amortization"]["ratio"].get<double>()
                      << ", correction ratio: " << out["amortization"]["correction_ratio"].get<double>() << "\n";
    }
    return ok ? 0 : 2;
}

struct SelftestOpts {
    bool quick = false;
};

int cmd_selftest(const SelftestOpts& o) {
    const int nmax = o.quick ? 4 : 5;
    struct Row {
        std::string name;
        std::int64_t cases = 0, failures = 0;
    };
    std::vector<Row> rows;

    Row mp{"massprod semantics"};
    for (int n = 2; n <= nmax; ++n)
        for (int m = 1; m <= 2; ++m)
            for (int t = 1; t <= 2; ++t)
                for (int k = 1; k * t < n; ++k)
                    for (std::int64_t lam : {1, 2}) {
                        MassProductionPlan p{n, m, t, std::vector<int>(static_cast<std::size_t>(t), k), lam};
                        if (lam > (std::int64_t{1} << p.leaf_bits())) continue;
                        ++mp.cases;
                        if (!check_mass_production(random_table(n, m, static_cast<std::uint64_t>(mp.cases)), p).ok())
                            ++mp.failures;
                    }
    rows.push_back(mp);

    Row qr{"qroam semantics"};
    for (int n = 1; n <= nmax + 1; ++n)
        for (int m = 1; m <= 3; ++m) {
            auto f = random_table(n, m, static_cast<std::uint64_t>(n * 7 + m));
            for (std::int64_t lam = 1; lam <= (std::int64_t{1} << n); lam *= 2) {
                qr.cases += 2;
                if (!check_lookup_circuit(build_qroam_modified(f, lam).circuit, f, {{"x", "out"}}).ok()) ++qr.failures;
                if (!check_lookup_circuit(build_qroam_controlled(f, lam).circuit, f, {{"x", "out"}}, "ctrl").ok())
                    ++qr.failures;
            }
        }
    rows.push_back(qr);

    Row rs{"resource-state branches"};
    for (int n = 1; n <= nmax - 1; ++n)
        for (int m = 1; m <= 2; ++m) {
            auto f = random_table(n, m, static_cast<std::uint64_t>(n * 3 + m));
            for (std::uint64_t x = 0; x < f.size(); ++x)
                for (const auto& b : serial_query(f, x, MeasurementPolicy::all(), 1, n >= 3 ? 2 : 1)) {
                    ++rs.cases;
                    if (!b.output_ok || !b.input_ok || !b.ancilla_clean ||
                        std::abs(b.probability - std::ldexp(1.0, -n)) > 1e-9)
                        ++rs.failures;
                }
        }
    rows.push_back(rs);

    Row cm{"count mirror"};
    CostModel model;
    for (int n = 2; n <= (o.quick ? 8 : 10); ++n)
        for (int m : {1, 5})
            for (int t = 0; t <= 2; ++t)
                for (int k = 1; k == 1 || k * t < n; ++k) {
                    if (k * t >= n) break;
                    for (std::int64_t lam : {1, 4}) {
                        MassProductionPlan p{n, m, t, std::vector<int>(static_cast<std::size_t>(t), k), lam};
                        if (lam > (std::int64_t{1} << p.leaf_bits())) continue;
                        ++cm.cases;
                        auto f = random_table(n, m, static_cast<std::uint64_t>(cm.cases));
                        if (!count_costs(build_mass_production(f, p), model).same_counts(cost_only(p, model)))
                            ++cm.failures;
                    }
                    if (t == 0) break;
                }
    rows.push_back(cm);

    bool ok = true;
    for (const auto& r : rows) {
        std::printf("%-26s %8lld cases  %s\n", r.name.c_str(), static_cast<long long>(r.cases),
                    r.failures == 0 ? "pass" : "FAIL");
        ok = ok && r.failures == 0;
    }
    return ok ? 0 : 2;
}

struct AppsOpts {
    // ampamp
    double p = 1e-4, delta = 0.01, q = 1, cgates = 0, kappa = 1, lookup_constant = 1;
    std::int64_t r = 1;
    int n = 10, m = 8;
    // alias
    std::int64_t items = 1 << 16;
    int mu = 10;
    // sparse
    double a = 4, b = 1.78, c_sel = 1, c_other = 1;
    double from = 100, to = 200, step = 10;
    std::string csv;
    // qpe
    std::string mode = "sparse";
    double n_orb = 100, param = 2, scale = 1;
    // kretschmer
    double eps = 1e-3;
    std::string kind = "state";
    // mps
    double sites = 10, chi = 100, c_mps = 1;
};

int cmd_apps(const std::string& which, const AppsOpts& o, const CostModel& cm) {
    json out{{"label", "model estimate"}};
    if (which == "ampamp") {
        AmpAmpParams a;
        a.p = o.p;
        a.r = o.r;
        a.delta = o.delta;
        a.q = o.q;
        a.c = o.cgates;
        a.kappa = o.kappa;
        a.lookup_constant = o.lookup_constant;
        auto rep = amp_amp_cost(a, o.n, o.m);
        out.update({{"p", o.p},           {"r", o.r},         {"p_r", rep.p_r},   {"queries", rep.queries},
                    {"round_cost", rep.round_cost}, {"total", rep.total}, {"speedup", rep.speedup},
                    {"speedup_over_sqrt_r", rep.speedup / std::sqrt(static_cast<double>(o.r))},
                    {"rp_warning", rep.rp_warning}});
    } else if (which == "alias") {
        auto ac = alias_sampling_prep_cost(o.items, o.mu, cm);
        out.update({{"N", o.items},
                    {"mu", o.mu},
                    {"index_bits", ac.index_bits},
                    {"out_bits", ac.out_bits},
                    {"lambda", ac.lambda},
                    {"lookup", summary_json(ac.lookup)},
                    {"other", summary_json(ac.other)},
                    {"total", summary_json(ac.total)},
                    {"fraction_non_lookup", ac.fraction_non_lookup}});
    } else if (which == "sparse") {
        ChemistryModel ch;
        ch.a = o.a;
        ch.b = o.b;
        ch.mu = o.mu;
        ch.c_sel = o.c_sel;
        ch.c_other = o.c_other;
        ch.model = cm;
        if (!(o.step > 0) || o.to < o.from) throw UsageError("sparse needs --from <= --to and --step > 0");
        std::vector<double> grid;
        for (double v = o.from; v <= o.to + 1e-9; v += o.step) grid.push_back(v);
        auto rows = sparse_fraction_curve(ch, grid);
        if (!o.csv.empty()) {
            std::ofstream os(o.csv, std::ios::binary);
            if (!os) throw UsageError("cannot write " + o.csv);
            os << "n_orb,items,input_bits,lookup,non_lookup,fraction_non_lookup\n";
            char buf[256];
            for (const auto& r : rows) {
                std::snprintf(buf, sizeof buf, "%.6g,%lld,%d,%.6g,%.6g,%.6g\n", r.n_orb, static_cast<long long>(r.items),
                              r.input_bits, r.lookup, r.non_lookup, r.fraction_non_lookup);
                os << buf;
            }
        }
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back({{"n_orb", r.n_orb},   {"items", r.items},         {"input_bits", r.input_bits},
                           {"lookup", r.lookup}, {"non_lookup", r.non_lookup}, {"fraction_non_lookup", r.fraction_non_lookup}});
        out.update({{"a", o.a}, {"b", o.b}, {"rows", arr}});
    } else if (which == "qpe") {
        QpeMode mode;
        if (o.mode == "sparse")
            mode = QpeMode::sparse;
        else if (o.mode == "thc")
            mode = QpeMode::thc;
        else
            throw UsageError("--mode must be sparse or thc");
        auto q = parallel_qpe_compare(mode, o.n_orb, o.param, o.scale);
        out.update({{"mode", o.mode},
                    {"n_orb", o.n_orb},
                    {mode == QpeMode::sparse ? "b" : "rank", o.param},
                    {"standard", q.standard},
                    {"mass_produced", q.mass_produced},
                    {"ratio", q.ratio}});
    } else if (which == "kretschmer") {
        KretschmerKind k;
        if (o.kind == "state")
            k = KretschmerKind::state;
        else if (o.kind == "unitary")
            k = KretschmerKind::unitary;
        else
            throw UsageError("--kind must be state or unitary");
        out.update({{"n", o.n}, {"eps", o.eps}, {"kind", o.kind}, {"count", kretschmer_counts(o.n, o.eps, k)}});
    } else if (which == "mps") {
        out.update({{"sites", o.sites}, {"chi", o.chi}, {"eps", o.eps}, {"cost", mps_prep_cost(o.sites, o.chi, o.eps, o.c_mps)}});
    }
    print_json(out);
    return 0;
}

void report_error(bool as_json, const std::string& kind, const std::string& msg) {
    if (as_json)
        std::cerr << json{{"error", kind}, {"message", msg}}.dump() << "\n";
    else
        std::cerr << "error: " << msg << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mass-produced lookup circuits: build, simulate, verify and cost them"};
    app.require_subcommand(1);
    app.fallthrough();
    bool json_errors = false;
    int threads = 0;
    ModelOpts mo;
    app.add_flag("--json-errors", json_errors, "Print errors to stderr as JSON");
    app.add_option("--xi", mo.xi, "Cost of one T gate in Clifford units");
    app.add_option("--toffoli-t", mo.toffoli_t, "T gates per Toffoli");
    app.add_option("--toffoli-clifford", mo.toffoli_clifford, "Cliffords per Toffoli");
    app.add_option("--counting-mode", mo.counting, "upper_bound or data_exact");
    app.add_option("--threads", threads, "Cap on sweep workers (also QMP_THREADS)");
    app.set_config("--config", "", "JSON config file; command-line flags win");
    app.config_formatter(std::make_shared<JsonConfig>(&app));

    BuildOpts bo;
    auto* build = app.add_subcommand("build", "Build a lookup or mass-production circuit");
    add_table_opts(build, bo.table);
    build->add_option("--kind", bo.kind, "plain, qroam or massprod");
    build->add_flag("--massprod", bo.massprod, "Build a mass-production circuit");
    build->add_flag("--controlled", bo.controlled, "Add a control qubit");
    build->add_option("--lambda", bo.lambda, "QROAM copies (power of two)");
    build->add_option("--t", bo.t, "Recursion depth (2^t copies)");
    build->add_option("--k-schedule", bo.schedule, "Prefix widths, e.g. 1,1,2");
    build->add_option("--emit", bo.emit, "Write the circuit in text form");

    SimulateOpts so;
    auto* simulate = app.add_subcommand("simulate", "Simulate a circuit file on a basis input");
    simulate->add_option("--circuit", so.circuit, "Circuit text file")->required();
    simulate->add_option("--input", so.input, "Input bits, rightmost is qubit 0");
    simulate->add_option("--policy", so.policy, "all, sampled or forced=<bits> (leftmost is record 0)");
    simulate->add_option("--seed", so.seed, "Seed for sampled outcomes")->each([&so](const std::string&) { so.seed_given = true; });
    simulate->add_option("--width-cap", so.width_cap, "Largest circuit width");

    VerifyOpts vo;
    auto* verify = app.add_subcommand("verify", "Exhaustively check a mass-production circuit");
    add_table_opts(verify, vo.table);
    verify->add_option("--t", vo.t, "Recursion depth");
    verify->add_option("--k-schedule", vo.schedule, "Prefix widths");
    verify->add_option("--lambda", vo.lambda, "Leaf QROAM copies (default 2 when possible)");

    CostOpts co;
    auto* cost = app.add_subcommand("cost", "Closed-form cost of a lookup or plan");
    cost->add_option("--kind", co.kind, "plain, qroam or massprod");
    cost->add_option("--n", co.n, "Address bits");
    cost->add_option("--m", co.m, "Output bits");
    cost->add_option("--lambda", co.lambda, "QROAM copies");
    cost->add_flag("--controlled", co.controlled, "Controlled lookup");
    cost->add_option("--t", co.t, "Recursion depth");
    cost->add_option("--k-schedule", co.schedule, "Prefix widths");
    bool cost_json = false;
    cost->add_flag("--json", cost_json, "JSON output (the default)");

    OptimizeOpts oo;
    auto* optimize = app.add_subcommand("optimize", "Best mass-production plan for r copies");
    optimize->add_option("--n", oo.n, "Address bits")->required();
    optimize->add_option("--m", oo.m, "Output bits");
    optimize->add_option("--r", oo.r, "Copies (power of two)");
    optimize->add_flag("--toffoli-only", oo.toffoli_only, "Minimize Toffolis (xi -> infinity)");
    optimize->add_option("--k-max", oo.k_max, "Largest prefix width");
    optimize->add_option("--lambda-cap-log", oo.lambda_cap_log, "log2 of the largest leaf lambda");
    bool opt_json = false;
    optimize->add_flag("--json", opt_json, "JSON output (the default)");

    SweepOpts swo;
    auto* sweep = app.add_subcommand("sweep", "Run a sweep spec and write CSV");
    sweep->add_option("--spec", swo.spec, "Sweep spec JSON file")->required();
    sweep->add_option("--out", swo.out, "Output CSV (stdout if omitted)");

    DemoOpts dmo;
    auto* demo = app.add_subcommand("resource-demo", "Resource-state protocol: verification and amortized cost");
    demo->add_option("--n", dmo.n, "Address bits");
    demo->add_option("--m", dmo.m, "Output bits");
    demo->add_option("--c", dmo.c, "Queries served by one batch (power of two)");
    demo->add_option("--seed", dmo.seed, "Table seed")->each([&dmo](const std::string&) { dmo.seed_given = true; });
    demo->add_flag("--json", dmo.json_out, "JSON output");
    demo->add_option("--verify-max-n", dmo.verify_max_n, "Largest n that is simulated");

    AppsOpts ao;
    auto* apps = app.add_subcommand("apps", "Application cost calculators");
    apps->require_subcommand(1);
    auto* aa = apps->add_subcommand("ampamp", "Amplitude amplification with r parallel attempts");
    aa->add_option("--p", ao.p, "Success probability of one attempt");
    aa->add_option("--r", ao.r, "Parallel attempts");
    aa->add_option("--delta", ao.delta, "Target failure probability");
    aa->add_option("--n", ao.n, "Table address bits");
    aa->add_option("--m", ao.m, "Table output bits");
    aa->add_option("--q", ao.q, "Oracle calls per attempt");
    aa->add_option("--other", ao.cgates, "Other gates per attempt");
    aa->add_option("--kappa", ao.kappa, "Fixed-point query constant");
    aa->add_option("--lookup-constant", ao.lookup_constant, "Cost per table entry bit");
    auto* al = apps->add_subcommand("alias", "Coherent alias sampling PREP cost");
    al->add_option("--N", ao.items, "Number of items");
    al->add_option("--mu", ao.mu, "Keep-probability bits");
    auto* sp = apps->add_subcommand("sparse", "Non-lookup fraction of sparse PREP against N_orb");
    sp->add_option("--a", ao.a, "Scale of N = a N_orb^b");
    sp->add_option("--b", ao.b, "Exponent of N = a N_orb^b");
    sp->add_option("--mu", ao.mu, "Keep-probability bits");
    sp->add_option("--c-sel", ao.c_sel, "Toffolis per orbital outside the lookup");
    sp->add_option("--c-other", ao.c_other, "Fixed Toffolis outside the lookup");
    sp->add_option("--from", ao.from, "First N_orb");
    sp->add_option("--to", ao.to, "Last N_orb");
    sp->add_option("--step", ao.step, "N_orb step");
    sp->add_option("--csv", ao.csv, "Also write the rows as CSV");
    auto* qp = apps->add_subcommand("qpe", "Parallel phase estimation cost comparison");
    qp->add_option("--mode", ao.mode, "sparse or thc");
    qp->add_option("--n-orb", ao.n_orb, "Orbitals");
    qp->add_option("--param", ao.param, "b (sparse) or rank (thc)");
    qp->add_option("--scale", ao.scale, "Block-encoding norm over precision");
    auto* kr = apps->add_subcommand("kretschmer", "Gate counts for arbitrary states or unitaries");
    kr->add_option("--n", ao.n, "Qubits");
    kr->add_option("--eps", ao.eps, "Target error");
    kr->add_option("--kind", ao.kind, "state or unitary");
    auto* mp = apps->add_subcommand("mps", "Matrix product state preparation cost");
    mp->add_option("--sites", ao.sites, "Sites");
    mp->add_option("--chi", ao.chi, "Bond dimension");
    mp->add_option("--eps", ao.eps, "Target error");
    mp->add_option("--c", ao.c_mps, "Constant factor");

    SelftestOpts sto;
    auto* selftest = app.add_subcommand("selftest", "Run the exhaustive small-n suites");
    selftest->add_flag("--quick", sto.quick, "Smaller subset");

    // parse errors are usage errors: exit 1 with the usage text
    for (int i = 1; i < argc; ++i)
        if (std::string(argv[i]) == "--json-errors") json_errors = true;
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        report_error(json_errors, "usage", e.what());
        if (!json_errors) std::cerr << app.help();
        return 1;
    }

    try {
        if (threads > 0) setenv("QMP_THREADS", std::to_string(threads).c_str(), 1);
        const CostModel cm = mo.model();
        if (build->parsed()) return cmd_build(bo, cm);
        if (simulate->parsed()) return cmd_simulate(so);
        if (verify->parsed()) return cmd_verify(vo);
        if (cost->parsed()) return cmd_cost(co, cm);
        if (optimize->parsed()) return cmd_optimize(oo, cm);
        if (sweep->parsed()) return cmd_sweep(swo);
        if (demo->parsed()) return cmd_resource_demo(dmo, cm);
        if (selftest->parsed()) return cmd_selftest(sto);
        if (apps->parsed())
            for (auto* s : {aa, al, sp, qp, kr, mp})
                if (s->parsed()) return cmd_apps(s->get_name(), ao, cm);
    } catch (const UsageError& e) {
        report_error(json_errors, "usage", e.what());
        return 1;
    } catch (const InfeasiblePlan& e) {
        report_error(json_errors, "infeasible", e.what());
        return 1;
    } catch (const TableError& e) {
        report_error(json_errors, "parse", e.what());
        return 1;
    } catch (const StructuralError& e) {
        report_error(json_errors, "parse", e.what());
        return 1;
    } catch (const json::exception& e) {
        report_error(json_errors, "parse", e.what());
        return 1;
    } catch (const SimError& e) {
        report_error(json_errors, "simulation", e.what());
        return 1;
    } catch (const std::invalid_argument& e) {
        report_error(json_errors, "invalid", e.what());
        return 1;
    } catch (const std::exception& e) {
        report_error(json_errors, "internal", e.what());
        return 1;
    }
    return 1;
}
