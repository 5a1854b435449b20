#include "qmp/sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <unordered_map>

namespace qmp {

namespace {

constexpr double kDrop = 1e-14;
constexpr double kBranchEps = 1e-12;
constexpr double kMergeTol = 1e-9;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

inline std::uint64_t bit(int q) { return std::uint64_t{1} << q; }
inline bool has(std::uint64_t b, int q) { return (b >> q) & 1U; }

void apply_h(StateVector& st, int q) {
    const std::uint64_t mk = bit(q);
    std::unordered_map<std::uint64_t, Amp> acc;
    acc.reserve(st.terms().size() * 2 + 1);
    for (const auto& [b, a] : st.terms()) {
        const std::uint64_t b0 = b & ~mk;
        const Amp v = a * kInvSqrt2;
        acc[b0] += v;
        acc[b0 | mk] += has(b, q) ? -v : v;
    }
    auto& t = st.terms();
    t.clear();
    for (const auto& [b, a] : acc)
        if (std::abs(a) > kDrop) t.emplace_back(b, a);
}

double prob_one(const StateVector& st, int q) {
    double p = 0;
    for (const auto& [b, a] : st.terms())
        if (has(b, q)) p += std::norm(a);
    return p;
}

StateVector project(const StateVector& st, int q, int value) {
    StateVector out(st.width());
    double p = 0;
    for (const auto& [b, a] : st.terms())
        if (static_cast<int>(has(b, q)) == value) {
            out.terms().emplace_back(b, a);
            p += std::norm(a);
        }
    const double scale = 1.0 / std::sqrt(p);
    for (auto& t : out.terms()) t.second *= scale;
    return out;
}

void apply_unitary(StateVector& st, const Gate& g) {
    auto& terms = st.terms();
    switch (g.kind) {
    case GateKind::H:
        apply_h(st, g.target(0));
        break;
    case GateKind::X: {
        const std::uint64_t mk = bit(g.target(0));
        for (auto& t : terms) t.first ^= mk;
        break;
    }
    case GateKind::Z: {
        const int q = g.target(0);
        for (auto& t : terms)
            if (has(t.first, q)) t.second = -t.second;
        break;
    }
    case GateKind::S: {
        const int q = g.target(0);
        for (auto& t : terms)
            if (has(t.first, q)) t.second *= Amp(0, 1);
        break;
    }
    case GateKind::CNOT: {
        const int c = g.control(0);
        const std::uint64_t mk = bit(g.target(0));
        for (auto& t : terms)
            if (has(t.first, c)) t.first ^= mk;
        break;
    }
    case GateKind::CZ: {
        const int a = g.target(0), b = g.target(1);
        for (auto& t : terms)
            if (has(t.first, a) && has(t.first, b)) t.second = -t.second;
        break;
    }
    case GateKind::SWAP: {
        const int a = g.target(0), b = g.target(1);
        const std::uint64_t mk = bit(a) | bit(b);
        for (auto& t : terms)
            if (has(t.first, a) != has(t.first, b)) t.first ^= mk;
        break;
    }
    case GateKind::CSWAP: {
        const int c = g.control(0), a = g.target(0), b = g.target(1);
        const std::uint64_t mk = bit(a) | bit(b);
        for (auto& t : terms)
            if (has(t.first, c) && has(t.first, a) != has(t.first, b)) t.first ^= mk;
        break;
    }
    case GateKind::TOFFOLI: {
        const int c0 = g.control(0), c1 = g.control(1);
        const std::uint64_t mk = bit(g.target(0));
        for (auto& t : terms)
            if (has(t.first, c0) && has(t.first, c1)) t.first ^= mk;
        break;
    }
    default:
        throw SimError("apply_unitary: not a unitary gate");
    }
}

struct Branch {
    StateVector state;
    std::vector<std::int8_t> rec;  // -1 unknown or retired
    double prob = 1.0;
};

bool same_state(StateVector& a, StateVector& b) {
    if (a.support() != b.support()) return false;
    a.canonicalize();
    b.canonicalize();
    if (a.support() != b.support()) return false;
    for (std::size_t i = 0; i < a.support(); ++i) {
        if (a.terms()[i].first != b.terms()[i].first) return false;
        if (std::abs(a.terms()[i].second - b.terms()[i].second) > kMergeTol) return false;
    }
    return true;
}

void merge_branches(std::vector<Branch>& br) {
    if (br.size() < 2) return;
    std::vector<Branch> out;
    out.reserve(br.size());
    for (auto& b : br) {
        bool merged = false;
        for (auto& o : out) {
            if (o.rec != b.rec) continue;
            if (same_state(o.state, b.state)) {
                o.prob += b.prob;
                merged = true;
                break;
            }
        }
        if (!merged) out.push_back(std::move(b));
    }
    br = std::move(out);
}

}  // namespace

StateVector StateVector::basis(int width, std::uint64_t value) {
    StateVector s(width);
    s.terms_.emplace_back(value, Amp(1, 0));
    return s;
}

StateVector StateVector::from_dense(int width, const std::vector<Amp>& amps) {
    StateVector s(width);
    for (std::size_t i = 0; i < amps.size(); ++i)
        if (std::abs(amps[i]) > kDrop) s.terms_.emplace_back(i, amps[i]);
    return s;
}

double StateVector::norm() const {
    double n = 0;
    for (const auto& t : terms_) n += std::norm(t.second);
    return std::sqrt(n);
}

Amp StateVector::amplitude(std::uint64_t b) const {
    Amp a = 0;
    for (const auto& t : terms_)
        if (t.first == b) a += t.second;
    return a;
}

std::vector<Amp> StateVector::to_dense() const {
    if (width_ > 24) throw SimError("to_dense: width too large");
    std::vector<Amp> d(std::size_t{1} << width_);
    for (const auto& t : terms_) d[t.first] += t.second;
    return d;
}

void StateVector::canonicalize() {
    std::sort(terms_.begin(), terms_.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
    std::vector<std::pair<std::uint64_t, Amp>> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
        if (!out.empty() && out.back().first == t.first)
            out.back().second += t.second;
        else
            out.push_back(t);
    }
    std::erase_if(out, [](const auto& t) { return std::abs(t.second) <= kDrop; });
    terms_ = std::move(out);
}

double StateVector::fidelity(const StateVector& other) const {
    std::unordered_map<std::uint64_t, Amp> m;
    for (const auto& t : terms_) m[t.first] += t.second;
    Amp ip = 0;
    for (const auto& t : other.terms_) {
        auto it = m.find(t.first);
        if (it != m.end()) ip += std::conj(it->second) * t.second;
    }
    return std::norm(ip);
}

std::optional<std::uint64_t> StateVector::as_basis() const {
    StateVector c = *this;
    c.canonicalize();
    if (c.terms_.size() != 1) return std::nullopt;
    return c.terms_[0].first;
}

MeasurementPolicy MeasurementPolicy::sampled(std::uint64_t seed) {
    MeasurementPolicy p;
    p.mode = PolicyMode::sampled;
    p.seed = seed;
    return p;
}

MeasurementPolicy MeasurementPolicy::forced_outcomes(std::map<int, int> outcomes) {
    MeasurementPolicy p;
    p.mode = PolicyMode::forced;
    p.forced = std::move(outcomes);
    return p;
}

MeasurementPolicy MeasurementPolicy::all() { return MeasurementPolicy{}; }

std::vector<RunRecord> run(const Circuit& c, std::uint64_t basis_input, const MeasurementPolicy& policy,
                           const SimOptions& opts) {
    return run(c, StateVector::basis(c.width(), basis_input), policy, opts);
}

std::vector<RunRecord> run(const Circuit& c, const StateVector& input, const MeasurementPolicy& policy,
                           const SimOptions& opts) {
    if (c.width() > opts.width_cap || c.width() > 64)
        throw SimError("circuit width " + std::to_string(c.width()) + " exceeds limit " +
                       std::to_string(std::min(opts.width_cap, 64)));
    if (input.width() != c.width()) throw SimError("input width does not match circuit");
    auto diags = validate(c);
    if (!diags.empty()) throw SimError("invalid circuit: " + diags.front());

    const auto& gates = c.gates();
    const int nrec = c.num_records();
    // gate index after which each record is no longer referenced
    // (records never read by a classical gate stay visible in the result)
    std::vector<std::ptrdiff_t> last_use(static_cast<std::size_t>(nrec), -1);
    for (std::size_t i = 0; i < gates.size(); ++i)
        if (gates[i].is_classical()) last_use[static_cast<std::size_t>(gates[i].record)] = static_cast<std::ptrdiff_t>(i);
    std::vector<std::vector<int>> retire_at(gates.size());
    for (int r = 0; r < nrec; ++r)
        if (last_use[static_cast<std::size_t>(r)] >= 0)
            retire_at[static_cast<std::size_t>(last_use[static_cast<std::size_t>(r)])].push_back(r);

    std::mt19937_64 rng(policy.seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    std::vector<Branch> branches(1);
    branches[0].state = input;
    branches[0].rec.assign(static_cast<std::size_t>(nrec), -1);
    {
        const double n0 = input.norm();
        if (std::abs(n0 - 1.0) > opts.norm_tolerance) throw SimError("input state is not normalized");
    }

    for (std::size_t gi = 0; gi < gates.size(); ++gi) {
        const Gate& g = gates[gi];
        if (g.is_measurement()) {
            const int q = g.target(0);
            const auto rid = static_cast<std::size_t>(g.record);
            std::vector<Branch> next;
            next.reserve(branches.size() * 2);
            for (auto& b : branches) {
                if (g.kind == GateKind::MEASURE_X) apply_h(b.state, q);
                const double p1 = prob_one(b.state, q);
                const double p0 = std::max(0.0, b.state.norm() * b.state.norm() - p1);
                std::vector<int> outcomes;
                auto fit = policy.forced.find(g.record);
                if (policy.mode != PolicyMode::sampled && fit != policy.forced.end()) {
                    const int v = fit->second;
                    if ((v ? p1 : p0) <= kBranchEps)
                        throw SimError("forced outcome " + std::to_string(v) + " for record " +
                                       std::to_string(g.record) + " has zero amplitude");
                    outcomes.push_back(v);
                } else if (policy.mode == PolicyMode::sampled) {
                    outcomes.push_back(uni(rng) < p1 ? 1 : 0);
                    if ((outcomes[0] ? p1 : p0) <= kBranchEps) outcomes[0] ^= 1;
                } else {
                    if (p0 > kBranchEps) outcomes.push_back(0);
                    if (p1 > kBranchEps) outcomes.push_back(1);
                }
                for (int v : outcomes) {
                    const double p = v ? p1 : p0;
                    Branch nb;
                    nb.state = project(b.state, q, v);
                    if (g.kind == GateKind::MEASURE_X) apply_h(nb.state, q);
                    nb.rec = b.rec;
                    nb.rec[rid] = static_cast<std::int8_t>(v);
                    nb.prob = policy.mode == PolicyMode::sampled ? b.prob : b.prob * p;
                    next.push_back(std::move(nb));
                }
            }
            branches = std::move(next);
        } else if (g.is_classical()) {
            const auto rid = static_cast<std::size_t>(g.record);
            for (auto& b : branches) {
                if (b.rec[rid] < 0) throw SimError("classical gate reads a retired record");
                if (b.rec[rid] == 0) continue;
                Gate u = g;
                u.kind = g.kind == GateKind::CLASSICAL_CZ ? GateKind::CZ : GateKind::X;
                apply_unitary(b.state, u);
            }
        } else {
            for (auto& b : branches) {
                apply_unitary(b.state, g);
                if (g.kind == GateKind::H) {
                    const double nn = b.state.norm();
                    if (std::abs(nn - 1.0) > opts.norm_tolerance)
                        throw SimError("norm drift " + std::to_string(nn) + " at gate " + std::to_string(gi));
                }
            }
        }
        // without merging, every outcome stays attached to its branch
        if (policy.merge && !retire_at[gi].empty()) {
            for (auto& b : branches)
                for (int r : retire_at[gi]) b.rec[static_cast<std::size_t>(r)] = -1;
            merge_branches(branches);
        }
    }

    std::vector<RunRecord> out;
    out.reserve(branches.size());
    for (auto& b : branches) {
        RunRecord r;
        b.state.canonicalize();
        r.state = std::move(b.state);
        r.probability = b.prob;
        for (int i = 0; i < nrec; ++i)
            if (b.rec[static_cast<std::size_t>(i)] >= 0) r.outcomes[i] = b.rec[static_cast<std::size_t>(i)];
        out.push_back(std::move(r));
    }
    return out;
}

std::uint64_t run_basis(const Circuit& c, std::uint64_t input) {
    if (c.width() > 64) throw SimError("run_basis: width over 64");
    std::uint64_t s = input;
    for (const Gate& g : c.gates()) {
        switch (g.kind) {
        case GateKind::X:
            s ^= bit(g.target(0));
            break;
        case GateKind::CNOT:
            if (has(s, g.control(0))) s ^= bit(g.target(0));
            break;
        case GateKind::SWAP:
            if (has(s, g.target(0)) != has(s, g.target(1))) s ^= bit(g.target(0)) | bit(g.target(1));
            break;
        case GateKind::CSWAP:
            if (has(s, g.control(0)) && has(s, g.target(0)) != has(s, g.target(1)))
                s ^= bit(g.target(0)) | bit(g.target(1));
            break;
        case GateKind::TOFFOLI:
            if (has(s, g.control(0)) && has(s, g.control(1))) s ^= bit(g.target(0));
            break;
        default:
            throw SimError(std::string("run_basis: non-permutation gate ") + kind_name(g.kind));
        }
    }
    return s;
}

}  // namespace qmp
