#include "qmp/circuit.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace qmp {

namespace {

constexpr std::array<const char*, 13> kKindNames = {
    "H", "X", "Z", "S", "CNOT", "CZ", "SWAP", "CSWAP", "TOFFOLI",
    "MEASURE_X", "MEASURE_Z", "CLASSICAL_CZ", "CLASSICAL_X"};

constexpr std::array<const char*, 5> kRoleNames = {
    "input", "output", "ancilla_clean", "control", "junk"};

// Expected (controls, targets) per kind.
std::pair<int, int> arity(GateKind k) {
    switch (k) {
    case GateKind::H: case GateKind::X: case GateKind::Z: case GateKind::S:
    case GateKind::MEASURE_X: case GateKind::MEASURE_Z: case GateKind::CLASSICAL_X:
        return {0, 1};
    case GateKind::CNOT: return {1, 1};
    case GateKind::CZ: case GateKind::SWAP: case GateKind::CLASSICAL_CZ: return {0, 2};
    case GateKind::CSWAP: return {1, 2};
    case GateKind::TOFFOLI: return {2, 1};
    }
    return {0, 0};
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

const char* kind_name(GateKind k) { return kKindNames[static_cast<std::size_t>(k)]; }

std::optional<GateKind> kind_from_name(const std::string& s) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i)
        if (s == kKindNames[i]) return static_cast<GateKind>(i);
    return std::nullopt;
}

const char* role_name(RegRole r) { return kRoleNames[static_cast<std::size_t>(r)]; }

std::optional<RegRole> role_from_name(const std::string& s) {
    for (std::size_t i = 0; i < kRoleNames.size(); ++i)
        if (s == kRoleNames[i]) return static_cast<RegRole>(i);
    return std::nullopt;
}

std::vector<int> Register::qubits() const {
    std::vector<int> q(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) q[static_cast<std::size_t>(i)] = start + i;
    return q;
}

const Register& Circuit::add_register(const std::string& name, int size, RegRole role) {
    if (size < 0) throw StructuralError("negative register size for " + name);
    if (find_register(name)) throw StructuralError("duplicate register " + name);
    registers_.push_back(Register{name, width_, size, role});
    width_ += size;
    return registers_.back();
}

const Register* Circuit::find_register(const std::string& name) const {
    for (const auto& r : registers_)
        if (r.name == name) return &r;
    return nullptr;
}

const Register& Circuit::reg(const std::string& name) const {
    const Register* r = find_register(name);
    if (!r) throw StructuralError("no register named " + name);
    return *r;
}

void Circuit::one(GateKind k, int q) {
    Gate g;
    g.kind = k;
    g.ntargets = 1;
    g.targets[0] = q;
    append(g);
}

void Circuit::cnot(int c, int t) {
    Gate g;
    g.kind = GateKind::CNOT;
    g.ncontrols = 1;
    g.ntargets = 1;
    g.controls[0] = c;
    g.targets[0] = t;
    append(g);
}

void Circuit::cz(int a, int b) {
    Gate g;
    g.kind = GateKind::CZ;
    g.ntargets = 2;
    g.targets = {a, b};
    append(g);
}

void Circuit::swap(int a, int b) {
    Gate g;
    g.kind = GateKind::SWAP;
    g.ntargets = 2;
    g.targets = {a, b};
    append(g);
}

void Circuit::cswap(int c, int a, int b) {
    Gate g;
    g.kind = GateKind::CSWAP;
    g.ncontrols = 1;
    g.ntargets = 2;
    g.controls[0] = c;
    g.targets = {a, b};
    append(g);
}

void Circuit::toffoli(int c0, int c1, int t) {
    Gate g;
    g.kind = GateKind::TOFFOLI;
    g.ncontrols = 2;
    g.ntargets = 1;
    g.controls = {c0, c1};
    g.targets[0] = t;
    append(g);
}

int Circuit::measure_z(int q) {
    Gate g;
    g.kind = GateKind::MEASURE_Z;
    g.ntargets = 1;
    g.targets[0] = q;
    g.record = records_++;
    gates_.push_back(g);
    gates_.back().tag = current_tag;
    return g.record;
}

int Circuit::measure_x(int q) {
    Gate g;
    g.kind = GateKind::MEASURE_X;
    g.ntargets = 1;
    g.targets[0] = q;
    g.record = records_++;
    gates_.push_back(g);
    gates_.back().tag = current_tag;
    return g.record;
}

void Circuit::classical_cz(int rec, int a, int b) {
    Gate g;
    g.kind = GateKind::CLASSICAL_CZ;
    g.ntargets = 2;
    g.targets = {a, b};
    g.record = rec;
    append(g);
}

void Circuit::classical_x(int rec, int q) {
    Gate g;
    g.kind = GateKind::CLASSICAL_X;
    g.ntargets = 1;
    g.targets[0] = q;
    g.record = rec;
    append(g);
}

void Circuit::data_x(int q) {
    Gate g;
    g.kind = GateKind::X;
    g.ntargets = 1;
    g.targets[0] = q;
    g.data = true;
    append(g);
}

void Circuit::data_cnot(int c, int t) {
    Gate g;
    g.kind = GateKind::CNOT;
    g.ncontrols = 1;
    g.ntargets = 1;
    g.controls[0] = c;
    g.targets[0] = t;
    g.data = true;
    append(g);
}

void Circuit::append(const Gate& g) {
    gates_.push_back(g);
    gates_.back().tag = current_tag;
    if (g.is_measurement()) {
        // keep records dense when gates are copied in from elsewhere
        gates_.back().record = records_++;
    }
}

void Circuit::uncompute_and(int t, int a, int b) {
    h(t);
    int r = measure_z(t);
    classical_cz(r, a, b);
    classical_x(r, t);
}

std::vector<std::string> validate(const Circuit& c) {
    std::vector<std::string> diags;
    const int w = c.width();

    std::vector<int> owner(static_cast<std::size_t>(std::max(w, 0)), -1);
    int covered = 0;
    for (std::size_t ri = 0; ri < c.registers().size(); ++ri) {
        const Register& r = c.registers()[ri];
        if (r.start < 0 || r.start + r.size > w) {
            diags.push_back("register " + r.name + " out of range");
            continue;
        }
        for (int q = r.start; q < r.start + r.size; ++q) {
            auto& o = owner[static_cast<std::size_t>(q)];
            if (o >= 0) diags.push_back("register " + r.name + " overlaps register " +
                                        c.registers()[static_cast<std::size_t>(o)].name +
                                        " at qubit " + std::to_string(q));
            else ++covered;
            o = static_cast<int>(ri);
        }
    }
    if (covered != w) diags.push_back("registers cover " + std::to_string(covered) + " of " +
                                      std::to_string(w) + " qubits");

    std::vector<char> seen(static_cast<std::size_t>(c.num_records()), 0);
    const auto& gates = c.gates();
    for (std::size_t i = 0; i < gates.size(); ++i) {
        const Gate& g = gates[i];
        const std::string where = "gate " + std::to_string(i) + " (" + kind_name(g.kind) + ")";
        auto [nc, nt] = arity(g.kind);
        if (g.ncontrols != nc || g.ntargets != nt) {
            diags.push_back(where + ": wrong operand count");
            continue;
        }
        std::vector<int> qs;
        for (int k = 0; k < g.ncontrols; ++k) qs.push_back(g.control(k));
        for (int k = 0; k < g.ntargets; ++k) qs.push_back(g.target(k));
        bool bad = false;
        for (int q : qs) {
            if (q < 0 || q >= w) {
                diags.push_back(where + ": qubit " + std::to_string(q) + " outside width " +
                                std::to_string(w));
                bad = true;
            }
        }
        if (bad) continue;
        auto sorted = qs;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            diags.push_back(where + ": repeated qubit operand");
        if (g.is_measurement()) {
            if (g.record < 0 || g.record >= c.num_records())
                diags.push_back(where + ": bad record id " + std::to_string(g.record));
            else
                seen[static_cast<std::size_t>(g.record)] = 1;
        } else if (g.is_classical()) {
            if (g.record < 0 || g.record >= c.num_records() ||
                !seen[static_cast<std::size_t>(g.record)])
                diags.push_back(where + ": unknown record id " + std::to_string(g.record));
        }
    }
    return diags;
}

Circuit concat(const Circuit& a, const Circuit& b,
               const std::vector<std::pair<std::string, std::string>>& mapping) {
    Circuit out;
    for (const auto& r : a.registers()) out.add_register(r.name, r.size, r.role);
    std::vector<int> remap(static_cast<std::size_t>(b.width()), -1);
    for (const auto& r : b.registers()) {
        const Register* target = nullptr;
        for (const auto& [from, to] : mapping) {
            if (from == r.name) {
                target = out.find_register(to);
                if (!target) throw StructuralError("concat: no register " + to + " in first circuit");
                if (target->size != r.size)
                    throw StructuralError("concat: size mismatch mapping " + from + " to " + to);
            }
        }
        if (!target) {
            std::string name = r.name;
            while (out.find_register(name)) name += "'";
            target = &out.add_register(name, r.size, r.role);
        }
        for (int i = 0; i < r.size; ++i) remap[static_cast<std::size_t>(r.start + i)] = target->start + i;
    }
    for (std::size_t q = 0; q < remap.size(); ++q)
        if (remap[q] < 0) throw StructuralError("concat: second circuit qubit outside registers");

    for (const Gate& g : a.gates()) {
        out.current_tag = g.tag;
        out.append(g);
    }
    const int offset = a.num_records();
    for (Gate g : b.gates()) {
        for (int k = 0; k < g.ncontrols; ++k) g.controls[static_cast<std::size_t>(k)] = remap[static_cast<std::size_t>(g.control(k))];
        for (int k = 0; k < g.ntargets; ++k) g.targets[static_cast<std::size_t>(k)] = remap[static_cast<std::size_t>(g.target(k))];
        if (g.is_classical()) g.record += offset;
        out.current_tag = g.tag;
        out.append(g);
    }
    out.current_tag = Tag::control;
    out.add_data_slots(a.data_slots() + b.data_slots());
    out.metadata() = a.metadata();
    for (const auto& m : b.metadata()) out.metadata().push_back(m);
    return out;
}

void write_circuit(std::ostream& os, const Circuit& c) {
    os << "# qmp circuit\n";
    os << "width " << c.width() << "\n";
    for (const auto& r : c.registers())
        os << "register " << r.name << " " << r.start << " " << r.size << " " << role_name(r.role) << "\n";
    os << "data_slots " << c.data_slots() << "\n";
    for (const auto& m : c.metadata()) os << "meta " << m << "\n";
    for (const Gate& g : c.gates()) {
        os << kind_name(g.kind) << " ";
        for (int k = 0; k < g.ncontrols; ++k) os << (k ? "," : "") << g.control(k);
        os << ";";
        for (int k = 0; k < g.ntargets; ++k) os << (k ? "," : "") << g.target(k);
        if (g.is_classical()) os << ";cond=" << g.record;
        if (g.is_measurement()) os << ";rec=" << g.record;
        if (g.tag == Tag::lookup) os << ";lookup";
        if (g.data) os << ";data";
        os << "\n";
    }
}

Circuit read_circuit(std::istream& is) {
    Circuit c;
    std::string line;
    int lineno = 0;
    int width = -1;
    struct PendingReg { std::string name; int start, size; RegRole role; };
    std::vector<PendingReg> regs;
    bool header_done = false;
    auto finish_header = [&] {
        if (header_done) return;
        header_done = true;
        std::sort(regs.begin(), regs.end(), [](auto& l, auto& r) { return l.start < r.start; });
        for (const auto& r : regs) {
            if (r.start != c.width()) throw StructuralError("registers must be listed contiguously");
            c.add_register(r.name, r.size, r.role);
        }
        if (width >= 0 && width != c.width()) throw StructuralError("width does not match registers");
    };
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto fail = [&](const std::string& why) {
            throw StructuralError("line " + std::to_string(lineno) + ": " + why);
        };
        std::istringstream ls(line);
        std::string head;
        ls >> head;
        if (head == "width") {
            if (!(ls >> width)) fail("bad width");
            continue;
        }
        if (head == "register") {
            PendingReg r;
            std::string role;
            if (!(ls >> r.name >> r.start >> r.size >> role)) fail("bad register line");
            auto rr = role_from_name(role);
            if (!rr) fail("unknown role " + role);
            r.role = *rr;
            regs.push_back(r);
            continue;
        }
        if (head == "data_slots") {
            std::int64_t s = 0;
            if (!(ls >> s)) fail("bad data_slots");
            c.add_data_slots(s);
            continue;
        }
        if (head == "meta") {
            std::string rest;
            std::getline(ls, rest);
            if (!rest.empty() && rest[0] == ' ') rest.erase(0, 1);
            c.metadata().push_back(rest);
            continue;
        }
        finish_header();
        auto kind = kind_from_name(head);
        if (!kind) fail("unknown gate kind " + head);
        std::string body;
        std::getline(ls, body);
        if (!body.empty() && body[0] == ' ') body.erase(0, 1);
        auto fields = split(body, ';');
        if (fields.size() < 2) fail("expected controls;targets");
        Gate g;
        g.kind = *kind;
        auto parse_list = [&](const std::string& f, std::array<std::int32_t, 2>& dst) -> std::uint8_t {
            if (f.empty()) return 0;
            auto items = split(f, ',');
            if (items.size() > 2) fail("too many operands");
            for (std::size_t i = 0; i < items.size(); ++i) {
                try {
                    dst[i] = std::stoi(items[i]);
                } catch (const std::exception&) {
                    fail("bad qubit id '" + items[i] + "'");
                }
            }
            return static_cast<std::uint8_t>(items.size());
        };
        g.ncontrols = parse_list(fields[0], g.controls);
        g.ntargets = parse_list(fields[1], g.targets);
        Tag tag = Tag::control;
        for (std::size_t i = 2; i < fields.size(); ++i) {
            const auto& f = fields[i];
            if (f.rfind("cond=", 0) == 0 || f.rfind("rec=", 0) == 0) {
                try {
                    g.record = std::stoi(f.substr(f.find('=') + 1));
                } catch (const std::exception&) {
                    fail("bad record id");
                }
            } else if (f == "lookup") {
                tag = Tag::lookup;
            } else if (f == "data") {
                g.data = true;
            } else {
                fail("unknown field " + f);
            }
        }
        c.current_tag = tag;
        c.append(g);
    }
    finish_header();
    c.current_tag = Tag::control;
    return c;
}

}  // namespace qmp
