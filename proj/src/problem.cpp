#include "jetlag/problem.hpp"

#include "jetlag/parser.hpp"

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace jetlag {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_list(const std::string& s, int line) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ProblemError("empty entry in list", line);
        try {
            size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ProblemError("malformed number '" + item + "'", line);
        }
    }
    if (out.empty()) throw ProblemError("empty list", line);
    return out;
}

long parse_long(const std::string& s, int line) {
    try {
        size_t used = 0;
        long v = std::stol(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ProblemError("malformed integer '" + s + "'", line);
    }
}

double parse_double(const std::string& s, int line) {
    try {
        size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ProblemError("malformed number '" + s + "'", line);
    }
}

}  // namespace

ProblemFile parse_problem(std::istream& in, const std::string& name) {
    struct Entry {
        std::string value;
        int line;
    };
    std::map<std::string, Entry> entries;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos) throw ProblemError("expected 'key = value' in " + name, lineno);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ProblemError("missing key", lineno);
        if (value.empty()) throw ProblemError("missing value for '" + key + "'", lineno);
        if (entries.count(key)) throw ProblemError("duplicate key '" + key + "'", lineno);
        entries[key] = {value, lineno};
    }

    auto it = entries.find("n");
    if (it == entries.end()) throw ProblemError("required key 'n' missing in " + name);
    ProblemFile pf;
    long nval = parse_long(it->second.value, it->second.line);
    if (nval < 1) throw ProblemError("n must be >= 1", it->second.line);
    pf.n = static_cast<int>(nval);
    entries.erase(it);

    auto take = [&](const std::string& key) -> std::optional<Entry> {
        auto i = entries.find(key);
        if (i == entries.end()) return std::nullopt;
        Entry e = i->second;
        entries.erase(i);
        return e;
    };

    auto validate_expr = [&](const std::string& src, int line) {
        try {
            (void)parse_expr(src, pf.n);
        } catch (const ParseError& err) {
            throw ProblemError(std::string("bad expression: ") + err.what(), line);
        }
        return src;
    };

    pf.g_src.resize(pf.n);
    bool any_g = false;
    for (int i = 1; i <= pf.n; ++i) {
        if (auto e = take("G" + std::to_string(i))) {
            pf.g_src[i - 1] = validate_expr(e->value, e->line);
            any_g = true;
        }
    }
    if (any_g)
        for (int i = 1; i <= pf.n; ++i)
            if (pf.g_src[i - 1].empty())
                throw ProblemError("incomplete G block: G" + std::to_string(i) + " missing");
    if (!any_g) pf.g_src.clear();

    if (auto e = take("theta0")) {
        pf.theta0_src = validate_expr(e->value, e->line);
        pf.theta_src.resize(pf.n);
        for (int i = 1; i <= pf.n; ++i) {
            auto te = take("theta" + std::to_string(i));
            if (!te) throw ProblemError("incomplete theta block: theta" + std::to_string(i) + " missing");
            pf.theta_src[i - 1] = validate_expr(te->value, te->line);
        }
    }
    if (auto e = take("L")) pf.lagrangian_src = validate_expr(e->value, e->line);

    if (auto e = take("seed")) pf.seed = static_cast<std::uint64_t>(parse_long(e->value, e->line));
    if (auto e = take("probes")) {
        long v = parse_long(e->value, e->line);
        if (v < 1) throw ProblemError("probes must be >= 1", e->line);
        pf.probes = static_cast<int>(v);
    }
    if (auto e = take("tol")) pf.tol = parse_double(e->value, e->line);
    if (auto e = take("t0")) pf.t0 = parse_double(e->value, e->line);
    if (auto e = take("t1")) pf.t1 = parse_double(e->value, e->line);
    if (auto e = take("h")) {
        pf.h = parse_double(e->value, e->line);
        if (*pf.h <= 0) throw ProblemError("h must be positive", e->line);
    }
    if (auto e = take("x0")) {
        pf.x0 = parse_list(e->value, e->line);
        if (static_cast<int>(pf.x0->size()) != pf.n) throw ProblemError("x0 must list n values", e->line);
    }
    if (auto e = take("y0")) {
        pf.y0 = parse_list(e->value, e->line);
        if (static_cast<int>(pf.y0->size()) != pf.n) throw ProblemError("y0 must list n values", e->line);
    }

    if (!entries.empty()) {
        const auto& [key, entry] = *entries.begin();
        throw ProblemError("unknown key '" + key + "'", entry.line);
    }
    return pf;
}

ProblemFile load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ProblemError("cannot open problem file '" + path + "'");
    return parse_problem(in, path);
}

Semispray ProblemFile::semispray() const {
    if (g_src.empty()) throw ProblemError("problem file has no G block");
    std::vector<Expr> g;
    g.reserve(n);
    for (const std::string& src : g_src) g.push_back(parse_expr(src, n));
    return Semispray(n, std::move(g));
}

SemiBasicOneForm ProblemFile::theta() const {
    if (!has_theta()) throw ProblemError("problem file has no theta block");
    SemiBasicOneForm out;
    out.theta0 = parse_expr(*theta0_src, n);
    for (const std::string& src : theta_src) out.theta.push_back(parse_expr(src, n));
    return out;
}

Lagrangian ProblemFile::lagrangian() const {
    if (!has_lagrangian()) throw ProblemError("problem file has no L entry");
    return Lagrangian(n, parse_expr(*lagrangian_src, n));
}

IntegratorConfig ProblemFile::integrator() const {
    if (!has_integrator()) throw ProblemError("problem file has no complete integrator block (t0,t1,h,x0,y0)");
    return IntegratorConfig{*t0, *t1, *h};
}

Point ProblemFile::initial_point() const {
    if (!has_integrator()) throw ProblemError("problem file has no complete integrator block (t0,t1,h,x0,y0)");
    return Point{*t0, *x0, *y0};
}

nlohmann::json verdict_json(const ZeroVerdict& v) {
    nlohmann::json j;
    switch (v.status()) {
        case ZeroVerdict::Status::ProvenZero:
            j["status"] = "proven_zero";
            break;
        case ZeroVerdict::Status::ProbablyZero:
            j["status"] = "probably_zero";
            j["probes"] = v.probes();
            j["max_abs"] = v.max_abs();
            break;
        case ZeroVerdict::Status::NonZero: {
            j["status"] = "non_zero";
            j["value"] = v.witness()->value;
            const Point& p = v.witness()->point;
            j["witness"] = {{"t", p.t}, {"x", p.x}, {"y", p.y}};
            break;
        }
    }
    return j;
}

nlohmann::json condition_json(const ConditionReport& c) {
    nlohmann::json j;
    j["description"] = c.description;
    j["passed"] = c.passed();
    j["symbolic"] = c.symbolic();
    nlohmann::json comps = nlohmann::json::array();
    for (const NamedVerdict& v : c.components) {
        nlohmann::json e = verdict_json(v.verdict);
        e["name"] = v.name;
        comps.push_back(e);
    }
    j["components"] = comps;
    return j;
}

nlohmann::json helmholtz_report_json(const HelmholtzReport& rep) {
    nlohmann::json j;
    j["n"] = rep.n;
    j["conditions"] = {{"dJ", condition_json(rep.dj)},   {"H1", condition_json(rep.h1)},
                       {"H2", condition_json(rep.h2)},   {"H3", condition_json(rep.h3)},
                       {"H4", condition_json(rep.h4)},   {"DS", condition_json(rep.ds)},
                       {"dh", condition_json(rep.dh_exact)}};
    nlohmann::json oracle = nlohmann::json::array();
    for (const NamedVerdict& v : rep.oracle_checks) {
        nlohmann::json e = verdict_json(v.verdict);
        e["name"] = v.name;
        oracle.push_back(e);
    }
    j["oracle_checks"] = oracle;
    j["classification"] = classification_name(rep.classification);
    j["pass"] = rep.passed();
    j["symbolic_pass"] = rep.symbolic_pass;
    if (rep.failure) {
        j["failure"] = verdict_json(rep.failure->verdict);
        j["failure"]["name"] = rep.failure->name;
    }
    if (rep.lagrangian) {
        if (rep.lagrangian->is_symbolic())
            j["lagrangian"] = rep.lagrangian->expr().str();
        else
            j["lagrangian"] = "<numeric quadrature evaluator>";
    }
    if (rep.first_integral) {
        j["first_integral"] =
            rep.first_integral->symbolic ? rep.first_integral->symbolic->str() : "<numeric evaluator>";
        j["first_integral_conserved"] = verdict_json(rep.first_integral->conserved);
    }
    if (rep.dual_symmetry) {
        nlohmann::json d;
        nlohmann::json dx = nlohmann::json::array(), dy = nlohmann::json::array();
        for (const Expr& e : rep.dual_symmetry->omega_dx) dx.push_back(e.str());
        for (const Expr& e : rep.dual_symmetry->omega_dy) dy.push_back(e.str());
        d["omega_dx"] = dx;
        d["omega_dy"] = dy;
        nlohmann::json adx = nlohmann::json::array(), ady = nlohmann::json::array();
        for (const Expr& e : rep.dual_symmetry->adjoint_dx) adx.push_back(e.str());
        for (const Expr& e : rep.dual_symmetry->adjoint_dy) ady.push_back(e.str());
        d["adjoint_dx"] = adx;
        d["adjoint_dy"] = ady;
        d["compatibility"] = condition_json(rep.dual_symmetry->compatibility);
        d["jacobi"] = condition_json(rep.dual_symmetry->jacobi);
        d["lie_invariance"] = condition_json(rep.dual_symmetry->lie_invariance);
        j["dual_symmetry"] = d;
    }
    if (rep.nondegeneracy) {
        j["nondegenerate"] = {{"det_g", verdict_json(rep.nondegeneracy->det_g)},
                              {"rank_2n", rep.nondegeneracy->rank_2n}};
    }
    return j;
}

nlohmann::json identities_json(const std::vector<IdentityResult>& results) {
    nlohmann::json arr = nlohmann::json::array();
    for (const IdentityResult& r : results) {
        nlohmann::json e = verdict_json(r.verdict);
        e["name"] = r.name;
        arr.push_back(e);
    }
    return arr;
}

nlohmann::json probe_stats_json(const ZeroTester& tester) {
    const ProbeStats& st = tester.stats();
    return {{"zero_tests", st.calls},   {"probe_evaluations", st.probe_evals},
            {"resamples", st.resamples}, {"proven_zero", st.proven},
            {"probably_zero", st.probably}, {"non_zero", st.nonzero}};
}

void print_condition(std::ostream& os, const ConditionReport& c) {
    os << "  " << c.id << " (" << c.description << "): ";
    if (c.components.empty()) {
        os << "pass (no components in this dimension)\n";
        return;
    }
    if (c.passed()) {
        os << (c.symbolic() ? "pass [symbolic]" : "pass [probes]") << "\n";
    } else {
        const NamedVerdict* f = c.first_failure();
        os << "FAIL at " << f->name << ": " << f->verdict.str() << "\n";
    }
}

void print_helmholtz_report(std::ostream& os, const HelmholtzReport& rep) {
    bool dj_closed = rep.dj.passed() && rep.h1.passed();
    os << "  route: " << (dj_closed ? "d_J-closed (Poincare-Cartan candidate)"
                                    : "not d_J-closed (conservative candidate)")
       << "\n";
    print_condition(os, rep.h1);
    print_condition(os, rep.h2);
    print_condition(os, rep.h3);
    print_condition(os, rep.h4);
    print_condition(os, rep.ds);
    if (dj_closed) print_condition(os, rep.dh_exact);
    os << "  classification: " << classification_name(rep.classification) << "\n";
    if (rep.lagrangian) {
        os << "  Lagrangian: "
           << (rep.lagrangian->is_symbolic() ? rep.lagrangian->expr().str() : "<numeric quadrature evaluator>")
           << "\n";
    }
    if (rep.first_integral) {
        os << "  first integral: "
           << (rep.first_integral->symbolic ? rep.first_integral->symbolic->str() : "<numeric evaluator>")
           << "  [S(f): " << rep.first_integral->conserved.str() << "]\n";
    }
    if (rep.dual_symmetry) {
        os << "  dual symmetry i_S d theta: delta-x components (";
        for (size_t i = 0; i < rep.dual_symmetry->omega_dx.size(); ++i)
            os << (i ? ", " : "") << rep.dual_symmetry->omega_dx[i].str();
        os << "), delta-y components (";
        for (size_t i = 0; i < rep.dual_symmetry->omega_dy.size(); ++i)
            os << (i ? ", " : "") << rep.dual_symmetry->omega_dy[i].str();
        os << ")\n";
    }
    if (rep.nondegeneracy) {
        os << "  nondegeneracy: det g " << rep.nondegeneracy->det_g.str()
           << (rep.nondegeneracy->rank_2n ? " (rank 2n)" : " (degenerate)") << "\n";
    }
    if (rep.failure) os << "  witness: " << rep.failure->name << ": " << rep.failure->verdict.str() << "\n";
}

}  // namespace jetlag
