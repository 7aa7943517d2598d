// jetlag: decides whether a time dependent second-order system is the
// Euler-Lagrange flow of some Lagrangian by checking the Helmholtz conditions
// on candidate semi-basic 1-forms, and extracts the Lagrangian, first
// integral and dual symmetry when they exist.

#include "CLI11.hpp"

#include "jetlag/geodesic.hpp"
#include "jetlag/identities.hpp"
#include "jetlag/parser.hpp"
#include "jetlag/problem.hpp"

#include <fstream>
#include <iostream>
#include <optional>

namespace {

constexpr const char* kVersion = "0.1.0";

struct GlobalOpts {
    std::uint64_t seed = 1;
    bool seed_set = false;
    int probes = 32;
    bool probes_set = false;
    double tol = 1e-9;
    bool tol_set = false;
    std::string json_path;
    bool numeric_only = false;
};

jetlag::ZeroTester make_tester(const GlobalOpts& opts, const jetlag::ProblemFile& pf) {
    std::uint64_t seed = opts.seed_set ? opts.seed : pf.seed.value_or(1);
    int probes = opts.probes_set ? opts.probes : pf.probes.value_or(32);
    double tol = opts.tol_set ? opts.tol : pf.tol.value_or(1e-9);
    jetlag::ZeroTester tester(pf.n, probes, tol, seed);
    tester.set_numeric_only(opts.numeric_only);
    return tester;
}

nlohmann::json base_document(const char* command, const GlobalOpts& opts, const jetlag::ProblemFile& pf,
                             const jetlag::ZeroTester& tester) {
    nlohmann::json j;
    j["tool"] = "jetlag";
    j["version"] = kVersion;
    j["command"] = command;
    j["settings"] = {{"seed", tester.seed()},
                     {"probes", tester.probes()},
                     {"tol", tester.tol()},
                     {"numeric_only", opts.numeric_only}};
    nlohmann::json prob;
    prob["n"] = pf.n;
    if (!pf.g_src.empty()) prob["G"] = pf.g_src;
    if (pf.theta0_src) {
        prob["theta0"] = *pf.theta0_src;
        prob["theta"] = pf.theta_src;
    }
    if (pf.lagrangian_src) prob["L"] = *pf.lagrangian_src;
    j["problem"] = prob;
    return j;
}

void emit(const GlobalOpts& opts, const nlohmann::json& doc) {
    if (opts.json_path.empty()) return;
    std::ofstream out(opts.json_path);
    if (!out) throw jetlag::ProblemError("cannot write JSON report to '" + opts.json_path + "'");
    out << doc.dump(2) << "\n";
}

int cmd_check(const std::string& path, const GlobalOpts& opts) {
    jetlag::ProblemFile pf = jetlag::load_problem(path);
    if (!pf.has_theta()) throw jetlag::ProblemError("'check' needs a theta block in " + path);
    jetlag::Semispray s = pf.semispray();
    jetlag::SemiBasicOneForm theta = pf.theta();
    jetlag::ZeroTester tester = make_tester(opts, pf);

    jetlag::HelmholtzReport rep = jetlag::check(s, theta, tester);
    std::cout << "Helmholtz check (n=" << pf.n << ", probes=" << tester.probes() << ", tol=" << tester.tol()
              << ", seed=" << tester.seed() << ")\n";
    jetlag::print_helmholtz_report(std::cout, rep);

    nlohmann::json doc = base_document("check", opts, pf, tester);
    doc["report"] = jetlag::helmholtz_report_json(rep);
    doc["probe_stats"] = jetlag::probe_stats_json(tester);
    doc["pass"] = rep.passed();
    emit(opts, doc);
    return rep.passed() ? 0 : 1;
}

int cmd_from_lagrangian(const std::string& path, const GlobalOpts& opts) {
    jetlag::ProblemFile pf = jetlag::load_problem(path);
    if (!pf.has_lagrangian()) throw jetlag::ProblemError("'from-lagrangian' needs an L entry in " + path);
    jetlag::Lagrangian lag = pf.lagrangian();
    jetlag::ZeroTester tester = make_tester(opts, pf);
    nlohmann::json doc = base_document("from-lagrangian", opts, pf, tester);

    std::optional<jetlag::Semispray> derived;
    try {
        derived.emplace(jetlag::euler_lagrange_semispray(lag, tester));
    } catch (const jetlag::SingularMetric& err) {
        std::cout << "singular Lagrangian: " << err.what() << "\n";
        doc["pass"] = false;
        doc["error"] = err.what();
        emit(opts, doc);
        return 1;
    }
    const jetlag::Semispray& s = *derived;

    std::cout << "derived semispray coefficients:\n";
    for (int i = 1; i <= pf.n; ++i) std::cout << "  G" << i << " = " << s.G(i).str() << "\n";
    jetlag::SemiBasicOneForm theta = jetlag::poincare_cartan(lag, s);
    std::cout << "Poincare-Cartan form:\n  theta0 = " << theta.theta0.str() << "\n";
    for (int i = 1; i <= pf.n; ++i) std::cout << "  theta" << i << " = " << theta.theta[i - 1].str() << "\n";

    jetlag::HelmholtzReport rep = jetlag::check(s, theta, tester);
    jetlag::print_helmholtz_report(std::cout, rep);

    nlohmann::json gs = nlohmann::json::array();
    for (int i = 1; i <= pf.n; ++i) gs.push_back(s.G(i).str());
    doc["derived_G"] = gs;
    nlohmann::json th = nlohmann::json::array();
    for (const jetlag::Expr& e : theta.theta) th.push_back(e.str());
    doc["poincare_cartan"] = {{"theta0", theta.theta0.str()}, {"theta", th}};
    doc["report"] = jetlag::helmholtz_report_json(rep);
    doc["probe_stats"] = jetlag::probe_stats_json(tester);
    doc["pass"] = rep.passed();
    emit(opts, doc);
    return rep.passed() ? 0 : 1;
}

int cmd_geodesics(const std::string& path, const std::string& out_path, const GlobalOpts& opts) {
    jetlag::ProblemFile pf = jetlag::load_problem(path);
    if (!pf.has_integrator())
        throw jetlag::ProblemError("'geodesics' needs the integrator block (t0,t1,h,x0,y0) in " + path);
    jetlag::Semispray s = pf.semispray();
    jetlag::ZeroTester tester = make_tester(opts, pf);
    nlohmann::json doc = base_document("geodesics", opts, pf, tester);

    // domain errors exactly at t0 are an input problem
    try {
        jetlag::Point p0 = pf.initial_point();
        for (int i = 1; i <= pf.n; ++i) (void)jetlag::eval(s.G(i), p0);
    } catch (const jetlag::EvalError& err) {
        throw jetlag::ProblemError(std::string("coefficients not evaluable at the initial point: ") +
                                   err.what());
    }

    std::optional<jetlag::Trajectory> traj;
    try {
        traj.emplace(jetlag::integrate(s, pf.initial_point(), pf.integrator()));
    } catch (const jetlag::IntegrationError& err) {
        std::cout << "integration failed: " << err.what() << "\n";
        doc["pass"] = false;
        doc["error"] = err.what();
        doc["last_good_t"] = err.last_good_t();
        emit(opts, doc);
        return 1;
    }

    std::vector<std::string> names;
    std::vector<std::function<double(const jetlag::Point&)>> cols;
    auto residual_column = [&](const jetlag::Expr& L) {
        std::vector<jetlag::Expr> residuals;
        for (int i = 1; i <= pf.n; ++i)
            residuals.push_back(jetlag::sub(s.apply(jetlag::diff_y(L, i)), jetlag::diff_x(L, i)));
        names.push_back("el_residual");
        cols.push_back([residuals](const jetlag::Point& p) {
            double worst = 0.0;
            for (const jetlag::Expr& r : residuals) worst = std::max(worst, std::abs(jetlag::eval(r, p)));
            return worst;
        });
    };
    if (pf.has_theta()) {
        jetlag::SemiBasicOneForm theta = pf.theta();
        jetlag::HelmholtzReport rep = jetlag::check(s, theta, tester);
        if (rep.passed() && rep.first_integral) {
            names.push_back("first_integral");
            cols.push_back(rep.first_integral->value);
        }
        if (rep.passed() && rep.lagrangian && rep.lagrangian->is_symbolic())
            residual_column(rep.lagrangian->expr());
    } else if (pf.has_lagrangian()) {
        residual_column(pf.lagrangian().L);
    }

    std::ofstream out(out_path);
    if (!out) throw jetlag::ProblemError("cannot write CSV to '" + out_path + "'");
    jetlag::write_csv(out, *traj, names, cols);
    const jetlag::Point& last = traj->samples.back();
    std::cout << "wrote " << traj->samples.size() << " samples to " << out_path << "; final state "
              << last.str() << "\n";

    doc["samples"] = traj->samples.size();
    doc["final"] = {{"t", last.t}, {"x", last.x}, {"y", last.y}};
    doc["csv"] = out_path;
    doc["pass"] = true;
    emit(opts, doc);
    return 0;
}

int cmd_identities(const std::string& path, const GlobalOpts& opts) {
    jetlag::ProblemFile pf = jetlag::load_problem(path);
    jetlag::Semispray s = pf.semispray();
    jetlag::ZeroTester tester = make_tester(opts, pf);

    std::vector<jetlag::IdentityResult> results = jetlag::run_identity_suite(s, tester, tester.seed());
    bool pass = jetlag::all_passed(results);
    for (const jetlag::IdentityResult& r : results)
        std::cout << "  " << (r.verdict.is_zero() ? "pass" : "FAIL") << "  " << r.name << "  ["
                  << r.verdict.str() << "]\n";
    std::cout << (pass ? "all identities hold" : "identity failures found") << "\n";

    nlohmann::json doc = base_document("identities", opts, pf, tester);
    doc["identities"] = jetlag::identities_json(results);
    doc["probe_stats"] = jetlag::probe_stats_json(tester);
    doc["pass"] = pass;
    emit(opts, doc);
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Helmholtz-condition toolkit for time dependent second-order systems"};
    app.set_version_flag("--version", kVersion);
    GlobalOpts opts;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option_function<std::uint64_t>(
               "--seed", [&](std::uint64_t v) { opts.seed = v; opts.seed_set = true; },
               "random seed for probe points");
        cmd->add_option_function<int>(
               "--probes", [&](int v) { opts.probes = v; opts.probes_set = true; },
               "probe count per zero test");
        cmd->add_option_function<double>(
               "--tol", [&](double v) { opts.tol = v; opts.tol_set = true; },
               "zero-test tolerance");
        cmd->add_option("--json", opts.json_path, "write a JSON report to this path");
        cmd->add_flag("--numeric-only", opts.numeric_only,
                      "skip symbolic inversion and report probe-based verdicts only");
    };

    std::string problem_path, out_path;
    CLI::App* check = app.add_subcommand("check", "test a semi-basic 1-form against the Helmholtz conditions");
    check->add_option("problem", problem_path, "problem file")->required();
    add_common(check);

    CLI::App* froml = app.add_subcommand(
        "from-lagrangian",
        "derive the semispray of a regular Lagrangian and self-check its Poincare-Cartan form");
    froml->add_option("problem", problem_path, "problem file")->required();
    add_common(froml);

    CLI::App* geod = app.add_subcommand("geodesics", "integrate the system and export a CSV trajectory");
    geod->add_option("problem", problem_path, "problem file")->required();
    geod->add_option("output", out_path, "CSV output path")->required();
    add_common(geod);

    CLI::App* ident = app.add_subcommand("identities", "verify the structural identities of the geometry");
    ident->add_option("problem", problem_path, "problem file")->required();
    add_common(ident);

    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (check->parsed()) return cmd_check(problem_path, opts);
        if (froml->parsed()) return cmd_from_lagrangian(problem_path, opts);
        if (geod->parsed()) return cmd_geodesics(problem_path, out_path, opts);
        if (ident->parsed()) return cmd_identities(problem_path, opts);
    } catch (const jetlag::ProblemError& err) {
        std::cerr << "input error: " << err.what() << "\n";
        return 2;
    } catch (const jetlag::ParseError& err) {
        std::cerr << "input error: " << err.what() << "\n";
        return 2;
    } catch (const jetlag::ProbeExhausted& err) {
        std::cerr << "input error: " << err.what() << "\n";
        return 2;
    } catch (const jetlag::HomotopyDomainError& err) {
        std::cerr << "input error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    return 2;
}
