#include "doctest.h"

#include "jetlag/parser.hpp"
#include "jetlag/problem.hpp"

#include <sstream>

using namespace jetlag;

namespace {

ProblemFile parse_str(const std::string& text) {
    std::istringstream in(text);
    return parse_problem(in, "<test>");
}

}  // namespace

TEST_CASE("problem file parsing") {
    ProblemFile pf = parse_str(
        "# damped oscillator\n"
        "n = 1\n"
        "G1 = y1 + x1/2\n"
        "theta0 = exp(2*t)*(y1^2 - x1^2)/2\n"
        "theta1 = exp(2*t)*y1\n"
        "seed = 7\n"
        "probes = 16\n"
        "tol = 1e-8\n"
        "t0 = 0\n"
        "t1 = 2.5\n"
        "h = 0.001\n"
        "x0 = 1\n"
        "y0 = -1\n");
    CHECK(pf.n == 1);
    CHECK(pf.has_theta());
    CHECK(!pf.has_lagrangian());
    CHECK(pf.has_integrator());
    CHECK(*pf.seed == 7);
    CHECK(*pf.probes == 16);
    CHECK(pf.semispray().G(1) == parse_expr("y1 + x1/2", 1));
    CHECK(pf.theta().theta0 == parse_expr("exp(2*t)*(y1^2 - x1^2)/2", 1));
    CHECK(pf.integrator().t1 == doctest::Approx(2.5));
    CHECK(pf.initial_point().x[0] == doctest::Approx(1.0));
}

TEST_CASE("problem file validation errors") {
    CHECK_THROWS_AS(parse_str("G1 = y1\n"), ProblemError);               // n missing
    CHECK_THROWS_AS(parse_str("n = 0\nG1 = 0\n"), ProblemError);         // n < 1
    CHECK_THROWS_AS(parse_str("n = one\n"), ProblemError);               // bad integer
    CHECK_THROWS_AS(parse_str("n = 2\nG1 = 0\n"), ProblemError);         // G2 missing
    CHECK_THROWS_AS(parse_str("n = 1\ntheta0 = y1\n"), ProblemError);    // theta1 missing
    CHECK_THROWS_AS(parse_str("n = 1\nG1 = y3\n"), ProblemError);        // index out of range
    CHECK_THROWS_AS(parse_str("n = 1\nbogus = 1\n"), ProblemError);      // unknown key
    CHECK_THROWS_AS(parse_str("n = 1\nn = 2\n"), ProblemError);          // duplicate
    CHECK_THROWS_AS(parse_str("n = 1\nG1 = y1\nx0 = 1, 2\n"), ProblemError);  // wrong arity
    CHECK_THROWS_AS(parse_str("n = 1\njust a line\n"), ProblemError);    // no '='

    try {
        parse_str("n = 1\nG1 = y1 +\n");
        CHECK(false);
    } catch (const ProblemError& err) {
        CHECK(err.line() == 2);
    }

    ProblemFile no_theta = parse_str("n = 1\nG1 = 0\n");
    CHECK_THROWS_AS(no_theta.theta(), ProblemError);
    CHECK_THROWS_AS(no_theta.lagrangian(), ProblemError);
    CHECK_THROWS_AS(no_theta.integrator(), ProblemError);
}

TEST_CASE("JSON reports are deterministic for a fixed seed") {
    ProblemFile pf = parse_str(
        "n = 1\n"
        "G1 = 0\n"
        "theta0 = y1^2/2 + y1\n"
        "theta1 = y1\n");
    auto run = [&]() {
        ZeroTester tester(pf.n, 32, 1e-9, 99);
        HelmholtzReport rep = check(pf.semispray(), pf.theta(), tester);
        nlohmann::json doc;
        doc["report"] = helmholtz_report_json(rep);
        doc["stats"] = probe_stats_json(tester);
        return doc.dump(2);
    };
    std::string first = run();
    std::string second = run();
    CHECK(first == second);
    CHECK(first.find("conservative-with-symmetry") != std::string::npos);
}

TEST_CASE("verdict JSON carries witnesses") {
    ZeroTester tester(1, 8, 1e-9, 3);
    ZeroVerdict v = tester.test(parse_expr("y1 - 1", 1));
    nlohmann::json j = verdict_json(v);
    CHECK(j["status"] == "non_zero");
    CHECK(j.contains("witness"));
    CHECK(j["witness"]["y"].size() == 1);
}
