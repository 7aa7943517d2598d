#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "jetlag/expr.hpp"
#include "jetlag/parser.hpp"
#include "jetlag/zero.hpp"

#include <cmath>
#include <random>

using namespace jetlag;

namespace {

Expr P(const std::string& s, int n = 2) { return parse_expr(s, n); }

// Deterministic random polynomial of total degree <= 2 over (t, x, y).
Expr random_poly(std::mt19937_64& rng, int n, int max_terms = 5) {
    std::uniform_int_distribution<int> coeff(-9, 9);
    std::uniform_int_distribution<int> den(1, 3);
    std::uniform_int_distribution<int> var(0, 2 * n);
    std::uniform_int_distribution<int> deg(0, 2);
    std::vector<Expr> terms;
    for (int k = 0; k < max_terms; ++k) {
        Expr m = Expr::constant(Rational(coeff(rng), den(rng)));
        int d = deg(rng);
        for (int j = 0; j < d; ++j) {
            int v = var(rng);
            Expr e = v == 0 ? Expr::t() : (v <= n ? Expr::x(v) : Expr::y(v - n));
            m = mul(m, e);
        }
        terms.push_back(m);
    }
    return add(terms);
}

Point mid_point(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Point p;
    p.t = u(rng);
    p.x.resize(n);
    p.y.resize(n);
    for (int i = 0; i < n; ++i) p.x[i] = u(rng);
    for (int i = 0; i < n; ++i) p.y[i] = u(rng);
    return p;
}

double central_diff(const Expr& e, Point p, VarKind k, int idx) {
    const double h = 1e-5;
    auto shift = [&](double d) {
        Point q = p;
        if (k == VarKind::T)
            q.t += d;
        else if (k == VarKind::X)
            q.x[idx - 1] += d;
        else
            q.y[idx - 1] += d;
        return eval(e, q);
    };
    return (shift(h) - shift(-h)) / (2 * h);
}

}  // namespace

TEST_CASE("parsing the documented grammar") {
    CHECK(P("y1^2/2") == P("1/2 * y1 * y1"));
    CHECK(P("exp(2*t)*(y1^2 - x1^2)/2") == sub(mul({P("1/2"), exp(P("2*t")), P("y1^2")}),
                                               mul({P("1/2"), exp(P("2*t")), P("x1^2")})));
    CHECK(P("0.5") == Expr::constant(Rational(1, 2)));
    CHECK(P("0.125*8") == Expr::constant(Rational(1)));
    CHECK(P("-x1^2") == neg(P("x1^2")));
    CHECK(P("2^-1") == Expr::constant(Rational(1, 2)));
    CHECK(P("sqrt(x1)") == pow(Expr::x(1), Rational(1, 2)));

    CHECK_THROWS_AS(P("y3", 2), ParseError);
    CHECK_THROWS_AS(P("foo(t)"), ParseError);
    CHECK_THROWS_AS(P("1 +"), ParseError);
    CHECK_THROWS_AS(P("x1^t"), ParseError);
    CHECK_THROWS_AS(P("(x1"), ParseError);
    CHECK_THROWS_AS(P("1/0"), ParseError);

    try {
        P("x1 + @");
    } catch (const ParseError& err) {
        CHECK(err.offset() == 5);
    }
}

TEST_CASE("canonical form folds and collects") {
    CHECK(sub(Expr::y(1), Expr::y(1)).is_zero());
    CHECK(P("x1*(x1+y1) - x1^2 - x1*y1").is_zero());
    CHECK(P("(x1+y1)^2 - x1^2 - 2*x1*y1 - y1^2").is_zero());
    CHECK(P("(x1+y1)^(-3)*(x1+y1)^(-1) - (x1+y1)^(-4)").is_zero());
    CHECK(P("(2*x1+2*y1)^(-1) - 1/2*(x1+y1)^(-1)").is_zero());
    CHECK(P("sqrt(x1)*sqrt(x1) - x1").is_zero());
    CHECK(P("exp(t)*exp(t)^(-1)").is_one());
    CHECK(P("4^(1/2)") == Expr::integer(2));
    CHECK(P("(x1*y1)^2") == P("x1^2*y1^2"));
    CHECK(P("x1^0").is_one());
    CHECK(P("sin(0)").is_zero());
    CHECK(P("cos(0)").is_one());
    CHECK(P("ln(1)").is_zero());
}

TEST_CASE("print/parse round trip on random expressions") {
    std::mt19937_64 rng(7);
    for (int it = 0; it < 200; ++it) {
        int n = 1 + static_cast<int>(rng() % 3);
        Expr e = random_poly(rng, n);
        if (it % 3 == 0) e = mul(e, exp(Expr::t()));
        if (it % 5 == 0) e = add(e, pow(add(Expr::x(1), Expr::integer(3)), Rational(-1)));
        if (it % 7 == 0) e = sin(add(Expr::x(1), Expr::t()));
        Expr back = parse_expr(e.str(), n);
        CHECK(back == e);
    }
}

TEST_CASE("diff examples") {
    CHECK(diff_y(P("y1*y2"), 2) == Expr::y(1));
    CHECK(diff_t(P("exp(2*t)")) == P("2*exp(2*t)"));
    CHECK(diff_x(P("sin(x1*y1)"), 1) == P("y1*cos(x1*y1)"));
    CHECK(diff_y(P("sqrt(y1)"), 1) == P("1/2 * y1^(-1/2)"));
    CHECK(diff_x(P("ln(x1)"), 1) == P("x1^(-1)"));
}

TEST_CASE("derivatives agree with central finite differences") {
    std::mt19937_64 rng(21);
    for (int it = 0; it < 30; ++it) {
        int n = 1 + static_cast<int>(rng() % 3);
        Expr e = random_poly(rng, n);
        for (int rep = 0; rep < 20; ++rep) {
            Point p = mid_point(rng, n);
            for (int v = 0; v <= 2 * n; ++v) {
                VarKind k = v == 0 ? VarKind::T : (v <= n ? VarKind::X : VarKind::Y);
                int idx = v == 0 ? 0 : (v <= n ? v : v - n);
                double sym = eval(diff(e, k, idx), p);
                double num = central_diff(e, p, k, idx);
                CHECK(std::abs(sym - num) <= 1e-6 * (1.0 + std::abs(sym)));
            }
        }
    }
}

TEST_CASE("eval examples and domain errors") {
    Point p{0.0, {1.0}, {3.0}};
    CHECK(eval(P("y1^2/2", 1), p) == doctest::Approx(4.5));
    CHECK(eval(P("exp(2*t)", 1), p) == doctest::Approx(1.0));

    Point origin{0.0, {0.0}, {0.0}};
    CHECK_THROWS_AS(eval(P("1/x1", 1), origin), EvalError);
    CHECK_THROWS_AS(eval(P("ln(x1 - 5)", 1), p), EvalError);
    CHECK_THROWS_AS(eval(P("sqrt(x1 - 5)", 1), p), EvalError);
    CHECK(eval(P("ln(exp(1))", 1), p) == doctest::Approx(1.0));
}

TEST_CASE("zero test verdicts") {
    ZeroTester tester(2, 32, 1e-9, 99);

    CHECK(tester.test(sub(Expr::y(1), Expr::y(1))).proven());

    // The simplifier does not know the Pythagorean identity.
    Expr pyth = P("sin(t)^2 + cos(t)^2 - 1");
    ZeroVerdict v = tester.test(pyth);
    CHECK(v.status() == ZeroVerdict::Status::ProbablyZero);
    CHECK(v.probes() == 32);

    ZeroVerdict nz = tester.test(P("y1*y2 - 1"));
    CHECK(nz.status() == ZeroVerdict::Status::NonZero);
    CHECK(nz.witness().has_value());
    double w = nz.witness()->point.y[0] * nz.witness()->point.y[1] - 1.0;
    CHECK(w == doctest::Approx(nz.witness()->value));

    // Nowhere evaluable on the sample box.
    CHECK_THROWS_AS(tester.test(P("ln(-1 - x1^2)")), ProbeExhausted);
}

TEST_CASE("zero test serial and parallel paths agree") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        ZeroTester par(2, 64, 1e-9, seed);
        ZeroTester ser(2, 64, 1e-9, seed);
        ser.set_parallel(false);
        for (const char* s : {"sin(t)^2 + cos(t)^2 - 1", "y1*y2 - 1", "ln(x1 + 3) - ln(x1 + 3)", "x1*y2"}) {
            ZeroVerdict a = par.test(P(s));
            ZeroVerdict b = ser.test(P(s));
            CHECK(a.status() == b.status());
            CHECK(a.max_abs() == b.max_abs());
            if (a.witness().has_value()) {
                REQUIRE(b.witness().has_value());
                CHECK(a.witness()->point.t == b.witness()->point.t);
                CHECK(a.witness()->value == b.witness()->value);
            }
        }
    }
}

TEST_CASE("numeric-only mode never claims symbolic proof") {
    ZeroTester tester(1, 8, 1e-9, 5);
    tester.set_numeric_only(true);
    ZeroVerdict v = tester.test(sub(Expr::y(1), Expr::y(1)));
    CHECK(v.status() == ZeroVerdict::Status::ProbablyZero);
}

TEST_CASE("soundness: proven zero implies no witness exists") {
    std::mt19937_64 rng(2024);
    ZeroTester tester(3, 16, 1e-9, 77);
    for (int it = 0; it < 50; ++it) {
        Expr a = random_poly(rng, 3);
        Expr b = random_poly(rng, 3);
        // (a+b)^2 - a^2 - 2ab - b^2 == 0 must be proven structurally.
        Expr e = sub(pow(add(a, b), Rational(2)), add({mul(a, a), mul({Expr::integer(2), a, b}), mul(b, b)}));
        CHECK(e.is_zero());
        Expr nz = add(mul(a, b), Expr::integer(1));
        ZeroVerdict v = tester.test(nz);
        if (v.proven()) CHECK(nz.is_zero());
    }
}

TEST_CASE("y-polynomial detection and homogeneous split") {
    CHECK(polynomial_in_y(P("y1^2*x1 + y2 + t")));
    CHECK(!polynomial_in_y(P("exp(y1)")));
    CHECK(!polynomial_in_y(P("(y1 + x1)^(-1)")));
    CHECK(polynomial_in_y(P("(x1 + t)^(-1) * y1^3")));

    auto parts = y_homogeneous_parts(P("3 + y1*y2 + x1*y1 + y1^2*y2"));
    REQUIRE(parts.size() == 4);
    CHECK(parts[0] == P("3"));
    CHECK(parts[1] == P("x1*y1"));
    CHECK(parts[2] == P("y1*y2"));
    CHECK(parts[3] == P("y1^2*y2"));
}
