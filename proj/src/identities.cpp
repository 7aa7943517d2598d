#include "jetlag/identities.hpp"

#include "jetlag/helmholtz.hpp"

#include <functional>

namespace jetlag {

Expr random_polynomial(std::mt19937_64& rng, int n) {
    std::uniform_int_distribution<int> den(1, 3);
    std::uniform_int_distribution<int> var(0, 2 * n);
    std::uniform_int_distribution<int> deg(0, 2);
    std::vector<Expr> terms;
    for (int k = 0; k < 4; ++k) {
        int d = den(rng);
        std::uniform_int_distribution<int> num(-3 * d, 3 * d);
        Expr m = Expr::constant(Rational(num(rng), d));
        int degree = deg(rng);
        for (int j = 0; j < degree; ++j) {
            int v = var(rng);
            m = mul(m, v == 0 ? Expr::t() : (v <= n ? Expr::x(v) : Expr::y(v - n)));
        }
        terms.push_back(m);
    }
    return add(std::move(terms));
}

Semispray random_semispray(std::mt19937_64& rng, int n) {
    std::vector<Expr> g;
    g.reserve(n);
    for (int i = 0; i < n; ++i) g.push_back(random_polynomial(rng, n));
    return Semispray(n, std::move(g));
}

namespace {

// Auxiliary data for the operator identities. Sparse on purpose: every
// operator path is exercised either way, and dense degree-2 tensors at n=3
// blow the expression sizes up by two orders of magnitude.
Expr small_poly(std::mt19937_64& rng, int n) {
    std::uniform_int_distribution<int> coeff(-3, 3);
    std::uniform_int_distribution<int> var(0, 2 * n);
    std::uniform_int_distribution<int> deg(0, 2);
    std::vector<Expr> terms;
    for (int k = 0; k < 2; ++k) {
        Expr m = Expr::integer(coeff(rng));
        int d = deg(rng);
        for (int j = 0; j < d; ++j) {
            int v = var(rng);
            m = mul(m, v == 0 ? Expr::t() : (v <= n ? Expr::x(v) : Expr::y(v - n)));
        }
        terms.push_back(m);
    }
    return add(std::move(terms));
}

KForm random_form(std::mt19937_64& rng, int n, int degree) {
    if (degree == 0) return KForm::scalar(n, small_poly(rng, n));
    KForm f(n, degree);
    int dim = 2 * n + 1;
    std::vector<int> idx(degree);
    std::function<void(int, int)> rec = [&](int pos, int start) {
        if (pos == degree) {
            if (rng() % 3 == 0) f.add_term(idx, small_poly(rng, n));
            return;
        }
        for (int v = start; v < dim; ++v) {
            idx[pos] = v;
            rec(pos + 1, v + 1);
        }
    };
    rec(0, 0);
    if (f.structurally_zero()) {
        std::vector<int> first(degree);
        for (int k = 0; k < degree; ++k) first[k] = k;
        f.add_term(std::move(first), small_poly(rng, n));
    }
    return f;
}

Tensor11 random_tensor(std::mt19937_64& rng, int n) {
    Tensor11 a(n);
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j)
            if (rng() % 3 == 0) a.at(i, j) = small_poly(rng, n);
    return a;
}

VectorField random_field(std::mt19937_64& rng, int n) {
    VectorField x(n);
    for (int i = 0; i < x.dim(); ++i)
        if (rng() % 2 == 0) x[i] = small_poly(rng, n);
    return x;
}

struct Suite {
    ZeroTester& tester;
    std::vector<IdentityResult> out;

    void record(const std::string& name, std::vector<ZeroVerdict> parts) {
        const ZeroVerdict* worst = nullptr;
        int rank = -1;
        for (const ZeroVerdict& v : parts) {
            int r = v.status() == ZeroVerdict::Status::NonZero       ? 2
                    : v.status() == ZeroVerdict::Status::ProbablyZero ? 1
                                                                      : 0;
            if (r > rank) {
                rank = r;
                worst = &v;
            }
        }
        out.push_back({name, worst ? *worst : ZeroVerdict::proven_zero()});
    }

    void check_kform(const std::string& name, const KForm& f) {
        std::vector<ZeroVerdict> parts;
        for (const auto& [idx, c] : f.coefficients()) parts.push_back(tester.test(c));
        record(name, std::move(parts));
    }

    void check_t11(const std::string& name, const Tensor11& a) {
        std::vector<ZeroVerdict> parts;
        for (int i = 0; i < a.dim(); ++i)
            for (int j = 0; j < a.dim(); ++j)
                if (!a.at(i, j).is_zero()) parts.push_back(tester.test(a.at(i, j)));
        record(name, std::move(parts));
    }

    void check_vv2(const std::string& name, const VectorValued2Form& a) {
        std::vector<ZeroVerdict> parts;
        for (int i = 0; i < a.dim(); ++i)
            for (const auto& [idx, c] : a.component(i).coefficients()) parts.push_back(tester.test(c));
        record(name, std::move(parts));
    }
};

}  // namespace

std::vector<IdentityResult> run_identity_suite(const Semispray& s, ZeroTester& tester,
                                               std::uint64_t rng_seed) {
    int n = s.n();
    std::mt19937_64 rng(rng_seed);
    Suite suite{tester, {}};

    VectorField sf = s.vector_field();
    Tensor11 j = vertical_endomorphism(n);
    Projectors p = projectors(s);
    Tensor11 phi = phi_tensor(s);
    Tensor11 psi = psi_tensor(s);
    Tensor11 f = tensor_F(s);
    VectorValued2Form r_local = curvature_form(s);
    VectorValued2Form r_generic = nijenhuis(p.h);
    CurvatureData cd = curvature(s);

    // curvature candidates from the two routes
    suite.check_vv2("R = [h,h]/2 (local vs generic)", vv2_sub(r_local, r_generic));

    // Phi = i_S R
    suite.check_t11("Phi = i_S R", t11_sub(interior_vf_vv2(sf, r_generic), phi));

    // [J, h] = 0
    suite.check_vv2("[J,h] = 0", fn_bracket_t11(j, p.h));

    // [J, Phi] = 3R + Phi ^ dt
    suite.check_vv2("[J,Phi] = 3R + Phi^dt",
                    vv2_sub(fn_bracket_t11(j, phi),
                            vv2_add(vv2_scale(Expr::integer(3), r_local), vv1_wedge_dt(phi))));

    // N_J = -J ^ dt
    suite.check_vv2("N_J = -J^dt", vv2_add(nijenhuis(j), vv1_wedge_dt(j)));

    // nabla h = nabla v = nabla J = nabla F = 0 via A o Psi - Psi o A = L_S A
    suite.check_t11("nabla h = 0", t11_sub(t11_sub(t11_compose(p.h, psi), t11_compose(psi, p.h)),
                                           lie_t11(sf, p.h)));
    suite.check_t11("nabla v = 0", t11_sub(t11_sub(t11_compose(p.v, psi), t11_compose(psi, p.v)),
                                           lie_t11(sf, p.v)));
    suite.check_t11("nabla J = 0", t11_sub(t11_sub(t11_compose(j, psi), t11_compose(psi, j)),
                                           lie_t11(sf, j)));
    suite.check_t11("nabla F = 0", t11_sub(t11_sub(t11_compose(f, psi), t11_compose(psi, f)),
                                           lie_t11(sf, f)));

    // dR^k_j/dy^i - dR^k_i/dy^j = 3 R^k_{ij}
    {
        std::vector<ZeroVerdict> parts;
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int jj = i + 1; jj < n; ++jj) {
                    Expr lhs = sub(diff_y(cd.R[k][jj], i + 1), diff_y(cd.R[k][i], jj + 1));
                    parts.push_back(tester.test(sub(lhs, mul(Expr::integer(3), cd.R3[k][i][jj]))));
                }
        suite.record("dR/dy skew = 3R", std::move(parts));
    }

    // commutation formulae on random tensors and forms
    {
        Tensor11 a = random_tensor(rng, n);
        Tensor11 b = random_tensor(rng, n);
        VectorField x = random_field(rng, n);
        VectorValued2Form ab = fn_bracket_t11(a, b);
        for (int deg : {1, 2}) {
            KForm w = random_form(rng, n, deg);
            std::string tag = deg == 1 ? " (1-form)" : " (2-form)";
            suite.check_kform("i_A d_B - d_B i_A = d_{BoA} - i_{[A,B]}" + tag,
                              kf_sub(kf_sub(interior_t11(a, d_t11(b, w)), d_t11(b, interior_t11(a, w))),
                                     kf_sub(d_t11(t11_compose(b, a), w), interior_vv2(ab, w))));
            suite.check_kform("L_X i_A - i_A L_X = i_{[X,A]}" + tag,
                              kf_sub(kf_sub(lie_form(x, interior_t11(a, w)), interior_t11(a, lie_form(x, w))),
                                     interior_t11(lie_t11(x, a), w)));
            suite.check_kform("i_X d_A + d_A i_X = L_{AX} - i_{[X,A]}" + tag,
                              kf_sub(kf_add(interior_vf(x, d_t11(a, w)), d_t11(a, interior_vf(x, w))),
                                     kf_sub(lie_form(a.apply(x), w), interior_t11(lie_t11(x, a), w))));
            suite.check_kform("i_A i_B - i_B i_A = i_{BoA} - i_{AoB}" + tag,
                              kf_sub(kf_sub(interior_t11(a, interior_t11(b, w)),
                                            interior_t11(b, interior_t11(a, w))),
                                     kf_sub(interior_t11(t11_compose(b, a), w),
                                            interior_t11(t11_compose(a, b), w))));
        }
    }

    // d nabla - nabla d = d_Psi on random 0- and 1-forms
    for (int deg : {0, 1}) {
        KForm w = random_form(rng, n, deg);
        KForm lhs = kf_sub(exterior_d(nabla_form(s, psi, w)), nabla_form(s, psi, exterior_d(w)));
        suite.check_kform(deg == 0 ? "d nabla - nabla d = d_Psi (0-form)"
                                   : "d nabla - nabla d = d_Psi (1-form)",
                          kf_sub(lhs, d_t11(psi, w)));
    }

    // nabla i_A = i_A nabla on 1-forms for the parallel tensors h, v, J, F
    {
        KForm w = random_form(rng, n, 1);
        const char* names[4] = {"nabla i_h = i_h nabla", "nabla i_v = i_v nabla", "nabla i_J = i_J nabla",
                                "nabla i_F = i_F nabla"};
        const Tensor11* tensors[4] = {&p.h, &p.v, &j, &f};
        for (int k = 0; k < 4; ++k)
            suite.check_kform(names[k], kf_sub(nabla_form(s, psi, interior_t11(*tensors[k], w)),
                                               interior_t11(*tensors[k], nabla_form(s, psi, w))));
    }

    // semi-basic theta: nabla theta = d_h i_S theta + i_S d_h theta
    // and i_S d_h theta = i_h i_S d theta
    {
        SemiBasicOneForm theta;
        theta.theta0 = random_polynomial(rng, n);
        for (int i = 0; i < n; ++i) theta.theta.push_back(random_polynomial(rng, n));
        KForm tc = theta.to_coord();
        KForm ist = KForm::scalar(n, interior_vf(sf, tc).scalar_value());
        suite.check_kform("nabla theta = d_h i_S theta + i_S d_h theta",
                          kf_sub(nabla_form(s, psi, tc),
                                 kf_add(d_t11(p.h, ist), interior_vf(sf, d_t11(p.h, tc)))));
        suite.check_kform("i_S d_h theta = i_h i_S d theta",
                          kf_sub(interior_vf(sf, d_t11(p.h, tc)),
                                 interior_t11(p.h, interior_vf(sf, exterior_d(tc)))));
    }

    return suite.out;
}

bool all_passed(const std::vector<IdentityResult>& results) {
    for (const IdentityResult& r : results)
        if (!r.verdict.is_zero()) return false;
    return true;
}

}  // namespace jetlag
