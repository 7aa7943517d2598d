#include "jetlag/helmholtz.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace jetlag {

KForm SemiBasicOneForm::to_coord() const {
    int nn = n();
    KForm out(nn, 1);
    std::vector<Expr> dt_part{theta0};
    for (int i = 1; i <= nn; ++i) {
        dt_part.push_back(neg(mul(theta[i - 1], Expr::y(i))));
        out.add_term({i}, theta[i - 1]);
    }
    out.add_term({0}, add(std::move(dt_part)));
    return out;
}

Lagrangian::Lagrangian(int n, Expr value) : L(std::move(value)), g(expr_mat(n, n)) {
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) g[i - 1][j - 1] = diff_y(diff_y(L, i), j);
}

bool ConditionReport::passed() const {
    for (const NamedVerdict& v : components)
        if (!v.verdict.is_zero()) return false;
    return true;
}

bool ConditionReport::symbolic() const {
    for (const NamedVerdict& v : components)
        if (!v.verdict.proven()) return false;
    return true;
}

const NamedVerdict* ConditionReport::first_failure() const {
    for (const NamedVerdict& v : components)
        if (!v.verdict.is_zero()) return &v;
    return nullptr;
}

std::string classification_name(Classification c) {
    switch (c) {
        case Classification::PoincareCartan: return "Poincare-Cartan";
        case Classification::ConservativeWithSymmetry: return "conservative-with-symmetry";
        case Classification::Fail: return "fail";
    }
    return "?";
}

SemiBasicOneForm poincare_cartan(const Lagrangian& lag, const Semispray& s) {
    SemiBasicOneForm out;
    out.theta0 = lag.L;
    out.theta.resize(s.n());
    for (int i = 1; i <= s.n(); ++i) out.theta[i - 1] = diff_y(lag.L, i);
    return out;
}

HelmholtzQuantities helmholtz_quantities(const Semispray& s, const SemiBasicOneForm& theta) {
    int n = s.n();
    if (theta.n() != n) throw CalcError("helmholtz_quantities: dimension mismatch");
    HelmholtzQuantities q;
    q.a.resize(n);
    q.b.resize(n);
    q.b2 = expr_mat(n, n);
    q.g = expr_mat(n, n);
    std::vector<Expr> nabla_theta = nabla_covector(s, theta.theta);
    for (int i = 1; i <= n; ++i) {
        q.a[i - 1] = sub(diff_y(theta.theta0, i), theta.theta[i - 1]);
        q.b[i - 1] = sub(s.delta_x(theta.theta0, i), nabla_theta[i - 1]);
        for (int j = 1; j <= n; ++j) {
            q.b2[i - 1][j - 1] = sub(s.delta_x(theta.theta[i - 1], j), s.delta_x(theta.theta[j - 1], i));
            q.g[i - 1][j - 1] = diff_y(theta.theta[i - 1], j);
        }
    }
    return q;
}

namespace {

std::string idx1(const char* base, int i) {
    std::ostringstream os;
    os << base << "_" << i;
    return os.str();
}

std::string idx2(const char* base, int i, int j) {
    std::ostringstream os;
    os << base << "_" << i << j;
    return os.str();
}

// d theta in the adapted cobasis, from the multiplier data.
KForm assemble_d_theta(int n, const HelmholtzQuantities& q) {
    KForm out(n, 2);
    Expr half = Expr::constant(Rational(1, 2));
    for (int i = 1; i <= n; ++i) {
        out.add_term({i, 0}, q.b[i - 1]);          // b_i dx^i ^ dt
        out.add_term({n + i, 0}, q.a[i - 1]);      // a_i dy^i ^ dt
        for (int j = 1; j <= n; ++j) {
            if (j != i) out.add_term({j, i}, mul(half, q.b2[i - 1][j - 1]));
            out.add_term({n + j, i}, q.g[i - 1][j - 1]);  // g_ij dy^j ^ dx^i
        }
    }
    return out;
}

// L_S d theta in the adapted cobasis.
KForm assemble_lie_d_theta(const Semispray& s, const HelmholtzQuantities& q, const ExprMat& R) {
    int n = s.n();
    Expr half = Expr::constant(Rational(1, 2));
    std::vector<Expr> nb = nabla_covector(s, q.b);
    std::vector<Expr> na = nabla_covector(s, q.a);
    ExprMat nb2 = nabla_t02(s, q.b2);
    ExprMat ng = nabla_t02(s, q.g);
    KForm out(n, 2);
    for (int i = 1; i <= n; ++i) {
        std::vector<Expr> dx_dt{nb[i - 1]};
        for (int j = 1; j <= n; ++j) dx_dt.push_back(neg(mul(q.a[j - 1], R[j - 1][i - 1])));
        out.add_term({i, 0}, add(std::move(dx_dt)));           // (nabla b_i - a_j R^j_i) dx^i ^ dt
        out.add_term({n + i, 0}, add(q.b[i - 1], na[i - 1]));  // (b_i + nabla a_i) dy^i ^ dt
        for (int j = 1; j <= n; ++j) {
            if (j != i) {
                std::vector<Expr> c{nb2[i - 1][j - 1]};
                for (int k = 1; k <= n; ++k) {
                    c.push_back(neg(mul(q.g[i - 1][k - 1], R[k - 1][j - 1])));
                    c.push_back(mul(q.g[j - 1][k - 1], R[k - 1][i - 1]));
                }
                out.add_term({j, i}, mul(half, add(std::move(c))));
                out.add_term({n + j, n + i}, mul(half, sub(q.g[i - 1][j - 1], q.g[j - 1][i - 1])));
            }
            // (nabla g_ij + b_ij) dy^j ^ dx^i; the b_ij term is the
            // antisymmetrized survivor of L_S acting on the dx^j ^ dx^i block
            out.add_term({n + j, i}, add(ng[i - 1][j - 1], q.b2[i - 1][j - 1]));
        }
    }
    return out;
}

void cross_check(const AdaptedFrame& af, const KForm& adapted, const KForm& generic, const char* what,
                 ZeroTester& tester, std::vector<NamedVerdict>* sink) {
    KForm residual = kf_sub(af.form_to_coord(adapted), generic);
    ZeroVerdict worst = ZeroVerdict::proven_zero();
    for (const auto& [idx, c] : residual.coefficients()) {
        ZeroVerdict v = tester.test(c);
        if (!v.is_zero()) {
            std::ostringstream os;
            os << "adapted-cobasis assembly of " << what
               << " disagrees with the generic operator: " << v.str();
            throw OracleMismatch(os.str());
        }
        if (!v.proven()) worst = v;
    }
    if (sink) sink->push_back({std::string(what) + " vs generic", worst});
}

}  // namespace

KForm two_form_d_theta(const Semispray& s, const SemiBasicOneForm& theta, ZeroTester& tester) {
    HelmholtzQuantities q = helmholtz_quantities(s, theta);
    KForm adapted = assemble_d_theta(s.n(), q);
    AdaptedFrame af(s);
    cross_check(af, adapted, exterior_d(theta.to_coord()), "d theta", tester, nullptr);
    return adapted;
}

KForm lie_S_d_theta(const Semispray& s, const SemiBasicOneForm& theta, ZeroTester& tester) {
    HelmholtzQuantities q = helmholtz_quantities(s, theta);
    KForm adapted = assemble_lie_d_theta(s, q, jacobi_endomorphism(s).R);
    AdaptedFrame af(s);
    KForm generic = lie_form(s.vector_field(), exterior_d(theta.to_coord()));
    cross_check(af, adapted, generic, "L_S d theta", tester, nullptr);
    return adapted;
}

ExtractedLagrangian ExtractedLagrangian::symbolic(Expr L) {
    ExtractedLagrangian out;
    out.mode_ = Mode::Symbolic;
    out.symbolic_ = std::move(L);
    return out;
}

ExtractedLagrangian ExtractedLagrangian::potential(Expr base, std::vector<Expr> c, int n) {
    ExtractedLagrangian out;
    out.mode_ = Mode::Potential;
    out.n_ = n;
    out.base_ = std::move(base);
    out.c_ = std::move(c);
    return out;
}

ExtractedLagrangian ExtractedLagrangian::fiber_quadrature(std::vector<Expr> theta) {
    ExtractedLagrangian out;
    out.mode_ = Mode::Fiber;
    int n = static_cast<int>(theta.size());
    out.n_ = n;
    out.theta_ = std::move(theta);
    out.theta_dt_.resize(n);
    out.dx_ = expr_mat(n, n);
    out.dy_ = expr_mat(n, n);
    for (int i = 0; i < n; ++i) {
        out.theta_dt_[i] = diff_t(out.theta_[i]);
        for (int j = 1; j <= n; ++j) {
            out.dx_[i][j - 1] = diff_x(out.theta_[i], j);
            out.dy_[i][j - 1] = diff_y(out.theta_[i], j);
        }
    }
    return out;
}

const Expr& ExtractedLagrangian::expr() const {
    if (!symbolic_) throw CalcError("ExtractedLagrangian: no symbolic expression on the quadrature route");
    return *symbolic_;
}

namespace {

// 16-point Gauss-Legendre rule on [0,1], computed once by Newton iteration.
struct Quadrature {
    std::array<double, 16> node;
    std::array<double, 16> weight;

    Quadrature() {
        const int m = 16;
        for (int k = 0; k < m; ++k) {
            double x = std::cos(M_PI * (k + 0.75) / (m + 0.5));
            double p0 = 1.0, p1 = x, dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                p0 = 1.0;
                p1 = x;
                for (int j = 2; j <= m; ++j) {
                    double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                dp = m * (x * p1 - p0) / (x * x - 1.0);
                double step = p1 / dp;
                x -= step;
                if (std::abs(step) < 1e-15) break;
            }
            node[k] = 0.5 * (1.0 - x);
            weight[k] = 1.0 / ((1.0 - x * x) * dp * dp);
        }
    }
};

const Quadrature& quad16() {
    static const Quadrature q;
    return q;
}

}  // namespace

namespace {

double coord_of(const Point& p, int a, int n) {
    if (a == 0) return p.t;
    if (a <= n) return p.x[a - 1];
    return p.y[a - n - 1];
}

// integral(0..1) sum_a c_a(s p) p^a ds by 16-node quadrature
double radial_potential(const std::vector<Expr>& c, int n, const Point& p) {
    const Quadrature& Q = quad16();
    double acc = 0.0;
    Point sp = p;
    for (int k = 0; k < 16; ++k) {
        sp.t = Q.node[k] * p.t;
        for (int i = 0; i < n; ++i) {
            sp.x[i] = Q.node[k] * p.x[i];
            sp.y[i] = Q.node[k] * p.y[i];
        }
        double inner = 0.0;
        for (int a = 0; a < 2 * n + 1; ++a) {
            if (c[a].is_zero()) continue;
            inner += eval(c[a], sp) * coord_of(p, a, n);
        }
        acc += Q.weight[k] * inner;
    }
    return acc;
}

}  // namespace

double ExtractedLagrangian::value(const Point& p) const {
    if (mode_ == Mode::Symbolic) return eval(*symbolic_, p);
    if (mode_ == Mode::Potential) return eval(base_, p) - radial_potential(c_, n_, p);
    const Quadrature& Q = quad16();
    double acc = 0.0;
    Point sp = p;
    for (int k = 0; k < 16; ++k) {
        for (size_t i = 0; i < p.y.size(); ++i) sp.y[i] = Q.node[k] * p.y[i];
        double inner = 0.0;
        for (size_t i = 0; i < theta_.size(); ++i) inner += eval(theta_[i], sp) * p.y[i];
        acc += Q.weight[k] * inner;
    }
    return acc;
}

double ExtractedLagrangian::d_t(const Point& p) const {
    if (mode_ == Mode::Symbolic) return eval(diff_t(*symbolic_), p);
    if (mode_ == Mode::Potential) return eval(diff_t(base_), p) - eval(c_[0], p);
    const Quadrature& Q = quad16();
    double acc = 0.0;
    Point sp = p;
    for (int k = 0; k < 16; ++k) {
        for (size_t i = 0; i < p.y.size(); ++i) sp.y[i] = Q.node[k] * p.y[i];
        double inner = 0.0;
        for (size_t i = 0; i < theta_.size(); ++i) inner += eval(theta_dt_[i], sp) * p.y[i];
        acc += Q.weight[k] * inner;
    }
    return acc;
}

double ExtractedLagrangian::d_x(const Point& p, int j) const {
    if (mode_ == Mode::Symbolic) return eval(diff_x(*symbolic_, j), p);
    if (mode_ == Mode::Potential) return eval(diff_x(base_, j), p) - eval(c_[j], p);
    const Quadrature& Q = quad16();
    double acc = 0.0;
    Point sp = p;
    for (int k = 0; k < 16; ++k) {
        for (size_t i = 0; i < p.y.size(); ++i) sp.y[i] = Q.node[k] * p.y[i];
        double inner = 0.0;
        for (size_t i = 0; i < theta_.size(); ++i) inner += eval(dx_[i][j - 1], sp) * p.y[i];
        acc += Q.weight[k] * inner;
    }
    return acc;
}

double ExtractedLagrangian::d_y(const Point& p, int j) const {
    if (mode_ == Mode::Symbolic) return eval(diff_y(*symbolic_, j), p);
    if (mode_ == Mode::Potential) return eval(diff_y(base_, j), p) - eval(c_[n_ + j], p);
    const Quadrature& Q = quad16();
    double acc = 0.0;
    Point sp = p;
    for (int k = 0; k < 16; ++k) {
        for (size_t i = 0; i < p.y.size(); ++i) sp.y[i] = Q.node[k] * p.y[i];
        double inner = eval(theta_[j - 1], sp);
        for (size_t i = 0; i < theta_.size(); ++i) inner += Q.node[k] * eval(dy_[i][j - 1], sp) * p.y[i];
        acc += Q.weight[k] * inner;
    }
    return acc;
}

namespace {

void validate_quadrature_domain(const ExtractedLagrangian& lag, ZeroTester& tester) {
    int checks = std::min(tester.probes(), 8);
    for (int k = 0; k < checks; ++k) {
        Point p = tester.random_point();
        try {
            (void)lag.value(p);
        } catch (const EvalError& err) {
            throw HomotopyDomainError(
                std::string("homotopy integrand not evaluable on the radial segment: ") + err.what());
        }
    }
}

}  // namespace

ExtractedLagrangian extract_lagrangian(const Semispray& s, const SemiBasicOneForm& theta, bool dj_closed,
                                       ZeroTester& tester) {
    if (dj_closed) return ExtractedLagrangian::symbolic(theta.theta0);
    int n = s.n();
    HelmholtzQuantities q = helmholtz_quantities(s, theta);

    // df = -i_S d theta = b_i dx^i + a_i dy^i in the adapted cobasis; the
    // potential f with f(0) = 0 makes L = theta_0 - f an Euler-Lagrange
    // Lagrangian and f the associated first integral.
    AdaptedFrame af(s);
    KForm df_ad(n, 1);
    for (int i = 1; i <= n; ++i) {
        df_ad.add_term({i}, q.b[i - 1]);
        df_ad.add_term({n + i}, q.a[i - 1]);
    }
    KForm df = af.form_to_coord(df_ad);

    bool closed = true;
    for (const auto& [idx, c] : exterior_d(df).coefficients()) closed = closed && tester.test(c).is_zero();

    if (closed) {
        std::vector<Expr> c(2 * n + 1);
        bool poly = true;
        for (int a = 0; a < 2 * n + 1; ++a) {
            c[a] = df.get({a});
            poly = poly && polynomial_all(c[a]);
        }
        if (poly) {
            // radial integration term by term on the homogeneous parts
            std::vector<Expr> parts;
            for (int a = 0; a < 2 * n + 1; ++a) {
                if (c[a].is_zero()) continue;
                Expr u = a == 0 ? Expr::t() : (a <= n ? Expr::x(a) : Expr::y(a - n));
                std::vector<Expr> homog = homogeneous_parts_total(c[a]);
                for (size_t d = 0; d < homog.size(); ++d)
                    parts.push_back(
                        mul({Expr::constant(Rational(1, static_cast<long>(d) + 1)), homog[d], u}));
            }
            Expr f = add(std::move(parts));
            return ExtractedLagrangian::symbolic(sub(theta.theta0, f));
        }
        ExtractedLagrangian lag = ExtractedLagrangian::potential(theta.theta0, std::move(c), n);
        validate_quadrature_domain(lag, tester);
        return lag;
    }

    // Not closed: the form cannot pass the checks; fall back to the fiberwise
    // homotopy with gauge L(t,x,0) = 0.
    bool poly = true;
    for (const Expr& th : theta.theta) poly = poly && polynomial_in_y(th);
    if (poly) {
        std::vector<Expr> parts;
        for (int i = 1; i <= n; ++i) {
            std::vector<Expr> homog = y_homogeneous_parts(theta.theta[i - 1]);
            for (size_t d = 0; d < homog.size(); ++d)
                parts.push_back(
                    mul({Expr::constant(Rational(1, static_cast<long>(d) + 1)), homog[d], Expr::y(i)}));
        }
        return ExtractedLagrangian::symbolic(add(std::move(parts)));
    }
    ExtractedLagrangian lag = ExtractedLagrangian::fiber_quadrature(theta.theta);
    validate_quadrature_domain(lag, tester);
    return lag;
}

FirstIntegral first_integral(const Semispray& s, const SemiBasicOneForm& theta, const ExtractedLagrangian& lag,
                             ZeroTester& tester) {
    FirstIntegral out{std::nullopt, {}, ZeroVerdict::proven_zero()};
    if (lag.is_symbolic()) {
        Expr f = sub(theta.theta0, lag.expr());
        out.symbolic = f;
        out.value = [f](const Point& p) { return eval(f, p); };
        out.conserved = tester.test(s.apply(f));
        return out;
    }
    Expr theta0 = theta.theta0;
    ExtractedLagrangian lcopy = lag;
    out.value = [theta0, lcopy](const Point& p) { return eval(theta0, p) - lcopy.value(p); };

    // S(f) evaluated pointwise: S(theta_0) - (dL/dt + y^i dL/dx^i - 2 G^i dL/dy^i)
    Expr stheta0 = s.apply(theta0);
    std::vector<Expr> g = s.G();
    int n = s.n();
    out.conserved = tester.test_fn([stheta0, lcopy, g, n](const Point& p, double& scale) {
        double v = eval_tracked(stheta0, p, scale);
        double sl = lcopy.d_t(p);
        for (int i = 1; i <= n; ++i) {
            sl += p.y[i - 1] * lcopy.d_x(p, i);
            sl -= 2.0 * eval(g[i - 1], p) * lcopy.d_y(p, i);
        }
        scale = std::max(scale, std::abs(sl));
        return v - sl;
    });
    return out;
}

DualSymmetry dual_symmetry(const Semispray& s, const SemiBasicOneForm& theta, ZeroTester& tester) {
    int n = s.n();
    HelmholtzQuantities q = helmholtz_quantities(s, theta);

    bool any_a = false;
    for (const Expr& a : q.a) any_a = any_a || !tester.test(a).is_zero();
    if (!any_a)
        throw DegenerateRequest("dual_symmetry: the form is d_J-closed, i_S d theta carries no symmetry");

    ExprMat R = jacobi_endomorphism(s).R;
    DualSymmetry out;
    out.omega_dx.resize(n);
    out.omega_dy.resize(n);
    for (int i = 0; i < n; ++i) {
        out.omega_dx[i] = neg(q.b[i]);
        out.omega_dy[i] = neg(q.a[i]);
    }
    out.adjoint_dx = nabla_covector(s, out.omega_dy);
    out.adjoint_dy = out.omega_dy;

    std::vector<Expr> na = nabla_covector(s, q.a);
    std::vector<Expr> nb = nabla_covector(s, q.b);
    std::vector<Expr> nna = nabla_covector(s, na);

    out.compatibility = {"DS", "i_S d theta components satisfy the symmetry equations", {}};
    out.jacobi = {"Jacobi", "nabla^2 a_i + R^j_i a_j = 0", {}};
    for (int i = 1; i <= n; ++i)
        out.compatibility.components.push_back(
            {idx1("b + nabla a", i), tester.test(add(q.b[i - 1], na[i - 1]))});
    for (int i = 1; i <= n; ++i) {
        std::vector<Expr> r{nb[i - 1]};
        for (int j = 1; j <= n; ++j) r.push_back(neg(mul(q.a[j - 1], R[j - 1][i - 1])));
        out.compatibility.components.push_back({idx1("nabla b - a R", i), tester.test(add(std::move(r)))});
    }
    for (int i = 1; i <= n; ++i) {
        std::vector<Expr> r{nna[i - 1]};
        for (int j = 1; j <= n; ++j) r.push_back(mul(q.a[j - 1], R[j - 1][i - 1]));
        out.jacobi.components.push_back({idx1("nabla^2 a + R a", i), tester.test(add(std::move(r)))});
    }

    // L_S omega through the generic calculus
    AdaptedFrame af(s);
    KForm omega_ad(n, 1);
    for (int i = 1; i <= n; ++i) {
        omega_ad.add_term({i}, out.omega_dx[i - 1]);
        omega_ad.add_term({n + i}, out.omega_dy[i - 1]);
    }
    KForm ls = lie_form(s.vector_field(), af.form_to_coord(omega_ad));
    out.lie_invariance = {"L_S omega", "Lie derivative of i_S d theta along S", {}};
    for (const auto& [idx, c] : ls.coefficients()) {
        std::ostringstream os;
        os << "component";
        for (int v : idx) os << " " << v;
        out.lie_invariance.components.push_back({os.str(), tester.test(c)});
    }
    return out;
}

Expr symbolic_det(const ExprMat& m) {
    size_t n = m.size();
    if (n == 0) return Expr::integer(1);
    if (n == 1) return m[0][0];
    if (n == 2) return sub(mul(m[0][0], m[1][1]), mul(m[0][1], m[1][0]));
    std::vector<Expr> parts;
    for (size_t c = 0; c < n; ++c) {
        ExprMat minor(n - 1, std::vector<Expr>(n - 1));
        for (size_t r = 1; r < n; ++r) {
            size_t cc = 0;
            for (size_t k = 0; k < n; ++k) {
                if (k == c) continue;
                minor[r - 1][cc++] = m[r][k];
            }
        }
        Expr term = mul(m[0][c], symbolic_det(minor));
        parts.push_back(c % 2 == 0 ? term : neg(term));
    }
    return add(std::move(parts));
}

namespace {

double numeric_det(const ExprMat& g, const Point& p, double& scale) {
    size_t n = g.size();
    std::vector<std::vector<double>> m(n, std::vector<double>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            double s = 0.0;
            m[i][j] = eval_tracked(g[i][j], p, s);
            scale = std::max(scale, s);
        }
    double det = 1.0;
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        for (size_t r = c + 1; r < n; ++r)
            if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
        if (m[piv][c] == 0.0) return 0.0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (size_t r = c + 1; r < n; ++r) {
            double f = m[r][c] / m[c][c];
            for (size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return det;
}

// Exact inverse of an all-constant rational matrix by Gauss-Jordan.
std::optional<ExprMat> rational_inverse(const ExprMat& g) {
    size_t n = g.size();
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            if (!g[i][j].is_constant()) return std::nullopt;
            m[i][j] = g[i][j].constant_value();
        }
    std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n, Rational(0)));
    for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        while (piv < n && m[piv][c] == 0) ++piv;
        if (piv == n) return std::nullopt;  // singular
        std::swap(m[piv], m[c]);
        std::swap(inv[piv], inv[c]);
        Rational d = m[c][c];
        for (size_t k = 0; k < n; ++k) {
            m[c][k] /= d;
            inv[c][k] /= d;
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == c || m[r][c] == 0) continue;
            Rational f = m[r][c];
            for (size_t k = 0; k < n; ++k) {
                m[r][k] -= f * m[c][k];
                inv[r][k] -= f * inv[c][k];
            }
        }
    }
    ExprMat out = expr_mat(static_cast<int>(n), static_cast<int>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) out[i][j] = Expr::constant(inv[i][j]);
    return out;
}

// Adjugate-over-determinant inverse, n <= 4.
ExprMat adjugate_inverse(const ExprMat& g) {
    size_t n = g.size();
    Expr det_inv = pow(symbolic_det(g), Rational(-1));
    ExprMat out = expr_mat(static_cast<int>(n), static_cast<int>(n));
    if (n == 1) {
        out[0][0] = det_inv;
        return out;
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            ExprMat minor(n - 1, std::vector<Expr>(n - 1));
            size_t rr = 0;
            for (size_t r = 0; r < n; ++r) {
                if (r == j) continue;  // adjugate: cofactor of (j,i)
                size_t cc = 0;
                for (size_t c = 0; c < n; ++c) {
                    if (c == i) continue;
                    minor[rr][cc++] = g[r][c];
                }
                ++rr;
            }
            Expr cof = symbolic_det(minor);
            if ((i + j) % 2 == 1) cof = neg(cof);
            out[i][j] = mul(cof, det_inv);
        }
    return out;
}

}  // namespace

ZeroVerdict det_zero_verdict(const ExprMat& g, ZeroTester& tester) {
    int n = static_cast<int>(g.size());
    if (!tester.numeric_only() && n <= 4) return tester.test(symbolic_det(g));
    return tester.test_fn([&g](const Point& p, double& scale) { return numeric_det(g, p, scale); });
}

Semispray euler_lagrange_semispray(const Lagrangian& lag, ZeroTester& tester) {
    int n = lag.n();
    ZeroVerdict det_v = det_zero_verdict(lag.g, tester);
    if (det_v.is_zero()) {
        std::ostringstream os;
        os << "singular multiplier matrix: det g is " << det_v.str();
        throw SingularMetric(os.str());
    }

    std::vector<Expr> rhs(n);
    for (int i = 1; i <= n; ++i) {
        std::vector<Expr> parts{diff_t(diff_y(lag.L, i))};
        for (int k = 1; k <= n; ++k) parts.push_back(mul(Expr::y(k), diff_x(diff_y(lag.L, i), k)));
        parts.push_back(neg(diff_x(lag.L, i)));
        rhs[i - 1] = add(std::move(parts));
    }

    std::optional<ExprMat> ginv = rational_inverse(lag.g);
    if (!ginv) {
        if (n > 4)
            throw SingularMetric(
                "n > 4 with a non-constant multiplier matrix: the adjugate inverse is limited to n <= 4 "
                "(constant matrices solve exactly at any n)");
        ginv = adjugate_inverse(lag.g);
    }

    std::vector<Expr> g_coeffs(n);
    for (int j = 0; j < n; ++j) {
        std::vector<Expr> parts;
        for (int i = 0; i < n; ++i) parts.push_back(mul((*ginv)[j][i], rhs[i]));
        g_coeffs[j] = mul(Expr::constant(Rational(1, 2)), add(std::move(parts)));
    }
    Semispray s(n, std::move(g_coeffs));

    // derived coefficients must satisfy S(dL/dy^i) - dL/dx^i = 0
    for (int i = 1; i <= n; ++i) {
        Expr residual = sub(s.apply(diff_y(lag.L, i)), diff_x(lag.L, i));
        ZeroVerdict v = tester.test(residual);
        if (!v.is_zero())
            throw OracleMismatch("Euler-Lagrange residual of the derived semispray is nonzero: " + v.str());
    }
    return s;
}

NondegeneracyReport nondegenerate(const Semispray& s, const SemiBasicOneForm& theta, ZeroTester& tester) {
    int n = s.n();
    HelmholtzQuantities q = helmholtz_quantities(s, theta);
    KForm dtheta = assemble_d_theta(n, q);

    // i_S in adapted components: S is the 0-th frame field
    VectorField s_adapted(n);
    s_adapted[0] = Expr::integer(1);
    KForm reduced = kf_add(dtheta, wedge(interior_vf(s_adapted, dtheta), KForm::cobasis(n, 0)));

    // the dt components cancel, leaving 1/2 b_ij dx^j ^ dx^i + g_ij dy^j ^ dx^i
    for (const auto& [idx, c] : reduced.coefficients())
        if (idx[0] == 0 && !c.is_zero())
            throw OracleMismatch("dt components of d theta + i_S d theta ^ dt did not cancel");

    NondegeneracyReport out{det_zero_verdict(q.g, tester), false};
    out.rank_2n = out.det_g.status() == ZeroVerdict::Status::NonZero;
    return out;
}

HelmholtzReport check(const Semispray& s, const SemiBasicOneForm& theta, ZeroTester& tester) {
    int n = s.n();
    HelmholtzReport rep;
    rep.n = n;
    rep.quantities = helmholtz_quantities(s, theta);
    const HelmholtzQuantities& q = rep.quantities;
    ExprMat R = jacobi_endomorphism(s).R;

    rep.dj = {"dJ", "a_i = 0 (theta is d_J-closed, with H1)", {}};
    for (int i = 1; i <= n; ++i) rep.dj.components.push_back({idx1("a", i), tester.test(q.a[i - 1])});

    rep.h1 = {"H1", "g_ij = g_ji", {}};
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            rep.h1.components.push_back({idx2("g", i, j) + " - " + idx2("g", j, i),
                                         tester.test(sub(q.g[i - 1][j - 1], q.g[j - 1][i - 1]))});

    rep.h2 = {"H2", "b_ij = 0 (theta is d_h-closed modulo dt)", {}};
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            rep.h2.components.push_back({idx2("b", i, j), tester.test(q.b2[i - 1][j - 1])});

    rep.h3 = {"H3", "g_ik R^k_j symmetric (theta is d_Phi-closed modulo dt)", {}};
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            std::vector<Expr> parts;
            for (int k = 1; k <= n; ++k) {
                parts.push_back(mul(q.g[i - 1][k - 1], R[k - 1][j - 1]));
                parts.push_back(neg(mul(q.g[j - 1][k - 1], R[k - 1][i - 1])));
            }
            rep.h3.components.push_back(
                {idx2("gR", i, j) + " - " + idx2("gR", j, i), tester.test(add(std::move(parts)))});
        }

    rep.h4 = {"H4", "nabla d theta ^ dt = 0", {}};
    ExprMat ng = nabla_t02(s, q.g);
    ExprMat nb2 = nabla_t02(s, q.b2);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            rep.h4.components.push_back({idx2("nabla g", i, j), tester.test(ng[i - 1][j - 1])});
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            std::vector<Expr> parts{nb2[i - 1][j - 1]};
            for (int k = 1; k <= n; ++k) {
                parts.push_back(neg(mul(q.g[i - 1][k - 1], R[k - 1][j - 1])));
                parts.push_back(mul(q.g[j - 1][k - 1], R[k - 1][i - 1]));
            }
            rep.h4.components.push_back(
                {idx2("nabla b", i, j) + " - gR skew", tester.test(add(std::move(parts)))});
        }

    rep.ds = {"DS", "i_S d theta is a dual symmetry", {}};
    std::vector<Expr> na = nabla_covector(s, q.a);
    std::vector<Expr> nb = nabla_covector(s, q.b);
    for (int i = 1; i <= n; ++i)
        rep.ds.components.push_back({idx1("b + nabla a", i), tester.test(add(q.b[i - 1], na[i - 1]))});
    for (int i = 1; i <= n; ++i) {
        std::vector<Expr> parts{nb[i - 1]};
        for (int j = 1; j <= n; ++j) parts.push_back(neg(mul(q.a[j - 1], R[j - 1][i - 1])));
        rep.ds.components.push_back({idx1("nabla b - a R", i), tester.test(add(std::move(parts)))});
    }

    rep.dh_exact = {"dh", "b_i = 0 (d_h theta = 0, d_J-closed route)", {}};
    for (int i = 1; i <= n; ++i) rep.dh_exact.components.push_back({idx1("b", i), tester.test(q.b[i - 1])});

    // adapted-cobasis assemblies against the generic operators
    AdaptedFrame af(s);
    KForm theta_coord = theta.to_coord();
    KForm d_theta_coord = exterior_d(theta_coord);
    cross_check(af, assemble_d_theta(n, q), d_theta_coord, "d theta", tester, &rep.oracle_checks);
    cross_check(af, assemble_lie_d_theta(s, q, R), lie_form(s.vector_field(), d_theta_coord), "L_S d theta",
                tester, &rep.oracle_checks);

    {
        Expr half = Expr::constant(Rational(1, 2));
        KForm dj_local(n, 2), dh_local(n, 2), dphi_local(n, 2), ndt_local(n, 2);
        for (int i = 1; i <= n; ++i) {
            dj_local.add_term({i, 0}, q.a[i - 1]);
            dh_local.add_term({i, 0}, q.b[i - 1]);
            std::vector<Expr> ra;
            for (int j = 1; j <= n; ++j) ra.push_back(mul(R[j - 1][i - 1], q.a[j - 1]));
            dphi_local.add_term({i, 0}, add(std::move(ra)));
            ndt_local.add_term({i, 0}, nb[i - 1]);
            ndt_local.add_term({n + i, 0}, na[i - 1]);
            for (int j = 1; j <= n; ++j) {
                if (j != i) {
                    dj_local.add_term({j, i}, mul(half, sub(q.g[i - 1][j - 1], q.g[j - 1][i - 1])));
                    dh_local.add_term({j, i}, mul(half, q.b2[i - 1][j - 1]));
                    std::vector<Expr> gr;
                    for (int k = 1; k <= n; ++k) {
                        gr.push_back(mul(q.g[i - 1][k - 1], R[k - 1][j - 1]));
                        gr.push_back(neg(mul(q.g[j - 1][k - 1], R[k - 1][i - 1])));
                    }
                    dphi_local.add_term({j, i}, mul(half, add(std::move(gr))));
                    ndt_local.add_term({j, i}, mul(half, nb2[i - 1][j - 1]));
                }
                ndt_local.add_term({n + j, i}, ng[i - 1][j - 1]);
            }
        }
        cross_check(af, dj_local, d_t11(vertical_endomorphism(n), theta_coord), "d_J theta", tester,
                    &rep.oracle_checks);
        Projectors proj = projectors(s);
        cross_check(af, dh_local, d_t11(proj.h, theta_coord), "d_h theta", tester, &rep.oracle_checks);
        cross_check(af, dphi_local, d_t11(phi_tensor(s), theta_coord), "d_Phi theta", tester,
                    &rep.oracle_checks);
        cross_check(af, ndt_local, nabla_form(s, d_theta_coord), "nabla d theta", tester, &rep.oracle_checks);
    }

    // classification
    bool dj_closed = rep.dj.passed() && rep.h1.passed();
    std::vector<const ConditionReport*> required;
    if (dj_closed) {
        rep.classification = (rep.h2.passed() && rep.dh_exact.passed()) ? Classification::PoincareCartan
                                                                        : Classification::Fail;
        required = {&rep.h1, &rep.h2, &rep.dh_exact};
    } else {
        bool pass =
            rep.h1.passed() && rep.h2.passed() && rep.h3.passed() && rep.h4.passed() && rep.ds.passed();
        rep.classification = pass ? Classification::ConservativeWithSymmetry : Classification::Fail;
        required = {&rep.h1, &rep.h2, &rep.h3, &rep.h4, &rep.ds};
    }

    if (rep.classification == Classification::Fail) {
        for (const ConditionReport* c : required)
            if (const NamedVerdict* f = c->first_failure()) {
                rep.failure = NamedVerdict{c->id + ": " + f->name, f->verdict};
                break;
            }
    } else {
        rep.symbolic_pass = true;
        for (const ConditionReport* c : required) rep.symbolic_pass = rep.symbolic_pass && c->symbolic();

        rep.lagrangian = extract_lagrangian(s, theta, dj_closed, tester);
        rep.first_integral = first_integral(s, theta, *rep.lagrangian, tester);
        if (!dj_closed) rep.dual_symmetry = dual_symmetry(s, theta, tester);
    }
    rep.nondegeneracy = nondegenerate(s, theta, tester);
    return rep;
}

}  // namespace jetlag
