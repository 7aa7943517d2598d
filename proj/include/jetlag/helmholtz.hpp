#pragma once

#include "jetlag/semispray.hpp"
#include "jetlag/zero.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace jetlag {

// Inverse-problem checker: given a semispray and a candidate semi-basic
// 1-form theta = theta_0 dt + theta_i delta x^i, decide whether L_S theta is
// closed by testing the Helmholtz conditions on the multiplier data
//   a_i = d(theta_0)/dy^i - theta_i
//   b_i = delta(theta_0)/delta x^i - nabla theta_i
//   b_ij = delta(theta_i)/delta x^j - delta(theta_j)/delta x^i
//   g_ij = d(theta_i)/dy^j
// and classify the form: a d_J-closed passing form is the Poincare-Cartan
// form of the Lagrangian L = i_S theta; a passing form that is not d_J-closed
// additionally yields a first integral and a dual symmetry.

/// Internal inconsistency between an adapted-cobasis assembly and the generic
/// coordinate-frame operators. Never a valid-input failure.
class OracleMismatch : public std::runtime_error {
  public:
    explicit OracleMismatch(const std::string& what) : std::runtime_error(what) {}
};

class SingularMetric : public std::runtime_error {
  public:
    explicit SingularMetric(const std::string& what) : std::runtime_error(what) {}
};

class HomotopyDomainError : public std::runtime_error {
  public:
    explicit HomotopyDomainError(const std::string& what) : std::runtime_error(what) {}
};

/// dual_symmetry called although the form is d_J-closed.
class DegenerateRequest : public std::runtime_error {
  public:
    explicit DegenerateRequest(const std::string& what) : std::runtime_error(what) {}
};

struct SemiBasicOneForm {
    Expr theta0;
    std::vector<Expr> theta;  // components against delta x^i

    int n() const { return static_cast<int>(theta.size()); }
    /// theta as a coordinate-frame 1-form: (theta_0 - theta_i y^i) dt + theta_i dx^i.
    KForm to_coord() const;
};

struct Lagrangian {
    Expr L;
    ExprMat g;  // Hessian d^2 L / dy^i dy^j

    Lagrangian(int n, Expr value);
    int n() const { return static_cast<int>(g.size()); }
};

struct HelmholtzQuantities {
    std::vector<Expr> a;
    std::vector<Expr> b;
    ExprMat b2;  // b_ij, antisymmetric
    ExprMat g;
};

struct NamedVerdict {
    std::string name;
    ZeroVerdict verdict;
};

struct ConditionReport {
    std::string id;
    std::string description;
    std::vector<NamedVerdict> components;

    bool passed() const;
    /// True when every component is symbolically proven.
    bool symbolic() const;
    const NamedVerdict* first_failure() const;
};

enum class Classification { PoincareCartan, ConservativeWithSymmetry, Fail };

std::string classification_name(Classification c);

/// Lagrangian recovered from theta. On the d_J-closed route this is
/// L = i_S theta exactly. Otherwise L = theta_0 - f, where f is the radial
/// potential (f(0) = 0) of the exact 1-form -i_S d theta = df; f is symbolic
/// for polynomial data and a quadrature evaluator (16-node Gauss-Legendre,
/// flagged non-symbolic) otherwise. When -i_S d theta fails to be closed (the
/// form does not pass the checks) the fiberwise homotopy
/// integral(0..1) theta_i(t,x,s y) y^i ds with gauge L(t,x,0) = 0 is used
/// instead.
class ExtractedLagrangian {
  public:
    static ExtractedLagrangian symbolic(Expr L);
    /// L = base - potential of the closed coordinate 1-form with components c.
    static ExtractedLagrangian potential(Expr base, std::vector<Expr> c, int n);
    /// Fallback fiber homotopy over theta_i.
    static ExtractedLagrangian fiber_quadrature(std::vector<Expr> theta);

    bool is_symbolic() const { return symbolic_.has_value(); }
    const Expr& expr() const;
    double value(const Point& p) const;
    /// Partial derivatives of the recovered Lagrangian at a point.
    double d_t(const Point& p) const;
    double d_x(const Point& p, int i) const;
    double d_y(const Point& p, int i) const;

  private:
    enum class Mode { Symbolic, Potential, Fiber };
    Mode mode_ = Mode::Symbolic;
    int n_ = 0;
    std::optional<Expr> symbolic_;
    // potential route: L = base - f, df = c_a du^a
    Expr base_;
    std::vector<Expr> c_;
    // fiber route: theta components and their partials
    std::vector<Expr> theta_;
    std::vector<Expr> theta_dt_;
    ExprMat dx_;  // dx_[i][j] = d theta_i / d x^j
    ExprMat dy_;  // dy_[i][j] = d theta_i / d y^j
};

struct FirstIntegral {
    std::optional<Expr> symbolic;                    // theta_0 - L when L is symbolic
    std::function<double(const Point&)> value;       // always usable
    ZeroVerdict conserved;                           // S(f) = 0 verdict
};

struct DualSymmetry {
    std::vector<Expr> omega_dx;    // components against delta x^i, = -b_i
    std::vector<Expr> omega_dy;    // components against delta y^i, = -a_i
    std::vector<Expr> adjoint_dx;  // -i_Gamma omega: nabla(omega_dy) against delta x^i
    std::vector<Expr> adjoint_dy;
    ConditionReport compatibility;   // b_i + nabla a_i and nabla b_i - a_j R^j_i
    ConditionReport jacobi;          // nabla^2 a_i + R^j_i a_j
    ConditionReport lie_invariance;  // L_S omega = 0 through the generic calculus

    bool passed() const { return compatibility.passed() && jacobi.passed() && lie_invariance.passed(); }
};

struct NondegeneracyReport {
    ZeroVerdict det_g;  // zero test of det(g_ij); a NonZero witness means regular
    bool rank_2n;       // rank claim for d theta + i_S d theta ^ dt
};

struct HelmholtzReport {
    int n = 0;
    HelmholtzQuantities quantities;
    ConditionReport dj;  // a_i = 0: is theta d_J-closed (given H1)
    ConditionReport h1, h2, h3, h4, ds;
    ConditionReport dh_exact;  // b_i = 0, required on the d_J-closed route
    std::vector<NamedVerdict> oracle_checks;

    Classification classification = Classification::Fail;
    std::optional<NamedVerdict> failure;
    bool symbolic_pass = false;

    std::optional<ExtractedLagrangian> lagrangian;
    std::optional<FirstIntegral> first_integral;
    std::optional<DualSymmetry> dual_symmetry;
    std::optional<NondegeneracyReport> nondegeneracy;

    bool passed() const { return classification != Classification::Fail; }
};

/// theta_L = L dt + d_J L, i.e. theta_0 = L and theta_i = dL/dy^i.
SemiBasicOneForm poincare_cartan(const Lagrangian& lag, const Semispray& s);

HelmholtzQuantities helmholtz_quantities(const Semispray& s, const SemiBasicOneForm& theta);

/// d theta assembled in the adapted cobasis (indices 0 = dt, i = delta x^i,
/// n+i = delta y^i):
///   d theta = b_i dx^i^dt + a_i dy^i^dt + 1/2 b_ij dx^j^dx^i + g_ij dy^j^dx^i.
/// The result is cross-checked against the generic exterior derivative; a
/// NonZero residual throws OracleMismatch.
KForm two_form_d_theta(const Semispray& s, const SemiBasicOneForm& theta, ZeroTester& tester);

/// L_S d theta assembled from nabla and the Jacobi endomorphism in the
/// adapted cobasis, cross-checked against the generic Lie derivative.
KForm lie_S_d_theta(const Semispray& s, const SemiBasicOneForm& theta, ZeroTester& tester);

/// Runs the full Helmholtz analysis and classification.
HelmholtzReport check(const Semispray& s, const SemiBasicOneForm& theta, ZeroTester& tester);

/// Recovers the Lagrangian; `dj_closed` selects the i_S theta route.
ExtractedLagrangian extract_lagrangian(const Semispray& s, const SemiBasicOneForm& theta, bool dj_closed,
                                       ZeroTester& tester);

FirstIntegral first_integral(const Semispray& s, const SemiBasicOneForm& theta, const ExtractedLagrangian& lag,
                             ZeroTester& tester);

DualSymmetry dual_symmetry(const Semispray& s, const SemiBasicOneForm& theta, ZeroTester& tester);

/// Builds the semispray whose geodesics are the Euler-Lagrange solutions of a
/// regular Lagrangian: 2G^j = g^{ji}(d2L/dtdy^i + y^k d2L/dx^k dy^i - dL/dx^i).
/// Symbolic inversion uses an exact rational solve for constant Hessians (any
/// n) and the adjugate for n <= 4; the derived coefficients are verified
/// against S(dL/dy^i) - dL/dx^i = 0. In numeric-only testers the regularity
/// precondition is decided by pointwise numeric determinants.
Semispray euler_lagrange_semispray(const Lagrangian& lag, ZeroTester& tester);

/// Zero test of det g with the rank claim for d theta + i_S d theta ^ dt.
NondegeneracyReport nondegenerate(const Semispray& s, const SemiBasicOneForm& theta, ZeroTester& tester);

/// det(g) as an expression; cofactor expansion, n <= 4.
Expr symbolic_det(const ExprMat& m);

/// Zero verdict for det(g): symbolic for n <= 4 (unless the tester is
/// numeric-only), otherwise pointwise LU determinants.
ZeroVerdict det_zero_verdict(const ExprMat& g, ZeroTester& tester);

}  // namespace jetlag
