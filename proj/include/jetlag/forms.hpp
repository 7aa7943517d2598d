#pragma once

#include "jetlag/expr.hpp"

#include <map>
#include <stdexcept>
#include <vector>

namespace jetlag {

// Exterior calculus in the coordinate frame {d/dt, d/dx^i, d/dy^i} of the
// first jet bundle (dimension 2n+1). Frame index convention throughout:
// 0 = t, 1..n = x^i, n+i = y^i. All operations are pure and return canonical
// expressions; this module is the generic oracle the adapted-frame formulas
// elsewhere are validated against.

class CalcError : public std::runtime_error {
  public:
    explicit CalcError(const std::string& what) : std::runtime_error(what) {}
};

/// Partial derivative along coordinate `a` (frame index convention above).
Expr coord_diff(const Expr& e, int a, int n);

class VectorField {
  public:
    explicit VectorField(int n) : n_(n), comps_(2 * n + 1, Expr()) {}
    VectorField(int n, std::vector<Expr> comps);

    int n() const { return n_; }
    int dim() const { return 2 * n_ + 1; }
    const Expr& operator[](int a) const { return comps_[a]; }
    Expr& operator[](int a) { return comps_[a]; }

    /// Derivation on functions: X(f) = sum_a X^a d_a f.
    Expr apply(const Expr& f) const;

    static VectorField frame(int n, int a);  // the coordinate field e_a

  private:
    int n_;
    std::vector<Expr> comps_;
};

VectorField vf_add(const VectorField& a, const VectorField& b);
VectorField vf_sub(const VectorField& a, const VectorField& b);
VectorField vf_scale(const Expr& c, const VectorField& a);
/// Lie bracket [X,Y].
VectorField vf_bracket(const VectorField& x, const VectorField& y);

class KForm {
  public:
    KForm(int n, int degree);
    static KForm scalar(int n, Expr value);
    /// Coordinate cobasis 1-form with index a.
    static KForm cobasis(int n, int a);

    int n() const { return n_; }
    int dim() const { return 2 * n_ + 1; }
    int degree() const { return degree_; }

    /// Adds c * e^{idx[0]} ^ ... ^ e^{idx[k-1]}; indices in any order.
    void add_term(std::vector<int> idx, const Expr& c);
    /// Signed coefficient at an arbitrary index tuple.
    Expr get(std::vector<int> idx) const;
    Expr scalar_value() const;

    const std::map<std::vector<int>, Expr>& coefficients() const { return coef_; }
    bool structurally_zero() const { return coef_.empty(); }

    /// Evaluate on vector fields (count must equal degree).
    Expr operator()(const std::vector<VectorField>& args) const;

  private:
    int n_;
    int degree_;
    std::map<std::vector<int>, Expr> coef_;
};

KForm kf_add(const KForm& a, const KForm& b);
KForm kf_sub(const KForm& a, const KForm& b);
KForm kf_scale(const Expr& c, const KForm& a);
KForm wedge(const KForm& a, const KForm& b);

class Tensor11 {
  public:
    explicit Tensor11(int n) : n_(n), mat_(2 * n + 1, std::vector<Expr>(2 * n + 1, Expr())) {}
    static Tensor11 identity(int n);
    /// X (x) omega, i.e. (X (x) omega)(Y) = omega(Y) X.
    static Tensor11 outer(const VectorField& x, const KForm& omega);

    int n() const { return n_; }
    int dim() const { return 2 * n_ + 1; }
    const Expr& at(int out, int in) const { return mat_[out][in]; }
    Expr& at(int out, int in) { return mat_[out][in]; }

    VectorField apply(const VectorField& x) const;
    VectorField column(int in) const;
    bool structurally_zero() const;

  private:
    int n_;
    std::vector<std::vector<Expr>> mat_;
};

Tensor11 t11_add(const Tensor11& a, const Tensor11& b);
Tensor11 t11_sub(const Tensor11& a, const Tensor11& b);
Tensor11 t11_scale(const Expr& c, const Tensor11& a);
Tensor11 t11_compose(const Tensor11& a, const Tensor11& b);  // a after b

/// One degree-2 form per output frame component.
class VectorValued2Form {
  public:
    explicit VectorValued2Form(int n) : n_(n), comps_(2 * n + 1, KForm(n, 2)) {}
    int n() const { return n_; }
    int dim() const { return 2 * n_ + 1; }
    const KForm& component(int out) const { return comps_[out]; }
    KForm& component(int out) { return comps_[out]; }
    bool structurally_zero() const;

  private:
    int n_;
    std::vector<KForm> comps_;
};

VectorValued2Form vv2_add(const VectorValued2Form& a, const VectorValued2Form& b);
VectorValued2Form vv2_sub(const VectorValued2Form& a, const VectorValued2Form& b);
VectorValued2Form vv2_scale(const Expr& c, const VectorValued2Form& a);

// --- exterior calculus operations ---

/// d; input degree <= 2.
KForm exterior_d(const KForm& omega);

/// i_X; input degree >= 1.
KForm interior_vf(const VectorField& x, const KForm& omega);

/// i_A for a (1,1)-tensor; degree preserved (0 on functions).
KForm interior_t11(const Tensor11& a, const KForm& omega);

/// i_A for a vector-valued 2-form; defined here for inputs of degree 1 and 2,
/// which is all the bracket identities need.
KForm interior_vv2(const VectorValued2Form& a, const KForm& omega);

/// d_A = i_A d - d i_A for a (1,1)-tensor A.
KForm d_t11(const Tensor11& a, const KForm& omega);

/// d_A = i_A d + d i_A for a vector-valued 2-form A; input degree <= 1.
KForm d_vv2(const VectorValued2Form& a, const KForm& omega);

/// Cartan formula L_X = i_X d + d i_X.
KForm lie_form(const VectorField& x, const KForm& omega);

/// L_X A = L_X o A - A o L_X, i.e. (L_X A)(Y) = [X, AY] - A[X, Y].
Tensor11 lie_t11(const VectorField& x, const Tensor11& a);

/// Frolicher-Nijenhuis bracket of two (1,1)-tensors.
VectorValued2Form fn_bracket_t11(const Tensor11& a, const Tensor11& b);

/// N_A = [A,A]/2.
VectorValued2Form nijenhuis(const Tensor11& a);

/// A ^ dt as a vector-valued 2-form: (A ^ dt)(X,Y) = A(X) dt(Y) - A(Y) dt(X).
VectorValued2Form vv1_wedge_dt(const Tensor11& a);

/// Interior of a vector-valued 2-form by a vector field: (i_X R)(Y) = R(X,Y).
Tensor11 interior_vf_vv2(const VectorField& x, const VectorValued2Form& r);

/// A* omega (X_1,...,X_k) = omega(A X_1,..., A X_k).
KForm a_star(const Tensor11& a, const KForm& omega);

}  // namespace jetlag
