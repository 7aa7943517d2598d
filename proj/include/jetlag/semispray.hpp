#pragma once

#include "jetlag/forms.hpp"

#include <vector>

namespace jetlag {

using ExprMat = std::vector<std::vector<Expr>>;

ExprMat expr_mat(int rows, int cols);

// A time dependent second-order system x'' + 2G(t,x,x') = 0, encoded as the
// vector field S = d/dt + y^i d/dx^i - 2 G^i d/dy^i.
class Semispray {
  public:
    Semispray(int n, std::vector<Expr> coefficients);

    int n() const { return n_; }
    const std::vector<Expr>& G() const { return g_; }
    const Expr& G(int i) const { return g_[i - 1]; }

    VectorField vector_field() const;
    /// Derivation: S(f).
    Expr apply(const Expr& f) const;
    /// Horizontal derivative along the connection: df/dx^i - N^j_i df/dy^j.
    Expr delta_x(const Expr& f, int i) const;

  private:
    int n_;
    std::vector<Expr> g_;
};

/// Nonlinear connection coefficients N^i_j = dG^i/dy^j and
/// N^i_0 = 2G^i - N^i_j y^j. Stored 0-based: N[i-1][j-1], N0[i-1].
struct ConnectionData {
    ExprMat N;
    std::vector<Expr> N0;
};

ConnectionData connection_coeffs(const Semispray& s);

/// The vertical endomorphism J = d/dy^i (x) (dx^i - y^i dt); independent of
/// any semispray.
Tensor11 vertical_endomorphism(int n);

// Adapted frame {S, delta/delta x^i, d/dy^i} and its dual cobasis
// {dt, delta x^i, delta y^i}, held as coordinate-frame objects. All
// adapted <-> coordinate conversions live here.
class AdaptedFrame {
  public:
    explicit AdaptedFrame(const Semispray& s);

    int n() const { return n_; }
    int dim() const { return 2 * n_ + 1; }
    const ConnectionData& connection() const { return conn_; }

    /// Frame field with adapted index a (0 = S, 1..n = delta/delta x, n+i = d/dy).
    const VectorField& frame(int a) const { return frame_[a]; }
    /// Cobasis 1-form with adapted index a (0 = dt, 1..n = delta x, n+i = delta y).
    const KForm& cobasis(int a) const { return cobasis_[a]; }

    /// Pairing matrix cobasis[a](frame[b]); the identity when all is well.
    ExprMat pairing() const;

    /// Reinterprets a KForm whose indices are adapted-cobasis labels as a
    /// coordinate-frame form.
    KForm form_to_coord(const KForm& adapted) const;

    /// Builds sum of m[a][b] * frame[a] (x) cobasis[b] as a coordinate tensor.
    Tensor11 tensor_from_adapted(const ExprMat& m) const;

  private:
    int n_;
    ConnectionData conn_;
    std::vector<VectorField> frame_;
    std::vector<KForm> cobasis_;
};

struct Projectors {
    Tensor11 h;      // weak horizontal projector
    Tensor11 v;      // vertical projector
    Tensor11 gamma;  // almost product structure, 2h - Id
};

/// h = S (x) dt + delta/delta x^i (x) delta x^i, v = Id - h, Gamma = 2h - Id.
Projectors projectors(const Semispray& s);

/// F = delta/delta x^i (x) delta y^i - d/dy^i (x) delta x^i, the f(3,1)
/// structure with F = h o L_S h - J.
Tensor11 tensor_F(const Semispray& s);

/// Jacobi endomorphism components
/// R^i_j = 2 dG^i/dx^j - dG^i/dy^k dG^k/dy^j - S(dG^i/dy^j).
struct JacobiEndomorphism {
    ExprMat R;  // R[i-1][j-1] = R^i_j
};

JacobiEndomorphism jacobi_endomorphism(const Semispray& s);

/// Phi = R^j_i d/dy^j (x) delta x^i as a coordinate tensor.
Tensor11 phi_tensor(const Semispray& s);

/// Curvature of the nonlinear connection, R = [h,h]/2:
/// R3[k][i][j] = R^k_{ij} = delta N^k_i / delta x^j - delta N^k_j / delta x^i
/// plus the Jacobi block R^i_j.
struct CurvatureData {
    std::vector<ExprMat> R3;  // R3[k-1][i-1][j-1]
    ExprMat R;                // shared with JacobiEndomorphism
};

CurvatureData curvature(const Semispray& s);

/// The curvature as a vector-valued 2-form in the coordinate frame,
/// R = 1/2 R^k_{ij} d/dy^k (x) delta x^i ^ delta x^j
///   + R^j_i d/dy^j (x) dt ^ delta x^i.
VectorValued2Form curvature_form(const Semispray& s);

/// Psi = delta/delta x^i (x) delta y^i - R^j_i d/dy^j (x) delta x^i,
/// the algebraic part of the dynamical covariant derivative.
Tensor11 psi_tensor(const Semispray& s);

// Dynamical covariant derivative acting on adapted-frame component arrays:
// scalars go to S(f); each upper index i contributes +N^i_k T^{...k...},
// each lower index j contributes -N^k_j T_{...k...}.
Expr nabla_scalar(const Semispray& s, const Expr& f);
std::vector<Expr> nabla_vector(const Semispray& s, const std::vector<Expr>& upper);
std::vector<Expr> nabla_covector(const Semispray& s, const std::vector<Expr>& lower);
ExprMat nabla_t11(const Semispray& s, const ExprMat& m);  // one upper, one lower
ExprMat nabla_t02(const Semispray& s, const ExprMat& m);  // two lower

/// Generic-route covariant derivative on forms: L_S - i_Psi.
KForm nabla_form(const Semispray& s, const KForm& omega);
/// Same with a precomputed Psi tensor.
KForm nabla_form(const Semispray& s, const Tensor11& psi, const KForm& omega);

}  // namespace jetlag
