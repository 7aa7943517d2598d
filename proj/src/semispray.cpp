#include "jetlag/semispray.hpp"

namespace jetlag {

ExprMat expr_mat(int rows, int cols) { return ExprMat(rows, std::vector<Expr>(cols, Expr())); }

Semispray::Semispray(int n, std::vector<Expr> coefficients) : n_(n), g_(std::move(coefficients)) {
    if (n < 1) throw CalcError("Semispray: dimension must be >= 1");
    if (g_.size() != static_cast<size_t>(n)) throw CalcError("Semispray: expected n coefficient functions");
}

VectorField Semispray::vector_field() const {
    VectorField s(n_);
    s[0] = Expr::integer(1);
    for (int i = 1; i <= n_; ++i) {
        s[i] = Expr::y(i);
        s[n_ + i] = mul(Expr::integer(-2), g_[i - 1]);
    }
    return s;
}

Expr Semispray::apply(const Expr& f) const {
    std::vector<Expr> parts{diff_t(f)};
    for (int i = 1; i <= n_; ++i) {
        parts.push_back(mul(Expr::y(i), diff_x(f, i)));
        parts.push_back(mul({Expr::integer(-2), g_[i - 1], diff_y(f, i)}));
    }
    return add(std::move(parts));
}

Expr Semispray::delta_x(const Expr& f, int i) const {
    std::vector<Expr> parts{diff_x(f, i)};
    for (int j = 1; j <= n_; ++j) parts.push_back(neg(mul(diff_y(g_[j - 1], i), diff_y(f, j))));
    return add(std::move(parts));
}

ConnectionData connection_coeffs(const Semispray& s) {
    int n = s.n();
    ConnectionData c;
    c.N = expr_mat(n, n);
    c.N0.resize(n);
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) c.N[i - 1][j - 1] = diff_y(s.G(i), j);
        std::vector<Expr> parts{mul(Expr::integer(2), s.G(i))};
        for (int j = 1; j <= n; ++j) parts.push_back(neg(mul(c.N[i - 1][j - 1], Expr::y(j))));
        c.N0[i - 1] = add(std::move(parts));
    }
    return c;
}

Tensor11 vertical_endomorphism(int n) {
    Tensor11 j(n);
    for (int i = 1; i <= n; ++i) {
        j.at(n + i, i) = Expr::integer(1);
        j.at(n + i, 0) = neg(Expr::y(i));
    }
    return j;
}

AdaptedFrame::AdaptedFrame(const Semispray& s) : n_(s.n()), conn_(connection_coeffs(s)) {
    int n = n_;
    frame_.reserve(dim());
    frame_.push_back(s.vector_field());
    for (int i = 1; i <= n; ++i) {
        VectorField d(n);
        d[i] = Expr::integer(1);
        for (int j = 1; j <= n; ++j) d[n + j] = neg(conn_.N[j - 1][i - 1]);
        frame_.push_back(d);
    }
    for (int i = 1; i <= n; ++i) frame_.push_back(VectorField::frame(n, n + i));

    cobasis_.reserve(dim());
    cobasis_.push_back(KForm::cobasis(n, 0));
    for (int i = 1; i <= n; ++i) {
        KForm dx(n, 1);
        dx.add_term({i}, Expr::integer(1));
        dx.add_term({0}, neg(Expr::y(i)));
        cobasis_.push_back(dx);
    }
    for (int i = 1; i <= n; ++i) {
        KForm dy(n, 1);
        dy.add_term({n + i}, Expr::integer(1));
        for (int j = 1; j <= n; ++j) dy.add_term({j}, conn_.N[i - 1][j - 1]);
        dy.add_term({0}, conn_.N0[i - 1]);
        cobasis_.push_back(dy);
    }
}

ExprMat AdaptedFrame::pairing() const {
    ExprMat m = expr_mat(dim(), dim());
    for (int a = 0; a < dim(); ++a)
        for (int b = 0; b < dim(); ++b) m[a][b] = interior_vf(frame_[b], cobasis_[a]).scalar_value();
    return m;
}

KForm AdaptedFrame::form_to_coord(const KForm& adapted) const {
    if (adapted.degree() == 0) return adapted;
    KForm out(n_, adapted.degree());
    for (const auto& [idx, c] : adapted.coefficients()) {
        KForm piece = cobasis_[idx[0]];
        for (size_t m = 1; m < idx.size(); ++m) piece = wedge(piece, cobasis_[idx[m]]);
        out = kf_add(out, kf_scale(c, piece));
    }
    return out;
}

Tensor11 AdaptedFrame::tensor_from_adapted(const ExprMat& m) const {
    Tensor11 out(n_);
    for (int a = 0; a < dim(); ++a)
        for (int b = 0; b < dim(); ++b) {
            if (m[a][b].is_zero()) continue;
            for (int i = 0; i < dim(); ++i) {
                if (frame_[a][i].is_zero()) continue;
                for (int j = 0; j < dim(); ++j)
                    out.at(i, j) = add(out.at(i, j), mul({m[a][b], frame_[a][i], cobasis_[b].get({j})}));
            }
        }
    return out;
}

Projectors projectors(const Semispray& s) {
    AdaptedFrame af(s);
    int n = s.n();
    ExprMat hm = expr_mat(af.dim(), af.dim());
    hm[0][0] = Expr::integer(1);
    for (int i = 1; i <= n; ++i) hm[i][i] = Expr::integer(1);
    Projectors p{af.tensor_from_adapted(hm), Tensor11(n), Tensor11(n)};
    p.v = t11_sub(Tensor11::identity(n), p.h);
    p.gamma = t11_sub(t11_scale(Expr::integer(2), p.h), Tensor11::identity(n));
    return p;
}

Tensor11 tensor_F(const Semispray& s) {
    AdaptedFrame af(s);
    int n = s.n();
    ExprMat fm = expr_mat(af.dim(), af.dim());
    for (int i = 1; i <= n; ++i) {
        fm[i][n + i] = Expr::integer(1);   // delta/delta x^i (x) delta y^i
        fm[n + i][i] = Expr::integer(-1);  // - d/dy^i (x) delta x^i
    }
    return af.tensor_from_adapted(fm);
}

JacobiEndomorphism jacobi_endomorphism(const Semispray& s) {
    int n = s.n();
    JacobiEndomorphism j;
    j.R = expr_mat(n, n);
    for (int i = 1; i <= n; ++i)
        for (int jj = 1; jj <= n; ++jj) {
            std::vector<Expr> parts{mul(Expr::integer(2), diff_x(s.G(i), jj))};
            for (int k = 1; k <= n; ++k) parts.push_back(neg(mul(diff_y(s.G(i), k), diff_y(s.G(k), jj))));
            parts.push_back(neg(s.apply(diff_y(s.G(i), jj))));
            j.R[i - 1][jj - 1] = add(std::move(parts));
        }
    return j;
}

Tensor11 phi_tensor(const Semispray& s) {
    AdaptedFrame af(s);
    JacobiEndomorphism je = jacobi_endomorphism(s);
    int n = s.n();
    ExprMat pm = expr_mat(af.dim(), af.dim());
    for (int j = 1; j <= n; ++j)
        for (int i = 1; i <= n; ++i) pm[n + j][i] = je.R[j - 1][i - 1];
    return af.tensor_from_adapted(pm);
}

CurvatureData curvature(const Semispray& s) {
    int n = s.n();
    ConnectionData c = connection_coeffs(s);
    CurvatureData out;
    out.R = jacobi_endomorphism(s).R;
    out.R3.assign(n, expr_mat(n, n));
    for (int k = 1; k <= n; ++k)
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j)
                out.R3[k - 1][i - 1][j - 1] =
                    sub(s.delta_x(c.N[k - 1][i - 1], j), s.delta_x(c.N[k - 1][j - 1], i));
    return out;
}

VectorValued2Form curvature_form(const Semispray& s) {
    AdaptedFrame af(s);
    CurvatureData c = curvature(s);
    int n = s.n();
    VectorValued2Form out(n);
    Expr half = Expr::constant(Rational(1, 2));
    for (int k = 1; k <= n; ++k) {
        KForm comp(n, 2);
        for (int i = 1; i <= n; ++i) {
            for (int j = 1; j <= n; ++j) {
                Expr cij = mul(half, c.R3[k - 1][i - 1][j - 1]);
                if (!cij.is_zero()) comp = kf_add(comp, kf_scale(cij, wedge(af.cobasis(i), af.cobasis(j))));
            }
            Expr rki = c.R[k - 1][i - 1];
            if (!rki.is_zero()) comp = kf_add(comp, kf_scale(rki, wedge(af.cobasis(0), af.cobasis(i))));
        }
        out.component(n + k) = comp;
    }
    return out;
}

Tensor11 psi_tensor(const Semispray& s) {
    AdaptedFrame af(s);
    JacobiEndomorphism je = jacobi_endomorphism(s);
    int n = s.n();
    ExprMat pm = expr_mat(af.dim(), af.dim());
    for (int i = 1; i <= n; ++i) {
        pm[i][n + i] = Expr::integer(1);
        for (int j = 1; j <= n; ++j) pm[n + j][i] = neg(je.R[j - 1][i - 1]);
    }
    return af.tensor_from_adapted(pm);
}

Expr nabla_scalar(const Semispray& s, const Expr& f) { return s.apply(f); }

std::vector<Expr> nabla_vector(const Semispray& s, const std::vector<Expr>& upper) {
    int n = s.n();
    ConnectionData c = connection_coeffs(s);
    std::vector<Expr> out(n);
    for (int i = 0; i < n; ++i) {
        std::vector<Expr> parts{s.apply(upper[i])};
        for (int k = 0; k < n; ++k) parts.push_back(mul(c.N[i][k], upper[k]));
        out[i] = add(std::move(parts));
    }
    return out;
}

std::vector<Expr> nabla_covector(const Semispray& s, const std::vector<Expr>& lower) {
    int n = s.n();
    ConnectionData c = connection_coeffs(s);
    std::vector<Expr> out(n);
    for (int i = 0; i < n; ++i) {
        std::vector<Expr> parts{s.apply(lower[i])};
        for (int k = 0; k < n; ++k) parts.push_back(neg(mul(c.N[k][i], lower[k])));
        out[i] = add(std::move(parts));
    }
    return out;
}

ExprMat nabla_t11(const Semispray& s, const ExprMat& m) {
    int n = s.n();
    ConnectionData c = connection_coeffs(s);
    ExprMat out = expr_mat(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::vector<Expr> parts{s.apply(m[i][j])};
            for (int k = 0; k < n; ++k) {
                parts.push_back(mul(c.N[i][k], m[k][j]));
                parts.push_back(neg(mul(c.N[k][j], m[i][k])));
            }
            out[i][j] = add(std::move(parts));
        }
    return out;
}

ExprMat nabla_t02(const Semispray& s, const ExprMat& m) {
    int n = s.n();
    ConnectionData c = connection_coeffs(s);
    ExprMat out = expr_mat(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::vector<Expr> parts{s.apply(m[i][j])};
            for (int k = 0; k < n; ++k) {
                parts.push_back(neg(mul(c.N[k][i], m[k][j])));
                parts.push_back(neg(mul(c.N[k][j], m[i][k])));
            }
            out[i][j] = add(std::move(parts));
        }
    return out;
}

KForm nabla_form(const Semispray& s, const KForm& omega) {
    return nabla_form(s, psi_tensor(s), omega);
}

KForm nabla_form(const Semispray& s, const Tensor11& psi, const KForm& omega) {
    VectorField sf = s.vector_field();
    if (omega.degree() == 0) return KForm::scalar(s.n(), sf.apply(omega.scalar_value()));
    return kf_sub(lie_form(sf, omega), interior_t11(psi, omega));
}

}  // namespace jetlag
