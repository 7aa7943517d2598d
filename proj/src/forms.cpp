#include "jetlag/forms.hpp"

#include <algorithm>
#include <functional>

namespace jetlag {

Expr coord_diff(const Expr& e, int a, int n) {
    if (a == 0) return diff_t(e);
    if (a <= n) return diff_x(e, a);
    return diff_y(e, a - n);
}

VectorField::VectorField(int n, std::vector<Expr> comps) : n_(n), comps_(std::move(comps)) {
    if (comps_.size() != static_cast<size_t>(2 * n + 1)) throw CalcError("VectorField: wrong component count");
}

Expr VectorField::apply(const Expr& f) const {
    std::vector<Expr> parts;
    for (int a = 0; a < dim(); ++a) {
        if (comps_[a].is_zero()) continue;
        parts.push_back(mul(comps_[a], coord_diff(f, a, n_)));
    }
    return add(std::move(parts));
}

VectorField VectorField::frame(int n, int a) {
    VectorField v(n);
    v[a] = Expr::integer(1);
    return v;
}

VectorField vf_add(const VectorField& a, const VectorField& b) {
    VectorField out(a.n());
    for (int i = 0; i < a.dim(); ++i) out[i] = add(a[i], b[i]);
    return out;
}

VectorField vf_sub(const VectorField& a, const VectorField& b) {
    VectorField out(a.n());
    for (int i = 0; i < a.dim(); ++i) out[i] = sub(a[i], b[i]);
    return out;
}

VectorField vf_scale(const Expr& c, const VectorField& a) {
    VectorField out(a.n());
    for (int i = 0; i < a.dim(); ++i) out[i] = mul(c, a[i]);
    return out;
}

VectorField vf_bracket(const VectorField& x, const VectorField& y) {
    VectorField out(x.n());
    for (int i = 0; i < x.dim(); ++i) out[i] = sub(x.apply(y[i]), y.apply(x[i]));
    return out;
}

namespace {

// Sorts idx in place, returns the permutation sign, or 0 on a repeated index.
int sort_sign(std::vector<int>& idx) {
    int sign = 1;
    for (size_t i = 1; i < idx.size(); ++i)
        for (size_t j = i; j > 0 && idx[j] < idx[j - 1]; --j) {
            std::swap(idx[j], idx[j - 1]);
            sign = -sign;
        }
    for (size_t i = 1; i < idx.size(); ++i)
        if (idx[i] == idx[i - 1]) return 0;
    return sign;
}

// All strictly increasing index tuples of length k in [0, dim).
void for_each_tuple(int dim, int k, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> idx(k);
    std::function<void(int, int)> rec = [&](int pos, int start) {
        if (pos == k) {
            fn(idx);
            return;
        }
        for (int v = start; v < dim; ++v) {
            idx[pos] = v;
            rec(pos + 1, v + 1);
        }
    };
    rec(0, 0);
}

Expr small_det(const std::vector<std::vector<Expr>>& m) {
    size_t k = m.size();
    if (k == 1) return m[0][0];
    if (k == 2) return sub(mul(m[0][0], m[1][1]), mul(m[0][1], m[1][0]));
    return add({mul({m[0][0], m[1][1], m[2][2]}), mul({m[0][1], m[1][2], m[2][0]}),
                mul({m[0][2], m[1][0], m[2][1]}), neg(mul({m[0][2], m[1][1], m[2][0]})),
                neg(mul({m[0][0], m[1][2], m[2][1]})), neg(mul({m[0][1], m[1][0], m[2][2]}))});
}

}  // namespace

KForm::KForm(int n, int degree) : n_(n), degree_(degree) {
    if (degree < 0 || degree > 3) throw CalcError("KForm: degree must be in 0..3");
}

KForm KForm::scalar(int n, Expr value) {
    KForm f(n, 0);
    f.add_term({}, value);
    return f;
}

KForm KForm::cobasis(int n, int a) {
    KForm f(n, 1);
    f.add_term({a}, Expr::integer(1));
    return f;
}

void KForm::add_term(std::vector<int> idx, const Expr& c) {
    if (static_cast<int>(idx.size()) != degree_) throw CalcError("KForm::add_term: index arity mismatch");
    if (c.is_zero()) return;
    for (int v : idx)
        if (v < 0 || v >= dim()) throw CalcError("KForm::add_term: frame index out of range");
    int sign = sort_sign(idx);
    if (sign == 0) return;
    Expr val = sign == 1 ? c : neg(c);
    auto it = coef_.find(idx);
    if (it == coef_.end()) {
        coef_.emplace(std::move(idx), std::move(val));
    } else {
        it->second = add(it->second, val);
        if (it->second.is_zero()) coef_.erase(it);
    }
}

Expr KForm::get(std::vector<int> idx) const {
    int sign = sort_sign(idx);
    if (sign == 0) return Expr();
    auto it = coef_.find(idx);
    if (it == coef_.end()) return Expr();
    return sign == 1 ? it->second : neg(it->second);
}

Expr KForm::scalar_value() const {
    if (degree_ != 0) throw CalcError("KForm::scalar_value: not a 0-form");
    auto it = coef_.find({});
    return it == coef_.end() ? Expr() : it->second;
}

Expr KForm::operator()(const std::vector<VectorField>& args) const {
    if (static_cast<int>(args.size()) != degree_) throw CalcError("KForm: argument count mismatch");
    if (degree_ == 0) return scalar_value();
    std::vector<Expr> parts;
    for (const auto& [idx, c] : coef_) {
        std::vector<std::vector<Expr>> m(degree_, std::vector<Expr>(degree_));
        for (int r = 0; r < degree_; ++r)
            for (int col = 0; col < degree_; ++col) m[r][col] = args[col][idx[r]];
        parts.push_back(mul(c, small_det(m)));
    }
    return add(std::move(parts));
}

KForm kf_add(const KForm& a, const KForm& b) {
    if (a.degree() != b.degree() || a.n() != b.n()) throw CalcError("kf_add: shape mismatch");
    KForm out = a;
    for (const auto& [idx, c] : b.coefficients()) out.add_term(idx, c);
    return out;
}

KForm kf_sub(const KForm& a, const KForm& b) {
    if (a.degree() != b.degree() || a.n() != b.n()) throw CalcError("kf_sub: shape mismatch");
    KForm out = a;
    for (const auto& [idx, c] : b.coefficients()) out.add_term(idx, neg(c));
    return out;
}

KForm kf_scale(const Expr& c, const KForm& a) {
    KForm out(a.n(), a.degree());
    for (const auto& [idx, v] : a.coefficients()) out.add_term(idx, mul(c, v));
    return out;
}

KForm wedge(const KForm& a, const KForm& b) {
    int deg = a.degree() + b.degree();
    if (deg > 3) throw CalcError("wedge: degree overflow");
    KForm out(a.n(), deg);
    for (const auto& [ia, ca] : a.coefficients())
        for (const auto& [ib, cb] : b.coefficients()) {
            std::vector<int> idx = ia;
            idx.insert(idx.end(), ib.begin(), ib.end());
            out.add_term(std::move(idx), mul(ca, cb));
        }
    return out;
}

Tensor11 Tensor11::identity(int n) {
    Tensor11 t(n);
    for (int a = 0; a < t.dim(); ++a) t.at(a, a) = Expr::integer(1);
    return t;
}

Tensor11 Tensor11::outer(const VectorField& x, const KForm& omega) {
    if (omega.degree() != 1) throw CalcError("Tensor11::outer: need a 1-form");
    Tensor11 t(x.n());
    for (int out = 0; out < t.dim(); ++out)
        for (int in = 0; in < t.dim(); ++in) t.at(out, in) = mul(x[out], omega.get({in}));
    return t;
}

VectorField Tensor11::apply(const VectorField& x) const {
    VectorField out(n_);
    for (int i = 0; i < dim(); ++i) {
        std::vector<Expr> parts;
        for (int j = 0; j < dim(); ++j) parts.push_back(mul(mat_[i][j], x[j]));
        out[i] = add(std::move(parts));
    }
    return out;
}

VectorField Tensor11::column(int in) const {
    VectorField out(n_);
    for (int i = 0; i < dim(); ++i) out[i] = mat_[i][in];
    return out;
}

bool Tensor11::structurally_zero() const {
    for (int i = 0; i < dim(); ++i)
        for (int j = 0; j < dim(); ++j)
            if (!mat_[i][j].is_zero()) return false;
    return true;
}

Tensor11 t11_add(const Tensor11& a, const Tensor11& b) {
    Tensor11 out(a.n());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) out.at(i, j) = add(a.at(i, j), b.at(i, j));
    return out;
}

Tensor11 t11_sub(const Tensor11& a, const Tensor11& b) {
    Tensor11 out(a.n());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) out.at(i, j) = sub(a.at(i, j), b.at(i, j));
    return out;
}

Tensor11 t11_scale(const Expr& c, const Tensor11& a) {
    Tensor11 out(a.n());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) out.at(i, j) = mul(c, a.at(i, j));
    return out;
}

Tensor11 t11_compose(const Tensor11& a, const Tensor11& b) {
    Tensor11 out(a.n());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) {
            std::vector<Expr> parts;
            for (int k = 0; k < a.dim(); ++k) parts.push_back(mul(a.at(i, k), b.at(k, j)));
            out.at(i, j) = add(std::move(parts));
        }
    return out;
}

bool VectorValued2Form::structurally_zero() const {
    for (const KForm& c : comps_)
        if (!c.structurally_zero()) return false;
    return true;
}

VectorValued2Form vv2_add(const VectorValued2Form& a, const VectorValued2Form& b) {
    VectorValued2Form out(a.n());
    for (int i = 0; i < a.dim(); ++i) out.component(i) = kf_add(a.component(i), b.component(i));
    return out;
}

VectorValued2Form vv2_sub(const VectorValued2Form& a, const VectorValued2Form& b) {
    VectorValued2Form out(a.n());
    for (int i = 0; i < a.dim(); ++i) out.component(i) = kf_sub(a.component(i), b.component(i));
    return out;
}

VectorValued2Form vv2_scale(const Expr& c, const VectorValued2Form& a) {
    VectorValued2Form out(a.n());
    for (int i = 0; i < a.dim(); ++i) out.component(i) = kf_scale(c, a.component(i));
    return out;
}

KForm exterior_d(const KForm& omega) {
    if (omega.degree() >= 3) throw CalcError("exterior_d: degree overflow");
    KForm out(omega.n(), omega.degree() + 1);
    for (const auto& [idx, c] : omega.coefficients()) {
        for (int a = 0; a < omega.dim(); ++a) {
            Expr dc = coord_diff(c, a, omega.n());
            if (dc.is_zero()) continue;
            std::vector<int> nidx;
            nidx.push_back(a);
            nidx.insert(nidx.end(), idx.begin(), idx.end());
            out.add_term(std::move(nidx), dc);
        }
    }
    return out;
}

KForm interior_vf(const VectorField& x, const KForm& omega) {
    if (omega.degree() < 1) throw CalcError("interior_vf: cannot contract a 0-form");
    KForm out(omega.n(), omega.degree() - 1);
    for_each_tuple(omega.dim(), omega.degree() - 1, [&](const std::vector<int>& j) {
        std::vector<Expr> parts;
        for (int a = 0; a < omega.dim(); ++a) {
            if (x[a].is_zero()) continue;
            std::vector<int> full;
            full.push_back(a);
            full.insert(full.end(), j.begin(), j.end());
            Expr w = omega.get(std::move(full));
            if (w.is_zero()) continue;
            parts.push_back(mul(x[a], w));
        }
        out.add_term(j, add(std::move(parts)));
    });
    return out;
}

KForm interior_t11(const Tensor11& a, const KForm& omega) {
    int k = omega.degree();
    KForm out(omega.n(), k);
    if (k == 0) return out;
    for_each_tuple(omega.dim(), k, [&](const std::vector<int>& j) {
        std::vector<Expr> parts;
        for (int m = 0; m < k; ++m) {
            for (int s = 0; s < omega.dim(); ++s) {
                const Expr& amj = a.at(s, j[m]);
                if (amj.is_zero()) continue;
                std::vector<int> idx = j;
                idx[m] = s;
                Expr w = omega.get(std::move(idx));
                if (w.is_zero()) continue;
                parts.push_back(mul(amj, w));
            }
        }
        out.add_term(j, add(std::move(parts)));
    });
    return out;
}

KForm interior_vv2(const VectorValued2Form& a, const KForm& omega) {
    int k = omega.degree();
    if (k != 1 && k != 2) throw CalcError("interior_vv2: defined for 1- and 2-forms only");
    KForm out(omega.n(), k + 1);
    if (k == 1) {
        // (i_A omega)(X,Y) = omega(A(X,Y))
        for_each_tuple(omega.dim(), 2, [&](const std::vector<int>& j) {
            std::vector<Expr> parts;
            for (int s = 0; s < omega.dim(); ++s) {
                Expr w = omega.get({s});
                if (w.is_zero()) continue;
                parts.push_back(mul(a.component(s).get(j), w));
            }
            out.add_term(j, add(std::move(parts)));
        });
        return out;
    }
    // (i_A omega)(X,Y,Z) = omega(A(X,Y),Z) - omega(A(X,Z),Y) + omega(A(Y,Z),X)
    for_each_tuple(omega.dim(), 3, [&](const std::vector<int>& j) {
        std::vector<Expr> parts;
        const int pick[3][3] = {{0, 1, 2}, {0, 2, 1}, {1, 2, 0}};
        const int signs[3] = {1, -1, 1};
        for (int p = 0; p < 3; ++p) {
            for (int s = 0; s < omega.dim(); ++s) {
                Expr ac = a.component(s).get({j[pick[p][0]], j[pick[p][1]]});
                if (ac.is_zero()) continue;
                Expr w = omega.get({s, j[pick[p][2]]});
                if (w.is_zero()) continue;
                Expr term = mul(ac, w);
                parts.push_back(signs[p] == 1 ? term : neg(term));
            }
        }
        out.add_term(j, add(std::move(parts)));
    });
    return out;
}

KForm d_t11(const Tensor11& a, const KForm& omega) {
    if (omega.degree() >= 3) throw CalcError("d_t11: degree overflow");
    return kf_sub(interior_t11(a, exterior_d(omega)), exterior_d(interior_t11(a, omega)));
}

KForm d_vv2(const VectorValued2Form& a, const KForm& omega) {
    if (omega.degree() > 1) throw CalcError("d_vv2: defined for 0- and 1-forms only");
    KForm first = interior_vv2(a, exterior_d(omega));
    if (omega.degree() == 0) return first;  // i_A of a 0-form vanishes
    return kf_add(first, exterior_d(interior_vv2(a, omega)));
}

KForm lie_form(const VectorField& x, const KForm& omega) {
    if (omega.degree() == 0) return KForm::scalar(omega.n(), x.apply(omega.scalar_value()));
    return kf_add(interior_vf(x, exterior_d(omega)), exterior_d(interior_vf(x, omega)));
}

Tensor11 lie_t11(const VectorField& x, const Tensor11& a) {
    Tensor11 out(a.n());
    for (int j = 0; j < a.dim(); ++j) {
        // column j of L_X A is [X, A e_j] - A([X, e_j]); here [X, e_j] = -d_j X.
        VectorField dxj(a.n());
        for (int i = 0; i < a.dim(); ++i) dxj[i] = coord_diff(x[i], j, a.n());
        VectorField col = vf_add(vf_bracket(x, a.column(j)), a.apply(dxj));
        for (int i = 0; i < a.dim(); ++i) out.at(i, j) = col[i];
    }
    return out;
}

VectorValued2Form fn_bracket_t11(const Tensor11& a, const Tensor11& b) {
    int n = a.n();
    VectorValued2Form out(n);
    for (int p = 0; p < a.dim(); ++p) {
        for (int q = p + 1; q < a.dim(); ++q) {
            // value on the coordinate pair (e_p, e_q), whose own bracket vanishes
            VectorField val = vf_add(vf_bracket(a.column(p), b.column(q)), vf_bracket(b.column(p), a.column(q)));
            VectorField dbq_p(n), dbp_q(n), daq_p(n), dap_q(n);
            for (int i = 0; i < a.dim(); ++i) {
                dbq_p[i] = coord_diff(b.at(i, q), p, n);  // [e_p, B e_q]
                dbp_q[i] = coord_diff(b.at(i, p), q, n);  // [e_q, B e_p]
                daq_p[i] = coord_diff(a.at(i, q), p, n);
                dap_q[i] = coord_diff(a.at(i, p), q, n);
            }
            val = vf_sub(val, a.apply(vf_sub(dbq_p, dbp_q)));
            val = vf_sub(val, b.apply(vf_sub(daq_p, dap_q)));
            for (int i = 0; i < a.dim(); ++i) out.component(i).add_term({p, q}, val[i]);
        }
    }
    return out;
}

VectorValued2Form nijenhuis(const Tensor11& a) {
    return vv2_scale(Expr::constant(Rational(1, 2)), fn_bracket_t11(a, a));
}

VectorValued2Form vv1_wedge_dt(const Tensor11& a) {
    VectorValued2Form out(a.n());
    // dt is the coordinate cobasis element with index 0
    for (int i = 0; i < a.dim(); ++i)
        for (int p = 0; p < a.dim(); ++p) out.component(i).add_term({p, 0}, a.at(i, p));
    return out;
}

Tensor11 interior_vf_vv2(const VectorField& x, const VectorValued2Form& r) {
    Tensor11 out(r.n());
    for (int i = 0; i < r.dim(); ++i) {
        KForm row = interior_vf(x, r.component(i));
        for (int j = 0; j < r.dim(); ++j) out.at(i, j) = row.get({j});
    }
    return out;
}

KForm a_star(const Tensor11& a, const KForm& omega) {
    int k = omega.degree();
    if (k == 0) return omega;
    KForm out(omega.n(), k);
    for_each_tuple(omega.dim(), k, [&](const std::vector<int>& j) {
        std::vector<Expr> parts;
        for (const auto& [idx, c] : omega.coefficients()) {
            std::vector<std::vector<Expr>> m(k, std::vector<Expr>(k));
            for (int r = 0; r < k; ++r)
                for (int col = 0; col < k; ++col) m[r][col] = a.at(idx[r], j[col]);
            parts.push_back(mul(c, small_det(m)));
        }
        out.add_term(j, add(std::move(parts)));
    });
    return out;
}

}  // namespace jetlag
