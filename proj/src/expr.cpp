#include "jetlag/expr.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <utility>

namespace jetlag {

namespace {

std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

std::uint64_t node_hash(const ExprNode& n) {
    std::uint64_t h = static_cast<std::uint64_t>(n.kind) * 0x100000001b3ull;
    switch (n.kind) {
        case ExprKind::Constant:
            h = hash_combine(h, rat_hash(n.value));
            break;
        case ExprKind::Variable:
            h = hash_combine(h, static_cast<std::uint64_t>(n.var_kind) * 131 + n.var_index);
            break;
        case ExprKind::Function:
            h = hash_combine(h, static_cast<std::uint64_t>(n.func) + 977);
            h = hash_combine(h, n.kids[0].hash());
            break;
        case ExprKind::Power:
            h = hash_combine(h, rat_hash(n.value));
            h = hash_combine(h, n.kids[0].hash());
            break;
        case ExprKind::Product:
        case ExprKind::Sum:
            for (const Expr& k : n.kids) h = hash_combine(h, k.hash());
            break;
    }
    return h;
}

}  // namespace

class ExprBuilder {
  public:
    static Expr make(ExprNode n) {
        n.hash = node_hash(n);
        return Expr(std::make_shared<const ExprNode>(std::move(n)));
    }
};

namespace {

Expr make_node(ExprNode n) { return ExprBuilder::make(std::move(n)); }

Expr make_constant(Rational v) {
    ExprNode n;
    n.kind = ExprKind::Constant;
    n.value = std::move(v);
    return make_node(std::move(n));
}

const Expr& zero_expr() {
    static const Expr z = make_constant(Rational(0));
    return z;
}
const Expr& one_expr() {
    static const Expr o = make_constant(Rational(1));
    return o;
}

// Raw power node; caller guarantees canonical base/exponent combination.
Expr make_power_node(Expr base, Rational e) {
    ExprNode n;
    n.kind = ExprKind::Power;
    n.value = std::move(e);
    n.kids.push_back(std::move(base));
    return make_node(std::move(n));
}

int rat_compare(const Rational& a, const Rational& b) {
    if (a < b) return -1;
    if (b < a) return 1;
    return 0;
}

int kind_rank(ExprKind k) {
    switch (k) {
        case ExprKind::Constant: return 0;
        case ExprKind::Variable: return 1;
        case ExprKind::Function: return 2;
        case ExprKind::Power: return 3;
        case ExprKind::Product: return 4;
        case ExprKind::Sum: return 5;
    }
    return 6;
}

// One multiplicative atom: base^exponent with base never a plain constant
// that folds, and never a sum raised to a positive integer power.
struct Atom {
    Expr base;
    Rational exp;
};

// coeff * product of atoms; atoms sorted by base, bases pairwise distinct.
struct Term {
    Rational coeff;
    std::vector<Atom> atoms;
};

using TermList = std::vector<Term>;

int compare_atom_lists(const std::vector<Atom>& a, const std::vector<Atom>& b) {
    size_t m = std::min(a.size(), b.size());
    for (size_t i = 0; i < m; ++i) {
        int c = Expr::compare(a[i].base, b[i].base);
        if (c != 0) return c;
        c = rat_compare(a[i].exp, b[i].exp);
        if (c != 0) return c;
    }
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}

TermList decompose(const Expr& e);
TermList mul_term_lists(const TermList& a, const TermList& b);
TermList mul_by_atom(TermList ts, const Expr& base, const Rational& exp);
Expr collect(TermList terms);

TermList decompose(const Expr& e) {
    const ExprNode& n = e.node();
    switch (n.kind) {
        case ExprKind::Constant:
            if (n.value == 0) return {};
            return {Term{n.value, {}}};
        case ExprKind::Sum: {
            TermList out;
            for (const Expr& k : n.kids) {
                TermList sub = decompose(k);
                out.insert(out.end(), sub.begin(), sub.end());
            }
            return out;
        }
        case ExprKind::Product: {
            Term t{Rational(1), {}};
            for (const Expr& k : n.kids) {
                if (k.is_constant()) {
                    t.coeff *= k.constant_value();
                } else if (k.kind() == ExprKind::Power) {
                    t.atoms.push_back(Atom{k.node().kids[0], k.node().value});
                } else {
                    t.atoms.push_back(Atom{k, Rational(1)});
                }
            }
            return {std::move(t)};
        }
        case ExprKind::Power:
            return {Term{Rational(1), {Atom{n.kids[0], n.value}}}};
        default:
            return {Term{Rational(1), {Atom{e, Rational(1)}}}};
    }
}

// Multiplies every term of ts by base^exp, restoring atom invariants
// (folding constants, distributing integer powers of products, expanding
// integer powers of sums that surface through exponent merging).
TermList mul_by_atom(TermList ts, const Expr& base, const Rational& exp) {
    if (exp == 0 || ts.empty()) return ts;
    const ExprNode& bn = base.node();

    if (bn.kind == ExprKind::Constant) {
        if (auto folded = rat_pow_exact(bn.value, exp)) {
            for (Term& t : ts) t.coeff *= *folded;
            return ts;
        }
        // falls through: kept as a symbolic power of a constant
    } else if (bn.kind == ExprKind::Power) {
        if (is_integer(exp)) return mul_by_atom(std::move(ts), bn.kids[0], bn.value * exp);
    } else if (bn.kind == ExprKind::Product) {
        if (is_integer(exp)) {
            for (const Expr& k : bn.kids) {
                if (k.is_constant()) {
                    Rational c = rat_pow_int(k.constant_value(), rat_num(exp));
                    for (Term& t : ts) t.coeff *= c;
                } else if (k.kind() == ExprKind::Power) {
                    ts = mul_by_atom(std::move(ts), k.node().kids[0], k.node().value * exp);
                } else {
                    ts = mul_by_atom(std::move(ts), k, exp);
                }
            }
            return ts;
        }
    } else if (bn.kind == ExprKind::Sum) {
        if (is_integer(exp) && exp > 0) {
            TermList b = decompose(base);
            TermList p = b;
            for (Rational k(1); k < exp; k += 1) p = mul_term_lists(p, b);
            return mul_term_lists(ts, p);
        }
    }

    // Insert as a plain atom, merging with an existing equal base.
    TermList out;
    out.reserve(ts.size());
    for (Term& t : ts) {
        auto it = std::lower_bound(t.atoms.begin(), t.atoms.end(), base,
                                   [](const Atom& a, const Expr& b) { return Expr::compare(a.base, b) < 0; });
        if (it != t.atoms.end() && Expr::compare(it->base, base) == 0) {
            Rational merged = it->exp + exp;
            Expr b = it->base;
            t.atoms.erase(it);
            if (merged != 0) {
                TermList sub = mul_by_atom({std::move(t)}, b, merged);
                out.insert(out.end(), sub.begin(), sub.end());
                continue;
            }
        } else {
            t.atoms.insert(it, Atom{base, exp});
        }
        out.push_back(std::move(t));
    }
    return out;
}

TermList mul_term_pair(const Term& a, const Term& b) {
    TermList out{Term{a.coeff * b.coeff, a.atoms}};
    for (const Atom& at : b.atoms) out = mul_by_atom(std::move(out), at.base, at.exp);
    return out;
}

TermList mul_term_lists(const TermList& a, const TermList& b) {
    TermList out;
    for (const Term& ta : a)
        for (const Term& tb : b) {
            TermList p = mul_term_pair(ta, tb);
            out.insert(out.end(), p.begin(), p.end());
        }
    return out;
}

Expr build_term(const Term& t) {
    if (t.coeff == 0) return zero_expr();
    std::vector<Expr> kids;
    for (const Atom& a : t.atoms) {
        if (a.exp == 1)
            kids.push_back(a.base);
        else
            kids.push_back(make_power_node(a.base, a.exp));
    }
    if (kids.empty()) return make_constant(t.coeff);
    if (t.coeff == 1 && kids.size() == 1) return kids[0];
    if (t.coeff != 1) kids.insert(kids.begin(), make_constant(t.coeff));
    if (kids.size() == 1) return kids[0];
    ExprNode n;
    n.kind = ExprKind::Product;
    n.kids = std::move(kids);
    return make_node(std::move(n));
}

Expr collect(TermList terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return compare_atom_lists(a.atoms, b.atoms) < 0; });
    TermList merged;
    for (Term& t : terms) {
        if (!merged.empty() && compare_atom_lists(merged.back().atoms, t.atoms) == 0)
            merged.back().coeff += t.coeff;
        else
            merged.push_back(std::move(t));
    }
    std::vector<Expr> kids;
    for (const Term& t : merged)
        if (t.coeff != 0) kids.push_back(build_term(t));
    if (kids.empty()) return zero_expr();
    if (kids.size() == 1) return kids[0];
    ExprNode n;
    n.kind = ExprKind::Sum;
    n.kids = std::move(kids);
    return make_node(std::move(n));
}

// Rational content (and sign of the leading term) of a canonical sum,
// used to normalize bases of symbolic integer powers of sums.
Rational sum_content(const Expr& sum) {
    BigInt gnum = 0, lden = 1;
    for (const Expr& kid : sum.node().kids) {
        Rational c(1);
        if (kid.is_constant())
            c = kid.constant_value();
        else if (kid.kind() == ExprKind::Product && kid.node().kids[0].is_constant())
            c = kid.node().kids[0].constant_value();
        gnum = boost::multiprecision::gcd(gnum, boost::multiprecision::abs(rat_num(c)));
        lden = lden / boost::multiprecision::gcd(lden, rat_den(c)) * rat_den(c);
    }
    if (gnum == 0) gnum = 1;
    Rational content(gnum, lden);
    const Expr& first = sum.node().kids[0];
    Rational lead(1);
    if (first.is_constant())
        lead = first.constant_value();
    else if (first.kind() == ExprKind::Product && first.node().kids[0].is_constant())
        lead = first.node().kids[0].constant_value();
    if (lead < 0) content = -content;
    return content;
}

}  // namespace

Expr::Expr() : node_(zero_expr().node_) {}

Expr Expr::constant(Rational v) { return make_constant(std::move(v)); }

Expr Expr::variable(VarKind k, int i) {
    ExprNode n;
    n.kind = ExprKind::Variable;
    n.var_kind = k;
    n.var_index = k == VarKind::T ? 0 : i;
    return make_node(std::move(n));
}

Expr Expr::t() { return variable(VarKind::T, 0); }
Expr Expr::x(int i) { return variable(VarKind::X, i); }
Expr Expr::y(int i) { return variable(VarKind::Y, i); }

const Rational& Expr::constant_value() const {
    assert(is_constant());
    return node_->value;
}

bool Expr::structural_equal(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    if (a.node_->hash != b.node_->hash) return false;
    return compare(a, b) == 0;
}

int Expr::compare(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return 0;
    const ExprNode& na = *a.node_;
    const ExprNode& nb = *b.node_;
    int ra = kind_rank(na.kind), rb = kind_rank(nb.kind);
    if (ra != rb) return ra < rb ? -1 : 1;
    switch (na.kind) {
        case ExprKind::Constant:
            return rat_compare(na.value, nb.value);
        case ExprKind::Variable: {
            int ka = static_cast<int>(na.var_kind), kb = static_cast<int>(nb.var_kind);
            if (ka != kb) return ka < kb ? -1 : 1;
            if (na.var_index != nb.var_index) return na.var_index < nb.var_index ? -1 : 1;
            return 0;
        }
        case ExprKind::Function: {
            int fa = static_cast<int>(na.func), fb = static_cast<int>(nb.func);
            if (fa != fb) return fa < fb ? -1 : 1;
            return compare(na.kids[0], nb.kids[0]);
        }
        case ExprKind::Power: {
            int c = compare(na.kids[0], nb.kids[0]);
            if (c != 0) return c;
            return rat_compare(na.value, nb.value);
        }
        case ExprKind::Product:
        case ExprKind::Sum: {
            size_t m = std::min(na.kids.size(), nb.kids.size());
            for (size_t i = 0; i < m; ++i) {
                int c = compare(na.kids[i], nb.kids[i]);
                if (c != 0) return c;
            }
            if (na.kids.size() != nb.kids.size()) return na.kids.size() < nb.kids.size() ? -1 : 1;
            return 0;
        }
    }
    return 0;
}

int Expr::max_var_index() const {
    const ExprNode& n = *node_;
    int m = n.kind == ExprKind::Variable ? n.var_index : 0;
    for (const Expr& k : n.kids) m = std::max(m, k.max_var_index());
    return m;
}

bool Expr::depends_on(VarKind k, int index) const {
    const ExprNode& n = *node_;
    if (n.kind == ExprKind::Variable)
        return n.var_kind == k && (k == VarKind::T || index == 0 || n.var_index == index);
    for (const Expr& kid : n.kids)
        if (kid.depends_on(k, index)) return true;
    return false;
}

Expr add(std::vector<Expr> terms) {
    TermList all;
    for (const Expr& e : terms) {
        TermList sub = decompose(e);
        all.insert(all.end(), sub.begin(), sub.end());
    }
    return collect(std::move(all));
}

Expr add(const Expr& a, const Expr& b) { return add(std::vector<Expr>{a, b}); }

Expr neg(const Expr& a) { return mul(Expr::constant(Rational(-1)), a); }

Expr sub(const Expr& a, const Expr& b) { return add(a, neg(b)); }

Expr mul(std::vector<Expr> factors) {
    TermList acc{Term{Rational(1), {}}};
    for (const Expr& e : factors) {
        if (e.is_zero()) return zero_expr();
        acc = mul_term_lists(acc, decompose(e));
    }
    return collect(std::move(acc));
}

Expr mul(const Expr& a, const Expr& b) { return mul(std::vector<Expr>{a, b}); }

Expr pow(const Expr& base, const Rational& exponent) {
    if (exponent == 0) return one_expr();
    if (exponent == 1) return base;
    const ExprNode& n = base.node();
    switch (n.kind) {
        case ExprKind::Constant: {
            if (n.value == 0 && exponent < 0) throw std::domain_error("pow: zero base with negative exponent");
            if (auto folded = rat_pow_exact(n.value, exponent)) return make_constant(*folded);
            return make_power_node(base, exponent);
        }
        case ExprKind::Power:
            if (is_integer(exponent)) return pow(n.kids[0], n.value * exponent);
            return make_power_node(base, exponent);
        case ExprKind::Product:
            if (is_integer(exponent)) {
                TermList acc{Term{Rational(1), {}}};
                acc = mul_by_atom(std::move(acc), base, exponent);
                return collect(std::move(acc));
            }
            return make_power_node(base, exponent);
        case ExprKind::Sum: {
            if (is_integer(exponent)) {
                if (exponent > 0) {
                    TermList acc{Term{Rational(1), {}}};
                    return collect(mul_by_atom(std::move(acc), base, exponent));
                }
                // Negative integer power of a sum: keep symbolic, but pull out
                // the rational content so equal sums land on one base.
                Rational c = sum_content(base);
                if (c != 1) {
                    Expr reduced = mul(Expr::constant(Rational(1) / c), base);
                    Rational scale = rat_pow_int(c, rat_num(exponent));
                    return mul(Expr::constant(scale), make_power_node(reduced, exponent));
                }
            }
            return make_power_node(base, exponent);
        }
        default:
            return make_power_node(base, exponent);
    }
}

Expr div(const Expr& a, const Expr& b) {
    if (b.is_zero()) throw std::domain_error("div: division by the constant zero");
    return mul(a, pow(b, Rational(-1)));
}

Expr apply(Func f, const Expr& arg) {
    if (arg.is_constant()) {
        const Rational& v = arg.constant_value();
        if (v == 0) {
            if (f == Func::Sin) return zero_expr();
            if (f == Func::Cos || f == Func::Exp) return one_expr();
        }
        if (v == 1 && f == Func::Ln) return zero_expr();
    }
    ExprNode n;
    n.kind = ExprKind::Function;
    n.func = f;
    n.kids.push_back(arg);
    return make_node(std::move(n));
}

Expr sin(const Expr& a) { return apply(Func::Sin, a); }
Expr cos(const Expr& a) { return apply(Func::Cos, a); }
Expr exp(const Expr& a) { return apply(Func::Exp, a); }
Expr ln(const Expr& a) { return apply(Func::Ln, a); }
Expr sqrt(const Expr& a) { return pow(a, Rational(1, 2)); }

Expr diff(const Expr& e, VarKind k, int index) {
    const ExprNode& n = e.node();
    switch (n.kind) {
        case ExprKind::Constant:
            return zero_expr();
        case ExprKind::Variable:
            return (n.var_kind == k && (k == VarKind::T || n.var_index == index)) ? one_expr() : zero_expr();
        case ExprKind::Sum: {
            std::vector<Expr> parts;
            parts.reserve(n.kids.size());
            for (const Expr& kid : n.kids) parts.push_back(diff(kid, k, index));
            return add(std::move(parts));
        }
        case ExprKind::Product: {
            std::vector<Expr> parts;
            for (size_t i = 0; i < n.kids.size(); ++i) {
                Expr d = diff(n.kids[i], k, index);
                if (d.is_zero()) continue;
                std::vector<Expr> factors;
                factors.push_back(std::move(d));
                for (size_t j = 0; j < n.kids.size(); ++j)
                    if (j != i) factors.push_back(n.kids[j]);
                parts.push_back(mul(std::move(factors)));
            }
            return add(std::move(parts));
        }
        case ExprKind::Power: {
            Expr d = diff(n.kids[0], k, index);
            if (d.is_zero()) return zero_expr();
            return mul({Expr::constant(n.value), pow(n.kids[0], n.value - 1), d});
        }
        case ExprKind::Function: {
            Expr d = diff(n.kids[0], k, index);
            if (d.is_zero()) return zero_expr();
            const Expr& a = n.kids[0];
            switch (n.func) {
                case Func::Sin: return mul(cos(a), d);
                case Func::Cos: return neg(mul(sin(a), d));
                case Func::Exp: return mul(exp(a), d);
                case Func::Ln: return mul(pow(a, Rational(-1)), d);
            }
        }
    }
    return zero_expr();
}

Expr diff_t(const Expr& e) { return diff(e, VarKind::T, 0); }
Expr diff_x(const Expr& e, int i) { return diff(e, VarKind::X, i); }
Expr diff_y(const Expr& e, int i) { return diff(e, VarKind::Y, i); }

bool polynomial_in_y(const Expr& e) {
    const ExprNode& n = e.node();
    switch (n.kind) {
        case ExprKind::Constant:
        case ExprKind::Variable:
            return true;
        case ExprKind::Function:
            return !n.kids[0].depends_on(VarKind::Y, 0);
        case ExprKind::Power: {
            if (!n.kids[0].depends_on(VarKind::Y, 0)) return true;
            return is_integer(n.value) && n.value > 0 && polynomial_in_y(n.kids[0]);
        }
        case ExprKind::Sum:
        case ExprKind::Product:
            for (const Expr& kid : n.kids)
                if (!polynomial_in_y(kid)) return false;
            return true;
    }
    return false;
}

namespace {

std::vector<Expr> graded_parts(const Expr& e, bool count_all) {
    TermList terms = decompose(e);
    std::vector<TermList> buckets;
    for (Term& t : terms) {
        long deg = 0;
        for (const Atom& a : t.atoms)
            if (a.base.kind() == ExprKind::Variable &&
                (count_all || a.base.node().var_kind == VarKind::Y))
                deg += rat_num(a.exp).convert_to<long>();
        if (static_cast<size_t>(deg) >= buckets.size()) buckets.resize(deg + 1);
        buckets[deg].push_back(std::move(t));
    }
    std::vector<Expr> out;
    out.reserve(buckets.size());
    for (TermList& b : buckets) out.push_back(collect(std::move(b)));
    return out;
}

}  // namespace

std::vector<Expr> y_homogeneous_parts(const Expr& e) {
    if (!polynomial_in_y(e)) throw std::domain_error("y_homogeneous_parts: not polynomial in y");
    return graded_parts(e, false);
}

bool polynomial_all(const Expr& e) {
    const ExprNode& n = e.node();
    switch (n.kind) {
        case ExprKind::Constant:
        case ExprKind::Variable:
            return true;
        case ExprKind::Function:
            return false;
        case ExprKind::Power:
            return is_integer(n.value) && n.value > 0 && polynomial_all(n.kids[0]);
        case ExprKind::Sum:
        case ExprKind::Product:
            for (const Expr& kid : n.kids)
                if (!polynomial_all(kid)) return false;
            return true;
    }
    return false;
}

std::vector<Expr> homogeneous_parts_total(const Expr& e) {
    if (!polynomial_all(e)) throw std::domain_error("homogeneous_parts_total: not a polynomial");
    return graded_parts(e, true);
}

namespace {

// Precedence levels for printing: sum 1, product 2, unary minus 3, power 4.
void print_expr(std::ostream& os, const Expr& e, int parent_prec);

bool term_is_negative(const Expr& e) {
    if (e.is_constant()) return e.constant_value() < 0;
    if (e.kind() == ExprKind::Product && e.node().kids[0].is_constant())
        return e.node().kids[0].constant_value() < 0;
    return false;
}

void print_product(std::ostream& os, const Expr& e, int parent_prec) {
    const auto& kids = e.node().kids;
    size_t start = 0;
    std::string lead;
    bool neg_one = false;
    if (kids[0].is_constant()) {
        Rational c = kids[0].constant_value();
        start = 1;
        if (c == -1) {
            neg_one = true;
        } else {
            lead = rat_to_string(c);
        }
    }
    bool need_paren = parent_prec > 2 || (neg_one && parent_prec > 1);
    if (need_paren) os << "(";
    if (neg_one) os << "-";
    bool first = true;
    if (!lead.empty()) {
        os << lead;
        first = false;
    }
    for (size_t i = start; i < kids.size(); ++i) {
        if (!first) os << "*";
        print_expr(os, kids[i], 3);
        first = false;
    }
    if (need_paren) os << ")";
}

void print_expr(std::ostream& os, const Expr& e, int parent_prec) {
    const ExprNode& n = e.node();
    switch (n.kind) {
        case ExprKind::Constant: {
            bool neg = n.value < 0;
            bool paren = neg && parent_prec > 1;
            if (paren) os << "(";
            os << rat_to_string(n.value);
            if (paren) os << ")";
            break;
        }
        case ExprKind::Variable:
            if (n.var_kind == VarKind::T)
                os << "t";
            else
                os << (n.var_kind == VarKind::X ? "x" : "y") << n.var_index;
            break;
        case ExprKind::Function: {
            switch (n.func) {
                case Func::Sin: os << "sin"; break;
                case Func::Cos: os << "cos"; break;
                case Func::Exp: os << "exp"; break;
                case Func::Ln: os << "ln"; break;
            }
            os << "(";
            print_expr(os, n.kids[0], 0);
            os << ")";
            break;
        }
        case ExprKind::Power: {
            if (n.value == Rational(1, 2)) {
                os << "sqrt(";
                print_expr(os, n.kids[0], 0);
                os << ")";
                break;
            }
            print_expr(os, n.kids[0], 5);
            os << "^";
            if (is_integer(n.value) && n.value > 0)
                os << rat_to_string(n.value);
            else
                os << "(" << rat_to_string(n.value) << ")";
            break;
        }
        case ExprKind::Product:
            print_product(os, e, parent_prec);
            break;
        case ExprKind::Sum: {
            bool paren = parent_prec > 1;
            if (paren) os << "(";
            bool first = true;
            for (const Expr& kid : n.kids) {
                if (!first && term_is_negative(kid)) {
                    os << " - ";
                    print_expr(os, neg(kid), 2);
                } else {
                    if (!first) os << " + ";
                    print_expr(os, kid, 2);
                }
                first = false;
            }
            if (paren) os << ")";
            break;
        }
    }
}

}  // namespace

std::string Expr::str() const {
    std::ostringstream os;
    print_expr(os, *this, 0);
    return os.str();
}

}  // namespace jetlag
