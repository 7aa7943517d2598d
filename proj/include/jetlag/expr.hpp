#pragma once

#include "jetlag/rational.hpp"

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetlag {

// Symbolic expressions over the jet-bundle coordinates (t, x^1..x^n, y^1..y^n)
// with exact rational constants and the elementary functions sin, cos, exp, ln.
// Square roots are represented as rational powers. Every Expr is held in a
// canonical form: sums and products are flattened, expanded and sorted under a
// fixed structural order, like terms and like factors are combined, and
// rational constants are folded exactly. An Expr is zero iff it is the
// constant 0, which is what makes the symbolic zero test trustworthy.

enum class VarKind : std::uint8_t { T, X, Y };

enum class Func : std::uint8_t { Sin, Cos, Exp, Ln };

enum class ExprKind : std::uint8_t { Constant, Variable, Function, Power, Product, Sum };

class Expr;

struct ExprNode {
    ExprKind kind;
    // Constant value, or the exponent of a Power node.
    Rational value;
    VarKind var_kind = VarKind::T;
    int var_index = 0;  // 1-based for X/Y, 0 for T
    Func func = Func::Sin;
    // Function argument, Power base, Sum terms, Product factors.
    std::vector<Expr> kids;
    std::uint64_t hash = 0;
};

class Expr {
  public:
    Expr();  // the constant 0

    static Expr constant(Rational v);
    static Expr integer(long v) { return constant(Rational(v)); }
    static Expr t();
    static Expr x(int i);
    static Expr y(int i);
    static Expr variable(VarKind k, int i);

    ExprKind kind() const { return node_->kind; }
    const ExprNode& node() const { return *node_; }
    std::uint64_t hash() const { return node_->hash; }

    bool is_constant() const { return node_->kind == ExprKind::Constant; }
    bool is_zero() const { return is_constant() && node_->value == 0; }
    bool is_one() const { return is_constant() && node_->value == 1; }
    const Rational& constant_value() const;

    /// Largest X/Y index occurring anywhere in the tree (0 if none).
    int max_var_index() const;
    /// index 0 matches any index of that kind.
    bool depends_on(VarKind k, int index = 0) const;

    std::string str() const;

    friend bool operator==(const Expr& a, const Expr& b) { return structural_equal(a, b); }
    friend bool operator!=(const Expr& a, const Expr& b) { return !structural_equal(a, b); }

    static bool structural_equal(const Expr& a, const Expr& b);
    /// Deterministic structural total order; <0, 0, >0.
    static int compare(const Expr& a, const Expr& b);

  private:
    friend class ExprBuilder;
    explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const ExprNode> node_;
};

// Smart constructors; every result is canonical.
Expr add(const Expr& a, const Expr& b);
Expr add(std::vector<Expr> terms);
Expr sub(const Expr& a, const Expr& b);
Expr neg(const Expr& a);
Expr mul(const Expr& a, const Expr& b);
Expr mul(std::vector<Expr> factors);
Expr div(const Expr& a, const Expr& b);
Expr pow(const Expr& base, const Rational& exponent);
Expr apply(Func f, const Expr& arg);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr exp(const Expr& a);
Expr ln(const Expr& a);
Expr sqrt(const Expr& a);

/// Exact partial derivative, canonical.
Expr diff(const Expr& e, VarKind k, int index = 0);
Expr diff_t(const Expr& e);
Expr diff_x(const Expr& e, int i);
Expr diff_y(const Expr& e, int i);

/// True when e is a polynomial in the fiber coordinates y^1..y^n
/// (every y occurrence sits in a plain monomial with a nonnegative
/// integer exponent).
bool polynomial_in_y(const Expr& e);

/// Splits e into parts homogeneous of each degree in y; index = degree.
/// Requires polynomial_in_y(e).
std::vector<Expr> y_homogeneous_parts(const Expr& e);

/// True when e is a polynomial in all of t, x^i, y^i.
bool polynomial_all(const Expr& e);

/// Splits a polynomial into its total-degree homogeneous parts.
std::vector<Expr> homogeneous_parts_total(const Expr& e);

}  // namespace jetlag
