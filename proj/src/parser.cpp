#include "jetlag/parser.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

namespace jetlag {

namespace {

class Parser {
  public:
    Parser(const std::string& text, int n) : text_(text), n_(n) {}

    Expr run() {
        Expr e = parse_sum();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return e;
    }

  private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool eat(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr parse_sum() {
        Expr e = parse_product();
        while (true) {
            if (eat('+'))
                e = add(e, parse_product());
            else if (eat('-'))
                e = sub(e, parse_product());
            else
                return e;
        }
    }

    Expr parse_product() {
        Expr e = parse_unary();
        while (true) {
            if (eat('*'))
                e = mul(e, parse_unary());
            else if (eat('/'))
                e = checked_div(e, parse_unary());
            else
                return e;
        }
    }

    Expr checked_div(const Expr& a, const Expr& b) {
        if (b.is_zero()) fail("division by zero constant");
        return div(a, b);
    }

    Expr parse_unary() {
        if (eat('-')) return neg(parse_unary());
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_atom();
        if (eat('^')) {
            size_t at = pos_;
            Expr e = parse_unary();  // right associative
            if (!e.is_constant()) throw ParseError("exponent must be a rational constant", at);
            if (base.is_zero() && e.constant_value() < 0) throw ParseError("division by zero constant", at);
            return pow(base, e.constant_value());
        }
        return base;
    }

    Expr parse_atom() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            Expr e = parse_sum();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
        fail(pos_ == text_.size() ? "unexpected end of input" : std::string("unexpected character '") + c + "'");
    }

    Expr parse_number() {
        size_t start = pos_;
        std::string digits;
        long frac_digits = -1;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                digits += c;
                if (frac_digits >= 0) ++frac_digits;
                ++pos_;
            } else if (c == '.' && frac_digits < 0) {
                frac_digits = 0;
                ++pos_;
            } else {
                break;
            }
        }
        if (digits.empty()) throw ParseError("malformed number", start);
        BigInt num = 0;
        for (char d : digits) num = num * 10 + (d - '0');
        BigInt den = 1;
        for (long i = 0; i < std::max<long>(frac_digits, 0); ++i) den *= 10;
        return Expr::constant(Rational(num, den));
    }

    Expr parse_identifier() {
        size_t start = pos_;
        std::string name;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])))) {
            name += text_[pos_];
            ++pos_;
        }
        if (name == "t") return Expr::t();
        if ((name[0] == 'x' || name[0] == 'y') && name.size() > 1 &&
            std::all_of(name.begin() + 1, name.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            int idx = std::stoi(name.substr(1));
            if (idx < 1 || idx > n_)
                throw ParseError("variable index out of range for dimension " + std::to_string(n_) + ": " + name,
                                 start);
            return name[0] == 'x' ? Expr::x(idx) : Expr::y(idx);
        }
        // function call
        static const std::pair<const char*, Func> table[] = {
            {"sin", Func::Sin}, {"cos", Func::Cos}, {"exp", Func::Exp}, {"ln", Func::Ln}};
        if (peek() != '(') throw ParseError("unknown identifier '" + name + "'", start);
        ++pos_;
        Expr arg = parse_sum();
        if (!eat(')')) fail("expected ')'");
        if (name == "sqrt") return sqrt(arg);
        for (const auto& [fname, f] : table)
            if (name == fname) return apply(f, arg);
        throw ParseError("unknown function name '" + name + "'", start);
    }

    const std::string& text_;
    int n_;
    size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(const std::string& text, int n) { return Parser(text, n).run(); }

}  // namespace jetlag
