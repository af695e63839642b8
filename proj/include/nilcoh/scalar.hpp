#pragma once

#include <map>
#include <string>
#include <utility>

#include "nilcoh/errors.hpp"
#include "nilcoh/rat.hpp"
#include "nilcoh/ratfunc.hpp"

namespace nilcoh {

enum class Field { Q, Qt };

inline std::string field_name(Field f) { return f == Field::Q ? "Q" : "Q(t)"; }

// Element of the coefficient field: a rational number (field Q) or a
// rational function in t (field Q(t)).  Every algebraic object carries one
// field tag; mixed-field arithmetic throws FieldError.
class Scalar {
  public:
    Scalar() : field_(Field::Q), q_(0) {}
    explicit Scalar(Field f) : field_(f), q_(0) {}
    static Scalar from_rat(const Rat& r, Field f) {
        Scalar s(f);
        if (f == Field::Q)
            s.q_ = r;
        else
            s.f_ = RatFunc(r);
        return s;
    }
    static Scalar from_int(long n, Field f) { return from_rat(Rat(n), f); }
    static Scalar from_ratfunc(RatFunc rf) {
        Scalar s(Field::Qt);
        s.f_ = std::move(rf);
        return s;
    }
    static Scalar zero(Field f) { return Scalar(f); }
    static Scalar one(Field f) { return from_int(1, f); }
    static Scalar t() { return from_ratfunc(RatFunc::t()); }

    Field field() const { return field_; }
    bool is_zero() const { return field_ == Field::Q ? q_ == 0 : f_.is_zero(); }
    bool is_one() const {
        return field_ == Field::Q ? q_ == 1 : f_ == RatFunc::one();
    }

    const Rat& rat_value() const {
        require(Field::Q);
        return q_;
    }
    const RatFunc& func_value() const {
        require(Field::Qt);
        return f_;
    }

    // Explicit embedding Q -> Q(t).
    Scalar lift() const {
        require(Field::Q);
        return from_ratfunc(RatFunc(q_));
    }

    // Evaluation Q(t) -> Q at t = x (throws on poles).
    Scalar eval(const Rat& x) const {
        require(Field::Qt);
        return from_rat(f_.eval(x), Field::Q);
    }

    Scalar derivative() const {
        if (field_ == Field::Q) return zero(Field::Q);
        return from_ratfunc(f_.derivative());
    }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        a.match(b);
        return a.field_ == Field::Q ? a.q_ == b.q_ : a.f_ == b.f_;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    friend Scalar operator+(const Scalar& a, const Scalar& b) {
        a.match(b);
        Scalar s(a.field_);
        if (a.field_ == Field::Q)
            s.q_ = a.q_ + b.q_;
        else
            s.f_ = a.f_ + b.f_;
        return s;
    }
    friend Scalar operator-(const Scalar& a, const Scalar& b) {
        a.match(b);
        Scalar s(a.field_);
        if (a.field_ == Field::Q)
            s.q_ = a.q_ - b.q_;
        else
            s.f_ = a.f_ - b.f_;
        return s;
    }
    Scalar operator-() const {
        Scalar s(field_);
        if (field_ == Field::Q)
            s.q_ = -q_;
        else
            s.f_ = -f_;
        return s;
    }
    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        a.match(b);
        Scalar s(a.field_);
        if (a.field_ == Field::Q)
            s.q_ = a.q_ * b.q_;
        else
            s.f_ = a.f_ * b.f_;
        return s;
    }
    friend Scalar operator/(const Scalar& a, const Scalar& b) {
        a.match(b);
        if (b.is_zero()) throw ArithmeticError("scalar division by zero");
        Scalar s(a.field_);
        if (a.field_ == Field::Q)
            s.q_ = a.q_ / b.q_;
        else
            s.f_ = a.f_ / b.f_;
        return s;
    }
    Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
    Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
    Scalar& operator*=(const Scalar& b) { return *this = *this * b; }

    Scalar inv() const {
        if (is_zero()) throw ArithmeticError("inverse of zero scalar");
        return one(field_) / *this;
    }

    std::string to_string() const {
        return field_ == Field::Q ? nilcoh::to_string(q_) : f_.to_string();
    }

  private:
    Field field_;
    Rat q_;
    RatFunc f_;

    void require(Field f) const {
        if (field_ != f)
            throw FieldError("scalar is over " + field_name(field_) + ", expected " +
                             field_name(f));
    }
    void match(const Scalar& o) const {
        if (field_ != o.field_)
            throw FieldError("mixed-field arithmetic: " + field_name(field_) + " vs " +
                             field_name(o.field_));
    }
};

// Linear combination c0 + sum_k coeff_k * x_k, the value domain of the
// expression parser.  Pure scalar expressions have an empty term map.
struct LinComb {
    Scalar constant;
    std::map<int, Scalar> terms;  // basis index (1-based) -> coefficient

    explicit LinComb(Field f) : constant(Scalar::zero(f)) {}
    bool is_constant() const { return terms.empty(); }
};

namespace detail {

// Recursive-descent parser for scalar expressions and bracket right-hand
// sides: integers, t, x<k>, + - * / ^, parentheses.
class ExprParser {
  public:
    ExprParser(const std::string& text, Field field, bool allow_x, int line,
               int column_offset)
        : s_(text), field_(field), allow_x_(allow_x), line_(line), off_(column_offset) {}

    LinComb parse() {
        LinComb v = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return v;
    }

  private:
    const std::string& s_;
    Field field_;
    bool allow_x_;
    int line_;
    int off_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, line_, off_ + static_cast<int>(pos_) + 1);
    }
    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    LinComb expr() {
        LinComb v = (eat('-')) ? negate(term()) : (eat('+'), term());
        while (true) {
            if (eat('+'))
                v = add(v, term(), false);
            else if (eat('-'))
                v = add(v, term(), true);
            else
                break;
        }
        return v;
    }

    LinComb term() {
        LinComb v = factor();
        while (true) {
            if (eat('*'))
                v = mul(v, factor());
            else if (eat('/'))
                v = div(v, factor());
            else
                break;
        }
        return v;
    }

    LinComb factor() {
        if (eat('-')) return negate(factor());
        LinComb v = atom();
        if (eat('^')) {
            if (!v.is_constant()) fail("cannot raise a basis element to a power");
            skip_ws();
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                ++pos_;
            if (pos_ == start) fail("expected integer exponent");
            unsigned long e = std::stoul(s_.substr(start, pos_ - start));
            LinComb out(field_);
            out.constant = Scalar::one(field_);
            for (unsigned long i = 0; i < e; ++i) out.constant *= v.constant;
            return out;
        }
        return v;
    }

    LinComb atom() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of expression");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            LinComb v = expr();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                ++pos_;
            LinComb v(field_);
            v.constant = Scalar::from_rat(Rat(s_.substr(start, pos_ - start)), field_);
            return v;
        }
        if (c == 't') {
            if (field_ != Field::Qt)
                fail("parameter t used, but no parameter was declared (field is Q)");
            ++pos_;
            LinComb v(field_);
            v.constant = Scalar::t();
            return v;
        }
        if (c == 'x' && allow_x_) {
            ++pos_;
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                ++pos_;
            if (pos_ == start) fail("expected basis index after 'x'");
            int k = std::stoi(s_.substr(start, pos_ - start));
            LinComb v(field_);
            v.terms[k] = Scalar::one(field_);
            return v;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    LinComb negate(LinComb v) {
        v.constant = -v.constant;
        for (auto& [k, c] : v.terms) c = -c;
        return v;
    }
    LinComb add(LinComb a, const LinComb& b, bool sub) {
        a.constant = sub ? a.constant - b.constant : a.constant + b.constant;
        for (const auto& [k, c] : b.terms) {
            auto it = a.terms.find(k);
            Scalar cur = it != a.terms.end() ? it->second : Scalar::zero(a.constant.field());
            a.terms[k] = sub ? cur - c : cur + c;
        }
        return a;
    }
    LinComb mul(const LinComb& a, const LinComb& b) {
        if (!a.is_constant() && !b.is_constant())
            fail("product of basis elements is not allowed");
        const LinComb& lin = a.is_constant() ? b : a;
        const Scalar& c = a.is_constant() ? a.constant : b.constant;
        LinComb out(c.field());
        out.constant = c * lin.constant;
        for (const auto& [k, v] : lin.terms) out.terms[k] = c * v;
        return out;
    }
    LinComb div(const LinComb& a, const LinComb& b) {
        if (!b.is_constant()) fail("division by a basis element is not allowed");
        if (b.constant.is_zero()) fail("division by zero");
        LinComb out(b.constant.field());
        out.constant = a.constant / b.constant;
        for (const auto& [k, v] : a.terms) out.terms[k] = v / b.constant;
        return out;
    }
};

}  // namespace detail

// Parse a pure scalar expression (no basis elements).
inline Scalar parse_scalar(const std::string& text, Field field, int line = 1,
                           int column_offset = 0) {
    detail::ExprParser p(text, field, /*allow_x=*/false, line, column_offset);
    return p.parse().constant;
}

// Parse a bracket right-hand side: scalar-coefficient combination of x<k>.
inline LinComb parse_lincomb(const std::string& text, Field field, int line = 1,
                             int column_offset = 0) {
    detail::ExprParser p(text, field, /*allow_x=*/true, line, column_offset);
    return p.parse();
}

}  // namespace nilcoh
