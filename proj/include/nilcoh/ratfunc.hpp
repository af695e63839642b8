#pragma once

#include <string>
#include <utility>

#include "nilcoh/errors.hpp"
#include "nilcoh/poly.hpp"

namespace nilcoh {

// Rational function in "t" over Q, in canonical form:
// denominator monic, gcd(num, den) = 1, zero stored as 0/1.
// Equality of values coincides with structural equality.
class RatFunc {
  public:
    RatFunc() : num_(), den_(Poly::one()) {}
    explicit RatFunc(const Rat& c) : num_(Poly(c)), den_(Poly::one()) {}
    explicit RatFunc(Poly p) : num_(std::move(p)), den_(Poly::one()) {}

    // normalize(num, den): the unique reduced monic-denominator representative.
    static RatFunc make(Poly num, Poly den) {
        if (den.is_zero()) throw ArithmeticError("zero denominator in rational function");
        if (num.is_zero()) return RatFunc();
        Poly g = Poly::gcd(num, den);
        if (g.degree() > 0) {
            num = Poly::divexact(num, g);
            den = Poly::divexact(den, g);
        }
        Rat lead_inv = 1 / den.leading();
        RatFunc out;
        out.num_ = num * lead_inv;
        out.den_ = den * lead_inv;
        return out;
    }

    static RatFunc t() { return RatFunc(Poly::t()); }
    static RatFunc zero() { return RatFunc(); }
    static RatFunc one() { return RatFunc(Rat(1)); }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }

    // Value of a constant rational function.
    Rat constant_value() const {
        if (!is_constant()) throw ArithmeticError("rational function is not constant");
        if (is_zero()) return Rat(0);
        return num_.coeff(0) / den_.coeff(0);
    }

    friend bool operator==(const RatFunc& a, const RatFunc& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        return make(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
        return make(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    RatFunc operator-() const {
        RatFunc out;
        out.num_ = -num_;
        out.den_ = den_;
        return out;
    }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        return make(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.is_zero()) throw ArithmeticError("division by zero rational function");
        return make(a.num_ * b.den_, a.den_ * b.num_);
    }

    // Quotient-rule derivative, normalized.
    RatFunc derivative() const {
        return make(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
    }

    // Exact evaluation; throws on a pole, identifying the vanishing denominator.
    Rat eval(const Rat& x) const {
        Rat d = den_.eval(x);
        if (d == 0)
            throw ArithmeticError("pole at t = " + x.get_str() + " (denominator " +
                                  den_.to_string() + " vanishes)");
        return num_.eval(x) / d;
    }

    std::string to_string(const std::string& var = "t") const {
        if (den_ == Poly::one()) return num_.to_string(var);
        std::string n = num_.to_string(var);
        std::string d = den_.to_string(var);
        if (num_.degree() > 0 || num_.coeff(0) < 0 || num_.coeff(0).get_den() != 1)
            n = "(" + n + ")";
        return n + "/(" + d + ")";
    }

  private:
    Poly num_;
    Poly den_;
};

}  // namespace nilcoh
