#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "nilcoh/errors.hpp"
#include "nilcoh/rat.hpp"

namespace nilcoh {

// Univariate polynomial over Q in the parameter "t".
// Canonical form: coefficient vector indexed by degree, trailing zeros
// stripped (the zero polynomial has an empty vector and degree -1).
class Poly {
  public:
    Poly() = default;
    explicit Poly(const Rat& c) {
        if (c != 0) c_.push_back(c);
    }
    explicit Poly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { strip(); }

    static Poly zero() { return Poly(); }
    static Poly one() { return Poly(Rat(1)); }
    static Poly t() { return Poly(std::vector<Rat>{Rat(0), Rat(1)}); }

    // Degree; -1 is the sentinel degree of the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }

    Rat coeff(int i) const {
        if (i < 0 || i >= static_cast<int>(c_.size())) return Rat(0);
        return c_[i];
    }
    const Rat& leading() const {
        if (c_.empty()) throw ArithmeticError("leading coefficient of zero polynomial");
        return c_.back();
    }
    const std::vector<Rat>& coeffs() const { return c_; }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<Rat> out(std::max(a.c_.size(), b.c_.size()), Rat(0));
        for (size_t i = 0; i < a.c_.size(); ++i) out[i] += a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) out[i] += b.c_[i];
        return Poly(std::move(out));
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        std::vector<Rat> out(std::max(a.c_.size(), b.c_.size()), Rat(0));
        for (size_t i = 0; i < a.c_.size(); ++i) out[i] += a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) out[i] -= b.c_[i];
        return Poly(std::move(out));
    }
    Poly operator-() const {
        std::vector<Rat> out(c_);
        for (auto& x : out) x = -x;
        return Poly(std::move(out));
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<Rat> out(a.c_.size() + b.c_.size() - 1, Rat(0));
        for (size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
        }
        return Poly(std::move(out));
    }
    friend Poly operator*(const Poly& a, const Rat& s) {
        std::vector<Rat> out(a.c_);
        for (auto& x : out) x *= s;
        return Poly(std::move(out));
    }

    // Euclidean division: a = q*b + r with deg r < deg b.
    static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
        if (b.is_zero()) throw ArithmeticError("polynomial division by zero");
        std::vector<Rat> rem(a.c_);
        int db = b.degree();
        std::vector<Rat> quot;
        if (static_cast<int>(rem.size()) - 1 >= db)
            quot.assign(rem.size() - db, Rat(0));
        for (int d = static_cast<int>(rem.size()) - 1; d >= db; --d) {
            if (rem[d] == 0) continue;
            Rat f = rem[d] / b.c_[db];
            quot[d - db] = f;
            for (int i = 0; i <= db; ++i) rem[d - db + i] -= f * b.c_[i];
        }
        return {Poly(std::move(quot)), Poly(std::move(rem))};
    }

    // Exact division; throws if b does not divide a.
    static Poly divexact(const Poly& a, const Poly& b) {
        auto [q, r] = divmod(a, b);
        if (!r.is_zero()) throw ArithmeticError("inexact polynomial division");
        return q;
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<Rat> out(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) out[i - 1] = c_[i] * Rat(static_cast<long>(i));
        return Poly(std::move(out));
    }

    Rat eval(const Rat& x) const {
        Rat out = 0;
        for (size_t i = c_.size(); i-- > 0;) out = out * x + c_[i];
        return out;
    }

    Poly monic() const {
        if (is_zero()) return Poly();
        Rat inv = 1 / leading();
        return *this * inv;
    }

    Poly pow(unsigned long e) const {
        Poly out = Poly::one();
        Poly b = *this;
        while (e) {
            if (e & 1) out = out * b;
            b = b * b;
            e >>= 1;
        }
        return out;
    }

    // Monic gcd via the primitive pseudo-remainder sequence over Z,
    // which avoids the coefficient blowup of naive rational Euclid.
    static Poly gcd(const Poly& a, const Poly& b) {
        if (a.is_zero()) return b.monic();
        if (b.is_zero()) return a.monic();
        std::vector<mpz_class> A = primitive_z(a), B = primitive_z(b);
        if (A.size() < B.size()) std::swap(A, B);
        while (true) {
            std::vector<mpz_class> R = pseudo_rem(A, B);
            strip_z(R);
            if (R.empty()) break;
            make_primitive(R);
            A = std::move(B);
            B = std::move(R);
            if (A.size() < B.size()) std::swap(A, B);
        }
        std::vector<Rat> out(B.size());
        for (size_t i = 0; i < B.size(); ++i) out[i] = Rat(B[i]);
        return Poly(std::move(out)).monic();
    }

    std::string to_string(const std::string& var = "t") const {
        if (is_zero()) return "0";
        std::string s;
        for (int d = degree(); d >= 0; --d) {
            const Rat& c = c_[d];
            if (c == 0) continue;
            bool first = s.empty();
            Rat ac = abs(c);
            if (sgn(c) < 0)
                s += first ? "-" : "-";
            else if (!first)
                s += "+";
            std::string coeff_str = ac.get_str();
            if (d == 0) {
                s += coeff_str;
            } else {
                if (ac != 1) s += coeff_str + "*";
                s += var;
                if (d > 1) s += "^" + std::to_string(d);
            }
        }
        return s;
    }

  private:
    std::vector<Rat> c_;

    void strip() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    static void strip_z(std::vector<mpz_class>& v) {
        while (!v.empty() && v.back() == 0) v.pop_back();
    }

    static void make_primitive(std::vector<mpz_class>& v) {
        mpz_class g = 0;
        for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
        if (g > 1)
            for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    }

    static std::vector<mpz_class> primitive_z(const Poly& p) {
        mpz_class den_lcm = 1;
        for (const auto& c : p.c_)
            mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
        std::vector<mpz_class> out(p.c_.size());
        for (size_t i = 0; i < p.c_.size(); ++i)
            out[i] = p.c_[i].get_num() * (den_lcm / p.c_[i].get_den());
        make_primitive(out);
        return out;
    }

    // Pseudo-remainder of A by B (deg A >= deg B > -1).
    static std::vector<mpz_class> pseudo_rem(std::vector<mpz_class> A,
                                             const std::vector<mpz_class>& B) {
        const mpz_class& lb = B.back();
        int db = static_cast<int>(B.size()) - 1;
        for (int d = static_cast<int>(A.size()) - 1; d >= db; --d) {
            mpz_class lead = A[d];
            if (lead == 0) continue;
            for (auto& x : A) x *= lb;
            for (int i = 0; i <= db; ++i) A[d - db + i] -= lead * B[i];
        }
        if (static_cast<int>(A.size()) > db) A.resize(db);
        return A;
    }
};

}  // namespace nilcoh
