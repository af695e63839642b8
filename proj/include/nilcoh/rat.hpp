#pragma once

#include <gmpxx.h>

#include <string>

#include "nilcoh/errors.hpp"

namespace nilcoh {

// Arbitrary-precision rational with canonical representation
// (gcd-reduced, positive denominator), provided by GMP.
using Rat = mpq_class;

inline Rat rat(long n, long d = 1) {
    if (d == 0) throw ArithmeticError("zero denominator");
    Rat r(n, d);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rat& r) { return r.get_str(); }

inline int sign(const Rat& r) { return sgn(r); }

inline Rat rat_pow(const Rat& base, unsigned long e) {
    Rat out = 1;
    Rat b = base;
    while (e) {
        if (e & 1) out *= b;
        b *= b;
        e >>= 1;
    }
    return out;
}

inline Rat factorial(unsigned long m) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), m);
    return Rat(f);
}

}  // namespace nilcoh
