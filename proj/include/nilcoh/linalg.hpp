#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nilcoh/errors.hpp"
#include "nilcoh/scalar.hpp"

namespace nilcoh {

// Dense row-major matrix over one coefficient field.
struct Matrix {
    int rows = 0;
    int cols = 0;
    Field field = Field::Q;
    std::vector<Scalar> a;

    Matrix() = default;
    Matrix(int r, int c, Field f)
        : rows(r), cols(c), field(f), a(static_cast<size_t>(r) * c, Scalar::zero(f)) {}

    Scalar& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const Scalar& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
};

struct RrefResult {
    Matrix rref;
    std::vector<int> pivots;
    // Monic non-constant pivot numerators from the Q(t) elimination: the only
    // parameter values where ranks can drop are roots of these polynomials.
    std::vector<Poly> certificate;
};

namespace detail {

inline void add_certificate(std::vector<Poly>& cert, std::set<std::string>& seen,
                            const Poly& p) {
    if (p.degree() < 1) return;
    Poly m = p.monic();
    if (seen.insert(m.to_string()).second) cert.push_back(m);
}

// Convert a Scalar row into a polynomial row (denominators cleared).
inline std::vector<Poly> clear_row(const Matrix& M, int r) {
    std::vector<Poly> out(M.cols);
    if (M.field == Field::Q) {
        for (int c = 0; c < M.cols; ++c) out[c] = Poly(M.at(r, c).rat_value());
        return out;
    }
    Poly common = Poly::one();
    for (int c = 0; c < M.cols; ++c) {
        const Poly& d = M.at(r, c).func_value().den();
        Poly g = Poly::gcd(common, d);
        common = common * Poly::divexact(d, g);
    }
    for (int c = 0; c < M.cols; ++c) {
        const RatFunc& f = M.at(r, c).func_value();
        out[c] = f.num() * Poly::divexact(common, f.den());
    }
    return out;
}

inline Scalar poly_ratio(const Poly& num, const Poly& den, Field field) {
    if (field == Field::Q) {
        Rat d = den.coeff(0);
        return Scalar::from_rat(num.coeff(0) / d, Field::Q);
    }
    return Scalar::from_ratfunc(RatFunc::make(num, den));
}

}  // namespace detail

// Reduced row echelon form with deterministic positional pivoting (first
// nonzero entry scanning columns left-to-right, rows top-to-bottom).
// Forward elimination is fraction-free (one-step Bareiss) on denominator-
// cleared polynomial rows; the division back to field elements happens once
// per entry at the end.
inline RrefResult rref(const Matrix& M) {
    RrefResult res;
    res.rref = Matrix(M.rows, M.cols, M.field);
    std::set<std::string> seen;

    std::vector<std::vector<Poly>> B(M.rows);
    for (int r = 0; r < M.rows; ++r) B[r] = detail::clear_row(M, r);

    Poly prev = Poly::one();
    int r = 0;
    for (int c = 0; c < M.cols && r < M.rows; ++c) {
        int sel = -1;
        for (int i = r; i < M.rows; ++i)
            if (!B[i][c].is_zero()) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        std::swap(B[r], B[sel]);
        for (int i = r + 1; i < M.rows; ++i) {
            std::vector<Poly> nrow(M.cols);
            for (int j = 0; j < M.cols; ++j)
                nrow[j] = Poly::divexact(B[i][j] * B[r][c] - B[i][c] * B[r][j], prev);
            B[i] = std::move(nrow);
        }
        detail::add_certificate(res.certificate, seen, B[r][c]);
        prev = B[r][c];
        res.pivots.push_back(c);
        ++r;
    }

    // Divide each echelon row by its pivot and back-eliminate above pivots.
    int rank = static_cast<int>(res.pivots.size());
    for (int i = 0; i < rank; ++i) {
        int pc = res.pivots[i];
        for (int j = 0; j < M.cols; ++j)
            res.rref.at(i, j) = detail::poly_ratio(B[i][j], B[i][pc], M.field);
    }
    for (int i = rank - 1; i >= 0; --i) {
        int pc = res.pivots[i];
        for (int k = 0; k < i; ++k) {
            Scalar f = res.rref.at(k, pc);
            if (f.is_zero()) continue;
            for (int j = 0; j < M.cols; ++j)
                res.rref.at(k, j) = res.rref.at(k, j) - f * res.rref.at(i, j);
        }
    }
    return res;
}

inline int rank(const Matrix& M) { return static_cast<int>(rref(M).pivots.size()); }

// Subspace of a coordinate space, stored as a reduced echelon basis.
struct Subspace {
    int ambient = 0;
    Field field = Field::Q;
    std::vector<std::vector<Scalar>> basis;  // echelon rows
    std::vector<int> pivots;                 // strictly increasing

    int dim() const { return static_cast<int>(basis.size()); }

    static Subspace span(int ambient, const std::vector<std::vector<Scalar>>& vectors,
                         Field field, std::vector<Poly>* certificate = nullptr) {
        Matrix M(static_cast<int>(vectors.size()), ambient, field);
        for (size_t r = 0; r < vectors.size(); ++r) {
            if (static_cast<int>(vectors[r].size()) != ambient)
                throw DataError("span: vector of wrong dimension");
            for (int c = 0; c < ambient; ++c) M.at(static_cast<int>(r), c) = vectors[r][c];
        }
        RrefResult R = rref(M);
        if (certificate)
            for (const auto& p : R.certificate) certificate->push_back(p);
        Subspace s;
        s.ambient = ambient;
        s.field = field;
        s.pivots = R.pivots;
        for (size_t i = 0; i < R.pivots.size(); ++i) {
            std::vector<Scalar> row(ambient, Scalar::zero(field));
            for (int c = 0; c < ambient; ++c) row[c] = R.rref.at(static_cast<int>(i), c);
            s.basis.push_back(std::move(row));
        }
        return s;
    }

    // Eliminate this subspace's pivot coordinates from v.
    std::vector<Scalar> reduce(std::vector<Scalar> v) const {
        for (size_t i = 0; i < basis.size(); ++i) {
            Scalar f = v[pivots[i]];
            if (f.is_zero()) continue;
            for (int c = 0; c < ambient; ++c) v[c] = v[c] - f * basis[i][c];
        }
        return v;
    }

    bool contains(const std::vector<Scalar>& v) const {
        auto r = reduce(v);
        for (const auto& x : r)
            if (!x.is_zero()) return false;
        return true;
    }
};

// Basis of the null space {v : Mv = 0}, from the free columns of rref,
// re-echelonized for the Subspace invariant.
inline Subspace kernel(const Matrix& M) {
    RrefResult R = rref(M);
    std::vector<bool> is_pivot(M.cols, false);
    for (int p : R.pivots) is_pivot[p] = true;
    std::vector<std::vector<Scalar>> vecs;
    for (int fc = 0; fc < M.cols; ++fc) {
        if (is_pivot[fc]) continue;
        std::vector<Scalar> v(M.cols, Scalar::zero(M.field));
        v[fc] = Scalar::one(M.field);
        for (size_t i = 0; i < R.pivots.size(); ++i)
            v[R.pivots[i]] = -R.rref.at(static_cast<int>(i), fc);
        vecs.push_back(std::move(v));
    }
    return Subspace::span(M.cols, vecs, M.field);
}

struct SolveResult {
    bool solvable = false;
    std::vector<Scalar> particular;   // one solution (free variables zero)
    Subspace null_space;              // solution set = particular + null_space
    std::vector<Scalar> witness_row;  // rref row [0 ... 0 | c], c != 0, if inconsistent
    std::vector<Poly> certificate;
};

// Exact linear solve with certificate either way.
inline SolveResult solve(const Matrix& M, const std::vector<Scalar>& b) {
    if (static_cast<int>(b.size()) != M.rows)
        throw DataError("solve: right-hand side of wrong dimension");
    Matrix aug(M.rows, M.cols + 1, M.field);
    for (int r = 0; r < M.rows; ++r) {
        for (int c = 0; c < M.cols; ++c) aug.at(r, c) = M.at(r, c);
        aug.at(r, M.cols) = b[r];
    }
    RrefResult R = rref(aug);
    SolveResult out;
    out.certificate = R.certificate;
    for (size_t i = 0; i < R.pivots.size(); ++i) {
        if (R.pivots[i] == M.cols) {
            out.solvable = false;
            out.witness_row.assign(M.cols + 1, Scalar::zero(M.field));
            for (int c = 0; c <= M.cols; ++c)
                out.witness_row[c] = R.rref.at(static_cast<int>(i), c);
            return out;
        }
    }
    out.solvable = true;
    out.particular.assign(M.cols, Scalar::zero(M.field));
    for (size_t i = 0; i < R.pivots.size(); ++i)
        out.particular[R.pivots[i]] = R.rref.at(static_cast<int>(i), M.cols);
    out.null_space = kernel(M);
    return out;
}

// Coordinates of v + W in the deterministic complement basis of W inside U:
// the echelon basis vectors of U whose pivots are not pivots of W, in pivot
// order.
inline std::vector<Scalar> quotient_coords(const Subspace& U, const Subspace& W,
                                           const std::vector<Scalar>& v) {
    for (const auto& w : W.basis)
        if (!U.contains(w)) throw DataError("quotient_coords: W is not contained in U");
    if (!U.contains(v)) throw DataError("quotient_coords: vector is not in U");
    std::set<int> wp(W.pivots.begin(), W.pivots.end());
    std::vector<std::vector<Scalar>> comp;
    for (size_t i = 0; i < U.basis.size(); ++i)
        if (!wp.count(U.pivots[i])) comp.push_back(U.basis[i]);
    // Solve [W basis | complement] coeffs = v and return the complement part.
    int k = static_cast<int>(W.basis.size() + comp.size());
    Matrix M(U.ambient, k, U.field);
    for (int r = 0; r < U.ambient; ++r) {
        for (size_t j = 0; j < W.basis.size(); ++j) M.at(r, static_cast<int>(j)) = W.basis[j][r];
        for (size_t j = 0; j < comp.size(); ++j)
            M.at(r, static_cast<int>(W.basis.size() + j)) = comp[j][r];
    }
    SolveResult s = solve(M, v);
    if (!s.solvable) throw DataError("quotient_coords: internal inconsistency");
    return std::vector<Scalar>(s.particular.begin() + W.basis.size(), s.particular.end());
}

// ---------------------------------------------------------------------------
// Sparse exact solver for the large deformation linear systems.

struct SparseEq {
    std::map<int, Scalar> lhs;  // column -> coefficient (nonzero)
    Scalar rhs;
};

struct SparseVerdict {
    bool solvable = false;
    int rank = 0;
    std::vector<Scalar> particular;  // free variables set to zero
    SparseEq witness;                // fully reduced row 0 = c with c != 0
    int witness_index = -1;          // index of the originating input equation
    std::vector<Poly> certificate;
};

// Incremental Gaussian elimination with least-column pivoting.  Each input
// equation is reduced against the stored (normalized) pivot rows; a nonzero
// remainder becomes a new pivot row.  An equation reducing to 0 = c with
// c != 0 is an exact inconsistency witness.
inline SparseVerdict sparse_solve(const std::vector<SparseEq>& eqs, int ncols,
                                  Field field) {
    std::map<int, SparseEq> piv;
    SparseVerdict out;
    std::set<std::string> seen;
    for (size_t idx = 0; idx < eqs.size(); ++idx) {
        SparseEq row = eqs[idx];
        while (true) {
            for (auto it = row.lhs.begin(); it != row.lhs.end();)
                it = it->second.is_zero() ? row.lhs.erase(it) : std::next(it);
            if (row.lhs.empty()) {
                if (!row.rhs.is_zero()) {
                    out.solvable = false;
                    out.witness = row;
                    out.witness_index = static_cast<int>(idx);
                    out.rank = static_cast<int>(piv.size());
                    return out;
                }
                break;
            }
            int c = row.lhs.begin()->first;
            auto it = piv.find(c);
            if (it == piv.end()) {
                Scalar p = row.lhs[c];
                if (field == Field::Qt)
                    detail::add_certificate(out.certificate, seen, p.func_value().num());
                Scalar pi = p.inv();
                for (auto& [k, v] : row.lhs) v = v * pi;
                row.rhs = row.rhs * pi;
                piv.emplace(c, std::move(row));
                break;
            }
            Scalar f = row.lhs[c];
            for (const auto& [k, v] : it->second.lhs) {
                auto jt = row.lhs.find(k);
                if (jt == row.lhs.end())
                    row.lhs.emplace(k, -(f * v));
                else
                    jt->second = jt->second - f * v;
            }
            row.rhs = row.rhs - f * it->second.rhs;
        }
    }
    out.solvable = true;
    out.rank = static_cast<int>(piv.size());
    out.particular.assign(ncols, Scalar::zero(field));
    for (auto it = piv.rbegin(); it != piv.rend(); ++it) {
        Scalar x = it->second.rhs;
        for (const auto& [k, v] : it->second.lhs)
            if (k != it->first) x = x - v * out.particular[k];
        out.particular[it->first] = x;
    }
    return out;
}

}  // namespace nilcoh
