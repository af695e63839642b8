#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nilcoh/errors.hpp"
#include "nilcoh/lie.hpp"
#include "nilcoh/linalg.hpp"

namespace nilcoh {

// ---------------------------------------------------------------------------
// Exterior-algebra bookkeeping: the degree-k basis of Lambda^k g* is the set
// of strictly increasing k-tuples from {1..n}, enumerated lexicographically.

inline long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long out = 1;
    for (int i = 0; i < k; ++i) out = out * (n - i) / (i + 1);
    return out;
}

inline std::vector<std::vector<int>> ext_basis(int n, int k) {
    std::vector<std::vector<int>> out;
    if (k < 0 || k > n) return out;
    std::vector<int> cur(k);
    for (int i = 0; i < k; ++i) cur[i] = i + 1;
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[i] == n - (k - 1 - i)) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

// Lexicographic rank of a strictly increasing k-tuple among all such tuples.
inline int ext_index(const std::vector<int>& I, int n) {
    int k = static_cast<int>(I.size());
    long rank = 0;
    int prev = 0;
    for (int pos = 0; pos < k; ++pos) {
        for (int v = prev + 1; v < I[pos]; ++v) rank += binomial(n - v, k - pos - 1);
        prev = I[pos];
    }
    return static_cast<int>(rank);
}

// Merge two disjoint increasing tuples; returns the permutation sign, or 0 on
// index overlap.
inline int merge_sign(const std::vector<int>& I, const std::vector<int>& J,
                      std::vector<int>& merged) {
    merged.clear();
    merged.reserve(I.size() + J.size());
    size_t a = 0, b = 0;
    int inversions = 0;
    while (a < I.size() && b < J.size()) {
        if (I[a] == J[b]) return 0;
        if (I[a] < J[b]) {
            merged.push_back(I[a++]);
        } else {
            merged.push_back(J[b++]);
            inversions += static_cast<int>(I.size() - a);
        }
    }
    while (a < I.size()) merged.push_back(I[a++]);
    while (b < J.size()) merged.push_back(J[b++]);
    return (inversions % 2 == 0) ? 1 : -1;
}

// Bilinear wedge Lambda^p x Lambda^q -> Lambda^{p+q} on coordinate vectors.
inline std::vector<Scalar> wedge(const std::vector<Scalar>& u, int p,
                                 const std::vector<Scalar>& v, int q, int n,
                                 Field field) {
    if (p + q > n) return {};
    auto bas_p = ext_basis(n, p);
    auto bas_q = ext_basis(n, q);
    std::vector<Scalar> out(binomial(n, p + q), Scalar::zero(field));
    std::vector<int> merged;
    for (size_t a = 0; a < bas_p.size(); ++a) {
        if (u[a].is_zero()) continue;
        for (size_t b = 0; b < bas_q.size(); ++b) {
            if (v[b].is_zero()) continue;
            int s = merge_sign(bas_p[a], bas_q[b], merged);
            if (s == 0) continue;
            Scalar c = u[a] * v[b];
            int idx = ext_index(merged, n);
            out[idx] = (s > 0) ? out[idx] + c : out[idx] - c;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Chevalley-Eilenberg differential with trivial coefficients, in the sign
// convention d(e^m) = -sum_{i<j} c_{ij}^m e^i wedge e^j, extended as an
// antiderivation.  Returns the matrix of d^k : Lambda^k -> Lambda^{k+1}.
inline Matrix ce_differential(const LieAlgebra& A, int k) {
    int n = A.dim;
    auto bas_k = ext_basis(n, k);
    long rows = (k + 1 <= n) ? binomial(n, k + 1) : 0;
    Matrix M(static_cast<int>(rows), static_cast<int>(bas_k.size()), A.field);
    if (rows == 0) return M;
    std::vector<int> merged;
    for (size_t col = 0; col < bas_k.size(); ++col) {
        const auto& I = bas_k[col];
        for (size_t a = 0; a < I.size(); ++a) {
            std::vector<int> rest;
            rest.reserve(I.size() - 1);
            for (size_t t2 = 0; t2 < I.size(); ++t2)
                if (t2 != a) rest.push_back(I[t2]);
            int sign_a = (a % 2 == 0) ? 1 : -1;
            for (const auto& [ij, w] : A.brackets) {
                const Scalar& c = w[I[a] - 1];
                if (c.is_zero()) continue;
                std::vector<int> pair{ij.first, ij.second};
                int s = merge_sign(rest, pair, merged);
                if (s == 0) continue;
                int row = ext_index(merged, n);
                // d(e^m) carries a global minus sign.
                Scalar term = c;
                if (sign_a * s > 0) term = -term;
                M.at(row, static_cast<int>(col)) += term;
            }
        }
    }
    return M;
}

// ---------------------------------------------------------------------------
struct CohomologyModel {
    LieAlgebra algebra;
    int n = 0;
    Field field = Field::Q;
    std::vector<Matrix> d;         // d[k], k = 0..n (d[n] has zero rows)
    std::vector<Subspace> ker;     // ker d^k in Lambda^k
    std::vector<Subspace> im;      // im d^{k-1} in Lambda^k
    std::vector<std::vector<std::vector<Scalar>>> reps;  // echelon cocycle reps
    std::vector<int> betti;
    std::vector<Poly> certificate;

    // Coordinates of the class [v] in the representative basis of H^k.
    // v must be a cocycle of degree k.
    std::vector<Scalar> h_coords(int k, const std::vector<Scalar>& v) const {
        std::vector<Scalar> r = im[k].reduce(v);
        std::vector<Scalar> out(betti[k], Scalar::zero(field));
        for (int i = 0; i < betti[k]; ++i) {
            const auto& rep = reps[k][i];
            int pc = -1;
            for (size_t c = 0; c < rep.size(); ++c)
                if (!rep[c].is_zero()) {
                    pc = static_cast<int>(c);
                    break;
                }
            Scalar f = r[pc];
            out[i] = f;
            if (f.is_zero()) continue;
            for (size_t c = 0; c < rep.size(); ++c) r[c] = r[c] - f * rep[c];
        }
        for (const auto& x : r)
            if (!x.is_zero())
                throw DataError("h_coords: vector is not a cocycle of the model");
        return out;
    }
};

inline CohomologyModel cohomology(const LieAlgebra& A) {
    CohomologyModel M;
    M.algebra = A;
    M.n = A.dim;
    M.field = A.field;
    int n = A.dim;
    std::set<std::string> seen;
    auto add_cert = [&](const std::vector<Poly>& polys) {
        for (const auto& p : polys)
            if (seen.insert(p.to_string()).second) M.certificate.push_back(p);
    };
    M.d.resize(n + 1);
    M.ker.resize(n + 1);
    M.im.resize(n + 1);
    M.reps.resize(n + 1);
    M.betti.assign(n + 1, 0);
    for (int k = 0; k <= n; ++k) M.d[k] = ce_differential(A, k);
    for (int k = 0; k <= n; ++k) {
        // Kernel of d^k.
        RrefResult R = rref(M.d[k]);
        add_cert(R.certificate);
        std::vector<Poly> cert2;
        M.ker[k] = kernel(M.d[k]);
        // Image of d^{k-1}: span of its columns.
        std::vector<std::vector<Scalar>> cols;
        if (k >= 1) {
            const Matrix& D = M.d[k - 1];
            for (int c = 0; c < D.cols; ++c) {
                std::vector<Scalar> v(D.rows, Scalar::zero(A.field));
                for (int r = 0; r < D.rows; ++r) v[r] = D.at(r, c);
                cols.push_back(std::move(v));
            }
        }
        M.im[k] = Subspace::span(static_cast<int>(binomial(n, k)), cols, A.field, &cert2);
        add_cert(cert2);
        // Representatives: kernel basis reduced modulo the image, echelonized.
        std::vector<std::vector<Scalar>> red;
        for (const auto& v : M.ker[k].basis) red.push_back(M.im[k].reduce(v));
        std::vector<Poly> cert3;
        Subspace S = Subspace::span(static_cast<int>(binomial(n, k)), red, A.field, &cert3);
        add_cert(cert3);
        M.reps[k] = S.basis;
        M.betti[k] = S.dim();
    }
    return M;
}

// ---------------------------------------------------------------------------
// Cup products on cohomology via wedges of representative cocycles.
struct CupTable {
    int p = 0;
    int q = 0;
    // gamma[i][j] = coordinates of [rep_p^i wedge rep_q^j] in H^{p+q}.
    std::vector<std::vector<std::vector<Scalar>>> gamma;
};

inline CupTable cup_table(const CohomologyModel& M, int p, int q) {
    if (p + q > M.n) throw DataError("cup_table: degree overflow");
    CupTable T;
    T.p = p;
    T.q = q;
    T.gamma.resize(M.betti[p]);
    const Matrix& dnext = M.d[p + q];
    for (int i = 0; i < M.betti[p]; ++i) {
        T.gamma[i].resize(M.betti[q]);
        for (int j = 0; j < M.betti[q]; ++j) {
            auto w = wedge(M.reps[p][i], p, M.reps[q][j], q, M.n, M.field);
            // A wedge of cocycles must be a cocycle; anything else is a bug.
            for (int r = 0; r < dnext.rows; ++r) {
                Scalar s = Scalar::zero(M.field);
                for (int c = 0; c < dnext.cols; ++c)
                    if (!w[c].is_zero()) s += dnext.at(r, c) * w[c];
                if (!s.is_zero())
                    throw DataError("cup_table: wedge of cocycles is not a cocycle");
            }
            T.gamma[i][j] = M.h_coords(p + q, w);
        }
    }
    return T;
}

// Pairing H^k x H^{n-k} -> H^n (requires betti_n = 1).
inline Matrix poincare_pairing(const CohomologyModel& M, int k) {
    if (M.betti[M.n] != 1)
        throw DataError("poincare_pairing: top cohomology is not 1-dimensional");
    CupTable T = cup_table(M, k, M.n - k);
    Matrix P(M.betti[k], M.betti[M.n - k], M.field);
    for (int i = 0; i < M.betti[k]; ++i)
        for (int j = 0; j < M.betti[M.n - k]; ++j) P.at(i, j) = T.gamma[i][j][0];
    return P;
}

inline nlohmann::ordered_json cup_table_to_json(const CupTable& T) {
    nlohmann::ordered_json out;
    out["p"] = T.p;
    out["q"] = T.q;
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const auto& row : T.gamma) {
        nlohmann::ordered_json jrow = nlohmann::ordered_json::array();
        for (const auto& entry : row) {
            nlohmann::ordered_json coords = nlohmann::ordered_json::array();
            for (const auto& c : entry) coords.push_back(c.to_string());
            jrow.push_back(coords);
        }
        entries.push_back(jrow);
    }
    out["entries"] = entries;
    return out;
}

}  // namespace nilcoh
