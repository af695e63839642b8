#pragma once

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nilcoh/cohomology.hpp"
#include "nilcoh/errors.hpp"
#include "nilcoh/linalg.hpp"

namespace nilcoh {

// ---------------------------------------------------------------------------
// The total cohomology H* as one finite-dimensional unital associative
// algebra on the basis of all representative classes, ordered by degree.
struct FiniteAlgebra {
    int N = 0;
    Field field = Field::Q;
    int unit = 0;                 // index of the degree-0 class
    std::vector<int> degree;      // cohomological degree of each basis index
    // prod[i][j] = sparse expansion of e_i * e_j.
    std::vector<std::vector<std::vector<std::pair<int, Scalar>>>> prod;

    Scalar entry(int i, int j, int k) const {
        for (const auto& [idx, c] : prod[i][j])
            if (idx == k) return c;
        return Scalar::zero(field);
    }

    std::vector<Scalar> multiply(const std::vector<Scalar>& a,
                                 const std::vector<Scalar>& b) const {
        std::vector<Scalar> out(N, Scalar::zero(field));
        for (int i = 0; i < N; ++i) {
            if (a[i].is_zero()) continue;
            for (int j = 0; j < N; ++j) {
                if (b[j].is_zero()) continue;
                Scalar c = a[i] * b[j];
                for (const auto& [k, q] : prod[i][j]) out[k] += c * q;
            }
        }
        return out;
    }
};

inline FiniteAlgebra assemble(const CohomologyModel& M, bool check = true) {
    FiniteAlgebra A;
    A.field = M.field;
    int n = M.n;
    std::vector<int> offset(n + 2, 0);
    for (int d = 0; d <= n; ++d) offset[d + 1] = offset[d] + M.betti[d];
    A.N = offset[n + 1];
    A.unit = 0;
    for (int d = 0; d <= n; ++d)
        for (int i = 0; i < M.betti[d]; ++i) A.degree.push_back(d);
    A.prod.assign(A.N, std::vector<std::vector<std::pair<int, Scalar>>>(A.N));
    for (int p = 0; p <= n; ++p)
        for (int q = 0; p + q <= n; ++q) {
            CupTable T = cup_table(M, p, q);
            for (int i = 0; i < M.betti[p]; ++i)
                for (int j = 0; j < M.betti[q]; ++j)
                    for (int k = 0; k < M.betti[p + q]; ++k) {
                        const Scalar& c = T.gamma[i][j][k];
                        if (!c.is_zero())
                            A.prod[offset[p] + i][offset[q] + j].push_back(
                                {offset[p + q] + k, c});
                    }
        }
    if (check) {
        // Unit.
        for (int j = 0; j < A.N; ++j) {
            for (const auto& [k, c] : A.prod[A.unit][j])
                if (k != j || !c.is_one())
                    throw DataError("assemble: degree-0 class is not a left unit");
            if (A.prod[A.unit][j].size() != 1)
                throw DataError("assemble: degree-0 class is not a left unit");
        }
        // Associativity on all basis triples: (e_i e_j) e_k = e_i (e_j e_k).
        for (int i = 0; i < A.N; ++i)
            for (int j = 0; j < A.N; ++j) {
                const auto& ij = A.prod[i][j];
                for (int k = 0; k < A.N; ++k) {
                    std::map<int, Scalar> lhs, rhs;
                    for (const auto& [m, c] : ij)
                        for (const auto& [l, d] : A.prod[m][k]) {
                            auto it = lhs.find(l);
                            if (it == lhs.end())
                                lhs.emplace(l, c * d);
                            else
                                it->second += c * d;
                        }
                    for (const auto& [m, c] : A.prod[j][k])
                        for (const auto& [l, d] : A.prod[i][m]) {
                            auto it = rhs.find(l);
                            if (it == rhs.end())
                                rhs.emplace(l, c * d);
                            else
                                it->second += c * d;
                        }
                    for (const auto& [l, c] : rhs) {
                        auto it = lhs.find(l);
                        if (it == lhs.end())
                            lhs.emplace(l, -c);
                        else
                            it->second -= c;
                    }
                    for (const auto& [l, c] : lhs)
                        if (!c.is_zero())
                            throw DataError("assemble: multiplication is not associative");
                }
            }
    }
    return A;
}

// ---------------------------------------------------------------------------
// Sparse bilinear map f: A x A -> A.
struct BilinearMap {
    int N = 0;
    Field field = Field::Q;
    std::map<std::pair<int, int>, std::vector<std::pair<int, Scalar>>> entries;

    Scalar entry(int i, int j, int k) const {
        auto it = entries.find({i, j});
        if (it == entries.end()) return Scalar::zero(field);
        for (const auto& [idx, c] : it->second)
            if (idx == k) return c;
        return Scalar::zero(field);
    }

    void set(int i, int j, std::vector<std::pair<int, Scalar>> v) {
        std::vector<std::pair<int, Scalar>> kept;
        for (auto& [k, c] : v)
            if (!c.is_zero()) kept.push_back({k, c});
        if (!kept.empty()) entries[{i, j}] = std::move(kept);
    }

    bool is_zero() const { return entries.empty(); }

    friend bool operator==(const BilinearMap& a, const BilinearMap& b) {
        if (a.N != b.N) return false;
        for (const auto& [ij, v] : a.entries)
            for (const auto& [k, c] : v)
                if (b.entry(ij.first, ij.second, k) != c) return false;
        for (const auto& [ij, v] : b.entries)
            for (const auto& [k, c] : v)
                if (a.entry(ij.first, ij.second, k) != c) return false;
        return true;
    }
};

// m-th Maclaurin coefficient of the product family around lambda0:
// f_m(e_i, e_j) = sum_k (d^m/dt^m q_ij^k)|_{lambda0} / m! e_k.
// Symbolic mode (no lambda0): the same tensor kept over Q(t).
inline BilinearMap maclaurin(const FiniteAlgebra& A, int m,
                             const Rat* lambda0 = nullptr) {
    if (A.field != Field::Qt)
        throw FieldError("maclaurin: algebra must be parametric (over Q(t))");
    BilinearMap f;
    f.N = A.N;
    f.field = lambda0 ? Field::Q : Field::Qt;
    Rat inv_fact = Rat(1) / factorial(m);
    for (int i = 0; i < A.N; ++i)
        for (int j = 0; j < A.N; ++j) {
            std::vector<std::pair<int, Scalar>> v;
            for (const auto& [k, q] : A.prod[i][j]) {
                Scalar d = q;
                for (int s = 0; s < m; ++s) d = d.derivative();
                Scalar c = lambda0 ? d.eval(*lambda0) : d;
                c = c * Scalar::from_rat(inv_fact, f.field);
                if (!c.is_zero()) v.push_back({k, c});
            }
            f.set(i, j, std::move(v));
        }
    return f;
}

// Specialize the whole algebra at lambda0 (field Q); poles raise errors.
inline FiniteAlgebra specialize_algebra(const FiniteAlgebra& A, const Rat& lambda0) {
    FiniteAlgebra B;
    B.N = A.N;
    B.field = Field::Q;
    B.unit = A.unit;
    B.degree = A.degree;
    B.prod.assign(A.N, std::vector<std::vector<std::pair<int, Scalar>>>(A.N));
    for (int i = 0; i < A.N; ++i)
        for (int j = 0; j < A.N; ++j)
            for (const auto& [k, q] : A.prod[i][j]) {
                Scalar c = q.eval(lambda0);
                if (!c.is_zero()) B.prod[i][j].push_back({k, c});
            }
    return B;
}

// ---------------------------------------------------------------------------
// Hochschild 2-differential residual:
// (delta f)(a,b,c) = a f(b,c) - f(ab,c) + f(a,bc) - f(a,b) c on basis triples.
// Returns the nonzero residual entries (i,j,k,l) -> coefficient.
inline std::map<std::tuple<int, int, int, int>, Scalar> hochschild_2cocycle_check(
    const FiniteAlgebra& A, const BilinearMap& f) {
    if (A.field != f.field) throw FieldError("cocycle check: field mismatch");
    std::map<std::tuple<int, int, int, int>, Scalar> residual;
    auto add = [&](int i, int j, int k, int l, const Scalar& c) {
        if (c.is_zero()) return;
        auto key = std::make_tuple(i, j, k, l);
        auto it = residual.find(key);
        if (it == residual.end())
            residual.emplace(key, c);
        else {
            it->second += c;
            if (it->second.is_zero()) residual.erase(it);
        }
    };
    for (int i = 0; i < A.N; ++i)
        for (int j = 0; j < A.N; ++j)
            for (int k = 0; k < A.N; ++k) {
                // a f(b,c)
                auto it = f.entries.find({j, k});
                if (it != f.entries.end())
                    for (const auto& [m, c] : it->second)
                        for (const auto& [l, d] : A.prod[i][m]) add(i, j, k, l, c * d);
                // - f(ab, c)
                for (const auto& [m, c] : A.prod[i][j]) {
                    auto im = f.entries.find({m, k});
                    if (im != f.entries.end())
                        for (const auto& [l, d] : im->second) add(i, j, k, l, -(c * d));
                }
                // + f(a, bc)
                for (const auto& [m, c] : A.prod[j][k]) {
                    auto im = f.entries.find({i, m});
                    if (im != f.entries.end())
                        for (const auto& [l, d] : im->second) add(i, j, k, l, c * d);
                }
                // - f(a,b) c
                auto ij = f.entries.find({i, j});
                if (ij != f.entries.end())
                    for (const auto& [m, c] : ij->second)
                        for (const auto& [l, d] : A.prod[m][k]) add(i, j, k, l, -(c * d));
            }
    return residual;
}

// d1(g)(a, b) = a g(b) - g(ab) + g(a) b, with g(e_x) = sum_y g[x][y] e_y.
inline BilinearMap d1_coboundary(const FiniteAlgebra& A,
                                 const std::vector<std::vector<Scalar>>& g) {
    BilinearMap f;
    f.N = A.N;
    f.field = A.field;
    for (int i = 0; i < A.N; ++i)
        for (int j = 0; j < A.N; ++j) {
            std::map<int, Scalar> acc;
            auto add = [&](int l, const Scalar& c) {
                if (c.is_zero()) return;
                auto it = acc.find(l);
                if (it == acc.end())
                    acc.emplace(l, c);
                else
                    it->second += c;
            };
            for (int k = 0; k < A.N; ++k) {
                if (!g[j][k].is_zero())
                    for (const auto& [l, q] : A.prod[i][k]) add(l, g[j][k] * q);
                if (!g[i][k].is_zero())
                    for (const auto& [l, q] : A.prod[k][j]) add(l, g[i][k] * q);
            }
            for (const auto& [k, q] : A.prod[i][j])
                for (int l = 0; l < A.N; ++l)
                    if (!g[k][l].is_zero()) add(l, -(q * g[k][l]));
            std::vector<std::pair<int, Scalar>> v;
            for (auto& [l, c] : acc)
                if (!c.is_zero()) v.push_back({l, c});
            f.set(i, j, std::move(v));
        }
    return f;
}

// ---------------------------------------------------------------------------
// The linear system "d1(g) = f1" in the N^2 unknowns b_xy (variable id
// x * N + y): for every (i,j,l),
//   sum_k b_ik q_kj^l - sum_k q_ij^k b_kl + sum_k b_jk q_ik^l = (f1)_ij^l.
struct CoboundarySystem {
    int N = 0;
    Field field = Field::Q;
    std::vector<SparseEq> eqs;  // deduplicated, zero rows with zero rhs dropped
    long raw_count = 0;         // nonzero equations before merging duplicates
};

inline CoboundarySystem coboundary_system(const FiniteAlgebra& A,
                                          const BilinearMap& f1) {
    if (A.field != f1.field) throw FieldError("coboundary system: field mismatch");
    CoboundarySystem S;
    S.N = A.N;
    S.field = A.field;
    std::set<std::string> seen;
    for (int i = 0; i < A.N; ++i)
        for (int j = 0; j < A.N; ++j)
            for (int l = 0; l < A.N; ++l) {
                SparseEq e;
                e.rhs = f1.entry(i, j, l);
                auto add = [&](int var, const Scalar& c) {
                    if (c.is_zero()) return;
                    auto it = e.lhs.find(var);
                    if (it == e.lhs.end())
                        e.lhs.emplace(var, c);
                    else {
                        it->second += c;
                        if (it->second.is_zero()) e.lhs.erase(it);
                    }
                };
                for (int k = 0; k < A.N; ++k) {
                    Scalar qkj = A.entry(k, j, l);
                    if (!qkj.is_zero()) add(i * A.N + k, qkj);
                    Scalar qik = A.entry(i, k, l);
                    if (!qik.is_zero()) add(j * A.N + k, qik);
                }
                for (const auto& [k, q] : A.prod[i][j]) add(k * A.N + l, -q);
                if (e.lhs.empty() && e.rhs.is_zero()) continue;
                ++S.raw_count;
                // Canonical key: scale so the first coefficient is one.
                SparseEq norm = e;
                Scalar lead = norm.lhs.empty() ? norm.rhs : norm.lhs.begin()->second;
                for (auto& [v, c] : norm.lhs) c = c / lead;
                norm.rhs = norm.rhs / lead;
                std::string key;
                for (const auto& [v, c] : norm.lhs)
                    key += std::to_string(v) + ":" + c.to_string() + ";";
                key += "=" + norm.rhs.to_string();
                if (!seen.insert(key).second) continue;
                S.eqs.push_back(std::move(e));
            }
    return S;
}

struct DeformVerdict {
    bool solvable = false;
    std::vector<std::vector<Scalar>> witness;  // g, when solvable
    bool witness_verified = false;
    std::string inconsistency_row;  // reduced row "0 = c", when inconsistent
    long equation_count = 0;
    int unknown_count = 0;
    std::vector<Poly> certificate;
};

// Exact verdict.  The product is graded, so each equation touches only
// unknowns b_xy with a fixed degree shift degree(y) - degree(x), and the
// right-hand side lives in the shift-zero part; blocks without a nonzero
// right-hand side are satisfied by zero, so only inhomogeneous blocks are
// eliminated.
inline DeformVerdict coboundary_verdict(const FiniteAlgebra& A,
                                        const BilinearMap& f1) {
    CoboundarySystem S = coboundary_system(A, f1);
    DeformVerdict v;
    v.equation_count = S.raw_count;
    v.unknown_count = A.N * A.N;
    auto shift_of = [&](int var) {
        int x = var / A.N, y = var % A.N;
        return A.degree[y] - A.degree[x];
    };
    std::map<int, std::vector<SparseEq>> blocks;
    std::vector<SparseEq> mixed;
    for (const auto& e : S.eqs) {
        if (e.lhs.empty()) {
            // 0 = c with c != 0: immediately inconsistent.
            v.solvable = false;
            v.inconsistency_row = "0 = " + e.rhs.to_string();
            return v;
        }
        int s = shift_of(e.lhs.begin()->first);
        bool pure = true;
        for (const auto& [var, c] : e.lhs)
            if (shift_of(var) != s) pure = false;
        if (pure)
            blocks[s].push_back(e);
        else
            mixed.push_back(e);
    }
    std::vector<Scalar> full(A.N * A.N, Scalar::zero(A.field));
    std::set<std::string> seen_cert;
    auto solve_block = [&](const std::vector<SparseEq>& eqs) -> bool {
        // Renumber the touched variables densely.
        std::map<int, int> to_local;
        std::vector<int> to_global;
        for (const auto& e : eqs)
            for (const auto& [var, c] : e.lhs)
                if (to_local.emplace(var, static_cast<int>(to_global.size())).second)
                    to_global.push_back(var);
        std::vector<SparseEq> local(eqs.size());
        for (size_t r = 0; r < eqs.size(); ++r) {
            local[r].rhs = eqs[r].rhs;
            for (const auto& [var, c] : eqs[r].lhs) local[r].lhs[to_local[var]] = c;
        }
        SparseVerdict sv = sparse_solve(local, static_cast<int>(to_global.size()), A.field);
        for (const auto& p : sv.certificate)
            if (seen_cert.insert(p.to_string()).second) v.certificate.push_back(p);
        if (!sv.solvable) {
            v.inconsistency_row = "0 = " + sv.witness.rhs.to_string();
            return false;
        }
        for (size_t c = 0; c < to_global.size(); ++c) full[to_global[c]] = sv.particular[c];
        return true;
    };
    for (const auto& [s, eqs] : blocks) {
        bool inhomogeneous = false;
        for (const auto& e : eqs)
            if (!e.rhs.is_zero()) inhomogeneous = true;
        if (!inhomogeneous) continue;  // zero assignment works
        if (!solve_block(eqs)) {
            v.solvable = false;
            return v;
        }
    }
    if (!mixed.empty() && !solve_block(mixed)) {
        v.solvable = false;
        return v;
    }
    v.solvable = true;
    v.witness.assign(A.N, std::vector<Scalar>(A.N, Scalar::zero(A.field)));
    for (int x = 0; x < A.N; ++x)
        for (int y = 0; y < A.N; ++y) v.witness[x][y] = full[x * A.N + y];
    v.witness_verified = (d1_coboundary(A, v.witness) == f1);
    return v;
}

inline nlohmann::ordered_json deform_verdict_to_json(const std::string& family,
                                                     const nlohmann::ordered_json& mode,
                                                     const DeformVerdict& v) {
    nlohmann::ordered_json out;
    out["family"] = family;
    out["mode"] = mode;
    out["solvable"] = v.solvable;
    if (v.solvable) {
        nlohmann::ordered_json w = nlohmann::ordered_json::array();
        for (const auto& row : v.witness) {
            nlohmann::ordered_json jr = nlohmann::ordered_json::array();
            for (const auto& c : row) jr.push_back(c.to_string());
            w.push_back(jr);
        }
        out["witness"] = w;
        out["witness_verified"] = v.witness_verified;
    } else {
        out["inconsistency_row"] = v.inconsistency_row;
    }
    out["equation_count"] = v.equation_count;
    out["unknown_count"] = v.unknown_count;
    nlohmann::ordered_json cert = nlohmann::ordered_json::array();
    for (const auto& p : v.certificate) cert.push_back(p.to_string());
    out["genericity_certificate"] = cert;
    return out;
}

}  // namespace nilcoh
