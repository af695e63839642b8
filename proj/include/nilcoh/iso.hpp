#pragma once

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nilcoh/cohomology.hpp"
#include "nilcoh/errors.hpp"

namespace nilcoh {

// ---------------------------------------------------------------------------
// Variables of a graded-isomorphism system: one block of betti_i^2 unknowns
// a_i_j_k per degree i >= 1, meaning "coefficient of target basis class k in
// the image of source basis class j in degree i".  Fixed lexicographic order
// by (degree, source j, target k).
struct VarInfo {
    int degree = 0;
    int row = 0;  // source index j (1-based)
    int col = 0;  // target index k (1-based)
    std::string name;
};

inline std::string iso_var_name(int i, int j, int k) {
    return "a_" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(k);
}

// Multivariate polynomial over Scalar with monomials stored as sorted lists
// of variable ids (repetition = power).  Canonical form: no zero
// coefficients; normalized so the coefficient of the first monomial in the
// fixed order is one.
struct MPoly {
    Field field = Field::Q;
    std::map<std::vector<int>, Scalar> terms;

    explicit MPoly(Field f = Field::Q) : field(f) {}

    bool is_zero() const { return terms.empty(); }

    void add_term(std::vector<int> mono, const Scalar& c) {
        if (c.is_zero()) return;
        std::sort(mono.begin(), mono.end());
        auto it = terms.find(mono);
        if (it == terms.end()) {
            terms.emplace(std::move(mono), c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms.erase(it);
        }
    }

    // Divide through by the leading (first-in-order) coefficient.
    void normalize() {
        if (terms.empty()) return;
        Scalar lead = terms.begin()->second;
        if (lead.is_one()) return;
        for (auto& [m, c] : terms) c = c / lead;
    }

    // Substitute a value for one variable.
    MPoly substituted(int var, const Scalar& value) const {
        MPoly out(field);
        for (const auto& [m, c] : terms) {
            std::vector<int> rest;
            Scalar coeff = c;
            for (int v : m) {
                if (v == var)
                    coeff = coeff * value;
                else
                    rest.push_back(v);
            }
            out.add_term(std::move(rest), coeff);
        }
        return out;
    }

    Scalar eval(const std::vector<Scalar>& values) const {
        Scalar out = Scalar::zero(field);
        for (const auto& [m, c] : terms) {
            Scalar v = c;
            for (int var : m) v = v * values[var];
            out += v;
        }
        return out;
    }

    std::vector<int> variables() const {
        std::set<int> s;
        for (const auto& [m, c] : terms) s.insert(m.begin(), m.end());
        return std::vector<int>(s.begin(), s.end());
    }

    std::string key() const {
        std::string out;
        for (const auto& [m, c] : terms) {
            out += "[";
            for (int v : m) out += std::to_string(v) + ",";
            out += "]" + c.to_string() + ";";
        }
        return out;
    }
};

struct LedgerEntry {
    std::string var;
    std::string value;  // Scalar rendered as text
    std::string rule;
};

struct PolySystem {
    Field field = Field::Q;
    std::vector<VarInfo> vars;
    std::map<std::string, int> var_index;
    std::vector<int> betti;  // block sizes per degree, index 0..n
    std::vector<MPoly> equations;
    std::set<std::string> equation_keys;
    std::vector<LedgerEntry> ledger;
    bool inconsistent = false;
    std::string witness;

    int var_id(const std::string& name) const {
        auto it = var_index.find(name);
        if (it == var_index.end()) throw DataError("unknown variable '" + name + "'");
        return it->second;
    }

    // Canonicalize, deduplicate, drop zero equations.
    void insert_equation(MPoly e) {
        if (e.is_zero()) return;
        e.normalize();
        if (e.terms.size() == 1 && e.terms.begin()->first.empty()) {
            inconsistent = true;
            witness = "equation reduces to a nonzero constant";
            return;
        }
        if (!equation_keys.insert(e.key()).second) return;
        equations.push_back(std::move(e));
    }

    void rebuild_index() {
        var_index.clear();
        for (size_t i = 0; i < vars.size(); ++i) var_index[vars[i].name] = static_cast<int>(i);
    }
};

inline void init_system_vars(PolySystem& S, const std::vector<int>& betti) {
    S.betti = betti;
    int n = static_cast<int>(betti.size()) - 1;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= betti[i]; ++j)
            for (int k = 1; k <= betti[i]; ++k) {
                VarInfo v;
                v.degree = i;
                v.row = j;
                v.col = k;
                v.name = iso_var_name(i, j, k);
                S.vars.push_back(std::move(v));
            }
    S.rebuild_index();
}

// ---------------------------------------------------------------------------
// System generation.  For each degree pair (p,q), p,q >= 1, p+q <= n, and all
// (j, j', k): coefficient of target class k in
//   phi(e_p^j cup_src e_q^j') - phi(e_p^j) cup_tgt phi(e_q^j')
// must vanish.  Zero-normalizing equations are dropped; duplicates merged.
inline PolySystem build_graded_iso_system(const CohomologyModel& src,
                                          const CohomologyModel& tgt) {
    if (src.field != tgt.field)
        throw FieldError("isomorphism system requires a common scalar field");
    PolySystem S;
    S.field = src.field;
    if (src.betti != tgt.betti) {
        S.betti = src.betti;
        S.inconsistent = true;
        std::string degs;
        for (size_t i = 0; i < src.betti.size(); ++i)
            if (src.betti[i] != tgt.betti[i]) degs += (degs.empty() ? "" : ",") + std::to_string(i);
        S.witness = "Betti vectors differ in degrees " + degs +
                    "; no graded linear bijection exists";
        return S;
    }
    init_system_vars(S, src.betti);
    int n = src.n;
    for (int p = 1; p <= n; ++p) {
        for (int q = p; p + q <= n; ++q) {
            CupTable Gs = cup_table(src, p, q);
            CupTable Gt = cup_table(tgt, p, q);
            int bp = src.betti[p], bq = src.betti[q], br = src.betti[p + q];
            for (int j = 1; j <= bp; ++j)
                for (int jp = 1; jp <= bq; ++jp)
                    for (int k = 1; k <= br; ++k) {
                        MPoly e(S.field);
                        for (int m = 1; m <= br; ++m) {
                            const Scalar& g = Gs.gamma[j - 1][jp - 1][m - 1];
                            if (!g.is_zero())
                                e.add_term({S.var_id(iso_var_name(p + q, m, k))}, g);
                        }
                        for (int u = 1; u <= bp; ++u)
                            for (int v = 1; v <= bq; ++v) {
                                const Scalar& g = Gt.gamma[u - 1][v - 1][k - 1];
                                if (!g.is_zero())
                                    e.add_term({S.var_id(iso_var_name(p, j, u)),
                                                S.var_id(iso_var_name(q, jp, v))},
                                               -g);
                            }
                        S.insert_equation(std::move(e));
                    }
        }
    }
    return S;
}

// ---------------------------------------------------------------------------
// Reduction.  R1: a single-monomial equation involving one distinct variable
// forces that variable to zero.  R2: single-monomial equations c*x*y = 0 are
// disjunctions; if the partners of y cover a whole row or column of a
// diagonal block, then y = 0 (otherwise that block would be singular).
inline void apply_forcing(PolySystem& S, int var, const Scalar& value,
                          const std::string& rule) {
    LedgerEntry le;
    le.var = S.vars[var].name;
    le.value = value.to_string();
    le.rule = rule;
    S.ledger.push_back(std::move(le));
    std::vector<MPoly> old;
    old.swap(S.equations);
    S.equation_keys.clear();
    for (auto& e : old) S.insert_equation(e.substituted(var, value));
}

inline bool is_forced(const PolySystem& S, const std::string& name) {
    for (const auto& le : S.ledger)
        if (le.var == name) return true;
    return false;
}

inline PolySystem reduce_system(const PolySystem& input) {
    PolySystem S = input;
    if (S.inconsistent) return S;
    Scalar zero = Scalar::zero(S.field);
    bool changed = true;
    while (changed && !S.inconsistent) {
        changed = false;
        // R1 (and the single-variable power case): one monomial, one variable.
        for (size_t ei = 0; ei < S.equations.size(); ++ei) {
            const MPoly& e = S.equations[ei];
            if (e.terms.size() != 1) continue;
            const auto& mono = e.terms.begin()->first;
            if (mono.empty()) continue;
            bool single = std::all_of(mono.begin(), mono.end(),
                                      [&](int v) { return v == mono[0]; });
            if (!single) continue;
            apply_forcing(S, mono[0], zero, "R1: scalar multiple of a single variable");
            changed = true;
            break;
        }
        if (changed || S.inconsistent) continue;
        // R2: collect disjunction partners from two-variable monomial equations.
        std::map<int, std::set<int>> partners;
        for (const auto& e : S.equations) {
            if (e.terms.size() != 1) continue;
            const auto& mono = e.terms.begin()->first;
            if (mono.size() != 2 || mono[0] == mono[1]) continue;
            partners[mono[0]].insert(mono[1]);
            partners[mono[1]].insert(mono[0]);
        }
        for (const auto& [y, xs] : partners) {
            // Does {x_a} contain a full row or column of some diagonal block?
            bool force = false;
            for (size_t i = 1; i < S.betti.size() && !force; ++i) {
                int b = S.betti[i];
                if (b == 0) continue;
                for (int j = 1; j <= b && !force; ++j) {
                    bool row_all = true, col_all = true;
                    for (int k = 1; k <= b; ++k) {
                        int vr = S.var_id(iso_var_name(static_cast<int>(i), j, k));
                        int vc = S.var_id(iso_var_name(static_cast<int>(i), k, j));
                        if (!xs.count(vr)) row_all = false;
                        if (!xs.count(vc)) col_all = false;
                    }
                    if (row_all || col_all) force = true;
                }
            }
            if (force) {
                apply_forcing(S, y, zero,
                              "R2: all disjunction partners span a block row/column");
                changed = true;
                break;
            }
        }
    }
    return S;
}

// ---------------------------------------------------------------------------
// Verification.
struct IsoVerdict {
    bool equations_vanish = false;
    std::vector<Scalar> block_determinants;  // per degree 1..n
    bool isomorphism = false;
};

// Determinant by Gaussian elimination over the exact field.
inline Scalar dense_det(std::vector<std::vector<Scalar>> m, Field field) {
    int n = static_cast<int>(m.size());
    Scalar det = Scalar::one(field);
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = c; r < n; ++r)
            if (!m[r][c].is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0) return Scalar::zero(field);
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det = det * m[c][c];
        for (int r = c + 1; r < n; ++r) {
            if (m[r][c].is_zero()) continue;
            Scalar f = m[r][c] / m[c][c];
            for (int k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return det;
}

inline std::vector<Scalar> full_assignment(const PolySystem& S,
                                           const std::map<std::string, Scalar>& a) {
    std::vector<Scalar> values(S.vars.size(), Scalar::zero(S.field));
    std::vector<bool> have(S.vars.size(), false);
    for (const auto& [name, val] : a) {
        int id = S.var_id(name);
        values[id] = val;
        have[id] = true;
    }
    for (size_t i = 0; i < S.vars.size(); ++i)
        if (!have[i])
            throw DataError("assignment is missing variable '" + S.vars[i].name + "'");
    return values;
}

inline IsoVerdict verify_solution(const PolySystem& S,
                                  const std::map<std::string, Scalar>& assignment) {
    std::vector<Scalar> values = full_assignment(S, assignment);
    IsoVerdict v;
    v.equations_vanish = true;
    for (const auto& e : S.equations)
        if (!e.eval(values).is_zero()) {
            v.equations_vanish = false;
            break;
        }
    bool nonsingular = true;
    for (size_t i = 1; i < S.betti.size(); ++i) {
        int b = S.betti[i];
        if (b == 0) continue;
        std::vector<std::vector<Scalar>> block(b, std::vector<Scalar>(b, Scalar::zero(S.field)));
        for (int j = 1; j <= b; ++j)
            for (int k = 1; k <= b; ++k)
                block[j - 1][k - 1] = values[S.var_id(iso_var_name(static_cast<int>(i), j, k))];
        Scalar d = dense_det(std::move(block), S.field);
        if (d.is_zero()) nonsingular = false;
        v.block_determinants.push_back(d);
    }
    v.isomorphism = v.equations_vanish && nonsingular && !S.inconsistent;
    return v;
}

// ---------------------------------------------------------------------------
// Guided search: apply guess fragments in order, re-reduce, propagate
// equations that become linear in a single variable, default the remaining
// free variables to one, and verify against the input system.
struct SearchResult {
    bool found = false;
    std::string failure;
    std::map<std::string, Scalar> assignment;
    IsoVerdict verdict;
};

inline SearchResult guided_search(const PolySystem& input,
                                  const std::vector<std::pair<std::string, Scalar>>& guesses) {
    SearchResult res;
    PolySystem S = reduce_system(input);
    for (const auto& [name, val] : guesses) {
        if (S.inconsistent) break;
        if (is_forced(S, name)) continue;
        apply_forcing(S, S.var_id(name), val, "guess");
        S = reduce_system(S);
    }
    // Propagate single-variable linear equations to a fixpoint, interleaved
    // with a qualified-guess phase: unresolved zero-product equations are
    // resolved by zeroing an off-diagonal factor (diagonal entries are kept,
    // since they feed the block determinants).
    bool changed = true;
    while (changed && !S.inconsistent) {
        changed = false;
        for (const auto& e : S.equations) {
            auto vars = e.variables();
            if (vars.size() != 1) continue;
            int x = vars[0];
            Scalar c = Scalar::zero(S.field), d = Scalar::zero(S.field);
            bool linear = true;
            for (const auto& [m, coef] : e.terms) {
                if (m.empty())
                    d += coef;
                else if (m.size() == 1)
                    c += coef;
                else
                    linear = false;
            }
            if (!linear || c.is_zero()) continue;
            apply_forcing(S, x, -(d / c), "linear propagation");
            S = reduce_system(S);
            changed = true;
            break;
        }
        if (changed) continue;
        for (const auto& e : S.equations) {
            if (e.terms.size() != 1) continue;
            const auto& mono = e.terms.begin()->first;
            if (mono.size() != 2 || mono[0] == mono[1]) continue;
            int pick = -1;
            for (int v : mono)
                if (S.vars[v].row != S.vars[v].col) {
                    pick = v;
                    break;
                }
            if (pick < 0) continue;  // both diagonal: leave for verification
            apply_forcing(S, pick, Scalar::zero(S.field),
                          "qualified guess: zero off-diagonal product factor");
            S = reduce_system(S);
            changed = true;
            break;
        }
    }
    if (S.inconsistent) {
        res.failure = "contradiction: " + S.witness;
        return res;
    }
    std::map<std::string, Scalar> forced;
    for (const auto& le : S.ledger) {
        // Parse the recorded value back; ledger stores canonical Scalar text.
        forced[le.var] = parse_scalar(le.value, S.field);
    }
    // First attempt: every free variable defaults to one.  Fallback: free
    // off-diagonal entries default to zero (diagonal entries stay one), which
    // recovers block-diagonal solutions such as the identity.
    for (int attempt = 0; attempt < 2; ++attempt) {
        std::map<std::string, Scalar> a = forced;
        for (const auto& v : input.vars)
            if (!a.count(v.name))
                a[v.name] = (attempt == 1 && v.row != v.col) ? Scalar::zero(S.field)
                                                            : Scalar::one(S.field);
        IsoVerdict verdict = verify_solution(input, a);
        if (verdict.isomorphism || attempt == 1) {
            res.assignment = a;
            res.verdict = verdict;
            res.found = verdict.isomorphism;
        }
        if (verdict.isomorphism) break;
    }
    if (!res.found) res.failure = "no solution under guesses";
    return res;
}

// ---------------------------------------------------------------------------
// Serialization.
inline nlohmann::ordered_json system_to_json(const PolySystem& S) {
    nlohmann::ordered_json out;
    nlohmann::ordered_json vars = nlohmann::ordered_json::array();
    for (const auto& v : S.vars) vars.push_back(v.name);
    out["variables"] = vars;
    nlohmann::ordered_json eqs = nlohmann::ordered_json::array();
    for (const auto& e : S.equations) {
        nlohmann::ordered_json je = nlohmann::ordered_json::array();
        for (const auto& [m, c] : e.terms) {
            nlohmann::ordered_json mono;
            mono["coeff"] = c.to_string();
            nlohmann::ordered_json names = nlohmann::ordered_json::array();
            for (int v : m) names.push_back(S.vars[v].name);
            mono["vars"] = names;
            je.push_back(mono);
        }
        eqs.push_back(je);
    }
    out["equations"] = eqs;
    nlohmann::ordered_json ledger = nlohmann::ordered_json::array();
    for (const auto& le : S.ledger) {
        nlohmann::ordered_json jl;
        jl["var"] = le.var;
        jl["value"] = le.value;
        jl["rule"] = le.rule;
        ledger.push_back(jl);
    }
    out["ledger"] = ledger;
    if (S.inconsistent) out["inconsistent"] = S.witness;
    return out;
}

inline PolySystem system_from_json(const nlohmann::json& j, Field field) {
    PolySystem S;
    S.field = field;
    int max_degree = 0;
    std::map<int, int> block;  // degree -> max index seen
    for (const auto& name : j.at("variables")) {
        std::string s = name.get<std::string>();
        int i, jj, k;
        if (std::sscanf(s.c_str(), "a_%d_%d_%d", &i, &jj, &k) != 3)
            throw DataError("bad variable name '" + s + "'");
        VarInfo v;
        v.degree = i;
        v.row = jj;
        v.col = k;
        v.name = s;
        S.vars.push_back(std::move(v));
        max_degree = std::max(max_degree, i);
        block[i] = std::max({block[i], jj, k});
    }
    S.rebuild_index();
    S.betti.assign(max_degree + 1, 0);
    S.betti[0] = 1;
    for (const auto& [d, b] : block) S.betti[d] = b;
    for (const auto& je : j.at("equations")) {
        MPoly e(field);
        for (const auto& mono : je) {
            Scalar c = parse_scalar(mono.at("coeff").get<std::string>(), field);
            std::vector<int> m;
            for (const auto& vn : mono.at("vars")) m.push_back(S.var_id(vn.get<std::string>()));
            e.add_term(std::move(m), c);
        }
        S.insert_equation(std::move(e));
    }
    if (j.contains("ledger"))
        for (const auto& jl : j.at("ledger")) {
            LedgerEntry le;
            le.var = jl.at("var").get<std::string>();
            le.value = jl.at("value").get<std::string>();
            le.rule = jl.at("rule").get<std::string>();
            S.ledger.push_back(std::move(le));
        }
    if (j.contains("inconsistent")) {
        S.inconsistent = true;
        S.witness = j.at("inconsistent").get<std::string>();
    }
    return S;
}

inline std::map<std::string, Scalar> assignment_from_json(const nlohmann::json& j,
                                                          Field field) {
    std::map<std::string, Scalar> out;
    for (auto it = j.begin(); it != j.end(); ++it)
        out[it.key()] = parse_scalar(it.value().get<std::string>(), field);
    return out;
}

inline nlohmann::ordered_json verdict_to_json(const IsoVerdict& v) {
    nlohmann::ordered_json out;
    out["equations_vanish"] = v.equations_vanish;
    nlohmann::ordered_json dets = nlohmann::ordered_json::array();
    for (const auto& d : v.block_determinants) dets.push_back(d.to_string());
    out["block_determinants"] = dets;
    out["isomorphism"] = v.isomorphism;
    return out;
}

}  // namespace nilcoh
