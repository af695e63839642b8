#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nilcoh/errors.hpp"
#include "nilcoh/linalg.hpp"
#include "nilcoh/scalar.hpp"

namespace nilcoh {

// Finite-dimensional Lie algebra given by structure constants on a fixed
// basis x_1..x_n.  Only brackets [x_i, x_j] with i < j are stored;
// antisymmetry is implicit.  The Jacobi identity is validated at
// construction time by the parser and by specialize().
struct LieAlgebra {
    std::string name;
    int dim = 0;
    Field field = Field::Q;
    // (i, j) with i < j -> expansion of [x_i, x_j], length dim.  Only pairs
    // with a nonzero bracket are present.
    std::map<std::pair<int, int>, std::vector<Scalar>> brackets;
    // Grading weights per basis element (present for Carnot algebras).
    std::vector<int> weights;
    std::vector<Rat> excluded;  // declared excluded parameter values
    bool has_param = false;

    std::vector<Scalar> zero_vector() const {
        return std::vector<Scalar>(dim, Scalar::zero(field));
    }
    std::vector<Scalar> basis_vector(int i) const {
        auto v = zero_vector();
        v[i - 1] = Scalar::one(field);
        return v;
    }

    // [x_i, x_j] for any i, j (antisymmetry applied).
    std::vector<Scalar> bracket_basis(int i, int j) const {
        if (i == j) return zero_vector();
        bool flip = i > j;
        if (flip) std::swap(i, j);
        auto it = brackets.find({i, j});
        if (it == brackets.end()) return zero_vector();
        auto v = it->second;
        if (flip)
            for (auto& x : v) x = -x;
        return v;
    }

    std::vector<Scalar> bracket(const std::vector<Scalar>& u,
                                const std::vector<Scalar>& v) const {
        auto out = zero_vector();
        for (const auto& [ij, w] : brackets) {
            auto [i, j] = ij;
            Scalar c = u[i - 1] * v[j - 1] - u[j - 1] * v[i - 1];
            if (c.is_zero()) continue;
            for (int k = 0; k < dim; ++k)
                if (!w[k].is_zero()) out[k] += c * w[k];
        }
        return out;
    }
};

// [[x_i,x_j],x_k] + [[x_j,x_k],x_i] + [[x_k,x_i],x_j].
inline std::vector<Scalar> jacobi_residual(const LieAlgebra& A, int i, int j, int k) {
    auto r1 = A.bracket(A.bracket_basis(i, j), A.basis_vector(k));
    auto r2 = A.bracket(A.bracket_basis(j, k), A.basis_vector(i));
    auto r3 = A.bracket(A.bracket_basis(k, i), A.basis_vector(j));
    for (int m = 0; m < A.dim; ++m) r1[m] = r1[m] + r2[m] + r3[m];
    return r1;
}

inline void validate_jacobi(const LieAlgebra& A) {
    for (int i = 1; i <= A.dim; ++i)
        for (int j = i + 1; j <= A.dim; ++j)
            for (int k = j + 1; k <= A.dim; ++k) {
                auto r = jacobi_residual(A, i, j, k);
                for (int m = 0; m < A.dim; ++m)
                    if (!r[m].is_zero()) {
                        std::ostringstream os;
                        os << "Jacobi identity fails for triple (" << i << "," << j
                           << "," << k << "): residual has coefficient "
                           << r[m].to_string() << " at x" << (m + 1);
                        throw DataError(os.str());
                    }
            }
}

// ---------------------------------------------------------------------------
// Definition-file parser.  Grammar (one statement per line, '#' comments):
//   name <identifier>
//   dim <n>
//   param t [excluded <rational> ...]
//   [i,j] = <scalar-coefficient combination of x<k>>
inline LieAlgebra parse_lie(const std::string& text) {
    LieAlgebra A;
    bool have_dim = false;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    std::vector<std::tuple<int, int, int, std::string>> bracket_lines;  // line, i, j, rhs

    // First pass: headers, so the field tag is known before parsing brackets.
    std::vector<std::pair<int, std::string>> lines;
    while (std::getline(in, raw)) {
        ++lineno;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        size_t b = raw.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        size_t e = raw.find_last_not_of(" \t\r");
        lines.emplace_back(lineno, raw.substr(b, e - b + 1));
    }
    for (const auto& [ln, line] : lines) {
        std::istringstream ls(line);
        std::string head;
        ls >> head;
        if (head == "name") {
            ls >> A.name;
            if (A.name.empty()) throw ParseError("expected a name", ln, 6);
        } else if (head == "dim") {
            if (!(ls >> A.dim) || A.dim < 0)
                throw ParseError("expected a non-negative dimension", ln, 5);
            have_dim = true;
        } else if (head == "param") {
            std::string p;
            ls >> p;
            if (p != "t")
                throw ParseError("only the parameter name 't' is supported", ln, 7);
            A.field = Field::Qt;
            A.has_param = true;
            std::string kw;
            if (ls >> kw) {
                if (kw != "excluded")
                    throw ParseError("expected 'excluded' after parameter name", ln, 9);
                std::string val;
                while (ls >> val)
                    A.excluded.push_back(parse_scalar(val, Field::Q, ln).rat_value());
            }
        } else if (head.size() && head[0] == '[') {
            // Parsed in the second pass below.
        } else {
            throw ParseError("unknown statement '" + head + "'", ln, 1);
        }
    }
    if (!have_dim) throw ParseError("missing 'dim' statement", lineno ? lineno : 1, 1);

    for (const auto& [ln, line] : lines) {
        if (line.empty() || line[0] != '[') continue;
        size_t pos = 1;
        auto read_int = [&](const char* what) {
            size_t start = pos;
            while (pos < line.size() && std::isdigit(static_cast<unsigned char>(line[pos])))
                ++pos;
            if (pos == start)
                throw ParseError(std::string("expected ") + what, ln,
                                 static_cast<int>(pos) + 1);
            return std::stoi(line.substr(start, pos - start));
        };
        auto expect = [&](char c) {
            while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
            if (pos >= line.size() || line[pos] != c)
                throw ParseError(std::string("expected '") + c + "'", ln,
                                 static_cast<int>(pos) + 1);
            ++pos;
        };
        int i = read_int("bracket index");
        expect(',');
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
        int j = read_int("bracket index");
        expect(']');
        expect('=');
        if (i < 1 || j < 1 || i > A.dim || j > A.dim)
            throw ParseError("bracket index out of range 1.." + std::to_string(A.dim),
                             ln, 2);
        if (i >= j)
            throw ParseError("bracket indices must satisfy i < j", ln, 2);
        if (A.brackets.count({i, j}))
            throw ParseError("duplicate bracket [" + std::to_string(i) + "," +
                                 std::to_string(j) + "]",
                             ln, 1);
        std::string rhs = line.substr(pos);
        LinComb lc = parse_lincomb(rhs, A.field, ln, static_cast<int>(pos));
        if (!lc.constant.is_zero())
            throw ParseError("bracket right-hand side has a constant term", ln,
                             static_cast<int>(pos) + 1);
        std::vector<Scalar> v(A.dim, Scalar::zero(A.field));
        bool nonzero = false;
        for (const auto& [k, c] : lc.terms) {
            if (k < 1 || k > A.dim)
                throw ParseError("basis index x" + std::to_string(k) +
                                     " out of range 1.." + std::to_string(A.dim),
                                 ln, static_cast<int>(pos) + 1);
            v[k - 1] = c;
            if (!c.is_zero()) nonzero = true;
        }
        if (nonzero) A.brackets[{i, j}] = std::move(v);
    }
    validate_jacobi(A);
    return A;
}

// ---------------------------------------------------------------------------
// Lower central series g = g_1 >= g_2 >= ... ; g_{i+1} = [g, g_i].
struct Flag {
    std::vector<Subspace> terms;  // terms[0] = g_1 (full space), ...
    std::vector<int> dims;
    bool nilpotent = false;
};

inline Flag lcs(const LieAlgebra& A) {
    Flag F;
    std::vector<std::vector<Scalar>> full;
    for (int i = 1; i <= A.dim; ++i) full.push_back(A.basis_vector(i));
    Subspace cur = Subspace::span(A.dim, full, A.field);
    F.terms.push_back(cur);
    F.dims.push_back(cur.dim());
    while (true) {
        std::vector<std::vector<Scalar>> next;
        for (int g = 1; g <= A.dim; ++g)
            for (const auto& v : cur.basis) next.push_back(A.bracket(A.basis_vector(g), v));
        Subspace nxt = Subspace::span(A.dim, next, A.field);
        if (nxt.dim() == 0) {
            F.nilpotent = true;
            return F;
        }
        if (nxt.dim() >= F.dims.back()) {
            F.nilpotent = false;  // descent stalled: not nilpotent
            return F;
        }
        F.terms.push_back(nxt);
        F.dims.push_back(nxt.dim());
        cur = std::move(nxt);
    }
}

// ---------------------------------------------------------------------------
// Carnot (associated graded) algebra on the canonical layer-adapted basis:
// within each layer g_i/g_{i+1} the deterministic echelon complement, layers
// concatenated and relabeled 1..n.
inline LieAlgebra carnot(const LieAlgebra& A) {
    Flag F = lcs(A);
    if (!F.nilpotent) throw DataError("carnot: algebra is not nilpotent");
    int c = static_cast<int>(F.terms.size());
    std::vector<std::vector<Scalar>> adapted;
    std::vector<int> wt;
    for (int i = 0; i < c; ++i) {
        const Subspace& U = F.terms[i];
        std::set<int> wp;
        if (i + 1 < c)
            wp.insert(F.terms[i + 1].pivots.begin(), F.terms[i + 1].pivots.end());
        for (size_t r = 0; r < U.basis.size(); ++r) {
            if (wp.count(U.pivots[r])) continue;
            adapted.push_back(U.basis[r]);
            wt.push_back(i + 1);
        }
    }
    int n = A.dim;
    // Inverse of the change-of-basis matrix (columns = adapted vectors).
    Matrix B(n, n, A.field);
    for (int col = 0; col < n; ++col)
        for (int row = 0; row < n; ++row) B.at(row, col) = adapted[col][row];
    Matrix aug(n, 2 * n, A.field);
    for (int r = 0; r < n; ++r) {
        for (int cc = 0; cc < n; ++cc) aug.at(r, cc) = B.at(r, cc);
        aug.at(r, n + r) = Scalar::one(A.field);
    }
    RrefResult R = rref(aug);
    if (static_cast<int>(R.pivots.size()) != n || R.pivots.back() >= n)
        throw DataError("carnot: adapted basis is singular");
    auto inv_apply = [&](const std::vector<Scalar>& v) {
        std::vector<Scalar> out(n, Scalar::zero(A.field));
        for (int r = 0; r < n; ++r)
            for (int cc = 0; cc < n; ++cc) out[r] += R.rref.at(r, n + cc) * v[cc];
        return out;
    };
    LieAlgebra C;
    C.name = "Car(" + A.name + ")";
    C.dim = n;
    C.field = A.field;
    C.weights = wt;
    C.has_param = A.has_param;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            int w = wt[a] + wt[b];
            auto br = A.bracket(adapted[a], adapted[b]);
            auto coords = inv_apply(br);
            std::vector<Scalar> ent(n, Scalar::zero(A.field));
            bool nonzero = false;
            for (int k = 0; k < n; ++k) {
                if (coords[k].is_zero()) continue;
                if (wt[k] < w)
                    throw DataError("carnot: bracket left the expected filtration level");
                if (wt[k] == w) {
                    ent[k] = coords[k];
                    nonzero = true;
                }
                // Components of weight > w are killed by the quotient.
            }
            if (nonzero) C.brackets[{a + 1, b + 1}] = std::move(ent);
        }
    validate_jacobi(C);
    return C;
}

// ---------------------------------------------------------------------------
inline bool is_excluded_value(const LieAlgebra& A, const Rat& lambda) {
    for (const auto& v : A.excluded)
        if (v == lambda) return true;
    return false;
}

// Evaluate all structure constants at t = lambda and re-validate Jacobi.
inline LieAlgebra specialize(const LieAlgebra& A, const Rat& lambda) {
    if (A.field != Field::Qt)
        throw FieldError("specialize: algebra is already over Q");
    LieAlgebra S;
    S.name = A.name + "@" + to_string(lambda);
    S.dim = A.dim;
    S.field = Field::Q;
    S.weights = A.weights;
    for (const auto& [ij, v] : A.brackets) {
        std::vector<Scalar> w(A.dim, Scalar::zero(Field::Q));
        bool nonzero = false;
        for (int k = 0; k < A.dim; ++k) {
            if (v[k].is_zero()) continue;
            w[k] = v[k].eval(lambda);
            if (!w[k].is_zero()) nonzero = true;
        }
        if (nonzero) S.brackets[ij] = std::move(w);
    }
    validate_jacobi(S);
    return S;
}

inline LieAlgebra direct_sum(const LieAlgebra& A, const LieAlgebra& B) {
    if (A.field != B.field) throw FieldError("direct_sum: field mismatch");
    LieAlgebra S;
    S.name = A.name + "+" + B.name;
    S.dim = A.dim + B.dim;
    S.field = A.field;
    for (const auto& [ij, v] : A.brackets) {
        std::vector<Scalar> w(S.dim, Scalar::zero(S.field));
        for (int k = 0; k < A.dim; ++k) w[k] = v[k];
        S.brackets[ij] = std::move(w);
    }
    for (const auto& [ij, v] : B.brackets) {
        std::vector<Scalar> w(S.dim, Scalar::zero(S.field));
        for (int k = 0; k < B.dim; ++k) w[A.dim + k] = v[k];
        S.brackets[{ij.first + A.dim, ij.second + A.dim}] = std::move(w);
    }
    return S;
}

// Render back to the definition-file grammar (used for reports and tests).
inline std::string to_definition(const LieAlgebra& A) {
    std::ostringstream os;
    if (!A.name.empty()) os << "name " << A.name << "\n";
    os << "dim " << A.dim << "\n";
    if (A.field == Field::Qt) {
        os << "param t";
        if (!A.excluded.empty()) {
            os << " excluded";
            for (const auto& v : A.excluded) os << " " << to_string(v);
        }
        os << "\n";
    }
    for (const auto& [ij, v] : A.brackets) {
        os << "[" << ij.first << "," << ij.second << "] = ";
        bool first = true;
        for (int k = 0; k < A.dim; ++k) {
            if (v[k].is_zero()) continue;
            std::string c = v[k].to_string();
            if (!first) os << " + ";
            if (c == "1")
                os << "x" << (k + 1);
            else if (c == "-1")
                os << "-x" << (k + 1);
            else {
                bool needs_parens = c.find_first_of("+-/") != std::string::npos &&
                                    !(c.size() && c[0] == '-' &&
                                      c.find_first_of("+-/", 1) == std::string::npos);
                if (needs_parens)
                    os << "(" << c << ")";
                else
                    os << c;
                os << "*x" << (k + 1);
            }
            first = false;
        }
        if (first) os << "0";
        os << "\n";
    }
    return os.str();
}

}  // namespace nilcoh
