#include <doctest.h>

#include <random>

#include "nilcoh/linalg.hpp"

using namespace nilcoh;

namespace {

Matrix random_q_matrix(std::mt19937& rng, int rows, int cols, int rank_limit = -1) {
    std::uniform_int_distribution<int> coef(-5, 5);
    Matrix M(rows, cols, Field::Q);
    if (rank_limit < 0) {
        for (auto& x : M.a) x = Scalar::from_int(coef(rng), Field::Q);
        return M;
    }
    // Product of rows x r and r x cols to bound the rank.
    std::vector<std::vector<int>> A(rows, std::vector<int>(rank_limit)),
        B(rank_limit, std::vector<int>(cols));
    for (auto& row : A)
        for (auto& x : row) x = coef(rng);
    for (auto& row : B)
        for (auto& x : row) x = coef(rng);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            long s = 0;
            for (int k = 0; k < rank_limit; ++k) s += A[r][k] * B[k][c];
            M.at(r, c) = Scalar::from_int(s, Field::Q);
        }
    return M;
}

// Independent naive Gauss-Jordan rank oracle over plain rationals.
int naive_rank(const Matrix& M) {
    std::vector<std::vector<Rat>> a(M.rows, std::vector<Rat>(M.cols));
    for (int r = 0; r < M.rows; ++r)
        for (int c = 0; c < M.cols; ++c) a[r][c] = M.at(r, c).rat_value();
    int rank = 0;
    for (int c = 0; c < M.cols && rank < M.rows; ++c) {
        int sel = -1;
        for (int r = rank; r < M.rows; ++r)
            if (a[r][c] != 0) {
                sel = r;
                break;
            }
        if (sel < 0) continue;
        std::swap(a[rank], a[sel]);
        for (int r = 0; r < M.rows; ++r) {
            if (r == rank || a[r][c] == 0) continue;
            Rat f = a[r][c] / a[rank][c];
            for (int j = 0; j < M.cols; ++j) a[r][j] -= f * a[rank][j];
        }
        ++rank;
    }
    return rank;
}

std::vector<Scalar> mat_apply(const Matrix& M, const std::vector<Scalar>& x) {
    std::vector<Scalar> out(M.rows, Scalar::zero(M.field));
    for (int r = 0; r < M.rows; ++r)
        for (int c = 0; c < M.cols; ++c) out[r] += M.at(r, c) * x[c];
    return out;
}

}  // namespace

TEST_CASE("rref basics") {
    Matrix I(3, 3, Field::Q);
    for (int i = 0; i < 3; ++i) I.at(i, i) = Scalar::one(Field::Q);
    RrefResult R = rref(I);
    CHECK(R.pivots == std::vector<int>{0, 1, 2});
    CHECK(R.rref.a == I.a);

    // [[1, t],[t, t^2]] over Q(t): second row is t * first row.
    Matrix M(2, 2, Field::Qt);
    M.at(0, 0) = Scalar::one(Field::Qt);
    M.at(0, 1) = Scalar::t();
    M.at(1, 0) = Scalar::t();
    M.at(1, 1) = Scalar::t() * Scalar::t();
    RrefResult R2 = rref(M);
    CHECK(R2.pivots == std::vector<int>{0});
    CHECK(R2.rref.at(0, 1) == Scalar::t());
    CHECK(R2.rref.at(1, 0).is_zero());
    CHECK(R2.rref.at(1, 1).is_zero());
}

TEST_CASE("rref rank matches the naive oracle and rank-nullity holds") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 15; ++trial) {
        Matrix M = random_q_matrix(rng, 6, 6, trial % 7);
        RrefResult R = rref(M);
        CHECK(static_cast<int>(R.pivots.size()) == naive_rank(M));
        CHECK(static_cast<int>(R.pivots.size()) + kernel(M).dim() == M.cols);
        // Idempotence.
        RrefResult R2 = rref(R.rref);
        CHECK(R2.rref.a == R.rref.a);
    }
}

TEST_CASE("kernel examples") {
    Matrix M(1, 2, Field::Q);
    M.at(0, 0) = Scalar::one(Field::Q);
    M.at(0, 1) = Scalar::one(Field::Q);
    Subspace K = kernel(M);
    REQUIRE(K.dim() == 1);
    // Echelon representative of span{(-1, 1)}.
    CHECK(K.basis[0][0] == Scalar::one(Field::Q));
    CHECK(K.basis[0][1] == Scalar::from_int(-1, Field::Q));
    std::vector<Scalar> v{Scalar::from_int(-1, Field::Q), Scalar::one(Field::Q)};
    CHECK(K.contains(v));

    Matrix Z(2, 3, Field::Q);
    CHECK(kernel(Z).dim() == 3);
}

TEST_CASE("solve with certificates") {
    Matrix I(2, 2, Field::Q);
    I.at(0, 0) = I.at(1, 1) = Scalar::one(Field::Q);
    std::vector<Scalar> b{Scalar::from_int(5, Field::Q), Scalar::from_int(-3, Field::Q)};
    SolveResult s = solve(I, b);
    REQUIRE(s.solvable);
    CHECK(s.particular == b);
    CHECK(s.null_space.dim() == 0);

    Matrix M(1, 2, Field::Q);
    M.at(0, 0) = M.at(0, 1) = Scalar::one(Field::Q);
    SolveResult s2 = solve(M, {Scalar::from_int(2, Field::Q)});
    REQUIRE(s2.solvable);
    CHECK(s2.particular[0] == Scalar::from_int(2, Field::Q));
    CHECK(s2.particular[1].is_zero());
    CHECK(s2.null_space.dim() == 1);

    // Overdetermined inconsistent 3x2 system: x=1, y=1, x+y=3.
    Matrix N(3, 2, Field::Q);
    N.at(0, 0) = N.at(1, 1) = N.at(2, 0) = N.at(2, 1) = Scalar::one(Field::Q);
    SolveResult s3 = solve(N, {Scalar::one(Field::Q), Scalar::one(Field::Q),
                               Scalar::from_int(3, Field::Q)});
    REQUIRE(!s3.solvable);
    CHECK(s3.witness_row[0].is_zero());
    CHECK(s3.witness_row[1].is_zero());
    CHECK(!s3.witness_row[2].is_zero());
}

TEST_CASE("solutions substitute exactly") {
    std::mt19937 rng(23);
    std::uniform_int_distribution<int> coef(-4, 4);
    for (int trial = 0; trial < 10; ++trial) {
        Matrix M = random_q_matrix(rng, 5, 4);
        std::vector<Scalar> x0(4);
        for (auto& x : x0) x = Scalar::from_int(coef(rng), Field::Q);
        std::vector<Scalar> b = mat_apply(M, x0);
        SolveResult s = solve(M, b);
        REQUIRE(s.solvable);
        CHECK(mat_apply(M, s.particular) == b);
        for (const auto& k : s.null_space.basis) {
            std::vector<Scalar> xk = s.particular;
            for (size_t i = 0; i < xk.size(); ++i) xk[i] += k[i];
            CHECK(mat_apply(M, xk) == b);
        }
    }
}

TEST_CASE("quotient coordinates") {
    Field F = Field::Q;
    auto e = [&](int i) {
        std::vector<Scalar> v(3, Scalar::zero(F));
        v[i] = Scalar::one(F);
        return v;
    };
    Subspace U = Subspace::span(3, {e(0), e(1), e(2)}, F);
    Subspace W0 = Subspace::span(3, {}, F);
    auto c = quotient_coords(U, W0, e(1));
    CHECK(c == std::vector<Scalar>{Scalar::zero(F), Scalar::one(F), Scalar::zero(F)});
    Subspace W = Subspace::span(3, {e(2)}, F);
    CHECK(quotient_coords(U, W, e(2)) ==
          std::vector<Scalar>{Scalar::zero(F), Scalar::zero(F)});
    CHECK_THROWS_AS(quotient_coords(W, U, e(0)), DataError);
}

TEST_CASE("symbolic rank specializes generically") {
    // Entries linear in t; symbolic rank must match the rank at large rationals.
    std::mt19937 rng(31);
    std::uniform_int_distribution<int> coef(-3, 3);
    for (int trial = 0; trial < 5; ++trial) {
        Matrix M(4, 5, Field::Qt);
        for (auto& x : M.a) {
            Poly p = Poly(rat(coef(rng))) + Poly::t() * rat(coef(rng));
            x = Scalar::from_ratfunc(RatFunc(p));
        }
        RrefResult R = rref(M);
        int symbolic_rank = static_cast<int>(R.pivots.size());
        for (long v : {101, 1009, 9173, 271828, 314159}) {
            Matrix Mq(4, 5, Field::Q);
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 5; ++c) Mq.at(r, c) = M.at(r, c).eval(rat(v));
            int rq = static_cast<int>(rref(Mq).pivots.size());
            CHECK(rq <= symbolic_rank);
            // Certificate roots are the only places the rank may drop.
            bool at_certificate_root = false;
            for (const auto& p : R.certificate)
                if (p.eval(rat(v)) == 0) at_certificate_root = true;
            if (!at_certificate_root) CHECK(rq == symbolic_rank);
        }
    }
}

TEST_CASE("sparse solver agrees with the dense solver") {
    std::mt19937 rng(47);
    std::uniform_int_distribution<int> coef(-3, 3);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix M = random_q_matrix(rng, 6, 5, trial % 6);
        std::vector<Scalar> b(6);
        for (auto& x : b) x = Scalar::from_int(coef(rng), Field::Q);
        SolveResult dense = solve(M, b);
        std::vector<SparseEq> eqs;
        for (int r = 0; r < 6; ++r) {
            SparseEq e;
            e.rhs = b[r];
            for (int c = 0; c < 5; ++c)
                if (!M.at(r, c).is_zero()) e.lhs[c] = M.at(r, c);
            eqs.push_back(std::move(e));
        }
        SparseVerdict v = sparse_solve(eqs, 5, Field::Q);
        CHECK(v.solvable == dense.solvable);
        if (v.solvable) {
            CHECK(mat_apply(M, v.particular) == b);
        } else {
            CHECK(v.witness.lhs.empty());
            CHECK(!v.witness.rhs.is_zero());
        }
    }
}
