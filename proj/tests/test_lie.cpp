#include <doctest.h>

#include "nilcoh/lie.hpp"

using namespace nilcoh;

namespace {

const char* k1357m = R"(
name 1357M
dim 7
param t excluded 0
[1,2] = x3
[1,3] = x5
[1,4] = x6
[1,5] = x7
[2,4] = x5
[2,6] = t*x7
[3,4] = (1-t)*x7
)";

const char* kheis = "name heis3\ndim 3\n[1,2] = x3\n";

}  // namespace

TEST_CASE("parse Heisenberg") {
    LieAlgebra A = parse_lie(kheis);
    CHECK(A.dim == 3);
    CHECK(A.field == Field::Q);
    CHECK(A.brackets.size() == 1);
    CHECK(A.bracket_basis(1, 2)[2] == Scalar::one(Field::Q));
    CHECK(A.bracket_basis(2, 1)[2] == Scalar::from_int(-1, Field::Q));
}

TEST_CASE("parse 1357M over Q(t)") {
    LieAlgebra A = parse_lie(k1357m);
    CHECK(A.dim == 7);
    CHECK(A.field == Field::Qt);
    CHECK(A.excluded == std::vector<Rat>{Rat(0)});
    // All 35 Jacobi residuals vanish symbolically (validated at parse).
    for (int i = 1; i <= 7; ++i)
        for (int j = i + 1; j <= 7; ++j)
            for (int k = j + 1; k <= 7; ++k) {
                auto r = jacobi_residual(A, i, j, k);
                for (const auto& x : r) CHECK(x.is_zero());
            }
}

TEST_CASE("so(3)-like algebra passes Jacobi but is not nilpotent") {
    LieAlgebra A = parse_lie("dim 3\n[1,2] = x3\n[1,3] = -x2\n[2,3] = x1\n");
    Flag F = lcs(A);
    CHECK(!F.nilpotent);
}

TEST_CASE("parser error reporting") {
    CHECK_THROWS_AS(parse_lie("dim 3\n[1,2] = x9\n"), ParseError);
    CHECK_THROWS_AS(parse_lie("dim 3\n[2,1] = x3\n"), ParseError);
    CHECK_THROWS_AS(parse_lie("dim 3\n[1,2] = x3\n[1,2] = x3\n"), ParseError);
    CHECK_THROWS_AS(parse_lie("[1,2] = x3\n"), ParseError);
    CHECK_THROWS_AS(parse_lie("dim 3\n[1,2] = t*x3\n"), ParseError);
    try {
        parse_lie("dim 3\n[1,2] = x3 +\n");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
    // Corrupted 1357M: dropping the (1-t) factor breaks Jacobi.
    std::string bad = k1357m;
    auto p = bad.find("(1-t)*x7");
    bad.replace(p, 8, "x7");
    CHECK_THROWS_AS(parse_lie(bad), DataError);
}

TEST_CASE("lower central series") {
    LieAlgebra M = parse_lie(k1357m);
    Flag F = lcs(M);
    REQUIRE(F.nilpotent);
    CHECK(F.dims == std::vector<int>{7, 4, 2, 1});
    // g2 = <x3, x5, x6, x7>, g3 = <x5, x7>, g4 = <x7>.
    CHECK(F.terms[1].pivots == std::vector<int>{2, 4, 5, 6});
    CHECK(F.terms[2].pivots == std::vector<int>{4, 6});
    CHECK(F.terms[3].pivots == std::vector<int>{6});

    CHECK(lcs(parse_lie("dim 4\n")).dims == std::vector<int>{4});
    CHECK(lcs(parse_lie(kheis)).dims == std::vector<int>{3, 1});
}

TEST_CASE("Carnot algebra of 1357M") {
    LieAlgebra M = parse_lie(k1357m);
    LieAlgebra C = carnot(M);
    CHECK(C.weights == std::vector<int>{1, 1, 1, 2, 2, 3, 4});
    // Canonical layer-adapted form: [1,2]=4, [1,3]=5, [1,4]=6, [1,6]=7
    // (layer order x1,x2,x4 | x3,x6 | x5 | x7).
    std::map<std::pair<int, int>, int> expect{
        {{1, 2}, 4}, {{1, 3}, 5}, {{1, 4}, 6}, {{1, 6}, 7}};
    CHECK(C.brackets.size() == expect.size());
    for (const auto& [ij, target] : expect) {
        REQUIRE(C.brackets.count(ij));
        const auto& v = C.brackets.at(ij);
        for (int k = 0; k < 7; ++k)
            CHECK(v[k] == (k + 1 == target ? Scalar::one(Field::Qt)
                                           : Scalar::zero(Field::Qt)));
    }
    // The t-dependence disappears in the Carnot algebra.
    for (const auto& [ij, v] : C.brackets)
        for (const auto& x : v) CHECK(x.func_value().is_constant());
    // Grading law and idempotence.
    for (const auto& [ij, v] : C.brackets) {
        int w = C.weights[ij.first - 1] + C.weights[ij.second - 1];
        for (int k = 0; k < 7; ++k)
            if (!v[k].is_zero()) CHECK(C.weights[k] == w);
    }
    LieAlgebra C2 = carnot(C);
    CHECK(C2.brackets == C.brackets);
    // carnot(abelian) = abelian.
    CHECK(carnot(parse_lie("dim 3\n")).brackets.empty());
}

TEST_CASE("specialization") {
    LieAlgebra M = parse_lie(k1357m);
    LieAlgebra S = specialize(M, rat(2));
    CHECK(S.field == Field::Q);
    CHECK(S.bracket_basis(2, 6)[6] == Scalar::from_int(2, Field::Q));
    CHECK(S.bracket_basis(3, 4)[6] == Scalar::from_int(-1, Field::Q));
    CHECK(is_excluded_value(M, rat(0)));
    CHECK(!is_excluded_value(M, rat(2)));
    // specialize(lambda = 0) is still a valid algebra, merely flagged.
    LieAlgebra S0 = specialize(M, rat(0));
    CHECK(S0.dim == 7);
    // lcs commutes with generic specialization.
    CHECK(lcs(specialize(M, rat(5))).dims == lcs(M).dims);
    // carnot commutes with generic specialization.
    LieAlgebra C5 = carnot(specialize(M, rat(5)));
    LieAlgebra C = carnot(M);
    for (const auto& [ij, v] : C.brackets) {
        REQUIRE(C5.brackets.count(ij));
        for (int k = 0; k < 7; ++k)
            CHECK(C5.brackets.at(ij)[k] == v[k].eval(rat(5)));
    }
}

TEST_CASE("direct sums") {
    LieAlgebra H = parse_lie(kheis);
    LieAlgebra R1 = parse_lie("name R\ndim 1\n");
    LieAlgebra S = direct_sum(H, R1);
    CHECK(S.dim == 4);
    CHECK(lcs(S).dims == std::vector<int>{4, 1});
    LieAlgebra A0 = parse_lie("dim 0\n");
    CHECK(direct_sum(H, A0).brackets == H.brackets);
    LieAlgebra Ht = parse_lie("dim 3\nparam t\n[1,2] = t*x3\n");
    CHECK_THROWS_AS(direct_sum(H, Ht), FieldError);
}

TEST_CASE("definition round trip") {
    LieAlgebra M = parse_lie(k1357m);
    LieAlgebra M2 = parse_lie(to_definition(M));
    CHECK(M2.brackets == M.brackets);
    CHECK(M2.excluded == M.excluded);
}
