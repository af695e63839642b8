#include <doctest.h>

#include <random>

#include "nilcoh/catalog.hpp"
#include "nilcoh/deform.hpp"

using namespace nilcoh;

namespace {
const LieAlgebra& family(const std::string& name) {
    static std::vector<FamilyRecord> recs = load_catalog(NILCOH_DEFAULT_CATALOG);
    for (const auto& r : recs)
        if (r.name == name) return r.algebra;
    throw DataError("test: no record " + name);
}

const FiniteAlgebra& assembled(const std::string& name) {
    static std::map<std::string, FiniteAlgebra> cache;
    auto it = cache.find(name);
    if (it == cache.end())
        it = cache.emplace(name, assemble(cohomology(family(name)), false)).first;
    return it->second;
}

LieAlgebra abelian(int n) {
    LieAlgebra A;
    A.name = "abelian";
    A.dim = n;
    A.field = Field::Q;
    return A;
}

Rat random_rat(std::mt19937& rng) {
    std::uniform_int_distribution<int> num(-3, 3), den(1, 2);
    Rat r(num(rng), den(rng));
    r.canonicalize();
    return r;
}

std::vector<std::vector<Scalar>> random_g(int N, std::mt19937& rng, Field f) {
    std::vector<std::vector<Scalar>> g(N, std::vector<Scalar>(N, Scalar::zero(f)));
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) g[i][j] = Scalar::from_rat(random_rat(rng), f);
    return g;
}

// Multiplication of A as a bilinear map (always a Hochschild 2-cocycle).
BilinearMap multiplication(const FiniteAlgebra& A) {
    BilinearMap f;
    f.N = A.N;
    f.field = A.field;
    for (int i = 0; i < A.N; ++i)
        for (int j = 0; j < A.N; ++j) f.set(i, j, A.prod[i][j]);
    return f;
}
}  // namespace

TEST_CASE("cohomology of the abelian plane is the exterior algebra on two generators") {
    FiniteAlgebra A = assemble(cohomology(abelian(2)));
    CHECK(A.N == 4);
    CHECK(A.degree == std::vector<int>{0, 1, 1, 2});
    CHECK(A.unit == 0);
    // g1 g2 = +- top class, g2 g1 = the opposite sign, squares vanish.
    Scalar p12 = A.entry(1, 2, 3), p21 = A.entry(2, 1, 3);
    CHECK(!p12.is_zero());
    CHECK(p21 == -p12);
    CHECK(A.prod[1][1].empty());
    CHECK(A.prod[2][2].empty());
    CHECK(A.prod[3][1].empty());
    CHECK(A.prod[1][3].empty());
}

TEST_CASE("assembled algebra of 1357S has dimension 34 and a genuine unit") {
    // Run the full unit/associativity verification once on a real family.
    FiniteAlgebra A = assemble(cohomology(family("1357S")), true);
    CHECK(A.N == 34);
    CHECK(A.field == Field::Qt);
    for (int j = 0; j < A.N; ++j) {
        REQUIRE(A.prod[A.unit][j].size() == 1);
        CHECK(A.prod[A.unit][j][0].first == j);
        CHECK(A.prod[A.unit][j][0].second.is_one());
        REQUIRE(A.prod[j][A.unit].size() == 1);
        CHECK(A.prod[j][A.unit][0].first == j);
        CHECK(A.prod[j][A.unit][0].second.is_one());
    }
}

TEST_CASE("multiply is consistent with the sparse product table") {
    FiniteAlgebra A = assemble(cohomology(abelian(3)));
    for (int i = 0; i < A.N; ++i)
        for (int j = 0; j < A.N; ++j) {
            std::vector<Scalar> ei(A.N, Scalar::zero(Field::Q));
            std::vector<Scalar> ej(A.N, Scalar::zero(Field::Q));
            ei[i] = ej[j] = Scalar::one(Field::Q);
            auto p = A.multiply(ei, ej);
            for (int k = 0; k < A.N; ++k) CHECK(p[k] == A.entry(i, j, k));
        }
}

TEST_CASE("Maclaurin coefficients on a hand-built parametric algebra") {
    // Unital two-dimensional algebra with x*x = (t^2 + 1) x.
    FiniteAlgebra A;
    A.N = 2;
    A.field = Field::Qt;
    A.unit = 0;
    A.degree = {0, 0};
    A.prod.assign(2, std::vector<std::vector<std::pair<int, Scalar>>>(2));
    Scalar one = Scalar::one(Field::Qt);
    Scalar q = Scalar::t() * Scalar::t() + one;
    A.prod[0][0] = {{0, one}};
    A.prod[0][1] = {{1, one}};
    A.prod[1][0] = {{1, one}};
    A.prod[1][1] = {{1, q}};

    Rat l0 = 1;
    BilinearMap f0 = maclaurin(A, 0, &l0);
    BilinearMap f1 = maclaurin(A, 1, &l0);
    BilinearMap f2 = maclaurin(A, 2, &l0);
    BilinearMap f3 = maclaurin(A, 3, &l0);
    CHECK(f0.entry(1, 1, 1) == Scalar::from_int(2, Field::Q));
    CHECK(f1.entry(1, 1, 1) == Scalar::from_int(2, Field::Q));
    CHECK(f2.entry(1, 1, 1) == Scalar::one(Field::Q));
    CHECK(f3.is_zero());
    // Symbolic first coefficient is the derivative 2t.
    BilinearMap fs = maclaurin(A, 1);
    CHECK(fs.entry(1, 1, 1) == Scalar::from_int(2, Field::Qt) * Scalar::t());
    // Order zero at lambda0 agrees with specializing the whole product.
    FiniteAlgebra A0 = specialize_algebra(A, l0);
    CHECK(f0 == multiplication(A0));
}

TEST_CASE("order-zero Maclaurin of 1357S equals the specialized product") {
    const FiniteAlgebra& A = assembled("1357S");
    Rat l0 = 2;
    BilinearMap f0 = maclaurin(A, 0, &l0);
    CHECK(f0 == multiplication(specialize_algebra(A, l0)));
    // The family varies to first order at the threshold.
    BilinearMap f1 = maclaurin(A, 1, &l0);
    CHECK(!f1.is_zero());
}

TEST_CASE("constant products have vanishing higher Maclaurin coefficients") {
    FiniteAlgebra A = assemble(cohomology(abelian(3)));
    // Lift the constant table to Q(t) by hand.
    FiniteAlgebra L = A;
    L.field = Field::Qt;
    for (auto& row : L.prod)
        for (auto& cell : row)
            for (auto& [k, c] : cell) c = c.lift();
    CHECK(maclaurin(L, 1).is_zero());
    CHECK(maclaurin(L, 2).is_zero());
}

TEST_CASE("the multiplication is a Hochschild 2-cocycle; random maps need not be") {
    FiniteAlgebra A = assemble(cohomology(abelian(3)));
    CHECK(hochschild_2cocycle_check(A, multiplication(A)).empty());
    // f(g1, g2) := unit fails the cocycle identity.
    BilinearMap f;
    f.N = A.N;
    f.field = A.field;
    f.set(1, 2, {{0, Scalar::one(Field::Q)}});
    CHECK(!hochschild_2cocycle_check(A, f).empty());
}

TEST_CASE("first-order coefficients of the parametric families are 2-cocycles") {
    for (const char* name : {"1357S", "1357QRS1", "147E1"}) {
        INFO(name);
        const FiniteAlgebra& A = assembled(name);
        BilinearMap f1 = maclaurin(A, 1);
        CHECK(hochschild_2cocycle_check(A, f1).empty());
    }
}

TEST_CASE("coboundaries of linear maps are 2-cocycles (randomized)") {
    FiniteAlgebra A = assemble(cohomology(abelian(3)));
    std::mt19937 rng(20240817);
    for (int trial = 0; trial < 20; ++trial) {
        auto g = random_g(A.N, rng, Field::Q);
        BilinearMap f = d1_coboundary(A, g);
        CHECK(hochschild_2cocycle_check(A, f).empty());
    }
}

TEST_CASE("coboundary system is solvable for a planted coboundary") {
    FiniteAlgebra A = specialize_algebra(assembled("1357S"), Rat(5));
    std::mt19937 rng(7);
    auto g0 = random_g(A.N, rng, Field::Q);
    BilinearMap f = d1_coboundary(A, g0);
    DeformVerdict v = coboundary_verdict(A, f);
    CHECK(v.solvable);
    CHECK(v.witness_verified);
    CHECK(v.unknown_count == A.N * A.N);
    CHECK(v.equation_count > 0);
    CHECK(d1_coboundary(A, v.witness) == f);
}

TEST_CASE("the zero map is a coboundary with the zero witness") {
    FiniteAlgebra A = specialize_algebra(assembled("1357S"), Rat(5));
    BilinearMap zero;
    zero.N = A.N;
    zero.field = A.field;
    DeformVerdict v = coboundary_verdict(A, zero);
    CHECK(v.solvable);
    CHECK(v.witness_verified);
    for (const auto& row : v.witness)
        for (const auto& c : row) CHECK(c.is_zero());
}

TEST_CASE("symbolic verdicts: 1357S and 1357QRS1 are obstructed") {
    for (const char* name : {"1357S", "1357QRS1"}) {
        INFO(name);
        const FiniteAlgebra& A = assembled(name);
        BilinearMap f1 = maclaurin(A, 1);
        DeformVerdict v = coboundary_verdict(A, f1);
        CHECK(!v.solvable);
        CHECK(!v.inconsistency_row.empty());
        CHECK(v.unknown_count == 34 * 34);
        MESSAGE(name << ": equations " << v.equation_count << ", row " << v.inconsistency_row);
    }
}

TEST_CASE("numeric spot checks agree with the symbolic obstruction") {
    const FiniteAlgebra& A = assembled("1357S");
    for (long l : {-3, 3, 5, 7, -2}) {
        INFO("lambda0 = " << l);
        Rat l0(l);
        FiniteAlgebra A0 = specialize_algebra(A, l0);
        BilinearMap f1 = maclaurin(A, 1, &l0);
        DeformVerdict v = coboundary_verdict(A0, f1);
        CHECK(!v.solvable);
    }
}

TEST_CASE("symbolic verdicts: 147E1, 147E, and 1357M are unobstructed") {
    for (const char* name : {"147E1", "147E", "1357M"}) {
        INFO(name);
        const FiniteAlgebra& A = assembled(name);
        BilinearMap f1 = maclaurin(A, 1);
        DeformVerdict v = coboundary_verdict(A, f1);
        CHECK(v.solvable);
        CHECK(v.witness_verified);
        MESSAGE(name << ": equations " << v.equation_count);
    }
}

TEST_CASE("verdict serialization") {
    const FiniteAlgebra& A = assembled("1357QRS1");
    BilinearMap f1 = maclaurin(A, 1);
    DeformVerdict v = coboundary_verdict(A, f1);
    auto j = deform_verdict_to_json("1357QRS1", "symbolic", v);
    CHECK(j["family"] == "1357QRS1");
    CHECK(j["solvable"] == false);
    CHECK(j.contains("inconsistency_row"));
    CHECK(!j.contains("witness"));
    CHECK(j["unknown_count"] == 34 * 34);

    FiniteAlgebra B = specialize_algebra(A, Rat(3));
    BilinearMap zero;
    zero.N = B.N;
    zero.field = B.field;
    auto js = deform_verdict_to_json("1357QRS1", 3, coboundary_verdict(B, zero));
    CHECK(js["solvable"] == true);
    CHECK(js["witness"].size() == B.N);
    CHECK(js["witness_verified"] == true);
}
