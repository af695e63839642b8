#include <doctest.h>

#include <numeric>

#include "nilcoh/catalog.hpp"

using namespace nilcoh;

namespace {
const std::vector<FamilyRecord>& records() {
    static std::vector<FamilyRecord> r = load_catalog(NILCOH_DEFAULT_CATALOG);
    return r;
}

const FamilyRecord& by_name(const std::string& name) {
    for (const auto& r : records())
        if (r.name == name) return r;
    throw DataError("test: no record " + name);
}
}  // namespace

TEST_CASE("catalog loads with nine families plus comparison algebras") {
    const auto& recs = records();
    CHECK(recs.size() == 15);
    int families = 0;
    for (const auto& r : recs)
        if (r.algebra.has_param) ++families;
    CHECK(families == 9);
    CHECK(by_name("1357M").excluded == std::vector<Rat>{Rat(0)});
    CHECK(by_name("1357N").excluded.empty());
    CHECK(by_name("147E").excluded == std::vector<Rat>{Rat(0), Rat(-1)});
    CHECK(!by_name("N625R").algebra.has_param);
}

TEST_CASE("missing catalog directory is reported") {
    CHECK_THROWS_WITH_AS(load_catalog("/nonexistent/dir"),
                         doctest::Contains("catalog missing"), DataError);
}

TEST_CASE("full catalog validates cleanly") {
    CatalogReport rep = validate_catalog(records());
    for (const auto& e : rep.entries) {
        INFO(e.name);
        for (const auto& f : e.failures) { INFO(f); }
        CHECK(e.ok());
    }
    CHECK(rep.ok());
    CHECK(rep.entries.size() == records().size());
}

TEST_CASE("validation flags a tampered expectation") {
    auto recs = records();
    for (auto& r : recs)
        if (r.name == "1357N") r.expected_betti[2] = 99;
    CatalogReport rep = validate_catalog(recs);
    CHECK(!rep.ok());
    int bad = 0;
    for (const auto& e : rep.entries)
        if (!e.ok()) {
            ++bad;
            CHECK(e.name == "1357N");
        }
    CHECK(bad == 1);
}

TEST_CASE("total cohomology dimension of 1357S is 34") {
    const auto& b = by_name("1357S").expected_betti;
    CHECK(std::accumulate(b.begin(), b.end(), 0) == 34);
    CHECK(cohomology(by_name("1357S").algebra).betti == b);
}

TEST_CASE("1357M and 1357N share the Carnot algebra 2457A") {
    const LieAlgebra& target = by_name("2457A").algebra;
    LieAlgebra cm = carnot(by_name("1357M").algebra);
    CHECK(same_structure(cm, carnot(target)));
    LieAlgebra cn = carnot(by_name("1357N").algebra);
    CHECK(same_structure(cn, carnot(target)));
    CHECK(same_fingerprint(cn, carnot(target)));
    // Neither family is graded: each differs from its own Carnot.
    CHECK(!same_structure(by_name("1357M").algebra, cm));
    CHECK(!same_structure(by_name("1357N").algebra, cn));
}

TEST_CASE("sign-dependent Carnot assignment around the threshold") {
    auto sign_at = [](const std::string& fam, long v) {
        LieAlgebra C = carnot(specialize(by_name(fam).algebra, Rat(v)));
        auto s = det_b_sign(C);
        REQUIRE(s.has_value());
        return *s;
    };
    // Anchors: the two rank-two models themselves.
    auto sn = det_b_sign(carnot(by_name("N625R").algebra));
    auto sp = det_b_sign(carnot(by_name("N625aR").algebra));
    REQUIRE(sn.has_value());
    REQUIRE(sp.has_value());
    CHECK(*sn == -1);
    CHECK(*sp == 1);
    // Betti and lower-central-series data cannot separate the two models.
    CHECK(cohomology(by_name("N625R").algebra).betti ==
          cohomology(by_name("N625aR").algebra).betti);
    CHECK(lcs(by_name("N625R").algebra).dims == lcs(by_name("N625aR").algebra).dims);
    // Families land on the correct side of their thresholds.
    CHECK(sign_at("1357S", -1) == -1);
    CHECK(sign_at("1357S", 0) == -1);
    CHECK(sign_at("1357S", 2) == 1);
    CHECK(sign_at("1357QRS1", -1) == -1);
    CHECK(sign_at("1357QRS1", 2) == 1);
}

TEST_CASE("every catalog algebra is its own gradedization or maps to a model") {
    for (const auto& r : records()) {
        if (r.algebra.has_param) continue;
        // Comparison algebras are graded: Carnot reproduces them literally.
        CHECK(same_structure(carnot(r.algebra), r.algebra));
    }
}

TEST_CASE("report serialization") {
    CatalogReport rep = validate_catalog(records());
    auto j = catalog_report_to_json(rep);
    CHECK(j["ok"] == true);
    CHECK(j["families"].size() == records().size());
    CHECK(j["families"][0].contains("name"));
    CHECK(j["families"][0]["failures"].empty());
}
