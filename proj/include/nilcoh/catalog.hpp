#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nilcoh/cohomology.hpp"
#include "nilcoh/errors.hpp"
#include "nilcoh/lie.hpp"

namespace nilcoh {

// Expected Carnot algebra of a family: either a single named algebra, or a
// pair of names selected by the sign of (parameter - threshold).
struct CarnotTarget {
    bool sign_dependent = false;
    std::string single;
    std::string neg;
    std::string pos;
    Rat threshold = 0;
};

struct FamilyRecord {
    std::string name;
    std::string file;
    std::vector<int> expected_betti;
    std::vector<int> expected_lcs;
    CarnotTarget carnot_target;
    std::vector<Rat> excluded;
    LieAlgebra algebra;
};

inline std::vector<FamilyRecord> load_catalog(const std::string& directory) {
    namespace fs = std::filesystem;
    fs::path manifest = fs::path(directory) / "manifest.json";
    if (!fs::exists(manifest))
        throw DataError("catalog missing: no manifest.json in '" + directory + "'");
    std::ifstream in(manifest);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw DataError("catalog manifest is not valid JSON: " + std::string(e.what()));
    }
    if (!doc.is_array()) throw DataError("catalog manifest must be a JSON list");
    std::vector<FamilyRecord> out;
    for (const auto& entry : doc) {
        FamilyRecord r;
        r.name = entry.at("name").get<std::string>();
        r.file = entry.at("file").get<std::string>();
        for (const auto& b : entry.at("expected_betti")) r.expected_betti.push_back(b.get<int>());
        for (const auto& d : entry.at("expected_lcs")) r.expected_lcs.push_back(d.get<int>());
        const auto& car = entry.at("expected_carnot");
        if (car.is_string()) {
            r.carnot_target.single = car.get<std::string>();
        } else {
            r.carnot_target.sign_dependent = true;
            r.carnot_target.neg = car.at("neg").get<std::string>();
            r.carnot_target.pos = car.at("pos").get<std::string>();
            r.carnot_target.threshold = Rat(car.at("threshold").get<std::string>());
            r.carnot_target.threshold.canonicalize();
        }
        for (const auto& x : entry.at("excluded")) {
            Rat v(x.get<std::string>());
            v.canonicalize();
            r.excluded.push_back(v);
        }
        fs::path def = fs::path(directory) / r.file;
        std::ifstream df(def);
        if (!df) throw DataError("catalog: cannot open '" + def.string() + "' for family " + r.name);
        std::stringstream buf;
        buf << df.rdbuf();
        try {
            r.algebra = parse_lie(buf.str());
        } catch (const Error& e) {
            throw DataError("catalog: family " + r.name + " failed to load: " + e.what());
        }
        if (r.algebra.name != r.name)
            throw DataError("catalog: manifest name '" + r.name +
                            "' does not match definition name '" + r.algebra.name + "'");
        out.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Carnot comparison helpers.

inline bool scalars_match(const Scalar& a, const Scalar& b) {
    if (a.field() == b.field()) return a == b;
    const Scalar& qside = (a.field() == Field::Q) ? a : b;
    const Scalar& tside = (a.field() == Field::Q) ? b : a;
    return qside.lift() == tside;
}

// Literal structure-constant equality of two algebras on their canonical bases.
inline bool same_structure(const LieAlgebra& A, const LieAlgebra& B) {
    if (A.dim != B.dim) return false;
    if (!A.weights.empty() && !B.weights.empty() && A.weights != B.weights) return false;
    auto keys = [](const LieAlgebra& X) {
        std::vector<std::pair<int, int>> k;
        for (const auto& [ij, w] : X.brackets) k.push_back(ij);
        return k;
    };
    if (keys(A) != keys(B)) return false;
    for (const auto& [ij, w] : A.brackets) {
        const auto& wb = B.brackets.at(ij);
        for (int k = 0; k < A.dim; ++k)
            if (!scalars_match(w[k], wb[k])) return false;
    }
    return true;
}

// Sign of a basis-invariant determinant attached to a Carnot algebra with
// layer dimensions (3,1,2,1): with z the layer-2 generator and w the layer-4
// generator, B(u,v) = w-coefficient of [u,[v,z]] on the non-central layer-1
// elements.  Under any graded change of basis det(B) rescales by a positive
// rational, so its sign separates the two rank-2 models that share all
// Betti/lower-central-series data.  Returns nullopt when the layer shape does
// not fit or the determinant is not a nonzero constant.
inline std::optional<int> det_b_sign(const LieAlgebra& C) {
    if (C.weights.empty()) return std::nullopt;
    std::map<int, std::vector<int>> layers;
    for (int i = 1; i <= C.dim; ++i) layers[C.weights[i - 1]].push_back(i);
    if (!layers.count(2) || !layers.count(4)) return std::nullopt;
    if (layers[2].size() != 1 || layers[4].size() != 1) return std::nullopt;
    int z = layers[2][0], w4 = layers[4][0];
    std::vector<int> w1;
    for (int u : layers[1]) {
        bool central = true;
        for (int j = 1; j <= C.dim && central; ++j)
            for (const auto& x : C.bracket_basis(u, j))
                if (!x.is_zero()) central = false;
        if (!central) w1.push_back(u);
    }
    int m = static_cast<int>(w1.size());
    if (m == 0 || m > 3) return std::nullopt;
    std::vector<std::vector<Scalar>> B(m, std::vector<Scalar>(m, Scalar::zero(C.field)));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            auto inner = C.bracket_basis(w1[b], z);
            auto outer = C.bracket(C.basis_vector(w1[a]), inner);
            B[a][b] = outer[w4 - 1];
        }
    // Cofactor determinant (m <= 3).
    Scalar det = Scalar::zero(C.field);
    if (m == 1) {
        det = B[0][0];
    } else if (m == 2) {
        det = B[0][0] * B[1][1] - B[0][1] * B[1][0];
    } else {
        det = B[0][0] * (B[1][1] * B[2][2] - B[1][2] * B[2][1]) -
              B[0][1] * (B[1][0] * B[2][2] - B[1][2] * B[2][0]) +
              B[0][2] * (B[1][0] * B[2][1] - B[1][1] * B[2][0]);
    }
    if (det.is_zero()) return std::nullopt;
    Rat v;
    if (det.field() == Field::Q) {
        v = det.rat_value();
    } else {
        if (!det.func_value().is_constant()) return std::nullopt;
        v = det.func_value().constant_value();
    }
    return sgn(v) > 0 ? 1 : -1;
}

// Invariant fingerprint agreement: layer weights, Betti vector, and
// lower-central-series dimensions, plus the determinant sign when both sides
// define it.
inline bool same_fingerprint(const LieAlgebra& A, const LieAlgebra& B,
                             std::string* why = nullptr) {
    if (!A.weights.empty() && !B.weights.empty() && A.weights != B.weights) {
        if (why) *why = "layer weights differ";
        return false;
    }
    if (lcs(A).dims != lcs(B).dims) {
        if (why) *why = "lower central series dims differ";
        return false;
    }
    if (cohomology(A).betti != cohomology(B).betti) {
        if (why) *why = "Betti vectors differ";
        return false;
    }
    auto sa = det_b_sign(A), sb = det_b_sign(B);
    if (sa && sb && *sa != *sb) {
        if (why) *why = "determinant invariant signs differ";
        return false;
    }
    if (sa.has_value() != sb.has_value()) {
        if (why) *why = "determinant invariant defined on only one side";
        return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
struct CheckEntry {
    std::string name;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

struct CatalogReport {
    std::vector<CheckEntry> entries;
    bool ok() const {
        for (const auto& e : entries)
            if (!e.ok()) return false;
        return true;
    }
};

inline CatalogReport validate_catalog(const std::vector<FamilyRecord>& records) {
    std::map<std::string, const FamilyRecord*> by_name;
    for (const auto& r : records) by_name[r.name] = &r;
    CatalogReport report;
    for (const auto& r : records) {
        CheckEntry e;
        e.name = r.name;
        try {
            validate_jacobi(r.algebra);
        } catch (const Error& ex) {
            e.failures.push_back(std::string("Jacobi: ") + ex.what());
            report.entries.push_back(std::move(e));
            continue;
        }
        // Declared exclusions in the definition file must match the manifest.
        {
            auto a = r.algebra.excluded, b = r.excluded;
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            if (a != b) e.failures.push_back("excluded values disagree between manifest and definition");
        }
        if (cohomology(r.algebra).betti != r.expected_betti)
            e.failures.push_back("Betti vector mismatch");
        if (lcs(r.algebra).dims != r.expected_lcs)
            e.failures.push_back("lower central series mismatch");
        auto carnot_vs = [&](const LieAlgebra& base, const std::string& target_name,
                             const std::string& label) {
            auto it = by_name.find(target_name);
            if (it == by_name.end()) {
                e.failures.push_back(label + ": unknown target '" + target_name + "'");
                return;
            }
            LieAlgebra C, T;
            try {
                C = carnot(base);
                T = carnot(it->second->algebra);
            } catch (const Error& ex) {
                e.failures.push_back(label + ": " + ex.what());
                return;
            }
            if (same_structure(C, T)) return;
            std::string why;
            if (!same_fingerprint(C, T, &why))
                e.failures.push_back(label + ": Carnot mismatch vs " + target_name + " (" + why + ")");
        };
        if (!r.carnot_target.sign_dependent) {
            carnot_vs(r.algebra, r.carnot_target.single, "carnot");
        } else {
            // Probe one parameter value on each side of the threshold,
            // stepping past any excluded values.
            auto probe = [&](int dir, const std::string& target) {
                Rat v = r.carnot_target.threshold + dir;
                while (is_excluded_value(r.algebra, v)) v += dir;
                try {
                    carnot_vs(specialize(r.algebra, v), target,
                              "carnot at t=" + to_string(v));
                } catch (const Error& ex) {
                    e.failures.push_back("carnot probe at t=" + to_string(v) + ": " + ex.what());
                }
            };
            probe(-1, r.carnot_target.neg);
            probe(+1, r.carnot_target.pos);
            // The two targets must themselves be separated by the invariants.
            auto ni = by_name.find(r.carnot_target.neg);
            auto pi = by_name.find(r.carnot_target.pos);
            if (ni != by_name.end() && pi != by_name.end() &&
                same_fingerprint(carnot(ni->second->algebra),
                                 carnot(pi->second->algebra)))
                e.failures.push_back("sign-dependent targets are not separated by the invariants");
        }
        report.entries.push_back(std::move(e));
    }
    return report;
}

inline nlohmann::ordered_json catalog_report_to_json(const CatalogReport& r) {
    nlohmann::ordered_json out;
    out["ok"] = r.ok();
    nlohmann::ordered_json fam = nlohmann::ordered_json::array();
    for (const auto& e : r.entries) {
        nlohmann::ordered_json je;
        je["name"] = e.name;
        je["ok"] = e.ok();
        je["failures"] = e.failures;
        fam.push_back(je);
    }
    out["families"] = fam;
    return out;
}

}  // namespace nilcoh
