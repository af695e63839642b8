// nilcoh command-line tool: exact invariants of nilpotent Lie algebras and
// the two decision procedures (graded-isomorphism systems, Hochschild
// coboundary tests) on the shipped catalog of 7-dimensional families.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nilcoh/catalog.hpp"
#include "nilcoh/deform.hpp"
#include "nilcoh/iso.hpp"

using namespace nilcoh;
using nlohmann::ordered_json;

#ifndef NILCOH_DEFAULT_CATALOG
#define NILCOH_DEFAULT_CATALOG "data/catalog"
#endif

namespace {

// Exit codes: 0 success / affirmative, 1 negative mathematical verdict,
// 2 usage or data error.
constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;

struct Options {
    std::string subcommand;
    std::vector<std::string> positional;
    std::map<std::string, std::string> flags;  // --name value
    std::set<std::string> switches;            // --name (no value)
    std::string catalog = NILCOH_DEFAULT_CATALOG;
    std::string format = "text";
    std::string output;
};

const char* kUsageText =
    "usage: nilcoh <subcommand> [args] [--catalog DIR] [--format text|json] [--output FILE]\n"
    "subcommands:\n"
    "  validate <file>                        parse a definition and check Jacobi\n"
    "  lcs <family>                           lower central series dimensions\n"
    "  carnot <family>                        associated Carnot algebra\n"
    "  betti <family>                         Betti numbers of the CE cohomology\n"
    "  cup <family> --p P --q Q               cup-product table H^P x H^Q -> H^{P+Q}\n"
    "  pairing <family> --k K                 Poincare pairing matrix in degree K\n"
    "  catalog-check                          validate the whole catalog\n"
    "  iso-build <family> --s S --t T         graded-isomorphism system between t=S and t=T\n"
    "  iso-reduce <system.json>               apply the forcing rules to a system\n"
    "  iso-verify <system.json> <assignment.json>  check a proposed solution exactly\n"
    "  iso-search <system.json> [--guesses FILE]   heuristic solve after reduction\n"
    "  deform <family> [--lambda0 L|--symbolic] --order M   Maclaurin coefficient f_M\n"
    "  coboundary <family> [--lambda0 L|--symbolic]         is f_1 a Hochschild coboundary?\n";

const std::set<std::string> kValueFlags = {"--catalog", "--format", "--output",
                                           "--p",       "--q",      "--k",
                                           "--s",       "--t",      "--guesses",
                                           "--lambda0", "--order"};

int usage_error(const std::string& msg) {
    std::cerr << "error: " << msg << "\n" << kUsageText;
    return kUsage;
}

bool parse_args(int argc, char** argv, Options& opt, std::string& err) {
    if (argc < 2) {
        err = "no subcommand given";
        return false;
    }
    opt.subcommand = argv[1];
    for (int i = 2; i < argc; ++i) {
        std::string a = argv[i];
        if (a.rfind("--", 0) == 0) {
            if (a == "--symbolic") {
                opt.switches.insert(a);
            } else if (kValueFlags.count(a)) {
                if (i + 1 >= argc) {
                    err = "flag " + a + " needs a value";
                    return false;
                }
                opt.flags[a.substr(2)] = argv[++i];
            } else {
                err = "unknown flag " + a;
                return false;
            }
        } else {
            opt.positional.push_back(a);
        }
    }
    if (opt.flags.count("catalog")) opt.catalog = opt.flags["catalog"];
    if (opt.flags.count("format")) opt.format = opt.flags["format"];
    if (opt.flags.count("output")) opt.output = opt.flags["output"];
    if (opt.format != "text" && opt.format != "json") {
        err = "--format must be 'text' or 'json'";
        return false;
    }
    return true;
}

// Family names are matched ignoring underscores, so 147E_1 finds 147E1.
std::string squash(const std::string& s) {
    std::string out;
    for (char c : s)
        if (c != '_') out += c;
    return out;
}

const FamilyRecord& find_family(const std::vector<FamilyRecord>& recs,
                                const std::string& name) {
    for (const auto& r : recs)
        if (squash(r.name) == squash(name)) return r;
    throw DataError("unknown family '" + name + "'");
}

Rat parse_rat(const std::string& text, const std::string& what) {
    try {
        Rat r(text);
        r.canonicalize();
        return r;
    } catch (const std::exception&) {
        throw DataError(what + " must be a rational literal, got '" + text + "'");
    }
}

int parse_int(const std::string& text, const std::string& what) {
    try {
        size_t pos = 0;
        int v = std::stoi(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw DataError(what + " must be an integer, got '" + text + "'");
    }
}

void emit(const Options& opt, const ordered_json& doc, const std::string& text) {
    std::string payload = opt.format == "json" ? doc.dump(2) + "\n" : text;
    if (opt.output.empty()) {
        std::cout << payload;
    } else {
        std::ofstream out(opt.output);
        if (!out) throw DataError("cannot write to '" + opt.output + "'");
        out << payload;
    }
}

ordered_json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    try {
        ordered_json j;
        in >> j;
        return j;
    } catch (const std::exception& e) {
        throw DataError("'" + path + "' is not valid JSON: " + std::string(e.what()));
    }
}

Field field_of(const ordered_json& j) {
    if (j.contains("field") && j["field"] == "Qt") return Field::Qt;
    return Field::Q;
}

std::string matrix_text(const Matrix& M) {
    std::ostringstream os;
    for (int r = 0; r < M.rows; ++r) {
        for (int c = 0; c < M.cols; ++c) os << (c ? "  " : "") << M.at(r, c).to_string();
        os << "\n";
    }
    return os.str();
}

// --------------------------------------------------------------------------

int cmd_validate(const Options& opt) {
    if (opt.positional.size() != 1) return usage_error("validate takes one file");
    std::ifstream in(opt.positional[0]);
    if (!in) throw DataError("cannot open '" + opt.positional[0] + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    LieAlgebra A = parse_lie(buf.str());  // throws ParseError/DataError on exit 2
    ordered_json j;
    j["ok"] = true;
    j["name"] = A.name;
    j["dim"] = A.dim;
    j["parametric"] = A.has_param;
    emit(opt, j,
         "OK: " + A.name + " (dim " + std::to_string(A.dim) +
             (A.has_param ? ", parametric" : "") + "), Jacobi holds\n");
    return kOk;
}

int cmd_lcs(const Options& opt, const std::vector<FamilyRecord>& recs) {
    if (opt.positional.size() != 1) return usage_error("lcs takes one family");
    const auto& r = find_family(recs, opt.positional[0]);
    Flag f = lcs(r.algebra);
    ordered_json j;
    j["family"] = r.name;
    j["dims"] = f.dims;
    j["nilpotent"] = f.nilpotent;
    std::ostringstream os;
    os << r.name << " lower central series dims:";
    for (int d : f.dims) os << " " << d;
    os << (f.nilpotent ? " (nilpotent)\n" : " (NOT nilpotent)\n");
    emit(opt, j, os.str());
    return kOk;
}

int cmd_carnot(const Options& opt, const std::vector<FamilyRecord>& recs) {
    if (opt.positional.size() != 1) return usage_error("carnot takes one family");
    const auto& r = find_family(recs, opt.positional[0]);
    LieAlgebra C = carnot(r.algebra);
    ordered_json j;
    j["family"] = r.name;
    j["weights"] = C.weights;
    j["definition"] = to_definition(C);
    emit(opt, j, to_definition(C));
    return kOk;
}

int cmd_betti(const Options& opt, const std::vector<FamilyRecord>& recs) {
    if (opt.positional.size() != 1) return usage_error("betti takes one family");
    const auto& r = find_family(recs, opt.positional[0]);
    CohomologyModel M = cohomology(r.algebra);
    ordered_json j;
    j["betti"] = M.betti;
    std::ostringstream os;
    os << r.name << " Betti numbers:";
    for (int b : M.betti) os << " " << b;
    os << "\n";
    emit(opt, j, os.str());
    return kOk;
}

int cmd_cup(const Options& opt, const std::vector<FamilyRecord>& recs) {
    if (opt.positional.size() != 1 || !opt.flags.count("p") || !opt.flags.count("q"))
        return usage_error("cup needs a family and --p P --q Q");
    const auto& r = find_family(recs, opt.positional[0]);
    int p = parse_int(opt.flags.at("p"), "--p");
    int q = parse_int(opt.flags.at("q"), "--q");
    CohomologyModel M = cohomology(r.algebra);
    if (p < 0 || q < 0 || p + q > M.n)
        throw DataError("cup degrees out of range for dimension " + std::to_string(M.n));
    CupTable T = cup_table(M, p, q);
    ordered_json j = cup_table_to_json(T);
    std::ostringstream os;
    os << r.name << " cup products H^" << p << " x H^" << q << " -> H^" << p + q << ":\n";
    for (size_t i = 0; i < T.gamma.size(); ++i)
        for (size_t k = 0; k < T.gamma[i].size(); ++k) {
            os << "  [" << i + 1 << "] u [" << k + 1 << "] =";
            bool any = false;
            for (size_t l = 0; l < T.gamma[i][k].size(); ++l)
                if (!T.gamma[i][k][l].is_zero()) {
                    os << " + (" << T.gamma[i][k][l].to_string() << ")[" << l + 1 << "]";
                    any = true;
                }
            if (!any) os << " 0";
            os << "\n";
        }
    emit(opt, j, os.str());
    return kOk;
}

int cmd_pairing(const Options& opt, const std::vector<FamilyRecord>& recs) {
    if (opt.positional.size() != 1 || !opt.flags.count("k"))
        return usage_error("pairing needs a family and --k K");
    const auto& r = find_family(recs, opt.positional[0]);
    int k = parse_int(opt.flags.at("k"), "--k");
    CohomologyModel M = cohomology(r.algebra);
    if (k < 0 || k > M.n) throw DataError("--k out of range");
    Matrix P = poincare_pairing(M, k);
    ordered_json j;
    j["family"] = r.name;
    j["k"] = k;
    ordered_json rows = ordered_json::array();
    for (int a = 0; a < P.rows; ++a) {
        ordered_json row = ordered_json::array();
        for (int b = 0; b < P.cols; ++b) row.push_back(P.at(a, b).to_string());
        rows.push_back(row);
    }
    j["matrix"] = rows;
    emit(opt, j,
         r.name + " Poincare pairing H^" + std::to_string(k) + " x H^" +
             std::to_string(M.n - k) + ":\n" + matrix_text(P));
    return kOk;
}

int cmd_catalog_check(const Options& opt, const std::vector<FamilyRecord>& recs) {
    CatalogReport rep = validate_catalog(recs);
    ordered_json j = catalog_report_to_json(rep);
    std::ostringstream os;
    for (const auto& e : rep.entries) {
        os << (e.ok() ? "PASS " : "FAIL ") << e.name << "\n";
        for (const auto& f : e.failures) os << "      " << f << "\n";
    }
    os << (rep.ok() ? "catalog OK\n" : "catalog has failures\n");
    emit(opt, j, os.str());
    return rep.ok() ? kOk : kNegative;
}

int cmd_iso_build(const Options& opt, const std::vector<FamilyRecord>& recs) {
    if (opt.positional.size() != 1 || !opt.flags.count("s") || !opt.flags.count("t"))
        return usage_error("iso-build needs a family and --s S --t T");
    const auto& r = find_family(recs, opt.positional[0]);
    if (!r.algebra.has_param) throw DataError(r.name + " has no parameter");
    Rat s = parse_rat(opt.flags.at("s"), "--s");
    Rat t = parse_rat(opt.flags.at("t"), "--t");
    for (const Rat& v : {s, t})
        if (is_excluded_value(r.algebra, v))
            throw DataError("parameter value " + to_string(v) + " is excluded for " + r.name);
    CohomologyModel src = cohomology(specialize(r.algebra, s));
    CohomologyModel tgt = cohomology(specialize(r.algebra, t));
    PolySystem S = build_graded_iso_system(src, tgt);
    ordered_json j = system_to_json(S);
    j["field"] = "Q";
    std::ostringstream os;
    os << r.name << " s=" << to_string(s) << " t=" << to_string(t) << ": "
       << S.vars.size() << " variables, " << S.equations.size() << " equations";
    if (S.inconsistent) os << " (INCONSISTENT: " << S.witness << ")";
    os << "\n";
    emit(opt, j, os.str());
    return S.inconsistent ? kNegative : kOk;
}

int cmd_iso_reduce(const Options& opt) {
    if (opt.positional.size() != 1) return usage_error("iso-reduce takes one system file");
    ordered_json in = read_json_file(opt.positional[0]);
    PolySystem S = system_from_json(in, field_of(in));
    PolySystem R = reduce_system(S);
    ordered_json j = system_to_json(R);
    j["field"] = in.contains("field") ? in["field"] : "Q";
    std::ostringstream os;
    os << "reduced to " << R.equations.size() << " equations; " << R.ledger.size()
       << " forcings:\n";
    for (const auto& le : R.ledger)
        os << "  " << le.var << " = " << le.value << "  [" << le.rule << "]\n";
    if (R.inconsistent) os << "INCONSISTENT: " << R.witness << "\n";
    emit(opt, j, os.str());
    return R.inconsistent ? kNegative : kOk;
}

int cmd_iso_verify(const Options& opt) {
    if (opt.positional.size() != 2)
        return usage_error("iso-verify takes a system file and an assignment file");
    ordered_json sj = read_json_file(opt.positional[0]);
    Field f = field_of(sj);
    PolySystem S = system_from_json(sj, f);
    auto assignment = assignment_from_json(read_json_file(opt.positional[1]), f);
    IsoVerdict v = verify_solution(S, assignment);
    ordered_json j = verdict_to_json(v);
    std::ostringstream os;
    os << (v.isomorphism ? "isomorphism verified\n"
                         : v.equations_vanish ? "equations vanish but a block is singular\n"
                                              : "assignment does not satisfy the system\n");
    emit(opt, j, os.str());
    return v.isomorphism ? kOk : kNegative;
}

int cmd_iso_search(const Options& opt) {
    if (opt.positional.size() != 1) return usage_error("iso-search takes one system file");
    ordered_json sj = read_json_file(opt.positional[0]);
    Field f = field_of(sj);
    PolySystem S = system_from_json(sj, f);
    std::vector<std::pair<std::string, Scalar>> guesses;
    if (opt.flags.count("guesses")) {
        ordered_json g = read_json_file(opt.flags.at("guesses"));
        for (auto it = g.begin(); it != g.end(); ++it)
            guesses.emplace_back(it.key(), parse_scalar(it.value().get<std::string>(), f));
    }
    SearchResult res = guided_search(S, guesses);
    ordered_json j;
    j["found"] = res.found;
    if (res.found) {
        ordered_json a;
        for (const auto& [name, val] : res.assignment) a[name] = val.to_string();
        j["assignment"] = a;
        j["verdict"] = verdict_to_json(res.verdict);
    } else {
        j["failure"] = res.failure;
    }
    emit(opt, j,
         res.found ? std::string("isomorphism found and verified\n")
                   : "search failed: " + res.failure + "\n");
    return res.found ? kOk : kNegative;
}

// Shared mode handling for deform/coboundary: returns lambda0 when numeric.
std::optional<Rat> deform_mode(const Options& opt, const FamilyRecord& r) {
    if (!r.algebra.has_param) throw DataError(r.name + " has no parameter");
    bool symbolic = opt.switches.count("--symbolic") > 0;
    bool numeric = opt.flags.count("lambda0") > 0;
    if (symbolic && numeric) throw DataError("--lambda0 and --symbolic are exclusive");
    if (!numeric) return std::nullopt;  // symbolic is the default
    Rat l0 = parse_rat(opt.flags.at("lambda0"), "--lambda0");
    if (is_excluded_value(r.algebra, l0))
        throw DataError("parameter value " + to_string(l0) + " is excluded for " + r.name);
    return l0;
}

int cmd_deform(const Options& opt, const std::vector<FamilyRecord>& recs) {
    if (opt.positional.size() != 1 || !opt.flags.count("order"))
        return usage_error("deform needs a family and --order M");
    const auto& r = find_family(recs, opt.positional[0]);
    int m = parse_int(opt.flags.at("order"), "--order");
    if (m < 0) throw DataError("--order must be nonnegative");
    auto l0 = deform_mode(opt, r);
    FiniteAlgebra A = assemble(cohomology(r.algebra));
    BilinearMap fm = maclaurin(A, m, l0 ? &*l0 : nullptr);
    bool cocycle = hochschild_2cocycle_check(A, maclaurin(A, m)).empty();
    ordered_json j;
    j["family"] = r.name;
    j["mode"] = l0 ? ordered_json(to_string(*l0)) : ordered_json("symbolic");
    j["order"] = m;
    j["dimension"] = A.N;
    ordered_json entries = ordered_json::array();
    for (const auto& [ij, v] : fm.entries)
        for (const auto& [k, c] : v) {
            ordered_json e;
            e["i"] = ij.first;
            e["j"] = ij.second;
            e["k"] = k;
            e["coeff"] = c.to_string();
            entries.push_back(e);
        }
    j["entries"] = entries;
    j["zero"] = fm.is_zero();
    j["cocycle"] = cocycle;
    std::ostringstream os;
    os << r.name << " f_" << m << (l0 ? " at lambda0=" + to_string(*l0) : " (symbolic)")
       << ": " << entries.size() << " nonzero entries"
       << (cocycle ? ", Hochschild 2-cocycle" : ", NOT a 2-cocycle") << "\n";
    emit(opt, j, os.str());
    return kOk;
}

int cmd_coboundary(const Options& opt, const std::vector<FamilyRecord>& recs) {
    if (opt.positional.size() != 1) return usage_error("coboundary takes one family");
    const auto& r = find_family(recs, opt.positional[0]);
    auto l0 = deform_mode(opt, r);
    FiniteAlgebra A = assemble(cohomology(r.algebra));
    BilinearMap f1 = maclaurin(A, 1, l0 ? &*l0 : nullptr);
    if (l0) A = specialize_algebra(A, *l0);
    DeformVerdict v = coboundary_verdict(A, f1);
    ordered_json mode = l0 ? ordered_json(to_string(*l0)) : ordered_json("symbolic");
    ordered_json j = deform_verdict_to_json(r.name, mode, v);
    std::ostringstream os;
    os << r.name << " coboundary test"
       << (l0 ? " at lambda0=" + to_string(*l0) : " (symbolic)") << ": "
       << (v.solvable ? "SOLVABLE" : "INCONSISTENT") << " (" << v.equation_count
       << " equations, " << v.unknown_count << " unknowns)\n";
    if (!v.solvable) os << "  witness row: " << v.inconsistency_row << "\n";
    if (v.solvable && !v.witness_verified) os << "  WARNING: witness failed verification\n";
    emit(opt, j, os.str());
    return v.solvable ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    std::string err;
    if (!parse_args(argc, argv, opt, err)) return usage_error(err);
    try {
        const std::string& c = opt.subcommand;
        if (c == "validate") return cmd_validate(opt);
        if (c == "iso-reduce") return cmd_iso_reduce(opt);
        if (c == "iso-verify") return cmd_iso_verify(opt);
        if (c == "iso-search") return cmd_iso_search(opt);
        // The remaining subcommands need the catalog.
        std::vector<FamilyRecord> recs = load_catalog(opt.catalog);
        if (c == "lcs") return cmd_lcs(opt, recs);
        if (c == "carnot") return cmd_carnot(opt, recs);
        if (c == "betti") return cmd_betti(opt, recs);
        if (c == "cup") return cmd_cup(opt, recs);
        if (c == "pairing") return cmd_pairing(opt, recs);
        if (c == "catalog-check") return cmd_catalog_check(opt, recs);
        if (c == "iso-build") return cmd_iso_build(opt, recs);
        if (c == "deform") return cmd_deform(opt, recs);
        if (c == "coboundary") return cmd_coboundary(opt, recs);
        return usage_error("unknown subcommand '" + c + "'");
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kUsage;
    }
}
