#include "crs/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "crs/fpgroups.hpp"
#include "crs/words.hpp"

namespace crs {

using nlohmann::json;

namespace {

std::string fmt_double(double x, int digits = 17) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

std::string px(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

// JSON cannot hold inf, so non-finite numbers become strings.
json num(double x) {
    if (std::isfinite(x)) return x;
    return fmt_double(x);
}

json point_json(const HeisPoint& p) {
    if (p.inf) return "infinity";
    return {{"x", num(p.z.real())}, {"y", num(p.z.imag())}, {"t", num(p.t)}};
}

ExactElem rho_elem(const Representation& rep, const std::string& word) { return eval(rep, parse_knot_word(word)); }

}  // namespace

// ---- configuration

void RunConfig::validate() const {
    if (precision_bits == 0) throw HarnessError("precision_bits must be positive");
    if (!(tol > 0.0) || !(tol < 1.0)) throw HarnessError("tol must lie in (0, 1)");
    if (n_edge <= 0 || n_fiber <= 0) throw HarnessError("n_edge and n_fiber must be positive");
    if (n_slices <= 0) throw HarnessError("n_slices must be positive");
    if (max_cosets <= 0) throw HarnessError("max_cosets must be positive");
    if (effective_out_dir().empty()) throw HarnessError("output directory is empty");
}

std::string RunConfig::effective_out_dir() const {
    const char* env = std::getenv(kOutDirEnv);
    if (env && *env) return env;
    return out_dir;
}

std::string RunConfig::resolve(const std::string& path) const {
    std::filesystem::path p(path);
    if (p.is_absolute()) return p.string();
    return (std::filesystem::path(effective_out_dir()) / p).lexically_normal().string();
}

SampleConfig RunConfig::sample() const {
    SampleConfig s;
    s.n_edge = n_edge;
    s.n_fiber = n_fiber;
    return s;
}

PipelineConfig RunConfig::pipeline() const {
    PipelineConfig p;
    p.sample = sample();
    p.tol = tol;
    p.n_slices = n_slices;
    return p;
}

// ---- reports

std::string to_string(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Inconclusive: return "inconclusive";
    }
    return "fail";
}

CheckReport CheckReport::make(std::string name, Status status, double residual, json witness, std::string provenance) {
    if (status != Status::Pass && (witness.is_null() || (witness.is_object() && witness.empty())))
        throw HarnessError("check '" + name + "' is not passing but carries no witness");
    CheckReport r;
    r.name = std::move(name);
    r.status = status;
    r.residual = residual;
    r.witness = std::move(witness);
    r.provenance = std::move(provenance);
    return r;
}

CheckReport CheckReport::boolean(std::string name, bool pass, std::string detail, std::string provenance) {
    json w = nullptr;
    if (!pass)
        w = {{"detail", detail.empty() ? "identity does not hold" : detail}};
    else if (!detail.empty())
        w = {{"detail", detail}};
    return make(std::move(name), pass ? Status::Pass : Status::Fail, pass ? 0.0 : 1.0, std::move(w),
                std::move(provenance));
}

json CheckReport::to_json() const {
    return {{"name", name}, {"status", to_string(status)}, {"residual", num(residual)}, {"witness", witness},
            {"provenance", provenance}};
}

bool RunReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](auto& c) { return c.status == Status::Pass; });
}

json RunReport::to_json() const {
    json cs = json::array();
    int failed = 0, inconclusive = 0;
    for (auto& c : checks) {
        cs.push_back(c.to_json());
        failed += c.status == Status::Fail;
        inconclusive += c.status == Status::Inconclusive;
    }
    json cfg = {{"precision_bits", config.precision_bits}, {"tol", config.tol},   {"n_edge", config.n_edge},
                {"n_fiber", config.n_fiber},               {"n_slices", config.n_slices},
                {"max_cosets", config.max_cosets}};
    return {{"command", command},
            {"config", cfg},
            {"status", pass() ? "pass" : (failed ? "fail" : "inconclusive")},
            {"summary", {{"checks", checks.size()}, {"failed", failed}, {"inconclusive", inconclusive}}},
            {"checks", cs},
            {"info", info}};
}

// ---- group-theoretic and matrix checks

namespace {

void add_report(RunReport& R, const Report& rep, const std::string& provenance) {
    for (auto& it : rep.items) R.checks.push_back(CheckReport::boolean(it.name, it.pass, it.detail, provenance));
}

Representation rep_by_index(int rho) {
    switch (rho) {
        case 1: return rho1();
        case 2: return rho2();
        case 3: return rho3();
    }
    throw HarnessError("--rho must be 1, 2 or 3");
}

json classes_of(const Representation& rep) {
    json j = json::object();
    for (const char* g : {"g1", "g2", "g3"}) j[g] = to_string(classify(rho_elem(rep, g)));
    return j;
}

// Known abelianizations; keys are preset names.
struct AbExpect {
    std::vector<long> torsion;
    int free_rank;
    const char* provenance;
};

const std::map<std::string, AbExpect>& ab_expectations() {
    static const std::map<std::string, AbExpect> m = {
        {"p3", {{6}, 0, "P3 abelianizes to Z/6"}},
        {"fig8", {{}, 1, "the figure-eight knot group abelianizes to Z"}},
        {"triangle236-quotient", {{6}, 0, "the <P,Q> quotient matches the (2,3,6) triangle group abelianization"}},
        {"triangle236", {{6}, 0, "the (2,3,6) triangle group abelianizes to Z/6"}},
    };
    return m;
}

AbelianInvariants invariants(const std::vector<long>& torsion, int free_rank) {
    AbelianInvariants A;
    for (long t : torsion) A.torsion.push_back(BigInt(t));
    A.free_rank = free_rank;
    return A;
}

CheckReport abelian_check(const std::string& name, const AbelianInvariants& got, const AbelianInvariants& want,
                          const std::string& provenance) {
    bool ok = got == want;
    json w = nullptr;
    if (!ok) w = {{"computed", got.str()}, {"expected", want.str()}};
    return CheckReport::make(name, ok ? Status::Pass : Status::Fail, ok ? 0.0 : 1.0, w, provenance);
}

struct CosetRun {
    SubgroupPreset S;
    CosetResult C;
};

CosetRun run_cosets(const std::string& preset_name, const RunConfig& cfg) {
    CosetRun r;
    try {
        r.S = subgroup_preset(preset_name);
    } catch (const GroupError& e) {
        throw HarnessError(e.what());
    }
    r.C = coset_enumeration(r.S.group, r.S.subgens, r.S.mode, cfg.max_cosets);
    return r;
}

CheckReport coset_check(const CosetRun& r, const RunConfig& cfg) {
    const char* prov = "P3 modulo the normal closure N is cyclic of order 6";
    if (r.C.overflow)
        return CheckReport::make("coset enumeration closes with index 6", Status::Inconclusive, 0.0,
                                 {{"detail", "inconclusive at bound"},
                                  {"max_cosets", cfg.max_cosets},
                                  {"max_defined", r.C.max_defined}},
                                 prov);
    bool ok = r.C.index == 6 && r.C.table.closed() && r.C.table.consistent();
    json w = nullptr;
    if (!ok) w = {{"index", r.C.index}, {"closed", r.C.table.closed()}, {"consistent", r.C.table.consistent()}};
    return CheckReport::make("coset enumeration closes with index 6", ok ? Status::Pass : Status::Fail,
                             ok ? 0.0 : std::abs(r.C.index - 6.0), w, prov);
}

}  // namespace

RunReport verify_rep(int rho, const RunConfig& cfg) {
    cfg.validate();
    Representation rep = rep_by_index(rho);
    RunReport R;
    R.command = "verify rep --rho " + std::to_string(rho);
    R.config = cfg;
    const std::string prov = rep.name + " defines a representation of the figure-eight knot group";
    add_report(R, check_group_relation(rep), prov);
    add_report(R, check_lattice_membership(rep), rep.name + " takes values in PU(2,1;O_" + std::to_string(rep.d) + ")");
    R.info["classes"] = classes_of(rep);
    R.info["representation"] = rep.name;
    R.info["d"] = rep.d;
    bool t3 = check_t3_commutator(rep);
    if (rho == 2) {
        R.checks.push_back(CheckReport::boolean("t^3 = [a^-1,b^-1]", t3, "", "fiber monodromy identity for rho2"));
        ExactElem G1 = rho_elem(rep, "g1"), G2 = rho_elem(rep, "g2"), G3 = rho_elem(rep, "g3");
        ExactElem Id = ExactElem::identity(QuadNum(7, 0));
        auto cls = [&](const std::string& name, const ExactElem& M, IsomClass want) {
            IsomClass got = classify(M);
            R.checks.push_back(CheckReport::boolean(name + " is " + to_string(want), got == want,
                                                    got == want ? "" : "classified " + to_string(got),
                                                    "isometry types of the rho2 generators"));
        };
        cls("G1", G1, IsomClass::PureParabolic);
        cls("G3", G3, IsomClass::PureParabolic);
        cls("G2", G2, IsomClass::RegularElliptic);
        cls("G3 G1^-1", G3 * G1.inv(), IsomClass::Loxodromic);
        bool order4 = projective_eq(G2.pow(4), Id);
        for (int k = 1; k <= 3; ++k) order4 = order4 && !projective_eq(G2.pow(k), Id);
        R.checks.push_back(CheckReport::boolean("G2 has projective order 4", order4, "",
                                                "isometry types of the rho2 generators"));
        ConventionResult conv = commutator_convention_check();
        R.info["commutator_convention"] = conv.xyXY ? "x y x^-1 y^-1" : (conv.XYxy ? "x^-1 y^-1 x y" : "neither");
    } else {
        R.info["t3_commutator"] = t3;
    }
    return R;
}

RunReport verify_picard(int d, const RunConfig& cfg) {
    cfg.validate();
    RunReport R;
    R.command = "verify picard --d " + std::to_string(d);
    R.config = cfg;
    if (d == 7) {
        add_report(R, check_picard_identities(), "generators and relations of the stabilizer in PU(2,1;O_7)");
        add_report(R, check_lattice_membership(picard7_generators()), "the stabilizer generators lie in PU(2,1;O_7)");
        R.checks.push_back(CheckReport::boolean("rho2(t^3) = [rho2(a^-1), rho2(b^-1)]", check_t3_commutator(rho2()), "",
                                                "fiber monodromy identity for rho2"));
    } else if (d == 3) {
        add_report(R, check_group_relation(rho1()), "rho1 defines a representation of the figure-eight knot group");
        add_report(R, check_lattice_membership(rho1()), "rho1 takes values in PU(2,1;O_3)");
        const char* prov = "P3 abelianizes to Z/6";
        R.checks.push_back(abelian_check("P3 abelianization is Z/6", abelianization(preset("p3")), invariants({6}, 0), prov));
        CosetRun cr = run_cosets("p3-N", cfg);
        R.checks.push_back(coset_check(cr, cfg));
        if (!cr.C.overflow) {
            Presentation N = reidemeister_schreier(cr.S.group, cr.C.table);
            R.checks.push_back(abelian_check("N abelianizes to Z^2", abelianization(N), invariants({}, 2),
                                             "the index 6 subgroup N has abelianization Z + Z"));
        }
        R.info["note"] = "no P, Q matrices for the d = 3 lattice are shipped; see the README";
    } else {
        throw HarnessError("--d must be 3 or 7");
    }
    return R;
}

RunReport fp_abelianize(const std::string& name, const RunConfig& cfg) {
    cfg.validate();
    RunReport R;
    R.command = "fp abelianize --preset " + name;
    R.config = cfg;
    Presentation P;
    try {
        P = preset(name);
    } catch (const GroupError& e) {
        throw HarnessError(e.what());
    }
    AbelianInvariants A = abelianization(P);
    R.info["presentation"] = P.str();
    R.info["abelianization"] = A.str();
    auto it = ab_expectations().find(name);
    if (it != ab_expectations().end())
        R.checks.push_back(abelian_check("abelianization of " + name, A,
                                         invariants(it->second.torsion, it->second.free_rank), it->second.provenance));
    if (name == "triangle236-quotient") {
        AbelianInvariants T = abelianization(preset("triangle236"));
        R.checks.push_back(abelian_check("agrees with the (2,3,6) triangle group", A, T,
                                         "the <P,Q> quotient matches the (2,3,6) triangle group abelianization"));
    }
    return R;
}

RunReport fp_cosets(const std::string& name, const RunConfig& cfg) {
    cfg.validate();
    RunReport R;
    R.command = "fp cosets --preset " + name;
    R.config = cfg;
    CosetRun cr = run_cosets(name, cfg);
    R.checks.push_back(coset_check(cr, cfg));
    R.info["index"] = cr.C.overflow ? json(nullptr) : json(cr.C.index);
    R.info["max_defined"] = cr.C.max_defined;
    R.info["overflow"] = cr.C.overflow;
    return R;
}

RunReport fp_subgroup(const std::string& name, const RunConfig& cfg) {
    cfg.validate();
    RunReport R;
    R.command = "fp subgroup --preset " + name;
    R.config = cfg;
    CosetRun cr = run_cosets(name, cfg);
    R.checks.push_back(coset_check(cr, cfg));
    if (cr.C.overflow) return R;
    Presentation N = reidemeister_schreier(cr.S.group, cr.C.table, Transversal::BFS);
    Presentation N2 = reidemeister_schreier(cr.S.group, cr.C.table, Transversal::ReverseBFS);
    AbelianInvariants A = abelianization(N), A2 = abelianization(N2);
    R.checks.push_back(abelian_check("N abelianizes to Z^2", A, invariants({}, 2),
                                     "the index 6 subgroup N has abelianization Z + Z"));
    R.checks.push_back(abelian_check("independent of the transversal", A2, A,
                                     "the index 6 subgroup N has abelianization Z + Z"));
    R.info["subgroup_generators"] = N.gens.size();
    R.info["subgroup_relators"] = N.rels.size();
    R.info["abelianization"] = A.str();
    return R;
}

// ---- complex serialization

namespace {

json exact_json(const ExactPoint& p) {
    BigInt den = 1;
    for (const BigRational* q : {&p.z.re(), &p.z.im(), &p.tc}) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q->get_den_mpz_t());
    auto scaled = [&](const BigRational& q) {
        BigRational s = q * BigRational(den);
        return s.get_num().get_str();
    };
    return {{"d", p.d()},
            {"denominator", den.get_str()},
            {"re", scaled(p.z.re())},
            {"im", scaled(p.z.im())},
            {"tc", scaled(p.tc)},
            {"reading", "z = (re + im i sqrt(d)) / denominator, t = tc sqrt(d) / denominator"}};
}

json decimal_json(const NamedPoint& np, unsigned bits) {
    if (np.exact) {
        const ExactPoint& e = *np.exact;
        int digits = int(std::ceil(bits * std::log10(2.0))) + 1;
        FloatApprox z = enclose(e.z, bits);
        FloatApprox t = enclose(QuadNum(e.d(), 0, e.tc), bits);  // imaginary part is tc sqrt(d)
        return {{"precision_bits", bits}, {"x", z.re.str(digits)}, {"y", z.im.str(digits)}, {"t", t.im.str(digits)}};
    }
    return {{"precision_bits", 53},
            {"x", fmt_double(np.p.z.real())},
            {"y", fmt_double(np.p.z.imag())},
            {"t", fmt_double(np.p.t)}};
}

std::string kind_name(SubFaceKind k) {
    switch (k) {
        case SubFaceKind::ConeFrom: return "cone_from_apex";
        case SubFaceKind::ConeTo: return "cone_to_apex";
        case SubFaceKind::Disc: return "chain_disc";
    }
    return "?";
}

json face_json(const FaceDef& F) {
    json subs = json::array();
    for (auto& s : F.subs) {
        json j = {{"name", s.name}, {"kind", kind_name(s.kind)}};
        if (s.kind == SubFaceKind::Disc) {
            j["base"] = {{"x", s.disc_z0.real()}, {"y", s.disc_z0.imag()}};
            j["direction"] = {{"x", s.disc_dir.real()}, {"y", s.disc_dir.imag()}};
        } else {
            j["apex"] = s.apex_name;
            j["edge"] = {s.edge_from, s.edge_to};
        }
        if (!s.shared_id.empty()) j["shared_id"] = s.shared_id;
        subs.push_back(j);
    }
    return {{"name", F.name}, {"vertices", F.vertices}, {"subfaces", subs}};
}

}  // namespace

json serialize_complex(const Complex& C, unsigned bits) {
    json verts = json::array();
    for (auto& [name, np] : C.V.points) {
        json v = {{"name", name}, {"infinite", np.p.inf}};
        if (np.p.inf) {
            v["exact"] = nullptr;
            v["float"] = nullptr;
        } else {
            v["exact"] = np.exact ? exact_json(*np.exact) : json(nullptr);
            v["float"] = decimal_json(np, bits);
        }
        verts.push_back(v);
    }
    json derived = json::array();
    for (auto& d : C.V.derived)
        derived.push_back({{"name", d.name},
                           {"word", d.word},
                           {"source", d.source},
                           {"stated", d.stated},
                           {"exact", d.exact_kind},
                           {"residual", d.residual},
                           {"pass", d.pass}});
    json edges = json::array();
    for (auto& e : C.skeleton)
        edges.push_back({{"name", e.name},
                         {"from", e.a},
                         {"to", e.b},
                         {"chain", e.arc.chain.vertical() ? "vertical" : "finite"},
                         {"orientation", e.arc.orientation == Orientation::Negative ? "negative" : "positive"}});
    json tets = json::array();
    for (auto& T : C.T) {
        json faces = json::array();
        for (auto& F : T.faces) faces.push_back(face_json(F));
        tets.push_back({{"name", T.name}, {"vertices", T.vertices}, {"generalized", T.generalized}, {"faces", faces}});
    }
    json pairs = json::array();
    for (auto& p : C.pairings)
        pairs.push_back({{"name", p.name},
                         {"word", p.word},
                         {"source_face", p.source_face},
                         {"target_face", p.target_face},
                         {"source", p.source},
                         {"target", p.target},
                         {"verified", p.verified}});
    return {{"holonomy", "rho2"},  {"vertices", verts},     {"derived_vertices", derived},
            {"edges", edges},      {"tetrahedra", tets},    {"pairings", pairs}};
}

// ---- complex commands

namespace {

const char* kProvVertices = "vertices of the triangulation as images under the holonomy";
const char* kProvEdges = "parametrizations of the edges [p2,p1] and [p2,q2]";
const char* kProvFaces = "the faces of the two tetrahedra are embedded and meet only along common edges";
const char* kProvPairing = "side pairings map faces onto faces";
const char* kProvHeights = "the chain from q2 to v7 stays above the face";
const char* kProvLinks = "edge cycles: covering order 1 around [p2,p1] and 3 around [p2,q2]";
const char* kProvQuotient = "the quotient has 2 edge classes, 4 face classes and one ideal vertex";
const char* kProvBranched = "rho2 is the holonomy of a branched structure with branch order 3";

Complex build_or_throw(const RunConfig& cfg) { return build_complex(cfg.tol); }

void add_vertex_checks(RunReport& R, const Complex& C, const RunConfig& cfg) {
    for (auto& d : C.V.derived) {
        if (!d.stated) continue;
        json w = nullptr;
        if (!d.pass) w = {{"expected", point_json(d.expected)}, {"computed", point_json(d.computed)}};
        R.checks.push_back(CheckReport::make("vertex " + d.name + " = " + d.word + "(" + d.source + ")" +
                                                 (d.exact_kind ? " exactly" : ""),
                                             d.pass ? Status::Pass : Status::Fail, d.residual, w, kProvVertices));
    }
    bool n14 = C.V.stated_count() == 14;
    R.checks.push_back(CheckReport::boolean("14 stated vertices", n14, std::to_string(C.V.stated_count()) + " stated",
                                            kProvVertices));
    (void)cfg;
}

void add_height_check(RunReport& R, int n) {
    HeightTable H = height_comparison(n);
    bool ok = H.pass(kDefaultTol);
    json w = {{"min_gap", H.min_gap},
              {"min_gap_theta", H.min_gap_theta},
              {"interior_violations", H.interior_violations},
              {"gaps", H.gaps},
              {"monotone_tail", H.monotone_tail},
              {"t2_start", H.t2_start},
              {"t2_end", H.t2_end},
              {"samples", H.rows.size()}};
    R.checks.push_back(CheckReport::make("height comparison", ok ? Status::Pass : Status::Fail,
                                         ok ? 0.0 : std::max(0.0, -H.min_gap), w, kProvHeights));
}

void add_link_checks(RunReport& R, const Complex& C, const RunConfig& cfg) {
    for (auto [edge, want] : {std::pair<std::string, int>{"[p2,p1]", 1}, {"[p2,q2]", 3}}) {
        try {
            EdgeLink a = edge_link_winding(C, edge, standard_cycle(edge), cfg.tol, cfg.n_slices);
            EdgeLink b = edge_link_winding(C, edge, standard_cycle(edge), cfg.tol, 2 * cfg.n_slices);
            bool ok = a.winding == want && b.winding == want;
            json w = {{"winding", a.winding},
                      {"winding_doubled_slices", b.winding},
                      {"residual", a.residual},
                      {"rotation_sense", a.rotation_sense},
                      {"steps", a.steps.size()}};
            R.checks.push_back(CheckReport::make("winding around " + edge + " is " + std::to_string(want),
                                                 ok ? Status::Pass : Status::Fail, a.residual, w, kProvLinks));
        } catch (const ComplexError& e) {
            R.checks.push_back(CheckReport::make("winding around " + edge + " is " + std::to_string(want),
                                                 Status::Fail, 1.0, {{"detail", e.what()}}, kProvLinks));
        }
    }
}

void add_quotient_check(RunReport& R, const Complex& C) {
    QuotientReport Q = quotient_combinatorics(C);
    json words = json::array();
    for (auto& [w, ok] : Q.cycle_words) words.push_back({{"word", w}, {"identity", ok}});
    json w = {{"edge_classes", Q.edge_classes},
              {"face_classes", Q.face_classes},
              {"vertex_classes", Q.vertex_classes},
              {"euler", Q.euler},
              {"edge_class_members", Q.edge_class_members},
              {"cycle_words", words}};
    R.checks.push_back(CheckReport::make("quotient combinatorics", Q.pass() ? Status::Pass : Status::Fail,
                                         Q.pass() ? 0.0 : 1.0, w, kProvQuotient));
}

}  // namespace

RunReport complex_build(const RunConfig& cfg) {
    cfg.validate();
    RunReport R;
    R.command = "complex build";
    R.config = cfg;
    Complex C = build_or_throw(cfg);
    add_vertex_checks(R, C, cfg);
    for (auto& p : C.pairings)
        R.checks.push_back(CheckReport::boolean(p.name + " maps " + p.source_face + " to " + p.target_face, p.verified,
                                                "", kProvPairing));
    R.info["complex"] = serialize_complex(C, cfg.precision_bits);
    return R;
}

RunReport complex_check_edges(const RunConfig& cfg) {
    cfg.validate();
    RunReport R;
    R.command = "complex check-edges";
    R.config = cfg;
    Complex C = build_or_throw(cfg);
    for (auto& c : edge_checks(cfg.tol))
        R.checks.push_back(CheckReport::boolean(c.name, c.pass, c.detail, kProvEdges));
    add_link_checks(R, C, cfg);
    add_quotient_check(R, C);
    add_height_check(R, 1000);
    return R;
}

RunReport complex_check_faces(const RunConfig& cfg) {
    cfg.validate();
    RunReport R;
    R.command = "complex check-faces";
    R.config = cfg;
    Complex C = build_or_throw(cfg);
    SampleConfig sc = cfg.sample();
    for (auto& e : side_pairing_equivariance(C, sc, cfg.tol)) {
        json w = {{"samples", e.samples},
                  {"skipped_at_infinity", e.skipped},
                  {"threshold", e.threshold},
                  {"witness", point_json(e.witness)}};
        R.checks.push_back(CheckReport::make(e.pairing + " maps " + e.source_face + " into " + e.target_face,
                                             e.pass ? Status::Pass : Status::Fail, e.max_distance, w, kProvPairing));
    }
    IntersectionReport I = check_face_intersections(C, sc, cfg.tol);
    for (auto& p : I.pairs) {
        json w = {{"common", p.common},
                  {"sample_spacing", p.h},
                  {"seam_band", p.band},
                  {"threshold", p.threshold},
                  {"min_offseam", num(p.min_offseam)},
                  {"band_needed", num(p.band_needed)},
                  {"seam_coincidence", p.seam_coincidence},
                  {"mesh_crossings", p.crossings},
                  {"witness_a", point_json(p.wa)},
                  {"witness_b", point_json(p.wb)}};
        R.checks.push_back(CheckReport::make("separation " + p.a + " | " + p.b, p.pass ? Status::Pass : Status::Fail,
                                             std::max(0.0, p.threshold - p.min_offseam), w, kProvFaces));
    }
    for (auto& d : I.dedicated) {
        json w = {{"detail", d.detail},
                  {"min_distance", d.min_distance},
                  {"threshold", d.threshold},
                  {"seam_band", d.band},
                  {"witness", point_json(d.witness)}};
        R.checks.push_back(CheckReport::make("dedicated " + d.name, d.pass ? Status::Pass : Status::Fail,
                                             std::max(0.0, d.threshold - d.min_distance), w, kProvFaces));
    }
    R.info["sample_spacing"] = I.h;
    R.info["crossing_free"] = I.crossing_free();
    return R;
}

RunReport complex_report(const RunConfig& cfg) {
    cfg.validate();
    RunReport R;
    R.command = "complex report";
    R.config = cfg;
    BranchingReport B = branching_report(cfg.pipeline());
    for (auto& c : B.checks) R.checks.push_back(CheckReport::boolean(c.name, c.pass, c.detail, kProvBranched));
    bool branched = B.structure == "branched" && B.branch_order == 3;
    R.checks.push_back(CheckReport::make(
        "branched structure of order 3", branched ? Status::Pass : Status::Fail, branched ? 0.0 : 1.0,
        branched ? json(nullptr) : json{{"structure", B.structure}, {"branch_order", B.branch_order}}, kProvBranched));
    R.info = {{"holonomy", B.holonomy},
              {"branch_locus", B.branch_locus},
              {"branch_order", B.branch_order},
              {"unbranched_order", B.unbranched_order},
              {"structure", B.structure},
              {"overall_pass", B.overall_pass},
              {"failing", B.failing}};
    return R;
}

// ---- figures

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

struct Box {
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    void add(double x, double y) {
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
    }
    bool empty() const { return x0 > x1; }
};

struct Frame {
    double W = 800, H = 800, margin = 40;
    double sx = 1, ox = 0, oy = 0;
    Frame(Box b) {
        if (b.empty()) b = Box{-1, 1, -1, 1};
        double w = std::max(b.x1 - b.x0, 1e-9), h = std::max(b.y1 - b.y0, 1e-9);
        sx = std::min((W - 2 * margin) / w, (H - 2 * margin) / h);
        ox = margin + ((W - 2 * margin) - sx * w) / 2 - sx * b.x0;
        oy = margin + ((H - 2 * margin) - sx * h) / 2 + sx * b.y1;
    }
    double X(double x) const { return ox + sx * x; }
    double Y(double y) const { return oy - sx * y; }
};

std::string polyline(const std::vector<std::pair<double, double>>& pts, const Frame& f, const std::string& style) {
    std::string s = "<polyline fill=\"none\" " + style + " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) s += ' ';
        s += px(f.X(pts[i].first)) + "," + px(f.Y(pts[i].second));
    }
    return s + "\"/>\n";
}

std::string xml_escape(const std::string& t) {
    std::string o;
    for (char c : t) {
        if (c == '<') o += "&lt;";
        else if (c == '>') o += "&gt;";
        else if (c == '&') o += "&amp;";
        else o += c;
    }
    return o;
}

}  // namespace

std::string render_projection(const std::vector<const FaceDef*>& faces, const VertexSet* labels,
                              const SampleConfig& cfg) {
    const int lines = 12;
    const int per_line = std::max(cfg.n_fiber, 8);
    using Line = std::vector<std::pair<double, double>>;
    std::vector<std::vector<Line>> face_lines;
    Box box;
    for (const FaceDef* F : faces) {
        std::vector<Line> ls;
        for (auto& S : F->subs) {
            for (int dir = 0; dir < 2; ++dir)
                for (int a = 0; a <= lines; ++a) {
                    Line L;
                    for (int b = 0; b <= per_line; ++b) {
                        double x = double(a) / lines, y = double(b) / per_line;
                        HeisPoint p = dir == 0 ? S.point_trunc(x, y, cfg.depth, cfg.length)
                                               : S.point_trunc(y, x, cfg.depth, cfg.length);
                        if (p.inf) continue;
                        L.push_back({p.z.real(), p.z.imag()});
                        box.add(p.z.real(), p.z.imag());
                    }
                    if (L.size() > 1) ls.push_back(std::move(L));
                }
        }
        face_lines.push_back(std::move(ls));
    }
    // labels for every named point the faces touch
    std::vector<std::pair<std::string, HeisPoint>> named;
    if (labels) {
        std::set<std::string> names;
        for (const FaceDef* F : faces) {
            for (auto& v : F->vertices) names.insert(v);
            for (auto& S : F->subs)
                for (auto* n : {&S.apex_name, &S.edge_from, &S.edge_to})
                    if (!n->empty()) names.insert(*n);
        }
        for (auto& n : names) {
            auto it = labels->points.find(n);
            if (it == labels->points.end() || it->second.p.inf) continue;
            named.push_back({n, it->second.p});
            box.add(it->second.p.z.real(), it->second.p.z.imag());
        }
    }
    Frame f(box);
    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n";
    s += "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";
    if (!box.empty()) {
        double ax0 = f.X(box.x0), ax1 = f.X(box.x1), ay0 = f.Y(box.y0), ay1 = f.Y(box.y1);
        if (box.y0 <= 0 && box.y1 >= 0)
            s += "<line x1=\"" + px(ax0) + "\" y1=\"" + px(f.Y(0)) + "\" x2=\"" + px(ax1) + "\" y2=\"" + px(f.Y(0)) +
                 "\" stroke=\"#bbbbbb\" stroke-width=\"0.5\"/>\n";
        if (box.x0 <= 0 && box.x1 >= 0)
            s += "<line x1=\"" + px(f.X(0)) + "\" y1=\"" + px(ay1) + "\" x2=\"" + px(f.X(0)) + "\" y2=\"" + px(ay0) +
                 "\" stroke=\"#bbbbbb\" stroke-width=\"0.5\"/>\n";
    }
    for (std::size_t k = 0; k < faces.size(); ++k) {
        std::string color = kPalette[k % (sizeof kPalette / sizeof *kPalette)];
        s += "<g id=\"" + xml_escape(faces[k]->name) + "\">\n";
        for (auto& L : face_lines[k])
            s += polyline(L, f, "stroke=\"" + color + "\" stroke-width=\"0.8\" stroke-opacity=\"0.6\"");
        s += "</g>\n";
        s += "<text x=\"10\" y=\"" + px(20.0 + 16.0 * k) + "\" font-size=\"13\" fill=\"" + color + "\">" +
             xml_escape(faces[k]->name) + "</text>\n";
    }
    std::vector<std::pair<double, double>> placed;
    for (auto& [n, p] : named) {
        double X = f.X(p.z.real()), Y = f.Y(p.z.imag());
        s += "<circle cx=\"" + px(X) + "\" cy=\"" + px(Y) + "\" r=\"3\" fill=\"black\"/>\n";
        // points sharing a projection (v2, v3) get stacked labels
        double ly = Y - 5;
        for (auto& [qx, qy] : placed)
            if (std::abs(qx - X) < 8 && std::abs(qy - ly) < 12) ly = qy - 14;
        placed.push_back({X, ly});
        s += "<text x=\"" + px(X + 5) + "\" y=\"" + px(ly) + "\" font-size=\"12\">" + xml_escape(n) + "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

std::string render_heights_csv(const HeightTable& H) {
    std::string s = "theta,t1,t2\r\n";
    for (auto& r : H.rows)
        s += fmt_double(r.theta) + "," + (r.gap ? std::string() : fmt_double(r.t1)) + "," + fmt_double(r.t2) + "\r\n";
    return s;
}

std::string render_heights_svg(const HeightTable& H) {
    Box box;
    for (auto& r : H.rows) {
        box.add(r.theta, r.t2);
        if (!r.gap) box.add(r.theta, r.t1);
    }
    // stretch theta so the plot is not a sliver
    double ys = 1.0;
    if (!box.empty() && box.x1 > box.x0 && box.y1 > box.y0) ys = (box.x1 - box.x0) / (box.y1 - box.y0);
    Box scaled;
    if (!box.empty()) {
        scaled.add(box.x0, box.y0 * ys);
        scaled.add(box.x1, box.y1 * ys);
    }
    Frame f(scaled);
    std::vector<std::pair<double, double>> l1, l2;
    for (auto& r : H.rows) {
        l2.push_back({r.theta, r.t2 * ys});
        if (!r.gap) l1.push_back({r.theta, r.t1 * ys});
    }
    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n";
    s += "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";
    if (!scaled.empty()) {
        s += "<rect x=\"" + px(f.X(scaled.x0)) + "\" y=\"" + px(f.Y(scaled.y1)) + "\" width=\"" +
             px(f.X(scaled.x1) - f.X(scaled.x0)) + "\" height=\"" + px(f.Y(scaled.y0) - f.Y(scaled.y1)) +
             "\" fill=\"none\" stroke=\"#999999\" stroke-width=\"0.5\"/>\n";
        s += "<text x=\"" + px(f.X(scaled.x0)) + "\" y=\"" + px(f.Y(scaled.y0) + 16) + "\" font-size=\"12\">theta " +
             fmt_double(box.x0, 6) + "</text>\n";
        s += "<text x=\"" + px(f.X(scaled.x1) - 90) + "\" y=\"" + px(f.Y(scaled.y0) + 16) +
             "\" font-size=\"12\">theta " + fmt_double(box.x1, 6) + "</text>\n";
        s += "<text x=\"" + px(f.X(scaled.x0) + 4) + "\" y=\"" + px(f.Y(scaled.y1) + 14) + "\" font-size=\"12\">t " +
             fmt_double(box.y1, 6) + "</text>\n";
    }
    if (l1.size() > 1) s += polyline(l1, f, "stroke=\"#1f77b4\" stroke-width=\"1.5\"");
    if (l2.size() > 1) s += polyline(l2, f, "stroke=\"#d62728\" stroke-width=\"1.5\"");
    s += "<text x=\"60\" y=\"24\" font-size=\"13\" fill=\"#1f77b4\">t1: height of the face</text>\n";
    s += "<text x=\"60\" y=\"40\" font-size=\"13\" fill=\"#d62728\">t2: height of the chain from q2 to v7</text>\n";
    s += "</svg>\n";
    return s;
}

void write_file(const std::string& path, const std::string& text) {
    std::filesystem::path p(path);
    std::error_code ec;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
    std::ofstream os(p, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    os << text;
    os.close();
    if (!os) throw IoError("write to '" + path + "' failed");
}

}  // namespace crs
