// One line per acceptance criterion. Exit status is nonzero when any selected
// criterion fails.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "crs/crcomplex.hpp"
#include "crs/fpgroups.hpp"
#include "crs/words.hpp"
#include "property_suites.hpp"

using namespace crs;

namespace {

constexpr double kTol = 1e-9;  // pinned geometric tolerance
constexpr int kGrid = 64;      // pinned face sampling density
constexpr int kHeights = 1000;
constexpr int kCases = 1000;

struct Outcome {
    bool pass = true;
    std::string detail;
    void need(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += what + (ok ? " ok" : " FAILED");
    }
};

std::string num(double x) {
    char b[32];
    std::snprintf(b, sizeof b, "%.4g", x);
    return b;
}

const Complex& complex_once() {
    static const Complex C = build_complex(kTol);
    return C;
}

SampleConfig grid() {
    SampleConfig s;
    s.n_edge = s.n_fiber = kGrid;
    return s;
}

Outcome c1() {
    Outcome o;
    for (const Representation& rep : {rho1(), rho2(), rho3()}) {
        o.need(check_group_relation(rep).all_pass(), rep.name + " relations (exact)");
        Report lat = check_lattice_membership(rep);
        std::string bad;
        for (auto& it : lat.items)
            if (!it.pass) bad += (bad.empty() ? "" : ", ") + it.detail;
        o.need(lat.all_pass(), rep.name + " entries in O_" + std::to_string(rep.d) + (bad.empty() ? "" : " [" + bad + "]"));
    }
    return o;
}

Outcome c2() {
    Outcome o;
    Representation r = rho2();
    auto ev = [&](const std::string& w) { return eval(r, parse_knot_word(w)); };
    ExactElem G1 = ev("g1"), G2 = ev("g2"), G3 = ev("g3");
    ExactElem Id = ExactElem::identity(QuadNum(7, 0));
    o.need(classify(G1) == IsomClass::PureParabolic, "G1 pure parabolic");
    o.need(classify(G3) == IsomClass::PureParabolic, "G3 pure parabolic");
    o.need(classify(G2) == IsomClass::RegularElliptic, "G2 regular elliptic");
    bool order4 = projective_eq(G2.pow(4), Id) && !projective_eq(G2, Id) && !projective_eq(G2.pow(2), Id) &&
                  !projective_eq(G2.pow(3), Id);
    o.need(order4, "G2 projective order 4");
    o.need(classify(G3 * G1.inv()) == IsomClass::Loxodromic, "G3 G1^-1 loxodromic");
    return o;
}

Outcome c3() {
    Outcome o;
    Report r = check_picard_identities();
    int bad = 0;
    for (auto& it : r.items) bad += !it.pass;
    o.need(r.all_pass(), std::to_string(r.items.size() - bad) + "/" + std::to_string(r.items.size()) + " identities");
    o.need(check_t3_commutator(rho2()), "rho2(t^3) = [rho2(a^-1), rho2(b^-1)] projectively");
    return o;
}

Outcome c4() {
    Outcome o;
    AbelianInvariants z6;
    z6.torsion = {BigInt(6)};
    AbelianInvariants A = abelianization(preset("p3"));
    o.need(A == z6, "P3 abelianization " + A.str());
    SubgroupPreset S = subgroup_preset("p3-N");
    CosetResult C = coset_enumeration(S.group, S.subgens, S.mode, 100000);
    o.need(!C.overflow && C.index == 6 && C.table.closed(), "coset index " + (C.overflow ? std::string("overflow") : std::to_string(C.index)));
    if (!C.overflow) {
        AbelianInvariants N = abelianization(reidemeister_schreier(S.group, C.table));
        o.need(N.free_rank == 2 && N.torsion.empty(), "N abelianization " + N.str());
    }
    AbelianInvariants Q = abelianization(preset("triangle236-quotient"));
    AbelianInvariants T = abelianization(preset("triangle236"));
    o.need(Q.finite() && Q.order() == 6 && Q == T, "quotient " + Q.str() + " vs (2,3,6) " + T.str());
    return o;
}

Outcome c5() {
    Outcome o;
    const Complex& C = complex_once();
    double worst = 0;
    int exact = 0;
    for (auto& d : C.V.derived)
        if (d.stated) {
            worst = std::max(worst, d.residual);
            exact += d.exact_kind && d.pass;
        }
    o.need(C.V.all_pass() && C.V.stated_count() == 14,
           std::to_string(C.V.stated_count()) + " derived vertices (" + std::to_string(exact) + " exact, worst residual " +
               num(worst) + ")");
    bool edges = true;
    for (auto& e : edge_checks(kTol)) edges = edges && e.pass;
    o.need(edges, "edge endpoints and chain membership at 1e-9");
    return o;
}

Outcome c6() {
    Outcome o;
    QuotientReport Q = quotient_combinatorics(complex_once());
    for (auto& [w, ok] : Q.cycle_words) o.need(ok, w + " = Id");
    o.need(Q.edge_classes == 2 && Q.face_classes == 4 && Q.vertex_classes == 1,
           std::to_string(Q.edge_classes) + " edge / " + std::to_string(Q.face_classes) + " face / " +
               std::to_string(Q.vertex_classes) + " vertex classes");
    return o;
}

Outcome c7() {
    Outcome o;
    HeightTable H = height_comparison(kHeights);
    o.need(H.interior_violations == 0 && H.gaps == 0,
           std::to_string(H.rows.size()) + " samples, min gap " + num(H.min_gap) + " at theta " + num(H.min_gap_theta));
    o.need(std::abs(H.t2_start) <= kTol && std::abs(H.t2_end - 5 * std::sqrt(7.0) / 8) <= kTol,
           "endpoints 0 and 5 sqrt7/8");
    return o;
}

Outcome c8() {
    Outcome o;
    IntersectionReport I = check_face_intersections(complex_once(), grid(), kTol);
    int bad = 0;
    double worst = HUGE_VAL;
    for (auto& p : I.pairs) {
        bad += !p.pass;
        worst = std::min(worst, p.min_offseam / p.threshold);
    }
    o.need(I.literal_pass(), std::to_string(I.pairs.size() - bad) + "/" + std::to_string(I.pairs.size()) +
                                 " pairs clear 10x spacing off-seam (worst ratio " + num(worst) + ", h " + num(I.h) + ")");
    for (auto& d : I.dedicated)
        o.need(d.pass, "dedicated " + d.name + " (min " + num(d.min_distance) + " vs " + num(d.threshold) + ")");
    return o;
}

Outcome c9() {
    Outcome o;
    const Complex& C = complex_once();
    for (auto [edge, want] : {std::pair<std::string, int>{"[p2,p1]", 1}, {"[p2,q2]", 3}}) {
        int w16 = edge_link_winding(C, edge, standard_cycle(edge), kTol, 16).winding;
        int w32 = edge_link_winding(C, edge, standard_cycle(edge), kTol, 32).winding;
        o.need(w16 == want && w32 == want,
               edge + " winding " + std::to_string(w16) + " (16 slices), " + std::to_string(w32) + " (32 slices)");
    }
    PipelineConfig cfg;
    cfg.sample = grid();
    cfg.tol = kTol;
    BranchingReport B = branching_report(cfg);
    o.need(B.structure == "branched" && B.holonomy == "rho2" && B.branch_order == 3,
           "branching_report " + B.structure + ", holonomy " + B.holonomy + ", order " + std::to_string(B.branch_order));
    return o;
}

Outcome c10() {
    Outcome o;
    auto run = [&](const char* name, const props::Result& r) {
        o.need(r.failures == 0 && r.cases >= kCases,
               std::string(name) + " " + std::to_string(r.cases) + " cases" +
                   (r.failures ? ", first failure: " + r.first_failure : ""));
    };
    run("field axioms", props::field_axioms(kCases));
    run("form invariance", props::form_invariance(kCases));
    run("lift/project roundtrip", props::lift_roundtrip(kCases));
    run("chain equivariance", props::chain_equivariance(kCases));
    run("SNF divisibility and oracle", props::snf_oracle(kCases));
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::vector<int> only;
    app.add_option("--criterion", only, "run only these criteria (1-10)")->check(CLI::Range(1, 10));
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<const char*, std::function<Outcome()>>> crit = {
        {"representation suite", c1},   {"classification", c2},       {"Picard identity suite", c3},
        {"group calculator", c4},       {"complex construction", c5}, {"cycle conditions", c6},
        {"height comparison", c7},      {"face intersections", c8},   {"branching", c9},
        {"property suites", c10},
    };
    bool all = true;
    for (std::size_t k = 0; k < crit.size(); ++k) {
        int id = int(k) + 1;
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        Outcome o;
        try {
            o = crit[k].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        all = all && o.pass;
        std::cout << "criterion " << id << " " << (o.pass ? "PASS" : "FAIL") << " [" << crit[k].first << "] "
                  << o.detail << std::endl;
    }
    return all ? 0 : 1;
}
