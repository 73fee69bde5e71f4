#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "crs/crcomplex.hpp"

using namespace crs;

namespace {
const double s2 = std::sqrt(2.0), s7 = std::sqrt(7.0), s14 = std::sqrt(14.0);

const Complex& complex() {
    static const Complex C = build_complex();
    return C;
}

const DerivedVertex& derived(const std::string& name) {
    for (auto& d : complex().V.derived)
        if (d.name == name) return d;
    throw std::runtime_error("missing " + name);
}

ExactPoint ep(BigRational re, BigRational im, BigRational tc) { return ExactPoint::at(QuadNum(7, re, im), tc); }

SampleConfig small() {
    SampleConfig c;
    c.n_edge = c.n_fiber = 24;
    return c;
}
}  // namespace

TEST_CASE("derived vertices") {
    const VertexSet& V = complex().V;
    CHECK(V.stated_count() == 14);
    CHECK(V.all_pass());
    CHECK(*derived("q5").exact_computed == ep(rat(-5, 4), rat(1, 4), 0));
    CHECK(*derived("q6").exact_computed == ep(rat(-1, 4), rat(1, 4), rat(1, 2)));
    CHECK(*derived("p5").exact_computed == ep(rat(3, 4), rat(1, 4), 0));
    CHECK(*derived("v4").exact_computed == ep(rat(3, 4), rat(1, 4), 0));
    CHECK(*derived("p'1").exact_computed == ep(rat(-1, 4), rat(1, 4), rat(1, 2)));
    CHECK(derived("v'2").residual < 1e-12);
    CHECK(same_point(derived("v'2").computed, HeisPoint::at(cplx(1.25, s7 / 4), s2), 1e-12));
    CHECK(same_point(derived("v'5").computed, HeisPoint::at(cplx(0.25, s7 / 4), s2 / (8 + 2 * s14)), 1e-12));
    CHECK_FALSE(derived("v5").stated);
    // v'2 lies on the vertical chain over q2
    CHECK(std::abs(V.at("v'2").z - V.at("q2").z) < 1e-12);
    CHECK_THROWS_AS(V.at("q9"), ComplexError);
    CHECK(V.name_of(HeisPoint::at(0.0, 0.0)) == std::optional<std::string>("p2"));
}

TEST_CASE("edge parametrizations") {
    for (auto& c : edge_checks()) {
        INFO(c.name << ": " << c.detail);
        CHECK(c.pass);
    }
    EdgeParam E = edge_param("[p2,q2]");
    CHECK(std::abs(std::sin(E.theta_start) + s14 / 8) < 1e-14);
    CHECK(same_point(E.point(1), complex().V.at("q2"), 1e-12));
    EdgeParam E1 = edge_param("[p2,p1]");
    CHECK(E1.point(0.3).t < 0);
    CHECK(E1.point(1).inf);
    // g1 translates p2 to q4
    EdgeParam T = edge_param("[p2,p1]", "g1");
    CHECK(same_point(T.point(0), HeisPoint::at(-1.0, -s7), 1e-12));
    CHECK(T.point(1).inf);
    CHECK_THROWS_AS(edge_param("[p1,q3]"), ComplexError);
    CHECK(std::abs(e2_height(E.theta_end)) < 1e-12);
}

TEST_CASE("faces and pairings") {
    const Complex& C = complex();
    CHECK(C.distinct_faces().size() == 7);
    CHECK(C.T[1].generalized);
    CHECK(C.tetra("T1").face_with("q2", "p1", "q1").name == "F(p1,q1,q2)");
    CHECK_THROWS_AS(C.tetra("T1").face_with("q3", "p1", "q1"), ComplexError);
    for (auto& p : C.pairings) CHECK(p.verified);

    const FaceDef& D = C.face("F(p1,p2,q2)");
    CHECK(D.subs[1].shared_id == C.face("F(p1,p2,q3)").subs[1].shared_id);
    // the cone from infinity over [p2,q2] lies above the edge
    HeisPoint b = D.subs[0].point(0.5, 1.0), a = D.subs[0].point(0.5, 0.5);
    CHECK(std::abs(a.z - b.z) < 1e-12);
    CHECK(a.t > b.t);
    HeisPoint tr = D.subs[0].point_trunc(0.5, 0.0, 4.0, 3.0);
    CHECK(std::abs(tr.t - b.t - 4.0) < 1e-12);
    auto S = face_sample(D, small());
    CHECK(S.size() == 2 * 24 * 24);
    // nested under doubling
    SampleConfig big = small();
    big.n_edge = big.n_fiber = 48;
    auto S2 = face_sample(D, big);
    CHECK(same_point(S[5 * 24 + 7].p, S2[10 * 48 + 14].p, 1e-15));
    CHECK_THROWS_AS(face_sample(D, SampleConfig{0, 4, 4.0, 3.0}), ComplexError);
    CHECK(face_self_overlap(C.face("F(p2,q1,q2)"), small(), 1e-9));
    CHECK(distance_to_face(D, HeisPoint::at(0.0, 5.0)) < 1e-12);
    // continuous distance never exceeds the nearest sample
    const FaceDef& F = C.face("F(p1,q1,q2)");
    HeisPoint off = HeisPoint::at(cplx(1.0, 1.0), 0.0);
    double dmin = 1e300;
    for (auto& q : face_sample(F, small()))
        if (!q.p.inf) dmin = std::min(dmin, heis_distance(off, q.p));
    double d = distance_to_face(F, off);
    CHECK(d > 1e-3);
    CHECK(d <= dmin + 1e-12);
}

TEST_CASE("side-pairing equivariance") {
    for (auto& r : side_pairing_equivariance(complex(), small(), 1e-9)) {
        INFO(r.pairing << " max " << r.max_distance);
        CHECK(r.pass);
        CHECK(r.samples > 0);
    }
}

TEST_CASE("edge links") {
    const Complex& C = complex();
    EdgeLink a = edge_link_winding(C, "[p2,p1]", standard_cycle("[p2,p1]"), 1e-9, 4);
    EdgeLink b = edge_link_winding(C, "[p2,q2]", standard_cycle("[p2,q2]"), 1e-9, 4);
    CHECK(a.winding == 1);
    CHECK(b.winding == 3);
    CHECK(a.residual < 1e-2);
    CHECK(b.residual < 1e-2);
    CHECK(a.steps.size() == 6);
    // stable under halving tol
    CHECK(edge_link_winding(C, "[p2,q2]", standard_cycle("[p2,q2]"), 5e-10, 4).winding == 3);
    // T1 and T2 share the disc over the negative imaginary axis along [p2,p1]
    CHECK(a.steps[1].degenerate);
    CHECK(a.steps[0].image[0] == "p1");

    LinkCycle open = standard_cycle("[p2,p1]");
    open.resize(2);
    CHECK_THROWS_AS(edge_link_winding(C, "[p2,p1]", open, 1e-9, 4), ComplexError);
    LinkCycle broken = standard_cycle("[p2,p1]");
    broken.pop_back();
    CHECK_THROWS_AS(edge_link_winding(C, "[p2,p1]", broken, 1e-9, 4), ComplexError);
    LinkCycle wrong = standard_cycle("[p2,q2]");
    wrong[2].second = "g1";
    CHECK_THROWS_AS(edge_link_winding(C, "[p2,q2]", wrong, 1e-9, 4), ComplexError);
    CHECK_THROWS_AS(standard_cycle("[q1,q2]"), ComplexError);
}

TEST_CASE("quotient combinatorics") {
    QuotientReport Q = quotient_combinatorics(complex());
    CHECK(Q.edge_classes == 2);
    CHECK(Q.face_classes == 4);
    CHECK(Q.vertex_classes == 1);
    CHECK(Q.euler == 0);
    CHECK(Q.pass());
}

TEST_CASE("height comparison") {
    HeightTable H = height_comparison(200);
    CHECK(H.pass(1e-9));
    CHECK(H.min_gap > 0);
    CHECK(std::abs(H.rows.front().t2) < 1e-12);
    CHECK(std::abs(H.rows.back().t2 - 5 * s7 / 8) < 1e-12);
    // the two heights agree at q2
    CHECK_FALSE(H.rows.front().gap);
    CHECK(std::abs(H.rows.front().t1) < 1e-9);
    CHECK_THROWS_AS(height_comparison(2), ComplexError);
    CHECK_THROWS_AS(face_height_at(1.0), ComplexError);
}

TEST_CASE("face intersections") {
    IntersectionReport I = check_face_intersections(complex(), small(), 1e-9);
    CHECK(I.pairs.size() == 21);
    for (auto& p : I.pairs) {
        INFO(p.a << " | " << p.b);
        CHECK(p.seam_coincidence < 1e-9);
        CHECK(p.crossings == 0);
        // band_needed is bisected, so compare with a margin
        if (p.pass)
            CHECK(p.band_needed <= p.band + 1e-3);
        else
            CHECK(p.band_needed >= p.band - 1e-3);
    }
    CHECK(I.dedicated.size() == 3);
    for (auto& d : I.dedicated) {
        INFO(d.name << " " << d.detail << " min " << d.min_distance);
        CHECK(d.pass);
    }
}
