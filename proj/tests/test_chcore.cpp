#include "doctest.h"

#include <cmath>

#include "crs/chcore.hpp"
#include "crs/words.hpp"
#include "property_suites.hpp"

using namespace crs;

namespace {
const double s7 = std::sqrt(7.0);
QuadNum q7(long a, long b, long c, long e) { return QuadNum(7, rat(a, b), rat(c, e)); }
ExactElem G(const char* w) { return eval(rho2(), parse_knot_word(w)); }
void check_prop(const props::Result& r) {
    INFO(r.first_failure);
    CHECK(r.cases >= 1000);
    CHECK(r.failures == 0);
}
}  // namespace

TEST_CASE("hermitian form and lifts") {
    HermVector inf{1.0, 0.0, 0.0}, o{0.0, 0.0, 1.0};
    CHECK(std::abs(herm_form(inf, inf)) == 0.0);
    CHECK(herm_form(inf, o) == cplx(1.0));
    HeisPoint q1 = HeisPoint::at(1.0, s7);
    CHECK(std::abs(herm_form(lift(q1), lift(q1))) < 1e-14);

    HermVector L = lift(HeisPoint::at(0.0, 0.0));
    CHECK(L[0] == cplx(0.0));
    CHECK(L[2] == cplx(1.0));
    CHECK(lift(HeisPoint::infinity())[0] == cplx(1.0));
    HermVector Lq = lift(q1);
    CHECK(std::abs(Lq[0] - cplx(-0.5, s7 / 2)) < 1e-15);

    ExactVector E = lift(ExactPoint::at(QuadNum(7, 1), 1));
    CHECK(E[0] == q7(-1, 2, 1, 2));
    CHECK(E[1] == QuadNum(7, 1));
}

TEST_CASE("project") {
    CHECK(same_point(project(HermVector{0.0, 0.0, 1.0}), HeisPoint::at(0.0, 0.0), 1e-12));
    CHECK(project(HermVector{2.0, 0.0, 0.0}).inf);
    CHECK(same_point(project(HermVector{cplx(-0.5, s7 / 2), 1.0, 1.0}), HeisPoint::at(1.0, s7), 1e-12));
    CHECK_THROWS_AS(project(HermVector{1.0, 0.0, 1.0}), GeometryError);
}

TEST_CASE("action of rho2 generators") {
    ExactElem G1 = G("g1"), G3 = G("g3");
    ExactPoint p2 = ExactPoint::at(QuadNum(7, 0), 0);
    ExactPoint q2 = ExactPoint::at(q7(5, 4, 1, 4), 0);
    CHECK(act(G1, p2) == ExactPoint::at(QuadNum(7, -1), -1));
    CHECK(act(ExactElem::identity(QuadNum(7, 0)), q2) == q2);
    CHECK(act(G3, q2) == ExactPoint::at(q7(23, 32, 5, 32), rat(-1, 16)));
    CHECK(act(G1, ExactPoint::infinity(7)).inf);
}

TEST_CASE("classification") {
    ExactElem G1 = G("g1"), G2 = G("g2"), G3 = G("g3");
    CHECK(G2.trace() == QuadNum(7, 1));
    CHECK(trace_discriminant(QuadNum(7, 1)) == -16);
    CHECK(classify(G2) == IsomClass::RegularElliptic);
    CHECK(classify(G1) == IsomClass::PureParabolic);
    CHECK(classify(G3) == IsomClass::PureParabolic);
    CHECK(classify(G3 * G1.inv()) == IsomClass::Loxodromic);
    CHECK(classify(to_float(G3 * G1.inv())) == IsomClass::Loxodromic);
    CHECK(classify(to_float(G2)) == IsomClass::RegularElliptic);
}

TEST_CASE("projective equality") {
    ExactElem G1 = G("g1"), G2 = G("g2"), G3 = G("g3");
    ExactElem Id = ExactElem::identity(QuadNum(7, 0));
    CHECK(projective_eq(G1 * G3.inv() * G2 * G1.inv() * G3, Id));
    CHECK(projective_eq(G1, G1));
    CHECK_FALSE(projective_eq(G1, G3));
    CHECK(projective_eq(G2.pow(4), Id));
    for (int k = 1; k <= 3; ++k) CHECK_FALSE(projective_eq(G2.pow(k), Id));
    // minus the identity is not a cube root of unity
    CHECK_FALSE(projective_eq(-Id, Id));
    CHECK(projective_eq(to_float(G2.pow(4)), to_float(Id)));
}

TEST_CASE("unitarity is enforced") {
    Mat3<cplx> bad{{1, 1, 0, 0, 1, 0, 0, 0, 1}};
    CHECK_THROWS_AS(FloatElem{bad}, GeometryError);
    auto entries = std::array<std::pair<BigRational, BigRational>, 9>{};
    for (auto& e : entries) e = {0, 0};
    entries[0].first = 2;
    entries[4].first = 1;
    entries[8].first = 1;
    CHECK_THROWS_AS(exact_elem(7, entries), GeometryError);
}

TEST_CASE("chains through two points") {
    HeisPoint p2 = HeisPoint::at(0.0, 0.0), q2 = HeisPoint::at(cplx(1.25, s7 / 4), 0.0);
    CCircle V = ccircle_through(p2, HeisPoint::infinity());
    CHECK(V.vertical());
    CHECK(std::abs(V.z0) < 1e-15);

    CCircle C = ccircle_through(p2, q2);
    REQUIRE_FALSE(C.vertical());
    CHECK(std::abs(C.z0 - cplx(5.0 / 8, s7 / 8)) < 1e-12);
    CHECK(std::abs(C.t0) < 1e-12);
    CHECK(std::abs(C.R - std::sqrt(2.0) / 2) < 1e-12);
    CHECK(ccircle_contains(C, q2, 1e-9));
    CHECK_FALSE(ccircle_contains(C, HeisPoint::at(0.0, 1.0), 1e-9));

    CCircle U = ccircle_through(HeisPoint::at(1.0, 0.0), HeisPoint::at(-1.0, 0.0));
    CHECK(std::abs(U.z0) < 1e-12);
    CHECK(std::abs(U.t0) < 1e-12);
    CHECK(std::abs(U.R - 1.0) < 1e-12);
    CHECK(ccircle_contains(U, HeisPoint::at(1.0, 0.0), 1e-12));
    CHECK_THROWS_AS(ccircle_through(p2, p2), GeometryError);

    // same z, distinct t
    CHECK(ccircle_through(HeisPoint::at(1.0, 0.0), HeisPoint::at(1.0, 2.0)).vertical());
}

TEST_CASE("negative arcs") {
    HeisPoint p2 = HeisPoint::at(0.0, 0.0), q2 = HeisPoint::at(cplx(1.25, s7 / 4), 0.0);
    Arc down = make_arc(p2, HeisPoint::infinity());
    CHECK(down.point(0.5).t < 0.0);  // [p2,p1] is the t <= 0 half-line
    CHECK(down.point(1.0).inf);
    Arc up = make_arc(HeisPoint::infinity(), p2);
    CHECK(up.point(0.5).t > 0.0);
    Arc a = make_arc(p2, q2);
    CHECK(same_point(a.point(0.0), p2, 1e-12));
    CHECK(same_point(a.point(1.0), q2, 1e-12));
    CHECK(a.sweep < 0.0);  // clockwise
    for (double u : {0.1, 0.5, 0.9}) CHECK(ccircle_contains(a.chain, a.point(u), 1e-12));
}

TEST_CASE("standard position") {
    HeisPoint o = HeisPoint::at(0.0, 0.0), inf = HeisPoint::infinity();
    FloatElem M = standard_position(o, inf);
    CHECK(same_point(act(M, o), o, 1e-12));
    CHECK(act(M, inf).inf);
    FloatElem N = standard_position(inf, o);
    CHECK(act(N, o).inf);
    CHECK(same_point(act(N, inf), o, 1e-12));
    HeisPoint q2 = HeisPoint::at(cplx(1.25, s7 / 4), 0.0);
    FloatElem S = standard_position(o, q2);
    CHECK(same_point(act(S, o), o, 1e-12));
    CHECK(act(S, q2).inf);
    CHECK_THROWS_AS(standard_position(q2, q2), GeometryError);
}

TEST_CASE("property: form invariance") { check_prop(props::form_invariance(1000)); }
TEST_CASE("property: lift/project roundtrip") { check_prop(props::lift_roundtrip(1000)); }
TEST_CASE("property: chain equivariance") { check_prop(props::chain_equivariance(1000)); }
TEST_CASE("property: classification under conjugation") { check_prop(props::classify_conjugation(1000)); }
TEST_CASE("property: projective equality is an equivalence") { check_prop(props::projective_equivalence(1000)); }
