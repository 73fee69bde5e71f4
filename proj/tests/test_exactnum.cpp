#include "doctest.h"

#include "crs/exactnum.hpp"
#include "property_suites.hpp"

using namespace crs;

namespace {
QuadNum w7() { return QuadNum(7, rat(1, 2), rat(1, 2)); }
}

TEST_CASE("rationals stay normalized") {
    BigRational a = rat(6, -4);
    CHECK(a.get_num() == -3);
    CHECK(a.get_den() == 2);
    BigRational b = a * rat(2, 3) + rat(1);
    CHECK(b == 0);
    CHECK(b.get_den() == 1);
    CHECK_THROWS_AS(rat(1, 0), ArithError);
}

TEST_CASE("quad arithmetic") {
    QuadNum w = w7();
    CHECK(w * w.conj() == QuadNum(7, 2));
    CHECK(quad_arith(w, w, QuadOp::conj) == QuadNum(7, rat(1, 2), rat(-1, 2)));
    CHECK(quad_arith(w, w, QuadOp::normsq) == QuadNum(7, 2));
    CHECK(w * QuadNum(7, 1) == w);
    QuadNum x(7, 1, 1);
    CHECK(x / x == QuadNum(7, 1));
    // omega7 satisfies w^2 - w + 2 = 0
    CHECK(w * w - w + QuadNum(7, 2) == QuadNum(7, 0));
}

TEST_CASE("quad errors") {
    CHECK_THROWS_AS(QuadNum(7, 1) / QuadNum(7, 0), ArithError);
    CHECK_THROWS_AS(QuadNum(7, 1) + QuadNum(3, 1), ArithError);
    CHECK_THROWS_AS(QuadNum(12, 1), ArithError);
    CHECK_THROWS_AS(QuadNum(0, 1), ArithError);
}

TEST_CASE("ring of integers") {
    CHECK(is_in_Od(w7()));
    CHECK(is_in_Od(QuadNum(7, rat(3, 2), rat(1, 2))));
    CHECK_FALSE(is_in_Od(QuadNum(7, rat(1, 2), 0)));
    CHECK(is_in_Od(QuadNum(7, rat(-3, 2), rat(-1, 2))));
    CHECK_FALSE(is_in_Od(QuadNum(7, rat(1, 3), 0)));
    CHECK(is_in_Od(QuadNum(3, rat(-1, 2), rat(-1, 2))));
    // d = 2 (mod 4) and 1 (mod 4): plain integer coordinates
    CHECK(is_in_Od(QuadNum(2, 3, -1)));
    CHECK_FALSE(is_in_Od(QuadNum(5, rat(1, 2), rat(1, 2))));
}

TEST_CASE("enclosures") {
    FloatApprox z = enclose(QuadNum(7, 0), 53);
    CHECK(z.exact());
    CHECK(z.value() == std::complex<double>(0, 0));

    // sqrt 7 to 40 digits, independent of MPFR's sqrt
    const double s7 = 2.6457513110645905905016157536392604257102;
    FloatApprox e = enclose(QuadNum(7, 1, 1), 53);
    CHECK(e.value().real() == 1.0);
    CHECK(std::abs(e.value().imag() - s7) <= 1e-15);
    CHECK(e.radius.to_double() <= std::ldexp(1.0, -52) * std::abs(e.value()));
    // the decimal oracle lies inside the enclosure
    FloatApprox oracle;
    oracle.re = Mpfr(200);
    oracle.im = Mpfr(200);
    mpfr_set_d(oracle.re.get(), 1.0, MPFR_RNDN);
    mpfr_set_str(oracle.im.get(), "2.6457513110645905905016157536392604257102591830824501803683344592", 10, MPFR_RNDN);
    CHECK(e.contains(oracle));

    FloatApprox g = enclose(QuadNum(7, rat(-1, 2), rat(-1, 2)), 53);
    CHECK(g.value().real() == -0.5);
    CHECK(std::abs(g.value().imag() + s7 / 2) <= 1e-15);

    CHECK_THROWS_AS(enclose(QuadNum(7, 1), 10), ArithError);
}

TEST_CASE("property: field axioms") { CHECK(props::field_axioms(1000).failures == 0); }
TEST_CASE("property: conj and normsq multiplicative") { CHECK(props::conj_norm(1000).failures == 0); }
TEST_CASE("property: O_d closed under add and mul") { CHECK(props::od_closure(1000).failures == 0); }
TEST_CASE("property: enclosure soundness") { CHECK(props::enclose_soundness(1000).failures == 0); }
