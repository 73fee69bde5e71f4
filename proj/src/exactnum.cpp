#include "crs/exactnum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace crs {

BigRational rat(long num, long den) {
    if (den == 0) throw ArithError("zero denominator");
    BigRational q(num, den);
    q.canonicalize();
    return q;
}

BigRational rat(const std::string& s) {
    BigRational q(s);
    if (q.get_den() == 0) throw ArithError("zero denominator");
    q.canonicalize();
    return q;
}

bool is_square_free(long d) {
    if (d <= 0) return false;
    for (long p = 2; p * p <= d; ++p)
        if (d % (p * p) == 0) return false;
    return true;
}

QuadNum::QuadNum(long d, BigRational re, BigRational im) : d_(d), re_(std::move(re)), im_(std::move(im)) {
    if (!is_square_free(d)) throw ArithError("d must be a positive square-free integer, got " + std::to_string(d));
    re_.canonicalize();
    im_.canonicalize();
}

void QuadNum::check_same(const QuadNum& b) const {
    if (d_ != b.d_)
        throw ArithError("mixed fields: d=" + std::to_string(d_) + " and d=" + std::to_string(b.d_));
}

QuadNum& QuadNum::operator+=(const QuadNum& b) {
    check_same(b);
    re_ += b.re_;
    im_ += b.im_;
    return *this;
}

QuadNum& QuadNum::operator-=(const QuadNum& b) {
    check_same(b);
    re_ -= b.re_;
    im_ -= b.im_;
    return *this;
}

QuadNum& QuadNum::operator*=(const QuadNum& b) {
    check_same(b);
    BigRational r = re_ * b.re_ - d_ * im_ * b.im_;
    BigRational i = re_ * b.im_ + im_ * b.re_;
    re_ = r;
    im_ = i;
    return *this;
}

QuadNum& QuadNum::operator/=(const QuadNum& b) {
    check_same(b);
    if (b.is_zero()) throw ArithError("division by zero");
    BigRational n = b.normsq();
    *this *= b.conj();
    re_ /= n;
    im_ /= n;
    return *this;
}

bool operator==(const QuadNum& a, const QuadNum& b) {
    a.check_same(b);
    return a.re_ == b.re_ && a.im_ == b.im_;
}

std::complex<double> QuadNum::to_complex() const {
    return {re_.get_d(), im_.get_d() * std::sqrt(static_cast<double>(d_))};
}

std::string QuadNum::str() const {
    std::ostringstream os;
    os << re_.get_str();
    if (im_ != 0) {
        BigRational a = abs(im_);
        os << (im_ < 0 ? " - " : " + ");
        if (a != 1) os << a.get_str() << "*";
        os << "i*sqrt(" << d_ << ")";
    }
    return os.str();
}

QuadNum conj(const QuadNum& a) { return a.conj(); }

QuadNum quad_arith(const QuadNum& a, const QuadNum& b, QuadOp op) {
    switch (op) {
        case QuadOp::add: return a + b;
        case QuadOp::sub: return a - b;
        case QuadOp::mul: return a * b;
        case QuadOp::div: return a / b;
        case QuadOp::conj: return a.conj();
        case QuadOp::normsq: return QuadNum(a.d(), a.normsq());
    }
    throw ArithError("unknown op");
}

bool is_in_Od(const QuadNum& x) {
    const long d = x.d();
    if (d % 4 == 3) {
        BigRational r2 = 2 * x.re(), i2 = 2 * x.im();
        if (r2.get_den() != 1 || i2.get_den() != 1) return false;
        BigInt a = r2.get_num(), b = i2.get_num();
        return mpz_even_p(a.get_mpz_t()) == mpz_even_p(b.get_mpz_t());
    }
    return x.re().get_den() == 1 && x.im().get_den() == 1;
}

std::string Mpfr::str(int digits) const {
    std::vector<char> buf(digits + 32);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
    return buf.data();
}

FloatApprox enclose(const QuadNum& x, unsigned p) {
    if (p < 24) throw ArithError("precision_bits must be >= 24");
    const unsigned w = p + 32;
    FloatApprox out;
    out.precision_bits = p;
    out.re = Mpfr(p);
    out.im = Mpfr(p);
    out.radius = Mpfr(64);

    int tr = mpfr_set_q(out.re.get(), x.re().get_mpq_t(), MPFR_RNDN);

    // im*sqrt(d) = sign(im) * sqrt(im^2 d); the radicand is exact.
    BigRational s = x.im() * x.im() * x.d();
    Mpfr t(w);
    int t1 = mpfr_set_q(t.get(), s.get_mpq_t(), MPFR_RNDN);
    int t2 = mpfr_sqrt(t.get(), t.get(), MPFR_RNDN);
    if (x.im() < 0) mpfr_neg(t.get(), t.get(), MPFR_RNDN);
    int t3 = mpfr_set(out.im.get(), t.get(), MPFR_RNDN);
    bool im_inexact = t1 || t2 || t3;

    // Each inexact component is off by at most u*|component|*(1-u)^-1 plus
    // guard-precision slack; 2^-16 covers both for p >= 24.
    Mpfr acc(64), tmp(64);
    if (tr) mpfr_abs(acc.get(), out.re.get(), MPFR_RNDU);
    if (im_inexact) {
        mpfr_abs(tmp.get(), out.im.get(), MPFR_RNDU);
        mpfr_add(acc.get(), acc.get(), tmp.get(), MPFR_RNDU);
    }
    mpfr_mul_2si(acc.get(), acc.get(), -static_cast<long>(p), MPFR_RNDU);
    mpfr_set_d(tmp.get(), 1.0 + std::ldexp(1.0, -16), MPFR_RNDU);
    mpfr_mul(out.radius.get(), acc.get(), tmp.get(), MPFR_RNDU);
    return out;
}

bool FloatApprox::contains(const FloatApprox& o) const {
    const unsigned q = 4 * std::max(precision_bits, o.precision_bits) + 64;
    Mpfr dr(q), di(q), m(q);
    mpfr_sub(dr.get(), o.re.get(), re.get(), MPFR_RNDN);
    mpfr_sub(di.get(), o.im.get(), im.get(), MPFR_RNDN);
    mpfr_hypot(m.get(), dr.get(), di.get(), MPFR_RNDD);
    return mpfr_lessequal_p(m.get(), radius.get()) != 0;
}

}  // namespace crs
