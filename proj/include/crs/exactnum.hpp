#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <gmpxx.h>
#include <mpfr.h>

namespace crs {

using BigInt = mpz_class;
// mpq_class keeps num/den reduced with den > 0 after every arithmetic op.
using BigRational = mpq_class;

BigRational rat(long num, long den = 1);
BigRational rat(const std::string& s);

struct ArithError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bool is_square_free(long d);

// re + im*i*sqrt(d), d square-free.
class QuadNum {
public:
    QuadNum() : d_(1) {}
    QuadNum(long d, BigRational re, BigRational im = 0);

    static QuadNum from_int(long d, long v) { return QuadNum(d, v, 0); }

    long d() const { return d_; }
    const BigRational& re() const { return re_; }
    const BigRational& im() const { return im_; }

    bool is_zero() const { return re_ == 0 && im_ == 0; }
    bool is_real() const { return im_ == 0; }

    QuadNum conj() const { return QuadNum(d_, re_, -im_); }
    BigRational normsq() const { return re_ * re_ + d_ * im_ * im_; }

    QuadNum operator-() const { return QuadNum(d_, -re_, -im_); }
    QuadNum& operator+=(const QuadNum& b);
    QuadNum& operator-=(const QuadNum& b);
    QuadNum& operator*=(const QuadNum& b);
    QuadNum& operator/=(const QuadNum& b);

    friend QuadNum operator+(QuadNum a, const QuadNum& b) { return a += b; }
    friend QuadNum operator-(QuadNum a, const QuadNum& b) { return a -= b; }
    friend QuadNum operator*(QuadNum a, const QuadNum& b) { return a *= b; }
    friend QuadNum operator/(QuadNum a, const QuadNum& b) { return a /= b; }
    friend bool operator==(const QuadNum& a, const QuadNum& b);
    friend bool operator!=(const QuadNum& a, const QuadNum& b) { return !(a == b); }

    std::complex<double> to_complex() const;
    std::string str() const;

private:
    void check_same(const QuadNum& b) const;
    long d_;
    BigRational re_, im_;
};

QuadNum conj(const QuadNum& a);

enum class QuadOp { add, sub, mul, div, conj, normsq };
QuadNum quad_arith(const QuadNum& a, const QuadNum& b, QuadOp op);

bool is_in_Od(const QuadNum& x);

// Owning MPFR value with a fixed precision.
class Mpfr {
public:
    explicit Mpfr(unsigned bits = 53) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }
    Mpfr(const Mpfr& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Mpfr& operator=(const Mpfr& o) {
        if (this != &o) { mpfr_set_prec(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
        return *this;
    }
    ~Mpfr() { mpfr_clear(v_); }
    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    std::string str(int digits = 20) const;

private:
    mpfr_t v_;
};

// value +- radius, radius bounding the complex modulus of the error.
struct FloatApprox {
    unsigned precision_bits = 53;
    Mpfr re, im, radius;

    std::complex<double> value() const { return {re.to_double(), im.to_double()}; }
    bool contains(const FloatApprox& other) const;  // other's value lies inside
    bool exact() const { return mpfr_zero_p(radius.get()) != 0; }
};

FloatApprox enclose(const QuadNum& x, unsigned precision_bits);

}  // namespace crs
