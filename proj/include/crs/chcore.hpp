#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <type_traits>

#include "crs/exactnum.hpp"

namespace crs {

using cplx = std::complex<double>;

inline constexpr double kDefaultTol = 1e-9;

struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Scalar helpers so the matrix code below works for both kinds.
inline QuadNum zero_like(const QuadNum& x) { return QuadNum(x.d(), 0); }
inline QuadNum one_like(const QuadNum& x) { return QuadNum(x.d(), 1); }
inline cplx zero_like(const cplx&) { return 0.0; }
inline cplx one_like(const cplx&) { return 1.0; }
inline cplx conj(const cplx& x) { return std::conj(x); }

template <class S>
using Vec3 = std::array<S, 3>;

template <class S>
struct Mat3 {
    std::array<S, 9> a;
    S& operator()(int i, int j) { return a[3 * i + j]; }
    const S& operator()(int i, int j) const { return a[3 * i + j]; }
};

using HermVector = Vec3<cplx>;
using ExactVector = Vec3<QuadNum>;

// <Z,W> = Z1 conj(W3) + Z2 conj(W2) + Z3 conj(W1)
template <class S>
S herm_form(const Vec3<S>& Z, const Vec3<S>& W) {
    return Z[0] * conj(W[2]) + Z[1] * conj(W[1]) + Z[2] * conj(W[0]);
}

template <class S>
Mat3<S> mat_identity(const S& like) {
    S z = zero_like(like), o = one_like(like);
    return Mat3<S>{{o, z, z, z, o, z, z, z, o}};
}

template <class S>
Mat3<S> mat_mul(const Mat3<S>& A, const Mat3<S>& B) {
    Mat3<S> C = A;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            S s = A(i, 0) * B(0, j);
            s += A(i, 1) * B(1, j);
            s += A(i, 2) * B(2, j);
            C(i, j) = s;
        }
    return C;
}

template <class S>
Vec3<S> mat_apply(const Mat3<S>& A, const Vec3<S>& v) {
    Vec3<S> r = v;
    for (int i = 0; i < 3; ++i) {
        S s = A(i, 0) * v[0];
        s += A(i, 1) * v[1];
        s += A(i, 2) * v[2];
        r[i] = s;
    }
    return r;
}

template <class S>
Mat3<S> mat_scale(const Mat3<S>& A, const S& c) {
    Mat3<S> B = A;
    for (auto& x : B.a) x = x * c;
    return B;
}

// J M* J: the inverse of a form-preserving matrix.
template <class S>
Mat3<S> form_adjoint(const Mat3<S>& M) {
    Mat3<S> R = M;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) R(i, j) = conj(M(2 - j, 2 - i));
    return R;
}

template <class S>
S mat_det(const Mat3<S>& M) {
    return M(0, 0) * (M(1, 1) * M(2, 2) - M(1, 2) * M(2, 1)) - M(0, 1) * (M(1, 0) * M(2, 2) - M(1, 2) * M(2, 0)) +
           M(0, 2) * (M(1, 0) * M(2, 1) - M(1, 1) * M(2, 0));
}

template <class S>
S mat_trace(const Mat3<S>& M) {
    S t = M(0, 0);
    t += M(1, 1);
    t += M(2, 2);
    return t;
}

// M* J M - J, entrywise.
template <class S>
Mat3<S> unitarity_defect(const Mat3<S>& M) {
    Mat3<S> D = M;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Vec3<S> ci{M(0, i), M(1, i), M(2, i)}, cj{M(0, j), M(1, j), M(2, j)};
            // (M* J M)_{ji} = <col_i, col_j>
            S v = herm_form(ci, cj);
            if (i + j == 2) v -= one_like(v);
            D(j, i) = v;
        }
    return D;
}

template <class S>
class GroupElem {
public:
    GroupElem() = default;
    // Throws GeometryError unless M preserves the form (exactly, or within tol).
    explicit GroupElem(const Mat3<S>& M, double tol = kDefaultTol);
    static GroupElem unchecked(const Mat3<S>& M) {
        GroupElem g;
        g.m_ = M;
        return g;
    }
    static GroupElem identity(const S& like) { return unchecked(mat_identity(like)); }

    const Mat3<S>& m() const { return m_; }
    const S& operator()(int i, int j) const { return m_(i, j); }

    GroupElem inv() const { return unchecked(form_adjoint(m_)); }
    GroupElem operator*(const GroupElem& o) const { return unchecked(mat_mul(m_, o.m_)); }
    GroupElem operator-() const { return unchecked(mat_scale(m_, -one_like(m_(0, 0)))); }
    GroupElem pow(int k) const;
    S det() const { return mat_det(m_); }
    S trace() const { return mat_trace(m_); }

private:
    Mat3<S> m_;
};

using ExactElem = GroupElem<QuadNum>;
using FloatElem = GroupElem<cplx>;

bool is_unitary(const Mat3<QuadNum>& M);
bool is_unitary(const Mat3<cplx>& M, double tol);

template <class S>
GroupElem<S>::GroupElem(const Mat3<S>& M, double tol) : m_(M) {
    bool ok = false;
    if constexpr (std::is_same_v<S, QuadNum>) {
        (void)tol;
        ok = is_unitary(M);
    } else {
        ok = is_unitary(M, tol);
    }
    if (!ok) throw GeometryError("matrix does not preserve the Hermitian form");
}

template <class S>
GroupElem<S> GroupElem<S>::pow(int k) const {
    GroupElem base = k < 0 ? inv() : *this;
    GroupElem r = identity(m_(0, 0));
    for (int i = 0; i < (k < 0 ? -k : k); ++i) r = r * base;
    return r;
}

ExactElem exact_elem(long d, const std::array<std::pair<BigRational, BigRational>, 9>& entries);
FloatElem to_float(const ExactElem& g);

// Boundary points of complex hyperbolic space in Heisenberg coordinates.
struct HeisPoint {
    bool inf = false;
    cplx z{0.0, 0.0};
    double t = 0.0;

    static HeisPoint infinity() { return HeisPoint{true, {}, 0.0}; }
    static HeisPoint at(cplx z, double t) { return HeisPoint{false, z, t}; }
};

// Exact point: z in Q(i sqrt d), t = tc * sqrt(d).
struct ExactPoint {
    bool inf = false;
    QuadNum z;
    BigRational tc;

    static ExactPoint infinity(long d) { return ExactPoint{true, QuadNum(d, 0), 0}; }
    static ExactPoint at(QuadNum z, BigRational tc) { return ExactPoint{false, std::move(z), std::move(tc)}; }
    long d() const { return z.d(); }
    HeisPoint to_float() const;
    bool operator==(const ExactPoint& o) const;
};

double heis_distance(const HeisPoint& p, const HeisPoint& q);  // Euclidean in (x,y,t); inf-aware
bool same_point(const HeisPoint& p, const HeisPoint& q, double tol);
std::string point_str(const HeisPoint& p);

HermVector lift(const HeisPoint& p);
ExactVector lift(const ExactPoint& p);
HeisPoint project(const HermVector& V, double tol = kDefaultTol);
ExactPoint project(const ExactVector& V);
HeisPoint act(const FloatElem& M, const HeisPoint& p);
HeisPoint act(const ExactElem& M, const HeisPoint& p);
ExactPoint act(const ExactElem& M, const ExactPoint& p);

enum class IsomClass { RegularElliptic, Loxodromic, PureParabolic, Boundary };
std::string to_string(IsomClass c);

// Trace discriminant |tau|^4 - 8 Re(tau^3) + 18 |tau|^2 - 27.
BigRational trace_discriminant(const QuadNum& tau);
double trace_discriminant(cplx tau);

IsomClass classify(const ExactElem& M);
IsomClass classify(const FloatElem& M, double tol = kDefaultTol);

bool projective_eq(const ExactElem& M, const ExactElem& N);
bool projective_eq(const FloatElem& M, const FloatElem& N, double tol = kDefaultTol);

struct CCircle {
    enum class Kind { Vertical, Finite };
    Kind kind = Kind::Vertical;
    cplx z0{0.0, 0.0};  // axis for Vertical, centre for Finite
    double t0 = 0.0;
    double R = 0.0;
    HermVector polar{};

    bool vertical() const { return kind == Kind::Vertical; }
    // point of a Finite chain at angle theta about its centre
    HeisPoint at_angle(double theta) const;
};

CCircle ccircle_through(const HeisPoint& p, const HeisPoint& q, double tol = kDefaultTol);
bool ccircle_contains(const CCircle& C, const HeisPoint& p, double tol = kDefaultTol);

// Negative: t decreasing on vertical chains, clockwise in the z-projection on
// finite ones. Every named segment of the complex uses Negative.
enum class Orientation { Negative, Positive };

struct Arc {
    CCircle chain;
    HeisPoint start, end;
    Orientation orientation = Orientation::Negative;
    double theta_start = 0.0, sweep = 0.0;  // Finite chains: theta(u) = theta_start + u*sweep

    // u in [0,1]. Rays through infinity are reached through tan(); u = 1 or 0
    // at an infinite endpoint returns the point at infinity.
    HeisPoint point(double u) const;
    // As point(), but a ray to or from infinity is cut to length depth and
    // parametrized linearly in t.
    HeisPoint point_trunc(double u, double depth) const;
    bool through_infinity() const { return start.inf || end.inf; }
};

Arc make_arc(const HeisPoint& a, const HeisPoint& b, Orientation o = Orientation::Negative, double tol = kDefaultTol);

FloatElem heisenberg_translation(cplx w, double s);
// Unitary M with act(M,p) = (0,0) and act(M,q) = infinity.
FloatElem standard_position(const HeisPoint& p, const HeisPoint& q, double tol = kDefaultTol);

}  // namespace crs
