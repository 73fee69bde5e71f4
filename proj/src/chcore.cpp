#include "crs/chcore.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace crs {

namespace {

const double kPi = std::numbers::pi;

double mat_norm(const Mat3<cplx>& M) {
    double s = 0;
    for (auto& x : M.a) s += std::norm(x);
    return std::sqrt(s);
}

double wrap_2pi(double x) {
    x = std::fmod(x, 2 * kPi);
    if (x < 0) x += 2 * kPi;
    return x;
}

HermVector cross_polar(const HermVector& u, const HermVector& v) {
    HermVector w{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
    return {std::conj(w[2]), std::conj(w[1]), std::conj(w[0])};
}

}  // namespace

bool is_unitary(const Mat3<QuadNum>& M) {
    for (auto& x : unitarity_defect(M).a)
        if (!x.is_zero()) return false;
    return true;
}

bool is_unitary(const Mat3<cplx>& M, double tol) {
    double n = mat_norm(M);
    return mat_norm(unitarity_defect(M)) <= tol * std::max(1.0, n * n);
}

ExactElem exact_elem(long d, const std::array<std::pair<BigRational, BigRational>, 9>& e) {
    Mat3<QuadNum> M;
    for (int k = 0; k < 9; ++k) M.a[k] = QuadNum(d, e[k].first, e[k].second);
    return ExactElem(M);
}

FloatElem to_float(const ExactElem& g) {
    Mat3<cplx> M;
    for (int k = 0; k < 9; ++k) M.a[k] = g.m().a[k].to_complex();
    return FloatElem::unchecked(M);
}

HeisPoint ExactPoint::to_float() const {
    if (inf) return HeisPoint::infinity();
    return HeisPoint::at(z.to_complex(), tc.get_d() * std::sqrt(static_cast<double>(d())));
}

bool ExactPoint::operator==(const ExactPoint& o) const {
    if (inf || o.inf) return inf == o.inf;
    return z == o.z && tc == o.tc;
}

double heis_distance(const HeisPoint& p, const HeisPoint& q) {
    if (p.inf || q.inf) return (p.inf && q.inf) ? 0.0 : HUGE_VAL;
    return std::sqrt(std::norm(p.z - q.z) + (p.t - q.t) * (p.t - q.t));
}

bool same_point(const HeisPoint& p, const HeisPoint& q, double tol) {
    if (p.inf || q.inf) return p.inf == q.inf;
    double scale = std::max({1.0, std::abs(p.z), std::abs(p.t)});
    return heis_distance(p, q) <= tol * scale;
}

std::string point_str(const HeisPoint& p) {
    if (p.inf) return "inf";
    std::ostringstream os;
    os.precision(12);
    os << "(" << p.z.real() << (p.z.imag() < 0 ? "-" : "+") << std::abs(p.z.imag()) << "i, " << p.t << ")";
    return os.str();
}

HermVector lift(const HeisPoint& p) {
    if (p.inf) return {1.0, 0.0, 0.0};
    return {cplx(-std::norm(p.z), p.t) / 2.0, p.z, 1.0};
}

ExactVector lift(const ExactPoint& p) {
    const long d = p.d();
    if (p.inf) return {QuadNum(d, 1), QuadNum(d, 0), QuadNum(d, 0)};
    return {QuadNum(d, -p.z.normsq() / 2, p.tc / 2), p.z, QuadNum(d, 1)};
}

HeisPoint project(const HermVector& V, double tol) {
    double n2 = std::norm(V[0]) + std::norm(V[1]) + std::norm(V[2]);
    if (n2 == 0) throw GeometryError("project: zero vector");
    if (std::abs(herm_form(V, V)) > tol * n2) throw GeometryError("project: vector is not null");
    if (std::abs(V[2]) <= 1e-14 * std::sqrt(n2)) return HeisPoint::infinity();
    cplx z = V[1] / V[2], w = V[0] / V[2];
    return HeisPoint::at(z, 2 * w.imag());
}

ExactPoint project(const ExactVector& V) {
    if (V[0].is_zero() && V[1].is_zero() && V[2].is_zero()) throw GeometryError("project: zero vector");
    if (!herm_form(V, V).is_zero()) throw GeometryError("project: vector is not null");
    if (V[2].is_zero()) return ExactPoint::infinity(V[0].d());
    QuadNum z = V[1] / V[2], w = V[0] / V[2];
    return ExactPoint::at(z, 2 * w.im());
}

HeisPoint act(const FloatElem& M, const HeisPoint& p) { return project(mat_apply(M.m(), lift(p))); }
HeisPoint act(const ExactElem& M, const HeisPoint& p) { return act(to_float(M), p); }
ExactPoint act(const ExactElem& M, const ExactPoint& p) { return project(mat_apply(M.m(), lift(p))); }

std::string to_string(IsomClass c) {
    switch (c) {
        case IsomClass::RegularElliptic: return "RegularElliptic";
        case IsomClass::Loxodromic: return "Loxodromic";
        case IsomClass::PureParabolic: return "PureParabolic";
        case IsomClass::Boundary: return "Boundary";
    }
    return "?";
}

BigRational trace_discriminant(const QuadNum& tau) {
    BigRational n = tau.normsq();
    QuadNum cube = tau * tau * tau;
    return n * n - 8 * cube.re() + 18 * n - 27;
}

double trace_discriminant(cplx tau) {
    double n = std::norm(tau);
    return n * n - 8 * std::pow(tau, 3).real() + 18 * n - 27;
}

IsomClass classify(const ExactElem& M) {
    QuadNum det = M.det();
    QuadNum one = one_like(det);
    Mat3<QuadNum> A = M.m();
    if (det == -one)
        A = mat_scale(A, -one);
    else if (det != one)
        return classify(to_float(M));
    QuadNum tau = mat_trace(A);
    BigRational f = trace_discriminant(tau);
    if (f < 0) return IsomClass::RegularElliptic;
    if (f > 0) return IsomClass::Loxodromic;
    QuadNum lambda = tau / QuadNum(tau.d(), 3);
    Mat3<QuadNum> N = A;
    for (int i = 0; i < 3; ++i) N(i, i) -= lambda;
    Mat3<QuadNum> N3 = mat_mul(mat_mul(N, N), N);
    for (auto& x : N3.a)
        if (!x.is_zero()) return IsomClass::Boundary;
    return IsomClass::PureParabolic;
}

IsomClass classify(const FloatElem& M, double tol) {
    cplx det = M.det();
    cplx c = std::pow(det, 1.0 / 3.0);
    Mat3<cplx> A = mat_scale(M.m(), 1.0 / c);
    cplx tau = mat_trace(A);
    double f = trace_discriminant(tau);
    double scale = std::max(1.0, std::pow(std::abs(tau), 4));
    if (f < -tol * scale) return IsomClass::RegularElliptic;
    if (f > tol * scale) return IsomClass::Loxodromic;
    cplx lambda = tau / 3.0;
    Mat3<cplx> N = A;
    for (int i = 0; i < 3; ++i) N(i, i) -= lambda;
    Mat3<cplx> N3 = mat_mul(mat_mul(N, N), N);
    double n = mat_norm(A);
    return mat_norm(N3) <= tol * std::max(1.0, n * n * n) ? IsomClass::PureParabolic : IsomClass::Boundary;
}

bool projective_eq(const ExactElem& M, const ExactElem& N) {
    int k = 0;
    while (k < 9 && N.m().a[k].is_zero()) ++k;
    if (k == 9) return false;
    if (M.m().a[k].is_zero()) return false;
    QuadNum lambda = M.m().a[k] / N.m().a[k];
    for (int i = 0; i < 9; ++i)
        if (M.m().a[i] != lambda * N.m().a[i]) return false;
    return lambda * lambda * lambda == one_like(lambda);
}

bool projective_eq(const FloatElem& M, const FloatElem& N, double tol) {
    int k = 0;
    for (int i = 1; i < 9; ++i)
        if (std::abs(N.m().a[i]) > std::abs(N.m().a[k])) k = i;
    if (std::abs(N.m().a[k]) == 0) return false;
    cplx lambda = M.m().a[k] / N.m().a[k];
    double nn = mat_norm(N.m());
    for (int i = 0; i < 9; ++i)
        if (std::abs(M.m().a[i] - lambda * N.m().a[i]) > tol * std::max(1.0, nn)) return false;
    double best = HUGE_VAL;
    for (int j = 0; j < 3; ++j) best = std::min(best, std::abs(lambda - std::polar(1.0, 2 * kPi * j / 3)));
    return best <= tol * 10;
}

HeisPoint CCircle::at_angle(double th) const {
    cplx z = z0 + std::polar(R, th);
    return HeisPoint::at(z, t0 + 2 * (std::conj(z) * z0).imag());
}

CCircle ccircle_through(const HeisPoint& p, const HeisPoint& q, double tol) {
    if (same_point(p, q, tol)) throw GeometryError("ccircle_through: points coincide");
    CCircle C;
    C.polar = cross_polar(lift(p), lift(q));
    if (p.inf || q.inf) {
        C.kind = CCircle::Kind::Vertical;
        C.z0 = p.inf ? q.z : p.z;
        return C;
    }
    if (std::abs(p.z - q.z) <= tol * std::max(1.0, std::abs(p.z))) {
        C.kind = CCircle::Kind::Vertical;
        C.z0 = p.z;
        return C;
    }
    HermVector n = C.polar;
    if (std::abs(n[2]) <= 1e-14 * std::sqrt(std::norm(n[0]) + std::norm(n[1]))) {
        C.kind = CCircle::Kind::Vertical;
        C.z0 = -std::conj(n[0]) / std::conj(n[1]);
        return C;
    }
    n = {n[0] / n[2], n[1] / n[2], 1.0};
    C.kind = CCircle::Kind::Finite;
    C.z0 = n[1];
    C.t0 = 2 * n[0].imag();
    double R2 = 2 * n[0].real() + std::norm(n[1]);
    if (!(R2 > 0)) throw GeometryError("ccircle_through: degenerate radius");
    C.R = std::sqrt(R2);
    return C;
}

bool ccircle_contains(const CCircle& C, const HeisPoint& p, double tol) {
    if (C.vertical()) return p.inf || std::abs(p.z - C.z0) <= tol;
    if (p.inf) return false;
    double e1 = std::abs(std::abs(p.z - C.z0) - C.R);
    double e2 = std::abs(p.t - C.t0 - 2 * (std::conj(p.z) * C.z0).imag());
    return e1 <= tol && e2 <= tol;
}

Arc make_arc(const HeisPoint& a, const HeisPoint& b, Orientation o, double tol) {
    Arc A;
    A.chain = ccircle_through(a, b, tol);
    A.start = a;
    A.end = b;
    A.orientation = o;
    if (!A.chain.vertical()) {
        double ta = std::arg(a.z - A.chain.z0), tb = std::arg(b.z - A.chain.z0);
        A.theta_start = ta;
        A.sweep = (o == Orientation::Negative) ? -wrap_2pi(ta - tb) : wrap_2pi(tb - ta);
    }
    return A;
}

HeisPoint Arc::point(double u) const {
    if (u <= 0) return start;
    if (u >= 1) return end;
    if (!chain.vertical()) return chain.at_angle(theta_start + u * sweep);
    const double sg = orientation == Orientation::Negative ? -1.0 : 1.0;  // direction of travel in t
    const cplx z = chain.z0;
    if (!start.inf && !end.inf) {
        double ta = start.t, tb = end.t;
        if (sg * (tb - ta) > 0) return HeisPoint::at(z, ta + u * (tb - ta));
        if (u == 0.5) return HeisPoint::infinity();
        if (u < 0.5) return HeisPoint::at(z, ta + sg * std::tan(kPi * u));
        return HeisPoint::at(z, tb - sg * std::tan(kPi * (1 - u)));
    }
    if (end.inf) return HeisPoint::at(z, start.t + sg * std::tan(kPi * u / 2));
    return HeisPoint::at(z, end.t - sg * std::tan(kPi * (1 - u) / 2));
}

HeisPoint Arc::point_trunc(double u, double depth) const {
    if (!chain.vertical() || (!start.inf && !end.inf)) return point(u);
    const double sg = orientation == Orientation::Negative ? -1.0 : 1.0;
    if (end.inf) return HeisPoint::at(chain.z0, start.t + sg * depth * u);
    return HeisPoint::at(chain.z0, end.t - sg * depth * (1 - u));
}

FloatElem heisenberg_translation(cplx w, double s) {
    Mat3<cplx> M{{1.0, -std::conj(w), -cplx(std::norm(w), -s) / 2.0, 0.0, 1.0, w, 0.0, 0.0, 1.0}};
    return FloatElem(M);
}

FloatElem standard_position(const HeisPoint& p, const HeisPoint& q, double tol) {
    if (same_point(p, q, tol)) throw GeometryError("standard_position: points coincide");
    HermVector Lp = lift(p), Lq = lift(q);
    cplx pair = herm_form(Lq, Lp);
    HermVector n = cross_polar(Lp, Lq);
    double nn = herm_form(n, n).real();
    if (!(nn > 0)) throw GeometryError("standard_position: polar vector is not positive");
    Mat3<cplx> A;
    for (int i = 0; i < 3; ++i) {
        A(i, 0) = Lq[i];
        A(i, 1) = n[i] / std::sqrt(nn);
        A(i, 2) = Lp[i] / std::conj(pair);
    }
    return FloatElem(form_adjoint(A), tol);
}

}  // namespace crs
