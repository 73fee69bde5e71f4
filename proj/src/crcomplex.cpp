#include "crs/crcomplex.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>
#include <sstream>

#include "crcomplex_internal.hpp"

namespace crs {

namespace detail {

const double kPi = 3.14159265358979323846;
const double S2 = std::sqrt(2.0), S7 = std::sqrt(7.0), S14 = std::sqrt(14.0);

ExactElem rho2_elem(const std::string& word) {
    static const Representation R = rho2();
    return eval(R, parse_knot_word(word));
}

double golden_min(const std::function<double(double)>& f, double lo, double hi, int iters) {
    const double g = (std::sqrt(5.0) - 1) / 2;
    double a = lo, b = hi;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int k = 0; k < iters && b - a > 1e-16; ++k) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    double x = (a + b) / 2;
    return x;
}

// Global minimum of f on [0,1] from a grid scan and refinement of the best local minima.
MinResult min_1d(const std::function<double(double)>& f, int n) {
    std::vector<double> v(n + 1);
    for (int i = 0; i <= n; ++i) v[i] = f(double(i) / n);
    std::vector<int> cand;
    for (int i = 0; i <= n; ++i) {
        bool left = i == 0 || v[i] <= v[i - 1];
        bool right = i == n || v[i] <= v[i + 1];
        if (left && right) cand.push_back(i);
    }
    std::sort(cand.begin(), cand.end(), [&](int a, int b) { return v[a] < v[b]; });
    if (cand.size() > 4) cand.resize(4);
    MinResult best{0.0, HUGE_VAL};
    for (int i : cand) {
        double lo = std::max(0.0, double(i - 1) / n), hi = std::min(1.0, double(i + 1) / n);
        double x = golden_min(f, lo, hi, 90);
        double fx = f(x);
        if (v[i] < fx) {
            x = double(i) / n;
            fx = v[i];
        }
        if (fx < best.f) best = {x, fx};
    }
    return best;
}

std::array<double, 3> xyz(const HeisPoint& p) { return {p.z.real(), p.z.imag(), p.t}; }

double dist_to_arc(const Arc& a, const HeisPoint& p) {
    if (p.inf) return a.through_infinity() ? 0.0 : HUGE_VAL;
    if (a.chain.vertical()) {
        double dz = std::abs(p.z - a.chain.z0);
        double dt = 0.0;
        if (a.end.inf) {
            dt = std::max(0.0, p.t - a.start.t);  // the ray below start
        } else if (a.start.inf) {
            dt = std::max(0.0, a.end.t - p.t);
        } else {
            double lo = std::min(a.start.t, a.end.t), hi = std::max(a.start.t, a.end.t);
            bool linear = (a.end.t - a.start.t) < 0;  // Negative runs t-decreasing
            if (linear)
                dt = p.t < lo ? lo - p.t : (p.t > hi ? p.t - hi : 0.0);
            else
                dt = (p.t > lo && p.t < hi) ? std::min(p.t - lo, hi - p.t) : 0.0;
        }
        return std::hypot(dz, dt);
    }
    auto f = [&](double u) { return heis_distance(a.point(u), p); };
    return min_1d(f, 1024).f;
}

}  // namespace detail

using namespace detail;

namespace {

QuadNum q7(const BigRational& re, const BigRational& im) { return QuadNum(7, re, im); }
ExactPoint ep(const BigRational& re, const BigRational& im, const BigRational& tc) {
    return ExactPoint::at(q7(re, im), tc);
}

struct VertexRecipe {
    std::string name, word, source;
    std::optional<ExactPoint> ex;
    std::optional<HeisPoint> fl;
};

std::vector<VertexRecipe> recipes() {
    const double den = 32 + 2 * S14;
    std::vector<VertexRecipe> r;
    auto X = [&](const char* n, const char* w, const char* s, ExactPoint e) { r.push_back({n, w, s, e, std::nullopt}); };
    auto F = [&](const char* n, const char* w, const char* s, HeisPoint p) { r.push_back({n, w, s, std::nullopt, p}); };
    auto N = [&](const char* n, const char* w, const char* s) { r.push_back({n, w, s, std::nullopt, std::nullopt}); };
    X("q4", "g1", "p2", ep(-1, 0, -1));
    X("q5", "g1 g3^-1", "p1", ep(rat(-5, 4), rat(1, 4), 0));
    X("q6", "g1 g3^-1 g2", "p1", ep(rat(-1, 4), rat(1, 4), rat(1, 2)));
    X("p3", "g3", "q2", ep(rat(23, 32), rat(5, 32), rat(-1, 16)));
    X("p4", "g3 g2^-1", "p2", ep(rat(5, 8), rat(1, 8), 0));
    X("p5", "g3 g2^-1", "q1", ep(rat(3, 4), rat(1, 4), 0));
    X("v1", "g2", "p1", ep(rat(3, 2), rat(1, 2), 0));
    X("v4", "g2", "v1", ep(rat(3, 4), rat(1, 4), 0));
    F("v'2", "g2", "v2", HeisPoint::at(cplx(1.25, S7 / 4), S2));
    F("v'3", "g2", "v3",
      HeisPoint::at(cplx((40 + S14) / den, (5 * S2 + 14 * S7) / den), -(S2 + 2 * S7) / den));
    X("p'1", "g3^-1", "p1", ep(rat(-1, 4), rat(1, 4), rat(1, 2)));
    X("v4'", "g3^-1", "v4", ep(rat(1, 2), rat(1, 2), 0));
    N("v5", "g3", "v2");
    N("v6", "g3", "v3");
    N("v'4", "g2", "q3");
    F("v'5", "g2", "v5", HeisPoint::at(cplx(0.25, S7 / 4), S2 / (8 + 2 * S14)));
    F("v'6", "g2", "v6",
      HeisPoint::at(cplx((8 - S14) / den, (5 * S2 + 14 * S7) / den), -(5 * S2 + 6 * S7) / den));
    return r;
}

}  // namespace

const HeisPoint& VertexSet::at(const std::string& name) const {
    auto it = points.find(name);
    if (it == points.end()) throw ComplexError("unknown vertex " + name);
    return it->second.p;
}

std::optional<std::string> VertexSet::name_of(const HeisPoint& p, double tol) const {
    for (auto& [n, v] : points)
        if (same_point(v.p, p, tol)) return n;
    return std::nullopt;
}

int VertexSet::stated_count() const {
    return int(std::count_if(derived.begin(), derived.end(), [](auto& d) { return d.stated; }));
}

bool VertexSet::all_pass() const {
    return std::all_of(derived.begin(), derived.end(), [](auto& d) { return d.pass; });
}

VertexSet build_vertices(double tol) {
    VertexSet V;
    auto addx = [&](const std::string& n, const ExactPoint& e) { V.points[n] = NamedPoint{n, e.to_float(), e}; };
    auto addf = [&](const std::string& n, const HeisPoint& p) { V.points[n] = NamedPoint{n, p, std::nullopt}; };
    addx("p1", ExactPoint::infinity(7));
    addx("p2", ep(0, 0, 0));
    addx("q1", ep(1, 0, 1));
    addx("q2", ep(rat(5, 4), rat(1, 4), 0));
    addx("q3", ep(rat(1, 4), rat(1, 4), rat(-1, 2)));
    addx("v1", ep(rat(3, 2), rat(1, 2), 0));
    addx("v7", ep(rat(33, 32), rat(3, 32), rat(5, 8)));
    const cplx zv2(0.5, S7 / 2 + S2);
    addf("v2", HeisPoint::at(zv2, -S2));
    addf("v3", HeisPoint::at(zv2, -7 * S2));

    for (const VertexRecipe& r : recipes()) {
        DerivedVertex d;
        d.name = r.name;
        d.word = r.word;
        d.source = r.source;
        d.stated = r.ex.has_value() || r.fl.has_value();
        ExactElem G = rho2_elem(r.word);
        const NamedPoint& src = V.points.at(r.source);
        if (src.exact) {
            d.exact_computed = act(G, *src.exact);
            d.computed = d.exact_computed->to_float();
        } else {
            d.computed = act(to_float(G), src.p);
        }
        if (r.ex) {
            d.exact_kind = true;
            d.exact_expected = r.ex;
            d.expected = r.ex->to_float();
            d.pass = d.exact_computed && *d.exact_computed == *r.ex;
            d.residual = heis_distance(d.computed, d.expected);
            if (!d.pass && !d.computed.inf && !d.expected.inf && d.residual == 0) d.residual = HUGE_VAL;
        } else if (r.fl) {
            d.expected = *r.fl;
            d.residual = heis_distance(d.computed, d.expected);
            d.pass = d.residual <= tol;
        } else {
            d.expected = d.computed;
            d.pass = true;
        }
        if (!d.pass) {
            throw ComplexError("derived vertex " + d.name + " = " + r.word + "(" + r.source + ") gives " +
                               point_str(d.computed) + ", expected " + point_str(d.expected));
        }
        if (!V.points.count(d.name)) {
            if (d.exact_computed)
                addx(d.name, *d.exact_computed);
            else
                addf(d.name, d.computed);
        }
        V.derived.push_back(std::move(d));
    }
    return V;
}

// ---- edges

double e2_height(double theta) { return (S14 * std::cos(theta) - 5 * S2 * std::sin(theta)) / 8; }

HeisPoint EdgeParam::base_point(double u) const {
    if (kind == Kind::VerticalSegment) {
        if (std::isinf(t_end)) {
            if (u >= 1) return HeisPoint::infinity();
            return HeisPoint::at(z0, t_start - std::tan(kPi * u / 2));
        }
        return HeisPoint::at(z0, t_start + u * (t_end - t_start));
    }
    double th = theta_start + u * (theta_end - theta_start);
    cplx z = center + R * std::exp(cplx(0, th));
    return HeisPoint::at(z, t0 + 2 * std::imag(std::conj(z) * center));
}

HeisPoint EdgeParam::point(double u) const {
    HeisPoint b = base_point(u);
    return transform ? act(*transform, b) : b;
}

EdgeParam edge_param(const std::string& name, const std::string& word) {
    EdgeParam e;
    e.name = name;
    e.start = "p2";
    if (name == "[p2,p1]") {
        e.end = "p1";
        e.kind = EdgeParam::Kind::VerticalSegment;
        e.z0 = 0.0;
        e.t_start = 0.0;
        e.t_end = -HUGE_VAL;
        e.arc = make_arc(HeisPoint::at(0.0, 0.0), HeisPoint::infinity());
    } else if (name == "[p2,q2]") {
        e.end = "q2";
        e.kind = EdgeParam::Kind::ChainArc;
        e.center = cplx(5.0 / 8, S7 / 8);
        e.R = S2 / 2;
        e.t0 = 0.0;
        double alpha = std::acos(5 * S2 / 8);
        // the p2 endpoint is reached on the branch with sin(theta) = -sqrt14/8
        e.theta_start = 2 * kPi - std::acos(-5 * S2 / 8);
        e.theta_end = alpha;
        e.arc = make_arc(HeisPoint::at(0.0, 0.0), HeisPoint::at(cplx(1.25, S7 / 4), 0.0));
    } else {
        throw ComplexError("unknown edge " + name);
    }
    if (!word.empty()) {
        e.word = word;
        e.transform = to_float(rho2_elem(word));
        e.name = word + " " + name;
    }
    return e;
}

std::vector<SubCheck> edge_checks(double tol, int n) {
    std::vector<SubCheck> out;
    const HeisPoint p2 = HeisPoint::at(0.0, 0.0), q2 = HeisPoint::at(cplx(1.25, S7 / 4), 0.0);
    auto fmt = [](double x) {
        std::ostringstream os;
        os.precision(3);
        os << x;
        return os.str();
    };

    EdgeParam E2 = edge_param("[p2,q2]");
    double d0 = heis_distance(E2.point(0), p2), d1 = heis_distance(E2.point(1), q2);
    out.push_back({"[p2,q2] endpoints", d0 <= tol && d1 <= tol, "|e(0)-p2| = " + fmt(d0) + ", |e(1)-q2| = " + fmt(d1)});

    double hmax = 0.0, cmax = 0.0;
    bool member = true;
    CCircle C = ccircle_through(p2, q2);
    for (int k = 0; k < n; ++k) {
        double u = double(k) / (n - 1);
        double th = E2.theta_start + u * (E2.theta_end - E2.theta_start);
        HeisPoint p = E2.point(u);
        hmax = std::max(hmax, std::abs(p.t - e2_height(th)));
        member = member && ccircle_contains(C, p, tol);
        cmax = std::max(cmax, heis_distance(p, make_arc(p2, q2).point(u)));
    }
    out.push_back({"[p2,q2] printed height", hmax <= tol, "max |t - h(theta)| = " + fmt(hmax)});
    out.push_back({"[p2,q2] on chain(p2,q2)", member, std::to_string(n) + " samples"});
    out.push_back({"[p2,q2] matches the negative arc", cmax <= 1e-7, "max deviation " + fmt(cmax)});

    // Which end-angle branch reproduces p2.
    double c = -5 * S2 / 8;
    double written = 2 * kPi - std::acos(c);
    double other = std::acos(c);  // same cosine, opposite sine
    auto at = [&](double th) {
        cplx z = E2.center + E2.R * std::exp(cplx(0, th));
        return HeisPoint::at(z, 2 * std::imag(std::conj(z) * E2.center));
    };
    double dw = heis_distance(at(written), p2), dother = heis_distance(at(other), p2);
    out.push_back({"[p2,q2] start branch", dw <= tol && dother > 1e-3,
                   "theta = 2pi - arccos(-5sqrt2/8) (sin = " + fmt(std::sin(written)) + ") gives |e-p2| = " + fmt(dw) +
                       "; the sin > 0 branch gives " + fmt(dother)});

    EdgeParam E1 = edge_param("[p2,p1]");
    CCircle Vc = ccircle_through(p2, HeisPoint::infinity());
    bool vm = true, down = true;
    double prev = 1.0;
    for (int k = 0; k + 1 < n; ++k) {
        HeisPoint p = E1.point(double(k) / (n - 1));
        vm = vm && ccircle_contains(Vc, p, tol);
        down = down && p.t < prev;
        prev = p.t;
    }
    double dm = heis_distance(E1.point(0.5), HeisPoint::at(0.0, -1.0));
    out.push_back({"[p2,p1] endpoints", heis_distance(E1.point(0), p2) <= tol && E1.point(1).inf && dm <= tol,
                   "e(1/2) = " + point_str(E1.point(0.5))});
    out.push_back({"[p2,p1] on the vertical chain, t decreasing", vm && down, std::to_string(n) + " samples"});
    return out;
}

// ---- faces

bool SubFace::infinite_fibers() const { return kind == SubFaceKind::Disc || apex.inf; }

HeisPoint SubFace::base(double s) const {
    if (kind == SubFaceKind::Disc) {
        if (s >= 1) return HeisPoint::infinity();
        return HeisPoint::at(disc_z0 + disc_dir * std::tan(kPi * s / 2), disc_tc);
    }
    return edge.point(s);
}

Arc SubFace::fiber(double s) const {
    HeisPoint b = base(s);
    if (kind == SubFaceKind::Disc) return make_arc(HeisPoint::infinity(), b);
    if (kind == SubFaceKind::ConeFrom) return make_arc(apex, b);
    return make_arc(b, apex);
}

HeisPoint SubFace::point(double s, double u) const {
    if (kind == SubFaceKind::Disc) {
        if (s >= 1 || u <= 0 || u >= 1) return HeisPoint::infinity();
        return HeisPoint::at(disc_z0 + disc_dir * std::tan(kPi * s / 2), disc_tc + std::tan(kPi * (u - 0.5)));
    }
    HeisPoint b = base(s);
    if (same_point(b, apex, 1e-13)) return apex;
    return kind == SubFaceKind::ConeFrom ? make_arc(apex, b).point(u) : make_arc(b, apex).point(u);
}

HeisPoint SubFace::point_trunc(double s, double u, double depth, double length) const {
    if (kind == SubFaceKind::Disc)
        return HeisPoint::at(disc_z0 + disc_dir * (length * s), disc_tc + depth * (2 * u - 1));
    if (!apex.inf) return point(s, u);
    HeisPoint b = base(s);
    if (kind == SubFaceKind::ConeFrom) return HeisPoint::at(b.z, b.t + depth * (1 - u));
    return HeisPoint::at(b.z, b.t - depth * u);
}

const FaceDef& Tetrahedron::face_with(const std::string& a, const std::string& b, const std::string& c) const {
    std::set<std::string> want{a, b, c};
    for (auto& F : faces)
        if (std::set<std::string>(F.vertices.begin(), F.vertices.end()) == want) return F;
    throw ComplexError("no face " + a + "," + b + "," + c + " in " + name);
}

const NamedArc* Complex::edge_between(const std::string& a, const std::string& b) const {
    for (auto& e : skeleton)
        if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return &e;
    return nullptr;
}

std::vector<const FaceDef*> Complex::distinct_faces() const {
    std::vector<const FaceDef*> out;
    std::set<std::string> seen;
    for (auto& T : this->T)
        for (auto& F : T.faces)
            if (seen.insert(F.name).second) out.push_back(&F);
    return out;
}

const FaceDef& Complex::face(const std::string& name) const {
    for (auto* F : distinct_faces())
        if (F->name == name) return *F;
    throw ComplexError("unknown face " + name);
}

const Tetrahedron& Complex::tetra(const std::string& name) const {
    for (auto& t : T)
        if (t.name == name) return t;
    throw ComplexError("unknown tetrahedron " + name);
}

namespace {

SubFace cone_from(const VertexSet& V, const std::string& apex, const std::string& a, const std::string& b) {
    SubFace S;
    S.name = "F(" + apex + "," + a + "," + b + ")";
    S.kind = SubFaceKind::ConeFrom;
    S.apex_name = apex;
    S.apex = V.at(apex);
    S.edge_from = a;
    S.edge_to = b;
    S.edge = make_arc(V.at(a), V.at(b));
    return S;
}

SubFace cone_to(const VertexSet& V, const std::string& a, const std::string& b, const std::string& apex) {
    SubFace S = cone_from(V, apex, a, b);
    S.kind = SubFaceKind::ConeTo;
    return S;
}

SubFace disc(const std::string& name, cplx z0, double tc, const std::string& shared) {
    SubFace S;
    S.name = name;
    S.kind = SubFaceKind::Disc;
    S.apex_name = "p1";
    S.apex = HeisPoint::infinity();
    S.disc_z0 = z0;
    S.disc_dir = cplx(0, -1);
    S.disc_tc = tc;
    S.shared_id = shared;
    return S;
}

FaceDef face(const std::string& a, const std::string& b, const std::string& c, std::vector<SubFace> subs) {
    return FaceDef{"F(" + a + "," + b + "," + c + ")", {a, b, c}, std::move(subs)};
}

}  // namespace

Complex build_complex(double tol) {
    Complex C;
    C.V = build_vertices(tol);
    const VertexSet& V = C.V;

    FaceDef shared = face("p1", "p2", "q2", {cone_from(V, "p1", "p2", "q2"), disc("disc over -i R+", 0.0, 0.0, "x=0,y<=0")});

    Tetrahedron& T1 = C.T[0];
    T1.name = "T1";
    T1.vertices = {"p1", "p2", "q1", "q2"};
    T1.faces = {
        face("p2", "q1", "q2", {cone_from(V, "v1", "q1", "q2"), cone_from(V, "p2", "v1", "q1"), cone_from(V, "p2", "v1", "q2")}),
        face("p1", "q1", "q2", {cone_from(V, "p1", "q1", "q2"), disc("disc over 1 - i R+", 1.0, S7, "")}),
        shared,
        face("p1", "p2", "q1", {cone_to(V, "p2", "v2", "p1"), cone_to(V, "v2", "v3", "q1"), cone_to(V, "v3", "q1", "p1")}),
    };

    Tetrahedron& T2 = C.T[1];
    T2.name = "T2";
    T2.vertices = {"p1", "p2", "q2", "q3"};
    T2.generalized = true;
    T2.faces = {
        face("p2", "q2", "q3", {cone_to(V, "p2", "v5", "q3"), cone_to(V, "v5", "v6", "q2"), cone_to(V, "v6", "q2", "q3")}),
        face("p1", "q2", "q3", {cone_from(V, "v4", "q2", "q3"), cone_from(V, "p1", "v4", "q2"), cone_from(V, "p1", "v4", "q3")}),
        face("p1", "p2", "q3", {cone_from(V, "p1", "p2", "q3"), disc("disc over -i R+", 0.0, 0.0, "x=0,y<=0")}),
        shared,
    };

    auto arc = [&](const std::string& a, const std::string& b) { return NamedArc{"[" + a + "," + b + "]", a, b, make_arc(V.at(a), V.at(b))}; };
    C.skeleton = {arc("p2", "p1"), arc("q1", "p1"), arc("p1", "q2"), arc("p2", "q2"), arc("q1", "q2"),
                  arc("p2", "q1"), arc("p1", "q3"), arc("q2", "q3"), arc("p2", "q3")};

    struct P {
        const char* name;
        const char* sf;
        std::array<std::string, 3> src;
        const char* tf;
        std::array<std::string, 3> tgt;
    };
    const P ps[] = {
        {"g1", "F(p1,q1,q2)", {"q2", "q1", "p1"}, "F(p1,p2,q3)", {"q3", "p2", "p1"}},
        {"g2", "F(p2,q1,q2)", {"p2", "q1", "q2"}, "F(p1,q2,q3)", {"p1", "q2", "q3"}},
        {"g3", "F(p1,p2,q1)", {"q1", "p2", "p1"}, "F(p2,q2,q3)", {"q2", "p2", "q3"}},
    };
    for (const P& p : ps) {
        SidePairing sp;
        sp.name = p.name;
        sp.word = p.name;
        sp.g = rho2_elem(p.name);
        sp.source_face = p.sf;
        sp.target_face = p.tf;
        sp.source = p.src;
        sp.target = p.tgt;
        sp.verified = true;
        for (int k = 0; k < 3; ++k) {
            const NamedPoint& a = V.points.at(p.src[k]);
            const NamedPoint& b = V.points.at(p.tgt[k]);
            bool ok = a.exact && b.exact ? act(sp.g, *a.exact) == *b.exact : same_point(act(sp.g, a.p), b.p, tol);
            if (!ok) throw ComplexError(std::string("side pairing ") + p.name + " does not send " + p.src[k] + " to " + p.tgt[k]);
        }
        C.pairings.push_back(std::move(sp));
    }
    return C;
}

// ---- sampling and distances

std::vector<FaceSample> face_sample(const FaceDef& F, const SampleConfig& cfg) {
    if (cfg.n_edge < 1 || cfg.n_fiber < 1) throw ComplexError("sample counts must be positive");
    std::vector<FaceSample> out;
    out.reserve(F.subs.size() * cfg.n_edge * cfg.n_fiber);
    for (int k = 0; k < int(F.subs.size()); ++k) {
        const SubFace& S = F.subs[k];
        for (int i = 0; i < cfg.n_edge; ++i)
            for (int j = 0; j < cfg.n_fiber; ++j) {
                FaceSample x;
                x.sub = k;
                x.i = i;
                x.j = j;
                x.s = double(i) / cfg.n_edge;
                x.u = double(j) / cfg.n_fiber;
                x.p = S.point_trunc(x.s, x.u, cfg.depth, cfg.length);
                if (S.kind == SubFaceKind::Disc) {
                    x.inf_gap = std::min(cfg.length * (1 - x.s), cfg.depth * (1 - std::abs(2 * x.u - 1)));
                } else if (S.apex.inf) {
                    x.inf_gap = S.kind == SubFaceKind::ConeFrom ? cfg.depth * x.u : cfg.depth * (1 - x.u);
                }
                out.push_back(x);
            }
    }
    return out;
}

namespace {

double ray_cone_distance(const SubFace& S, const HeisPoint& p) {
    const bool up = S.kind == SubFaceKind::ConeFrom;
    auto d2 = [&](double s) {
        HeisPoint b = S.base(s);
        double dt = up ? std::max(0.0, b.t - p.t) : std::max(0.0, p.t - b.t);
        return std::norm(p.z - b.z) + dt * dt;
    };
    return std::sqrt(std::max(0.0, min_1d(d2, 256).f));
}

double disc_distance(const SubFace& S, const HeisPoint& p) {
    cplx w = p.z - S.disc_z0;
    double sigma = std::max(0.0, std::real(w * std::conj(S.disc_dir)) / std::norm(S.disc_dir));
    return std::abs(w - sigma * S.disc_dir);
}

// Levenberg-Marquardt on |S(s,u) - p|^2 over the unit square from the given starts.
double cone_lm(const SubFace& S, const HeisPoint& p, const std::vector<std::array<double, 2>>& starts) {
    double best = HUGE_VAL;
    for (auto x : starts) {
        if (best < 1e-13) break;
        auto F = [&](double s, double u) { return xyz(S.point(std::clamp(s, 0.0, 1.0), std::clamp(u, 0.0, 1.0))); };
        const auto P = xyz(p);
        auto resid = [&](double s, double u) {
            auto q = F(s, u);
            return std::array<double, 3>{q[0] - P[0], q[1] - P[1], q[2] - P[2]};
        };
        auto rr = resid(x[0], x[1]);
        double f = rr[0] * rr[0] + rr[1] * rr[1] + rr[2] * rr[2];
        double lam = 1e-3;
        for (int it = 0; it < 80 && f > 1e-30; ++it) {
            const double h = 1e-7;
            double J[3][2];
            for (int c = 0; c < 2; ++c) {
                double lo[2] = {x[0], x[1]}, hi[2] = {x[0], x[1]};
                lo[c] = std::max(0.0, x[c] - h);
                hi[c] = std::min(1.0, x[c] + h);
                auto a = resid(lo[0], lo[1]), b = resid(hi[0], hi[1]);
                for (int r = 0; r < 3; ++r) J[r][c] = (b[r] - a[r]) / (hi[c] - lo[c]);
            }
            double A00 = 0, A01 = 0, A11 = 0, g0 = 0, g1 = 0;
            for (int r = 0; r < 3; ++r) {
                A00 += J[r][0] * J[r][0];
                A01 += J[r][0] * J[r][1];
                A11 += J[r][1] * J[r][1];
                g0 += J[r][0] * rr[r];
                g1 += J[r][1] * rr[r];
            }
            bool improved = false;
            for (int tries = 0; tries < 12 && !improved; ++tries) {
                double a00 = A00 + lam * std::max(A00, 1e-12), a11 = A11 + lam * std::max(A11, 1e-12);
                double det = a00 * a11 - A01 * A01;
                if (det == 0) {
                    lam *= 10;
                    continue;
                }
                double d0 = -(a11 * g0 - A01 * g1) / det, d1 = -(a00 * g1 - A01 * g0) / det;
                double ns = std::clamp(x[0] + d0, 0.0, 1.0), nu = std::clamp(x[1] + d1, 0.0, 1.0);
                auto nr = resid(ns, nu);
                double nf = nr[0] * nr[0] + nr[1] * nr[1] + nr[2] * nr[2];
                if (nf < f) {
                    double step = std::abs(ns - x[0]) + std::abs(nu - x[1]);
                    bool stalled = f - nf < 1e-10 * f;
                    x = {ns, nu};
                    rr = nr;
                    f = nf;
                    lam = std::max(lam / 3, 1e-12);
                    improved = true;
                    if (step < 1e-14 || stalled) it = 1000;
                } else {
                    lam *= 4;
                }
            }
            if (!improved) break;
        }
        best = std::min(best, std::sqrt(f));
    }
    return best;
}

double finite_cone_distance(const SubFace& S, const HeisPoint& p, const std::vector<FaceSample>* seeds, int sub) {
    auto r2 = [&](double s, double u) {
        HeisPoint q = S.point(s, u);
        if (q.inf) return HUGE_VAL;
        return std::norm(q.z - p.z) + (q.t - p.t) * (q.t - p.t);
    };
    std::vector<std::pair<double, std::array<double, 2>>> starts;
    // seeds sitting on the apex carry no direction information
    if (seeds && sub >= 0) {
        for (auto& x : *seeds)
            if (x.sub == sub && !same_point(x.p, S.apex, 1e-12)) starts.push_back({heis_distance(x.p, p), {x.s, x.u}});
    }
    if (starts.empty()) {
        const int n = 40;
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j) {
                double s = double(i) / n, u = double(j) / n;
                if (j == 0 && S.kind == SubFaceKind::ConeFrom) continue;
                if (j == n && S.kind == SubFaceKind::ConeTo) continue;
                starts.push_back({std::sqrt(r2(s, u)), {s, u}});
            }
    }
    const std::size_t nstart = std::min<std::size_t>(6, starts.size());
    std::partial_sort(starts.begin(), starts.begin() + nstart, starts.end(), [](auto& a, auto& b) { return a.first < b.first; });
    std::vector<std::array<double, 2>> xs;
    for (std::size_t k = 0; k < nstart; ++k) xs.push_back(starts[k].second);
    return cone_lm(S, p, xs);
}

}  // namespace

double distance_to_subface(const SubFace& S, const HeisPoint& p, const std::vector<FaceSample>* seeds, int sub) {
    if (p.inf) return S.infinite_fibers() ? 0.0 : HUGE_VAL;
    if (S.kind == SubFaceKind::Disc) return disc_distance(S, p);
    if (S.apex.inf) return ray_cone_distance(S, p);
    return finite_cone_distance(S, p, seeds, sub);
}

double distance_to_face(const FaceDef& F, const HeisPoint& p, const std::vector<FaceSample>* seeds) {
    double best = HUGE_VAL;
    for (int k = 0; k < int(F.subs.size()); ++k) best = std::min(best, distance_to_subface(F.subs[k], p, seeds, k));
    return best;
}

struct FaceLocator::Impl {
    const FaceDef* F;
    std::vector<FaceSample> S;
    std::vector<std::unique_ptr<KdTree>> trees;  // finite cones only
    std::vector<std::vector<std::array<double, 2>>> params;
};

FaceLocator::FaceLocator(const FaceDef& F, const SampleConfig& cfg) : impl_(std::make_unique<Impl>()) {
    impl_->F = &F;
    impl_->S = face_sample(F, cfg);
    const int n = int(F.subs.size());
    impl_->trees.resize(n);
    impl_->params.resize(n);
    for (int k = 0; k < n; ++k) {
        const SubFace& sf = F.subs[k];
        if (sf.infinite_fibers()) continue;
        std::vector<P3> pts;
        for (auto& x : impl_->S)
            if (x.sub == k && !same_point(x.p, sf.apex, 1e-12)) {
                pts.push_back(xyz(x.p));
                impl_->params[k].push_back({x.s, x.u});
            }
        impl_->trees[k] = std::make_unique<KdTree>(std::move(pts));
    }
}

FaceLocator::~FaceLocator() = default;
FaceLocator::FaceLocator(FaceLocator&&) noexcept = default;
const FaceDef& FaceLocator::face() const { return *impl_->F; }
const std::vector<FaceSample>& FaceLocator::samples() const { return impl_->S; }

double FaceLocator::distance(const HeisPoint& p) const {
    const FaceDef& F = *impl_->F;
    double best = HUGE_VAL;
    for (int k = 0; k < int(F.subs.size()); ++k) {
        if (!impl_->trees[k] || p.inf) {
            best = std::min(best, distance_to_subface(F.subs[k], p));
            continue;
        }
        std::vector<std::array<double, 2>> xs;
        for (int i : impl_->trees[k]->knearest(xyz(p), 6)) xs.push_back(impl_->params[k][i]);
        best = std::min(best, cone_lm(F.subs[k], p, xs));
    }
    return best;
}

std::vector<EquivarianceResult> side_pairing_equivariance(const Complex& C, const SampleConfig& cfg, double tol) {
    std::vector<EquivarianceResult> out;
    for (const SidePairing& sp : C.pairings) {
        const FaceDef& S = C.face(sp.source_face);
        const FaceDef& T = C.face(sp.target_face);
        std::vector<FaceSample> src = face_sample(S, cfg);
        FaceLocator tgt(T, cfg);
        FloatElem g = to_float(sp.g);
        EquivarianceResult r;
        r.pairing = sp.name;
        r.source_face = S.name;
        r.target_face = T.name;
        r.threshold = 10 * tol;
        for (auto& x : src) {
            HeisPoint q = act(g, x.p);
            if (q.inf || std::abs(q.z) > 1e6 || std::abs(q.t) > 1e6) {
                ++r.skipped;
                continue;
            }
            ++r.samples;
            double d = tgt.distance(q);
            if (d > r.max_distance) {
                r.max_distance = d;
                r.witness = q;
            }
        }
        r.pass = r.samples > 0 && r.max_distance <= r.threshold;
        out.push_back(r);
    }
    return out;
}

}  // namespace crs
