#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "crcomplex_internal.hpp"

namespace crs {

using namespace detail;

namespace {


double d3(const P3& a, const P3& b) { return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2])); }

// Distance to an arc; finite chains use a point cloud and a local refinement.
class SeamCurve {
public:
    explicit SeamCurve(const Arc& a) : arc_(a) {
        if (a.chain.vertical()) return;
        std::vector<P3> pts;
        for (int k = 0; k <= kN; ++k) pts.push_back(xyz(a.point(double(k) / kN)));
        tree_ = std::make_unique<KdTree>(std::move(pts));
    }
    double distance(const HeisPoint& p) const {
        if (!tree_ || p.inf) return dist_to_arc(arc_, p);
        auto [d, k] = tree_->nearest(xyz(p));
        auto f = [&](double u) { return heis_distance(arc_.point(u), p); };
        double lo = std::max(0.0, double(k - 1) / kN), hi = std::min(1.0, double(k + 1) / kN);
        return std::min(d, f(golden_min(f, lo, hi, 60)));
    }

private:
    static constexpr int kN = 4096;
    Arc arc_;
    std::unique_ptr<KdTree> tree_;
};

int grid_index(const SampleConfig& c, int sub, int i, int j) { return (sub * c.n_edge + i) * c.n_fiber + j; }

// Median spacing between grid neighbours.
double median_spacing(const std::vector<FaceSample>& S, const SampleConfig& c, int nsubs) {
    std::vector<double> d;
    for (int k = 0; k < nsubs; ++k)
        for (int i = 0; i < c.n_edge; ++i)
            for (int j = 0; j < c.n_fiber; ++j) {
                const auto& a = S[grid_index(c, k, i, j)].p;
                if (i + 1 < c.n_edge) d.push_back(heis_distance(a, S[grid_index(c, k, i + 1, j)].p));
                if (j + 1 < c.n_fiber) d.push_back(heis_distance(a, S[grid_index(c, k, i, j + 1)].p));
            }
    if (d.empty()) return 0.0;
    std::nth_element(d.begin(), d.begin() + d.size() / 2, d.end());
    return d[d.size() / 2];
}

struct PairSeam {
    std::unique_ptr<SeamCurve> edge;
    std::vector<HeisPoint> vertices;  // finite common vertices
    bool at_infinity = false;
    const SubFace* disc = nullptr;
    std::string shared_id;
};

double seam_distance(const PairSeam& s, const FaceDef& F, const FaceSample& x) {
    double d = HUGE_VAL;
    if (s.edge) d = std::min(d, s.edge->distance(x.p));
    for (auto& v : s.vertices) d = std::min(d, heis_distance(v, x.p));
    if (s.at_infinity) d = std::min(d, x.inf_gap);
    if (s.disc) {
        if (!s.shared_id.empty() && F.subs[x.sub].shared_id == s.shared_id) return 0.0;
        d = std::min(d, distance_to_subface(*s.disc, x.p));
    }
    return d;
}

// Min distance between the samples of A and B whose seam distance is at least W.
std::pair<double, std::pair<int, int>> offseam_min(const std::vector<P3>& A, const std::vector<double>& sa,
                                                    const std::vector<P3>& B, const std::vector<double>& sb, double W) {
    std::vector<P3> bp;
    std::vector<int> bi;
    for (std::size_t k = 0; k < B.size(); ++k)
        if (sb[k] >= W) {
            bp.push_back(B[k]);
            bi.push_back(int(k));
        }
    if (bp.empty()) return {HUGE_VAL, {-1, -1}};
    KdTree tree(bp);
    double best = HUGE_VAL;
    std::pair<int, int> w{-1, -1};
    for (std::size_t k = 0; k < A.size(); ++k) {
        if (sa[k] < W) continue;
        auto [d, j] = tree.nearest(A[k]);
        if (d < best) {
            best = d;
            w = {int(k), bi[j]};
        }
    }
    return {best, w};
}

struct Tri {
    P3 a, b, c;
};

bool segment_hits_triangle(const P3& p, const P3& q, const Tri& T) {
    const double eps = 1e-14;
    P3 dir{q[0] - p[0], q[1] - p[1], q[2] - p[2]};
    P3 e1{T.b[0] - T.a[0], T.b[1] - T.a[1], T.b[2] - T.a[2]};
    P3 e2{T.c[0] - T.a[0], T.c[1] - T.a[1], T.c[2] - T.a[2]};
    P3 h{dir[1] * e2[2] - dir[2] * e2[1], dir[2] * e2[0] - dir[0] * e2[2], dir[0] * e2[1] - dir[1] * e2[0]};
    double a = e1[0] * h[0] + e1[1] * h[1] + e1[2] * h[2];
    if (std::abs(a) < eps) return false;
    double f = 1 / a;
    P3 s{p[0] - T.a[0], p[1] - T.a[1], p[2] - T.a[2]};
    double u = f * (s[0] * h[0] + s[1] * h[1] + s[2] * h[2]);
    if (u < 0 || u > 1) return false;
    P3 qq{s[1] * e1[2] - s[2] * e1[1], s[2] * e1[0] - s[0] * e1[2], s[0] * e1[1] - s[1] * e1[0]};
    double v = f * (dir[0] * qq[0] + dir[1] * qq[1] + dir[2] * qq[2]);
    if (v < 0 || u + v > 1) return false;
    double t = f * (e2[0] * qq[0] + e2[1] * qq[1] + e2[2] * qq[2]);
    return t >= 0 && t <= 1;
}

struct Mesh {
    std::vector<P3> pts;
    std::vector<double> seam;
    std::vector<std::array<int, 2>> segs;
    std::vector<std::array<int, 3>> tris;
};

Mesh grid_mesh(const std::vector<P3>& pts, const std::vector<double>& seam, const SampleConfig& c, int nsubs) {
    Mesh M{pts, seam, {}, {}};
    for (int k = 0; k < nsubs; ++k)
        for (int i = 0; i < c.n_edge; ++i)
            for (int j = 0; j < c.n_fiber; ++j) {
                int a = grid_index(c, k, i, j);
                if (i + 1 < c.n_edge) M.segs.push_back({a, grid_index(c, k, i + 1, j)});
                if (j + 1 < c.n_fiber) M.segs.push_back({a, grid_index(c, k, i, j + 1)});
                if (i + 1 < c.n_edge && j + 1 < c.n_fiber) {
                    int b = grid_index(c, k, i + 1, j), d = grid_index(c, k, i, j + 1), e = grid_index(c, k, i + 1, j + 1);
                    M.tris.push_back({a, b, d});
                    M.tris.push_back({b, e, d});
                }
            }
    return M;
}

// Off-seam segments of A crossing off-seam triangles of B.
int mesh_crossings(const Mesh& A, const Mesh& B, double band) {
    std::vector<int> keep;
    std::vector<double> lens;
    for (int t = 0; t < int(B.tris.size()); ++t) {
        auto& T = B.tris[t];
        if (B.seam[T[0]] < band || B.seam[T[1]] < band || B.seam[T[2]] < band) continue;
        keep.push_back(t);
        for (int k = 0; k < 3; ++k) lens.push_back(d3(B.pts[T[k]], B.pts[T[(k + 1) % 3]]));
    }
    if (keep.empty()) return 0;
    std::nth_element(lens.begin(), lens.begin() + lens.size() / 2, lens.end());
    double cell = std::max(2 * lens[lens.size() / 2], 1e-6);
    auto key = [&](long x, long y, long z) { return (x * 73856093L) ^ (y * 19349663L) ^ (z * 83492791L); };
    std::unordered_map<long, std::vector<int>> hash;
    auto cidx = [&](double v) { return long(std::floor(v / cell)); };
    for (int t : keep) {
        auto& T = B.tris[t];
        P3 lo = B.pts[T[0]], hi = lo;
        for (int k = 1; k < 3; ++k)
            for (int a = 0; a < 3; ++a) {
                lo[a] = std::min(lo[a], B.pts[T[k]][a]);
                hi[a] = std::max(hi[a], B.pts[T[k]][a]);
            }
        for (long x = cidx(lo[0]); x <= cidx(hi[0]); ++x)
            for (long y = cidx(lo[1]); y <= cidx(hi[1]); ++y)
                for (long z = cidx(lo[2]); z <= cidx(hi[2]); ++z) hash[key(x, y, z)].push_back(t);
    }
    int hits = 0;
    std::vector<int> cand;
    for (auto& s : A.segs) {
        if (A.seam[s[0]] < band || A.seam[s[1]] < band) continue;
        const P3 &p = A.pts[s[0]], &q = A.pts[s[1]];
        cand.clear();
        for (long x = cidx(std::min(p[0], q[0])); x <= cidx(std::max(p[0], q[0])); ++x)
            for (long y = cidx(std::min(p[1], q[1])); y <= cidx(std::max(p[1], q[1])); ++y)
                for (long z = cidx(std::min(p[2], q[2])); z <= cidx(std::max(p[2], q[2])); ++z) {
                    auto it = hash.find(key(x, y, z));
                    if (it != hash.end()) cand.insert(cand.end(), it->second.begin(), it->second.end());
                }
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        for (int t : cand) {
            auto& T = B.tris[t];
            if (segment_hits_triangle(p, q, Tri{B.pts[T[0]], B.pts[T[1]], B.pts[T[2]]})) {
                ++hits;
                break;
            }
        }
    }
    return hits;
}

struct FaceData {
    const FaceDef* F;
    std::vector<FaceSample> S;
    std::vector<P3> P;
    double h;
    std::unique_ptr<FaceLocator> loc;
};

const SubFace* disc_of(const FaceDef& F) {
    for (auto& s : F.subs)
        if (s.kind == SubFaceKind::Disc && !s.shared_id.empty()) return &s;
    return nullptr;
}

FacePairResult check_pair(const Complex& C, const FaceData& X, const FaceData& Y, const SampleConfig& cfg, double tol) {
    FacePairResult r;
    r.a = X.F->name;
    r.b = Y.F->name;
    for (auto& v : X.F->vertices)
        if (std::find(Y.F->vertices.begin(), Y.F->vertices.end(), v) != Y.F->vertices.end()) r.common.push_back(v);
    PairSeam seam;
    const NamedArc* common_edge = r.common.size() >= 2 ? C.edge_between(r.common[0], r.common[1]) : nullptr;
    if (common_edge) seam.edge = std::make_unique<SeamCurve>(common_edge->arc);
    for (auto& v : r.common) {
        if (v == "p1")
            seam.at_infinity = true;
        else
            seam.vertices.push_back(C.V.at(v));
    }
    const SubFace *dx = disc_of(*X.F), *dy = disc_of(*Y.F);
    if (dx && dy && dx->shared_id == dy->shared_id) {
        r.shared_disc = true;
        seam.disc = dx;
        seam.shared_id = dx->shared_id;
    }
    r.h = std::max(X.h, Y.h);
    r.band = 10 * r.h;
    r.threshold = 10 * r.h;

    std::vector<double> sx(X.S.size()), sy(Y.S.size());
    for (std::size_t k = 0; k < X.S.size(); ++k) sx[k] = seam_distance(seam, *X.F, X.S[k]);
    for (std::size_t k = 0; k < Y.S.size(); ++k) sy[k] = seam_distance(seam, *Y.F, Y.S[k]);

    auto [m, w] = offseam_min(X.P, sx, Y.P, sy, r.band);
    r.min_offseam = m;
    if (w.first >= 0) {
        r.wa = X.S[w.first].p;
        r.wb = Y.S[w.second].p;
    }
    r.pass = m > r.threshold;

    // smallest band that would have separated the off-seam samples
    double hi = 0.0;
    for (double v : sx) hi = std::max(hi, v < 1e100 ? v : 0.0);
    for (double v : sy) hi = std::max(hi, v < 1e100 ? v : 0.0);
    hi += 1.0;
    auto ok = [&](double W) {
        std::vector<P3> bp;
        for (std::size_t k = 0; k < Y.P.size(); ++k)
            if (sy[k] >= W) bp.push_back(Y.P[k]);
        if (bp.empty()) return true;
        KdTree tree(bp);
        for (std::size_t k = 0; k < X.P.size(); ++k)
            if (sx[k] >= W && tree.any_within(X.P[k], r.threshold)) return false;
        return true;
    };
    if (ok(0.0)) {
        r.band_needed = 0.0;
    } else if (!ok(hi)) {
        r.band_needed = HUGE_VAL;  // samples far from every seam still come close
    } else {
        double lo = 0.0;
        for (int it = 0; it < 14; ++it) {
            double mid = (lo + hi) / 2;
            (ok(mid) ? hi : lo) = mid;
        }
        r.band_needed = hi;
    }

    if (common_edge) {
        for (int k = 0; k <= 64; ++k) {
            HeisPoint p = common_edge->arc.point_trunc(k / 64.0, cfg.depth);
            if (p.inf || std::abs(p.t) > 1e6) continue;
            double d = std::max(X.loc->distance(p), Y.loc->distance(p));
            r.seam_coincidence = std::max(r.seam_coincidence, d);
        }
    }
    (void)tol;

    Mesh MX = grid_mesh(X.P, sx, cfg, int(X.F->subs.size())), MY = grid_mesh(Y.P, sy, cfg, int(Y.F->subs.size()));
    double cb = 3 * r.h;
    r.crossings = mesh_crossings(MX, MY, cb) + mesh_crossings(MY, MX, cb);
    return r;
}

FaceData face_data(const FaceDef& F, const SampleConfig& cfg) {
    FaceData d{&F, face_sample(F, cfg), {}, 0.0, std::make_unique<FaceLocator>(F, cfg)};
    for (auto& x : d.S) d.P.push_back(xyz(x.p));
    d.h = median_spacing(d.S, cfg, int(F.subs.size()));
    return d;
}

// Vertical point sets met by a segment: rays over a base polyline, or all
// vertical lines over a ray in the z-plane.
struct VerticalSet {
    bool is_disc = false;
    bool up = false;
    std::vector<HeisPoint> base;
    cplx z0, dir;
};

std::vector<VerticalSet> vertical_sets(const FaceDef& F) {
    std::vector<VerticalSet> out;
    for (auto& S : F.subs) {
        VerticalSet v;
        if (S.kind == SubFaceKind::Disc) {
            v.is_disc = true;
            v.z0 = S.disc_z0;
            v.dir = S.disc_dir;
        } else {
            if (!S.apex.inf) throw ComplexError("vertical_sets: finite apex in " + S.name);
            v.up = S.kind == SubFaceKind::ConeFrom;
            for (int k = 0; k <= 2048; ++k) v.base.push_back(S.base(k / 2048.0));
        }
        out.push_back(std::move(v));
    }
    return out;
}

// Solve a + l (b - a) = c + m (d - c) in the plane.
bool seg2(cplx a, cplx b, cplx c, cplx d, double& l, double& m, bool ray = false) {
    cplx r = b - a, s = d - c;
    double den = r.real() * s.imag() - r.imag() * s.real();
    if (std::abs(den) < 1e-300) return false;
    cplx w = c - a;
    l = (w.real() * s.imag() - w.imag() * s.real()) / den;
    m = (w.real() * r.imag() - w.imag() * r.real()) / den;
    return l >= 0 && l <= 1 && m >= 0 && (ray || m <= 1);
}

bool segment_meets(const HeisPoint& p, const HeisPoint& q, const VerticalSet& V) {
    double l, m;
    if (V.is_disc) return seg2(p.z, q.z, V.z0, V.z0 + V.dir, l, m, true);
    for (std::size_t k = 0; k + 1 < V.base.size(); ++k) {
        const HeisPoint &c = V.base[k], &d = V.base[k + 1];
        cplx lo(std::min(c.z.real(), d.z.real()), std::min(c.z.imag(), d.z.imag()));
        cplx hi(std::max(c.z.real(), d.z.real()), std::max(c.z.imag(), d.z.imag()));
        if (std::max(p.z.real(), q.z.real()) < lo.real() || std::min(p.z.real(), q.z.real()) > hi.real() ||
            std::max(p.z.imag(), q.z.imag()) < lo.imag() || std::min(p.z.imag(), q.z.imag()) > hi.imag())
            continue;
        if (!seg2(p.z, q.z, c.z, d.z, l, m)) continue;
        double ts = p.t + l * (q.t - p.t), tb = c.t + m * (d.t - c.t);
        if (V.up ? ts >= tb : ts <= tb) return true;
    }
    return false;
}

struct DedicatedInput {
    std::string name;
    std::vector<HeisPoint> pts;  // grid samples of the finite face
    std::vector<int> sub;
    std::vector<double> seam;
    int nsubs;
    const FaceDef* target;
};

DedicatedCheck run_dedicated(const DedicatedInput& in, const SampleConfig& cfg) {
    // resolution of the sampled face; the target is handled analytically
    std::vector<double> sp;
    for (int k = 0; k < in.nsubs; ++k)
        for (int i = 0; i + 1 < cfg.n_edge; ++i)
            for (int j = 0; j + 1 < cfg.n_fiber; ++j) {
                int a = grid_index(cfg, k, i, j);
                sp.push_back(heis_distance(in.pts[a], in.pts[grid_index(cfg, k, i + 1, j)]));
                sp.push_back(heis_distance(in.pts[a], in.pts[grid_index(cfg, k, i, j + 1)]));
            }
    std::nth_element(sp.begin(), sp.begin() + sp.size() / 2, sp.end());
    const double h = sp[sp.size() / 2];
    DedicatedCheck d;
    d.name = in.name;
    d.band = 10 * h;
    d.threshold = h / 2;
    d.min_distance = HUGE_VAL;
    for (std::size_t k = 0; k < in.pts.size(); ++k) {
        if (in.seam[k] < d.band) continue;
        double x = distance_to_face(*in.target, in.pts[k]);
        if (x < d.min_distance) {
            d.min_distance = x;
            d.witness = in.pts[k];
        }
    }
    auto V = vertical_sets(*in.target);
    int hits = 0, segs = 0;
    for (int k = 0; k < in.nsubs; ++k)
        for (int i = 0; i < cfg.n_edge; ++i)
            for (int j = 0; j < cfg.n_fiber; ++j) {
                int a = grid_index(cfg, k, i, j);
                for (int b : {i + 1 < cfg.n_edge ? grid_index(cfg, k, i + 1, j) : -1,
                              j + 1 < cfg.n_fiber ? grid_index(cfg, k, i, j + 1) : -1}) {
                    if (b < 0 || in.seam[a] < d.band || in.seam[b] < d.band) continue;
                    ++segs;
                    for (auto& v : V)
                        if (segment_meets(in.pts[a], in.pts[b], v)) {
                            ++hits;
                            break;
                        }
                }
            }
    d.pass = hits == 0 && d.min_distance > d.threshold;
    d.detail = std::to_string(segs) + " off-seam mesh segments, " + std::to_string(hits) + " crossing " + in.target->name;
    return d;
}

}  // namespace

bool IntersectionReport::literal_pass() const {
    return std::all_of(pairs.begin(), pairs.end(), [](auto& p) { return p.pass; });
}
bool IntersectionReport::dedicated_pass() const {
    return !dedicated.empty() && std::all_of(dedicated.begin(), dedicated.end(), [](auto& p) { return p.pass; });
}
bool IntersectionReport::crossing_free() const {
    return std::all_of(pairs.begin(), pairs.end(), [](auto& p) { return p.crossings == 0; });
}

IntersectionReport check_face_intersections(const Complex& C, const SampleConfig& cfg, double tol) {
    IntersectionReport R;
    std::vector<FaceData> D;
    for (auto* F : C.distinct_faces()) D.push_back(face_data(*F, cfg));
    for (auto& d : D) R.h = std::max(R.h, d.h);
    for (std::size_t a = 0; a < D.size(); ++a)
        for (std::size_t b = a + 1; b < D.size(); ++b) R.pairs.push_back(check_pair(C, D[a], D[b], cfg, tol));

    const VertexSet& V = C.V;
    auto make_input = [&](const std::string& name, const FaceDef& src, std::vector<int> subs, const FloatElem* g,
                          const FaceDef& target, auto seam_fn) {
        DedicatedInput in;
        in.name = name;
        in.target = &target;
        in.nsubs = int(subs.size());
        auto S = face_sample(src, cfg);
        for (int k = 0; k < in.nsubs; ++k)
            for (auto& x : S)
                if (x.sub == subs[k]) {
                    HeisPoint p = g ? act(*g, x.p) : x.p;
                    in.pts.push_back(p);
                    in.sub.push_back(k);
                    in.seam.push_back(seam_fn(p));
                }
        return in;
    };

    // (a) through g2: the image of F(q1,v2,v3) against the cone over [v4,q2]
    {
        FloatElem G2 = to_float(rho2_elem("g2"));
        FaceDef cone{"F(p1,v4,q2)", {"p1", "v4", "q2"}, {C.face("F(p1,q2,q3)").subs[1]}};
        SeamCurve seam(make_arc(V.at("v'2"), V.at("q2")));
        auto in = make_input("g2 F(q1,v2,v3) vs g2 F(p2,q1,v1)", C.face("F(p1,p2,q1)"), {1}, &G2, cone,
                             [&](const HeisPoint& p) { return seam.distance(p); });
        // the native cone is the g2-image of F(p2,q1,v1)
        double dev = 0.0;
        for (auto& x : face_sample(C.face("F(p2,q1,q2)"), cfg)) {
            if (x.sub != 1) continue;
            HeisPoint q = act(G2, x.p);
            if (q.inf || std::abs(q.t) > 1e6) continue;
            dev = std::max(dev, distance_to_face(cone, q));
        }
        DedicatedCheck d = run_dedicated(in, cfg);
        std::ostringstream os;
        os.precision(3);
        os << dev;
        d.detail += "; g2 F(p2,q1,v1) deviates from F(p1,v4,q2) by at most " + os.str();
        d.pass = d.pass && dev <= 10 * tol;
        R.dedicated.push_back(d);
    }
    // (b) F(v4,q2,q3) against F(p1,q1,q2), meeting at q2
    {
        HeisPoint q2 = V.at("q2");
        FaceDef src = C.face("F(p1,q2,q3)");
        auto in = make_input("F(v4,q2,q3) vs F(p1,q1,q2)", src, {0}, nullptr, C.face("F(p1,q1,q2)"),
                             [&](const HeisPoint& p) { return heis_distance(p, q2); });
        R.dedicated.push_back(run_dedicated(in, cfg));
    }
    // (c) F(p2,q2,q3) against F(p1,p2,q2), meeting along [p2,q2]
    {
        SeamCurve e(C.edge_between("p2", "q2")->arc);
        auto in = make_input("F(p2,q2,q3) vs F(p1,p2,q2)", C.face("F(p2,q2,q3)"), {0, 1, 2}, nullptr,
                             C.face("F(p1,p2,q2)"), [&](const HeisPoint& p) { return e.distance(p); });
        R.dedicated.push_back(run_dedicated(in, cfg));
    }
    return R;
}

bool face_self_overlap(const FaceDef& F, const SampleConfig& cfg, double tol) {
    FaceLocator L(F, cfg);
    for (auto& x : L.samples())
        if (L.distance(x.p) > tol) return false;
    return true;
}

// ---- heights along the edge from q2 to v7

double height_theta_min() { return kPi - std::asin(S7 / 4); }
double height_theta_max() { return kPi - std::asin(3 * S7 / 32); }

std::optional<double> face_height_at(double theta) {
    if (theta < height_theta_min() - 1e-12 || theta > height_theta_max() + 1e-12)
        throw ComplexError("theta outside the height-comparison range");
    const double x = 2 + std::cos(theta), y = std::sin(theta);
    auto centre = [](double phi) {
        double c = std::cos(phi), s = std::sin(phi);
        return std::array<double, 3>{(c + S7 * s + 3) / 4, (-S7 * c + s + S7) / 4, (S7 * c + s) / 2};
    };
    auto g = [&](double phi) {
        auto c = centre(phi);
        return (x - c[0]) * (x - c[0]) + (y - c[1]) * (y - c[1]) - 0.5;
    };
    auto t1 = [&](double phi) {
        auto c = centre(phi);
        return c[2] + 2 * (c[1] * x - c[0] * y);
    };
    const int n = 4096;
    const double a = kPi, b = 2 * kPi;
    std::optional<double> best;
    auto take = [&](double phi) {
        double v = t1(phi);
        if (!best || v > *best) best = v;
    };
    std::vector<double> gv(n + 1);
    for (int k = 0; k <= n; ++k) gv[k] = g(a + (b - a) * k / n);
    for (int k = 0; k < n; ++k) {
        double lo = a + (b - a) * k / n, hi = a + (b - a) * (k + 1) / n;
        double glo = gv[k], ghi = gv[k + 1];
        if (glo == 0) take(lo);
        if ((glo < 0) != (ghi < 0) && ghi != 0) {
            for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
                double mid = (lo + hi) / 2, gm = g(mid);
                if ((gm < 0) == (glo < 0)) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            take((lo + hi) / 2);
        }
    }
    if (gv[n] == 0) take(b);
    // tangential contacts
    for (int k = 0; k <= n; ++k) {
        bool lmin = (k == 0 || std::abs(gv[k]) <= std::abs(gv[k - 1])) && (k == n || std::abs(gv[k]) <= std::abs(gv[k + 1]));
        if (!lmin || std::abs(gv[k]) > 1e-4) continue;
        double lo = a + (b - a) * std::max(0, k - 1) / n, hi = a + (b - a) * std::min(n, k + 1) / n;
        double phi = golden_min([&](double p) { return std::abs(g(p)); }, lo, hi, 200);
        if (std::abs(g(phi)) < 1e-12) take(phi);
    }
    return best;
}

HeightTable height_comparison(int n) {
    if (n < 3) throw ComplexError("height comparison needs at least 3 samples");
    HeightTable T;
    const double a = height_theta_min(), b = height_theta_max();
    T.min_gap = HUGE_VAL;
    for (int k = 0; k < n; ++k) {
        double th = k == n - 1 ? b : a + (b - a) * k / (n - 1);
        HeightRow r;
        r.theta = th;
        r.t2 = S7 - 4 * std::sin(th);
        auto t1 = face_height_at(th);
        r.gap = !t1;
        r.t1 = t1.value_or(std::nan(""));
        bool interior = k > 0 && k < n - 1;
        if (interior) {
            if (r.gap) {
                ++T.gaps;
            } else {
                double gap = r.t2 - r.t1;
                if (!(gap > 0)) ++T.interior_violations;
                if (gap < T.min_gap) {
                    T.min_gap = gap;
                    T.min_gap_theta = th;
                }
            }
        }
        T.rows.push_back(r);
    }
    T.t2_start = T.rows.front().t2;
    T.t2_end = T.rows.back().t2;
    // gap shrinks towards q2 over the first interior rows
    int m = std::min(10, n - 2);
    T.monotone_tail = true;
    for (int k = 2; k <= m; ++k) {
        const auto &p = T.rows[k - 1], &q = T.rows[k];
        if (p.gap || q.gap || !(q.t2 - q.t1 > p.t2 - p.t1)) T.monotone_tail = false;
    }
    return T;
}

bool HeightTable::pass(double tol) const {
    return interior_violations == 0 && gaps == 0 && monotone_tail && std::abs(t2_start) <= tol &&
           std::abs(t2_end - 5 * S7 / 8) <= tol;
}

}  // namespace crs
