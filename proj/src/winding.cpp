#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "crcomplex_internal.hpp"

namespace crs {

using namespace detail;

namespace {

double wrap2pi(double a) {
    double r = std::fmod(a, 2 * kPi);
    return r < 0 ? r + 2 * kPi : r;
}
double wrap_pi(double a) {
    double r = wrap2pi(a + kPi) - kPi;
    return r;
}

int perm_sign(const std::array<std::string, 4>& seq, const std::array<std::string, 4>& ref) {
    std::array<int, 4> idx{};
    for (int i = 0; i < 4; ++i) {
        auto it = std::find(ref.begin(), ref.end(), seq[i]);
        if (it == ref.end()) throw ComplexError("vertex " + seq[i] + " not in the reference order");
        idx[i] = int(it - ref.begin());
    }
    int s = 1;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (idx[i] > idx[j]) s = -s;
    return s;
}

// Orientation of a tetrahedron from the tangents at p2 of the arcs towards the other vertices.
int base_orientation(const Complex& C, const Tetrahedron& T, std::array<std::string, 4>& ref) {
    ref[0] = "p2";
    int k = 1;
    for (auto& v : T.vertices)
        if (v != "p2") ref[k++] = v;
    if (k != 4) throw ComplexError(T.name + " does not contain p2");
    const HeisPoint p2 = C.V.at("p2");
    double M[3][3];
    for (int r = 0; r < 3; ++r) {
        Arc a = make_arc(p2, C.V.at(ref[r + 1]));
        auto x0 = xyz(a.point(0.0)), x1 = xyz(a.point(1e-6));
        double n = std::sqrt((x1[0] - x0[0]) * (x1[0] - x0[0]) + (x1[1] - x0[1]) * (x1[1] - x0[1]) +
                             (x1[2] - x0[2]) * (x1[2] - x0[2]));
        for (int c = 0; c < 3; ++c) M[r][c] = (x1[c] - x0[c]) / n;
    }
    double det = M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
                 M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
    if (std::abs(det) < 1e-9) throw ComplexError(T.name + " is degenerate at p2");
    return det > 0 ? 1 : -1;
}

struct Germ {
    bool found = false;
    double angle = 0.0;
    std::set<std::string> shared;
};

// Locate R on the boundary of one of F's sub-faces, step inside, and read
// the angle of the image germ about the standardized edge.
Germ germ(const FaceDef& F, const HeisPoint& R, const FloatElem& g, const FloatElem& Mstd) {
    Germ out;
    const int n = 2001;
    const double delta = 1e-4;
    for (const SubFace& S : F.subs) {
        for (int side = 0; side < 4; ++side) {
            auto bp = [&](double x) {
                switch (side) {
                    case 0: return S.point(0.0, x);
                    case 1: return S.point(1.0, x);
                    case 2: return S.point(x, 0.0);
                    default: return S.point(x, 1.0);
                }
            };
            auto dist = [&](double x) {
                HeisPoint q = bp(x);
                return q.inf ? HUGE_VAL : heis_distance(q, R);
            };
            int bi = 0;
            double bd = HUGE_VAL;
            for (int k = 0; k < n; ++k) {
                double x = 0.001 + 0.998 * k / (n - 1);
                double d = dist(x);
                if (d < bd) {
                    bd = d;
                    bi = k;
                }
            }
            // no prefilter on bd: near infinity the grid spacing along a ray is coarse
            if (!std::isfinite(bd)) continue;
            double lo = 0.001 + 0.998 * std::max(0, bi - 1) / (n - 1), hi = 0.001 + 0.998 * std::min(n - 1, bi + 1) / (n - 1);
            for (int it = 0; it < 80; ++it) {
                double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
                if (dist(m1) < dist(m2))
                    hi = m2;
                else
                    lo = m1;
            }
            double x = (lo + hi) / 2;
            if (dist(x) > 1e-7) continue;
            if (!S.shared_id.empty()) out.shared.insert(S.shared_id);
            if (out.found) continue;
            HeisPoint q;
            switch (side) {
                case 0: q = S.point(delta, x); break;
                case 1: q = S.point(1 - delta, x); break;
                case 2: q = S.point(x, delta); break;
                default: q = S.point(x, 1 - delta);
            }
            HeisPoint w = act(Mstd, act(g, q));
            if (w.inf) continue;
            out.found = true;
            out.angle = std::arg(w.z);
        }
    }
    return out;
}

std::string find_vertex(const Complex& C, const Tetrahedron& T, const HeisPoint& p) {
    for (auto& v : T.vertices)
        if (same_point(C.V.at(v), p, 1e-7)) return v;
    return "";
}

}  // namespace

LinkCycle standard_cycle(const std::string& edge) {
    if (edge == "[p2,p1]")
        return {{"T1", ""}, {"T2", ""}, {"T1", "g1"}, {"T2", "g1 g3^-1"}, {"T1", "g1 g3^-1 g2"}, {"T2", "g1 g3^-1 g2 g1^-1"}};
    if (edge == "[p2,q2]")
        return {{"T1", ""}, {"T2", ""}, {"T1", "g3"}, {"T2", "g3 g2^-1"}, {"T1", "g3 g2^-1"}, {"T2", "g3 g2^-1 g1^-1"}};
    throw ComplexError("no edge cycle for " + edge);
}

EdgeLink edge_link_winding(const Complex& C, const std::string& edge, const LinkCycle& cycle, double tol, int n_slices) {
    if (cycle.size() < 3) throw ComplexError("edge link needs at least 3 tetrahedra");
    if (n_slices < 1) throw ComplexError("n_slices must be positive");
    EdgeParam E = edge_param(edge);
    const HeisPoint A = C.V.at(E.start), B = C.V.at(E.end);
    const FloatElem Mstd = standard_position(A, B);

    EdgeLink L;
    L.edge = edge;
    const int n = int(cycle.size());
    std::vector<FloatElem> gs, gis;
    std::vector<std::array<std::string, 2>> ab(n), oth(n);
    std::vector<std::array<HeisPoint, 2>> img(n);
    for (int j = 0; j < n; ++j) {
        const Tetrahedron& T = C.tetra(cycle[j].first);
        ExactElem g = cycle[j].second.empty() ? ExactElem::identity(QuadNum(7, 0)) : rho2_elem(cycle[j].second);
        gs.push_back(to_float(g));
        gis.push_back(to_float(g.inv()));
        std::string a = find_vertex(C, T, act(gis[j], A)), b = find_vertex(C, T, act(gis[j], B));
        if (a.empty() || b.empty())
            throw ComplexError(cycle[j].second + " " + T.name + " does not contain the edge " + edge);
        ab[j] = {a, b};
        int k = 0;
        for (auto& v : T.vertices)
            if (v != a && v != b) oth[j][k++] = v;
        LinkStep st;
        st.tetra = T.name;
        st.word = cycle[j].second;
        for (int i = 0; i < 4; ++i) st.image[i] = C.V.name_of(act(gs[j], C.V.at(T.vertices[i]))).value_or("?");
        for (int i = 0; i < 2; ++i) img[j][i] = act(gs[j], C.V.at(oth[j][i]));
        L.steps.push_back(st);
    }
    // entry and exit faces: the exit face of one step is the entry face of the next
    std::vector<int> exit_idx(n);
    for (int j = 0; j < n; ++j) {
        int nx = (j + 1) % n, pv = (j + n - 1) % n;
        int found = -1;
        for (int i = 0; i < 2; ++i)
            for (int m = 0; m < 2; ++m)
                if (same_point(img[j][i], img[nx][m], 1e-7)) found = i;
        if (found < 0) throw ComplexError("edge link of " + edge + " does not close after step " + std::to_string(j + 1));
        exit_idx[j] = found;
        bool back = false;
        for (int m = 0; m < 2; ++m) back = back || same_point(img[j][1 - found], img[pv][m], 1e-7);
        if (!back) throw ComplexError("edge link of " + edge + " does not close before step " + std::to_string(j + 1));
    }
    std::vector<int> sense(n);
    for (int j = 0; j < n; ++j) {
        const Tetrahedron& T = C.tetra(cycle[j].first);
        std::array<std::string, 4> ref;
        int bo = base_orientation(C, T, ref);
        const std::string c = oth[j][1 - exit_idx[j]], d = oth[j][exit_idx[j]];
        L.steps[j].entry_face = c;
        L.steps[j].exit_face = d;
        L.steps[j].sigma = perm_sign({ab[j][0], ab[j][1], c, d}, ref) * bo;
    }

    std::vector<int> windings;
    for (int k = 0; k < n_slices; ++k) {
        double u = double(k + 1) / (n_slices + 1);
        L.slice_u.push_back(u);
        HeisPoint Q = E.point(u);
        HeisPoint s0 = act(Mstd, Q), s1 = act(Mstd, E.point(std::min(u + 1e-4, 1 - 1e-9)));
        const int dec = s1.t < s0.t ? 1 : -1;
        double total = 0.0;
        std::vector<double> ang_in(n), ang_out(n);
        for (int j = 0; j < n; ++j) {
            const Tetrahedron& T = C.tetra(cycle[j].first);
            HeisPoint R = act(gis[j], Q);
            const FaceDef& Fc = T.face_with(ab[j][0], ab[j][1], L.steps[j].entry_face);
            const FaceDef& Fd = T.face_with(ab[j][0], ab[j][1], L.steps[j].exit_face);
            Germ gc = germ(Fc, R, gs[j], Mstd), gd = germ(Fd, R, gs[j], Mstd);
            if (!gc.found || !gd.found)
                throw ComplexError("no face germ at slice " + std::to_string(k) + " of " + edge + " in " + T.name);
            ang_in[j] = gc.angle;
            ang_out[j] = gd.angle;
            int sj = L.steps[j].sigma * dec;
            if (k == 0) sense[j] = sj;
            double w = wrap2pi(sj * (gd.angle - gc.angle));
            if (w < 1e-9 || w > 2 * kPi - 1e-9) {
                bool shared = false;
                for (auto& id : gc.shared) shared = shared || gd.shared.count(id);
                if (!shared)
                    throw ComplexError("ambiguous germ order at slice " + std::to_string(k) + " of " + edge + " in " + T.name);
                w = 0.0;
                L.steps[j].degenerate = true;
            }
            L.steps[j].wedge.push_back(w);
            total += w;
        }
        for (int j = 0; j < n; ++j)
            L.germ_mismatch = std::max(L.germ_mismatch, std::abs(wrap_pi(ang_out[j] - ang_in[(j + 1) % n])));
        L.slice_total.push_back(total);
        int w = int(std::lround(total / (2 * kPi)));
        L.residual = std::max(L.residual, std::abs(total - 2 * kPi * w));
        windings.push_back(w);
    }
    if (std::adjacent_find(windings.begin(), windings.end(), std::not_equal_to<>()) != windings.end())
        throw ComplexError("winding of " + edge + " varies along the edge");
    L.winding = windings.front();
    L.rotation_sense = std::all_of(sense.begin(), sense.end(), [&](int s) { return s == sense[0]; }) ? sense[0] : 0;
    (void)tol;
    return L;
}

// ---- quotient

namespace {
struct UF {
    std::vector<int> p;
    explicit UF(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    void join(int a, int b) { p[find(a)] = find(b); }
    int classes() {
        std::set<int> s;
        for (int i = 0; i < int(p.size()); ++i) s.insert(find(i));
        return int(s.size());
    }
};
}  // namespace

bool QuotientReport::pass() const {
    std::vector<int> sizes = edge_class_sizes;
    std::sort(sizes.begin(), sizes.end());
    bool words = std::all_of(cycle_words.begin(), cycle_words.end(), [](auto& w) { return w.second; });
    return edge_classes == 2 && sizes == std::vector<int>{6, 6} && face_classes == 4 && vertex_classes == 1 && euler == 0 &&
           words;
}

QuotientReport quotient_combinatorics(const Complex& C) {
    auto vid = [&](int t, const std::string& v) {
        auto& T = C.T[t].vertices;
        auto it = std::find(T.begin(), T.end(), v);
        if (it == T.end()) throw ComplexError(v + " not in " + C.T[t].name);
        return t * 4 + int(it - T.begin());
    };
    auto eid = [&](int t, const std::string& a, const std::string& b) {
        int i = vid(t, a) % 4, j = vid(t, b) % 4;
        if (i > j) std::swap(i, j);
        static const int tab[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
        return t * 6 + tab[i][j];
    };
    auto fid = [&](int t, const std::string& name) {
        for (int k = 0; k < 4; ++k)
            if (C.T[t].faces[k].name == name) return t * 4 + k;
        return -1;
    };
    UF V(8), E(12), F(8);
    auto glue = [&](int ta, const std::array<std::string, 3>& A, int tb, const std::array<std::string, 3>& B,
                    const std::string& fa, const std::string& fb) {
        for (int k = 0; k < 3; ++k) V.join(vid(ta, A[k]), vid(tb, B[k]));
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) E.join(eid(ta, A[i], A[j]), eid(tb, B[i], B[j]));
        F.join(fid(ta, fa), fid(tb, fb));
    };
    const FaceDef& S = C.face("F(p1,p2,q2)");
    glue(0, S.vertices, 1, S.vertices, S.name, S.name);
    for (auto& sp : C.pairings) {
        int ta = fid(0, sp.source_face) >= 0 ? 0 : 1, tb = fid(0, sp.target_face) >= 0 ? 0 : 1;
        glue(ta, sp.source, tb, sp.target, sp.source_face, sp.target_face);
    }
    QuotientReport R;
    R.vertex_classes = V.classes();
    R.edge_classes = E.classes();
    R.face_classes = F.classes();
    std::map<int, std::vector<std::string>> members;
    for (int t = 0; t < 2; ++t) {
        auto& T = C.T[t].vertices;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) members[E.find(eid(t, T[i], T[j]))].push_back(C.T[t].name + "[" + T[i] + "," + T[j] + "]");
    }
    for (auto& [k, m] : members) {
        R.edge_class_sizes.push_back(int(m.size()));
        R.edge_class_members.push_back(m);
    }
    R.euler = 2 - R.face_classes + R.edge_classes;
    ExactElem Id = ExactElem::identity(QuadNum(7, 0));
    for (const char* w : {"g1 g3^-1 g2 g1^-1 g3", "g3 g2^-1 g1^-1 g2"}) R.cycle_words.push_back({w, projective_eq(rho2_elem(w), Id)});
    return R;
}

// ---- the whole pipeline

BranchingReport branching_report(const PipelineConfig& cfg) {
    BranchingReport R;
    auto add = [&](const std::string& name, bool pass, const std::string& detail) {
        R.checks.push_back({name, pass, detail});
        if (!pass) R.failing.push_back(name);
    };
    auto num = [](double x) {
        std::ostringstream os;
        os.precision(4);
        os << x;
        return os.str();
    };

    Report rel = check_group_relation(rho2());
    add("group relation", rel.all_pass(), rel.items.empty() ? "" : rel.items[0].detail);
    Report lat = check_lattice_membership(rho2());
    add("entries in O_7", lat.all_pass(), "");

    std::optional<Complex> C;
    try {
        C = build_complex(cfg.tol);
        add("vertices", C->V.all_pass() && C->V.stated_count() == 14,
            std::to_string(C->V.stated_count()) + " stated vertices reproduced");
    } catch (const std::exception& e) {
        add("vertices", false, e.what());
        R.structure = "undetermined";
        R.overall_pass = false;
        return R;
    }
    bool edges_ok = true;
    for (auto& c : edge_checks(cfg.tol)) edges_ok = edges_ok && c.pass;
    add("edge parametrizations", edges_ok, "");

    bool eq_ok = true;
    double eq_max = 0.0;
    for (auto& r : side_pairing_equivariance(*C, cfg.sample, cfg.tol)) {
        eq_ok = eq_ok && r.pass;
        eq_max = std::max(eq_max, r.max_distance);
    }
    add("side-pairing equivariance", eq_ok, "max distance " + num(eq_max));

    IntersectionReport I = check_face_intersections(*C, cfg.sample, cfg.tol);
    int bad = 0;
    for (auto& p : I.pairs) bad += !p.pass;
    add("sampled face intersections", I.literal_pass(), std::to_string(bad) + " of " + std::to_string(I.pairs.size()) + " pairs below threshold");
    add("dedicated face checks", I.dedicated_pass(), "");

    HeightTable H = height_comparison(cfg.n_heights);
    add("height comparison", H.pass(cfg.tol), "min gap " + num(H.min_gap));

    int w1 = 0, w3 = 0;
    try {
        EdgeLink a = edge_link_winding(*C, "[p2,p1]", standard_cycle("[p2,p1]"), cfg.tol, cfg.n_slices);
        EdgeLink b = edge_link_winding(*C, "[p2,q2]", standard_cycle("[p2,q2]"), cfg.tol, cfg.n_slices);
        EdgeLink a2 = edge_link_winding(*C, "[p2,p1]", standard_cycle("[p2,p1]"), cfg.tol, 2 * cfg.n_slices);
        EdgeLink b2 = edge_link_winding(*C, "[p2,q2]", standard_cycle("[p2,q2]"), cfg.tol, 2 * cfg.n_slices);
        w1 = a.winding;
        w3 = b.winding;
        add("link of [p2,p1]", a.winding == 1 && a2.winding == 1, "winding " + std::to_string(a.winding));
        add("link of [p2,q2]", b.winding == 3 && b2.winding == 3, "winding " + std::to_string(b.winding));
    } catch (const std::exception& e) {
        add("edge links", false, e.what());
    }
    R.branch_order = w3;
    R.unbranched_order = w1;

    QuotientReport Q = quotient_combinatorics(*C);
    add("quotient combinatorics", Q.pass(),
        std::to_string(Q.edge_classes) + " edge classes, " + std::to_string(Q.face_classes) + " face classes, " +
            std::to_string(Q.vertex_classes) + " vertex class(es)");

    if (w3 > 1 && w1 == 1)
        R.structure = "branched";
    else if (w3 == 1 && w1 == 1)
        R.structure = "unbranched";
    else
        R.structure = "undetermined";
    R.overall_pass = R.failing.empty();
    return R;
}

}  // namespace crs
