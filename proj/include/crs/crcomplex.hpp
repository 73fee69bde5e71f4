#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "crs/chcore.hpp"
#include "crs/words.hpp"

namespace crs {

struct ComplexError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NamedPoint {
    std::string name;
    HeisPoint p;
    std::optional<ExactPoint> exact;  // set when the coordinates lie in Q(i sqrt7), t in sqrt7 Q
};

// name = act(rho2(word), source)
struct DerivedVertex {
    std::string name, word, source;
    bool stated = false;  // printed coordinates available for comparison
    bool exact_kind = false;
    std::optional<ExactPoint> exact_expected, exact_computed;
    HeisPoint expected, computed;
    double residual = 0.0;
    bool pass = false;
};

struct VertexSet {
    std::map<std::string, NamedPoint> points;
    std::vector<DerivedVertex> derived;

    const HeisPoint& at(const std::string& name) const;
    std::optional<std::string> name_of(const HeisPoint& p, double tol = 1e-7) const;
    int stated_count() const;
    bool all_pass() const;
};

// Throws ComplexError naming the first derived vertex whose act-image differs.
VertexSet build_vertices(double tol = kDefaultTol);

struct EdgeParam {
    enum class Kind { VerticalSegment, ChainArc };
    std::string name, start, end;
    Kind kind = Kind::VerticalSegment;
    // VerticalSegment: z = z0, t runs from t_start towards t_end (may be -inf)
    cplx z0{0.0, 0.0};
    double t_start = 0.0, t_end = 0.0;
    // ChainArc: z = center + R e^{i theta}, t = t0 + 2 Im(conj(z) center)
    cplx center{0.0, 0.0};
    double t0 = 0.0, R = 0.0, theta_start = 0.0, theta_end = 0.0;
    Arc arc;
    std::string word;  // nonempty for a pairing translate; points are act(rho2(word), base)
    std::optional<FloatElem> transform;

    HeisPoint base_point(double u) const;
    HeisPoint point(double u) const;  // u in [0,1] from start to end
};

// "[p2,p1]" or "[p2,q2]", optionally translated by a word in g1, g3 (g2, a, b, t allowed).
EdgeParam edge_param(const std::string& name, const std::string& word = "");

struct SubCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Endpoints, printed height formula, chain membership of samples, and which
// theta branch reproduces the p2 endpoint.
std::vector<SubCheck> edge_checks(double tol = kDefaultTol, int n_samples = 257);

// Printed height of [p2,q2]: (sqrt14 cos - 5 sqrt2 sin)/8.
double e2_height(double theta);

enum class SubFaceKind { ConeFrom, ConeTo, Disc };

struct SubFace {
    std::string name;
    SubFaceKind kind = SubFaceKind::ConeFrom;
    std::string apex_name;
    HeisPoint apex;
    std::string edge_from, edge_to;
    Arc edge;  // base path of the cone
    // Disc: vertical chains over disc_z0 + sigma * disc_dir, sigma >= 0; disc_tc centres the truncation
    cplx disc_z0{0.0, 0.0}, disc_dir{0.0, -1.0};
    double disc_tc = 0.0;
    std::string shared_id;  // same id on two faces means the same point set

    bool infinite_fibers() const;  // the fibers are vertical (apex at infinity, or a disc)
    HeisPoint base(double s) const;
    Arc fiber(double s) const;
    HeisPoint point(double s, double u) const;
    HeisPoint point_trunc(double s, double u, double depth, double length) const;
};

struct FaceDef {
    std::string name;                   // F(x,y,z)
    std::array<std::string, 3> vertices;
    std::vector<SubFace> subs;
};

struct Tetrahedron {
    std::string name;
    std::array<std::string, 4> vertices;
    std::vector<FaceDef> faces;  // opposite to each vertex, in vertex order
    bool generalized = false;
    const FaceDef& face_with(const std::string& a, const std::string& b, const std::string& c) const;
};

struct SidePairing {
    std::string name, word;
    ExactElem g;
    std::string source_face, target_face;
    std::array<std::string, 3> source, target;  // act(g, source[i]) = target[i]
    bool verified = false;
};

// Oriented 1-skeleton edge, e.g. [q1,p1] is the ray below q1.
struct NamedArc {
    std::string name, a, b;
    Arc arc;
};

struct Complex {
    VertexSet V;
    std::array<Tetrahedron, 2> T;
    std::vector<SidePairing> pairings;
    std::vector<NamedArc> skeleton;

    const NamedArc* edge_between(const std::string& a, const std::string& b) const;

    std::vector<const FaceDef*> distinct_faces() const;
    const FaceDef& face(const std::string& name) const;
    const Tetrahedron& tetra(const std::string& name) const;
};

Complex build_complex(double tol = kDefaultTol);

struct SampleConfig {
    int n_edge = 64, n_fiber = 64;
    double depth = 4.0;   // t-length kept on rays to or from infinity
    double length = 3.0;  // kept length of disc base rays
};

struct FaceSample {
    HeisPoint p;
    int sub = 0;
    int i = 0, j = 0;  // grid indices, s = i/n_edge, u = j/n_fiber
    double s = 0, u = 0;
    double inf_gap = 1e300;  // distance in parameter-space units to the truncation cap (near infinity)
};

// n_edge * n_fiber samples per sub-face at s = i/n_edge, u = j/n_fiber (nested under doubling).
std::vector<FaceSample> face_sample(const FaceDef& F, const SampleConfig& cfg);

// Continuous distance from a finite point to the untruncated face.
double distance_to_face(const FaceDef& F, const HeisPoint& p, const std::vector<FaceSample>* seeds = nullptr);
double distance_to_subface(const SubFace& S, const HeisPoint& p, const std::vector<FaceSample>* seeds = nullptr,
                           int sub_index = -1);

// Samples of a face indexed for repeated continuous-distance queries.
class FaceLocator {
public:
    FaceLocator(const FaceDef& F, const SampleConfig& cfg);
    ~FaceLocator();
    FaceLocator(FaceLocator&&) noexcept;
    double distance(const HeisPoint& p) const;
    const FaceDef& face() const;
    const std::vector<FaceSample>& samples() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct EquivarianceResult {
    std::string pairing, source_face, target_face;
    int samples = 0, skipped = 0;  // skipped: images at the ideal vertex
    double max_distance = 0.0, threshold = 0.0;
    HeisPoint witness;
    bool pass = false;
};
std::vector<EquivarianceResult> side_pairing_equivariance(const Complex& C, const SampleConfig& cfg, double tol);

struct FacePairResult {
    std::string a, b;
    std::vector<std::string> common;  // shared vertices
    bool shared_disc = false;
    double h = 0.0, band = 0.0, threshold = 0.0;
    double min_offseam = 0.0;  // min distance over off-seam sample pairs (capped search)
    bool capped = false;     // no pair found below the search cap; min_offseam is a lower bound
    HeisPoint wa, wb;        // witness pair
    double band_needed = 0.0;  // smallest seam band for which the threshold would hold
    double seam_coincidence = 0.0;
    int crossings = 0;  // off-seam mesh segment/triangle crossings (informational)
    bool pass = false;
};

struct DedicatedCheck {
    std::string name, detail;
    double min_distance = 0.0, threshold = 0.0, band = 0.0;
    HeisPoint witness;
    bool pass = false;
};

struct IntersectionReport {
    double h = 0.0;
    std::vector<FacePairResult> pairs;
    std::vector<DedicatedCheck> dedicated;
    bool literal_pass() const;
    bool dedicated_pass() const;
    bool crossing_free() const;
    bool pass() const { return literal_pass() && dedicated_pass(); }
};

IntersectionReport check_face_intersections(const Complex& C, const SampleConfig& cfg, double tol);
// Self-intersection guard: every off-seam sample of F is within tol of F.
bool face_self_overlap(const FaceDef& F, const SampleConfig& cfg, double tol);

struct HeightRow {
    double theta = 0, t1 = 0, t2 = 0;
    bool gap = false;  // no phi solved the (x,y) match
};
struct HeightTable {
    std::vector<HeightRow> rows;
    double min_gap = 0.0;  // min over interior rows of t2 - t1
    double min_gap_theta = 0.0;
    int interior_violations = 0, gaps = 0;
    bool monotone_tail = false;
    double t2_start = 0.0, t2_end = 0.0;
    bool pass(double tol) const;
};
double height_theta_min();
double height_theta_max();
// t1 from the phi-family for one theta; nullopt when no phi matches
std::optional<double> face_height_at(double theta);
HeightTable height_comparison(int n_samples);

struct LinkStep {
    std::string tetra, word;
    std::array<std::string, 4> image;  // vertices of word(tetra) where named
    std::string entry_face, exit_face;  // third vertex of the faces through the edge
    int sigma = 0;
    std::vector<double> wedge;  // per slice
    bool degenerate = false;
};

struct EdgeLink {
    std::string edge;
    std::vector<LinkStep> steps;
    std::vector<double> slice_u, slice_total;
    int winding = 0;
    double residual = 0.0;           // max |total - 2 pi winding|
    double germ_mismatch = 0.0;      // shared faces seen from both sides
    int rotation_sense = 0;
};

using LinkCycle = std::vector<std::pair<std::string, std::string>>;  // (tetrahedron, word)
LinkCycle standard_cycle(const std::string& edge);
// Throws ComplexError for a link that does not close or for ambiguous germ ordering.
EdgeLink edge_link_winding(const Complex& C, const std::string& edge, const LinkCycle& cycle, double tol,
                           int n_slices);

struct QuotientReport {
    int edge_classes = 0, face_classes = 0, vertex_classes = 0;
    std::vector<int> edge_class_sizes;
    std::vector<std::vector<std::string>> edge_class_members;
    int euler = 0;  // tetrahedra - faces + edges
    std::vector<std::pair<std::string, bool>> cycle_words;  // projectively identity
    bool pass() const;
};
QuotientReport quotient_combinatorics(const Complex& C);

struct BranchingReport {
    std::string holonomy = "rho2";
    std::string branch_locus = "[p2,q2]";
    int branch_order = 0, unbranched_order = 0;
    std::string structure;  // "branched", "unbranched" or "undetermined"
    std::vector<SubCheck> checks;
    bool overall_pass = false;
    std::vector<std::string> failing;
};

struct PipelineConfig {
    SampleConfig sample;
    double tol = kDefaultTol;
    int n_slices = 16;
    int n_heights = 1000;
};

BranchingReport branching_report(const PipelineConfig& cfg);

}  // namespace crs
