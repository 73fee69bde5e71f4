#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "crs/harness.hpp"

using namespace crs;
using nlohmann::json;

namespace {

int run(std::vector<const char*> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
    args.insert(args.begin(), "crs");
    std::ostringstream out, err;
    int code = cli_dispatch(int(args.size()), args.data(), out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(is), {});
}

struct TempDir {
    std::filesystem::path p;
    TempDir() {
        p = std::filesystem::temp_directory_path() / ("crs_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(p);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(p, ec);
    }
};

}  // namespace

TEST_CASE("run config validation") {
    RunConfig c;
    CHECK_NOTHROW(c.validate());
    c.tol = 1.0;
    CHECK_THROWS_AS(c.validate(), HarnessError);
    c = RunConfig{};
    c.n_edge = 0;
    CHECK_THROWS_AS(c.validate(), HarnessError);
    c = RunConfig{};
    c.precision_bits = 0;
    CHECK_THROWS_AS(c.validate(), HarnessError);
    c = RunConfig{};
    c.max_cosets = -1;
    CHECK_THROWS_AS(c.validate(), HarnessError);
}

TEST_CASE("output directory override") {
    RunConfig c;
    c.out_dir = "figs";
    ::unsetenv(kOutDirEnv);
    CHECK(c.effective_out_dir() == "figs");
    CHECK(c.resolve("a.svg") == "figs/a.svg");
    CHECK(c.resolve("/abs/a.svg") == "/abs/a.svg");
    ::setenv(kOutDirEnv, "/tmp/elsewhere", 1);
    CHECK(c.resolve("a.svg") == "/tmp/elsewhere/a.svg");
    ::unsetenv(kOutDirEnv);
}

TEST_CASE("check reports carry witnesses") {
    CHECK_THROWS_AS(CheckReport::make("x", Status::Fail, 1.0, nullptr, "p"), HarnessError);
    CHECK_THROWS_AS(CheckReport::make("x", Status::Inconclusive, 0.0, json::object(), "p"), HarnessError);
    CHECK_NOTHROW(CheckReport::make("x", Status::Pass, 0.0, nullptr, "p"));
    CheckReport b = CheckReport::boolean("x", false, "", "p");
    CHECK(b.status == Status::Fail);
    CHECK(b.witness.contains("detail"));
    json j = b.to_json();
    CHECK(j["status"] == "fail");
    RunReport R;
    R.checks.push_back(b);
    CHECK_FALSE(R.pass());
    CHECK(R.to_json()["summary"]["failed"] == 1);
}

TEST_CASE("verify commands") {
    RunConfig c;
    RunReport r2 = verify_rep(2, c);
    CHECK(r2.pass());
    CHECK(r2.info["commutator_convention"] == "x y x^-1 y^-1");
    RunReport r3 = verify_rep(3, c);
    CHECK_FALSE(r3.pass());  // two rho3 entries are not integral
    CHECK_THROWS_AS(verify_rep(4, c), HarnessError);
    CHECK(verify_picard(7, c).pass());
    CHECK(verify_picard(3, c).pass());
    CHECK_THROWS_AS(verify_picard(5, c), HarnessError);
}

TEST_CASE("group calculator commands") {
    RunConfig c;
    CHECK(fp_abelianize("p3", c).info["abelianization"] == "Z/6");
    CHECK(fp_abelianize("triangle236-quotient", c).pass());
    CHECK(fp_cosets("p3-N", c).info["index"] == 6);
    CHECK(fp_subgroup("p3-N", c).pass());
    c.max_cosets = 3;
    RunReport over = fp_cosets("p3-N", c);
    REQUIRE(over.checks.size() == 1);
    CHECK(over.checks[0].status == Status::Inconclusive);
    CHECK(over.checks[0].witness["detail"] == "inconclusive at bound");
    CHECK_THROWS_AS(fp_cosets("nope", c), HarnessError);
}

TEST_CASE("complex serialization") {
    Complex C = build_complex();
    json j = serialize_complex(C, 80);
    const json* q1 = nullptr;
    for (auto& v : j["vertices"])
        if (v["name"] == "q1") q1 = &v;
    REQUIRE(q1);
    // q1 = (1, sqrt7): z = 1, t = 1 * sqrt7
    CHECK((*q1)["exact"]["denominator"] == "1");
    CHECK((*q1)["exact"]["re"] == "1");
    CHECK((*q1)["exact"]["tc"] == "1");
    CHECK((*q1)["float"]["precision_bits"] == 80);
    CHECK((*q1)["float"]["t"].get<std::string>().rfind("2.645751311064590590501", 0) == 0);
    const json* v2 = nullptr;
    for (auto& v : j["vertices"])
        if (v["name"] == "v2") v2 = &v;
    REQUIRE(v2);
    CHECK((*v2)["exact"].is_null());
    CHECK((*v2)["float"]["precision_bits"] == 53);
    CHECK(j["pairings"].size() == 3);
    CHECK(j["tetrahedra"][1]["generalized"] == true);
    CHECK(j.dump() == serialize_complex(C, 80).dump());
}

TEST_CASE("figures") {
    SampleConfig s;
    s.n_edge = s.n_fiber = 8;
    std::string empty = render_projection({}, nullptr, s);
    CHECK(empty.find("<svg") != std::string::npos);
    CHECK(empty.find("</svg>") != std::string::npos);
    CHECK(empty.find("polyline") == std::string::npos);

    Complex C = build_complex();
    std::vector<const FaceDef*> faces;
    for (auto& F : C.tetra("T1").faces) faces.push_back(&F);
    std::string a = render_projection(faces, &C.V, s), b = render_projection(faces, &C.V, s);
    CHECK(a == b);
    CHECK(a.find(">p2</text>") != std::string::npos);
    CHECK(a.find("id=\"F(p1,p2,q2)\"") != std::string::npos);

    HeightTable H = height_comparison(50);
    std::string csv = render_heights_csv(H);
    CHECK(csv.rfind("theta,t1,t2\r\n", 0) == 0);
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    double prev = -1, th = 0, t1 = 0, t2 = 0;
    int rows = 0;
    while (std::getline(is, line)) {
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &th, &t1, &t2) == 3);
        if (rows == 0) {
            CHECK(std::abs(th - (M_PI - std::asin(std::sqrt(7.0) / 4))) < 1e-12);
            CHECK(std::abs(t2) < 1e-12);
        } else {
            CHECK(th > prev);
        }
        prev = th;
        ++rows;
    }
    CHECK(rows == 50);
    CHECK(std::abs(th - (M_PI - std::asin(3 * std::sqrt(7.0) / 32))) < 1e-12);
    CHECK(std::abs(t2 - 5 * std::sqrt(7.0) / 8) < 1e-12);
    CHECK(render_heights_svg(H).find("polyline") != std::string::npos);
    CHECK_THROWS_AS(write_file("/proc/nonexistent/x.svg", "x"), IoError);
}

TEST_CASE("cli exit codes") {
    std::string out, err;
    CHECK(run({"verify", "rep", "--rho", "2"}, &out) == 0);
    json j = json::parse(out);
    CHECK(j["status"] == "pass");
    for (auto& c : j["checks"]) CHECK_FALSE(c["provenance"].get<std::string>().empty());
    CHECK(run({"verify", "rep", "--rho", "3"}) == 1);
    CHECK(run({"fp", "cosets", "--preset", "p3-N"}, &out) == 0);
    CHECK(json::parse(out)["info"]["index"] == 6);
    CHECK(run({"verify", "rep", "--rho", "9"}, nullptr, &err) == 2);
    CHECK(err.find("Usage") != std::string::npos);
    CHECK(run({"--frobnicate", "verify", "rep", "--rho", "2"}) == 2);
    CHECK(run({}) == 2);
    CHECK(run({"--tol", "5", "verify", "rep", "--rho", "2"}) == 2);
    CHECK(run({"--help"}, &out) == 0);

    TempDir tmp;
    std::string dir = tmp.p.string();
    CHECK(run({"--out-dir", dir.c_str(), "render", "heights", "--out", "h.csv", "--svg", "h.svg"}) == 0);
    CHECK(std::filesystem::exists(tmp.p / "h.csv"));
    CHECK(std::filesystem::exists(tmp.p / "h.svg"));
    std::string first = slurp((tmp.p / "h.csv").string());
    CHECK(run({"--out-dir", dir.c_str(), "render", "heights", "--out", "h.csv"}) == 0);
    CHECK(slurp((tmp.p / "h.csv").string()) == first);
    CHECK(run({"--out-dir", dir.c_str(), "--report", "r.json", "fp", "abelianize", "--preset", "fig8"}, &out) == 0);
    CHECK(slurp((tmp.p / "r.json").string()) == out);
    CHECK(run({"render", "heights", "--out", "/proc/nonexistent/h.csv"}) == 1);
}
