#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "crs/crcomplex.hpp"

namespace crs {

// Bad configuration or arguments.
struct HarnessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Name of the environment variable that overrides RunConfig::out_dir.
inline constexpr const char* kOutDirEnv = "CRS_OUT_DIR";

struct RunConfig {
    unsigned precision_bits = 53;
    double tol = kDefaultTol;
    int n_edge = 64, n_fiber = 64;
    int n_slices = 16;
    int max_cosets = 100000;
    std::string out_dir = ".";

    void validate() const;  // throws HarnessError
    // out_dir, unless the environment variable is set and nonempty
    std::string effective_out_dir() const;
    // relative paths are placed under effective_out_dir()
    std::string resolve(const std::string& path) const;
    SampleConfig sample() const;
    PipelineConfig pipeline() const;
};

enum class Status { Pass, Fail, Inconclusive };
std::string to_string(Status s);

struct CheckReport {
    std::string name;
    Status status = Status::Pass;
    double residual = 0.0;
    nlohmann::json witness;  // null only for passing checks
    std::string provenance;  // which claim the check reproduces

    // Throws HarnessError when a failing or inconclusive check has no witness.
    static CheckReport make(std::string name, Status status, double residual, nlohmann::json witness,
                            std::string provenance);
    static CheckReport boolean(std::string name, bool pass, std::string detail, std::string provenance);
    nlohmann::json to_json() const;
};

struct RunReport {
    std::string command;
    RunConfig config;
    std::vector<CheckReport> checks;
    nlohmann::json info = nlohmann::json::object();

    bool pass() const;  // all checks pass
    nlohmann::json to_json() const;
};

// Each returns its checks in a stable order.
RunReport verify_rep(int rho, const RunConfig& cfg);
RunReport verify_picard(int d, const RunConfig& cfg);
RunReport fp_abelianize(const std::string& preset_name, const RunConfig& cfg);
RunReport fp_cosets(const std::string& preset_name, const RunConfig& cfg);
RunReport fp_subgroup(const std::string& preset_name, const RunConfig& cfg);
RunReport complex_build(const RunConfig& cfg);
RunReport complex_check_faces(const RunConfig& cfg);
RunReport complex_check_edges(const RunConfig& cfg);
RunReport complex_report(const RunConfig& cfg);

// Vertices carry exact parts as integers over a common denominator when the
// point lies in Q(i sqrt7) x sqrt7 Q, and decimal strings with a precision tag.
nlohmann::json serialize_complex(const Complex& C, unsigned precision_bits = 53);

// z-plane projection of the faces; deterministic for fixed inputs.
std::string render_projection(const std::vector<const FaceDef*>& faces, const VertexSet* labels,
                              const SampleConfig& cfg);
std::string render_heights_csv(const HeightTable& H);
std::string render_heights_svg(const HeightTable& H);

// Writes text to path, creating parent directories; throws IoError.
void write_file(const std::string& path, const std::string& text);

// Exit code 0 when every requested check passes, 1 on a failing check, 2 on usage errors.
int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace crs
