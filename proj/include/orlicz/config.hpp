#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "orlicz/convex_body.hpp"
#include "orlicz/flow.hpp"
#include "orlicz/orlicz_model.hpp"

namespace orlicz {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Initial body: ball(c), ellipse(a, b), offset_ball(c, v) or a body file.
struct BodySpec {
    std::string kind = "ball";
    double c = 1.0;
    double a = 1.5;
    double b = 0.7;
    Vec3 v{};
    std::filesystem::path file;
};

// "ball:1", "ellipse:1.5:0.7", "offset_ball:1:0.3:0[:0]", "file:path"
BodySpec parse_body_spec(const std::string& text);

/// Builds the body on the grid; file bodies must match the grid layout.
ConvexBody build_body(const BodySpec& spec, const GridPtr& grid);

struct RunConfig {
    int n = 2;
    int resolution = 256;

    std::string phi_kind = "reciprocal";
    double phi_p = -1.0;
    std::filesystem::path phi_table;

    std::string g_kind = "constant";
    double g_value = 1.0;
    double g_a0 = 1.0;
    std::vector<double> g_a;  // cos k theta, k = 1, 2, ...
    std::vector<double> g_b;  // sin k theta (n = 2 only)
    std::filesystem::path g_file;

    BodySpec body;
    FlowConfig flow;
    std::filesystem::path output_dir = "out";
    double uniqueness_tol = 1e-3;
};

/// Flat key=value text; '#' starts a comment. Unknown keys are errors.
std::map<std::string, std::string> parse_key_values(std::istream& in);

RunConfig parse_config(const std::map<std::string, std::string>& kv,
                       const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

GridPtr make_grid(const RunConfig& config);
PhiModel make_phi(const RunConfig& config);
/// Synthesizes g; harmonic series are checked for positivity on a 4x oversampled grid.
DensityField make_density(const RunConfig& config, const GridPtr& grid);

}  // namespace orlicz
