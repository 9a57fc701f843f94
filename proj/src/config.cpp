#include "orlicz/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

namespace orlicz {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(s);
    while (std::getline(in, part, sep)) parts.push_back(trim(part));
    return parts;
}

double to_double(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + text + "'");
    }
}

long to_long(const std::string& key, const std::string& text) {
    const double v = to_double(key, text);
    if (v != std::floor(v) || std::abs(v) > 9e15) throw ConfigError(key + ": expected an integer, got '" + text + "'");
    return static_cast<long>(v);
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    if (trim(text).empty()) return out;
    for (const auto& item : split(text, ',')) out.push_back(to_double(key, item));
    return out;
}

Vec3 to_vec(const std::string& key, const std::vector<double>& v) {
    if (v.size() < 2 || v.size() > 3) throw ConfigError(key + ": expected 2 or 3 components");
    return {v[0], v[1], v.size() == 3 ? v[2] : 0.0};
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    if (path.is_relative() && !base.empty()) path = base / path;
    return path;
}

}  // namespace

BodySpec parse_body_spec(const std::string& text) {
    const auto parts = split(text, ':');
    BodySpec spec;
    if (parts.empty() || parts[0].empty()) throw ConfigError("empty body spec");
    spec.kind = parts[0];
    const auto nums = [&](std::size_t lo, std::size_t hi) {
        if (parts.size() - 1 < lo || parts.size() - 1 > hi) {
            throw ConfigError("body spec '" + text + "': wrong number of parameters");
        }
        std::vector<double> v;
        for (std::size_t i = 1; i < parts.size(); ++i) v.push_back(to_double("body spec", parts[i]));
        return v;
    };
    if (spec.kind == "ball") {
        spec.c = nums(1, 1)[0];
    } else if (spec.kind == "ellipse") {
        const auto v = nums(2, 2);
        spec.a = v[0];
        spec.b = v[1];
    } else if (spec.kind == "offset_ball") {
        const auto v = nums(3, 4);
        spec.c = v[0];
        spec.v = to_vec("body spec", {v.begin() + 1, v.end()});
    } else if (spec.kind == "file") {
        if (parts.size() < 2) throw ConfigError("body spec '" + text + "': missing path");
        spec.file = text.substr(text.find(':') + 1);
    } else {
        throw ConfigError("unknown body kind '" + spec.kind + "'");
    }
    return spec;
}

ConvexBody build_body(const BodySpec& spec, const GridPtr& grid) {
    if (spec.kind == "ball") return make_ball(grid, spec.c);
    if (spec.kind == "ellipse") return make_ellipse(grid, spec.a, spec.b);
    if (spec.kind == "offset_ball") return make_offset_ball(grid, spec.c, spec.v);
    if (spec.kind == "file") {
        std::ifstream in(spec.file);
        if (!in) throw ConfigError("cannot open body file " + spec.file.string());
        ScalarField h = read_body(in);
        if (!h.grid().same_layout(*grid)) throw ConfigError("body file grid does not match grid.n/grid.resolution");
        return ConvexBody(ScalarField(grid, std::vector<double>(h.values().begin(), h.values().end())));
    }
    throw ConfigError("unknown body kind '" + spec.kind + "'");
}

std::map<std::string, std::string> parse_key_values(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(number) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("line " + std::to_string(number) + ": empty key");
        if (kv.count(key)) throw ConfigError("duplicate key " + key);
        kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

RunConfig parse_config(const std::map<std::string, std::string>& kv, const std::filesystem::path& base_dir) {
    RunConfig c;
    const std::map<std::string, std::function<void(const std::string&, const std::string&)>> setters{
        {"grid.n", [&](auto& k, auto& v) { c.n = static_cast<int>(to_long(k, v)); }},
        {"grid.resolution", [&](auto& k, auto& v) { c.resolution = static_cast<int>(to_long(k, v)); }},
        {"phi.kind", [&](auto&, auto& v) { c.phi_kind = v; }},
        {"phi.p", [&](auto& k, auto& v) { c.phi_p = to_double(k, v); }},
        {"phi.table", [&](auto&, auto& v) { c.phi_table = resolve(base_dir, v); }},
        {"g.kind", [&](auto&, auto& v) { c.g_kind = v; }},
        {"g.value", [&](auto& k, auto& v) { c.g_value = to_double(k, v); }},
        {"g.a0", [&](auto& k, auto& v) { c.g_a0 = to_double(k, v); }},
        {"g.a", [&](auto& k, auto& v) { c.g_a = to_list(k, v); }},
        {"g.b", [&](auto& k, auto& v) { c.g_b = to_list(k, v); }},
        {"g.file", [&](auto&, auto& v) { c.g_file = resolve(base_dir, v); }},
        {"body.kind", [&](auto&, auto& v) { c.body.kind = v; }},
        {"body.c", [&](auto& k, auto& v) { c.body.c = to_double(k, v); }},
        {"body.a", [&](auto& k, auto& v) { c.body.a = to_double(k, v); }},
        {"body.b", [&](auto& k, auto& v) { c.body.b = to_double(k, v); }},
        {"body.v", [&](auto& k, auto& v) { c.body.v = to_vec(k, to_list(k, v)); }},
        {"body.file", [&](auto&, auto& v) { c.body.file = resolve(base_dir, v); }},
        {"flow.mode",
         [&](auto& k, auto& v) {
             if (v == "radial") c.flow.mode = PhiArgument::radial;
             else if (v == "reciprocal_support") c.flow.mode = PhiArgument::reciprocal_support;
             else throw ConfigError(k + ": expected radial or reciprocal_support");
         }},
        {"flow.dt_init", [&](auto& k, auto& v) { c.flow.dt_init = to_double(k, v); }},
        {"flow.dt_min", [&](auto& k, auto& v) { c.flow.dt_min = to_double(k, v); }},
        {"flow.shrink", [&](auto& k, auto& v) { c.flow.shrink = to_double(k, v); }},
        {"flow.step_cap", [&](auto& k, auto& v) { c.flow.step_cap = to_double(k, v); }},
        {"flow.tol_speed", [&](auto& k, auto& v) { c.flow.tol_speed = to_double(k, v); }},
        {"flow.tol_residual", [&](auto& k, auto& v) { c.flow.tol_residual = to_double(k, v); }},
        {"flow.max_steps", [&](auto& k, auto& v) { c.flow.max_steps = to_long(k, v); }},
        {"flow.t_end", [&](auto& k, auto& v) { c.flow.t_end = to_double(k, v); }},
        {"flow.cfl", [&](auto& k, auto& v) { c.flow.cfl = to_double(k, v); }},
        {"output.dir", [&](auto&, auto& v) { c.output_dir = resolve(base_dir, v); }},
        {"output.stride", [&](auto& k, auto& v) { c.flow.stride = static_cast<int>(to_long(k, v)); }},
        {"uniqueness.tol", [&](auto& k, auto& v) { c.uniqueness_tol = to_double(k, v); }},
    };
    for (const auto& [key, value] : kv) {
        const auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError("unknown key " + key);
        it->second(key, value);
    }

    if (c.n != 2 && c.n != 3) throw ConfigError("grid.n must be 2 or 3");
    if (c.resolution < 16 || c.resolution % 2 != 0) throw ConfigError("grid.resolution must be even and >= 16");
    static const char* phi_kinds[] = {"power", "reciprocal", "custom", "tabulated"};
    if (std::find(std::begin(phi_kinds), std::end(phi_kinds), c.phi_kind) == std::end(phi_kinds)) {
        throw ConfigError("phi.kind must be power, reciprocal, custom or tabulated");
    }
    if ((c.phi_kind == "custom" || c.phi_kind == "tabulated") && c.phi_table.empty()) {
        throw ConfigError("phi.kind=" + c.phi_kind + " needs phi.table");
    }
    if (c.g_kind != "constant" && c.g_kind != "harmonic" && c.g_kind != "file") {
        throw ConfigError("g.kind must be constant, harmonic or file");
    }
    if (c.g_kind == "file" && c.g_file.empty()) throw ConfigError("g.kind=file needs g.file");
    if (c.g_kind == "harmonic" && c.n == 3 && !c.g_b.empty()) {
        throw ConfigError("g.b (sine terms) is only available for n = 2");
    }
    if (c.body.kind == "file" && c.body.file.empty()) throw ConfigError("body.kind=file needs body.file");
    if (c.body.kind != "ball" && c.body.kind != "ellipse" && c.body.kind != "offset_ball" && c.body.kind != "file") {
        throw ConfigError("unknown body.kind '" + c.body.kind + "'");
    }
    if (!(c.uniqueness_tol > 0.0)) throw ConfigError("uniqueness.tol must be positive");
    try {
        c.flow.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    return parse_config(parse_key_values(in), path.parent_path());
}

GridPtr make_grid(const RunConfig& config) { return build_grid(config.n, config.resolution); }

PhiModel make_phi(const RunConfig& config) {
    try {
        if (config.phi_kind == "power") return PhiModel::power(config.phi_p);
        if (config.phi_kind == "reciprocal") return PhiModel::reciprocal();
        return PhiModel::from_table_file(config.phi_table);
    } catch (const PhiError& e) {
        throw ConfigError(std::string("phi: ") + e.what());
    }
}

DensityField make_density(const RunConfig& config, const GridPtr& grid) {
    if (config.g_kind == "constant") {
        if (!(config.g_value > 0.0)) throw ConfigError("g.value must be positive");
        return DensityField(ScalarField::constant(grid, config.g_value));
    }
    if (config.g_kind == "file") {
        std::ifstream in(config.g_file);
        if (!in) throw ConfigError("cannot open g file " + config.g_file.string());
        ScalarField g = read_body(in);
        if (!g.grid().same_layout(*grid)) throw ConfigError("g file grid does not match grid.n/grid.resolution");
        if (!(g.min() > 0.0)) throw ConfigError("g file has non-positive values");
        return DensityField(ScalarField(grid, std::vector<double>(g.values().begin(), g.values().end())));
    }

    const auto series = [&](double theta) {
        double v = config.g_a0;
        for (std::size_t k = 0; k < config.g_a.size(); ++k) v += config.g_a[k] * std::cos((k + 1) * theta);
        for (std::size_t k = 0; k < config.g_b.size(); ++k) v += config.g_b[k] * std::sin((k + 1) * theta);
        return v;
    };
    const double span = config.n == 2 ? 2.0 * std::numbers::pi : std::numbers::pi;
    const int samples = 4 * (config.n == 2 ? grid->columns() : grid->rows());
    for (int i = 0; i <= samples; ++i) {
        const double theta = span * i / samples;
        if (!(series(theta) > 0.0)) {
            std::ostringstream os;
            os << "harmonic g is not positive at theta = " << theta << " (value " << series(theta) << ")";
            throw ConfigError(os.str());
        }
    }
    std::vector<double> values(grid->size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = series(grid->theta(i));
    return DensityField(ScalarField(grid, std::move(values)));
}

}  // namespace orlicz
