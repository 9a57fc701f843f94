#include "orlicz/sphere_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kernel_detail.hpp"
#include "orlicz/kernels.hpp"

namespace orlicz {

using std::numbers::pi;

Vec3 normalized(const Vec3& a) {
    const double len = norm(a);
    return {a[0] / len, a[1] / len, a[2] / len};
}

SphereGrid::SphereGrid(int dim, int resolution) : dim_(dim), resolution_(resolution) {
    if (dim != 2 && dim != 3) {
        throw GridError("unsupported dimension " + std::to_string(dim) + " (expected 2 or 3)");
    }
    if (resolution < 16 || resolution % 2 != 0) {
        throw GridError("resolution too small or odd: " + std::to_string(resolution) +
                        " (need an even count >= 16)");
    }
    if (dim == 2) {
        rows_ = 1;
        columns_ = resolution;
        theta_step_ = 2.0 * pi / resolution;
        phi_step_ = 0.0;
        row_theta_ = {0.0};
        row_sin_ = {1.0};
        row_cos_ = {0.0};
        nodes_.reserve(resolution);
        for (int k = 0; k < resolution; ++k) {
            const double t = k * theta_step_;
            nodes_.push_back({std::cos(t), std::sin(t), 0.0});
        }
        weights_.assign(resolution, theta_step_);
        return;
    }

    rows_ = resolution;
    columns_ = 2 * resolution;
    theta_step_ = pi / resolution;
    phi_step_ = pi / resolution;
    for (int j = 0; j < rows_; ++j) {
        const double t = (j + 0.5) * theta_step_;
        row_theta_.push_back(t);
        row_sin_.push_back(std::sin(t));
        row_cos_.push_back(std::cos(t));
    }
    for (int k = 0; k < columns_; ++k) column_phi_.push_back(k * phi_step_);

    nodes_.reserve(static_cast<std::size_t>(rows_) * columns_);
    weights_.reserve(nodes_.capacity());
    for (int j = 0; j < rows_; ++j) {
        // exact area of the latitude band cell
        const double band = std::cos(j * theta_step_) - std::cos((j + 1) * theta_step_);
        for (int k = 0; k < columns_; ++k) {
            const double p = column_phi_[k];
            nodes_.push_back({row_sin_[j] * std::cos(p), row_sin_[j] * std::sin(p), row_cos_[j]});
            weights_.push_back(band * phi_step_);
        }
    }
}

double SphereGrid::theta(std::size_t node) const {
    if (dim_ == 2) return static_cast<double>(node) * theta_step_;
    return row_theta_[row_of(node)];
}

double SphereGrid::phi(std::size_t node) const {
    if (dim_ == 2) return 0.0;
    return column_phi_[column_of(node)];
}

double SphereGrid::measure() const { return dim_ == 2 ? 2.0 * pi : 4.0 * pi; }

Vec3 SphereGrid::frame_vector(std::size_t node, int axis) const {
    if (dim_ == 2) {
        const Vec3& x = nodes_[node];
        return {-x[1], x[0], 0.0};
    }
    const int j = row_of(node);
    const double p = column_phi_[column_of(node)];
    if (axis == 0) {
        return {row_cos_[j] * std::cos(p), row_cos_[j] * std::sin(p), -row_sin_[j]};
    }
    return {-std::sin(p), std::cos(p), 0.0};
}

Vec3 SphereGrid::lift(std::size_t node, double t1, double t2) const {
    const Vec3 e1 = frame_vector(node, 0);
    if (dim_ == 2) return {t1 * e1[0], t1 * e1[1], 0.0};
    const Vec3 e2 = frame_vector(node, 1);
    return {t1 * e1[0] + t2 * e2[0], t1 * e1[1] + t2 * e2[1], t1 * e1[2] + t2 * e2[2]};
}

Vec3 SphereGrid::direction(double theta, double phi) const {
    if (dim_ == 2) return {std::cos(theta), std::sin(theta), 0.0};
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

std::array<double, 2> SphereGrid::angles(const Vec3& u) const {
    double azimuth = std::atan2(u[1], u[0]);
    if (azimuth < 0.0) azimuth += 2.0 * pi;
    if (dim_ == 2) return {azimuth, 0.0};
    const double len = norm(u);
    return {std::acos(std::clamp(u[2] / len, -1.0, 1.0)), azimuth};
}

GridPtr build_grid(int n, int resolution) { return std::make_shared<const SphereGrid>(n, resolution); }

ScalarField::ScalarField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw GridError("scalar field without grid");
    if (values_.size() != grid_->size()) {
        throw GridError("scalar field has " + std::to_string(values_.size()) + " values for " +
                        std::to_string(grid_->size()) + " nodes");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw GridError("scalar field value is not finite");
    }
}

ScalarField ScalarField::constant(GridPtr grid, double value) {
    const std::size_t n = grid->size();
    return ScalarField(std::move(grid), std::vector<double>(n, value));
}

ScalarField ScalarField::sample(GridPtr grid, const std::function<double(const Vec3&)>& f) {
    std::vector<double> v;
    v.reserve(grid->size());
    for (const Vec3& x : grid->nodes()) v.push_back(f(x));
    return ScalarField(std::move(grid), std::move(v));
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }
double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

void require_same_grid(const SphereGrid& a, const SphereGrid& b) {
    if (!a.same_layout(b)) throw GridError("grid mismatch");
}

TangentField spherical_gradient(const SphereGrid& grid, const ScalarField& f) {
    require_same_grid(grid, f.grid());
    FrameDerivatives d;
    kernels::omp::frame_derivatives(grid, f.values(), d);
    return {f.grid_ptr(), std::move(d.d1), std::move(d.d2)};
}

SymmetricMatrixField spherical_hessian(const SphereGrid& grid, const ScalarField& f) {
    require_same_grid(grid, f.grid());
    FrameDerivatives d;
    kernels::omp::frame_derivatives(grid, f.values(), d);
    return {f.grid_ptr(), std::move(d.h11), std::move(d.h12), std::move(d.h22)};
}

double integrate(const SphereGrid& grid, const ScalarField& f) {
    require_same_grid(grid, f.grid());
    return kernels::omp::weighted_sum(grid.weights(), f.values());
}

double integrate(const SphereGrid& grid, std::span<const double> f) {
    if (f.size() != grid.size()) throw GridError("grid mismatch");
    return kernels::omp::weighted_sum(grid.weights(), f);
}

double integrate_arc(const SphereGrid& grid, std::span<const double> f, double start, double length) {
    if (grid.dim() != 2) throw GridError("integrate_arc needs n = 2");
    if (f.size() != grid.size()) throw GridError("grid mismatch");
    const int n = grid.columns();
    const double step = grid.theta_step();
    std::vector<double> prefix(n + 1, 0.0);
    for (int k = 0; k < n; ++k) {
        prefix[k + 1] = prefix[k] + 0.5 * step * (f[k] + f[(k + 1) % n]);
    }
    const auto cumulative = [&](double theta) {
        const double turns = std::floor(theta / (2.0 * pi));
        const double local = theta - turns * 2.0 * pi;
        const double p = local / step;
        int k = std::min(static_cast<int>(std::floor(p)), n - 1);
        const double t = p - k;
        const double f0 = f[k];
        const double f1 = f[(k + 1) % n];
        return turns * prefix[n] + prefix[k] + step * (t * f0 + 0.5 * t * t * (f1 - f0));
    };
    return cumulative(start + length) - cumulative(start);
}

double interpolate(const SphereGrid& grid, std::span<const double> f, const Vec3& u, bool log_values) {
    if (f.size() != grid.size()) throw GridError("grid mismatch");
    const auto value = [&](double v) { return log_values ? std::log(v) : v; };
    const auto angles = grid.angles(u);
    double result;
    if (grid.dim() == 2) {
        const int n = grid.columns();
        const double p = angles[0] / grid.theta_step();
        const int k = static_cast<int>(std::floor(p)) % n;
        const double t = p - std::floor(p);
        result = (1.0 - t) * value(f[k]) + t * value(f[(k + 1) % n]);
    } else {
        const detail::Stencil s(grid);
        const double q = angles[0] / grid.theta_step() - 0.5;
        const int j = static_cast<int>(std::floor(q));
        const double tq = q - j;
        const double p = angles[1] / grid.phi_step();
        const int k = static_cast<int>(std::floor(p));
        const double tp = p - k;
        const double f00 = value(s.at(f.data(), j, k));
        const double f01 = value(s.at(f.data(), j, k + 1));
        const double f10 = value(s.at(f.data(), j + 1, k));
        const double f11 = value(s.at(f.data(), j + 1, k + 1));
        result = (1.0 - tq) * ((1.0 - tp) * f00 + tp * f01) + tq * ((1.0 - tp) * f10 + tp * f11);
    }
    return log_values ? std::exp(result) : result;
}

double interpolate_cubic(const SphereGrid& grid, std::span<const double> f, const Vec3& u) {
    if (grid.dim() != 2) throw GridError("interpolate_cubic needs n = 2");
    if (f.size() != grid.size()) throw GridError("grid mismatch");
    const int n = grid.columns();
    const double p = grid.angles(u)[0] / grid.theta_step();
    const int k = static_cast<int>(std::floor(p));
    const double t = p - k;
    const auto at = [&](int m) { return f[((k + m) % n + n) % n]; };
    // nodes at -1, 0, 1, 2 relative to k
    return at(-1) * (-t * (t - 1.0) * (t - 2.0) / 6.0) + at(0) * ((t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0) +
           at(1) * (-(t + 1.0) * t * (t - 2.0) / 2.0) + at(2) * ((t + 1.0) * t * (t - 1.0) / 6.0);
}

}  // namespace orlicz
