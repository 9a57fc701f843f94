#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace orlicz {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
Vec3 normalized(const Vec3& a);

class GridError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/**
 * Discretization of S^{n-1} for n = 2 (circle) and n = 3 (sphere).
 *
 * n = 2: nodes theta_k = 2*pi*k/N, k = 0..N-1, uniform weights 2*pi/N.
 * n = 3: M cell-centred latitudes theta_j = (j + 1/2)*pi/M and 2M longitudes
 *        phi_k = k*pi/M. Node index is j*2M + k. Weights are exact cell areas.
 *
 * The orthonormal tangent frame is e1 = d/dtheta and (n = 3) e2 = d/dphi / sin(theta).
 */
class SphereGrid {
  public:
    SphereGrid(int dim, int resolution);

    int dim() const { return dim_; }
    int resolution() const { return resolution_; }
    std::size_t size() const { return nodes_.size(); }

    // n = 2: 1 row of N nodes. n = 3: M rows of 2M nodes.
    int rows() const { return rows_; }
    int columns() const { return columns_; }
    std::size_t index(int row, int column) const {
        return static_cast<std::size_t>(row) * columns_ + column;
    }
    int row_of(std::size_t node) const { return static_cast<int>(node / columns_); }
    int column_of(std::size_t node) const { return static_cast<int>(node % columns_); }

    // Angular step of theta (n = 2: 2*pi/N, n = 3: pi/M) and of phi (n = 3 only).
    double theta_step() const { return theta_step_; }
    double phi_step() const { return phi_step_; }

    double theta(std::size_t node) const;
    double phi(std::size_t node) const;
    double row_theta(int row) const { return row_theta_[row]; }
    double row_sin(int row) const { return row_sin_[row]; }
    double row_cos(int row) const { return row_cos_[row]; }

    std::span<const Vec3> nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }
    const Vec3& node(std::size_t i) const { return nodes_[i]; }

    // 2*pi (n = 2) or 4*pi (n = 3).
    double measure() const;

    // Ambient image of frame vector e_axis (axis 0 or 1) at a node.
    Vec3 frame_vector(std::size_t node, int axis) const;
    // Ambient tangent vector with frame components (t1, t2).
    Vec3 lift(std::size_t node, double t1, double t2) const;

    Vec3 direction(double theta, double phi = 0.0) const;
    // Inverse of direction(): returns {theta, phi} (phi = 0 for n = 2, theta in [0, 2*pi)).
    std::array<double, 2> angles(const Vec3& u) const;

    bool same_layout(const SphereGrid& other) const {
        return dim_ == other.dim_ && resolution_ == other.resolution_;
    }

  private:
    int dim_;
    int resolution_;
    int rows_;
    int columns_;
    double theta_step_;
    double phi_step_;
    std::vector<double> row_theta_, row_sin_, row_cos_;
    std::vector<double> column_phi_;
    std::vector<Vec3> nodes_;
    std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const SphereGrid>;

GridPtr build_grid(int n, int resolution);

/// Real samples, one per grid node.
class ScalarField {
  public:
    ScalarField(GridPtr grid, std::vector<double> values);

    static ScalarField constant(GridPtr grid, double value);
    static ScalarField sample(GridPtr grid, const std::function<double(const Vec3&)>& f);

    const GridPtr& grid_ptr() const { return grid_; }
    const SphereGrid& grid() const { return *grid_; }
    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

    double min() const;
    double max() const;
    double max_abs() const;

  private:
    GridPtr grid_;
    std::vector<double> values_;
};

/// Tangent vector field in the orthonormal frame (c2 is zero for n = 2).
struct TangentField {
    GridPtr grid;
    std::vector<double> c1, c2;
};

/// Symmetric frame matrix field; only m11 is meaningful for n = 2.
struct SymmetricMatrixField {
    GridPtr grid;
    std::vector<double> m11, m12, m22;
};

void require_same_grid(const SphereGrid& a, const SphereGrid& b);

TangentField spherical_gradient(const SphereGrid& grid, const ScalarField& f);
SymmetricMatrixField spherical_hessian(const SphereGrid& grid, const ScalarField& f);
double integrate(const SphereGrid& grid, const ScalarField& f);
double integrate(const SphereGrid& grid, std::span<const double> f);

// n = 2 only: integral of the periodic linear interpolant of f over [start, start + length].
double integrate_arc(const SphereGrid& grid, std::span<const double> f, double start, double length);

// n = 2: periodic linear interpolation at angle theta. n = 3: bilinear in (theta, phi)
// with the pole ghost rows. With log_values the interpolation runs on log f (f > 0).
double interpolate(const SphereGrid& grid, std::span<const double> f, const Vec3& u,
                   bool log_values = false);

// n = 2 only: periodic four-point Lagrange interpolation at the angle of u.
double interpolate_cubic(const SphereGrid& grid, std::span<const double> f, const Vec3& u);

}  // namespace orlicz
