#pragma once

#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <vector>

#include "orlicz/kernels.hpp"
#include "orlicz/sphere_grid.hpp"

namespace orlicz {

class ConvexityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct ConvexityReport {
    double min_h = 0.0;
    double convexity_margin = 0.0;  // min eigenvalue of hess h + h I over nodes
    bool accepted() const { return min_h > 0.0 && convexity_margin > 0.0; }
};

ConvexityReport validate(const ScalarField& h);

/**
 * A uniformly convex body containing the origin, given by its support function
 * sampled on a grid. Construction rejects h <= 0 or a non-positive convexity
 * margin. Immutable; the pointwise geometry is computed once and shared by copies.
 */
class ConvexBody {
  public:
    explicit ConvexBody(ScalarField h);

    const SphereGrid& grid() const { return h_.grid(); }
    const GridPtr& grid_ptr() const { return h_.grid_ptr(); }
    const ScalarField& h() const { return h_; }
    std::span<const double> values() const { return h_.values(); }
    const SupportGeometry& geometry() const { return *geometry_; }
    double convexity_margin() const { return report_.convexity_margin; }
    double min_h() const { return report_.min_h; }

  private:
    ScalarField h_;
    std::shared_ptr<const SupportGeometry> geometry_;
    ConvexityReport report_;
};

// Presets. For n = 3 the ellipse preset is the spheroid h = sqrt(a^2 cos^2 theta + b^2 sin^2 theta)
// in the polar angle.
ConvexBody make_ball(GridPtr grid, double radius);
ConvexBody make_ellipse(GridPtr grid, double a, double b);
ConvexBody make_offset_ball(GridPtr grid, double radius, const Vec3& offset);

/// X(x) = h(x) x + grad h(x), the boundary point with outer normal x.
std::vector<Vec3> embedding(const ConvexBody& body);

/// r = sqrt(|grad h|^2 + h^2) = |X|.
ScalarField radial_norm_field(const ConvexBody& body);

/// Result of maximizing (xi . v) / h(v) over normals v with local polynomial refinement.
struct SupportMaximizer {
    double value = 0.0;  // 1 / rho(xi)
    Vec3 normal{};       // refined maximizer, unit
    std::size_t node = 0;  // discrete maximizer (lowest index on ties)
};

SupportMaximizer support_maximizer(const ConvexBody& body, const Vec3& xi);

/// Radial function rho(xi).
double radial_eval(const ConvexBody& body, const Vec3& xi);

/// Outer unit normal at the boundary point rho(xi) xi.
Vec3 reverse_radial_gauss(const ConvexBody& body, const Vec3& xi);

/// Radial direction X(x)/|X(x)| of the boundary point with normal node x.
Vec3 radial_gauss_map(const ConvexBody& body, std::size_t node);

/// Polar body: support function 1/rho sampled at the nodes. Throws ConvexityError
/// when the sampled polar fails validation (grid too coarse).
ConvexBody polar_body(const ConvexBody& body);

/// |Jac alpha| = r^n K / h and |Jac alpha*| = h / (r^n K), both at the nodes.
ScalarField jac_alpha(const ConvexBody& body);
ScalarField jac_alpha_star(const ConvexBody& body);

// Body file: header "n=<2|3> resolution=<N>", then "theta [phi] h" per node, 17 digits.
void write_body(std::ostream& out, const ScalarField& h);
ScalarField read_body(std::istream& in);

}  // namespace orlicz
