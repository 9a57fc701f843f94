#include "orlicz/curvature.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "kernel_detail.hpp"

namespace orlicz {

using std::numbers::pi;

std::vector<std::array<double, 2>> principal_radii(const ConvexBody& body) {
    const auto& geo = body.geometry();
    std::vector<std::array<double, 2>> out(geo.radius_min.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = {geo.radius_min[i], geo.radius_max[i]};
    return out;
}

ScalarField gauss_curvature(const ConvexBody& body) {
    const auto& det = body.geometry().det_b;
    std::vector<double> k(det.size());
    for (std::size_t i = 0; i < det.size(); ++i) {
        if (!(det[i] > 0.0)) {
            throw ConvexityError("non-positive det(hess h + h I) at node " + std::to_string(i));
        }
        k[i] = 1.0 / det[i];
    }
    return ScalarField(body.grid_ptr(), std::move(k));
}

ScalarField mean_curvature(const ConvexBody& body) {
    const auto& geo = body.geometry();
    const bool plane = body.grid().dim() == 2;
    std::vector<double> m(geo.radius_min.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        m[i] = plane ? 1.0 / geo.radius_min[i] : 1.0 / geo.radius_min[i] + 1.0 / geo.radius_max[i];
    }
    return ScalarField(body.grid_ptr(), std::move(m));
}

ScalarField integral_curvature_density(const ConvexBody& body) { return jac_alpha_star(body); }

ScalarField orlicz_density(const ConvexBody& body, const PhiModel& phi) {
    const auto& geo = body.geometry();
    const int dim = body.grid().dim();
    std::vector<double> v(geo.radial.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double h = body.h()[i];
        v[i] = phi(1.0 / h) * h * geo.det_b[i] / detail::pow_dim(geo.radial[i], dim);
    }
    return ScalarField(body.grid_ptr(), std::move(v));
}

double total_integral_curvature(const ConvexBody& body) {
    return integrate(body.grid(), integral_curvature_density(body));
}

DirectionArc normal_image_arc(const ConvexBody& body, const DirectionArc& arc) {
    if (body.grid().dim() != 2) throw GridError("radial Gauss image measure needs n = 2");
    const SphereGrid& grid = body.grid();
    const double a0 = grid.angles(reverse_radial_gauss(body, grid.direction(arc.start)))[0];
    if (arc.length >= 2.0 * pi) return {a0, 2.0 * pi};
    const double a1 = grid.angles(reverse_radial_gauss(body, grid.direction(arc.start + arc.length)))[0];
    double length = std::fmod(a1 - a0, 2.0 * pi);
    if (length < 0.0) length += 2.0 * pi;
    return {a0, length};
}

double radial_gauss_image_measure(const ConvexBody& body, const DirectionArc& arc) {
    return normal_image_arc(body, arc).length;
}

CurvatureReport curvature_report(const ConvexBody& body) {
    return {gauss_curvature(body), principal_radii(body), mean_curvature(body),
            integral_curvature_density(body)};
}

void write_curvature_csv(std::ostream& out, const ConvexBody& body, const CurvatureReport& report) {
    const SphereGrid& grid = body.grid();
    const bool sphere = grid.dim() == 3;
    out << "node_index,theta," << (sphere ? "phi," : "") << "h,K,radius_1,"
        << (sphere ? "radius_2," : "") << "density\n";
    out << std::setprecision(17);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out << i << ',' << grid.theta(i) << ',';
        if (sphere) out << grid.phi(i) << ',';
        out << body.h()[i] << ',' << report.K[i] << ',' << report.principal_radii[i][0] << ',';
        if (sphere) out << report.principal_radii[i][1] << ',';
        out << report.density[i] << '\n';
    }
}

}  // namespace orlicz
