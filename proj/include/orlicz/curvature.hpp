#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "orlicz/convex_body.hpp"
#include "orlicz/orlicz_model.hpp"

namespace orlicz {

/// Principal radii per node, ascending (one value per node for n = 2).
std::vector<std::array<double, 2>> principal_radii(const ConvexBody& body);

/// K = 1 / det(hess h + h I). Throws ConvexityError if a determinant is not positive.
ScalarField gauss_curvature(const ConvexBody& body);

/// Sum of principal curvatures.
ScalarField mean_curvature(const ConvexBody& body);

/// h det(b) / r^n = h / (r^n K).
ScalarField integral_curvature_density(const ConvexBody& body);

/// phi(1/h) times the integral curvature density.
ScalarField orlicz_density(const ConvexBody& body, const PhiModel& phi);

double total_integral_curvature(const ConvexBody& body);

// Counter-clockwise arc of directions starting at angle `start`.
struct DirectionArc {
    double start = 0.0;
    double length = 0.0;
};

/// n = 2: length of the normal arc whose boundary points lie in the direction arc.
double radial_gauss_image_measure(const ConvexBody& body, const DirectionArc& arc);

/// Normal angle range {start, length} that the direction arc maps to (n = 2).
DirectionArc normal_image_arc(const ConvexBody& body, const DirectionArc& arc);

struct CurvatureReport {
    ScalarField K;
    std::vector<std::array<double, 2>> principal_radii;
    ScalarField mean_curvature;
    ScalarField density;
};

CurvatureReport curvature_report(const ConvexBody& body);

// node_index,theta,[phi,]h,K,radius_1,[radius_2,]density
void write_curvature_csv(std::ostream& out, const ConvexBody& body, const CurvatureReport& report);

}  // namespace orlicz
