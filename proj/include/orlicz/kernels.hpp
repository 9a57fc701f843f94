#pragma once

// Per-node kernels. Every kernel exists twice with identical signatures:
// kernels::serial (plain loops, the reference) and kernels::omp (OpenMP
// parallel loops). The library calls the omp variants; tests check that both
// agree and bench/ compares their speed.

#include <cstddef>
#include <span>
#include <vector>

#include "orlicz/orlicz_model.hpp"
#include "orlicz/sphere_grid.hpp"

namespace orlicz {

// Argument fed to phi in the flow speed: r = |X| or 1/h.
enum class PhiArgument { radial, reciprocal_support };

/// Frame derivatives of a scalar field. For n = 2 only d1 and h11 are used.
struct FrameDerivatives {
    std::vector<double> d1, d2;
    std::vector<double> h11, h12, h22;

    void resize(std::size_t n);
};

/// Pointwise geometry of a support function h.
struct SupportGeometry {
    FrameDerivatives derivatives;
    std::vector<double> radial;       // r = sqrt(|grad h|^2 + h^2)
    std::vector<double> det_b;        // det(hess h + h I)
    std::vector<double> radius_min;   // smallest eigenvalue of b
    std::vector<double> radius_max;   // largest eigenvalue of b (== radius_min for n = 2)

    void resize(std::size_t n);
};

/// Pointwise flow quantities; integrals are weighted sums of these.
struct FlowFields {
    std::vector<double> speed;        // dh/dt = h - g r^n K / phi(a)
    std::vector<double> residual;     // h phi(a) det b / r^n - g
    std::vector<double> lyapunov;     // log h - varphi(r) h det b / (r^n g)
    std::vector<double> dissipation;  // -(G K - h)^2 / (h G K), G = g r^n / phi(a)
    std::vector<double> stiffness;    // Gershgorin bound of the linearized stencil

    void resize(std::size_t n);
};

struct FlowInputs {
    std::span<const double> h;
    std::span<const double> g;
    const PhiModel* phi = nullptr;
    PhiArgument mode = PhiArgument::radial;
    // Drop longitude terms from the stiffness bound (n = 3, longitude-independent data).
    bool axisymmetric = false;
};

namespace kernels {

namespace serial {
void frame_derivatives(const SphereGrid& grid, std::span<const double> f, FrameDerivatives& out);
void support_geometry(const SphereGrid& grid, std::span<const double> h, SupportGeometry& out);
void flow_fields(const SphereGrid& grid, const SupportGeometry& geo, const FlowInputs& in,
                 FlowFields& out);
double weighted_sum(std::span<const double> w, std::span<const double> f);
}  // namespace serial

namespace omp {
void frame_derivatives(const SphereGrid& grid, std::span<const double> f, FrameDerivatives& out);
void support_geometry(const SphereGrid& grid, std::span<const double> h, SupportGeometry& out);
void flow_fields(const SphereGrid& grid, const SupportGeometry& geo, const FlowInputs& in,
                 FlowFields& out);
// Blocked reduction: fixed block partition, so the result does not depend on thread count.
double weighted_sum(std::span<const double> w, std::span<const double> f);
}  // namespace omp

}  // namespace kernels

/// Caps the OpenMP team size from ORLICZ_FLOW_THREADS if set; returns the active cap.
int configure_threads_from_env();

}  // namespace orlicz
