#include "kernel_detail.hpp"

namespace orlicz {

void FrameDerivatives::resize(std::size_t n) {
    d1.assign(n, 0.0);
    d2.assign(n, 0.0);
    h11.assign(n, 0.0);
    h12.assign(n, 0.0);
    h22.assign(n, 0.0);
}

void SupportGeometry::resize(std::size_t n) {
    derivatives.resize(n);
    radial.assign(n, 0.0);
    det_b.assign(n, 0.0);
    radius_min.assign(n, 0.0);
    radius_max.assign(n, 0.0);
}

void FlowFields::resize(std::size_t n) {
    speed.assign(n, 0.0);
    residual.assign(n, 0.0);
    lyapunov.assign(n, 0.0);
    dissipation.assign(n, 0.0);
    stiffness.assign(n, 0.0);
}

namespace kernels::serial {

void frame_derivatives(const SphereGrid& grid, std::span<const double> f, FrameDerivatives& out) {
    const detail::Stencil s(grid);
    const std::size_t n = grid.size();
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        detail::store(out, i, detail::derivatives_at(s, f.data(), i));
    }
}

void support_geometry(const SphereGrid& grid, std::span<const double> h, SupportGeometry& out) {
    const detail::Stencil s(grid);
    const std::size_t n = grid.size();
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        detail::geometry_at(s, h.data(), i, out);
    }
}

void flow_fields(const SphereGrid& grid, const SupportGeometry& geo, const FlowInputs& in,
                 FlowFields& out) {
    const detail::Stencil s(grid);
    const std::size_t n = grid.size();
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        detail::flow_at(s, geo, in, i, out);
    }
}

double weighted_sum(std::span<const double> w, std::span<const double> f) {
    double sum = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) sum += w[i] * f[i];
    return sum;
}

}  // namespace kernels::serial
}  // namespace orlicz
