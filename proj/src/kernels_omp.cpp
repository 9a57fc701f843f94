#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "kernel_detail.hpp"

namespace orlicz {

namespace {
// Below this node count the team start-up costs more than the loop.
constexpr std::ptrdiff_t kParallelThreshold = 2048;
constexpr std::ptrdiff_t kBlock = 1024;
}  // namespace

namespace kernels::omp {

void frame_derivatives(const SphereGrid& grid, std::span<const double> f, FrameDerivatives& out) {
    const detail::Stencil s(grid);
    const auto n = static_cast<std::ptrdiff_t>(grid.size());
    out.resize(grid.size());
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        detail::store(out, i, detail::derivatives_at(s, f.data(), i));
    }
}

void support_geometry(const SphereGrid& grid, std::span<const double> h, SupportGeometry& out) {
    const detail::Stencil s(grid);
    const auto n = static_cast<std::ptrdiff_t>(grid.size());
    out.resize(grid.size());
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        detail::geometry_at(s, h.data(), i, out);
    }
}

void flow_fields(const SphereGrid& grid, const SupportGeometry& geo, const FlowInputs& in,
                 FlowFields& out) {
    const detail::Stencil s(grid);
    const auto n = static_cast<std::ptrdiff_t>(grid.size());
    out.resize(grid.size());
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        detail::flow_at(s, geo, in, i, out);
    }
}

double weighted_sum(std::span<const double> w, std::span<const double> f) {
    const auto n = static_cast<std::ptrdiff_t>(w.size());
    const std::ptrdiff_t blocks = (n + kBlock - 1) / kBlock;
    std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
    for (std::ptrdiff_t b = 0; b < blocks; ++b) {
        const std::ptrdiff_t end = std::min(n, (b + 1) * kBlock);
        double sum = 0.0;
        for (std::ptrdiff_t i = b * kBlock; i < end; ++i) sum += w[i] * f[i];
        partial[b] = sum;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

}  // namespace kernels::omp

int configure_threads_from_env() {
#ifdef _OPENMP
    if (const char* env = std::getenv("ORLICZ_FLOW_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap > 0) omp_set_num_threads(cap);
        } catch (const std::exception&) {
            // ignore malformed values
        }
    }
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace orlicz
