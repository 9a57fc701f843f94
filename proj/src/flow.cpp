#include "orlicz/flow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kernel_detail.hpp"

namespace orlicz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

FlowFields evaluate(const ConvexBody& body, const DensityField& g, const PhiModel& phi,
                    PhiArgument mode) {
    require_same_grid(body.grid(), g.grid());
    FlowInputs in;
    in.h = body.values();
    in.g = g.values();
    in.phi = &phi;
    in.mode = mode;
    in.axisymmetric = false;
    if (body.grid().dim() == 3 && g.longitude_independent()) {
        // The longitude terms of the stiffness vanish only if h is axisymmetric too.
        const SphereGrid& grid = body.grid();
        bool uniform = true;
        for (int j = 0; j < grid.rows() && uniform; ++j) {
            const double h0 = body.h()[grid.index(j, 0)];
            for (int k = 1; k < grid.columns(); ++k) {
                if (body.h()[grid.index(j, k)] != h0) {
                    uniform = false;
                    break;
                }
            }
        }
        in.axisymmetric = uniform;
    }
    FlowFields out;
    kernels::omp::flow_fields(body.grid(), body.geometry(), in, out);
    return out;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

Bounds bounds_of(const ConvexBody& body) {
    const auto& geo = body.geometry();
    Bounds b;
    b.min_h = body.h().min();
    b.max_h = body.h().max();
    b.min_K = kInf;
    b.max_K = 0.0;
    b.min_radius = kInf;
    b.max_radius = 0.0;
    for (std::size_t i = 0; i < geo.radial.size(); ++i) {
        const double h = body.h()[i];
        const double r = geo.radial[i];
        b.max_r = std::max(b.max_r, r);
        b.max_grad_h = std::max(b.max_grad_h, std::sqrt(std::max(0.0, r * r - h * h)));
        const double k = 1.0 / geo.det_b[i];
        b.min_K = std::min(b.min_K, k);
        b.max_K = std::max(b.max_K, k);
        b.min_radius = std::min(b.min_radius, geo.radius_min[i]);
        b.max_radius = std::max(b.max_radius, geo.radius_max[i]);
    }
    b.min_principal_curv = 1.0 / b.max_radius;
    b.max_principal_curv = 1.0 / b.min_radius;
    return b;
}

}  // namespace

DensityField::DensityField(ScalarField g) : g_(std::move(g)) {
    if (!(g_.min() > 0.0)) throw std::invalid_argument("g must be strictly positive");
    const SphereGrid& grid = g_.grid();
    if (grid.dim() == 3) {
        longitude_independent_ = true;
        for (int j = 0; j < grid.rows() && longitude_independent_; ++j) {
            for (int k = 1; k < grid.columns(); ++k) {
                if (g_[grid.index(j, k)] != g_[grid.index(j, 0)]) {
                    longitude_independent_ = false;
                    break;
                }
            }
        }
    }
}

void FlowConfig::validate() const {
    if (!(dt_init > 0.0) || !(dt_min > 0.0) || !(dt_min < dt_init)) {
        throw std::invalid_argument("flow: need 0 < dt_min < dt_init");
    }
    if (!(shrink > 0.0 && shrink < 1.0)) throw std::invalid_argument("flow: shrink must lie in (0, 1)");
    if (!(step_cap > 0.0 && step_cap < 0.5)) throw std::invalid_argument("flow: step_cap must lie in (0, 0.5)");
    if (!(tol_speed > 0.0) || !(tol_residual > 0.0)) throw std::invalid_argument("flow: tolerances must be positive");
    if (max_steps <= 0) throw std::invalid_argument("flow: max_steps must be positive");
    if (!(t_end > 0.0)) throw std::invalid_argument("flow: t_end must be positive");
    if (!(cfl >= 0.0 && cfl <= 1.0)) throw std::invalid_argument("flow: cfl must lie in [0, 1]");
    if (stride < 1 || state_stride < 0) throw std::invalid_argument("flow: bad stride");
}

const char* to_string(Termination t) {
    switch (t) {
        case Termination::converged: return "converged";
        case Termination::max_steps: return "max_steps";
        case Termination::convexity_lost: return "convexity_lost";
        case Termination::dt_underflow: return "dt_underflow";
    }
    return "unknown";
}

ScalarField flow_speed(const ConvexBody& body, const DensityField& g, const PhiModel& phi, PhiArgument mode) {
    return ScalarField(body.grid_ptr(), evaluate(body, g, phi, mode).speed);
}

double functional_F(const ConvexBody& body, const DensityField& g, const PhiModel& phi) {
    return integrate(body.grid(), evaluate(body, g, phi, PhiArgument::radial).lyapunov);
}

double functional_F_direct(const ConvexBody& body, const DensityField& g, const PhiModel& phi) {
    const SphereGrid& grid = body.grid();
    if (grid.dim() != 2) throw GridError("functional_F_direct needs n = 2");
    require_same_grid(grid, g.grid());
    std::vector<double> log_h(grid.size()), term(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        log_h[i] = std::log(body.h()[i]);
        const SupportMaximizer m = support_maximizer(body, grid.node(i));
        const double rho = 1.0 / m.value;
        term[i] = phi.primitive(rho) / interpolate(grid, g.values(), m.normal, true);
    }
    return integrate(grid, log_h) - integrate(grid, term);
}

double dissipation(const ConvexBody& body, const DensityField& g, const PhiModel& phi, PhiArgument mode) {
    return integrate(body.grid(), evaluate(body, g, phi, mode).dissipation);
}

ScalarField ma_residual(const ConvexBody& body, const DensityField& g, const PhiModel& phi, PhiArgument mode) {
    return ScalarField(body.grid_ptr(), evaluate(body, g, phi, mode).residual);
}

FlowState make_state(ConvexBody body, const DensityField& g, const PhiModel& phi, const FlowConfig& config,
                     double t, long step) {
    FlowFields f = evaluate(body, g, phi, config.mode);
    const SphereGrid& grid = body.grid();
    FlowState s(std::move(body));
    s.t = t;
    s.dt_next = config.dt_init;
    s.step = step;
    s.F = kernels::omp::weighted_sum(grid.weights(), f.lyapunov);
    s.dissipation = kernels::omp::weighted_sum(grid.weights(), f.dissipation);
    s.residual_max = max_abs(f.residual);
    s.speed_max = max_abs(f.speed);
    s.stiffness_max = *std::max_element(f.stiffness.begin(), f.stiffness.end());
    s.speed = std::move(f.speed);
    s.bounds = bounds_of(s.body);
    return s;
}

FlowState euler_advance(const FlowState& state, const DensityField& g, const PhiModel& phi,
                        const FlowConfig& config, double dt) {
    const auto h = state.body.values();
    std::vector<double> next(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) next[i] = h[i] + dt * state.speed[i];
    for (double v : next) {
        if (!std::isfinite(v)) throw ConvexityError("non-finite support value after Euler step");
    }
    ConvexBody body(ScalarField(state.body.grid_ptr(), std::move(next)));
    FlowState out = make_state(std::move(body), g, phi, config, state.t + dt, state.step + 1);
    out.dt = dt;
    return out;
}

StepResult step(const FlowState& state, const DensityField& g, const PhiModel& phi, const FlowConfig& config,
                double max_dt) {
    StepResult result;
    double dt = std::min(state.dt_next, max_dt);
    if (state.speed_max > 0.0) dt = std::min(dt, config.step_cap * state.bounds.min_h / state.speed_max);
    if (config.cfl > 0.0 && state.stiffness_max > 0.0) {
        dt = std::min(dt, config.cfl * 2.0 / state.stiffness_max);
    }
    bool last_was_convexity = false;
    while (true) {
        if (dt < config.dt_min) {
            result.failure = last_was_convexity ? Termination::convexity_lost : Termination::dt_underflow;
            return result;
        }
        try {
            FlowState next = euler_advance(state, g, phi, config, dt);
            const bool increased = config.mode == PhiArgument::radial &&
                                   next.F > state.F + 1e-9 * (1.0 + std::abs(state.F));
            if (!std::isfinite(next.F) || increased) {
                last_was_convexity = false;
            } else {
                next.dt_next = std::min(config.dt_init, dt / config.shrink);
                result.state = std::move(next);
                return result;
            }
        } catch (const ConvexityError&) {
            last_was_convexity = true;
        }
        ++result.rejected;
        dt *= config.shrink;
    }
}

TraceRecord record_of(const FlowState& s) {
    return {s.step, s.t, s.dt, s.F, s.dissipation, s.residual_max, s.speed_max, s.bounds};
}

FlowTrace run(const ConvexBody& initial, const DensityField& g, const PhiModel& phi, const FlowConfig& config) {
    config.validate();
    FlowTrace trace;
    const auto solvable = check_solvability(phi, g.values());
    if (!solvable.pass) {
        trace.warnings.push_back("solvability condition fails for this (phi, g); the flow may not converge");
    }

    FlowState current = make_state(initial, g, phi, config);
    trace.states.push_back(current);
    trace.records.push_back(record_of(current));
    const auto converged = [&](const FlowState& s) {
        return s.speed_max <= config.tol_speed && s.residual_max <= config.tol_residual;
    };

    bool last_recorded = true;
    while (true) {
        if (converged(current)) {
            trace.termination = Termination::converged;
            break;
        }
        if (current.step >= config.max_steps || current.t >= config.t_end) {
            trace.termination = Termination::max_steps;
            break;
        }
        StepResult r = step(current, g, phi, config, config.t_end - current.t);
        trace.rejected_steps += r.rejected;
        if (!r.state) {
            trace.termination = r.failure;
            break;
        }
        current = std::move(*r.state);
        // Snap onto the horizon when the remaining gap is rounding noise.
        if (std::isfinite(config.t_end) && config.t_end - current.t <= 1e-12 * std::max(1.0, config.t_end)) {
            current.t = config.t_end;
        }
        last_recorded = current.step % config.stride == 0;
        if (last_recorded) trace.records.push_back(record_of(current));
        if (config.state_stride > 0 && current.step % config.state_stride == 0) {
            trace.states.push_back(current);
        }
    }
    if (!last_recorded) trace.records.push_back(record_of(current));
    if (trace.states.back().step != current.step) trace.states.push_back(std::move(current));
    return trace;
}

double radial_speed_check(const FlowState& before, const FlowState& after) {
    const SphereGrid& grid = before.body.grid();
    if (grid.dim() != 2) throw GridError("radial_speed_check needs n = 2");
    const double dt = after.t - before.t;
    if (!(dt > 0.0)) throw std::invalid_argument("radial_speed_check needs increasing time");
    // Both sides are difference quotients over the same step, matched at the midpoint normal.
    std::vector<double> rate(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        rate[i] = (std::log(after.body.h()[i]) - std::log(before.body.h()[i])) / dt;
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Vec3& xi = grid.node(i);
        const SupportMaximizer m0 = support_maximizer(before.body, xi);
        const SupportMaximizer m1 = support_maximizer(after.body, xi);
        // log rho = -log(1 / rho)
        const double lhs = -(std::log(m1.value) - std::log(m0.value)) / dt;
        const Vec3 mid = normalized({m0.normal[0] + m1.normal[0], m0.normal[1] + m1.normal[1], 0.0});
        const double rhs = interpolate_cubic(grid, rate, mid);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

namespace {

// g (h*)^2 / (phi(a*) (r*)^n K*) - h* on the nodes of a polar body.
std::vector<double> dual_speed(const ConvexBody& polar, const DensityField& g, const PhiModel& phi,
                               PhiArgument mode) {
    const SphereGrid& grid = polar.grid();
    const auto& geo = polar.geometry();
    const std::vector<Vec3> points = embedding(polar);
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double hs = polar.h()[i];
        const double rs = geo.radial[i];
        const double ks = 1.0 / geo.det_b[i];
        // phi is evaluated at r(x) = 1/h*(xi) for the radial reading and 1/h(x) = r*(xi) otherwise.
        const double arg = mode == PhiArgument::radial ? 1.0 / hs : rs;
        const double gx = interpolate(grid, g.values(), points[i], true);
        out[i] = gx * hs * hs / (phi(arg) * detail::pow_dim(rs, grid.dim()) * ks) - hs;
    }
    return out;
}

}  // namespace

double dual_flow_residual(const FlowState& before, const FlowState& after, const DensityField& g,
                          const PhiModel& phi, PhiArgument mode) {
    const SphereGrid& grid = before.body.grid();
    if (grid.dim() != 2) throw GridError("dual_flow_residual needs n = 2");
    const double dt = after.t - before.t;
    if (!(dt > 0.0)) throw std::invalid_argument("dual_flow_residual needs increasing time");
    const ConvexBody p0 = polar_body(before.body);
    const ConvexBody p1 = polar_body(after.body);
    const auto v0 = dual_speed(p0, g, phi, mode);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double lhs = (p1.h()[i] - p0.h()[i]) / dt;
        worst = std::max(worst, std::abs(lhs - v0[i]));
    }
    return worst;
}

}  // namespace orlicz
