#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "orlicz/convex_body.hpp"
#include "orlicz/kernels.hpp"
#include "orlicz/orlicz_model.hpp"

namespace orlicz {

/// Strictly positive g sampled on the x-grid.
class DensityField {
  public:
    explicit DensityField(ScalarField g);

    const ScalarField& field() const { return g_; }
    std::span<const double> values() const { return g_.values(); }
    const SphereGrid& grid() const { return g_.grid(); }
    // n = 3 only: every latitude row is constant.
    bool longitude_independent() const { return longitude_independent_; }

  private:
    ScalarField g_;
    bool longitude_independent_ = false;
};

struct FlowConfig {
    PhiArgument mode = PhiArgument::radial;
    double dt_init = 1e-2;
    double dt_min = 1e-12;
    double shrink = 0.5;
    double step_cap = 0.05;  // max |dt * speed| relative to min h
    double tol_speed = 1e-6;
    double tol_residual = 1e-4;
    long max_steps = 1000000;
    double t_end = std::numeric_limits<double>::infinity();
    // Fraction of the explicit Euler stability bound used as a dt ceiling; 0 disables.
    double cfl = 0.8;
    int stride = 1;        // trace record stride
    int state_stride = 0;  // keep full states every k steps; 0 keeps only the endpoints

    void validate() const;  // throws std::invalid_argument
};

enum class Termination { converged, max_steps, convexity_lost, dt_underflow };

const char* to_string(Termination t);

struct Bounds {
    double min_h = 0, max_h = 0;
    double max_grad_h = 0;
    double max_r = 0;
    double min_K = 0, max_K = 0;
    double min_radius = 0, max_radius = 0;
    double min_principal_curv = 0, max_principal_curv = 0;
};

struct FlowState {
    explicit FlowState(ConvexBody b) : body(std::move(b)) {}

    double t = 0.0;
    double dt = 0.0;       // step that produced this state (0 for the initial one)
    double dt_next = 0.0;  // proposal for the next step
    long step = 0;
    ConvexBody body;
    std::vector<double> speed;
    double F = 0.0;
    double dissipation = 0.0;
    double residual_max = 0.0;
    double speed_max = 0.0;
    double stiffness_max = 0.0;
    Bounds bounds;
};

struct TraceRecord {
    long step = 0;
    double t = 0, dt = 0, F = 0, dissipation = 0, residual_max = 0, speed_max = 0;
    Bounds bounds;
};

struct FlowTrace {
    std::vector<FlowState> states;  // initial, every state_stride-th, final
    std::vector<TraceRecord> records;
    Termination termination = Termination::max_steps;
    long rejected_steps = 0;
    std::vector<std::string> warnings;

    const FlowState& final_state() const { return states.back(); }
};

ScalarField flow_speed(const ConvexBody& body, const DensityField& g, const PhiModel& phi,
                       PhiArgument mode = PhiArgument::radial);
double functional_F(const ConvexBody& body, const DensityField& g, const PhiModel& phi);
// n = 2: the varphi term evaluated on the direction grid through the radial map.
double functional_F_direct(const ConvexBody& body, const DensityField& g, const PhiModel& phi);
double dissipation(const ConvexBody& body, const DensityField& g, const PhiModel& phi,
                   PhiArgument mode = PhiArgument::radial);
ScalarField ma_residual(const ConvexBody& body, const DensityField& g, const PhiModel& phi,
                        PhiArgument mode = PhiArgument::radial);

FlowState make_state(ConvexBody body, const DensityField& g, const PhiModel& phi,
                     const FlowConfig& config, double t = 0.0, long step = 0);

/// One forced Euler step of size dt, no acceptance tests. Throws ConvexityError.
FlowState euler_advance(const FlowState& state, const DensityField& g, const PhiModel& phi,
                        const FlowConfig& config, double dt);

struct StepResult {
    std::optional<FlowState> state;
    Termination failure = Termination::dt_underflow;  // meaningful when state is empty
    int rejected = 0;
};

/// Adaptive Euler step with rollback on convexity loss or (radial mode) an increase of F.
StepResult step(const FlowState& state, const DensityField& g, const PhiModel& phi,
                const FlowConfig& config,
                double max_dt = std::numeric_limits<double>::infinity());

TraceRecord record_of(const FlowState& state);

FlowTrace run(const ConvexBody& initial, const DensityField& g, const PhiModel& phi,
              const FlowConfig& config);

/// n = 2: max over direction nodes of |d log rho / dt - (dh/dt / h)(x(xi))|.
double radial_speed_check(const FlowState& before, const FlowState& after);

/// n = 2: max over nodes of the defect of the polar-body evolution equation.
double dual_flow_residual(const FlowState& before, const FlowState& after, const DensityField& g,
                          const PhiModel& phi, PhiArgument mode = PhiArgument::radial);

}  // namespace orlicz
