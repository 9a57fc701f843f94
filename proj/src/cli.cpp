#include "orlicz/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "orlicz/curvature.hpp"

namespace orlicz {

namespace {

void print_limit(std::ostream& out, double v) {
    if (std::isinf(v)) out << (v > 0 ? "inf" : "-inf");
    else out << v;
}

struct OracleLine {
    std::ostream& out;
    bool all = true;

    void operator()(const std::string& name, double value, double tol) {
        const bool ok = std::isfinite(value) && value <= tol;
        all = all && ok;
        out << (ok ? "PASS " : "FAIL ") << name << " value=" << value << " tol=" << tol << '\n';
    }
};

}  // namespace

int cmd_check(const RunConfig& config, std::ostream& out) {
    const auto grid = make_grid(config);
    const PhiModel phi = make_phi(config);
    const DensityField g = make_density(config, grid);
    const auto s = check_solvability(phi, g.values());
    out << std::setprecision(10);
    out << "phi: " << phi.name() << '\n';
    out << "g range: [" << s.g_min << ", " << s.g_max << "]\n";
    out << "phi limit at infinity: ";
    print_limit(out, s.limit_at_infinity);
    out << "\nphi limit at zero: ";
    print_limit(out, s.limit_at_zero);
    out << "\nmargins: (";
    print_limit(out, s.margin_infinity);
    out << ", ";
    print_limit(out, s.margin_zero);
    out << ")\nsolvability: " << (s.pass ? "pass" : "fail") << '\n';
    const auto u = check_uniqueness_condition(phi);
    out << "uniqueness condition: " << (u.holds ? "holds" : "violated");
    if (u.witness) out << " (witness c=" << u.witness->first << ", s=" << u.witness->second << ")";
    out << '\n';
    return s.pass ? exit_ok : exit_precondition;
}

void write_trace_csv(std::ostream& out, const FlowTrace& trace) {
    out << "step,t,dt,F,dissipation,residual_max,min_h,max_h,max_grad_h,min_K,max_K,"
           "min_principal_curv,max_principal_curv\n";
    out << std::setprecision(17);
    for (const auto& r : trace.records) {
        const Bounds& b = r.bounds;
        out << r.step << ',' << r.t << ',' << r.dt << ',' << r.F << ',' << r.dissipation << ','
            << r.residual_max << ',' << b.min_h << ',' << b.max_h << ',' << b.max_grad_h << ',' << b.min_K
            << ',' << b.max_K << ',' << b.min_principal_curv << ',' << b.max_principal_curv << '\n';
    }
}

void write_series(std::ostream& out, const FlowTrace& trace, bool residual) {
    out << std::setprecision(17);
    for (const auto& r : trace.records) out << r.t << ' ' << (residual ? r.residual_max : r.F) << '\n';
}

int cmd_solve(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& out,
              std::ostream& err) {
    const auto grid = make_grid(config);
    const PhiModel phi = make_phi(config);
    const DensityField g = make_density(config, grid);
    std::optional<ConvexBody> initial;
    try {
        initial.emplace(build_body(config.body, grid));
    } catch (const ConvexityError& e) {
        err << "initial body rejected: " << e.what() << '\n';
        return exit_precondition;
    }

    const FlowTrace trace = run(*initial, g, phi, config.flow);
    for (const auto& w : trace.warnings) err << "warning: " << w << '\n';

    std::filesystem::create_directories(out_dir);
    const FlowState& last = trace.final_state();
    {
        std::ofstream f(out_dir / "body.txt");
        write_body(f, last.body.h());
    }
    {
        std::ofstream f(out_dir / "trace.csv");
        write_trace_csv(f, trace);
    }
    {
        std::ofstream f(out_dir / "F.dat");
        write_series(f, trace, false);
    }
    {
        std::ofstream f(out_dir / "residual.dat");
        write_series(f, trace, true);
    }
    {
        std::ofstream f(out_dir / "curvature.csv");
        write_curvature_csv(f, last.body, curvature_report(last.body));
    }
    std::ostringstream summary;
    summary << std::setprecision(17);
    summary << "termination=" << to_string(trace.termination) << '\n'
            << "steps=" << last.step << '\n'
            << "rejected_steps=" << trace.rejected_steps << '\n'
            << "t=" << last.t << '\n'
            << "F=" << last.F << '\n'
            << "residual_max=" << last.residual_max << '\n'
            << "speed_max=" << last.speed_max << '\n'
            << "min_h=" << last.bounds.min_h << '\n'
            << "max_h=" << last.bounds.max_h << '\n';
    {
        std::ofstream f(out_dir / "summary.txt");
        f << summary.str();
    }
    out << summary.str();
    return trace.termination == Termination::converged ? exit_ok : exit_flow_failure;
}

int cmd_uniqueness(const RunConfig& config, const std::vector<BodySpec>& bodies, std::ostream& out,
                   std::ostream& err) {
    if (bodies.size() < 2) throw ConfigError("uniqueness needs at least two bodies");
    const auto grid = make_grid(config);
    const PhiModel phi = make_phi(config);
    const DensityField g = make_density(config, grid);
    const auto u = check_uniqueness_condition(phi);
    if (!u.holds) {
        err << "uniqueness condition violated for phi = " << phi.name();
        if (u.witness) err << " (witness c=" << u.witness->first << ", s=" << u.witness->second << ")";
        err << "; refusing to run\n";
        return exit_precondition;
    }

    std::vector<ScalarField> limits;
    for (std::size_t i = 0; i < bodies.size(); ++i) {
        std::optional<ConvexBody> initial;
        try {
            initial.emplace(build_body(bodies[i], grid));
        } catch (const ConvexityError& e) {
            err << "body " << i << " rejected: " << e.what() << '\n';
            return exit_precondition;
        }
        const FlowTrace trace = run(*initial, g, phi, config.flow);
        for (const auto& w : trace.warnings) err << "warning: " << w << '\n';
        out << "body " << i << " (" << bodies[i].kind << "): " << to_string(trace.termination)
            << " after " << trace.final_state().step << " steps, residual "
            << trace.final_state().residual_max << '\n';
        if (trace.termination != Termination::converged) return exit_flow_failure;
        limits.push_back(trace.final_state().body.h());
    }

    double worst = 0.0;
    for (std::size_t i = 0; i < limits.size(); ++i) {
        for (std::size_t j = i + 1; j < limits.size(); ++j) {
            double d = 0.0;
            for (std::size_t k = 0; k < limits[i].size(); ++k) {
                d = std::max(d, std::abs(limits[i][k] - limits[j][k]));
            }
            out << "distance " << i << ' ' << j << ": " << d << '\n';
            worst = std::max(worst, d);
        }
    }
    const bool pass = worst <= config.uniqueness_tol;
    out << "uniqueness: " << (pass ? "pass" : "fail") << " (max distance " << worst << ", tol "
        << config.uniqueness_tol << ")\n";
    return pass ? exit_ok : exit_flow_failure;
}

int cmd_oracle(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const auto grid = make_grid(config);
    const PhiModel phi = make_phi(config);
    const DensityField g = make_density(config, grid);
    std::optional<ConvexBody> body;
    try {
        body.emplace(build_body(config.body, grid));
    } catch (const ConvexityError& e) {
        err << "body rejected before oracles: " << e.what() << '\n';
        return exit_precondition;
    }
    out << std::setprecision(6);
    OracleLine line{out};

    const auto ja = jac_alpha(*body);
    const auto jas = jac_alpha_star(*body);
    double recip = 0.0;
    for (std::size_t i = 0; i < ja.size(); ++i) recip = std::max(recip, std::abs(ja[i] * jas[i] - 1.0));
    line("jacobian_reciprocity", recip, 1e-10);

    const auto K = gauss_curvature(*body);
    double kdet = 0.0;
    for (std::size_t i = 0; i < K.size(); ++i) {
        kdet = std::max(kdet, std::abs(K[i] * body->geometry().det_b[i] - 1.0));
    }
    line("gauss_curvature_times_det", kdet, 1e-12);
    line("total_integral_curvature", std::abs(total_integral_curvature(*body) - grid->measure()), 1e-3);

    if (grid->dim() == 2) {
        try {
            const ConvexBody bipolar = polar_body(polar_body(*body));
            double d = 0.0;
            for (std::size_t i = 0; i < grid->size(); ++i) d = std::max(d, std::abs(bipolar.h()[i] - body->h()[i]));
            line("bipolar_round_trip", d, 1e-3);
        } catch (const ConvexityError&) {
            line("bipolar_round_trip", std::numeric_limits<double>::infinity(), 1e-3);
        }

        const double f = functional_F(*body, g, phi);
        line("functional_F_vs_direct", std::abs(f - functional_F_direct(*body, g, phi)), 5e-3);

        const auto density = integral_curvature_density(*body);
        std::mt19937_64 rng(20240601);
        std::uniform_real_distribution<double> start(0.0, 2.0 * std::numbers::pi);
        std::uniform_real_distribution<double> length(0.1, 3.0);
        double patch = 0.0;
        for (int k = 0; k < 8; ++k) {
            const DirectionArc arc{start(rng), length(rng)};
            const DirectionArc image = normal_image_arc(*body, arc);
            patch = std::max(patch, std::abs(integrate_arc(*grid, density.values(), image.start, image.length) -
                                             arc.length));
        }
        line("patch_consistency", patch, 5e-3);

        const FlowState before = make_state(*body, g, phi, config.flow);
        const FlowState after = euler_advance(before, g, phi, config.flow, 1e-4);
        line("radial_speed_check", radial_speed_check(before, after), 5e-3);
        line("dual_flow_residual", dual_flow_residual(before, after, g, phi, config.flow.mode), 1e-2);
    }
    out << (line.all ? "all oracles pass" : "some oracles failed") << '\n';
    return line.all ? exit_ok : exit_precondition;
}

}  // namespace orlicz
