#pragma once

#include <cmath>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace orlicz {

class PhiError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class PhiKind { power, reciprocal, custom, tabulated };

/**
 * The Orlicz function phi : (0, inf) -> (0, inf) together with its log-weighted
 * primitive varphi(t) = int_1^t phi(s)/s ds and estimates of its limits at 0+ and +inf.
 *
 * The primitive is based at 1. The integral from 0 diverges whenever phi has a
 * positive liminf at 0+, and only varphi' = phi(t)/t enters the dissipation identity.
 */
class PhiModel {
  public:
    static PhiModel power(double p);
    static PhiModel reciprocal();
    static PhiModel custom(std::function<double(double)> f, std::string name = "custom");
    // Table of (t, phi(t)) pairs, t strictly increasing, all values positive.
    static PhiModel tabulated(std::vector<std::pair<double, double>> table);
    static PhiModel from_table_file(const std::filesystem::path& path);

    PhiKind kind() const { return kind_; }
    double exponent() const { return exponent_; }
    const std::string& name() const { return name_; }
    double primitive_base() const { return 1.0; }

    double operator()(double t) const {
        if (kind_ == PhiKind::power || kind_ == PhiKind::reciprocal) {
            return exponent_ == -1.0 ? 1.0 / t : std::pow(t, exponent_);
        }
        return eval_general(t);
    }

    // varphi(t), closed form when available.
    double primitive(double t) const;
    // varphi(t) by adaptive Simpson on log t, abs tol 1e-10, for every kind.
    double primitive_by_quadrature(double t) const;

    // Tail estimates (may be +inf); computed once at construction.
    double limit_at_zero() const { return limit_at_zero_; }
    double limit_at_infinity() const { return limit_at_infinity_; }

  private:
    PhiModel() = default;
    double eval_general(double t) const;
    void finish();

    PhiKind kind_ = PhiKind::power;
    double exponent_ = 0.0;
    std::string name_;
    std::function<double(double)> fn_;
    std::vector<double> log_t_, log_v_;
    double limit_at_zero_ = 0.0;
    double limit_at_infinity_ = 0.0;
};

double varphi(const PhiModel& phi, double t);

/// Tail extrapolation of a sampled sequence approaching a limit; see check_solvability.
double extrapolate_tail(double f1, double f2, double f3);

/// Log grid of sample points 1e-6 .. 1e6, four per decade.
std::vector<double> phi_sample_points();

struct SolvabilityReport {
    bool pass = false;
    double limit_at_infinity = 0.0;  // estimated limsup_{s->inf} phi
    double limit_at_zero = 0.0;      // estimated liminf_{s->0+} phi
    double g_min = 0.0;
    double g_max = 0.0;
    double margin_infinity = 0.0;  // g_min - limit_at_infinity
    double margin_zero = 0.0;      // limit_at_zero - g_max
};

SolvabilityReport check_solvability(const PhiModel& phi, std::span<const double> g);

struct UniquenessReport {
    bool holds = true;
    // Witness (c, s) with c < 1 and phi(c/s) <= phi(1/s), when violated.
    std::optional<std::pair<double, double>> witness;
};

UniquenessReport check_uniqueness_condition(const PhiModel& phi);

/// Solves phi(C) = value for C by bisection in log t over [1e-6, 1e6], if bracketed.
std::optional<double> phi_level(const PhiModel& phi, double value);

}  // namespace orlicz
