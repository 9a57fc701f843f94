#include "orlicz/orlicz_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace orlicz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Simpson {
    const std::function<double(double)>& f;
    bool failed = false;

    double segment(double a, double fa, double b, double fb, double m, double fm, double whole,
                   double tol, int depth) {
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = f(lm);
        const double frm = f(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
        if (depth <= 0) {
            failed = true;
            return left + right + delta / 15.0;
        }
        return segment(a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
               segment(m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
    }

    double operator()(double a, double b, double tol) {
        const double fa = f(a);
        const double fb = f(b);
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        return segment(a, fa, b, fb, m, fm, whole, tol, 48);
    }
};

}  // namespace

PhiModel PhiModel::power(double p) {
    if (!std::isfinite(p)) throw PhiError("power exponent must be finite");
    PhiModel m;
    m.kind_ = PhiKind::power;
    m.exponent_ = p;
    std::ostringstream os;
    os << "t^" << p;
    m.name_ = os.str();
    m.finish();
    return m;
}

PhiModel PhiModel::reciprocal() {
    PhiModel m;
    m.kind_ = PhiKind::reciprocal;
    m.exponent_ = -1.0;
    m.name_ = "1/t";
    m.finish();
    return m;
}

PhiModel PhiModel::custom(std::function<double(double)> f, std::string name) {
    if (!f) throw PhiError("custom phi needs a callable");
    PhiModel m;
    m.kind_ = PhiKind::custom;
    m.fn_ = std::move(f);
    m.name_ = std::move(name);
    m.finish();
    return m;
}

PhiModel PhiModel::tabulated(std::vector<std::pair<double, double>> table) {
    if (table.size() < 2) throw PhiError("phi table needs at least two rows");
    PhiModel m;
    m.kind_ = PhiKind::tabulated;
    m.name_ = "table";
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto [t, v] = table[i];
        if (!(t > 0.0) || !(v > 0.0) || !std::isfinite(t) || !std::isfinite(v)) {
            throw PhiError("phi table entries must be positive and finite");
        }
        if (i > 0 && !(t > table[i - 1].first)) {
            throw PhiError("phi table abscissae must be strictly increasing");
        }
        m.log_t_.push_back(std::log(t));
        m.log_v_.push_back(std::log(v));
    }
    m.finish();
    return m;
}

PhiModel PhiModel::from_table_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw PhiError("cannot open phi table " + path.string());
    std::vector<std::pair<double, double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double t, v;
        if (!(ls >> t)) continue;
        if (!(ls >> v)) throw PhiError("malformed phi table line: " + line);
        rows.emplace_back(t, v);
    }
    return tabulated(std::move(rows));
}

double PhiModel::eval_general(double t) const {
    if (kind_ == PhiKind::custom) return fn_(t);
    // piecewise power law between table rows, constant outside
    const double u = std::log(t);
    if (u <= log_t_.front()) return std::exp(log_v_.front());
    if (u >= log_t_.back()) return std::exp(log_v_.back());
    const auto it = std::upper_bound(log_t_.begin(), log_t_.end(), u);
    const std::size_t i = static_cast<std::size_t>(it - log_t_.begin()) - 1;
    const double w = (u - log_t_[i]) / (log_t_[i + 1] - log_t_[i]);
    return std::exp((1.0 - w) * log_v_[i] + w * log_v_[i + 1]);
}

double PhiModel::primitive(double t) const {
    if (!(t > 0.0)) throw PhiError("varphi needs t > 0");
    switch (kind_) {
        case PhiKind::reciprocal:
            return 1.0 - 1.0 / t;
        case PhiKind::power:
            if (exponent_ == 0.0) return std::log(t);
            return std::expm1(exponent_ * std::log(t)) / exponent_;
        case PhiKind::tabulated: {
            // exact integral of exp(a + b u) over the pieces of [0, log t]
            const double target = std::log(t);
            if (target == 0.0) return 0.0;
            const double lo = std::min(0.0, target);
            const double hi = std::max(0.0, target);
            std::vector<double> cuts{lo};
            for (double c : log_t_) {
                if (c > lo && c < hi) cuts.push_back(c);
            }
            cuts.push_back(hi);
            double total = 0.0;
            for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
                const double a = cuts[i];
                const double b = cuts[i + 1];
                const double va = std::log(eval_general(std::exp(a)));
                const double vb = std::log(eval_general(std::exp(b)));
                const double slope = (vb - va) / (b - a);
                if (std::abs(slope) * (b - a) < 1e-12) {
                    total += std::exp(0.5 * (va + vb)) * (b - a);
                } else {
                    total += (std::exp(vb) - std::exp(va)) / slope;
                }
            }
            return target >= 0.0 ? total : -total;
        }
        case PhiKind::custom:
            break;
    }
    return primitive_by_quadrature(t);
}

double PhiModel::primitive_by_quadrature(double t) const {
    if (!(t > 0.0)) throw PhiError("varphi needs t > 0");
    const double u = std::log(t);
    if (u == 0.0) return 0.0;
    const std::function<double(double)> integrand = [this](double s) { return (*this)(std::exp(s)); };
    Simpson simpson{integrand};
    const double lo = std::min(0.0, u);
    const double hi = std::max(0.0, u);
    const double value = simpson(lo, hi, 1e-10);
    if (simpson.failed || !std::isfinite(value)) {
        throw PhiError("varphi quadrature did not converge at t = " + std::to_string(t));
    }
    return u > 0.0 ? value : -value;
}

std::vector<double> phi_sample_points() {
    std::vector<double> s;
    for (int k = -24; k <= 24; ++k) s.push_back(std::pow(10.0, 0.25 * k));
    return s;
}

double extrapolate_tail(double f1, double f2, double f3) {
    const double d1 = f2 - f1;
    const double d2 = f3 - f2;
    if (d2 == 0.0) return f3;
    if (d1 * d2 < 0.0) return f3;
    if (std::abs(d2) < std::abs(d1)) {
        return std::max(0.0, f3 - d2 * d2 / (d2 - d1));
    }
    return d2 > 0.0 ? kInf : 0.0;
}

void PhiModel::finish() {
    const auto s = phi_sample_points();
    std::vector<double> f;
    f.reserve(s.size());
    for (double t : s) {
        const double v = (*this)(t);
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw PhiError("phi must be positive and finite on [1e-6, 1e6]; phi(" + std::to_string(t) +
                           ") = " + std::to_string(v));
        }
        f.push_back(v);
    }
    const std::size_t n = f.size();
    limit_at_infinity_ = extrapolate_tail(f[n - 3], f[n - 2], f[n - 1]);
    limit_at_zero_ = extrapolate_tail(f[2], f[1], f[0]);
}

double varphi(const PhiModel& phi, double t) { return phi.primitive(t); }

SolvabilityReport check_solvability(const PhiModel& phi, std::span<const double> g) {
    SolvabilityReport r;
    if (g.empty()) return r;
    r.g_min = *std::min_element(g.begin(), g.end());
    r.g_max = *std::max_element(g.begin(), g.end());
    r.limit_at_infinity = phi.limit_at_infinity();
    r.limit_at_zero = phi.limit_at_zero();
    r.margin_infinity = r.g_min - r.limit_at_infinity;
    r.margin_zero = r.limit_at_zero - r.g_max;
    r.pass = r.g_min > 0.0 && r.margin_infinity > 0.0 && r.margin_zero > 0.0;
    return r;
}

UniquenessReport check_uniqueness_condition(const PhiModel& phi) {
    std::vector<double> s_grid{1.0};
    for (int k = 1; k <= 24; ++k) {
        s_grid.push_back(std::pow(10.0, 0.25 * k));
        s_grid.push_back(std::pow(10.0, -0.25 * k));
    }
    static constexpr double c_grid[] = {0.5, 0.9, 0.99, 0.1, 0.01, 1e-3};
    UniquenessReport report;
    for (double s : s_grid) {
        const double base = phi(1.0 / s);
        for (double c : c_grid) {
            if (phi(c / s) <= base) {
                report.holds = false;
                report.witness = std::make_pair(c, s);
                return report;
            }
        }
    }
    return report;
}

std::optional<double> phi_level(const PhiModel& phi, double value) {
    double lo = std::log(1e-6);
    double hi = std::log(1e6);
    double flo = phi(std::exp(lo)) - value;
    const double fhi = phi(std::exp(hi)) - value;
    if (flo == 0.0) return std::exp(lo);
    if (fhi == 0.0) return std::exp(hi);
    if ((flo > 0.0) == (fhi > 0.0)) return std::nullopt;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = phi(std::exp(mid)) - value;
        if (fm == 0.0) return std::exp(mid);
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return std::exp(0.5 * (lo + hi));
}

}  // namespace orlicz
