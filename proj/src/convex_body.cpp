#include "orlicz/convex_body.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "kernel_detail.hpp"

namespace orlicz {

namespace {

std::shared_ptr<SupportGeometry> compute_geometry(const ScalarField& h) {
    auto geo = std::make_shared<SupportGeometry>();
    kernels::omp::support_geometry(h.grid(), h.values(), *geo);
    return geo;
}

ConvexityReport report_from(const ScalarField& h, const SupportGeometry& geo) {
    ConvexityReport r;
    r.min_h = h.min();
    r.convexity_margin = *std::min_element(geo.radius_min.begin(), geo.radius_min.end());
    return r;
}

// Max of the quartic through y[-2..2] (unit spacing) on [-1, 1]; returns {offset, value}.
std::pair<double, double> quartic_peak(const double* y) {
    const double ym2 = y[0], ym1 = y[1], y0 = y[2], yp1 = y[3], yp2 = y[4];
    const double c1 = (8.0 * (yp1 - ym1) - (yp2 - ym2)) / 12.0;
    const double c2 = (16.0 * (yp1 + ym1) - (yp2 + ym2) - 30.0 * y0) / 24.0;
    const double c3 = ((yp2 - ym2) - 2.0 * (yp1 - ym1)) / 12.0;
    const double c4 = ((yp2 + ym2) - 4.0 * (yp1 + ym1) + 6.0 * y0) / 24.0;
    const auto p = [&](double u) { return y0 + u * (c1 + u * (c2 + u * (c3 + u * c4))); };
    const auto dp = [&](double u) { return c1 + u * (2.0 * c2 + u * (3.0 * c3 + u * 4.0 * c4)); };
    const auto ddp = [&](double u) { return 2.0 * c2 + u * (6.0 * c3 + u * 12.0 * c4); };

    const double curv = yp1 - 2.0 * y0 + ym1;
    double u = curv < 0.0 ? std::clamp(-0.5 * (yp1 - ym1) / curv, -1.0, 1.0) : 0.0;
    for (int it = 0; it < 30; ++it) {
        const double d2 = ddp(u);
        if (!(d2 < 0.0)) break;
        const double next = std::clamp(u - dp(u) / d2, -1.0, 1.0);
        if (std::abs(next - u) < 1e-15) {
            u = next;
            break;
        }
        u = next;
    }
    const double value = p(u);
    if (!(value >= y0)) return {0.0, y0};
    return {u, value};
}

// Lagrange basis on the nodes -2..2 at x.
void lagrange5(double x, double* l) {
    const double a = x + 2.0, b = x + 1.0, c = x - 1.0, d = x - 2.0;
    l[0] = b * x * c * d / 24.0;
    l[1] = -a * x * c * d / 6.0;
    l[2] = a * b * c * d / 4.0;
    l[3] = -a * b * x * d / 6.0;
    l[4] = a * b * x * c / 24.0;
}

}  // namespace

ConvexityReport validate(const ScalarField& h) {
    const auto geo = compute_geometry(h);
    return report_from(h, *geo);
}

ConvexBody::ConvexBody(ScalarField h) : h_(std::move(h)) {
    auto geo = compute_geometry(h_);
    report_ = report_from(h_, *geo);
    if (!report_.accepted()) {
        std::ostringstream os;
        os << "support function rejected: min h = " << report_.min_h
           << ", convexity margin = " << report_.convexity_margin;
        throw ConvexityError(os.str());
    }
    geometry_ = std::move(geo);
}

ConvexBody make_ball(GridPtr grid, double radius) {
    return ConvexBody(ScalarField::constant(std::move(grid), radius));
}

ConvexBody make_ellipse(GridPtr grid, double a, double b) {
    const int dim = grid->dim();
    return ConvexBody(ScalarField::sample(std::move(grid), [=](const Vec3& x) {
        // cos(theta) is x[0] on the circle and the polar coordinate x[2] on the sphere
        const double c = dim == 2 ? x[0] : x[2];
        return std::sqrt(a * a * c * c + b * b * (1.0 - c * c));
    }));
}

ConvexBody make_offset_ball(GridPtr grid, double radius, const Vec3& offset) {
    return ConvexBody(ScalarField::sample(std::move(grid),
                                          [&](const Vec3& x) { return radius + dot(offset, x); }));
}

std::vector<Vec3> embedding(const ConvexBody& body) {
    const SphereGrid& grid = body.grid();
    const auto& d = body.geometry().derivatives;
    std::vector<Vec3> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Vec3& x = grid.node(i);
        const Vec3 t = grid.lift(i, d.d1[i], d.d2[i]);
        const double h = body.h()[i];
        out[i] = {h * x[0] + t[0], h * x[1] + t[1], h * x[2] + t[2]};
    }
    return out;
}

ScalarField radial_norm_field(const ConvexBody& body) {
    return ScalarField(body.grid_ptr(), body.geometry().radial);
}

SupportMaximizer support_maximizer(const ConvexBody& body, const Vec3& xi) {
    const SphereGrid& grid = body.grid();
    const std::size_t n = grid.size();
    std::vector<double> f(n);
    std::size_t best = 0;
    for (std::size_t i = 0; i < n; ++i) {
        f[i] = dot(xi, grid.node(i)) / body.h()[i];
        if (f[i] > f[best]) best = i;
    }

    SupportMaximizer out;
    out.node = best;
    if (grid.dim() == 2) {
        const int cols = grid.columns();
        const int k = static_cast<int>(best);
        double y[5];
        for (int m = -2; m <= 2; ++m) y[m + 2] = f[(k + m + cols) % cols];
        const auto [u, value] = quartic_peak(y);
        out.value = value;
        out.normal = grid.direction(grid.theta(best) + u * grid.theta_step());
        return out;
    }

    const detail::Stencil s(grid);
    const int j = grid.row_of(best);
    const int k = grid.column_of(best);
    double patch[5][5];
    for (int a = -2; a <= 2; ++a) {
        for (int b = -2; b <= 2; ++b) patch[a + 2][b + 2] = s.at(body.values().data(), j + a, k + b);
    }
    const double theta0 = grid.row_theta(j);
    const double phi0 = grid.phi(best);
    // xi . v / h with h the biquartic interpolant of the 5x5 patch in (theta, phi);
    // the parametrization stays smooth across the pole where ghost rows are used
    const auto objective = [&](double u, double w) {
        double lu[5], lw[5];
        lagrange5(u, lu);
        lagrange5(w, lw);
        double h = 0.0;
        for (int a = 0; a < 5; ++a) {
            double row = 0.0;
            for (int b = 0; b < 5; ++b) row += lw[b] * patch[a][b];
            h += lu[a] * row;
        }
        return dot(xi, grid.direction(theta0 + u * grid.theta_step(), phi0 + w * grid.phi_step())) / h;
    };

    const double f0 = f[best];
    double u = 0.0, w = 0.0, value = f0;
    constexpr double e = 1e-4;
    for (int it = 0; it < 30; ++it) {
        const double c = objective(u, w);
        const double fup = objective(u + e, w), fum = objective(u - e, w);
        const double fwp = objective(u, w + e), fwm = objective(u, w - e);
        const double gu = (fup - fum) / (2.0 * e);
        const double gw = (fwp - fwm) / (2.0 * e);
        const double huu = (fup - 2.0 * c + fum) / (e * e);
        const double hww = (fwp - 2.0 * c + fwm) / (e * e);
        const double huw = (objective(u + e, w + e) - objective(u + e, w - e) - objective(u - e, w + e) +
                            objective(u - e, w - e)) / (4.0 * e * e);
        const double det = huu * hww - huw * huw;
        double du, dw;
        if (huu < 0.0 && det > 0.0) {
            du = -(hww * gu - huw * gw) / det;
            dw = -(huu * gw - huw * gu) / det;
        } else {
            du = huu < 0.0 ? -gu / huu : 0.0;
            dw = hww < 0.0 ? -gw / hww : 0.0;
        }
        const double nu = std::clamp(u + du, -1.0, 1.0);
        const double nw = std::clamp(w + dw, -1.0, 1.0);
        const double next = objective(nu, nw);
        if (!(next >= value)) break;
        const bool done = std::abs(nu - u) + std::abs(nw - w) < 1e-13;
        u = nu;
        w = nw;
        value = next;
        if (done) break;
    }
    out.value = value;
    out.normal = grid.direction(theta0 + u * grid.theta_step(), phi0 + w * grid.phi_step());
    return out;
}

double radial_eval(const ConvexBody& body, const Vec3& xi) {
    return 1.0 / support_maximizer(body, normalized(xi)).value;
}

Vec3 reverse_radial_gauss(const ConvexBody& body, const Vec3& xi) {
    return support_maximizer(body, normalized(xi)).normal;
}

Vec3 radial_gauss_map(const ConvexBody& body, std::size_t node) {
    const auto& d = body.geometry().derivatives;
    const SphereGrid& grid = body.grid();
    const Vec3& x = grid.node(node);
    const Vec3 t = grid.lift(node, d.d1[node], d.d2[node]);
    const double h = body.h()[node];
    return normalized({h * x[0] + t[0], h * x[1] + t[1], h * x[2] + t[2]});
}

ConvexBody polar_body(const ConvexBody& body) {
    const SphereGrid& grid = body.grid();
    const auto n = static_cast<std::ptrdiff_t>(grid.size());
    std::vector<double> h_star(grid.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        h_star[i] = support_maximizer(body, grid.node(i)).value;
    }
    ScalarField field(body.grid_ptr(), std::move(h_star));
    const auto report = validate(field);
    if (!report.accepted()) {
        std::ostringstream os;
        os << "polar body lost convexity after discretization (margin " << report.convexity_margin
           << "); refine the grid";
        throw ConvexityError(os.str());
    }
    return ConvexBody(std::move(field));
}

ScalarField jac_alpha(const ConvexBody& body) {
    const auto& geo = body.geometry();
    const int dim = body.grid().dim();
    std::vector<double> v(geo.radial.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = detail::pow_dim(geo.radial[i], dim) / (body.h()[i] * geo.det_b[i]);
    }
    return ScalarField(body.grid_ptr(), std::move(v));
}

ScalarField jac_alpha_star(const ConvexBody& body) {
    const auto& geo = body.geometry();
    const int dim = body.grid().dim();
    std::vector<double> v(geo.radial.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = body.h()[i] * geo.det_b[i] / detail::pow_dim(geo.radial[i], dim);
    }
    return ScalarField(body.grid_ptr(), std::move(v));
}

void write_body(std::ostream& out, const ScalarField& h) {
    const SphereGrid& grid = h.grid();
    out << "n=" << grid.dim() << " resolution=" << grid.resolution() << '\n';
    out << std::setprecision(17);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out << grid.theta(i) << ' ';
        if (grid.dim() == 3) out << grid.phi(i) << ' ';
        out << h[i] << '\n';
    }
}

ScalarField read_body(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw GridError("body file: missing header");
    int n = 0, resolution = 0;
    if (std::sscanf(header.c_str(), "n=%d resolution=%d", &n, &resolution) != 2) {
        throw GridError("body file: malformed header '" + header + "'");
    }
    auto grid = build_grid(n, resolution);
    const int columns = n == 2 ? 2 : 3;
    std::vector<double> values;
    values.reserve(grid->size());
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        double cols[3];
        int got = 0;
        while (got < columns && ls >> cols[got]) ++got;
        if (got == 0) continue;
        if (got != columns) throw GridError("body file: malformed line '" + line + "'");
        values.push_back(cols[columns - 1]);
    }
    return ScalarField(std::move(grid), std::move(values));
}

}  // namespace orlicz
