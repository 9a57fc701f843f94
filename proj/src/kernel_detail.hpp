#pragma once

// Pointwise math shared by the serial and OpenMP kernel loops.

#include <algorithm>
#include <cmath>

#include "orlicz/kernels.hpp"

namespace orlicz::detail {

// Five-point centred differences fitted to trigonometric polynomials: exact on
// 1, cos, sin, cos 2, sin 2 of the coordinate, fourth order in general.
struct Fitted {
    double a1 = 0, a2 = 0;  // first derivative: a1 (f1 - f-1) + a2 (f2 - f-2)
    double c1 = 0, c2 = 0;  // second: c1 (f1 + f-1 - 2 f0) + c2 (f2 + f-2 - 2 f0)
    double first_bound = 0;   // absolute row sums, for stability bounds
    double second_bound = 0;

    Fitted() = default;
    explicit Fitted(double step) {
        const double u = std::cos(step);
        const double s = std::sin(step);
        const double q = std::pow(std::sin(0.5 * step), 2);
        a1 = (u + 1.0) / (s * (2.0 * u + 1.0));
        a2 = -1.0 / (4.0 * s * u * (2.0 * u + 1.0));
        c1 = (2.0 * u + 2.0) / (4.0 * q * (2.0 * u + 1.0));
        c2 = -1.0 / (8.0 * q * (2.0 * u + 1.0) * (u + 1.0));
        first_bound = 2.0 * (std::abs(a1) + std::abs(a2));
        second_bound = std::abs(2.0 * c1 + 2.0 * c2) + 2.0 * (std::abs(c1) + std::abs(c2));
    }

    double first(double fm2, double fm1, double fp1, double fp2) const {
        return a1 * (fp1 - fm1) + a2 * (fp2 - fm2);
    }
    double second(double fm2, double fm1, double f0, double fp1, double fp2) const {
        return c1 * ((fp1 - f0) + (fm1 - f0)) + c2 * ((fp2 - f0) + (fm2 - f0));
    }
};

struct Stencil {
    int dim;
    int rows;
    int columns;
    int half;  // columns / 2: longitude shift that maps a ghost row across the pole
    Fitted theta;
    Fitted phi;
    const SphereGrid* grid;

    explicit Stencil(const SphereGrid& g)
        : dim(g.dim()),
          rows(g.rows()),
          columns(g.columns()),
          half(g.columns() / 2),
          theta(g.theta_step()),
          phi(g.dim() == 3 ? Fitted(g.phi_step()) : Fitted()),
          grid(&g) {}

    // Value at (row, column); rows past a pole continue on the opposite meridian.
    double at(const double* f, int row, int column) const {
        if (row < 0) {
            row = -row - 1;
            column += half;
        } else if (row >= rows) {
            row = 2 * rows - 1 - row;
            column += half;
        }
        column %= columns;
        if (column < 0) column += columns;
        return f[static_cast<std::size_t>(row) * columns + column];
    }

    // d/dphi at (row, column).
    double phi_first(const double* f, int row, int column) const {
        return phi.first(at(f, row, column - 2), at(f, row, column - 1), at(f, row, column + 1),
                         at(f, row, column + 2));
    }
};

struct NodeDerivatives {
    double d1 = 0, d2 = 0, h11 = 0, h12 = 0, h22 = 0;
};

inline NodeDerivatives derivatives_at(const Stencil& s, const double* f, std::size_t i) {
    NodeDerivatives out;
    if (s.dim == 2) {
        const int n = s.columns;
        const int k = static_cast<int>(i);
        const double fm2 = f[(k + n - 2) % n];
        const double fm1 = f[(k + n - 1) % n];
        const double fp1 = f[(k + 1) % n];
        const double fp2 = f[(k + 2) % n];
        out.d1 = s.theta.first(fm2, fm1, fp1, fp2);
        out.h11 = s.theta.second(fm2, fm1, f[k], fp1, fp2);
        return out;
    }
    const int j = static_cast<int>(i) / s.columns;
    const int k = static_cast<int>(i) % s.columns;
    const double f0 = f[i];
    const double tm2 = s.at(f, j - 2, k), tm1 = s.at(f, j - 1, k);
    const double tp1 = s.at(f, j + 1, k), tp2 = s.at(f, j + 2, k);
    const double pm2 = s.at(f, j, k - 2), pm1 = s.at(f, j, k - 1);
    const double pp1 = s.at(f, j, k + 1), pp2 = s.at(f, j, k + 2);

    const double ft = s.theta.first(tm2, tm1, tp1, tp2);
    const double ftt = s.theta.second(tm2, tm1, f0, tp1, tp2);
    const double fp = s.phi.first(pm2, pm1, pp1, pp2);
    const double fpp = s.phi.second(pm2, pm1, f0, pp1, pp2);
    const double ftp = s.theta.first(s.phi_first(f, j - 2, k), s.phi_first(f, j - 1, k),
                                     s.phi_first(f, j + 1, k), s.phi_first(f, j + 2, k));

    const double sn = s.grid->row_sin(j);
    const double cot = s.grid->row_cos(j) / sn;
    out.d1 = ft;
    out.d2 = fp / sn;
    out.h11 = ftt;
    out.h12 = (ftp - cot * fp) / sn;
    out.h22 = fpp / (sn * sn) + cot * ft;
    return out;
}

inline void store(FrameDerivatives& out, std::size_t i, const NodeDerivatives& d) {
    out.d1[i] = d.d1;
    out.d2[i] = d.d2;
    out.h11[i] = d.h11;
    out.h12[i] = d.h12;
    out.h22[i] = d.h22;
}

inline void geometry_at(const Stencil& s, const double* h, std::size_t i, SupportGeometry& out) {
    const NodeDerivatives d = derivatives_at(s, h, i);
    store(out.derivatives, i, d);
    const double hv = h[i];
    if (s.dim == 2) {
        const double b = d.h11 + hv;
        out.radial[i] = std::sqrt(d.d1 * d.d1 + hv * hv);
        out.det_b[i] = b;
        out.radius_min[i] = b;
        out.radius_max[i] = b;
        return;
    }
    const double b11 = d.h11 + hv;
    const double b22 = d.h22 + hv;
    const double b12 = d.h12;
    out.radial[i] = std::sqrt(d.d1 * d.d1 + d.d2 * d.d2 + hv * hv);
    out.det_b[i] = b11 * b22 - b12 * b12;
    const double mean = 0.5 * (b11 + b22);
    const double disc = std::hypot(0.5 * (b11 - b22), b12);
    out.radius_min[i] = mean - disc;
    out.radius_max[i] = mean + disc;
}

inline double pow_dim(double r, int dim) { return dim == 2 ? r * r : r * r * r; }

inline void flow_at(const Stencil& s, const SupportGeometry& geo, const FlowInputs& in,
                    std::size_t i, FlowFields& out) {
    const PhiModel& phi = *in.phi;
    const double h = in.h[i];
    const double g = in.g[i];
    const double r = geo.radial[i];
    const double det = geo.det_b[i];
    const double rn = pow_dim(r, s.dim);
    const double curvature = 1.0 / det;
    const double arg = in.mode == PhiArgument::radial ? r : 1.0 / h;
    const double phi_a = phi(arg);
    const double big_g = g * rn / phi_a;
    const double gk = big_g * curvature;

    out.speed[i] = h - gk;
    out.residual[i] = h * phi_a * det / rn - g;
    out.lyapunov[i] = std::log(h) - phi.primitive(r) * h * det / (rn * g);
    const double diff = gk - h;
    out.dissipation[i] = -(diff * diff) / (h * gk);

    // Linearization: d speed / d(hess_ij h) = G K b^{-1}_ij.
    if (s.dim == 2) {
        out.stiffness[i] = gk * curvature * s.theta.second_bound;
        return;
    }
    const auto& dv = geo.derivatives;
    const double b11 = dv.h11[i] + h;
    const double b22 = dv.h22[i] + h;
    const double b12 = dv.h12[i];
    const double scale = gk * curvature;
    const double a11 = std::abs(scale * b22);
    const double a22 = std::abs(scale * b11);
    const double a12 = std::abs(scale * b12);
    const int j = static_cast<int>(i) / s.columns;
    const double sn = s.grid->row_sin(j);
    const double cot = std::abs(s.grid->row_cos(j) / sn);
    double lambda = a11 * s.theta.second_bound + a22 * cot * s.theta.first_bound;
    if (!in.axisymmetric) {
        lambda += a22 * s.phi.second_bound / (sn * sn);
        lambda += 2.0 * a12 * (s.theta.first_bound + cot) * s.phi.first_bound / sn;
    }
    out.stiffness[i] = lambda;
}

}  // namespace orlicz::detail
