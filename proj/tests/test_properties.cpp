#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "orlicz/curvature.hpp"
#include "orlicz/flow.hpp"

using namespace orlicz;
using std::numbers::pi;

namespace {

constexpr int kTrials = 12;

// Ellipsoid {y : (y - v)^T A^{-1} (y - v) <= 1} with A = R diag(s^2) R^T: h(x) = sqrt(x^T A x) + v.x
// and det b = det A / sqrt(x^T A x)^4 in three dimensions.
struct Ellipsoid {
    double A[3][3];
    Vec3 v;
    double detA;

    double quad(const Vec3& x) const {
        double s = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) s += x[i] * A[i][j] * x[j];
        return s;
    }
    double h(const Vec3& x) const { return std::sqrt(quad(x)) + dot(v, x); }
    double det_b(const Vec3& x) const { return detA / (quad(x) * quad(x)); }
};

Ellipsoid random_ellipsoid(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> axis(0.7, 1.4), angle(-pi, pi), shift(-0.15, 0.15);
    const double s[3] = {axis(rng), axis(rng), axis(rng)};
    // rotation from three Euler angles
    const double a = angle(rng), b = angle(rng) / 2.0, c = angle(rng);
    const double ca = std::cos(a), sa = std::sin(a), cb = std::cos(b), sb = std::sin(b), cc = std::cos(c), sc = std::sin(c);
    const double R[3][3] = {{ca * cc - sa * cb * sc, -ca * sc - sa * cb * cc, sa * sb},
                            {sa * cc + ca * cb * sc, -sa * sc + ca * cb * cc, -ca * sb},
                            {sb * sc, sb * cc, cb}};
    Ellipsoid e{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double sum = 0.0;
            for (int k = 0; k < 3; ++k) sum += R[i][k] * s[k] * s[k] * R[j][k];
            e.A[i][j] = sum;
        }
    e.detA = s[0] * s[0] * s[1] * s[1] * s[2] * s[2];
    e.v = {shift(rng), shift(rng), shift(rng)};
    return e;
}

// Random positive g on the circle: 1 + small harmonics.
DensityField random_g(const GridPtr& grid, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-0.1, 0.1);
    const double a1 = u(rng), b1 = u(rng), a2 = u(rng), b2 = u(rng);
    return DensityField(ScalarField::sample(grid, [&](const Vec3& x) {
        const double t = std::atan2(x[1], x[0]);
        return 1.0 + a1 * std::cos(t) + b1 * std::sin(t) + a2 * std::cos(2 * t) + b2 * std::sin(2 * t);
    }));
}

// Radial function of an oracle body: boundary X(t) = h x + h' x_perp, solve for the direction by bisection.
double oracle_rho(const oracle::CircleBody& body, double xi) {
    const auto dir = [&](double t) {
        const double h = body.h(t), d = body.dh(t);
        return std::atan2(h * std::sin(t) + d * std::cos(t), h * std::cos(t) - d * std::sin(t));
    };
    const auto wrap = [](double a) { return std::remainder(a, 2.0 * pi); };
    // the normal-to-direction map is monotone; bracket within half a turn of xi
    double lo = xi - pi / 2, hi = xi + pi / 2;
    if (wrap(dir(lo) - xi) > 0 || wrap(dir(hi) - xi) < 0) {
        lo = xi - pi + 1e-9;
        hi = xi + pi - 1e-9;
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (wrap(dir(mid) - xi) < 0 ? lo : hi) = mid;
    }
    const double t = 0.5 * (lo + hi);
    return std::hypot(body.h(t), body.dh(t));
}

}  // namespace

TEST_CASE("random plane bodies: curvature against the exact support function") {
    std::mt19937_64 rng(20240611);
    const auto grid = build_grid(2, 256);
    for (int trial = 0; trial < kTrials; ++trial) {
        const auto ob = oracle::random_circle_body(rng);
        const ConvexBody body(oracle::sample(grid, ob));
        const auto radii = principal_radii(body);
        const auto k = gauss_curvature(body);
        const auto ja = jac_alpha(body), jas = jac_alpha_star(body);
        for (std::size_t i = 0; i < grid->size(); ++i) {
            const double t = grid->theta(i);
            const double b = ob.ddh(t) + ob.h(t);
            CHECK(std::abs(radii[i][0] - b) <= 1e-6 * (1.0 + std::abs(b)));
            CHECK(std::abs(k[i] * radii[i][0] - 1.0) <= 1e-12);
            CHECK(std::abs(ja[i] * jas[i] - 1.0) <= 1e-10);
        }
        CHECK(std::abs(total_integral_curvature(body) - 2.0 * pi) <= 1e-3);
    }
}

TEST_CASE("random plane bodies: translation moves only the support function") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> shift(-0.1, 0.1);
    const auto grid = build_grid(2, 256);
    for (int trial = 0; trial < kTrials; ++trial) {
        auto ob = oracle::random_circle_body(rng);
        const ConvexBody a(oracle::sample(grid, ob));
        const Vec3 v{shift(rng) * ob.c0, shift(rng) * ob.c0, 0.0};
        std::vector<double> moved(a.values().begin(), a.values().end());
        for (std::size_t i = 0; i < moved.size(); ++i) moved[i] += dot(v, grid->node(i));
        const ConvexBody b(ScalarField(grid, moved));
        const auto ra = principal_radii(a), rb = principal_radii(b);
        for (std::size_t i = 0; i < grid->size(); ++i) CHECK(std::abs(ra[i][0] - rb[i][0]) <= 1e-10 * (1.0 + ra[i][0]));
        CHECK(std::abs(total_integral_curvature(a) - total_integral_curvature(b)) <= 1e-3);
    }
}

TEST_CASE("random plane bodies: radial function and polar duality") {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
    const auto grid = build_grid(2, 256);
    for (int trial = 0; trial < kTrials; ++trial) {
        const auto ob = oracle::random_circle_body(rng);
        const ConvexBody body(oracle::sample(grid, ob));
        for (int k = 0; k < 6; ++k) {
            const double xi = angle(rng);
            const double rho = oracle_rho(ob, xi);
            CHECK(std::abs(radial_eval(body, grid->direction(xi)) - rho) <= 1e-6 * rho);
        }
        const ConvexBody back = polar_body(polar_body(body));
        double worst = 0.0;
        for (std::size_t i = 0; i < grid->size(); ++i) worst = std::max(worst, std::abs(back.h()[i] - body.h()[i]));
        CHECK(worst <= 1e-3);
    }
}

TEST_CASE("random plane bodies: patch consistency of the image measure") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> start(0.0, 2.0 * pi), length(0.05, 3.0);
    const auto grid = build_grid(2, 256);
    for (int trial = 0; trial < kTrials; ++trial) {
        const ConvexBody body(oracle::sample(grid, oracle::random_circle_body(rng)));
        const auto dens = integral_curvature_density(body);
        for (int k = 0; k < 4; ++k) {
            const DirectionArc arc{start(rng), length(rng)};
            const DirectionArc image = normal_image_arc(body, arc);
            CHECK(std::abs(integrate_arc(*grid, dens.values(), image.start, image.length) - arc.length) <= 5e-3);
        }
    }
}

TEST_CASE("random power phi: Orlicz density equals the L_p density") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> power(-3.0, -0.5);
    for (auto grid : {build_grid(2, 128), build_grid(3, 16)}) {
        for (int trial = 0; trial < kTrials; ++trial) {
            const double p = power(rng);
            const ConvexBody body = grid->dim() == 2 ? ConvexBody(oracle::sample(grid, oracle::random_circle_body(rng)))
                                                    : ConvexBody(ScalarField::sample(grid, [e = random_ellipsoid(rng)](const Vec3& x) { return e.h(x); }));
            const auto od = orlicz_density(body, PhiModel::power(p));
            const auto& geo = body.geometry();
            for (std::size_t i = 0; i < grid->size(); ++i) {
                const double h = body.h()[i];
                const double lp = std::pow(h, 1.0 - p) * geo.det_b[i] / std::pow(geo.radial[i], grid->dim());
                CHECK(std::abs(od[i] - lp) <= 1e-12 * lp);
            }
        }
    }
}

TEST_CASE("random ellipsoids: Gauss curvature and total measure") {
    std::mt19937_64 rng(31337);
    const auto grid = build_grid(3, 48);
    for (int trial = 0; trial < kTrials; ++trial) {
        const Ellipsoid e = random_ellipsoid(rng);
        const ConvexBody body(ScalarField::sample(grid, [&](const Vec3& x) { return e.h(x); }));
        const auto& geo = body.geometry();
        double worst = 0.0;
        for (std::size_t i = 0; i < grid->size(); ++i) {
            const double exact = e.det_b(grid->node(i));
            worst = std::max(worst, std::abs(geo.det_b[i] - exact) / exact);
        }
        CHECK(worst <= 2e-3);
        CHECK(std::abs(total_integral_curvature(body) - 4.0 * pi) <= 1e-2);
        const auto ja = jac_alpha(body), jas = jac_alpha_star(body);
        for (std::size_t i = 0; i < grid->size(); ++i) CHECK(std::abs(ja[i] * jas[i] - 1.0) <= 1e-10);
    }
}

TEST_CASE("random ellipsoids: radial function") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> n01;
    const auto grid = build_grid(3, 48);
    for (int trial = 0; trial < kTrials; ++trial) {
        const Ellipsoid e = random_ellipsoid(rng);
        const ConvexBody body(ScalarField::sample(grid, [&](const Vec3& x) { return e.h(x); }));
        for (int k = 0; k < 4; ++k) {
            const Vec3 xi = normalized({n01(rng), n01(rng), n01(rng)});
            // rho solves (rho xi - v)^T A^{-1} (rho xi - v) = 1; bisect on rho
            const auto inside = [&](double rho) {
                double best = -1e300;
                // support test: the point is inside iff x.(rho xi) <= h(x) for all x; sample densely
                for (int s = 0; s < 4000; ++s) {
                    const double z = -1.0 + (s + 0.5) / 2000.0;
                    const double ang = s * 2.399963229728653;  // golden angle spiral
                    const double rr = std::sqrt(1.0 - z * z);
                    const Vec3 x{rr * std::cos(ang), rr * std::sin(ang), z};
                    best = std::max(best, rho * dot(x, xi) - e.h(x));
                }
                return best <= 0.0;
            };
            double lo = 0.1, hi = 3.0;
            for (int it = 0; it < 50; ++it) {
                const double mid = 0.5 * (lo + hi);
                (inside(mid) ? lo : hi) = mid;
            }
            CHECK(std::abs(radial_eval(body, xi) - lo) <= 2e-3 * lo);
        }
    }
}

TEST_CASE("random data: one flow step never raises F") {
    std::mt19937_64 rng(1234);
    const auto grid = build_grid(2, 128);
    const auto phi = PhiModel::reciprocal();
    FlowConfig cfg;
    for (int trial = 0; trial < kTrials; ++trial) {
        const ConvexBody body(oracle::sample(grid, oracle::random_circle_body(rng)));
        const auto g = random_g(grid, rng);
        FlowState s = make_state(body, g, phi, cfg);
        CHECK(s.dissipation <= 0.0);
        for (int k = 0; k < 20; ++k) {
            auto r = step(s, g, phi, cfg);
            REQUIRE(r.state);
            CHECK(r.state->F <= s.F + 1e-9 * (1.0 + std::abs(s.F)));
            CHECK(r.state->bounds.max_grad_h <= r.state->bounds.max_r);
            s = std::move(*r.state);
        }
    }
}

TEST_CASE("random data: node shifts commute with the flow speed") {
    std::mt19937_64 rng(2718);
    std::uniform_int_distribution<int> shift(1, 127);
    const auto grid = build_grid(2, 128);
    const auto phi = PhiModel::power(-1.5);
    for (int trial = 0; trial < kTrials; ++trial) {
        const ConvexBody body(oracle::sample(grid, oracle::random_circle_body(rng)));
        const auto g = random_g(grid, rng);
        const int m = shift(rng);
        const std::size_t n = grid->size();
        std::vector<double> hs(n), gs(n);
        for (std::size_t i = 0; i < n; ++i) {
            hs[(i + m) % n] = body.h()[i];
            gs[(i + m) % n] = g.values()[i];
        }
        const auto s0 = flow_speed(body, g, phi);
        const auto s1 = flow_speed(ConvexBody(ScalarField(grid, hs)), DensityField(ScalarField(grid, gs)), phi);
        for (std::size_t i = 0; i < n; ++i) CHECK(s1[(i + m) % n] == s0[i]);
    }
}

TEST_CASE("random data: scale law of the geometry") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> lambda(0.2, 5.0);
    const auto grid = build_grid(3, 24);
    for (int trial = 0; trial < kTrials; ++trial) {
        const Ellipsoid e = random_ellipsoid(rng);
        const double l = lambda(rng);
        const ConvexBody a(ScalarField::sample(grid, [&](const Vec3& x) { return e.h(x); }));
        const ConvexBody b(ScalarField::sample(grid, [&](const Vec3& x) { return l * e.h(x); }));
        const auto ka = gauss_curvature(a), kb = gauss_curvature(b);
        const auto da = integral_curvature_density(a), db = integral_curvature_density(b);
        for (std::size_t i = 0; i < grid->size(); ++i) {
            CHECK(std::abs(kb[i] * l * l - ka[i]) <= 1e-10 * ka[i]);
            CHECK(std::abs(db[i] - da[i]) <= 1e-10);
        }
    }
}
