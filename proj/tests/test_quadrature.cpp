#include <doctest.h>

#include <bvq/error.hpp>
#include <bvq/gallery.hpp>
#include <bvq/parallel.hpp>
#include <bvq/quadrature.hpp>
#include <bvq/special.hpp>
#include <bvq/sphere_grid.hpp>
#include <bvq/stencil.hpp>

#include <cmath>

#include "support.hpp"

using namespace bvq;
using bvqtest::box;

namespace {

double unit_ball_volume(double n) { return std::pow(M_PI, n / 2) / std::tgamma(n / 2 + 1); }

}  // namespace

TEST_CASE("gamma and ball volumes against the standard library") {
    for (double x : {0.1, 0.5, 1.0, 2.5, 7.25, 12.0, 30.5})
        CHECK(lanczos_gamma(x) == doctest::Approx(std::tgamma(x)).epsilon(1e-13));
    CHECK(lanczos_gamma(-0.5) == doctest::Approx(std::tgamma(-0.5)).epsilon(1e-13));
    for (int n = 0; n <= 10; ++n) CHECK(alpha(n) == doctest::Approx(unit_ball_volume(n)).epsilon(1e-13));
    CHECK(alpha(0.5) == doctest::Approx(unit_ball_volume(0.5)).epsilon(1e-13));
    CHECK(alpha(2) == doctest::Approx(M_PI));
}

TEST_CASE("dimensional constant by three routes") {
    const double expected[] = {2.0, 2.0, 2.0 * M_PI / 3.0};
    for (int n = 1; n <= 3; ++n) {
        CHECK(c_dimensional(n) == doctest::Approx(expected[n - 1]).epsilon(1e-13));
        CHECK(c_dimensional(n, CMethod::sphere_quadrature) == doctest::Approx(expected[n - 1]).epsilon(1e-3));
        CHECK(c_dimensional(n, CMethod::ball_quadrature) == doctest::Approx(expected[n - 1]).epsilon(1e-3));
    }
    for (int n = 4; n <= 5; ++n)
        CHECK(c_dimensional(n, CMethod::sphere_quadrature) ==
              doctest::Approx(2.0 / n * unit_ball_volume(n - 1)).epsilon(1e-3));
    CHECK_THROWS_AS(c_dimensional(0), std::invalid_argument);
    CHECK_THROWS_AS(c_dimensional(8, CMethod::sphere_quadrature), std::invalid_argument);
}

TEST_CASE("lower constants stay below C_N") {
    for (int n = 1; n <= 10; ++n) {
        const double g = gamma_lower(n);
        CHECK(g > 0.0);
        CHECK(g < c_dimensional(n));
        CHECK(g == doctest::Approx(unit_ball_volume(n) * unit_ball_volume(n) /
                                   (std::pow(5.0, n - 1) * std::pow(2.0, 2 * n + 1) * unit_ball_volume(n - 1)))
                       .epsilon(1e-12));
    }
    CHECK(beta_const(2, 0.5, 2) == doctest::Approx(M_PI / (5.0 * 16.0 * 2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(beta_const(1, 1.0, 2.0), std::invalid_argument);
}

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
    const auto g = gauss_legendre(5, 0.0, 2.0);
    double w = 0.0, p = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        w += g.weights[i];
        p += g.weights[i] * std::pow(g.nodes[i], 9);
    }
    CHECK(w == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(p == doctest::Approx(102.4).epsilon(1e-13));
}

TEST_CASE("normal grids are unit, symmetric and fixed") {
    CHECK(normal_grid(1).size() == 2);
    CHECK(normal_grid(2).size() == 64);
    CHECK(normal_grid(3).size() == 242);
    CHECK(geodesic_vertices(2).size() == 162);
    for (int dim = 1; dim <= 3; ++dim) {
        const auto& g = normal_grid(dim);
        for (const auto& n : g) {
            CHECK(std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]) == doctest::Approx(1.0).epsilon(1e-14));
            bool has_negation = false;
            for (const auto& m : g) has_negation = has_negation || dist2(n, {-m[0], -m[1], -m[2]}) < 1e-24;
            CHECK(has_negation);
        }
    }
}

TEST_CASE("ball stencils and the resolution guard") {
    const auto d = box(2, -0.5, 0.5, 128);
    const auto s = ball_stencil(d, {0.01, -0.02, 0}, 0.1);
    const double h = d.max_spacing();
    CHECK(static_cast<double>(s.cells.size()) * h * h == doctest::Approx(M_PI * 0.01).epsilon(0.02));
    for (auto c : s.cells) CHECK(dist2(d.center(c), {0.01, -0.02, 0}) < 0.01);

    const auto split = split_stencil(d, s, {1, 0, 0});
    CHECK(split.plus.size() + split.minus.size() + split.on_plane.size() == s.cells.size());

    CHECK_NOTHROW(require_radius(d, 2 * h, 2.0, "rho"));
    try {
        require_radius(d, 0.01, 2.0, "rho");
        FAIL("expected ResolutionError");
    } catch (const ResolutionError& e) {
        CHECK(e.required_spacing() == doctest::Approx(0.005));
        CHECK(e.min_cells()[0] == 200);
        CHECK(e.min_cells()[2] == 0);
    }
}

TEST_CASE("ball and half-ball averages") {
    const auto d = box(2, -0.5, 0.5, 128);
    const auto lin = bvqtest::scalar_field(d, [](const Point& x) { return 3 * x[0] - x[1]; });
    const Point x{d.coord(0, 70), d.coord(1, 40), 0};
    CHECK(ball_average(lin, x, 0.1)[0] == doctest::Approx(3 * x[0] - x[1]).epsilon(1e-12));

    const auto step = gallery("stepNd", d).field;
    const Point on{0, 0, 0};
    CHECK(halfball_average(step, on, 0.1, {0, 1, 0}, Side::plus)[0] == 1.0);
    CHECK(halfball_average(step, on, 0.1, {0, 1, 0}, Side::minus)[0] == 0.0);
    const double zero[] = {0.0};
    CHECK(ball_power_mean(step, on, 0.1, zero, 2.0) == doctest::Approx(0.5).epsilon(0.01));
    CHECK_THROWS_AS(ball_average(step, on, 0.001), ResolutionError);
}

TEST_CASE("cell-averaged kernel against the closed form") {
    // mean of 1/(y-x) over x in [0,1], y in [3,4]
    const double exact = 10 * std::log(2.0) - 6 * std::log(3.0);
    CHECK(cell_averaged_kernel({3, 0, 0}, {1, 0, 0}, 1, 1.0) == doctest::Approx(exact).epsilon(1e-6));
    // adjacent cells: log singularity is integrable, mean of 1/(y-x) over [0,1]x[1,2] is 2 ln 2
    CHECK(cell_averaged_kernel({1, 0, 0}, {1, 0, 0}, 1, 1.0) == doctest::Approx(2 * std::log(2.0)).epsilon(1e-4));
    const double far = cell_averaged_kernel({40, 0, 0}, {0.5, 0, 0}, 1, 1.0);
    CHECK(far == doctest::Approx(1.0 / 20.0).epsilon(1e-3));
}

TEST_CASE("pair integral on a 1D step") {
    const auto u = gallery("step1d", box(1, -0.5, 0.5, 2048)).field;
    for (double q : {1.0, 2.0}) {
        const double v = pair_integral(u, 0.1, q);
        CHECK(v == doctest::Approx(2.0).epsilon(0.02));
    }
    CHECK_THROWS_AS(pair_integral(u, 0.001, 1.0), ResolutionError);
}

TEST_CASE("pair integral invariances") {
    const auto d = box(1, -0.5, 0.5, 1024);
    const auto u = gallery("step1d", d).field;
    const double base = pair_integral(u, 0.05, 2.0);
    CHECK(pair_integral(u.scaled(-3.0), 0.05, 2.0) == doctest::Approx(9.0 * base).epsilon(1e-12));
    CHECK(pair_integral(u.plus_constant(7.0), 0.05, 2.0) == doctest::Approx(base).epsilon(1e-12));
    const auto moved = gallery("step1d", d, {{"a", 10.0 / 1024}}).field;
    CHECK(pair_integral(moved, 0.05, 2.0) == doctest::Approx(base).epsilon(1e-12));

    set_thread_count(1);
    const double one = pair_integral(u, 0.05, 1.5);
    set_thread_count(4);
    const double four = pair_integral(u, 0.05, 1.5);
    set_thread_count(0);
    CHECK(one == four);
}

TEST_CASE("pair integral of a linear field") {
    // eps^{-1} int int_{|x-y|<eps} |x-y|^2/|x-y| over (0,1)^2, q = 2, s = 1
    // = eps^{-1} * 2 int_0^eps (1-t) t dt
    const auto d = box(1, 0.0, 1.0, 2048);
    const auto u = bvqtest::scalar_field(d, [](const Point& x) { return x[0]; });
    const double eps = 0.05;
    const double exact = 2.0 * (eps * eps / 2 - eps * eps * eps / 3) / eps;
    CHECK(pair_integral(u, eps, 2.0) == doctest::Approx(exact).epsilon(5e-3));
}
