#include <doctest.h>

#include <bvq/error.hpp>
#include <bvq/gallery.hpp>
#include <bvq/oscillation.hpp>
#include <bvq/sphere_grid.hpp>
#include <bvq/stencil.hpp>

#include <cmath>

#include "support.hpp"

using namespace bvq;
using bvqtest::box;

namespace {

// Scan of c -> mean |u - c| over a fine grid of constants.
double scanned_inf_oscillation(const Field& u, const Point& x, double rho) {
    const auto ball = ball_stencil(u, x, rho);
    double lo = 1e300, hi = -1e300;
    for (auto c : ball.cells) lo = std::min(lo, u.scalar(c)), hi = std::max(hi, u.scalar(c));
    double best = 1e300;
    for (int k = 0; k <= 2000; ++k) {
        const double c = lo + (hi - lo) * k / 2000.0;
        double s = 0.0;
        for (auto cell : ball.cells) s += std::fabs(u.scalar(cell) - c);
        best = std::min(best, s / static_cast<double>(ball.cells.size()));
    }
    return best;
}

}  // namespace

TEST_CASE("L1 centres") {
    const auto d = box(1, 0.0, 1.0, 8);
    const auto u = Field(d, 1, {5, 1, 4, 2, 3, 9, 7, 8});
    const std::vector<std::size_t> cells{0, 1, 2, 3, 4};
    const auto fit = l1_center(u, cells);
    CHECK(fit.c_star[0] == 3.0);
    CHECK(fit.value == doctest::Approx((2 + 2 + 1 + 1 + 0) / 5.0));

    // vector case: three collinear points, the middle one minimises the sum of distances
    const auto v = Field(d, 2, {0, 0, 1, 1, 3, 3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
    const std::vector<std::size_t> three{0, 1, 2};
    const auto vf = l1_center(v, three);
    CHECK(vf.c_star[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(vf.value == doctest::Approx(3 * std::sqrt(2.0) / 3).epsilon(1e-6));
}

TEST_CASE("inf-constant oscillation of a step matches a brute-force scan") {
    const auto u = gallery("step1d", box(1, -0.5, 0.5, 2048)).field;
    for (double rho : {0.2, 0.05, 0.01}) {
        const Point o{0, 0, 0};
        const auto fit = inf_const_oscillation(u, o, rho);
        CHECK(fit.value == doctest::Approx(0.5).epsilon(0.02));
        CHECK(fit.value == doctest::Approx(scanned_inf_oscillation(u, o, rho)).epsilon(1e-9));
    }
    const Point off{0.1, 0, 0};
    CHECK(inf_const_oscillation(u, off, 0.05).value == 0.0);
    CHECK_THROWS_AS(inf_const_oscillation(u, {0, 0, 0}, 1e-4), ResolutionError);
}

TEST_CASE("inf-constant oscillation invariances") {
    const auto d = box(2, -0.5, 0.5, 96);
    const auto u = gallery("disk", d).field;
    const Point x{0.25, 0.01, 0};
    const double base = inf_const_oscillation(u, x, 0.08).value;
    CHECK(inf_const_oscillation(u.scaled(-2.5), x, 0.08).value == doctest::Approx(2.5 * base).epsilon(1e-12));
    CHECK(inf_const_oscillation(u.plus_constant(4.0), x, 0.08).value == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("series decay rules") {
    Thresholds t;
    const std::vector<double> flat{0.5, 0.5, 0.5, 0.5};
    const std::vector<double> decay{0.4, 0.2, 0.1, 0.05};
    const std::vector<double> tiny{0.3, 1e-5, 2e-5, 1e-5};
    const std::vector<double> bounce{0.3, 1e-5, 0.3, 1e-5};
    CHECK_FALSE(passes_to_zero(flat, 1e-3, t));
    CHECK(passes_to_zero(decay, 1e-3, t));
    CHECK(passes_to_zero(tiny, 1e-3, t));
    CHECK_FALSE(passes_to_zero(bounce, 1e-3, t));
    CHECK(liminf_passes_to_zero(bounce, 1e-3, t));
    CHECK_FALSE(liminf_passes_to_zero(flat, 1e-3, t));
}

TEST_CASE("classification of simple points") {
    const auto d = box(1, -0.5, 0.5, 2048);
    const auto s = make_schedule(0.2, 0.7, 9);
    const auto step = gallery("step1d", d).field;
    const auto at_jump = classify_point(step, {0, 0, 0}, s);
    CHECK(at_jump.in_S.value);
    CHECK(at_jump.in_Sprime.value);
    CHECK(at_jump.in_Sdoubleprime.value);
    CHECK_FALSE(at_jump.in_Sdoubleprime.evidence.empty());
    const auto smooth = classify_point(step, {0.3, 0, 0}, s);
    CHECK_FALSE(smooth.in_S.value);

    const auto lin = gallery("linear", d).field;
    const auto p = classify_point(lin, {0.1, 0, 0}, s);
    CHECK_FALSE(p.in_S.value);
    CHECK_FALSE(p.in_Sprime.value);
    CHECK_FALSE(p.in_Sdoubleprime.value);
    CHECK(p.profile.records.size() == 9);
    CHECK(std::fabs(p.profile.records.back().mean[0] - 0.1) < 1.0 / 2048);
}

TEST_CASE("loglog origin: unbounded averages, vanishing oscillation") {
    const auto e = gallery("loglog_trace1d", default_domain("loglog_trace1d", 1, 4096));
    const auto s = make_schedule(0.2, 0.6, 10);
    const auto pc = classify_point(e.field, {0, 0, 0}, s);
    CHECK(pc.in_S.value);
    CHECK_FALSE(pc.in_Sprime.value);
    CHECK_FALSE(pc.in_Sdoubleprime.value);
}

TEST_CASE("blow-up step fit") {
    const auto u = gallery("step1d", box(1, -0.5, 0.5, 2048), {{"jump", 3.0}, {"base", -1.0}}).field;
    const auto fit = blowup_step_fit(u, {0, 0, 0}, 0.05);
    CHECK(fit.h[0] == 3.0);
    CHECK(fit.c[0] == -1.0);
    CHECK(fit.nu[0] == 1.0);
    CHECK(fit.residual == 0.0);
    CHECK(fit.jump_norm() == 3.0);

    // down step: the sign convention flips the normal, not h
    const auto down = u.scaled(-1.0);
    const auto f2 = blowup_step_fit(down, {0, 0, 0}, 0.05);
    CHECK(f2.h[0] == 3.0);
    CHECK(f2.nu[0] == -1.0);
    CHECK(f2.c[0] == -2.0);

    const auto d2 = box(2, -0.5, 0.5, 128);
    const auto plane = gallery("stepNd", d2, {{"nx", 1}, {"ny", 1}}).field;
    const auto f3 = blowup_step_fit(plane, {0, 0, 0}, 0.1);
    CHECK(f3.h[0] == doctest::Approx(1.0));
    CHECK(f3.nu[0] == doctest::Approx(std::sqrt(0.5)).epsilon(0.03));
    CHECK(f3.nu[1] == doctest::Approx(std::sqrt(0.5)).epsilon(0.03));
    CHECK(f3.residual < 0.05);

    const auto sc = blowup_step_fit(plane.scaled(2.0).plus_constant(1.0), {0, 0, 0}, 0.1);
    CHECK(sc.h[0] == doctest::Approx(2.0 * f3.h[0]).epsilon(1e-12));
    CHECK(sc.residual == doctest::Approx(2.0 * f3.residual).epsilon(1e-12));
}

TEST_CASE("splitting normals near a face") {
    const auto d = box(2, -0.5, 0.5, 64);
    const auto u = gallery("stepNd", d).field;
    const Point edge{d.coord(0, 0), 0, 0};
    const auto& all = normal_grid(2);
    const auto split = splitting_normals(u, edge, 0.07, all);
    CHECK(split.size() < all.size());
    CHECK_FALSE(split.empty());
    CHECK_THROWS_AS(blowup_step_fit(u, {0, 0, 0}, 0.001), ResolutionError);
}

TEST_CASE("rescaled pair bound at a step") {
    const auto u = gallery("step1d", box(1, -0.5, 0.5, 2048)).field;
    for (double q : {1.0, 2.0}) {
        const auto b = rescaled_pair_lower_bound(u, {0, 0, 0}, make_schedule(0.1, 0.7, 6), q);
        CHECK(b.holds);
        CHECK(b.fit_valid);
        CHECK(b.bound == doctest::Approx(0.5));
        CHECK(b.value == doctest::Approx(0.5).epsilon(1e-3));
    }
    CHECK_THROWS_AS(rescaled_pair_lower_bound(u, {0, 0, 0}, make_schedule(0.1, 0.5, 12), 1.0), ResolutionError);
}
