#include <doctest.h>

#include <bvq/error.hpp>
#include <bvq/functionals.hpp>
#include <bvq/gallery.hpp>

#include <cmath>
#include <sstream>

#include "support.hpp"

using namespace bvq;
using bvqtest::box;

TEST_CASE("schedules") {
    const auto s = make_schedule(0.2, 0.7, 9);
    const auto v = s.values();
    REQUIRE(v.size() == 9);
    CHECK(v.front() == 0.2);
    CHECK(v.back() == doctest::Approx(0.2 * std::pow(0.7, 8)));
    CHECK(s.smallest() == v.back());
    CHECK_THROWS_AS(make_schedule(0.2, 1.2, 3), std::invalid_argument);
    CHECK_THROWS_AS(make_schedule(-1, 0.5, 3), std::invalid_argument);
    CHECK_THROWS_AS(make_schedule(0.2, 0.5, 0), std::invalid_argument);

    const auto d = box(1, -0.5, 0.5, 2048);
    CHECK_NOTHROW(validate_schedule(s, d, 8.0, "test"));
    CHECK_THROWS_AS(validate_schedule(make_schedule(0.2, 0.5, 12), d, 8.0, "test"), ResolutionError);
}

TEST_CASE("trailing-window limit summaries") {
    const auto e = estimate_limit({1, 0.5, 0.25, 0.125}, {4, 3, 2.1, 2.0}, 2);
    CHECK(e.liminf == 2.0);
    CHECK(e.limsup == 2.1);
    CHECK(e.sup == 4.0);
    CHECK(e.monotonicity == Monotonicity::decreasing);
    CHECK(e.relative_spread() == doctest::Approx(0.1 / 2.1));

    const auto power = estimate_limit({1, 0.5, 0.25}, {1, 0.25, 0.0625}, 3);
    CHECK(power.order == doctest::Approx(2.0));
    CHECK(to_string(estimate_limit({1, 0.5}, {1, 1}, 2).monotonicity) == "constant");

    std::ostringstream os;
    write_eps_table(os, e, "B");
    CHECK(os.str().rfind("# eps B\n", 0) == 0);
    CHECK_THROWS_AS(estimate_limit({1}, {}, 1), std::invalid_argument);
}

TEST_CASE("besov constants of a 1D step approach C_1 = 2") {
    const auto u = gallery("step1d", box(1, -0.5, 0.5, 2048)).field;
    for (double q : {1.0, 2.0}) {
        const auto b = besov_constants(u, q, make_schedule(0.2, 0.7, 9));
        CHECK(b.lower >= 1.96);
        CHECK(b.lower <= 2.04);
        CHECK(b.upper <= 2.04);
        REQUIRE(b.limit);
        CHECK(*b.limit == doctest::Approx(2.0).epsilon(0.02));
        CHECK(b.hat >= b.upper);
    }
}

TEST_CASE("besov constants scale and translate") {
    const auto d = box(1, -0.5, 0.5, 1024);
    const auto u = gallery("step1d", d).field;
    const auto s = make_schedule(0.2, 0.7, 6);
    const auto b = besov_constants(u, 2.0, s);
    CHECK(besov_constants(u.scaled(0.5), 2.0, s).lower == doctest::Approx(0.25 * b.lower).epsilon(1e-12));
    CHECK(besov_constants(u.plus_constant(-2.0), 2.0, s).upper == doctest::Approx(b.upper).epsilon(1e-12));
}

TEST_CASE("Gagliardo seminorm closed forms for u = x on (0,1)") {
    const auto u = bvqtest::scalar_field(box(1, 0.0, 1.0, 1024), [](const Point& x) { return x[0]; });
    CHECK(gagliardo_seminorm(u, 0.5, 2.0) == doctest::Approx(1.0).epsilon(0.02));
    CHECK(gagliardo_seminorm(u, 0.25, 2.0) == doctest::Approx(8.0 / 15.0).epsilon(0.02));
    GagliardoOptions tight;
    tight.max_pairs = 1e3;
    CHECK_THROWS_AS(gagliardo_seminorm(u, 0.5, 2.0, tight), CostCapError);
}

TEST_CASE("pointwise A_rq profile for a linear field") {
    // int_{-d}^{d} |t|^q dt / d^{1+rq} = 2 d^{q(1-r)} / (q+1)
    const auto d = box(1, -0.5, 0.5, 4096);
    const auto u = bvqtest::scalar_field(d, [](const Point& x) { return x[0]; });
    const double r = 0.5, q = 2.0;
    const std::vector<double> deltas{0.1, 0.05, 0.02};
    const auto prof = a_rq_profile(u, 2048, r, q, deltas);
    for (std::size_t i = 0; i < deltas.size(); ++i)
        CHECK(prof[i] == doctest::Approx(2 * std::pow(deltas[i], q * (1 - r)) / (q + 1)).epsilon(0.01));
    const auto a = a_rq_quantity(u, r, q, make_schedule(0.05, 0.5, 3));
    CHECK(a.value > 0.0);
    CHECK(a.per_point.size() == d.cell_count());
}

TEST_CASE("ball statistics at a step") {
    const auto u = gallery("step1d", box(1, -0.5, 0.5, 2048)).field;
    const Point o{0, 0, 0};
    CHECK(double_average(u, o, 0.05, 2.0) == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(mean_q_oscillation(u, o, 0.05, 2.0) == doctest::Approx(0.25).epsilon(1e-3));
    CHECK(mean_q_oscillation(u, {0.2, 0, 0}, 0.05, 2.0) == 0.0);
}

TEST_CASE("translation seminorm of an indicator") {
    // int |u(x+h)-u(x)|^2 dx = 2|h| for the indicator of an interval
    const auto d = box(1, -0.5, 0.5, 1024);
    auto u = bvqtest::scalar_field(d, [](const Point& x) { return std::fabs(x[0]) < 0.25 ? 1.0 : 0.0; });
    u = u.with_compact_support(true);
    const auto t = besov_translation_seminorm(u, 2.0, 0.5, make_schedule(0.1, 0.5, 4));
    CHECK(t.value == doctest::Approx(2.0).epsilon(0.02));
}
