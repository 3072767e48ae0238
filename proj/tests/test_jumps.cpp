#include <doctest.h>

#include <bvq/contour.hpp>
#include <bvq/error.hpp>
#include <bvq/gallery.hpp>
#include <bvq/jumps.hpp>
#include <bvq/special.hpp>

#include <cmath>
#include <sstream>

#include "support.hpp"

using namespace bvq;
using bvqtest::box;

TEST_CASE("marching interval and square") {
    const auto p = march_interval({0, 0, 0}, {1, 0, 0}, -1.0, 3.0);
    REQUIRE(p.size() == 1);
    CHECK(p[0][0] == doctest::Approx(0.25));
    CHECK(march_interval({0, 0, 0}, {1, 0, 0}, 1.0, 3.0).empty());

    // psi = x + y - 1 on the unit square: the zero set is the diagonal of length sqrt(2)
    const std::array<Point, 4> sq{Point{0, 0, 0}, Point{1, 0, 0}, Point{1, 1, 0}, Point{0, 1, 0}};
    const auto segs = march_square(sq, {-1.0, 0.0 + 1e-15, 1.0, 0.0 + 1e-15});
    double len = 0.0;
    for (const auto& s : segs) len += length(s);
    CHECK(len == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));

    const auto straight = march_square(sq, {-1.0, 1.0, 1.0, -1.0});
    REQUIRE(straight.size() == 1);
    CHECK(length(straight[0]) == doctest::Approx(1.0));

    CHECK(march_square(sq, {NAN, 1.0, 1.0, -1.0}).size() <= 1);
}

TEST_CASE("marching cube recovers plane areas") {
    std::array<Point, 8> cube;
    for (int m = 0; m < 8; ++m) cube[static_cast<std::size_t>(m)] = {double(m & 1), double((m >> 1) & 1), double((m >> 2) & 1)};
    auto total = [&](auto psi) {
        std::array<double, 8> v;
        for (std::size_t m = 0; m < 8; ++m) v[m] = psi(cube[m]);
        double a = 0.0;
        for (const auto& t : march_cube(cube, v)) a += area(t);
        return a;
    };
    CHECK(total([](const Point& x) { return x[2] - 0.3; }) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(total([](const Point& x) { return x[0] + x[1] - 1.0 + 1e-9; }) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
    const std::array<Point, 4> tet{Point{0, 0, 0}, Point{1, 0, 0}, Point{0, 1, 0}, Point{0, 0, 1}};
    const auto tri = march_tetrahedron(tet, {-1.0, 1.0, 1.0, 1.0});
    REQUIRE(tri.size() == 1);
    CHECK(area(tri[0]) == doctest::Approx(std::sqrt(3.0) / 8.0));
}

TEST_CASE("1D step: one classical jump point") {
    const auto e = gallery("step1d", box(1, -0.5, 0.5, 2048), {{"jump", 2.0}});
    const auto jf = detect_jumps(e.field, 4.0 / 2048);
    REQUIRE(jf.elements.size() == 1);
    CHECK(jf.elements[0].position[0] == doctest::Approx(0.0).epsilon(1e-3));
    CHECK(jf.elements[0].jump_norm == 2.0);
    CHECK(jf.elements[0].classical);
    CHECK(jf.measure() == 1.0);
    CHECK(q_jump_variation(jf, 2.0) == 4.0);
    CHECK(q_jump_variation(*e.interface, 2.0) == doctest::Approx(4.0));
    CHECK_THROWS_AS(detect_jumps(e.field, 1.0 / 2048), ResolutionError);
}

TEST_CASE("smooth fields have no detected jumps") {
    const auto d = box(2, -0.5, 0.5, 96);
    CHECK(detect_jumps(gallery("linear", d, {{"a0", 3.0}}).field, 4.0 / 96).empty());
    CHECK(detect_jumps(gallery("holder_cusp", d).field, 4.0 / 96).empty());
}

TEST_CASE("2D interfaces: measure and jump") {
    const auto d = box(2, -0.5, 0.5, 128);
    const auto plane = detect_jumps(gallery("stepNd", d).field, 4.0 / 128);
    CHECK(plane.measure() == doctest::Approx(1.0).epsilon(0.01));
    CHECK(plane.mean_jump() == doctest::Approx(1.0).epsilon(1e-9));
    const auto disk = detect_jumps(gallery("disk", d).field, 4.0 / 128);
    CHECK(disk.measure() == doctest::Approx(2 * M_PI * 0.25).epsilon(0.02));
    const auto vec = detect_jumps(gallery("vector_step", d).field, 4.0 / 128);
    CHECK(vec.mean_jump() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("h_combo: generalized jump without a classical one") {
    const auto e = gallery("h_combo", default_domain("h_combo", 1, 4096));
    const auto jf = detect_jumps(e.field, 4.0 * e.field.domain().max_spacing());
    REQUIRE(jf.elements.size() == 1);
    CHECK(std::fabs(jf.elements[0].position[0]) < 1e-3);
    CHECK_FALSE(jf.elements[0].classical);
    const auto fit = jump_fit_at(e.field, {0, 0, 0}, 4.0 * e.field.domain().max_spacing());
    REQUIRE(fit);
    CHECK_FALSE(classical_jump_at(e.field, {0, 0, 0}, fit->rho, *fit));
}

TEST_CASE("jump inequality on a 1D step") {
    const auto e = gallery("step1d", box(1, -0.5, 0.5, 2048));
    const auto v = verify_jump_inequality(e.field, 1.0, make_schedule(0.2, 0.7, 9), *e.interface);
    CHECK(v.pass);
    CHECK(v.lhs == doctest::Approx(2.0));
    CHECK(v.ratio == doctest::Approx(1.0).epsilon(0.05));
    CHECK(v.gamma_pass);
    CHECK(v.gamma_lhs == doctest::Approx(gamma_lower(1)));
    CHECK(v.lhs_source == "interface");
    const auto jf = detect_jumps(e.field, 4.0 / 2048);
    const auto w = verify_jump_inequality(e.field, 1.0, make_schedule(0.2, 0.7, 9), jf);
    CHECK(w.pass);
    CHECK(w.lhs == doctest::Approx(v.lhs));
}

TEST_CASE("sandwich for u = x") {
    const auto u = bvqtest::scalar_field(box(1, 0.0, 1.0, 1024), [](const Point& x) { return x[0]; });
    const auto s = sandwich_check(u, 1.0, make_schedule(0.1, 0.6, 5));
    REQUIRE(s.applicable);
    CHECK(s.A1 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(s.A2 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(s.lower_bound == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(s.pass);
    const auto step = gallery("step1d", box(1, -0.5, 0.5, 256)).field;
    CHECK_FALSE(sandwich_check(step, 1.0, make_schedule(0.1, 0.6, 3)).applicable);
    SandwichOptions tiny;
    tiny.max_pairs = 10;
    CHECK_THROWS_AS(sandwich_check(u, 1.0, make_schedule(0.1, 0.6, 3), tiny), CostCapError);
}

TEST_CASE("jump artifacts") {
    const auto jf = detect_jumps(gallery("stepNd", box(2, -0.5, 0.5, 64)).field, 4.0 / 64);
    std::ostringstream csv, geo;
    write_jump_csv(csv, jf);
    write_interface_geometry(geo, jf);
    CHECK(csv.str().rfind("x,y,z,h0,nu_x,nu_y,nu_z,residual,measure\n", 0) == 0);
    CHECK(geo.str().rfind("# bvq-interface v1\n", 0) == 0);
    std::size_t rows = 0;
    for (char c : csv.str()) rows += c == '\n';
    CHECK(rows == jf.elements.size() + 1);
}
