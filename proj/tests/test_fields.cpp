#include <doctest.h>

#include <bvq/field_io.hpp>
#include <bvq/gallery.hpp>
#include <bvq/kahan.hpp>
#include <bvq/parallel.hpp>

#include <cmath>
#include <set>
#include <sstream>

#include "support.hpp"

using namespace bvq;
using bvqtest::box;

TEST_CASE("domain geometry") {
    const auto d = box(2, -0.5, 0.5, 8);
    CHECK(d.cell_count() == 64);
    CHECK(d.cell_volume() == doctest::Approx(1.0 / 64));
    CHECK(d.max_spacing() == doctest::Approx(0.125));
    CHECK(d.diameter() == doctest::Approx(std::sqrt(2.0)));
    CHECK(d.coord(0, 0) == doctest::Approx(-0.4375));
    const Index idx{3, 5, 0};
    CHECK(d.unravel(d.linear(idx)) == idx);
    CHECK(d.locate(d.center(idx)) == idx);
    CHECK(d.locate({-9, 9, 0}) == Index{0, 7, 0});
    CHECK(d.contains(Point{0.5, -0.5, 0}));
    CHECK_FALSE(d.contains(Point{0.51, 0, 0}));

    const auto sub = d.cells_within({-0.5, -0.5, 0}, {0.0, 0.5, 0});
    CHECK(sub.lo == Index{0, 0, 0});
    CHECK(sub.hi == Index{4, 8, 1});

    const std::vector<int> fine{16, 16};
    const auto f = d.refined(fine);
    CHECK(f.cell_count() == 256);
    CHECK(f.lower() == d.lower());
}

TEST_CASE("domain validation") {
    const std::vector<double> lo{0.0}, hi{1.0}, bad{0.0};
    const std::vector<int> few{3}, ok{8};
    CHECK_THROWS_AS(make_domain(1, lo, hi, few), std::invalid_argument);
    CHECK_THROWS_AS(make_domain(1, lo, bad, ok), std::invalid_argument);
    CHECK_THROWS_AS(make_domain(4, lo, hi, ok), std::invalid_argument);
}

TEST_CASE("cell centres shared between grids are bitwise equal") {
    const auto coarse = box(1, -0.5, 0.5, 64);
    const std::vector<int> fine{192};
    const auto f = coarse.refined(fine);
    for (int i = 0; i < 64; ++i) CHECK(coarse.coord(0, i) == f.coord(0, 3 * i + 1));
}

TEST_CASE("field arithmetic and masks") {
    const auto d = box(1, 0.0, 1.0, 16);
    const auto u = bvqtest::scalar_field(d, [](const Point& x) { return x[0]; });
    const auto v = u.scaled(2.0).plus_constant(1.0);
    for (std::size_t i = 0; i < d.cell_count(); ++i) CHECK(v.scalar(i) == 2.0 * u.scalar(i) + 1.0);
    CHECK(u.plus(u).scalar(5) == 2.0 * u.scalar(5));

    const auto masked = sample_function(d, 1, [](const Point& x, std::span<double> out) {
        out[0] = 1.0;
        return x[0] > 0.25;
    });
    CHECK(masked.masked_count() == 4);
    CHECK(masked.masked_fraction() == doctest::Approx(0.25));
    CHECK(domain_mean(masked)[0] == 1.0);
    CHECK(oscillation_scale(masked) == 0.0);

    std::vector<double> nan(16, 0.0);
    nan[3] = NAN;
    CHECK_THROWS_AS(Field(d, 1, nan), std::invalid_argument);

    const auto shifted = u.translated_cells({2, 0, 0});
    CHECK(shifted.scalar(0) == 0.0);
    CHECK(shifted.scalar(5) == u.scalar(3));
}

TEST_CASE("field io round trips bitwise") {
    const auto d = box(2, -0.5, 0.5, 8);
    const auto u = sample_function(d, 2, [](const Point& x, std::span<double> out) {
        out[0] = std::sin(10 * x[0]) / 3.0;
        out[1] = x[1] * x[0] + 1e-300;
        return x[0] + x[1] < 0.6;
    });
    for (auto enc : {Encoding::binary_le, Encoding::csv}) {
        std::stringstream ss;
        write_field(ss, u, enc);
        const auto back = read_field(ss);
        CHECK(back.domain() == d);
        CHECK(back.codim() == 2);
        REQUIRE(back.values().size() == u.values().size());
        for (std::size_t i = 0; i < u.values().size(); ++i) CHECK(back.values()[i] == u.values()[i]);
        for (std::size_t i = 0; i < d.cell_count(); ++i) CHECK(back.masked(i) == u.masked(i));
    }
    std::stringstream junk("not a field");
    CHECK_THROWS(read_field(junk));
}

TEST_CASE("catalog is stable and documents every entry") {
    const auto& c = catalog();
    std::set<std::string> names;
    for (const auto& e : c) {
        CHECK_FALSE(e.formula.empty());
        CHECK_FALSE(e.validity.empty());
        CHECK_FALSE(e.dims.empty());
        names.insert(e.name);
    }
    CHECK(names.size() == c.size());
    CHECK(&catalog() == &c);
    CHECK(catalog_info("loglog").validity == "box inside B_{1/2}(0)");
    const auto& h = catalog_info("h_combo").expected;
    CHECK(h == std::vector<std::string>{"J = {}", "J' contains 0"});
    CHECK_THROWS_AS(catalog_info("nope"), std::invalid_argument);
}

TEST_CASE("gallery validation") {
    CHECK_THROWS_AS(gallery("step1d", box(1, -0.5, 0.5, 64), {{"a", 0.7}}), std::invalid_argument);
    CHECK_THROWS_AS(gallery("step1d", box(1, -0.5, 0.5, 64), {{"bogus", 1}}), std::invalid_argument);
    CHECK_THROWS_AS(gallery("loglog", box(2, -0.5, 0.5, 64)), std::invalid_argument);
    CHECK_THROWS_AS(gallery("disk", box(1, -0.5, 0.5, 64)), std::invalid_argument);
    CHECK_NOTHROW(gallery("loglog", default_domain("loglog", 2, 64)));
}

TEST_CASE("gallery fields carry interfaces with closed-form measures") {
    const auto step = gallery("step1d", default_domain("step1d", 1, 64));
    REQUIRE(step.interface);
    CHECK(step.interface->measure() == 1.0);
    const auto disk = gallery("disk", default_domain("disk", 2, 64));
    CHECK(disk.interface->measure() == doctest::Approx(2 * M_PI * 0.25));
    const auto plane = gallery("stepNd", default_domain("stepNd", 3, 16));
    CHECK(plane.interface->measure() == doctest::Approx(1.0));
    const auto js = disk.interface->pieces.front().jump_at({0.25, 0, 0});
    CHECK(std::fabs(js.plus[0] - js.minus[0]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(js.plus[0] == 0.0);
    CHECK(js.normal[0] == doctest::Approx(1.0));
    CHECK(std::hypot(js.normal[0], js.normal[1]) == doctest::Approx(1.0));
}

TEST_CASE("interface sample weights add up to the measure") {
    const auto d = gallery("disk", default_domain("disk", 2, 64));
    double w = 0.0;
    for (const auto& [p, wt] : d.interface->pieces.front().samples(500)) {
        CHECK(std::hypot(p[0], p[1]) == doctest::Approx(0.25));
        w += wt;
    }
    CHECK(w == doctest::Approx(2 * M_PI * 0.25));
    const auto tri = polygon_piece({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, constant_jump({1}, {0}, {0, 0, 1}));
    CHECK(tri.measure() == doctest::Approx(0.5));
}

TEST_CASE("blocks2d neighbours are separated") {
    for (double seed : {1.0, 2.0, 3.0, 17.0}) {
        const auto e = gallery("blocks2d", default_domain("blocks2d", 2, 64), {{"seed", seed}, {"nx", 4}, {"ny", 3}});
        REQUIRE(e.interface);
        CHECK(e.interface->pieces.size() == 17);
        for (const auto& p : e.interface->pieces) {
            const auto js = p.jump_at(p.vertices.front());
            CHECK(std::fabs(js.plus[0] - js.minus[0]) >= 0.2);
        }
    }
    CHECK_THROWS_AS(gallery("blocks2d", default_domain("blocks2d", 2, 64), {{"amplitude", 0}}), std::invalid_argument);
}

TEST_CASE("resample evaluates the same analytic field") {
    const auto e = gallery("holder_cusp", default_domain("holder_cusp", 2, 32));
    const std::vector<int> fine{96, 96};
    const auto f = resample(e.field, fine);
    CHECK(f.domain().cell_count() == 96 * 96);
    CHECK(f.scalar(f.domain().linear({4, 7, 0})) == e.field.scalar(e.field.domain().linear({1, 2, 0})));
}

TEST_CASE("compensated sums") {
    CompensatedSum s;
    s.add(1.0);
    for (int i = 0; i < 1000; ++i) s.add(1e-16);
    s.add(-1.0);
    CHECK(s.value() == doctest::Approx(1e-13).epsilon(1e-6));
}

TEST_CASE("chunked loops cover every chunk once") {
    const auto plan = make_chunk_plan(1001, 8);
    std::vector<int> hits(plan.count(), 0);
    parallel_chunks(plan.count(), [&](std::size_t c) { hits[c] += 1; });
    for (int h : hits) CHECK(h == 1);
    std::size_t covered = 0;
    for (std::size_t c = 0; c < plan.count(); ++c) covered += plan.end(c) - plan.begin(c);
    CHECK(covered == 1001);
}
