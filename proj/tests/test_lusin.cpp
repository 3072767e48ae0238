#include <doctest.h>

#include <bvq/error.hpp>
#include <bvq/gallery.hpp>
#include <bvq/lusin.hpp>

#include <cmath>
#include <random>

#include "support.hpp"

using namespace bvq;
using bvqtest::box;

namespace {

std::vector<int> doubling(int last) {
    std::vector<int> v;
    for (int n = 1; n <= last; n *= 2) v.push_back(n);
    return v;
}

struct StepSetup {
    Field u;
    GoodSetFiltration f;
};

StepSetup step_filtration(int cells) {
    const auto d = box(1, -0.5, 0.5, cells);
    auto u = gallery("step1d", d).field;
    const auto K = d.cells_within({-0.4, 0, 0}, {0.4, 0, 0});
    auto f = build_filtration(u, K, 0.5, 2.0, doubling(1024), make_schedule(0.1, 0.8, 14));
    return {std::move(u), std::move(f)};
}

}  // namespace

TEST_CASE("filtration is nested and removes the jump neighbourhood") {
    const auto [u, f] = step_filtration(1024);
    CHECK(f.monotone);
    for (std::size_t k = 1; k < f.members.size(); ++k)
        for (std::size_t i = 0; i < f.members[k].size(); ++i)
            if (f.members[k - 1][i]) CHECK(f.members[k][i]);
    for (std::size_t k = 1; k < f.removed.size(); ++k) CHECK(f.removed[k] <= f.removed[k - 1]);
    CHECK(f.k_measure == doctest::Approx(0.8).epsilon(0.01));
    CHECK(f.cutoffs.front() <= 0.1);
    CHECK(f.cutoffs.front() > 0.099);
    CHECK(f.cutoffs[4] == doctest::Approx(1.0 / 16));
    CHECK_FALSE(f.warnings.empty());
    for (const auto& row : exhaustion_report(u, f)) CHECK(row.below);
}

TEST_CASE("filtration validation") {
    const auto d = box(1, -0.5, 0.5, 256);
    const auto u = gallery("step1d", d).field;
    const auto K = d.cells_within({-0.4, 0, 0}, {0.4, 0, 0});
    const auto s = make_schedule(0.1, 0.8, 5);
    CHECK_THROWS_AS(build_filtration(u, K, 1.5, 2.0, {1, 2}, s), std::invalid_argument);
    CHECK_THROWS_AS(build_filtration(u, K, 0.5, 0.5, {1, 2}, s), std::invalid_argument);
    CHECK_THROWS_AS(build_filtration(u, K, 0.5, 2.0, {2, 1}, s), std::invalid_argument);
    CHECK_THROWS_AS(build_filtration(u, d.full_box(), 0.5, 2.0, {1, 2}, s), std::invalid_argument);
    CHECK_THROWS_AS(build_filtration(u, K, 0.5, 2.0, {1, 2}, make_schedule(0.1, 0.5, 8)), ResolutionError);
}

TEST_CASE("compact selection and Hoelder extension on a step") {
    const auto [u, f] = step_filtration(1024);
    const auto sel = select_compact(f, 0.01);
    CHECK(sel.removed < 0.01);
    const auto& d = u.domain();
    for (std::size_t i = 0; i < d.cell_count(); ++i) {
        const double x = d.center(i)[0];
        const bool in_K = std::fabs(x) <= 0.4;
        if (!in_K) CHECK_FALSE(sel.B[i]);
        else if (!sel.B[i]) CHECK(std::fabs(x) < 0.01);
    }
    const auto coarse = build_filtration(u, f.K, 0.5, 2.0, {1, 2}, make_schedule(0.1, 0.8, 14));
    CHECK_THROWS_AS(select_compact(coarse, 1e-9), TargetNotReachedError);

    const auto H = holder_constant_on(u, sel.B, 0.5);
    CHECK(H.exhaustive);
    CHECK(H.combined > 0.0);
    const auto cert = holder_extend(u, sel.B, 0.5, H.combined);
    CHECK(cert.max_deviation_on_B == 0.0);
    CHECK(cert.audit.pass);
    CHECK(cert.audit.max_ratio <= cert.global_bound + 1e-9);
    const auto again = holder_extend(cert.extension, sel.B, 0.5, H.combined);
    for (std::size_t i = 0; i < d.cell_count(); ++i) CHECK(again.extension.scalar(i) == cert.extension.scalar(i));
    CHECK_THROWS_AS(holder_extend(u, sel.B, 0.5, 0.5 * H.combined), std::invalid_argument);
}

TEST_CASE("Hoelder constant matches a direct pair scan") {
    const auto d = box(1, 0.0, 1.0, 256);
    const auto u = bvqtest::scalar_field(d, [](const Point& x) { return std::sqrt(x[0]); });
    const auto B = mask_from_box(d, d.cells_within({0.2, 0, 0}, {0.8, 0, 0}));
    double best = 0.0;
    for (std::size_t i = 0; i < d.cell_count(); ++i)
        for (std::size_t j = i + 1; j < d.cell_count(); ++j) {
            if (!B[i] || !B[j]) continue;
            const double dx = std::fabs(d.center(i)[0] - d.center(j)[0]);
            best = std::max(best, std::fabs(u.scalar(i) - u.scalar(j)) / std::sqrt(dx));
        }
    const auto H = holder_constant_on(u, B, 0.5);
    CHECK(H.combined == doctest::Approx(best).epsilon(1e-12));
    const auto cert = holder_extend(u, B, 0.5, H.combined);
    CHECK(cert.audit.pass);
    const auto audit = audit_holder(cert.extension, 0.5, cert.global_bound, 7, 20000);
    CHECK(audit.pass);
    CHECK(audit.pairs > 0);
}

TEST_CASE("vector extension keeps the componentwise bound") {
    const auto d = box(2, -0.5, 0.5, 24);
    const auto u = sample_function(d, 2, [](const Point& x, std::span<double> out) {
        out[0] = std::sin(3 * x[0]);
        out[1] = x[1] > 0 ? 1.0 : 0.0;
        return true;
    });
    const auto B = mask_from_box(d, d.cells_within({-0.3, 0.05, 0}, {0.3, 0.4, 0}));
    const auto H = holder_constant_on(u, B, 1.0);
    CHECK(H.per_component.size() == 2);
    const auto cert = holder_extend(u, B, 1.0, H.combined);
    CHECK(cert.max_deviation_on_B == 0.0);
    CHECK(cert.global_bound == doctest::Approx(2.0 * H.combined));
    CHECK(cert.audit.pass);
}
