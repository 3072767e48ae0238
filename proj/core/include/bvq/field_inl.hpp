#pragma once

#include <cmath>

namespace bvq {

template <class F>
Field sample_function(const Domain& domain, int codim, F&& f, bool compact_support,
                      std::optional<AnalyticSpec> analytic) {
    const std::size_t n = domain.cell_count();
    const auto d = static_cast<std::size_t>(codim);
    std::vector<double> values(n * d, 0.0);
    std::vector<std::uint8_t> mask(n, 0);
    bool any_masked = false;
    for (std::size_t i = 0; i < n; ++i) {
        const Point x = domain.center(i);
        if (!f(x, std::span<double>(values.data() + i * d, d))) {
            mask[i] = 1;
            any_masked = true;
            for (std::size_t k = 0; k < d; ++k) values[i * d + k] = 0.0;
        }
    }
    if (!any_masked) mask.clear();
    return Field(domain, codim, std::move(values), std::move(mask), compact_support, std::move(analytic));
}

inline double norm_diff(std::span<const double> a, std::span<const double> b) noexcept {
    if (a.size() == 1) return std::fabs(a[0] - b[0]);
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(s);
}

}  // namespace bvq
