#pragma once

#include <bvq/domain.hpp>
#include <bvq/field.hpp>

#include <vector>

namespace bvqtest {

inline bvq::Domain box(int dim, double lo, double hi, int cells) {
    const std::vector<double> l(static_cast<std::size_t>(dim), lo), h(static_cast<std::size_t>(dim), hi);
    const std::vector<int> c(static_cast<std::size_t>(dim), cells);
    return bvq::make_domain(dim, l, h, c);
}

template <class F>
bvq::Field scalar_field(const bvq::Domain& d, F f) {
    return bvq::sample_function(d, 1, [&](const bvq::Point& x, std::span<double> out) {
        out[0] = f(x);
        return true;
    });
}

}  // namespace bvqtest
