#include "bvq/field.hpp"

#include <algorithm>
#include <stdexcept>

#include "bvq/kahan.hpp"

namespace bvq {

Field::Field(Domain domain, int codim, std::vector<double> values, std::vector<std::uint8_t> mask,
             bool compact_support, std::optional<AnalyticSpec> analytic)
    : domain_(std::move(domain)),
      codim_(codim),
      compact_support_(compact_support),
      analytic_(std::move(analytic)) {
    if (codim < 1) throw std::invalid_argument("codomain dimension must be positive");
    if (values.size() != domain_.cell_count() * static_cast<std::size_t>(codim))
        throw std::invalid_argument("value array length does not match cells x codomain dimension");
    if (!mask.empty() && mask.size() != domain_.cell_count())
        throw std::invalid_argument("mask must have one flag per cell");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("field values must be finite (mask singular cells)");
    values_ = std::make_shared<const std::vector<double>>(std::move(values));
    mask_ = std::make_shared<const std::vector<std::uint8_t>>(std::move(mask));
}

std::size_t Field::masked_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(mask_->begin(), mask_->end(), [](auto m) { return m != 0; }));
}

double Field::masked_fraction() const noexcept {
    return static_cast<double>(masked_count()) / static_cast<double>(domain_.cell_count());
}

Field Field::scaled(double lambda) const {
    std::vector<double> v(*values_);
    for (double& x : v) x *= lambda;
    return Field(domain_, codim_, std::move(v), *mask_, compact_support_);
}

Field Field::plus_constant(std::span<const double> c) const {
    if (c.size() != static_cast<std::size_t>(codim_)) throw std::invalid_argument("constant has wrong dimension");
    std::vector<double> v(*values_);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += c[i % c.size()];
    return Field(domain_, codim_, std::move(v), *mask_, false);
}

Field Field::plus_constant(double c) const {
    std::vector<double> cv(static_cast<std::size_t>(codim_), c);
    return plus_constant(cv);
}

Field Field::plus(const Field& other) const {
    if (!(other.domain_ == domain_) || other.codim_ != codim_)
        throw std::invalid_argument("fields live on different grids or codomains");
    std::vector<double> v(*values_);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += (*other.values_)[i];
    std::vector<std::uint8_t> m;
    if (has_mask() || other.has_mask()) {
        m.assign(domain_.cell_count(), 0);
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = masked(i) || other.masked(i);
    }
    return Field(domain_, codim_, std::move(v), std::move(m), compact_support_ && other.compact_support_);
}

Field Field::with_compact_support(bool flag) const {
    Field f = *this;
    f.compact_support_ = flag;
    return f;
}

Field Field::translated_cells(const Index& shift) const {
    const auto d = static_cast<std::size_t>(codim_);
    std::vector<double> v(values_->size(), 0.0);
    std::vector<std::uint8_t> m;
    if (has_mask()) m.assign(domain_.cell_count(), 0);
    for (std::size_t i = 0; i < domain_.cell_count(); ++i) {
        Index src = domain_.unravel(i);
        for (int a = 0; a < 3; ++a) src[a] -= shift[a];
        if (!domain_.contains(src)) continue;
        const std::size_t j = domain_.linear(src);
        for (std::size_t k = 0; k < d; ++k) v[i * d + k] = (*values_)[j * d + k];
        if (!m.empty()) m[i] = (*mask_)[j];
    }
    return Field(domain_, codim_, std::move(v), std::move(m), compact_support_);
}

std::vector<double> domain_mean(const Field& u) {
    const auto d = static_cast<std::size_t>(u.codim());
    std::vector<CompensatedSum> acc(d);
    std::size_t used = 0;
    for (std::size_t i = 0; i < u.domain().cell_count(); ++i) {
        if (u.masked(i)) continue;
        const auto v = u.value(i);
        for (std::size_t k = 0; k < d; ++k) acc[k].add(v[k]);
        ++used;
    }
    if (used == 0) throw std::invalid_argument("field has no unmasked cells");
    std::vector<double> mean(d);
    for (std::size_t k = 0; k < d; ++k) mean[k] = acc[k].value() / static_cast<double>(used);
    return mean;
}

double oscillation_scale(const Field& u) {
    const auto mean = domain_mean(u);
    CompensatedSum acc;
    std::size_t used = 0;
    for (std::size_t i = 0; i < u.domain().cell_count(); ++i) {
        if (u.masked(i)) continue;
        acc.add(norm_diff(u.value(i), mean));
        ++used;
    }
    return acc.value() / static_cast<double>(used);
}

}  // namespace bvq
