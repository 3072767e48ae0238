#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bvq/domain.hpp"

namespace bvq {

using Params = std::map<std::string, double>;

// Catalog entry a field was sampled from.
struct AnalyticSpec {
    std::string catalog_id;
    Params params;
};

// Immutable cell-centre samples of u: Omega -> R^d, stored interleaved.
class Field {
public:
    Field(Domain domain, int codim, std::vector<double> values, std::vector<std::uint8_t> mask = {},
          bool compact_support = false, std::optional<AnalyticSpec> analytic = std::nullopt);

    const Domain& domain() const noexcept { return domain_; }
    int codim() const noexcept { return codim_; }
    std::span<const double> values() const noexcept { return *values_; }
    std::span<const double> value(std::size_t cell) const noexcept {
        return {values_->data() + cell * static_cast<std::size_t>(codim_), static_cast<std::size_t>(codim_)};
    }
    double scalar(std::size_t cell) const noexcept { return (*values_)[cell * static_cast<std::size_t>(codim_)]; }

    bool has_mask() const noexcept { return !mask_->empty(); }
    bool masked(std::size_t cell) const noexcept { return !mask_->empty() && (*mask_)[cell] != 0; }
    std::span<const std::uint8_t> mask() const noexcept { return *mask_; }
    std::size_t masked_count() const noexcept;
    double masked_fraction() const noexcept;

    bool compact_support() const noexcept { return compact_support_; }
    const std::optional<AnalyticSpec>& analytic() const noexcept { return analytic_; }
    bool is_analytic() const noexcept { return analytic_.has_value(); }

    // Derived fields are sampled fields (the catalog tag is dropped).
    Field scaled(double lambda) const;
    Field plus_constant(std::span<const double> c) const;
    Field plus_constant(double c) const;
    Field plus(const Field& other) const;
    Field with_compact_support(bool flag) const;
    // u(. - shift*h) with zero fill; models translation of a compactly supported field.
    Field translated_cells(const Index& shift) const;

private:
    Domain domain_;
    int codim_;
    std::shared_ptr<const std::vector<double>> values_;
    std::shared_ptr<const std::vector<std::uint8_t>> mask_;
    bool compact_support_;
    std::optional<AnalyticSpec> analytic_;
};

// Cell-centre sampling of f: R^N -> R^d; cells where f returns false are masked.
template <class F>
Field sample_function(const Domain& domain, int codim, F&& f, bool compact_support = false,
                      std::optional<AnalyticSpec> analytic = std::nullopt);

// Mean of u over the unmasked cells of Omega.
std::vector<double> domain_mean(const Field& u);
// Mean of |u - mean| over Omega; the scale used by scale-aware thresholds.
double oscillation_scale(const Field& u);

inline double norm_diff(std::span<const double> a, std::span<const double> b) noexcept;

}  // namespace bvq

#include "bvq/field_inl.hpp"
