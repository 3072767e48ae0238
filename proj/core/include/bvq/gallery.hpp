#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bvq/field.hpp"
#include "bvq/interface.hpp"

namespace bvq {

// Known classification of one point; unset entries carry no claim.
struct PointExpectation {
    std::string label;
    Point x{0, 0, 0};
    std::optional<bool> in_S;
    std::optional<bool> in_Sprime;
    std::optional<bool> in_Sdoubleprime;
    std::optional<bool> generalized_jump;  // tier 1: two-valued blow-up fit
    std::optional<bool> classical_jump;    // tier 2: one-sided half-ball limits
};

struct ExpectedOutcome {
    std::vector<std::string> tags;
    std::vector<PointExpectation> points;
};

struct GalleryEntry {
    Field field;
    std::optional<InterfaceSpec> interface;
    ExpectedOutcome expected;
};

struct CatalogParam {
    std::string name;
    double default_value;
    std::string meaning;
};

struct CatalogInfo {
    std::string name;
    std::string formula;
    std::vector<int> dims;
    std::vector<CatalogParam> params;
    std::string validity;
    std::vector<std::string> expected;
};

// Stable, alphabetical-by-insertion catalog of analytic fields.
const std::vector<CatalogInfo>& catalog();
const CatalogInfo& catalog_info(const std::string& name);

// Box each entry is documented on, at the requested resolution.
Domain default_domain(const std::string& name, int dim, int cells_per_axis);

// Samples an analytic catalog entry on a grid. Unknown names and parameters
// outside the documented validity domain throw std::invalid_argument.
GalleryEntry gallery(const std::string& name, const Domain& domain, const Params& params = {});

// Wraps user-supplied samples (e.g. a bi-Hoelder embedding) as a gallery entry.
GalleryEntry gallery_user_samples(const Field& samples);

// Re-evaluates an analytic field on a different grid of the same box.
Field resample(const Field& analytic, std::span<const int> cells);

}  // namespace bvq
