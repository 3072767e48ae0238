#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace bvq {

// Raised when a radius is too small for the grid it is evaluated on.
class ResolutionError : public std::runtime_error {
public:
    ResolutionError(const std::string& what, double required_spacing, std::array<int, 3> min_cells)
        : std::runtime_error(what), required_spacing_(required_spacing), min_cells_(min_cells) {}

    double required_spacing() const noexcept { return required_spacing_; }
    // Smallest cells-per-axis that satisfies the guard (0 for unused axes).
    const std::array<int, 3>& min_cells() const noexcept { return min_cells_; }

private:
    double required_spacing_;
    std::array<int, 3> min_cells_;
};

class CostCapError : public std::runtime_error {
public:
    CostCapError(const std::string& what, double requested, double cap)
        : std::runtime_error(what), requested_(requested), cap_(cap) {}
    double requested() const noexcept { return requested_; }
    double cap() const noexcept { return cap_; }

private:
    double requested_;
    double cap_;
};

class EmptyStencilError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TargetNotReachedError : public std::runtime_error {
public:
    TargetNotReachedError(const std::string& what, double best)
        : std::runtime_error(what), best_(best) {}
    double best_achieved() const noexcept { return best_; }

private:
    double best_;
};

}  // namespace bvq
