#include "bvq/special.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bvq {

double lanczos_gamma(double x) {
    static constexpr double g = 7.0;
    static constexpr std::array<double, 9> p{0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                             771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                             -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (x < 0.5) return std::numbers::pi / (std::sin(std::numbers::pi * x) * lanczos_gamma(1.0 - x));
    x -= 1.0;
    double a = p[0];
    for (std::size_t i = 1; i < p.size(); ++i) a += p[i] / (x + static_cast<double>(i));
    const double t = x + g + 0.5;
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

double alpha(double s) {
    if (!(s >= 0.0)) throw std::invalid_argument("alpha: s must be >= 0");
    return std::pow(std::numbers::pi, 0.5 * s) / lanczos_gamma(0.5 * s + 1.0);
}

GaussRule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw std::invalid_argument("Gauss rule needs at least one node");
    GaussRule r{std::vector<double>(static_cast<std::size_t>(n)), std::vector<double>(static_cast<std::size_t>(n))};
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::fabs(dz) < 1e-16) break;
        }
        // Recompute the derivative at the converged node.
        double p0 = 1.0, p1 = 0.0;
        for (int k = 1; k <= n; ++k) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        const auto lo = static_cast<std::size_t>(i), hi = static_cast<std::size_t>(n - 1 - i);
        r.nodes[lo] = mid - half * z;
        r.nodes[hi] = mid + half * z;
        r.weights[lo] = r.weights[hi] = half * w;
    }
    return r;
}

namespace {

// Integral of f over S^{m-1} in hyperspherical coordinates, first angle
// measured from e_1 and split at pi/2.
double sphere_integral(int m, const std::function<double(const std::vector<double>&)>& f, int nodes) {
    std::vector<double> z(static_cast<std::size_t>(m), 0.0);
    const GaussRule lo = gauss_legendre(nodes, 0.0, 0.5 * std::numbers::pi);
    const GaussRule hi = gauss_legendre(nodes, 0.5 * std::numbers::pi, std::numbers::pi);
    // rec(level, scale): integrate over S^{m-1-level} embedded in coordinates level.., radius scale.
    std::function<double(int, double)> rec = [&](int level, double scale) -> double {
        const int dim_left = m - level;
        if (dim_left == 1) {
            double s = 0.0;
            z[static_cast<std::size_t>(level)] = scale;
            s += f(z);
            z[static_cast<std::size_t>(level)] = -scale;
            s += f(z);
            return s;
        }
        double s = 0.0;
        for (const GaussRule* g : {&lo, &hi}) {
            for (std::size_t k = 0; k < g->nodes.size(); ++k) {
                const double th = g->nodes[k];
                z[static_cast<std::size_t>(level)] = scale * std::cos(th);
                s += g->weights[k] * std::pow(std::sin(th), dim_left - 2) * rec(level + 1, scale * std::sin(th));
            }
        }
        return s;
    };
    return rec(0, 1.0);
}

// Nested Gauss over the unit ball, first coordinate split at 0.
double ball_integral(int m, const std::function<double(const std::vector<double>&)>& f, int nodes) {
    std::vector<double> x(static_cast<std::size_t>(m), 0.0);
    const GaussRule unit = gauss_legendre(nodes, 0.0, 1.0);
    std::function<double(int, double)> rec = [&](int level, double r2) -> double {
        if (level == m) return f(x);
        const double half = std::sqrt(std::max(0.0, 1.0 - r2));
        double s = 0.0;
        for (double sign : {-1.0, 1.0}) {
            for (std::size_t k = 0; k < unit.nodes.size(); ++k) {
                const double t = sign * half * unit.nodes[k];
                x[static_cast<std::size_t>(level)] = t;
                s += half * unit.weights[k] * rec(level + 1, r2 + t * t);
            }
        }
        return s;
    };
    return rec(0, 0.0);
}

}  // namespace

double c_dimensional(int n, CMethod method) {
    if (n < 1) throw std::invalid_argument("c_dimensional: N must be >= 1");
    switch (method) {
        case CMethod::closed_form: return 2.0 / n * alpha(n - 1.0);
        case CMethod::sphere_quadrature: {
            if (n > 7) throw std::invalid_argument("sphere quadrature supported for N <= 7");
            const double s = sphere_integral(n, [](const std::vector<double>& z) { return std::fabs(z[0]); }, 16);
            return s / n;
        }
        case CMethod::ball_quadrature: {
            if (n > 4) throw std::invalid_argument("ball quadrature supported for N <= 4");
            const int nodes = n <= 2 ? 200 : (n == 3 ? 64 : 24);
            return ball_integral(
                n,
                [](const std::vector<double>& x) {
                    double r2 = 0.0;
                    for (double c : x) r2 += c * c;
                    return r2 > 0.0 ? std::fabs(x[0]) / std::sqrt(r2) : 0.0;
                },
                nodes);
        }
    }
    throw std::invalid_argument("unknown method");
}

double gamma_lower(int n) {
    if (n < 1) throw std::invalid_argument("gamma_lower: N must be >= 1");
    const double an = alpha(n);
    return an * an / (std::pow(5.0, n - 1) * std::pow(2.0, 2 * n + 1) * alpha(n - 1.0));
}

double beta_const(int n, double r, double q) {
    if (n < 1) throw std::invalid_argument("beta_const: N must be >= 1");
    const double rq = r * q;
    if (!(rq >= 0.0)) throw std::invalid_argument("beta_const: r*q must be >= 0");
    if (rq > n) throw std::invalid_argument("beta_const: r*q = " + std::to_string(rq) + " exceeds N");
    return alpha(n) / (std::pow(5.0, n - rq) * std::pow(2.0, 2 * n) * alpha(n - rq));
}

}  // namespace bvq
