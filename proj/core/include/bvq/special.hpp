#pragma once

#include <vector>

namespace bvq {

// Lanczos approximation (g = 7, 9 terms) with reflection below 1/2.
double lanczos_gamma(double x);

// Volume of the unit ball in dimension s, continued to real s >= 0.
double alpha(double s);

enum class CMethod { closed_form, sphere_quadrature, ball_quadrature };

// (1/N) * integral over the unit sphere of |z_1|.
double c_dimensional(int n, CMethod method = CMethod::closed_form);

double gamma_lower(int n);
double beta_const(int n, double r, double q);

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [a, b].
GaussRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

}  // namespace bvq
