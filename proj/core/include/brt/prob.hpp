#pragma once

namespace brt {

/// Upper tail probability P(X >= x) for X ~ chi-square with df degrees of
/// freedom. df >= 1; returns 1 for x <= 0.
double chi_square_sf(double x, int df);

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

}  // namespace brt
