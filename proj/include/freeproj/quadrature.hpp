#pragma once

#include <functional>

namespace freeproj::quad {

// Integration of densities over [a, b] whose endpoint behaviour is a known
// power law f ~ c * d^sigma (d = distance to the edge) with
// sigma in {-3/4, -1/2, 0, 1/2, ...}; every density in this library is of
// the form d^sigma * (analytic in sqrt(d)) at each edge.
//
// Each half [edge, mid] is handled in two zones:
//   - inner zone d < 1e-6 * (mid - edge): integrated analytically from a
//     three-term power fit d^sigma (A + B sqrt(d) + C d) through samples near
//     the zone boundary; the sqrt(d) term is required because the edge
//     expansions proceed in half-integer powers. Evaluating f(edge + d) for
//     much smaller d is pointless in doubles (forming x = edge + d already
//     rounds d away), so this zone is never sampled.
//   - outer zone: the substitution x = edge +- (mid - edge) sin(u)^4 makes
//     the integrand analytic on [0, pi/2] for the exponents above, and a
//     single high-order Gauss-Legendre panel integrates it to near machine
//     precision.
//
// sigma_lo / sigma_hi are the edge exponents at a and b. Pass 0 for edges
// where the density is bounded.
double integrate_ac(const std::function<double(double)>& f, double a, double b, double sigma_lo,
                    double sigma_hi);

// Prefix integral over [a, min(x, b)]. Returns 0 for x <= a and the full
// integral for x >= b.
double integrate_ac_prefix(const std::function<double(double)>& f, double a, double b,
                           double sigma_lo, double sigma_hi, double x);

// Integral over [x0, x1] inside [a, b], as a difference of prefix integrals.
double integrate_ac_segment(const std::function<double(double)>& f, double a, double b,
                            double sigma_lo, double sigma_hi, double x0, double x1);

// Plain composite Gauss-Legendre for integrands smooth on the closed
// interval.
double integrate_smooth(const std::function<double(double)>& f, double a, double b);

// Log-log slope of f at distance scales 1e-5 and 1e-6 of (b - a) from the
// given edge, snapped to the nearest quarter integer in [-3/4, 1]. Used to
// classify the edge behaviour of pushforward densities.
double estimate_edge_exponent(const std::function<double(double)>& f, double a, double b,
                              bool at_lower_edge);

}  // namespace freeproj::quad
