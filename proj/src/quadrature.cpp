#include "freeproj/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace freeproj::quad {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
// Fraction of a half-interval handled analytically at the singular edge. At
// distances below 1e-6 of the interval scale, forming x = edge + d in double
// precision already loses several digits of d near O(1) edges, so the
// integrand is never sampled there; a three-term power fit covers the zone.
constexpr double kInnerFraction = 1e-6;

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

// Nodes and weights by Newton iteration on the Legendre polynomial; standard
// and reproducible (no external tables).
GaussRule build_gauss(int n) {
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (int j = 2; j <= n; ++j) {
      const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    rule.nodes[static_cast<std::size_t>(i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

const GaussRule& gauss64() {
  static const GaussRule rule = build_gauss(64);
  return rule;
}

double gauss_on(const GaussRule& rule, const std::function<double(double)>& g, double a,
                double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * g(mid + half * rule.nodes[i]);
  }
  return sum * half;
}

// Geometry of one half-interval [edge, edge + dir * len] with the anchored
// substitution x = edge + dir * len * sin(u)^4.
struct Half {
  double edge = 0.0;
  double dir = 1.0;   // +1: lower edge, -1: upper edge
  double len = 0.0;   // distance from edge to the midpoint
  double sigma = 0.0; // density exponent at the edge
};

double half_x(const Half& h, double u) {
  const double s = std::sin(u);
  const double s2 = s * s;
  return h.edge + h.dir * h.len * s2 * s2;
}

double half_jacobian(const Half& h, double u) {
  const double s = std::sin(u);
  return 4.0 * h.len * s * s * s * std::cos(u);
}

// Three-term fit f ~ d^sigma (A + B sqrt(d) + C d) through samples at dstar,
// dstar/2, dstar/4. Every density here expands at its edges in half-integer
// powers of the distance, so the basis must include the sigma + 1/2 term; a
// two-term {sigma, sigma + 1} fit leaves an O(dstar) relative error on the
// inner zone, visible at the 1e-8 level in CDF comparisons.
struct InnerFit {
  double dstar = 0.0;
  double sigma = 0.0;
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
};

InnerFit fit_inner(const std::function<double(double)>& f, const Half& h) {
  InnerFit fit;
  fit.dstar = kInnerFraction * h.len;
  fit.sigma = h.sigma;
  double w[3];
  double g[3];
  for (int i = 0; i < 3; ++i) {
    const double nominal = fit.dstar / static_cast<double>(1 << i);
    const double x = h.edge + h.dir * nominal;
    // The fit uses the realized distance |x - edge|, which absorbs the
    // rounding of x near O(1) edges.
    const double d = std::abs(x - h.edge);
    const double value = f(x);
    if (!std::isfinite(value) || !(d > 0.0)) {
      // Defensive: treat an unevaluable corner as massless.
      return fit;
    }
    w[i] = std::sqrt(d);
    g[i] = value * std::pow(d, -h.sigma);
  }
  if (!(w[0] > w[1] && w[1] > w[2])) {
    fit.A = g[0];
    return fit;
  }
  const double dd1 = (g[0] - g[1]) / (w[0] - w[1]);
  const double dd2 = (g[1] - g[2]) / (w[1] - w[2]);
  fit.C = (dd1 - dd2) / (w[0] - w[2]);
  fit.B = dd1 - fit.C * (w[0] + w[1]);
  fit.A = g[0] - w[0] * (fit.B + fit.C * w[0]);
  return fit;
}

// Integral of the fitted form over distances [0, d], d <= dstar.
double inner_prefix(const InnerFit& fit, double d) {
  if (d <= 0.0) return 0.0;
  d = std::min(d, fit.dstar);
  const double s = fit.sigma;
  return fit.A * std::pow(d, s + 1.0) / (s + 1.0) +
         fit.B * std::pow(d, s + 1.5) / (s + 1.5) +
         fit.C * std::pow(d, s + 2.0) / (s + 2.0);
}

double ustar_for(const Half&) {
  static const double u = std::asin(std::pow(kInnerFraction, 0.25));
  return u;
}

// Mass of the half over distances [0, d] from the edge.
double half_prefix(const std::function<double(double)>& f, const Half& h, double d) {
  if (h.len <= 0.0 || d <= 0.0) return 0.0;
  d = std::min(d, h.len);
  const InnerFit fit = fit_inner(f, h);
  if (d <= fit.dstar) return inner_prefix(fit, d);
  const double ustar = ustar_for(h);
  const double ratio = std::clamp(d / h.len, 0.0, 1.0);
  const double uend = (ratio >= 1.0) ? kHalfPi : std::asin(std::pow(ratio, 0.25));
  const auto g = [&](double u) { return f(half_x(h, u)) * half_jacobian(h, u); };
  return inner_prefix(fit, fit.dstar) + gauss_on(gauss64(), g, ustar, std::max(uend, ustar));
}

double half_full(const std::function<double(double)>& f, const Half& h) {
  return half_prefix(f, h, h.len);
}

void check_interval(double a, double b) {
  if (!(a <= b)) throw std::invalid_argument("integration interval is reversed");
}

}  // namespace

double integrate_ac(const std::function<double(double)>& f, double a, double b, double sigma_lo,
                    double sigma_hi) {
  check_interval(a, b);
  if (b - a < 1e-300) return 0.0;
  const double mid = 0.5 * (a + b);
  const Half lo{a, 1.0, mid - a, sigma_lo};
  const Half hi{b, -1.0, b - mid, sigma_hi};
  return half_full(f, lo) + half_full(f, hi);
}

double integrate_ac_prefix(const std::function<double(double)>& f, double a, double b,
                           double sigma_lo, double sigma_hi, double x) {
  check_interval(a, b);
  if (x <= a || b - a < 1e-300) return 0.0;
  const double mid = 0.5 * (a + b);
  const Half lo{a, 1.0, mid - a, sigma_lo};
  const Half hi{b, -1.0, b - mid, sigma_hi};
  if (x >= b) return half_full(f, lo) + half_full(f, hi);
  if (x <= mid) return half_prefix(f, lo, x - a);
  // Right part accumulated as a suffix from the upper edge.
  return half_full(f, lo) + half_full(f, hi) - half_prefix(f, hi, b - x);
}

double integrate_ac_segment(const std::function<double(double)>& f, double a, double b,
                            double sigma_lo, double sigma_hi, double x0, double x1) {
  if (x1 < x0) throw std::invalid_argument("segment is reversed");
  return integrate_ac_prefix(f, a, b, sigma_lo, sigma_hi, x1) -
         integrate_ac_prefix(f, a, b, sigma_lo, sigma_hi, x0);
}

double integrate_smooth(const std::function<double(double)>& f, double a, double b) {
  check_interval(a, b);
  if (b - a < 1e-300) return 0.0;
  const double mid = 0.5 * (a + b);
  return gauss_on(gauss64(), f, a, mid) + gauss_on(gauss64(), f, mid, b);
}

double estimate_edge_exponent(const std::function<double(double)>& f, double a, double b,
                              bool at_lower_edge) {
  check_interval(a, b);
  const double len = b - a;
  if (len < 1e-300) return 0.0;
  const double d1 = 1e-5 * len;
  const double d2 = 1e-6 * len;
  const double v1 = f(at_lower_edge ? a + d1 : b - d1);
  const double v2 = f(at_lower_edge ? a + d2 : b - d2);
  if (!std::isfinite(v1) || !std::isfinite(v2) || v1 <= 0.0 || v2 <= 0.0) return 0.0;
  const double slope = std::log(v1 / v2) / std::log(d1 / d2);
  const double snapped = 0.25 * std::round(slope * 4.0);
  return std::clamp(snapped, -0.75, 1.0);
}

}  // namespace freeproj::quad
