#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace freeproj {

// Parameters of two Bernoulli spectral distributions: alpha = trace of the
// first projection, beta = trace of the second, both in [0, 1].
struct BernoulliParams {
  double alpha = 0.5;
  double beta = 0.5;
};

void validate_params(const BernoulliParams& p);

// Edges of the multiplicative free convolution of two Bernoulli laws:
//   phi_{-+} = alpha + beta - 2 alpha beta -+ 2 sqrt(alpha beta (1-alpha)(1-beta)),
// clamped to [0, 1].
struct BoxtimesEdges {
  double phi_minus = 0.0;
  double phi_plus = 0.0;
};

BoxtimesEdges boxtimes_edges(const BernoulliParams& p);

// Edges of the additive free convolution:
//   gamma_1 = 1 - s - t, gamma_2 = 1 - s + t, gamma_3 = 1 + s - t, gamma_4 = 1 + s + t
// with s = sqrt(beta(1-alpha)), t = sqrt(alpha(1-beta)). They satisfy
// gamma_1 + gamma_4 = gamma_2 + gamma_3 = 2 and sqrt(phi_plus) = s + t,
// sqrt(phi_minus) = |s - t|.
struct BoxplusEdges {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma3 = 0.0;
  double gamma4 = 0.0;
};

BoxplusEdges boxplus_edges(const BernoulliParams& p);

struct Atom {
  double location = 0.0;
  double mass = 0.0;
};

// One absolutely continuous piece of a law: a density on [lo, hi] with its
// analytic mass. kind and params describe the formula for serialization.
// edge_exp_lo / edge_exp_hi give the power-law exponent of the density at
// each endpoint (density ~ c * distance^exponent), which the quadrature
// needs to handle the integrable endpoint singularities; 0 means bounded.
struct ACPiece {
  double lo = 0.0;
  double hi = 0.0;
  double mass = 0.0;
  std::string kind;
  std::function<double(double)> density;
  double edge_exp_lo = 0.0;
  double edge_exp_hi = 0.0;
  std::vector<std::pair<std::string, double>> params;
};

// A (sub-)probability law on the real line: finitely many atoms plus
// absolutely continuous pieces. Pieces may overlap; the measure is the sum.
// Atoms with exactly zero mass are never emitted by the constructors below.
struct SpectralLaw {
  std::vector<Atom> atoms;
  std::vector<ACPiece> pieces;

  double total_mass() const;
  // Hull of the support, [0, 0] for the empty law.
  double support_lo() const;
  double support_hi() const;
  bool empty() const { return atoms.empty() && pieces.empty(); }
};

// ---- Limit laws for two free projections with traces alpha, beta ----------

// Law of PQP (equivalently of the operator RQR with R = range projection):
// atoms (1 - min(alpha, beta)) delta_0 and max(alpha + beta - 1, 0) delta_1,
// plus the density
//   f(x) = sqrt((phi_plus - x)(x - phi_minus)) / (2 pi x (1 - x))
// on [phi_minus, phi_plus], of mass min(alpha, beta, 1-alpha, 1-beta).
SpectralLaw boxtimes_bernoulli(const BernoulliParams& p);

// Limit of the empirical measure of the nonzero principal angles, weighted by
// 1/n (ambient normalization): density
//   s(theta) = sqrt((phi_plus - cos^2)(cos^2 - phi_minus)) / (pi sin cos)
// on [arccos sqrt(phi_plus), arccos sqrt(phi_minus)], total mass
// min(alpha, beta, 1-alpha, 1-beta). No atoms. At alpha = beta = 1/2 this is
// the constant density 1/pi on [0, pi/2] (mass 1/2); rescaling the angle
// count by the number of angles instead of n gives the uniform probability
// law with density 2/pi.
SpectralLaw angle_law(const BernoulliParams& p);

// Law of P + Q: atoms max(1-alpha-beta, 0) delta_0, |alpha-beta| delta_1,
// max(alpha+beta-1, 0) delta_2, plus the density
//   g(t) = sqrt(-(t-g1)(t-g2)(t-g3)(t-g4)) / (pi t (2 - t) |t - 1|)
// on [gamma1, min(gamma2, gamma3)] u [max(gamma2, gamma3), gamma4], total AC
// mass 2 min(alpha, beta, 1-alpha, 1-beta). When alpha = beta the two
// intervals meet at 1 and the |t - 1| factor cancels.
SpectralLaw boxplus_bernoulli(const BernoulliParams& p);

// Law of i(PQ - QP): atom max(|2 alpha - 1|, |2 beta - 1|) delta_0 plus the
// pushforwards of the AC part of boxtimes under +-sqrt(t(1 - t)). Symmetric.
SpectralLaw commutator_law(const BernoulliParams& p);

// Law of PQ + QP: pushforward of boxplus under t -> t^2 - t, using the two
// monotone branches split at the critical point t = 1/2.
SpectralLaw anticommutator_law(const BernoulliParams& p);

// Closed form of the anticommutator law at alpha = beta = 1/2, with
// r(x) = sqrt(1 + 4x):
//   on (-1/4, 0):  u(x) = sqrt(2)/(pi r) * [ (1 - 2x - r)^(-1/2) + (1 - 2x + r)^(-1/2) ]
//   on (0, 2):     u(x) = sqrt(2)/(pi r) * (1 - 2x + r)^(-1/2)
// Each piece has mass 1/2. Used as the closed-form cross-check of
// anticommutator_law(1/2, 1/2).
SpectralLaw anticommutator_half_closed_form();

// Law of P + QPQ at alpha = beta = 1/2, from the closed-form density built on
// zeta(x) = sqrt(5x^2 - 6x + 1):
//   on (0, 1/5):  [ (3-5x+z)/sqrt(3-3x+z) + (3-5x-z)/sqrt(3-3x-z) ] / (2 pi z sqrt(2x))
//   on (1, 2):    (5x - 3 - z) / (2 pi z sqrt(2x) sqrt(3-3x+z))
// Pieces have mass 1/2 each; no atoms. Equals the sum of the pushforwards of
// the AC part of boxtimes(1/2, 1/2) under the two angle-block eigenvalue maps
// rho_-+(c) = (1 + c -+ sqrt(5c^2 - 2c + 1))/2.
SpectralLaw p_plus_qpq_law();

// ---- Measure operations ----------------------------------------------------

// A strictly monotone map on [lo, hi] together with its inverse and the
// derivative of the inverse, used to push a law forward.
struct MonotoneBranch {
  double lo = 0.0;
  double hi = 0.0;
  std::function<double(double)> map;
  std::function<double(double)> inverse;
  std::function<double(double)> inverse_derivative;
};

// Pushforward of the law under a piecewise monotone map given by branches.
// Preconditions: branch intervals do not overlap, cover the support of the
// law, and each map is strictly monotone on its interval (checked by sampled
// sign changes). Atoms map through; each AC piece restricted to a branch
// contributes the density f(inverse(y)) |inverse'(y)| on the image interval.
// Total mass is preserved (checked to 1e-9).
SpectralLaw pushforward(const SpectralLaw& law, const std::vector<MonotoneBranch>& branches);

// Sum of two laws as measures (atoms at equal locations merged).
SpectralLaw law_sum(const SpectralLaw& a, const SpectralLaw& b);

// Cumulative mass (-inf, x], right continuous. cdf_left gives the left limit.
double cdf(const SpectralLaw& law, double x);
double cdf_left(const SpectralLaw& law, double x);

// Precomputed cumulative tables for a law, for code paths that evaluate the
// CDF at many points (distance computations over 1e5+ samples, sampling).
// Matches cdf() to well below 1e-9 absolute. The law must outlive the cache.
class LawCdf {
 public:
  explicit LawCdf(const SpectralLaw& law);
  ~LawCdf();
  LawCdf(LawCdf&&) noexcept;
  LawCdf& operator=(LawCdf&&) noexcept;

  double operator()(double x) const;  // right continuous
  double left(double x) const;        // left limit at x
  double total() const;

  // Smallest x with cdf(x) >= target (target in [0, total]); used by the
  // sampler for inverse-CDF draws.
  double quantile(double target) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// k-th moment, atoms plus singularity-aware quadrature of each piece.
double law_moment(const SpectralLaw& law, int k);

// Piece mass recomputed by quadrature (for invariant checks).
double piece_mass_quadrature(const ACPiece& piece);

// i.i.d. draws: component selection (atoms, then pieces) followed by inverse
// CDF bisection; the bisection runs in the substituted variable where the
// density is smooth, to absolute accuracy far below 1e-12. Deterministic for
// a fixed seed.
std::vector<double> sample_law(const SpectralLaw& law, std::int64_t count, std::uint64_t seed);

// Density grid for export: per piece, points clustered at the edges by the
// same substitution used for quadrature (so trapezoid sums over the grid
// converge despite edge singularities). Returns (x, density) pairs.
std::vector<std::pair<double, double>> density_grid(const SpectralLaw& law, int points_per_piece);

}  // namespace freeproj
