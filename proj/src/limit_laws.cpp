#include "freeproj/limit_laws.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>

#include "freeproj/quadrature.hpp"

namespace freeproj {

namespace {

constexpr double kPi = std::numbers::pi;
// Edges that land within a few ulp of a lattice point of the formula (0, 1, 2)
// are snapped so the density code can select the exact singular form.
constexpr double kEdgeSnapTol = 5e-15;
constexpr double kAtomMergeTol = 1e-12;
// Below this separation the two middle edges of the additive law are merged
// and the |t - 1| factor cancelled analytically; the density error committed
// is O(separation^2) and the atom rearranged at 1 carries comparable mass.
constexpr double kBoxplusMergeTol = 1e-9;

double snap_to(double x, std::initializer_list<double> targets) {
  for (double t : targets) {
    if (std::abs(x - t) <= kEdgeSnapTol) return t;
  }
  return x;
}

double min4(const BernoulliParams& p) {
  return std::min(std::min(p.alpha, p.beta), std::min(1.0 - p.alpha, 1.0 - p.beta));
}

void add_atom(SpectralLaw& law, double location, double mass) {
  if (mass <= 0.0) return;
  law.atoms.push_back({location, mass});
}

void sort_pieces(SpectralLaw& law) {
  std::stable_sort(law.pieces.begin(), law.pieces.end(),
                   [](const ACPiece& a, const ACPiece& b) {
                     if (a.lo != b.lo) return a.lo < b.lo;
                     return a.hi < b.hi;
                   });
  std::stable_sort(law.atoms.begin(), law.atoms.end(),
                   [](const Atom& a, const Atom& b) { return a.location < b.location; });
}

double piece_density_or_zero(const ACPiece& piece, double x) {
  if (!(x > piece.lo && x < piece.hi)) return 0.0;
  return piece.density(x);
}

}  // namespace

void validate_params(const BernoulliParams& p) {
  if (!std::isfinite(p.alpha) || !std::isfinite(p.beta) || p.alpha < 0.0 || p.alpha > 1.0 ||
      p.beta < 0.0 || p.beta > 1.0) {
    throw std::domain_error("trace parameters must lie in [0, 1]");
  }
}

BoxtimesEdges boxtimes_edges(const BernoulliParams& p) {
  validate_params(p);
  const double s = p.alpha + p.beta - 2.0 * p.alpha * p.beta;
  const double rad = p.alpha * p.beta * (1.0 - p.alpha) * (1.0 - p.beta);
  const double root = 2.0 * std::sqrt(std::max(rad, 0.0));
  BoxtimesEdges e;
  e.phi_minus = std::clamp(snap_to(s - root, {0.0, 1.0}), 0.0, 1.0);
  e.phi_plus = std::clamp(snap_to(s + root, {0.0, 1.0}), 0.0, 1.0);
  return e;
}

BoxplusEdges boxplus_edges(const BernoulliParams& p) {
  validate_params(p);
  const double s = std::sqrt(std::max(p.beta * (1.0 - p.alpha), 0.0));
  const double t = std::sqrt(std::max(p.alpha * (1.0 - p.beta), 0.0));
  BoxplusEdges e;
  e.gamma1 = std::clamp(snap_to(1.0 - s - t, {0.0, 1.0, 2.0}), 0.0, 2.0);
  e.gamma2 = std::clamp(snap_to(1.0 - s + t, {0.0, 1.0, 2.0}), 0.0, 2.0);
  e.gamma3 = std::clamp(snap_to(1.0 + s - t, {0.0, 1.0, 2.0}), 0.0, 2.0);
  e.gamma4 = std::clamp(snap_to(1.0 + s + t, {0.0, 1.0, 2.0}), 0.0, 2.0);
  return e;
}

double SpectralLaw::total_mass() const {
  double m = 0.0;
  for (const Atom& a : atoms) m += a.mass;
  for (const ACPiece& p : pieces) m += p.mass;
  return m;
}

double SpectralLaw::support_lo() const {
  if (empty()) return 0.0;
  double lo = std::numeric_limits<double>::infinity();
  for (const Atom& a : atoms) lo = std::min(lo, a.location);
  for (const ACPiece& p : pieces) lo = std::min(lo, p.lo);
  return lo;
}

double SpectralLaw::support_hi() const {
  if (empty()) return 0.0;
  double hi = -std::numeric_limits<double>::infinity();
  for (const Atom& a : atoms) hi = std::max(hi, a.location);
  for (const ACPiece& p : pieces) hi = std::max(hi, p.hi);
  return hi;
}

SpectralLaw boxtimes_bernoulli(const BernoulliParams& p) {
  validate_params(p);
  const BoxtimesEdges e = boxtimes_edges(p);
  SpectralLaw law;
  add_atom(law, 0.0, 1.0 - std::min(p.alpha, p.beta));
  add_atom(law, 1.0, std::max(p.alpha + p.beta - 1.0, 0.0));
  const double ac = min4(p);
  if (ac > 0.0 && e.phi_plus - e.phi_minus > 1e-14) {
    const double pm = e.phi_minus;
    const double pp = e.phi_plus;
    ACPiece piece;
    piece.lo = pm;
    piece.hi = pp;
    piece.mass = ac;
    piece.kind = "boxtimes_ac";
    piece.density = [pm, pp](double x) {
      if (!(x > pm && x < pp)) return 0.0;
      const double rad = (pp - x) * (x - pm);
      return std::sqrt(std::max(rad, 0.0)) / (2.0 * kPi * x * (1.0 - x));
    };
    // The sqrt factor vanishes like d^(1/2) at a plain edge; when the edge
    // sits on a zero of x(1 - x) the denominator promotes it to d^(-1/2).
    piece.edge_exp_lo = (pm == 0.0) ? -0.5 : 0.5;
    piece.edge_exp_hi = (pp == 1.0) ? -0.5 : 0.5;
    piece.params = {{"alpha", p.alpha},
                    {"beta", p.beta},
                    {"phi_minus", pm},
                    {"phi_plus", pp}};
    law.pieces.push_back(std::move(piece));
  }
  return law;
}

SpectralLaw angle_law(const BernoulliParams& p) {
  validate_params(p);
  const BoxtimesEdges e = boxtimes_edges(p);
  SpectralLaw law;
  const double ac = min4(p);
  if (ac <= 0.0 || e.phi_plus - e.phi_minus <= 1e-14) return law;
  const double pm = e.phi_minus;
  const double pp = e.phi_plus;
  const double theta_lo = std::acos(std::sqrt(pp));
  const double theta_hi = std::acos(std::sqrt(pm));
  ACPiece piece;
  piece.lo = theta_lo;
  piece.hi = theta_hi;
  piece.mass = ac;
  piece.kind = "angle_density";
  piece.density = [pm, pp, theta_lo, theta_hi](double theta) {
    if (!(theta > theta_lo && theta < theta_hi)) return 0.0;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    if (s <= 0.0 || c <= 0.0) return 0.0;
    const double c2 = c * c;
    // At a snapped outer edge the difference is an exact square, written as
    // such to avoid the cancellation in 1 - c^2.
    const double up = (pp == 1.0) ? s * s : pp - c2;
    const double dn = (pm == 0.0) ? c2 : c2 - pm;
    return std::sqrt(std::max(up, 0.0) * std::max(dn, 0.0)) / (kPi * s * c);
  };
  piece.edge_exp_lo = (pp == 1.0) ? 0.0 : 0.5;
  piece.edge_exp_hi = (pm == 0.0) ? 0.0 : 0.5;
  piece.params = {{"alpha", p.alpha},
                  {"beta", p.beta},
                  {"phi_minus", pm},
                  {"phi_plus", pp}};
  law.pieces.push_back(std::move(piece));
  return law;
}

SpectralLaw boxplus_bernoulli(const BernoulliParams& p) {
  validate_params(p);
  const BoxplusEdges e = boxplus_edges(p);
  SpectralLaw law;
  add_atom(law, 0.0, std::max(1.0 - p.alpha - p.beta, 0.0));
  add_atom(law, 1.0, std::abs(p.alpha - p.beta));
  add_atom(law, 2.0, std::max(p.alpha + p.beta - 1.0, 0.0));
  const double ac = min4(p);
  if (ac <= 0.0) return law;
  const double g1 = e.gamma1;
  const double g4 = e.gamma4;
  const double m23 = std::min(e.gamma2, e.gamma3);
  const double M23 = std::max(e.gamma2, e.gamma3);
  const std::vector<std::pair<std::string, double>> params = {{"alpha", p.alpha},
                                                              {"beta", p.beta},
                                                              {"gamma1", e.gamma1},
                                                              {"gamma2", e.gamma2},
                                                              {"gamma3", e.gamma3},
                                                              {"gamma4", e.gamma4}};
  if (M23 - m23 <= kBoxplusMergeTol) {
    // The two middle edges coincide (equal traces): the (t - gamma2)(t - gamma3)
    // factor cancels against |t - 1| and the density extends across 1.
    ACPiece piece;
    piece.lo = g1;
    piece.hi = g4;
    piece.mass = 2.0 * ac;
    piece.kind = "boxplus_ac";
    piece.density = [g1, g4](double t) {
      if (!(t > g1 && t < g4)) return 0.0;
      const double rad = (t - g1) * (g4 - t);
      return std::sqrt(std::max(rad, 0.0)) / (kPi * t * (2.0 - t));
    };
    piece.edge_exp_lo = (g1 == 0.0) ? -0.5 : 0.5;
    piece.edge_exp_hi = (g4 == 2.0) ? -0.5 : 0.5;
    piece.params = params;
    law.pieces.push_back(std::move(piece));
    return law;
  }
  {
    ACPiece lower;
    lower.lo = g1;
    lower.hi = m23;
    lower.mass = ac;
    lower.kind = "boxplus_ac_lower";
    lower.density = [g1, g4, m23, M23](double t) {
      if (!(t > g1 && t < m23)) return 0.0;
      const double rad = (t - g1) * (m23 - t) * (M23 - t) * (g4 - t);
      return std::sqrt(std::max(rad, 0.0)) / (kPi * t * (2.0 - t) * (1.0 - t));
    };
    lower.edge_exp_lo = (g1 == 0.0) ? -0.5 : 0.5;
    lower.edge_exp_hi = 0.5;
    lower.params = params;
    law.pieces.push_back(std::move(lower));
  }
  {
    ACPiece upper;
    upper.lo = M23;
    upper.hi = g4;
    upper.mass = ac;
    upper.kind = "boxplus_ac_upper";
    upper.density = [g1, g4, m23, M23](double t) {
      if (!(t > M23 && t < g4)) return 0.0;
      const double rad = (t - g1) * (t - m23) * (t - M23) * (g4 - t);
      return std::sqrt(std::max(rad, 0.0)) / (kPi * t * (2.0 - t) * (t - 1.0));
    };
    upper.edge_exp_lo = 0.5;
    upper.edge_exp_hi = (g4 == 2.0) ? -0.5 : 0.5;
    upper.params = params;
    law.pieces.push_back(std::move(upper));
  }
  return law;
}

namespace {

// Branch set for t -> sign * sqrt(t(1 - t)) on [lo, hi] within [0, 1], split
// at the fold t = 1/2 when it is interior. The factored (1 - 2y)(1 + 2y)
// keeps the radicand exact near the fold image |y| = 1/2.
std::vector<MonotoneBranch> chi_branches(double lo, double hi, int sign) {
  auto chi = [sign](double t) {
    return static_cast<double>(sign) * std::sqrt(std::max(t * (1.0 - t), 0.0));
  };
  auto inv_low = [](double y) {
    const double q = std::max((1.0 - 2.0 * y) * (1.0 + 2.0 * y), 0.0);
    return 0.5 * (1.0 - std::sqrt(q));
  };
  auto inv_high = [](double y) {
    const double q = std::max((1.0 - 2.0 * y) * (1.0 + 2.0 * y), 0.0);
    return 0.5 * (1.0 + std::sqrt(q));
  };
  auto dinv = [](double y) {
    const double q = std::max((1.0 - 2.0 * y) * (1.0 + 2.0 * y), 0.0);
    return 2.0 * std::abs(y) / std::sqrt(q);
  };
  std::vector<MonotoneBranch> branches;
  if (lo < 0.5 && hi > 0.5) {
    branches.push_back({lo, 0.5, chi, inv_low, dinv});
    branches.push_back({0.5, hi, chi, inv_high, dinv});
  } else if (hi <= 0.5) {
    branches.push_back({lo, hi, chi, inv_low, dinv});
  } else {
    branches.push_back({lo, hi, chi, inv_high, dinv});
  }
  return branches;
}

}  // namespace

SpectralLaw commutator_law(const BernoulliParams& p) {
  validate_params(p);
  const SpectralLaw bt = boxtimes_bernoulli(p);
  SpectralLaw out;
  add_atom(out, 0.0, 1.0 - 2.0 * min4(p));
  if (!bt.pieces.empty()) {
    SpectralLaw src;
    src.pieces = bt.pieces;
    const double lo = src.pieces.front().lo;
    const double hi = src.pieces.front().hi;
    out = law_sum(out, pushforward(src, chi_branches(lo, hi, +1)));
    out = law_sum(out, pushforward(src, chi_branches(lo, hi, -1)));
  }
  sort_pieces(out);
  return out;
}

SpectralLaw anticommutator_law(const BernoulliParams& p) {
  validate_params(p);
  const SpectralLaw bp = boxplus_bernoulli(p);
  auto square_minus = [](double t) { return t * (t - 1.0); };
  // 1 + 4y is exact near the fold image y = -1/4 (Sterbenz range of the sum).
  MonotoneBranch dec{0.0, 0.5, square_minus,
                     [](double y) {
                       return 0.5 * (1.0 - std::sqrt(std::max(1.0 + 4.0 * y, 0.0)));
                     },
                     [](double y) {
                       return -1.0 / std::sqrt(std::max(1.0 + 4.0 * y, 0.0));
                     }};
  MonotoneBranch inc{0.5, 2.0, square_minus,
                     [](double y) {
                       return 0.5 * (1.0 + std::sqrt(std::max(1.0 + 4.0 * y, 0.0)));
                     },
                     [](double y) {
                       return 1.0 / std::sqrt(std::max(1.0 + 4.0 * y, 0.0));
                     }};
  SpectralLaw out = pushforward(bp, {dec, inc});
  sort_pieces(out);
  return out;
}

SpectralLaw anticommutator_half_closed_form() {
  SpectralLaw law;
  {
    ACPiece piece;
    piece.lo = -0.25;
    piece.hi = 0.0;
    piece.mass = 0.5;
    piece.kind = "anticommutator_half_lower";
    piece.density = [](double x) {
      if (!(x > -0.25 && x < 0.0)) return 0.0;
      const double r = std::sqrt(std::max(1.0 + 4.0 * x, 0.0));
      const double b = 1.0 - 2.0 * x + r;
      // a = 1 - 2x - r rationalized; the direct form cancels near x = 0.
      const double a = 4.0 * x * (x - 2.0) / b;
      if (!(a > 0.0) || !(r > 0.0)) return 0.0;
      return std::numbers::sqrt2 / (kPi * r) * (1.0 / std::sqrt(a) + 1.0 / std::sqrt(b));
    };
    piece.edge_exp_lo = -0.5;
    piece.edge_exp_hi = -0.5;
    law.pieces.push_back(std::move(piece));
  }
  {
    ACPiece piece;
    piece.lo = 0.0;
    piece.hi = 2.0;
    piece.mass = 0.5;
    piece.kind = "anticommutator_half_upper";
    piece.density = [](double x) {
      if (!(x > 0.0 && x < 2.0)) return 0.0;
      const double r = std::sqrt(1.0 + 4.0 * x);
      // b = 1 - 2x + r, rationalized on the right half where it cancels.
      const double b =
          (x <= 0.5) ? (1.0 - 2.0 * x + r) : (4.0 * x * (x - 2.0) / (1.0 - 2.0 * x - r));
      if (!(b > 0.0)) return 0.0;
      return std::numbers::sqrt2 / (kPi * r) / std::sqrt(b);
    };
    piece.edge_exp_lo = 0.0;
    piece.edge_exp_hi = -0.5;
    law.pieces.push_back(std::move(piece));
  }
  return law;
}

SpectralLaw p_plus_qpq_law() {
  SpectralLaw law;
  {
    ACPiece piece;
    piece.lo = 0.0;
    piece.hi = 0.2;
    piece.mass = 0.5;
    piece.kind = "p_plus_qpq_lower";
    piece.density = [](double x) {
      if (!(x > 0.0 && x < 0.2)) return 0.0;
      const double zeta = std::sqrt(std::max((1.0 - 5.0 * x) * (1.0 - x), 0.0));
      if (!(zeta > 0.0)) return 0.0;
      const double t1 = (3.0 - 5.0 * x + zeta) / std::sqrt(3.0 - 3.0 * x + zeta);
      const double t2 = (3.0 - 5.0 * x - zeta) / std::sqrt(3.0 - 3.0 * x - zeta);
      return (t1 + t2) / (2.0 * kPi * zeta * std::sqrt(2.0 * x));
    };
    piece.edge_exp_lo = -0.5;
    piece.edge_exp_hi = -0.5;
    law.pieces.push_back(std::move(piece));
  }
  {
    ACPiece piece;
    piece.lo = 1.0;
    piece.hi = 2.0;
    piece.mass = 0.5;
    piece.kind = "p_plus_qpq_upper";
    piece.density = [](double x) {
      if (!(x > 1.0 && x < 2.0)) return 0.0;
      const double zeta = std::sqrt(std::max((5.0 * x - 1.0) * (x - 1.0), 0.0));
      // 3 - 3x + zeta rationalized: exact-factor form 4(x-1)(2-x)/(zeta + 3(x-1))
      // is stable at both endpoints, where the direct form cancels.
      const double inner = 4.0 * (x - 1.0) * (2.0 - x) / (zeta + 3.0 * (x - 1.0));
      if (!(zeta > 0.0) || !(inner > 0.0)) return 0.0;
      return (5.0 * x - 3.0 - zeta) /
             (2.0 * kPi * zeta * std::sqrt(2.0 * x) * std::sqrt(inner));
    };
    piece.edge_exp_lo = -0.75;
    piece.edge_exp_hi = -0.5;
    law.pieces.push_back(std::move(piece));
  }
  return law;
}

SpectralLaw pushforward(const SpectralLaw& law, const std::vector<MonotoneBranch>& branches) {
  if (branches.empty()) throw std::invalid_argument("pushforward needs at least one branch");
  std::vector<const MonotoneBranch*> sorted;
  sorted.reserve(branches.size());
  for (const MonotoneBranch& b : branches) {
    if (!(b.lo < b.hi)) throw std::invalid_argument("branch interval is empty or reversed");
    if (!b.map || !b.inverse || !b.inverse_derivative) {
      throw std::invalid_argument("branch is missing a callable");
    }
    sorted.push_back(&b);
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const MonotoneBranch* a, const MonotoneBranch* b) { return a->lo < b->lo; });
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    if (sorted[i]->hi > sorted[i + 1]->lo + 1e-12) {
      throw std::invalid_argument("branch intervals overlap");
    }
  }
  // Strict monotonicity, checked on a sample grid.
  for (const MonotoneBranch* b : sorted) {
    constexpr int kProbe = 32;
    double prev = b->map(b->lo);
    double dir = 0.0;
    for (int j = 1; j <= kProbe; ++j) {
      const double x = b->lo + (b->hi - b->lo) * j / kProbe;
      const double v = b->map(x);
      const double step = v - prev;
      if (step == 0.0 || (dir != 0.0 && step * dir < 0.0)) {
        throw std::invalid_argument("branch map is not strictly monotone");
      }
      dir = (step > 0.0) ? 1.0 : -1.0;
      prev = v;
    }
  }

  SpectralLaw out;
  auto add_out_atom = [&out](double location, double mass) {
    if (mass <= 0.0) return;
    for (Atom& a : out.atoms) {
      if (std::abs(a.location - location) <= kAtomMergeTol) {
        a.mass += mass;
        return;
      }
    }
    out.atoms.push_back({location, mass});
  };

  for (const Atom& atom : law.atoms) {
    const MonotoneBranch* home = nullptr;
    for (const MonotoneBranch* b : sorted) {
      if (atom.location >= b->lo - 1e-9 && atom.location <= b->hi + 1e-9) {
        home = b;
        break;
      }
    }
    if (home == nullptr) throw std::invalid_argument("branches do not cover an atom of the law");
    const double x = std::clamp(atom.location, home->lo, home->hi);
    add_out_atom(home->map(x), atom.mass);
  }

  for (const ACPiece& piece : law.pieces) {
    const double a = piece.lo;
    const double b = piece.hi;
    const double len = b - a;
    const double full =
        quad::integrate_ac(piece.density, a, b, piece.edge_exp_lo, piece.edge_exp_hi);
    double covered = a;
    for (const MonotoneBranch* br : sorted) {
      const double x0 = std::max(a, br->lo);
      const double x1 = std::min(b, br->hi);
      if (x1 - x0 <= 1e-13 * len) continue;
      if (x0 > covered + 1e-9 * len) {
        throw std::invalid_argument("branches do not cover the support of the law");
      }
      const double raw = quad::integrate_ac_segment(piece.density, a, b, piece.edge_exp_lo,
                                                    piece.edge_exp_hi, x0, x1);
      const double chunk = (full > 0.0) ? piece.mass * raw / full : 0.0;
      covered = std::max(covered, x1);
      const double y0 = br->map(x0);
      const double y1 = br->map(x1);
      const double ylo = std::min(y0, y1);
      const double yhi = std::max(y0, y1);
      if (!(yhi - ylo > 1e-300) || chunk <= 0.0) continue;
      ACPiece image;
      image.lo = ylo;
      image.hi = yhi;
      image.mass = chunk;
      image.kind = "pushforward";
      image.density = [f = piece.density, inv = br->inverse, dinv = br->inverse_derivative, x0,
                       x1, ylo, yhi](double y) {
        if (!(y > ylo && y < yhi)) return 0.0;
        const double x = std::clamp(inv(y), x0, x1);
        return f(x) * std::abs(dinv(y));
      };
      image.edge_exp_lo = quad::estimate_edge_exponent(image.density, ylo, yhi, true);
      image.edge_exp_hi = quad::estimate_edge_exponent(image.density, ylo, yhi, false);
      out.pieces.push_back(std::move(image));
    }
    if (covered < b - 1e-9 * len) {
      throw std::invalid_argument("branches do not cover the support of the law");
    }
  }

  if (std::abs(out.total_mass() - law.total_mass()) > 1e-9) {
    throw std::logic_error("pushforward does not preserve total mass");
  }
  sort_pieces(out);
  return out;
}

SpectralLaw law_sum(const SpectralLaw& a, const SpectralLaw& b) {
  SpectralLaw out = a;
  for (const Atom& atom : b.atoms) {
    bool merged = false;
    for (Atom& existing : out.atoms) {
      if (std::abs(existing.location - atom.location) <= kAtomMergeTol) {
        existing.mass += atom.mass;
        merged = true;
        break;
      }
    }
    if (!merged) out.atoms.push_back(atom);
  }
  out.pieces.insert(out.pieces.end(), b.pieces.begin(), b.pieces.end());
  sort_pieces(out);
  return out;
}

double cdf(const SpectralLaw& law, double x) {
  double m = 0.0;
  for (const Atom& a : law.atoms) {
    if (a.location <= x) m += a.mass;
  }
  for (const ACPiece& p : law.pieces) {
    if (x >= p.hi) {
      m += p.mass;
    } else if (x > p.lo) {
      const double full = quad::integrate_ac(p.density, p.lo, p.hi, p.edge_exp_lo, p.edge_exp_hi);
      if (full > 0.0) {
        m += p.mass *
             quad::integrate_ac_prefix(p.density, p.lo, p.hi, p.edge_exp_lo, p.edge_exp_hi, x) /
             full;
      }
    }
  }
  return m;
}

double cdf_left(const SpectralLaw& law, double x) {
  double m = 0.0;
  for (const Atom& a : law.atoms) {
    if (a.location < x) m += a.mass;
  }
  for (const ACPiece& p : law.pieces) {
    if (x >= p.hi) {
      m += p.mass;
    } else if (x > p.lo) {
      const double full = quad::integrate_ac(p.density, p.lo, p.hi, p.edge_exp_lo, p.edge_exp_hi);
      if (full > 0.0) {
        m += p.mass *
             quad::integrate_ac_prefix(p.density, p.lo, p.hi, p.edge_exp_lo, p.edge_exp_hi, x) /
             full;
      }
    }
  }
  return m;
}

double law_moment(const SpectralLaw& law, int k) {
  if (k < 0) throw std::invalid_argument("moment order must be nonnegative");
  double m = 0.0;
  for (const Atom& a : law.atoms) m += a.mass * std::pow(a.location, k);
  for (const ACPiece& p : law.pieces) {
    const double full = quad::integrate_ac(p.density, p.lo, p.hi, p.edge_exp_lo, p.edge_exp_hi);
    if (full <= 0.0) continue;
    auto weighted = [&p, k](double x) { return std::pow(x, k) * p.density(x); };
    const double mk =
        quad::integrate_ac(weighted, p.lo, p.hi, p.edge_exp_lo, p.edge_exp_hi);
    m += p.mass * mk / full;
  }
  return m;
}

double piece_mass_quadrature(const ACPiece& piece) {
  return quad::integrate_ac(piece.density, piece.lo, piece.hi, piece.edge_exp_lo,
                            piece.edge_exp_hi);
}

// ---- Fast CDF tables --------------------------------------------------------

namespace {

constexpr double kInnerFraction = 1e-6;
constexpr int kCellsPerHalf = 512;

// One half of a piece, anchored at `edge` and extending to the midpoint at
// distance `len`, tabulated in the substituted variable u (distance =
// len * sin(u)^4). Below dstar the mass comes from a three-term power fit
// d^sigma (A + B sqrt(d) + C d), matching the half-integer edge expansions
// of the densities.
struct HalfTable {
  double edge = 0.0;
  double dir = 1.0;
  double len = 0.0;
  double sigma = 0.0;
  double dstar = 0.0;
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double inner = 0.0;
  double ustar = 0.0;
  std::vector<double> u;    // nodes, u[0] = ustar .. u[M] = pi/2
  std::vector<double> g;    // integrand at nodes
  std::vector<double> cum;  // cumulative mass from the edge up to u[i]

  double total() const { return cum.back(); }

  // Mass within distance d of the edge.
  double prefix(double d) const {
    if (!(d > 0.0)) return 0.0;
    if (d <= dstar) {
      return A * std::pow(d, sigma + 1.0) / (sigma + 1.0) +
             B * std::pow(d, sigma + 1.5) / (sigma + 1.5) +
             C * std::pow(d, sigma + 2.0) / (sigma + 2.0);
    }
    const double ratio = std::min(d / len, 1.0);
    const double ux = (ratio >= 1.0) ? u.back() : std::asin(std::pow(ratio, 0.25));
    if (ux <= u.front()) return inner;
    if (ux >= u.back()) return cum.back();
    const std::size_t j =
        static_cast<std::size_t>(std::upper_bound(u.begin(), u.end(), ux) - u.begin()) - 1;
    const double h = u[j + 1] - u[j];
    const double s = (ux - u[j]) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    // Cubic Hermite on the cumulative with slopes from the integrand.
    return cum[j] * (2.0 * s3 - 3.0 * s2 + 1.0) + h * g[j] * (s3 - 2.0 * s2 + s) +
           cum[j + 1] * (-2.0 * s3 + 3.0 * s2) + h * g[j + 1] * (s3 - s2);
  }
};

HalfTable build_half(const ACPiece& piece, bool lower) {
  HalfTable h;
  const double mid = 0.5 * (piece.lo + piece.hi);
  h.edge = lower ? piece.lo : piece.hi;
  h.dir = lower ? 1.0 : -1.0;
  h.len = lower ? (mid - piece.lo) : (piece.hi - mid);
  h.sigma = lower ? piece.edge_exp_lo : piece.edge_exp_hi;
  h.dstar = kInnerFraction * h.len;
  // Three samples at nominal dstar / 2^i; realized distances absorb the
  // rounding of edge + dir * d back to a representable x.
  double gs[3];
  double ws[3];
  bool usable = true;
  for (int i = 0; i < 3; ++i) {
    const double dn = h.dstar / static_cast<double>(1 << i);
    const double x = h.edge + h.dir * dn;
    const double d = std::abs(x - h.edge);
    const double f = piece.density(x);
    if (!(d > 0.0) || !std::isfinite(f)) {
      usable = false;
      break;
    }
    gs[i] = f * std::pow(d, -h.sigma);
    ws[i] = std::sqrt(d);
  }
  if (usable && ws[0] > ws[1] && ws[1] > ws[2]) {
    // Divided differences in w = sqrt(d) for f * d^-sigma = A + B w + C w^2.
    const double dd1 = (gs[0] - gs[1]) / (ws[0] - ws[1]);
    const double dd2 = (gs[1] - gs[2]) / (ws[1] - ws[2]);
    h.C = (dd1 - dd2) / (ws[0] - ws[2]);
    h.B = dd1 - h.C * (ws[0] + ws[1]);
    h.A = gs[0] - ws[0] * (h.B + h.C * ws[0]);
  } else if (usable) {
    h.A = gs[0];
  }
  h.inner = h.A * std::pow(h.dstar, h.sigma + 1.0) / (h.sigma + 1.0) +
            h.B * std::pow(h.dstar, h.sigma + 1.5) / (h.sigma + 1.5) +
            h.C * std::pow(h.dstar, h.sigma + 2.0) / (h.sigma + 2.0);
  h.ustar = std::asin(std::pow(kInnerFraction, 0.25));
  const int M = kCellsPerHalf;
  h.u.resize(M + 1);
  h.g.resize(M + 1);
  h.cum.resize(M + 1);
  const double span = kPi / 2.0 - h.ustar;
  auto integrand = [&](double uu) {
    const double s = std::sin(uu);
    const double x = h.edge + h.dir * h.len * s * s * s * s;
    const double jac = 4.0 * h.len * s * s * s * std::cos(uu);
    const double v = piece.density(x) * jac;
    return std::isfinite(v) ? v : 0.0;
  };
  for (int i = 0; i <= M; ++i) {
    h.u[static_cast<std::size_t>(i)] = h.ustar + span * i / M;
    h.g[static_cast<std::size_t>(i)] = integrand(h.u[static_cast<std::size_t>(i)]);
  }
  h.cum[0] = h.inner;
  for (int i = 0; i < M; ++i) {
    const std::size_t j = static_cast<std::size_t>(i);
    const double hu = h.u[j + 1] - h.u[j];
    const double gm = integrand(0.5 * (h.u[j] + h.u[j + 1]));
    h.cum[j + 1] = h.cum[j] + hu / 6.0 * (h.g[j] + 4.0 * gm + h.g[j + 1]);
  }
  return h;
}

}  // namespace

struct LawCdf::Impl {
  const SpectralLaw* law = nullptr;
  struct PieceTable {
    HalfTable lo;
    HalfTable hi;
    double scale = 0.0;  // piece.mass / table total
  };
  std::vector<PieceTable> tables;
  double total = 0.0;

  double piece_prefix(std::size_t i, double x) const {
    const ACPiece& p = law->pieces[i];
    if (x <= p.lo) return 0.0;
    if (x >= p.hi) return p.mass;
    const PieceTable& t = tables[i];
    const double mid = 0.5 * (p.lo + p.hi);
    const double raw_total = t.lo.total() + t.hi.total();
    double raw;
    if (x <= mid) {
      raw = t.lo.prefix(x - p.lo);
    } else {
      raw = raw_total - t.hi.prefix(p.hi - x);
    }
    return std::clamp(raw * t.scale, 0.0, p.mass);
  }
};

LawCdf::LawCdf(const SpectralLaw& law) : impl_(std::make_unique<Impl>()) {
  impl_->law = &law;
  impl_->tables.reserve(law.pieces.size());
  for (const ACPiece& piece : law.pieces) {
    Impl::PieceTable t;
    t.lo = build_half(piece, true);
    t.hi = build_half(piece, false);
    const double raw_total = t.lo.total() + t.hi.total();
    t.scale = (raw_total > 0.0) ? piece.mass / raw_total : 0.0;
    impl_->tables.push_back(std::move(t));
  }
  impl_->total = law.total_mass();
}

LawCdf::~LawCdf() = default;
LawCdf::LawCdf(LawCdf&&) noexcept = default;
LawCdf& LawCdf::operator=(LawCdf&&) noexcept = default;

double LawCdf::operator()(double x) const {
  double m = 0.0;
  for (const Atom& a : impl_->law->atoms) {
    if (a.location <= x) m += a.mass;
  }
  for (std::size_t i = 0; i < impl_->law->pieces.size(); ++i) {
    m += impl_->piece_prefix(i, x);
  }
  return m;
}

double LawCdf::left(double x) const {
  double m = 0.0;
  for (const Atom& a : impl_->law->atoms) {
    if (a.location < x) m += a.mass;
  }
  for (std::size_t i = 0; i < impl_->law->pieces.size(); ++i) {
    m += impl_->piece_prefix(i, x);
  }
  return m;
}

double LawCdf::total() const { return impl_->total; }

double LawCdf::quantile(double target) const {
  const SpectralLaw& law = *impl_->law;
  if (law.empty() || impl_->total <= 0.0) {
    throw std::invalid_argument("quantile of an empty law");
  }
  const double t = std::clamp(target, 0.0, impl_->total);
  double lo = law.support_lo() - 1.0;
  double hi = law.support_hi();
  for (int iter = 0; iter < 80; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if ((*this)(mid) >= t) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  // The bisection lands strictly above the minimal point unless a midpoint
  // hits it exactly. When the target falls inside an atom's jump the exact
  // location matters: the left limit anywhere above the atom already
  // includes its mass. Snap to the lowest atom that still meets the target.
  double snapped = hi;
  for (const Atom& a : law.atoms) {
    if (a.location < snapped && (*this)(a.location) >= t) snapped = a.location;
  }
  return snapped;
}

std::vector<double> sample_law(const SpectralLaw& law, std::int64_t count, std::uint64_t seed) {
  if (count < 0) throw std::invalid_argument("sample count must be nonnegative");
  std::vector<double> out;
  if (count == 0) return out;
  if (law.empty() || law.total_mass() <= 0.0) {
    throw std::invalid_argument("cannot sample from an empty law");
  }
  const LawCdf table(law);
  std::mt19937_64 gen(seed);
  out.reserve(static_cast<std::size_t>(count));
  const double total = table.total();
  for (std::int64_t i = 0; i < count; ++i) {
    // Uniform in the open interval (0, 1), mapped through the quantile.
    const double u = (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
    out.push_back(table.quantile(u * total));
  }
  return out;
}

std::vector<std::pair<double, double>> density_grid(const SpectralLaw& law,
                                                    int points_per_piece) {
  const int per_half = std::max(2, points_per_piece / 2);
  std::vector<double> xs;
  for (const ACPiece& p : law.pieces) {
    const double mid = 0.5 * (p.lo + p.hi);
    for (int j = 1; j <= per_half; ++j) {
      const double s = std::sin(kPi / 2.0 * j / per_half);
      const double d = s * s * s * s;
      xs.push_back(p.lo + (mid - p.lo) * d);
      xs.push_back(p.hi - (p.hi - mid) * d);
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<std::pair<double, double>> grid;
  grid.reserve(xs.size());
  for (double x : xs) {
    double d = 0.0;
    for (const ACPiece& p : law.pieces) d += piece_density_or_zero(p, x);
    grid.emplace_back(x, d);
  }
  return grid;
}

}  // namespace freeproj
