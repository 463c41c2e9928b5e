#include "freeproj/subspace.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "freeproj/rng.hpp"

namespace freeproj {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

void check_pair(const Subspace& E, const Subspace& F) {
  if (E.ambient != F.ambient) {
    throw std::invalid_argument("subspaces live in different ambient dimensions");
  }
  if (E.field != F.field) {
    throw std::invalid_argument("subspaces are over different fields");
  }
}

// Classifies singular values of the cross Gram matrix (given in descending
// order) into angles. The tolerance acts on the cosine: a cosine within
// tol_zero of 1 is an intersection direction (angle snapped to exactly 0),
// a cosine at most tol_zero is an orthogonal direction (angle snapped to
// exactly pi/2).
PrincipalAngleSpectrum classify_cosines(const Eigen::VectorXd& sigma, double tol_zero, int k,
                                        int l, int n) {
  PrincipalAngleSpectrum out;
  out.tol_zero = tol_zero;
  out.k = k;
  out.l = l;
  out.n = n;
  out.angles.reserve(static_cast<std::size_t>(sigma.size()));
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    const double c = std::clamp(sigma[i], 0.0, 1.0);
    double angle;
    if (1.0 - c <= tol_zero) {
      angle = 0.0;
      ++out.dim_intersection;
    } else if (c <= tol_zero) {
      angle = kHalfPi;
      ++out.dim_right;
    } else {
      angle = std::acos(c);
    }
    out.angles.push_back(angle);
  }
  std::sort(out.angles.begin(), out.angles.end());
  return out;
}

}  // namespace

const char* field_name(Field f) { return f == Field::Real ? "real" : "complex"; }

Field field_from_name(const std::string& name) {
  if (name == "real") return Field::Real;
  if (name == "complex") return Field::Complex;
  throw std::invalid_argument("unknown field name: " + name + " (expected real or complex)");
}

Subspace Subspace::from_basis(Eigen::MatrixXcd basis, Field field) {
  Subspace s;
  s.ambient = static_cast<int>(basis.rows());
  s.dim = static_cast<int>(basis.cols());
  s.field = field;
  if (s.ambient < 1) throw std::invalid_argument("ambient dimension must be positive");
  if (s.dim > s.ambient) throw std::invalid_argument("subspace dimension exceeds ambient");
  if (field == Field::Real && s.dim > 0 && basis.imag().cwiseAbs().maxCoeff() != 0.0) {
    throw std::invalid_argument("real-field basis has a nonzero imaginary part");
  }
  if (s.dim > 0) {
    const Eigen::MatrixXcd gram = basis.adjoint() * basis;
    const double dev =
        (gram - Eigen::MatrixXcd::Identity(s.dim, s.dim)).cwiseAbs().maxCoeff();
    if (dev > 1e-12) {
      throw std::invalid_argument("basis columns are not orthonormal (deviation " +
                                  std::to_string(dev) + ")");
    }
  }
  s.basis = std::move(basis);
  return s;
}

Subspace haar_subspace(int n, int k, std::uint64_t seed, Field field) {
  if (n < 1) throw std::invalid_argument("ambient dimension must be positive");
  if (k < 0 || k > n) throw std::invalid_argument("subspace dimension must satisfy 0 <= k <= n");
  Subspace s;
  s.ambient = n;
  s.dim = k;
  s.field = field;
  if (k == 0) {
    s.basis = Eigen::MatrixXcd::Zero(n, 0);
    return s;
  }
  GaussianStream stream(seed);
  if (field == Field::Real) {
    Eigen::MatrixXd g(n, k);
    for (int j = 0; j < k; ++j) {
      for (int i = 0; i < n; ++i) g(i, j) = stream.normal();
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
    s.basis = q.cast<std::complex<double>>();
  } else {
    Eigen::MatrixXcd g(n, k);
    for (int j = 0; j < k; ++j) {
      for (int i = 0; i < n; ++i) g(i, j) = stream.complex_normal();
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    s.basis = qr.householderQ() * Eigen::MatrixXcd::Identity(n, k);
  }
  return s;
}

Eigen::MatrixXcd projector(const Subspace& s) {
  if (s.dim == 0) return Eigen::MatrixXcd::Zero(s.ambient, s.ambient);
  return s.basis * s.basis.adjoint();
}

PrincipalAngleSpectrum principal_angles(const Subspace& E, const Subspace& F, double tol_zero) {
  check_pair(E, F);
  if (tol_zero < 0.0 || tol_zero >= 1.0) {
    throw std::invalid_argument("tol_zero must lie in [0, 1)");
  }
  if (E.dim == 0 || F.dim == 0) {
    return classify_cosines(Eigen::VectorXd(), tol_zero, E.dim, F.dim, E.ambient);
  }
  Eigen::VectorXd sigma;
  if (E.field == Field::Real) {
    const Eigen::MatrixXd gram = (E.basis.adjoint() * F.basis).real();
    sigma = gram.bdcSvd().singularValues();
  } else {
    const Eigen::MatrixXcd gram = E.basis.adjoint() * F.basis;
    sigma = gram.bdcSvd().singularValues();
  }
  return classify_cosines(sigma, tol_zero, E.dim, F.dim, E.ambient);
}

PrincipalVectorPair principal_vectors(const Subspace& E, const Subspace& F, double tol_zero) {
  check_pair(E, F);
  PrincipalVectorPair out;
  if (E.dim == 0 || F.dim == 0) {
    out.e_basis = E.basis;
    out.f_basis = F.basis;
    out.angles = classify_cosines(Eigen::VectorXd(), tol_zero, E.dim, F.dim, E.ambient);
    return out;
  }
  // Full U and V rotate the whole bases, so the Gram pattern
  // <e_i, f_j> = delta_ij cos(theta_i) holds including the columns beyond
  // min(k, l).
  if (E.field == Field::Real) {
    const Eigen::MatrixXd gram = (E.basis.adjoint() * F.basis).real();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram, Eigen::ComputeFullU | Eigen::ComputeFullV);
    out.e_basis = E.basis * svd.matrixU().cast<std::complex<double>>();
    out.f_basis = F.basis * svd.matrixV().cast<std::complex<double>>();
    out.angles = classify_cosines(svd.singularValues(), tol_zero, E.dim, F.dim, E.ambient);
  } else {
    const Eigen::MatrixXcd gram = E.basis.adjoint() * F.basis;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(gram, Eigen::ComputeFullU | Eigen::ComputeFullV);
    out.e_basis = E.basis * svd.matrixU();
    out.f_basis = F.basis * svd.matrixV();
    out.angles = classify_cosines(svd.singularValues(), tol_zero, E.dim, F.dim, E.ambient);
  }
  return out;
}

GenericDims generic_dims(int n, int k, int l) {
  if (n < 1 || k < 0 || l < 0 || k > n || l > n) {
    throw std::invalid_argument("generic_dims requires 0 <= k, l <= n");
  }
  GenericDims d;
  d.dim_sum = std::min(k + l, n);
  d.dim_intersection = std::max(k + l - n, 0);
  d.nonzero_angles = std::min(std::min(k, l), std::min(n - k, n - l));
  return d;
}

std::pair<Subspace, Subspace> planted_subspace_pair(int n, const std::vector<double>& angles,
                                                    std::uint64_t seed, Field field) {
  const int r = static_cast<int>(angles.size());
  if (2 * r > n) throw std::invalid_argument("planted construction needs 2 * angles.size() <= n");
  for (double theta : angles) {
    if (!(theta >= 0.0 && theta <= kHalfPi)) {
      throw std::invalid_argument("planted angles must lie in [0, pi/2]");
    }
  }
  // One planted angle per orthonormal 2-frame (g_{2i}, g_{2i+1}) of a Haar
  // frame: e_i = g_{2i}, f_i = cos(theta_i) g_{2i} + sin(theta_i) g_{2i+1}.
  const Subspace frame = haar_subspace(n, 2 * r, seed, field);
  Eigen::MatrixXcd e(n, r);
  Eigen::MatrixXcd f(n, r);
  for (int i = 0; i < r; ++i) {
    const double c = std::cos(angles[static_cast<std::size_t>(i)]);
    const double s = std::sin(angles[static_cast<std::size_t>(i)]);
    e.col(i) = frame.basis.col(2 * i);
    f.col(i) = c * frame.basis.col(2 * i) + s * frame.basis.col(2 * i + 1);
  }
  return {Subspace::from_basis(std::move(e), field), Subspace::from_basis(std::move(f), field)};
}

}  // namespace freeproj
