#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace freeproj {

enum class Field { Real, Complex };

const char* field_name(Field f);
Field field_from_name(const std::string& name);

// Linear subspace of K^n (K = R or C), stored as an orthonormal basis in the
// columns of an n x k matrix. Real-field subspaces keep a zero imaginary part.
struct Subspace {
  int ambient = 0;  // n
  int dim = 0;      // k
  Field field = Field::Real;
  Eigen::MatrixXcd basis;  // ambient x dim, orthonormal columns

  // Validating constructor path: checks shape and orthonormality of the
  // columns (max deviation of B^H B from the identity at most 1e-12).
  static Subspace from_basis(Eigen::MatrixXcd basis, Field field);
};

// Uniformly (rotation-invariantly) distributed k-dimensional subspace of K^n:
// the span of k i.i.d. Gaussian vectors, orthonormalized by Householder QR.
// Deterministic for a fixed seed. k = 0 yields the zero subspace.
Subspace haar_subspace(int n, int k, std::uint64_t seed, Field field = Field::Real);

// Orthogonal projection onto the subspace, as a dense n x n matrix.
Eigen::MatrixXcd projector(const Subspace& s);

inline constexpr double kDefaultAngleTol = 1e-8;

// Principal angles between two subspaces, nondecreasing in [0, pi/2].
// The classification tolerance acts in the cosine domain: a computed cosine
// within tol_zero of 1 marks an exact-intersection direction and the angle is
// reported as exactly 0; a cosine at most tol_zero marks an orthogonal
// direction and the angle is reported as exactly pi/2. Angles smaller than
// about sqrt(2*tol_zero) are therefore indistinguishable from 0, which is the
// intrinsic resolution of the cosine (SVD) method in double precision.
struct PrincipalAngleSpectrum {
  std::vector<double> angles;   // min(k, l) values, nondecreasing
  double tol_zero = kDefaultAngleTol;
  int dim_intersection = 0;     // angles reported as exactly 0
  int dim_right = 0;            // angles reported as exactly pi/2
  int k = 0;                    // dim E
  int l = 0;                    // dim F
  int n = 0;                    // ambient
};

// Angles via the singular values of the cross Gram matrix B_E^H B_F.
// Cost O(n k l) plus one SVD of a k x l matrix.
PrincipalAngleSpectrum principal_angles(const Subspace& E, const Subspace& F,
                                        double tol_zero = kDefaultAngleTol);

// Principal vectors: orthonormal bases (e_i) of E and (f_j) of F with
// <e_i, f_j> = delta_ij cos(theta_i) for i, j up to min(k, l) and zero beyond.
struct PrincipalVectorPair {
  Eigen::MatrixXcd e_basis;  // n x k
  Eigen::MatrixXcd f_basis;  // n x l
  PrincipalAngleSpectrum angles;
};

PrincipalVectorPair principal_vectors(const Subspace& E, const Subspace& F,
                                      double tol_zero = kDefaultAngleTol);

// Almost-sure dimensions for independent uniformly random subspaces:
// dim(E + F) = min(k + l, n), dim(E inter F) = max(k + l - n, 0), and
// min(k, l, n - k, n - l) angles lie strictly between 0 and pi/2.
struct GenericDims {
  int dim_sum = 0;
  int dim_intersection = 0;
  int nonzero_angles = 0;
};

GenericDims generic_dims(int n, int k, int l);

// Builds a pair (E, F) realizing a prescribed list of principal angles, by
// placing one planted angle per orthonormal 2-frame of a random frame.
// Requires 2 * angles.size() <= n. Useful as an independent recovery oracle.
std::pair<Subspace, Subspace> planted_subspace_pair(int n, const std::vector<double>& angles,
                                                    std::uint64_t seed,
                                                    Field field = Field::Real);

}  // namespace freeproj
