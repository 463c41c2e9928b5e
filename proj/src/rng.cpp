#include "freeproj/rng.hpp"

#include <cmath>
#include <numbers>

namespace freeproj {

double GaussianStream::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Box-Muller. uniform_pos() is strictly positive, so the log is finite.
  const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
  const double phi = 2.0 * std::numbers::pi * uniform01();
  spare_ = r * std::sin(phi);
  have_spare_ = true;
  return r * std::cos(phi);
}

std::complex<double> GaussianStream::complex_normal() {
  const double x = normal();
  const double y = normal();
  return {x * std::numbers::sqrt2 / 2.0, y * std::numbers::sqrt2 / 2.0};
}

}  // namespace freeproj
