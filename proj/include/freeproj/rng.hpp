#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace freeproj {

// Stateless-style 64-bit mixer (SplitMix64). Used to derive independent
// substream seeds from a base seed, e.g. one stream per Monte Carlo trial.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
};

// Deterministic Gaussian stream. Uniforms come from std::mt19937_64 (the
// engine's output sequence is fixed by the language standard, so runs are
// reproducible across platforms); normals are produced with the classic
// Box-Muller transform rather than std::normal_distribution, whose exact
// output is implementation defined.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : gen_(seed) {}

  // Uniform in (0, 1]; never returns 0 so log() below is safe.
  double uniform_pos() { return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53; }

  // Uniform in [0, 1).
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Standard real Gaussian.
  double normal();

  // Standard complex Gaussian: (x + iy)/sqrt(2) with x, y independent N(0,1),
  // so E|z|^2 = 1.
  std::complex<double> complex_normal();

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace freeproj
