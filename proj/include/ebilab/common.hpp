// Copyright 2026 The ebilab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EBILAB_COMMON_HPP
#define EBILAB_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace ebilab {

// Unusable run configuration (grid resolutions, quadrature steps, caps).
// Distinct from std::domain_error, which flags numeric inputs outside their
// documented ranges.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw std::domain_error(std::string(what) + " must be finite");
  }
}

inline void require_nonneg(double x, const char* what) {
  require_finite(x, what);
  if (x < 0.0) {
    throw std::domain_error(std::string(what) + " must be >= 0");
  }
}

inline void require_in_range(double x, double lo, double hi, const char* what) {
  require_finite(x, what);
  if (x < lo || x > hi) {
    throw std::domain_error(std::string(what) + " out of range [" +
                            std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

// splitmix64; used to derive independent per-stream seeds from a master seed
// so that evaluation order never changes sampled values.
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// mt19937_64 with hand-rolled variate mappings. The standard fully specifies
// the engine's output stream, while distribution classes are
// implementation-defined, so reproducible scenarios must not use them.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform in [-1, 1].
  double symmetric() { return uniform(-1.0, 1.0); }

  // Inclusive on both ends.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(gen_() % span);
  }

  // Box-Muller, one variate per call.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476 * u2);
  }

  double exponential() {
    double u = uniform();
    while (u <= 0.0) u = uniform();
    return -std::log(u);
  }

  std::uint64_t bits() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace ebilab

#endif  // EBILAB_COMMON_HPP
