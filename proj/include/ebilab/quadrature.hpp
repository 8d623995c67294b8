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

#ifndef EBILAB_QUADRATURE_HPP
#define EBILAB_QUADRATURE_HPP

#include <cstddef>

#include "ebilab/common.hpp"

namespace ebilab {

// Composite trapezoid on [0, upper]. Exact for affine integrands.
template <typename F>
double trapezoid(F&& f, double upper, std::size_t steps) {
  if (steps == 0) throw ConfigError("trapezoid: steps must be >= 1");
  require_finite(upper, "trapezoid upper limit");
  if (upper == 0.0) return 0.0;
  const double h = upper / static_cast<double>(steps);
  double sum = 0.5 * (f(0.0) + f(upper));
  for (std::size_t i = 1; i < steps; ++i) {
    sum += f(h * static_cast<double>(i));
  }
  return sum * h;
}

// Composite trapezoid on [0, ux] x [0, uy], tensor product of the 1-D rule.
template <typename F>
double trapezoid2(F&& f, double ux, std::size_t sx, double uy, std::size_t sy) {
  if (sx == 0 || sy == 0) throw ConfigError("trapezoid2: steps must be >= 1");
  require_finite(ux, "trapezoid2 x limit");
  require_finite(uy, "trapezoid2 y limit");
  if (ux == 0.0 || uy == 0.0) return 0.0;
  const double hx = ux / static_cast<double>(sx);
  const double hy = uy / static_cast<double>(sy);
  double sum = 0.0;
  for (std::size_t i = 0; i <= sx; ++i) {
    const double wx = (i == 0 || i == sx) ? 0.5 : 1.0;
    const double x = hx * static_cast<double>(i);
    for (std::size_t j = 0; j <= sy; ++j) {
      const double wy = (j == 0 || j == sy) ? 0.5 : 1.0;
      sum += wx * wy * f(x, hy * static_cast<double>(j));
    }
  }
  return sum * hx * hy;
}

}  // namespace ebilab

#endif  // EBILAB_QUADRATURE_HPP
