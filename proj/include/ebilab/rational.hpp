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

#ifndef EBILAB_RATIONAL_HPP
#define EBILAB_RATIONAL_HPP

#include <gmpxx.h>

#include <cstddef>
#include <vector>

namespace ebilab {

// Exact rational scalar. Core membership and mixed-equilibrium certificates
// are checked in this type so a verdict can never hinge on rounding.
using Rational = mpq_class;

// Exact: every finite double is a dyadic rational and mpq_set_d loses nothing.
inline Rational rational_from_double(double x) { return Rational(x); }

inline double rational_to_double(const Rational& q) { return q.get_d(); }

enum class LinearSolveStatus { kUnique, kSingular, kInconsistent };

// Gaussian elimination with partial (first nonzero) pivoting over mpq.
// a is n x n row-major, b is length n. On kUnique, x holds the solution.
inline LinearSolveStatus solve_linear_system(std::vector<Rational> a,
                                             std::vector<Rational> b,
                                             std::size_t n,
                                             std::vector<Rational>& x) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot * n + col] == 0) ++pivot;
    if (pivot == n) {
      // Free column: the system is not uniquely solvable. Distinguish
      // singular-consistent from inconsistent by continuing elimination on
      // the remaining columns and checking residual rows at the end.
      bool all_zero_row_with_rhs = false;
      for (std::size_t r = col; r < n; ++r) {
        bool zero_row = true;
        for (std::size_t c = col; c < n; ++c) {
          if (a[r * n + c] != 0) { zero_row = false; break; }
        }
        if (zero_row && b[r] != 0) all_zero_row_with_rhs = true;
      }
      return all_zero_row_with_rhs ? LinearSolveStatus::kInconsistent
                                   : LinearSolveStatus::kSingular;
    }
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) {
        swap(a[pivot * n + c], a[col * n + c]);
      }
      swap(b[pivot], b[col]);
    }
    const Rational inv = 1 / a[col * n + col];
    for (std::size_t c = col; c < n; ++c) a[col * n + c] *= inv;
    b[col] *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const Rational factor = a[r * n + col];
      if (factor == 0) continue;
      for (std::size_t c = col; c < n; ++c) {
        a[r * n + c] -= factor * a[col * n + c];
      }
      b[r] -= factor * b[col];
    }
  }
  x.assign(b.begin(), b.end());
  return LinearSolveStatus::kUnique;
}

}  // namespace ebilab

#endif  // EBILAB_RATIONAL_HPP
