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
//
// Cooperative-game analysis over small characteristic functions:
// super-additivity audit, core emptiness with re-checkable certificates in
// exact rational arithmetic, and Shapley allocations.

#ifndef EBILAB_COALITION_HPP
#define EBILAB_COALITION_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "ebilab/common.hpp"
#include "ebilab/rational.hpp"

namespace ebilab {

using CoalitionMask = unsigned;

// Complete coalition -> value map for 2..6 players, indexed by member
// bitmask. Values are transferable currency.
struct CharacteristicFunction {
  int n = 0;
  std::vector<double> v;  // 2^n entries, v[0] must be 0

  static CharacteristicFunction zeros(int players) {
    CharacteristicFunction cf;
    cf.n = players;
    cf.v.assign(std::size_t{1} << players, 0.0);
    return cf;
  }

  CoalitionMask grand() const { return (CoalitionMask{1} << n) - 1; }

  double value(CoalitionMask s) const { return v[s]; }
  void set_value(CoalitionMask s, double x) { v[s] = x; }

  void validate() const {
    if (n < 2 || n > 6) throw ConfigError("player count must be in [2, 6]");
    if (v.size() != (std::size_t{1} << n)) {
      throw ConfigError("value table must have one entry per coalition");
    }
    if (v[0] != 0.0) throw std::domain_error("empty coalition must map to 0");
    for (double x : v) require_finite(x, "coalition value");
  }
};

struct SuperadditivityReport {
  bool holds = true;
  // First violating disjoint pair in mask order: v(S|T) < v(S) + v(T).
  std::optional<std::pair<CoalitionMask, CoalitionMask>> counterexample;
};

inline SuperadditivityReport is_superadditive(const CharacteristicFunction& cf) {
  cf.validate();
  const CoalitionMask grand = cf.grand();
  for (CoalitionMask s = 1; s <= grand; ++s) {
    for (CoalitionMask t = s + 1; t <= grand; ++t) {
      if ((s & t) != 0) continue;
      if (cf.value(s | t) < cf.value(s) + cf.value(t)) {
        return {false, std::make_pair(s, t)};
      }
    }
  }
  return {};
}

// A family of coalitions with positive weights giving every player total
// membership weight exactly 1.
struct WeightedCollection {
  std::vector<CoalitionMask> coalitions;
  std::vector<Rational> weights;
};

namespace detail {

// Gauss-Jordan on an overdetermined rows x cols system; succeeds only when
// the solution exists and is unique.
inline bool solve_exact_unique(std::vector<Rational> a, std::vector<Rational> b,
                               int rows, int cols, std::vector<Rational>& out) {
  std::vector<int> pivot_row(static_cast<std::size_t>(cols), -1);
  int rank = 0;
  for (int col = 0; col < cols; ++col) {
    int pr = -1;
    for (int r = rank; r < rows; ++r) {
      if (a[static_cast<std::size_t>(r) * cols + col] != 0) {
        pr = r;
        break;
      }
    }
    if (pr < 0) return false;  // free column: not unique
    if (pr != rank) {
      for (int c = 0; c < cols; ++c) {
        swap(a[static_cast<std::size_t>(pr) * cols + c],
             a[static_cast<std::size_t>(rank) * cols + c]);
      }
      swap(b[static_cast<std::size_t>(pr)], b[static_cast<std::size_t>(rank)]);
    }
    const Rational inv = 1 / a[static_cast<std::size_t>(rank) * cols + col];
    for (int c = 0; c < cols; ++c) {
      a[static_cast<std::size_t>(rank) * cols + c] *= inv;
    }
    b[static_cast<std::size_t>(rank)] *= inv;
    for (int r = 0; r < rows; ++r) {
      if (r == rank) continue;
      const Rational f = a[static_cast<std::size_t>(r) * cols + col];
      if (f == 0) continue;
      for (int c = 0; c < cols; ++c) {
        a[static_cast<std::size_t>(r) * cols + c] -=
            f * a[static_cast<std::size_t>(rank) * cols + c];
      }
      b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(rank)];
    }
    pivot_row[static_cast<std::size_t>(col)] = rank;
    ++rank;
  }
  for (int r = rank; r < rows; ++r) {
    if (b[static_cast<std::size_t>(r)] != 0) return false;  // inconsistent
  }
  out.assign(static_cast<std::size_t>(cols), Rational(0));
  for (int col = 0; col < cols; ++col) {
    out[static_cast<std::size_t>(col)] =
        b[static_cast<std::size_t>(pivot_row[static_cast<std::size_t>(col)])];
  }
  return true;
}

}  // namespace detail

// Enumerates every minimal balanced collection of proper coalitions. A
// collection is minimal balanced exactly when its balancing weights exist,
// are unique, and are all positive; minimality bounds the size by n.
inline std::vector<WeightedCollection> minimal_balanced_collections(int n) {
  if (n < 2 || n > 6) throw ConfigError("player count must be in [2, 6]");
  const CoalitionMask grand = (CoalitionMask{1} << n) - 1;
  std::vector<CoalitionMask> proper;
  for (CoalitionMask s = 1; s < grand; ++s) proper.push_back(s);
  const int p = static_cast<int>(proper.size());

  std::vector<WeightedCollection> found;
  for (int k = 1; k <= n; ++k) {
    std::vector<int> pick(static_cast<std::size_t>(k));
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      std::vector<Rational> a(static_cast<std::size_t>(n) * k, Rational(0));
      std::vector<Rational> b(static_cast<std::size_t>(n), Rational(1));
      for (int j = 0; j < k; ++j) {
        const CoalitionMask s = proper[static_cast<std::size_t>(
            pick[static_cast<std::size_t>(j)])];
        for (int i = 0; i < n; ++i) {
          if (s & (CoalitionMask{1} << i)) {
            a[static_cast<std::size_t>(i) * k + j] = 1;
          }
        }
      }
      std::vector<Rational> delta;
      if (detail::solve_exact_unique(std::move(a), std::move(b), n, k, delta)) {
        const bool all_positive =
            std::all_of(delta.begin(), delta.end(),
                        [](const Rational& d) { return d > 0; });
        if (all_positive) {
          WeightedCollection wc;
          for (int j = 0; j < k; ++j) {
            wc.coalitions.push_back(proper[static_cast<std::size_t>(
                pick[static_cast<std::size_t>(j)])]);
          }
          wc.weights = std::move(delta);
          found.push_back(std::move(wc));
        }
      }
      int i = k - 1;
      while (i >= 0 && pick[static_cast<std::size_t>(i)] == p - k + i) --i;
      if (i < 0) break;
      ++pick[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k; ++j) {
        pick[static_cast<std::size_t>(j)] =
            pick[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
  }
  return found;
}

namespace detail {

struct LinIneq {
  std::vector<Rational> a;  // a . y <= b
  Rational b;
};

inline void canonicalize(LinIneq& q) {
  for (const auto& c : q.a) {
    if (c != 0) {
      const Rational scale = 1 / abs(c);
      for (auto& cc : q.a) cc *= scale;
      q.b *= scale;
      return;
    }
  }
}

// Fourier-Motzkin elimination; returns a feasible point or nullopt. Exact,
// so feasible/infeasible is a proof either way at these sizes.
inline std::optional<std::vector<Rational>> fm_feasible_point(
    std::vector<LinIneq> system, int n_vars) {
  std::vector<std::vector<LinIneq>> levels(
      static_cast<std::size_t>(n_vars) + 1);
  levels[static_cast<std::size_t>(n_vars)] = std::move(system);

  for (int m = n_vars; m >= 1; --m) {
    auto& level = levels[static_cast<std::size_t>(m)];
    // Drop trivial rows; fail fast on 0 <= negative.
    for (auto& q : level) {
      const bool all_zero = std::all_of(q.a.begin(), q.a.end(),
                                        [](const Rational& c) { return c == 0; });
      if (all_zero && q.b < 0) return std::nullopt;
    }
    if (m == 1) break;

    std::vector<LinIneq> lower, upper, pass;
    for (auto& q : level) {
      const Rational& coef = q.a[static_cast<std::size_t>(m - 1)];
      if (coef > 0) {
        upper.push_back(q);
      } else if (coef < 0) {
        lower.push_back(q);
      } else {
        LinIneq trimmed;
        trimmed.a.assign(q.a.begin(), q.a.end() - 1);
        trimmed.b = q.b;
        pass.push_back(std::move(trimmed));
      }
    }
    std::vector<LinIneq> next = std::move(pass);
    for (const auto& lo : lower) {
      for (const auto& up : upper) {
        const Rational pu = up.a[static_cast<std::size_t>(m - 1)];
        const Rational ql = -lo.a[static_cast<std::size_t>(m - 1)];  // > 0
        LinIneq combined;
        combined.a.resize(static_cast<std::size_t>(m) - 1);
        for (int j = 0; j < m - 1; ++j) {
          combined.a[static_cast<std::size_t>(j)] =
              pu * lo.a[static_cast<std::size_t>(j)] +
              ql * up.a[static_cast<std::size_t>(j)];
        }
        combined.b = pu * lo.b + ql * up.b;
        canonicalize(combined);
        next.push_back(std::move(combined));
      }
    }
    // Deduplicate to keep the cascade small.
    std::sort(next.begin(), next.end(), [](const LinIneq& x, const LinIneq& y) {
      if (x.a != y.a) return x.a < y.a;
      return x.b < y.b;
    });
    next.erase(std::unique(next.begin(), next.end(),
                           [](const LinIneq& x, const LinIneq& y) {
                             return x.a == y.a && x.b == y.b;
                           }),
               next.end());
    levels[static_cast<std::size_t>(m) - 1] = std::move(next);
  }

  // Back-substitute from the single-variable level upward.
  std::vector<Rational> y(static_cast<std::size_t>(n_vars), Rational(0));
  for (int m = 1; m <= n_vars; ++m) {
    std::optional<Rational> lo, hi;
    for (const auto& q : levels[static_cast<std::size_t>(m)]) {
      Rational rest(0);
      for (int j = 0; j < m - 1; ++j) {
        rest += q.a[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(j)];
      }
      const Rational& coef = q.a[static_cast<std::size_t>(m - 1)];
      if (coef > 0) {
        const Rational bound = (q.b - rest) / coef;
        if (!hi || bound < *hi) hi = bound;
      } else if (coef < 0) {
        const Rational bound = (q.b - rest) / coef;
        if (!lo || bound > *lo) lo = bound;
      } else if (rest > q.b) {
        return std::nullopt;  // projection guarantee violated
      }
    }
    if (lo && hi) {
      if (*lo > *hi) return std::nullopt;
      y[static_cast<std::size_t>(m) - 1] = (*lo + *hi) / 2;
    } else if (lo) {
      y[static_cast<std::size_t>(m) - 1] = *lo + 1;
    } else if (hi) {
      y[static_cast<std::size_t>(m) - 1] = *hi - 1;
    }
  }
  return y;
}

inline std::vector<Rational> exact_values(const CharacteristicFunction& cf) {
  std::vector<Rational> vals;
  vals.reserve(cf.v.size());
  for (double x : cf.v) vals.push_back(rational_from_double(x));
  return vals;
}

inline bool imputation_in_core(const CharacteristicFunction& cf,
                               const std::vector<Rational>& x) {
  const auto vals = exact_values(cf);
  const CoalitionMask grand = cf.grand();
  Rational total(0);
  for (const auto& xi : x) total += xi;
  if (total != vals[grand]) return false;
  for (CoalitionMask s = 1; s < grand; ++s) {
    Rational sum(0);
    for (int i = 0; i < cf.n; ++i) {
      if (s & (CoalitionMask{1} << i)) sum += x[static_cast<std::size_t>(i)];
    }
    if (sum < vals[s]) return false;
  }
  return true;
}

}  // namespace detail

struct CoreOptions {
  int sample_count = 20000;        // feasibility-search budget for n in {5, 6}
  std::uint64_t seed = 20260822;   // sampler stream
};

struct CoreVerdict {
  bool empty = false;
  // True when the verdict carries a certificate that re-checks exactly:
  // always for n <= 4; for n in {5, 6} only non-empty findings and the
  // singleton shortcut. A sampler miss is evidence, not proof.
  bool certified = true;
  std::optional<std::vector<Rational>> imputation;        // when non-empty
  std::optional<WeightedCollection> blocking_collection;  // when empty
  Rational blocking_excess;  // sum(delta * v(S)) - v(N) of the certificate
  int samples_tried = 0;
};

// Core emptiness decision. For n <= 4 the verdict is exact: feasibility by
// Fourier-Motzkin and, when empty, a violated minimal balanced collection
// (which must exist by the balancedness characterization of non-emptiness).
// For n in {5, 6} a seeded feasibility search runs instead; found points are
// verified exactly before being returned.
inline CoreVerdict core_is_empty(const CharacteristicFunction& cf,
                                 const CoreOptions& options = {}) {
  cf.validate();
  const auto vals = detail::exact_values(cf);
  const CoalitionMask grand = cf.grand();
  const int n = cf.n;

  // Singleton split: if the players' solo values already exceed v(N), the
  // singleton partition is a balanced collection proving emptiness at any n.
  {
    Rational solo_sum(0);
    for (int i = 0; i < n; ++i) solo_sum += vals[CoalitionMask{1} << i];
    if (solo_sum > vals[grand]) {
      CoreVerdict verdict;
      verdict.empty = true;
      WeightedCollection singletons;
      for (int i = 0; i < n; ++i) {
        singletons.coalitions.push_back(CoalitionMask{1} << i);
        singletons.weights.emplace_back(1);
      }
      verdict.blocking_collection = std::move(singletons);
      verdict.blocking_excess = solo_sum - vals[grand];
      return verdict;
    }
  }

  if (n <= 4) {
    // Variables y_0..y_{n-2}; the last payoff is v(N) minus their sum.
    const int n_vars = n - 1;
    std::vector<detail::LinIneq> system;
    for (CoalitionMask s = 1; s < grand; ++s) {
      detail::LinIneq q;
      q.a.assign(static_cast<std::size_t>(n_vars), Rational(0));
      if (s & (CoalitionMask{1} << (n - 1))) {
        for (int i = 0; i < n_vars; ++i) {
          if (!(s & (CoalitionMask{1} << i))) {
            q.a[static_cast<std::size_t>(i)] = 1;
          }
        }
        q.b = vals[grand] - vals[s];
      } else {
        for (int i = 0; i < n_vars; ++i) {
          if (s & (CoalitionMask{1} << i)) {
            q.a[static_cast<std::size_t>(i)] = -1;
          }
        }
        q.b = -vals[s];
      }
      system.push_back(std::move(q));
    }

    const auto point = detail::fm_feasible_point(std::move(system), n_vars);
    if (point) {
      std::vector<Rational> x = *point;
      Rational rest(0);
      for (const auto& yi : x) rest += yi;
      x.push_back(vals[grand] - rest);
      if (!detail::imputation_in_core(cf, x)) {
        throw std::logic_error("core point failed exact re-check");
      }
      CoreVerdict verdict;
      verdict.empty = false;
      verdict.imputation = std::move(x);
      return verdict;
    }

    // Infeasible: a violated minimal balanced collection must exist. Report
    // the one with the largest excess.
    CoreVerdict verdict;
    verdict.empty = true;
    for (auto& wc : minimal_balanced_collections(n)) {
      Rational weighted(0);
      for (std::size_t j = 0; j < wc.coalitions.size(); ++j) {
        weighted += wc.weights[j] * vals[wc.coalitions[j]];
      }
      const Rational excess = weighted - vals[grand];
      if (excess > 0 &&
          (!verdict.blocking_collection || excess > verdict.blocking_excess)) {
        verdict.blocking_collection = std::move(wc);
        verdict.blocking_excess = excess;
      }
    }
    if (!verdict.blocking_collection) {
      throw std::logic_error(
          "infeasible core without a violated balanced collection");
    }
    return verdict;
  }

  // Feasibility search for n in {5, 6}: sample imputations above the solo
  // values, pre-filter in doubles, then confirm candidates exactly.
  Rng rng(split_seed(options.seed, 0x0c0a11));
  std::vector<double> solo(static_cast<std::size_t>(n));
  double solo_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    solo[static_cast<std::size_t>(i)] = cf.value(CoalitionMask{1} << i);
    solo_sum += solo[static_cast<std::size_t>(i)];
  }
  const double slack = cf.value(grand) - solo_sum;

  CoreVerdict verdict;
  verdict.certified = false;
  for (int trial = 0; trial < options.sample_count; ++trial) {
    ++verdict.samples_tried;
    std::vector<double> w(static_cast<std::size_t>(n));
    double wsum = 0.0;
    for (auto& wi : w) {
      wi = rng.exponential();
      wsum += wi;
    }
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      x[static_cast<std::size_t>(i)] =
          solo[static_cast<std::size_t>(i)] +
          slack * w[static_cast<std::size_t>(i)] / wsum;
    }
    bool plausible = true;
    for (CoalitionMask s = 1; s < grand && plausible; ++s) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) {
        if (s & (CoalitionMask{1} << i)) sum += x[static_cast<std::size_t>(i)];
      }
      if (sum < cf.value(s)) plausible = false;
    }
    if (!plausible) continue;

    // Rebuild the candidate exactly, forcing the efficiency equality.
    std::vector<Rational> exact;
    Rational partial(0);
    for (int i = 0; i < n - 1; ++i) {
      exact.push_back(rational_from_double(x[static_cast<std::size_t>(i)]));
      partial += exact.back();
    }
    exact.push_back(vals[grand] - partial);
    if (detail::imputation_in_core(cf, exact)) {
      verdict.empty = false;
      verdict.certified = true;
      verdict.imputation = std::move(exact);
      return verdict;
    }
  }
  verdict.empty = true;  // no point found; approximate by construction
  return verdict;
}

// Permutation-averaged marginal contributions, exact.
inline std::vector<Rational> shapley_value_exact(
    const CharacteristicFunction& cf) {
  cf.validate();
  const auto vals = detail::exact_values(cf);
  const int n = cf.n;
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::vector<Rational> acc(static_cast<std::size_t>(n), Rational(0));
  long permutations = 0;
  do {
    CoalitionMask built = 0;
    for (int i : order) {
      const CoalitionMask with = built | (CoalitionMask{1} << i);
      acc[static_cast<std::size_t>(i)] += vals[with] - vals[built];
      built = with;
    }
    ++permutations;
  } while (std::next_permutation(order.begin(), order.end()));
  for (auto& a : acc) a /= permutations;
  return acc;
}

inline std::vector<double> shapley_value(const CharacteristicFunction& cf) {
  const auto exact = shapley_value_exact(cf);
  std::vector<double> out;
  out.reserve(exact.size());
  for (const auto& q : exact) out.push_back(q.get_d());
  return out;
}

}  // namespace ebilab

#endif  // EBILAB_COALITION_HPP
