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

#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <cstdint>
#include <vector>

#include "ebilab/coalition.hpp"
#include "ebilab/common.hpp"

using namespace ebilab;

namespace {

CharacteristicFunction additive_game(const std::vector<double>& solo) {
  CharacteristicFunction cf =
      CharacteristicFunction::zeros(static_cast<int>(solo.size()));
  for (CoalitionMask s = 1; s <= cf.grand(); ++s) {
    double total = 0.0;
    for (int i = 0; i < cf.n; ++i) {
      if (s & (CoalitionMask{1} << i)) total += solo[static_cast<std::size_t>(i)];
    }
    cf.set_value(s, total);
  }
  return cf;
}

CharacteristicFunction majority_game_3() {
  CharacteristicFunction cf = CharacteristicFunction::zeros(3);
  for (CoalitionMask s = 1; s <= cf.grand(); ++s) {
    cf.set_value(s, std::popcount(s) >= 2 ? 1.0 : 0.0);
  }
  return cf;
}

CharacteristicFunction glove_game() {
  CharacteristicFunction cf = CharacteristicFunction::zeros(3);
  cf.set_value(0b011, 1.0);
  cf.set_value(0b101, 1.0);
  cf.set_value(0b110, 0.0);
  cf.set_value(0b111, 1.0);
  return cf;
}

// Independent membership check used to audit certificates and verdicts.
bool point_in_core(const CharacteristicFunction& cf,
                   const std::vector<Rational>& x) {
  Rational total(0);
  for (const auto& xi : x) total += xi;
  if (total != rational_from_double(cf.value(cf.grand()))) return false;
  for (CoalitionMask s = 1; s < cf.grand(); ++s) {
    Rational sum(0);
    for (int i = 0; i < cf.n; ++i) {
      if (s & (CoalitionMask{1} << i)) sum += x[static_cast<std::size_t>(i)];
    }
    if (sum < rational_from_double(cf.value(s))) return false;
  }
  return true;
}

void verify_balanced(int n, const WeightedCollection& wc) {
  REQUIRE(wc.coalitions.size() == wc.weights.size());
  for (const auto& w : wc.weights) REQUIRE(w > 0);
  for (int i = 0; i < n; ++i) {
    Rational coverage(0);
    for (std::size_t j = 0; j < wc.coalitions.size(); ++j) {
      if (wc.coalitions[j] & (CoalitionMask{1} << i)) {
        coverage += wc.weights[j];
      }
    }
    REQUIRE(coverage == 1);
  }
}

// Direct balancedness test of core non-emptiness, written without touching
// the library's feasibility machinery.
bool bondareva_nonempty(const CharacteristicFunction& cf) {
  const auto vn = rational_from_double(cf.value(cf.grand()));
  for (const auto& wc : minimal_balanced_collections(cf.n)) {
    Rational weighted(0);
    for (std::size_t j = 0; j < wc.coalitions.size(); ++j) {
      weighted += wc.weights[j] * rational_from_double(cf.value(wc.coalitions[j]));
    }
    if (weighted > vn) return false;
  }
  return true;
}

CharacteristicFunction random_game(Rng& r, int n, double lo = -4.0,
                                   double hi = 8.0) {
  CharacteristicFunction cf = CharacteristicFunction::zeros(n);
  for (CoalitionMask s = 1; s <= cf.grand(); ++s) {
    // Half-integer values keep the arithmetic exactly representable.
    cf.set_value(s, 0.5 * r.uniform_int(static_cast<int>(2 * lo),
                                        static_cast<int>(2 * hi)));
  }
  return cf;
}

// Test-side brute-force search for a core point; it may miss one, but any
// point it reports is genuine.
bool sampler_finds_core_point(const CharacteristicFunction& cf, int samples,
                              std::uint64_t seed) {
  Rng r(seed);
  const int n = cf.n;
  std::vector<double> solo(static_cast<std::size_t>(n));
  double solo_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    solo[static_cast<std::size_t>(i)] = cf.value(CoalitionMask{1} << i);
    solo_sum += solo[static_cast<std::size_t>(i)];
  }
  const double slack = cf.value(cf.grand()) - solo_sum;
  if (slack < 0.0) return false;
  for (int t = 0; t < samples; ++t) {
    std::vector<double> w(static_cast<std::size_t>(n));
    double wsum = 0.0;
    for (auto& wi : w) {
      wi = r.exponential();
      wsum += wi;
    }
    std::vector<Rational> x;
    Rational partial(0);
    for (int i = 0; i < n - 1; ++i) {
      x.push_back(rational_from_double(solo[static_cast<std::size_t>(i)] +
                                       slack * w[static_cast<std::size_t>(i)] /
                                           wsum));
      partial += x.back();
    }
    x.push_back(rational_from_double(cf.value(cf.grand())) - partial);
    if (point_in_core(cf, x)) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("characteristic function validation") {
  CHECK_THROWS_AS(CharacteristicFunction::zeros(1).validate(), ConfigError);
  CHECK_THROWS_AS(CharacteristicFunction::zeros(7).validate(), ConfigError);

  CharacteristicFunction bad_size = CharacteristicFunction::zeros(3);
  bad_size.v.pop_back();
  CHECK_THROWS_AS(bad_size.validate(), ConfigError);

  CharacteristicFunction bad_empty = CharacteristicFunction::zeros(2);
  bad_empty.v[0] = 1.0;
  CHECK_THROWS_AS(bad_empty.validate(), std::domain_error);

  CHECK_NOTHROW(CharacteristicFunction::zeros(4).validate());
}

TEST_CASE("superadditivity of an additive game") {
  const auto report = is_superadditive(additive_game({1.0, 1.0, 1.0}));
  CHECK(report.holds);
  CHECK_FALSE(report.counterexample.has_value());
}

TEST_CASE("superadditivity counterexample is the first violating pair") {
  CharacteristicFunction cf = CharacteristicFunction::zeros(2);
  cf.set_value(0b01, 3.0);
  cf.set_value(0b10, 3.0);
  cf.set_value(0b11, 4.0);
  const auto report = is_superadditive(cf);
  REQUIRE_FALSE(report.holds);
  CHECK(report.counterexample->first == 0b01);
  CHECK(report.counterexample->second == 0b10);
}

TEST_CASE("superadditivity verdict is invariant under strategic equivalence") {
  Rng r(613);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = r.uniform_int(2, 4);
    const CharacteristicFunction cf = random_game(r, n);

    const double scale = 0.5 * r.uniform_int(1, 6);
    std::vector<double> shift(static_cast<std::size_t>(n));
    for (auto& d : shift) d = 0.5 * r.uniform_int(-6, 6);

    CharacteristicFunction tf = CharacteristicFunction::zeros(n);
    for (CoalitionMask s = 1; s <= cf.grand(); ++s) {
      double add = 0.0;
      for (int i = 0; i < n; ++i) {
        if (s & (CoalitionMask{1} << i)) add += shift[static_cast<std::size_t>(i)];
      }
      tf.set_value(s, scale * cf.value(s) + add);
    }

    const auto a = is_superadditive(cf);
    const auto b = is_superadditive(tf);
    REQUIRE(a.holds == b.holds);
    if (!a.holds) {
      REQUIRE(a.counterexample == b.counterexample);
    }
  }
}

TEST_CASE("minimal balanced collections for two players") {
  const auto found = minimal_balanced_collections(2);
  REQUIRE(found.size() == 1);
  CHECK(found[0].coalitions == std::vector<CoalitionMask>{0b01, 0b10});
  CHECK(found[0].weights == std::vector<Rational>{Rational(1), Rational(1)});
}

TEST_CASE("minimal balanced collections for three players") {
  const auto found = minimal_balanced_collections(3);
  // Four proper partitions plus the two-set cover {12}{13}{23}.
  REQUIRE(found.size() == 5);
  for (const auto& wc : found) verify_balanced(3, wc);

  bool saw_half_cover = false;
  for (const auto& wc : found) {
    if (wc.coalitions == std::vector<CoalitionMask>{0b011, 0b101, 0b110}) {
      saw_half_cover = true;
      for (const auto& w : wc.weights) CHECK(w == Rational(1, 2));
    }
  }
  CHECK(saw_half_cover);
}

TEST_CASE("minimal balanced collections for four players re-verify") {
  const auto found = minimal_balanced_collections(4);
  CHECK(found.size() == 41);  // classical enumeration for n = 4
  for (const auto& wc : found) {
    verify_balanced(4, wc);
    CHECK(wc.coalitions.size() <= 4);
  }
}

TEST_CASE("core of the three-player majority game is empty with certificate") {
  const auto verdict = core_is_empty(majority_game_3());
  REQUIRE(verdict.empty);
  CHECK(verdict.certified);
  REQUIRE(verdict.blocking_collection.has_value());
  verify_balanced(3, *verdict.blocking_collection);
  CHECK(verdict.blocking_excess == Rational(1, 2));

  // Re-check the certificate from scratch: weighted values exceed v(N).
  Rational weighted(0);
  const auto& wc = *verdict.blocking_collection;
  for (std::size_t j = 0; j < wc.coalitions.size(); ++j) {
    weighted += wc.weights[j] *
                rational_from_double(majority_game_3().value(wc.coalitions[j]));
  }
  CHECK(weighted - rational_from_double(1.0) == verdict.blocking_excess);
}

TEST_CASE("core of an additive game is its unique allocation") {
  const auto verdict = core_is_empty(additive_game({2.0, 3.0, 4.0}));
  REQUIRE_FALSE(verdict.empty);
  CHECK(verdict.certified);
  REQUIRE(verdict.imputation.has_value());
  const auto& x = *verdict.imputation;
  CHECK(x[0] == Rational(2));
  CHECK(x[1] == Rational(3));
  CHECK(x[2] == Rational(4));
  CHECK(point_in_core(additive_game({2.0, 3.0, 4.0}), x));
}

TEST_CASE("core of a unanimity game is non-empty") {
  CharacteristicFunction cf = CharacteristicFunction::zeros(3);
  cf.set_value(cf.grand(), 1.0);
  const auto verdict = core_is_empty(cf);
  REQUIRE_FALSE(verdict.empty);
  REQUIRE(verdict.imputation.has_value());
  CHECK(point_in_core(cf, *verdict.imputation));
}

TEST_CASE("exact core verdicts agree with direct balancedness testing") {
  Rng r(719);
  int empty_seen = 0;
  int nonempty_seen = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = r.uniform_int(2, 4);
    CharacteristicFunction cf = random_game(r, n);
    // Pull the grand value down on some trials so both verdicts occur.
    if (trial % 3 == 0) cf.set_value(cf.grand(), cf.value(cf.grand()) - 3.0);

    const auto verdict = core_is_empty(cf);
    CHECK(verdict.certified);
    REQUIRE(verdict.empty == !bondareva_nonempty(cf));

    if (verdict.empty) {
      ++empty_seen;
      REQUIRE(verdict.blocking_collection.has_value());
      verify_balanced(n, *verdict.blocking_collection);
      CHECK(verdict.blocking_excess > 0);
      Rational weighted(0);
      const auto& wc = *verdict.blocking_collection;
      for (std::size_t j = 0; j < wc.coalitions.size(); ++j) {
        weighted += wc.weights[j] * rational_from_double(cf.value(wc.coalitions[j]));
      }
      CHECK(weighted - rational_from_double(cf.value(cf.grand())) ==
            verdict.blocking_excess);
    } else {
      ++nonempty_seen;
      REQUIRE(verdict.imputation.has_value());
      CHECK(point_in_core(cf, *verdict.imputation));
    }

    // The sampler must never find a point in a certified-empty core.
    if (sampler_finds_core_point(cf, 300, 1000 + static_cast<std::uint64_t>(trial))) {
      CHECK_FALSE(verdict.empty);
    }
  }
  CHECK(empty_seen > 0);
  CHECK(nonempty_seen > 0);
}

TEST_CASE("five-player verdicts: search, singleton shortcut, honest misses") {
  SECTION("additive game has the single core point found by the search") {
    const auto verdict = core_is_empty(additive_game({1.0, 2.0, 3.0, 4.0, 5.0}));
    REQUIRE_FALSE(verdict.empty);
    CHECK(verdict.certified);
    CHECK(point_in_core(additive_game({1.0, 2.0, 3.0, 4.0, 5.0}),
                        *verdict.imputation));
  }

  SECTION("excess singleton demands certify emptiness without sampling") {
    CharacteristicFunction cf = CharacteristicFunction::zeros(5);
    for (int i = 0; i < 5; ++i) cf.set_value(CoalitionMask{1} << i, 2.0);
    cf.set_value(cf.grand(), 5.0);
    const auto verdict = core_is_empty(cf);
    REQUIRE(verdict.empty);
    CHECK(verdict.certified);
    REQUIRE(verdict.blocking_collection.has_value());
    CHECK(verdict.blocking_collection->coalitions.size() == 5);
    CHECK(verdict.blocking_excess == Rational(5));
    CHECK(verdict.samples_tried == 0);
  }

  SECTION("an empty core beyond the shortcut reports an uncertified miss") {
    CharacteristicFunction cf = CharacteristicFunction::zeros(5);
    for (CoalitionMask s = 1; s <= cf.grand(); ++s) {
      cf.set_value(s, std::popcount(s) >= 3 ? 1.0 : 0.0);
    }
    CoreOptions options;
    options.sample_count = 500;
    const auto verdict = core_is_empty(cf, options);
    CHECK(verdict.empty);
    CHECK_FALSE(verdict.certified);
    CHECK(verdict.samples_tried == 500);
  }

  SECTION("roomy core is found quickly") {
    CharacteristicFunction cf = CharacteristicFunction::zeros(5);
    cf.set_value(cf.grand(), 50.0);
    for (CoalitionMask s = 1; s < cf.grand(); ++s) {
      cf.set_value(s, 1.0);
    }
    const auto verdict = core_is_empty(cf);
    REQUIRE_FALSE(verdict.empty);
    CHECK(point_in_core(cf, *verdict.imputation));
  }
}

TEST_CASE("shapley value of the glove game") {
  const auto phi = shapley_value_exact(glove_game());
  CHECK(phi[0] == Rational(2, 3));
  CHECK(phi[1] == Rational(1, 6));
  CHECK(phi[2] == Rational(1, 6));

  const auto phi_d = shapley_value(glove_game());
  CHECK_THAT(phi_d[0], Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-15));
}

TEST_CASE("shapley axioms on random games") {
  Rng r(829);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = r.uniform_int(2, 5);
    const CharacteristicFunction cf = random_game(r, n);
    const auto phi = shapley_value_exact(cf);

    // Efficiency.
    Rational total(0);
    for (const auto& p : phi) total += p;
    REQUIRE(total == rational_from_double(cf.value(cf.grand())));

    // Additivity against a second random game.
    const CharacteristicFunction cg = random_game(r, n);
    CharacteristicFunction sum = CharacteristicFunction::zeros(n);
    for (CoalitionMask s = 1; s <= cf.grand(); ++s) {
      sum.set_value(s, cf.value(s) + cg.value(s));
    }
    const auto phi_g = shapley_value_exact(cg);
    const auto phi_sum = shapley_value_exact(sum);
    for (int i = 0; i < n; ++i) {
      REQUIRE(phi_sum[static_cast<std::size_t>(i)] ==
              phi[static_cast<std::size_t>(i)] + phi_g[static_cast<std::size_t>(i)]);
    }
  }
}

TEST_CASE("shapley symmetry and dummy axioms") {
  // Players 0 and 1 are interchangeable; player 2 contributes nothing.
  CharacteristicFunction cf = CharacteristicFunction::zeros(3);
  cf.set_value(0b001, 1.0);
  cf.set_value(0b010, 1.0);
  cf.set_value(0b011, 5.0);
  cf.set_value(0b100, 0.0);
  cf.set_value(0b101, 1.0);
  cf.set_value(0b110, 1.0);
  cf.set_value(0b111, 5.0);
  const auto phi = shapley_value_exact(cf);
  CHECK(phi[0] == phi[1]);
  CHECK(phi[2] == 0);
}

TEST_CASE("shapley matches the subset-weighted formula") {
  Rng r(907);
  const auto factorial = [](int k) {
    Rational f(1);
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  };
  for (int trial = 0; trial < 15; ++trial) {
    const int n = r.uniform_int(2, 5);
    const CharacteristicFunction cf = random_game(r, n);
    const auto phi = shapley_value_exact(cf);
    const Rational n_fact = factorial(n);
    for (int i = 0; i < n; ++i) {
      Rational expect(0);
      const CoalitionMask me = CoalitionMask{1} << i;
      for (CoalitionMask s = 0; s <= cf.grand(); ++s) {
        if (s & me) continue;
        const int size = std::popcount(s);
        const Rational weight =
            factorial(size) * factorial(n - size - 1) / n_fact;
        expect += weight * (rational_from_double(cf.value(s | me)) -
                            rational_from_double(cf.value(s)));
      }
      REQUIRE(phi[static_cast<std::size_t>(i)] == expect);
    }
  }
}
