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

#include <cmath>
#include <cstdint>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "ebilab/common.hpp"
#include "ebilab/payoff.hpp"
#include "ebilab/stage_one.hpp"

namespace {

using namespace ebilab;

std::vector<double> constant_weights(double w) {
  return std::vector<double>(kStrategyComponents, w);
}

// Full-grid employee scan, odometer order with the last component fastest.
// Deliberately ignores the additive structure the library exploits.
double brute_best_employee_payoff(int grid_res,
                                  const EmployeeNegotiationParams& emp,
                                  const std::vector<double>& weights,
                                  StrategyComponents* argmax = nullptr) {
  std::vector<int> idx(kStrategyComponents, 0);
  double best = -1e300;
  while (true) {
    StrategyComponents s;
    for (std::size_t i = 0; i < s.a.size(); ++i) {
      s.a[i] = static_cast<double>(idx[i]) / (grid_res - 1);
    }
    const double pay = employee_payoff(s, emp, weights);
    if (pay > best) {
      best = pay;
      if (argmax != nullptr) *argmax = s;
    }
    int pos = kStrategyComponents - 1;
    while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == grid_res) {
      idx[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return best;
}

// Best shareholder payoff over all 2^10 sign patterns of the base weights.
double brute_best_shareholder_payoff(const StrategyComponents& strategy,
                                     const ShareholderParams& sh,
                                     const EmployeeNegotiationParams& emp,
                                     const ModifierSet& mods) {
  double best = -1e300;
  for (unsigned mask = 0; mask < (1u << kStrategyComponents); ++mask) {
    std::vector<double> w = sh.q_weights;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if ((mask >> i) & 1u) w[i] = -w[i];
    }
    best = std::max(best, shareholder_payoff(strategy, sh, emp, mods, w));
  }
  return best;
}

// Independent verdict for the equilibrium flag: no unilateral deviation by
// either player may strictly improve on the negotiated profile.
bool brute_is_pure_nash(const ContractOutcome& out, int grid_res,
                        const EmployeeNegotiationParams& emp,
                        const ShareholderParams& sh, const ModifierSet& mods) {
  const double best_emp =
      brute_best_employee_payoff(grid_res, emp, out.final_q_weights);
  if (best_emp > out.employee_payoff) return false;
  const double best_sh =
      brute_best_shareholder_payoff(out.employee_strategy, sh, emp, mods);
  return best_sh <= out.shareholder_payoff;
}

TEST_CASE("q_value aggregates weighted components") {
  StrategyComponents zero;
  CHECK(q_value(zero, constant_weights(3.0)) == 0.0);

  StrategyComponents basis;
  basis.a[2] = 1.0;
  CHECK(q_value(basis, constant_weights(1.0)) == 1.0);

  StrategyComponents halves;
  for (auto& x : halves.a) x = 0.5;
  CHECK(q_value(halves, constant_weights(2.0)) == 10.0);

  CHECK_THROWS_AS(q_value(zero, std::vector<double>(9, 1.0)), ConfigError);
  StrategyComponents bad;
  bad.a[0] = 1.5;
  CHECK_THROWS_AS(q_value(bad, constant_weights(1.0)), std::domain_error);
}

TEST_CASE("employee payoff reference points") {
  StrategyComponents zero;
  EmployeeNegotiationParams emp;
  CHECK(employee_payoff(zero, emp, constant_weights(0.0)) == 0.0);

  emp.s = 10.0;
  emp.k = 4.0;
  emp.i_oe = 1.0;
  CHECK(employee_payoff(zero, emp, constant_weights(0.0)) == 7.0);

  EmployeeNegotiationParams emp2;
  emp2.s = 10.0;
  emp2.k = 4.0;
  emp2.c_a = 2.0;
  emp2.f_e = 1.0;
  emp2.b = 1.0;
  CHECK(employee_payoff(zero, emp2, constant_weights(1.0)) == 2.0);

  // Full mitigation: a7 kills the penalty, a8 the benchmark, a9 the effort
  // charge, leaving only the gain branch.
  StrategyComponents mitigated;
  mitigated.a[6] = 1.0;
  mitigated.a[7] = 1.0;
  mitigated.a[8] = 1.0;
  CHECK(employee_payoff(mitigated, emp2, constant_weights(0.0)) == 6.0);
}

TEST_CASE("employee payoff is monotone in its currency terms") {
  Rng rng(701);
  for (int trial = 0; trial < 50; ++trial) {
    StrategyComponents s;
    for (auto& x : s.a) x = 0.9 * rng.uniform();
    EmployeeNegotiationParams emp;
    emp.s = 5.0 * rng.uniform();
    emp.k = 5.0 * rng.uniform();
    emp.i_oe = 2.0 * rng.uniform();
    emp.c_a = 2.0 * rng.uniform();
    emp.f_e = 2.0 * rng.uniform();
    emp.b = 2.0 * rng.uniform();
    std::vector<double> w(kStrategyComponents);
    for (auto& x : w) x = rng.symmetric();

    const double base = employee_payoff(s, emp, w);
    const double delta = 0.25;
    auto bumped = [&](auto field) {
      EmployeeNegotiationParams e2 = emp;
      field(e2);
      return employee_payoff(s, e2, w);
    };
    CHECK(bumped([&](auto& e) { e.s += delta; }) > base);
    CHECK(bumped([&](auto& e) { e.i_oe += delta; }) > base);
    CHECK(bumped([&](auto& e) { e.k += delta; }) < base);
    CHECK(bumped([&](auto& e) { e.c_a += delta; }) < base);
    CHECK(bumped([&](auto& e) { e.f_e += delta; }) < base);
    CHECK(bumped([&](auto& e) { e.b += delta; }) < base);
  }
}

TEST_CASE("c_transform damps without changing sign") {
  ShareholderParams pass;
  pass.s_p = 1.0;
  pass.gov_score = 1.0;
  CHECK(c_transform(0.0, pass) == 0.0);
  CHECK(c_transform(5.0, pass) == 5.0);

  ShareholderParams powerless;
  CHECK(c_transform(7.0, powerless) == 0.0);
  CHECK(c_transform(-7.0, powerless) == 0.0);

  // Raw factor 1.5 must clamp to 1.
  ShareholderParams clamped;
  clamped.s_p = 1.0;
  clamped.gov_score = 1.0;
  clamped.inst_own = 1.0;
  CHECK(c_transform(2.0, clamped) == 2.0);

  Rng rng(702);
  for (int trial = 0; trial < 200; ++trial) {
    ShareholderParams sh;
    sh.s_p = rng.uniform();
    sh.mgmt_own = rng.uniform();
    sh.inst_own = (1.0 - sh.mgmt_own) * rng.uniform();
    sh.gov_score = rng.uniform();
    const double x = 10.0 * rng.symmetric();
    const double c = c_transform(x, sh);
    CHECK(std::fabs(c) <= std::fabs(x));
    CHECK(c * x >= 0.0);
  }
}

TEST_CASE("shareholder payoff reference points") {
  StrategyComponents zero;
  ShareholderParams sh;
  EmployeeNegotiationParams emp;
  ModifierSet mods;
  CHECK(shareholder_payoff(zero, sh, emp, mods) == 0.0);

  // Full influence, unit exponent: 4 - 1 = 3.
  ShareholderParams strong;
  strong.s_p = 1.0;
  strong.gov_score = 1.0;
  strong.f_c = 1.0;
  EmployeeNegotiationParams emp2;
  emp2.b = 3.0;
  emp2.c_a = 1.0;
  CHECK(shareholder_payoff(zero, strong, emp2, mods) == 3.0);

  // Half influence: 0.5*4 - 0.5*2 = 1.
  ShareholderParams half;
  half.s_p = 1.0;
  half.mgmt_own = 0.5;
  half.gov_score = 1.0;
  half.f_c = 2.0;
  EmployeeNegotiationParams emp3;
  emp3.b = 4.0;
  CHECK(shareholder_payoff(zero, half, emp3, mods) == 1.0);

  // Exponent assembled from the modifier product, still exactly one.
  ModifierSet split;
  split.pi = 2.0;
  split.lam = 0.5;
  CHECK(shareholder_payoff(zero, half, emp3, split) == 1.0);
}

TEST_CASE("negotiation converges immediately on a flat landscape") {
  EmployeeNegotiationParams emp;
  ShareholderParams sh;
  ModifierSet mods;
  const ContractOutcome out = negotiate(2, emp, sh, mods, 8);
  CHECK(out.converged);
  CHECK(out.rounds == 1);
  CHECK(out.is_pure_nash);
  for (double x : out.employee_strategy.a) CHECK(x == 0.0);
  CHECK(out.employee_payoff == 0.0);
  CHECK(out.shareholder_payoff == 0.0);
}

TEST_CASE("negotiation finds the dominant corner") {
  EmployeeNegotiationParams emp;
  ShareholderParams sh;  // powerless: signs never flip
  sh.q_weights = constant_weights(1.0);
  ModifierSet mods;
  const ContractOutcome out = negotiate(2, emp, sh, mods, 8);
  CHECK(out.converged);
  CHECK(out.is_pure_nash);
  for (double x : out.employee_strategy.a) CHECK(x == 1.0);
  CHECK(out.employee_payoff == 10.0);

  StrategyComponents brute_arg;
  const double brute =
      brute_best_employee_payoff(2, emp, out.final_q_weights, &brute_arg);
  CHECK(brute == out.employee_payoff);
  CHECK(brute_arg.a == out.employee_strategy.a);
}

TEST_CASE("negotiation oscillates on the mirrored-interest fixture") {
  // The employee gains through the reporting component exactly where the
  // shareholder loses, so best responses cycle with period two.
  EmployeeNegotiationParams emp;
  ShareholderParams sh;
  sh.s_p = 1.0;
  sh.gov_score = 1.0;
  sh.q_weights[5] = 2.0;
  ModifierSet mods;
  const ContractOutcome out = negotiate(2, emp, sh, mods, 4);
  CHECK_FALSE(out.converged);
  CHECK(out.rounds == 4);
  CHECK_FALSE(out.is_pure_nash);
}

TEST_CASE("negotiation validates its configuration") {
  EmployeeNegotiationParams emp;
  ShareholderParams sh;
  ModifierSet mods;
  CHECK_THROWS_AS(negotiate(1, emp, sh, mods, 8), ConfigError);
  CHECK_THROWS_AS(negotiate(2, emp, sh, mods, 0), ConfigError);
  ShareholderParams bad;
  bad.q_weights.resize(9);
  CHECK_THROWS_AS(negotiate(2, emp, bad, mods, 8), ConfigError);
}

TEST_CASE("equilibrium flag matches an independent brute-force check") {
  ModifierSet unit_mods;
  ModifierSet skew_mods;
  skew_mods.pi = 2.0;
  skew_mods.lam = 0.5;

  struct Fixture {
    int grid_res;
    EmployeeNegotiationParams emp;
    ShareholderParams sh;
    ModifierSet mods;
  };
  std::vector<Fixture> fixtures;

  {  // Dominant corner under a powerless shareholder.
    Fixture f;
    f.grid_res = 2;
    f.sh.q_weights = constant_weights(1.0);
    f.mods = unit_mods;
    fixtures.push_back(f);
  }
  {  // Entirely flat landscape on a finer grid.
    Fixture f;
    f.grid_res = 3;
    f.mods = unit_mods;
    fixtures.push_back(f);
  }
  {  // Negative weights with a strong shareholder: settles immediately.
    Fixture f;
    f.grid_res = 2;
    f.emp.s = 2.0;
    f.emp.k = 1.0;
    f.sh.s_p = 1.0;
    f.sh.gov_score = 1.0;
    f.sh.q_weights = constant_weights(-1.0);
    f.mods = unit_mods;
    fixtures.push_back(f);
  }
  {  // Mixed signs, half influence, penalty couplings, three-point grid.
    Fixture f;
    f.grid_res = 3;
    f.emp.s = 2.0;
    f.emp.k = 1.0;
    f.emp.i_oe = 0.5;
    f.emp.c_a = 1.0;
    f.emp.f_e = 0.5;
    f.emp.b = 2.0;
    f.sh.s_p = 1.0;
    f.sh.mgmt_own = 0.5;
    f.sh.gov_score = 1.0;
    f.sh.phi = 0.5;
    f.sh.f_c = 1.0;
    f.sh.q_weights = {1.0, -2.0, 0.5, 0.0, 0.0, -1.0, 2.0, 0.0, 1.0, -0.5};
    f.mods = skew_mods;
    fixtures.push_back(f);
  }
  {  // Mirrored interests: never converges, flag must stay down.
    Fixture f;
    f.grid_res = 2;
    f.sh.s_p = 1.0;
    f.sh.gov_score = 1.0;
    f.sh.q_weights[5] = 2.0;
    f.mods = unit_mods;
    fixtures.push_back(f);
  }

  int converged_count = 0;
  for (const Fixture& f : fixtures) {
    const ContractOutcome out = negotiate(f.grid_res, f.emp, f.sh, f.mods, 6);
    if (out.converged) {
      ++converged_count;
      CHECK(out.is_pure_nash ==
            brute_is_pure_nash(out, f.grid_res, f.emp, f.sh, f.mods));
      // A fixed point of exact best responses must survive brute force.
      CHECK(out.is_pure_nash);
      const double brute =
          brute_best_employee_payoff(f.grid_res, f.emp, out.final_q_weights);
      CHECK(brute == out.employee_payoff);
    } else {
      CHECK_FALSE(out.is_pure_nash);
    }
  }
  CHECK(converged_count >= 3);
}

TEST_CASE("swapping the players' objectives changes the outcome") {
  // Normal play: the employee chases positive weights while the strong
  // shareholder keeps flipping them away, so no contract settles. With the
  // objectives exchanged the employee suppresses the aggregate voluntarily
  // and the game closes in one round on the all-zero profile.
  EmployeeNegotiationParams emp;
  ShareholderParams sh;
  sh.s_p = 1.0;
  sh.gov_score = 1.0;
  sh.q_weights = constant_weights(1.0);
  ModifierSet mods;
  const int grid_res = 2;
  const int max_rounds = 6;

  const ContractOutcome normal = negotiate(grid_res, emp, sh, mods, max_rounds);

  // Role-swapped dynamic, played out by hand: the employee's grid move
  // maximizes the shareholder objective and vice versa.
  std::vector<int> a_idx(kStrategyComponents, 0);
  std::vector<int> sign(kStrategyComponents, 0);
  bool swapped_converged = false;
  for (int round = 0; round < max_rounds && !swapped_converged; ++round) {
    const auto a_before = a_idx;
    const auto sign_before = sign;
    for (std::size_t i = 0; i < a_idx.size(); ++i) {
      double best = -1e300;
      int best_idx = 0;
      for (int idx = 0; idx < grid_res; ++idx) {
        a_idx[i] = idx;
        StrategyComponents s;
        std::vector<double> w(kStrategyComponents);
        for (std::size_t j = 0; j < s.a.size(); ++j) {
          s.a[j] = static_cast<double>(a_idx[j]) / (grid_res - 1);
          w[j] = (sign[j] == 0 ? 1.0 : -1.0) * sh.q_weights[j];
        }
        const double pay = shareholder_payoff(s, sh, emp, mods, w);
        if (pay > best) {
          best = pay;
          best_idx = idx;
        }
      }
      a_idx[i] = best_idx;
    }
    for (std::size_t i = 0; i < sign.size(); ++i) {
      double best = -1e300;
      int best_sign = 0;
      for (int choice = 0; choice < 2; ++choice) {
        sign[i] = choice;
        StrategyComponents s;
        std::vector<double> w(kStrategyComponents);
        for (std::size_t j = 0; j < s.a.size(); ++j) {
          s.a[j] = static_cast<double>(a_idx[j]) / (grid_res - 1);
          w[j] = (sign[j] == 0 ? 1.0 : -1.0) * sh.q_weights[j];
        }
        const double pay = employee_payoff(s, emp, w);
        if (pay > best) {
          best = pay;
          best_sign = choice;
        }
      }
      sign[i] = best_sign;
    }
    swapped_converged = a_idx == a_before && sign == sign_before;
  }

  StrategyComponents swapped_strategy;
  for (std::size_t i = 0; i < swapped_strategy.a.size(); ++i) {
    swapped_strategy.a[i] = static_cast<double>(a_idx[i]) / (grid_res - 1);
  }
  const bool asymmetric =
      normal.converged != swapped_converged ||
      normal.employee_strategy.a != swapped_strategy.a;
  CHECK(asymmetric);
  CHECK(swapped_converged);
  for (double x : swapped_strategy.a) CHECK(x == 0.0);
}

TEST_CASE("cohort runs are reproducible and individually perturbed") {
  CostLedger base;
  base.u_e = 5.0;
  base.v_e = 1.0;
  base.t_e = 0.1;
  EffortPair effort;
  effort.e_r = 2.0;
  ModifierSet mods;
  HorizonSpec horizon;
  EmployeeNegotiationParams emp;
  emp.s = 10.0;
  emp.k = 4.0;
  ShareholderParams sh;
  sh.q_weights = constant_weights(1.0);

  SECTION("degenerate cohort equals the single negotiation") {
    CohortConfig config;
    config.seed = 42;
    const auto cohort =
        run_cohort(config, base, effort, emp, sh, mods, mods, horizon);
    REQUIRE(cohort.size() == 1);
    const ContractOutcome direct = negotiate(2, emp, sh, mods, 8);
    CHECK(cohort[0].contract.employee_payoff == direct.employee_payoff);
    CHECK(cohort[0].contract.employee_strategy.a == direct.employee_strategy.a);
    CHECK(cohort[0].ledger.u_e == base.u_e);
    CHECK(cohort[0].stage1_company ==
          stage1_value_company(base, effort, mods));
    CHECK(cohort[0].stage1_employee ==
          stage1_value_employee(base, effort, mods, mods, horizon));
  }

  SECTION("equal seeds reproduce every field bitwise") {
    CohortConfig config;
    config.n_employees = 4;
    config.seed = 99;
    config.perturb_v_e = 0.5;
    config.perturb_u_e = 1.0;
    config.perturb_t_e = 0.25;
    const auto first =
        run_cohort(config, base, effort, emp, sh, mods, mods, horizon);
    const auto second =
        run_cohort(config, base, effort, emp, sh, mods, mods, horizon);
    REQUIRE(first.size() == second.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
      CHECK(first[i].ledger.u_e == second[i].ledger.u_e);
      CHECK(first[i].ledger.v_e == second[i].ledger.v_e);
      CHECK(first[i].ledger.t_e == second[i].ledger.t_e);
      CHECK(first[i].stage1_company == second[i].stage1_company);
      CHECK(first[i].stage1_employee == second[i].stage1_employee);
      CHECK(first[i].contract.employee_payoff ==
            second[i].contract.employee_payoff);
    }
  }

  SECTION("distinct draws separate employee values but not the firm's") {
    CohortConfig config;
    config.n_employees = 3;
    config.seed = 7;
    config.perturb_u_e = 1.0;
    const auto cohort =
        run_cohort(config, base, effort, emp, sh, mods, mods, horizon);
    REQUIRE(cohort.size() == 3);
    CHECK(cohort[0].ledger.u_e != cohort[1].ledger.u_e);
    CHECK(cohort[1].ledger.u_e != cohort[2].ledger.u_e);
    CHECK(cohort[0].stage1_employee != cohort[1].stage1_employee);
    CHECK(cohort[1].stage1_employee != cohort[2].stage1_employee);
    CHECK(cohort[0].stage1_company == cohort[1].stage1_company);
    CHECK(cohort[1].stage1_company == cohort[2].stage1_company);
  }

  SECTION("a different seed moves the sampled ledgers") {
    CohortConfig config;
    config.n_employees = 3;
    config.perturb_u_e = 1.0;
    config.seed = 1;
    const auto one =
        run_cohort(config, base, effort, emp, sh, mods, mods, horizon);
    config.seed = 2;
    const auto two =
        run_cohort(config, base, effort, emp, sh, mods, mods, horizon);
    bool any_changed = false;
    for (std::size_t i = 0; i < one.size(); ++i) {
      if (one[i].ledger.u_e != two[i].ledger.u_e) any_changed = true;
    }
    CHECK(any_changed);
  }

  SECTION("tax-time draws never go negative") {
    CohortConfig config;
    config.n_employees = 20;
    config.seed = 5;
    config.perturb_t_e = 10.0;
    const auto cohort =
        run_cohort(config, base, effort, emp, sh, mods, mods, horizon);
    for (const auto& member : cohort) {
      CHECK(member.ledger.t_e >= 0.0);
    }
  }

  SECTION("an empty cohort is rejected") {
    CohortConfig config;
    config.n_employees = 0;
    CHECK_THROWS_AS(
        run_cohort(config, base, effort, emp, sh, mods, mods, horizon),
        ConfigError);
  }
}

TEST_CASE("pareto filter keeps exactly the non-dominated points") {
  using Point = std::vector<double>;
  const std::vector<Sense> max_max{Sense::kMax, Sense::kMax};

  const std::vector<Point> dominated_fan{
      {1.0, 0.0}, {0.0, 1.0}, {0.5, 0.5}, {0.25, 0.25}, {1.0, 1.0}};
  CHECK(pareto_filter(dominated_fan, max_max) ==
        std::vector<std::size_t>{4});

  const std::vector<Point> frontier{{1.0, 0.0}, {0.5, 0.5}, {0.0, 1.0}};
  CHECK(pareto_filter(frontier, max_max) ==
        std::vector<std::size_t>{0, 1, 2});

  const std::vector<Sense> min_max{Sense::kMin, Sense::kMax};
  const std::vector<Point> mixed{{1.0, 5.0}, {2.0, 7.0}, {0.0, 5.0}};
  CHECK(pareto_filter(mixed, min_max) == std::vector<std::size_t>{1, 2});

  // Exact duplicates never dominate each other.
  const std::vector<Point> twins{{1.0, 1.0}, {1.0, 1.0}};
  CHECK(pareto_filter(twins, max_max) == std::vector<std::size_t>{0, 1});

  CHECK_THROWS_AS(
      pareto_filter({{1.0, 2.0, 3.0}}, max_max), std::invalid_argument);
}

}  // namespace
