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
// The grant negotiation game: a ten-component employee strategy against a
// shareholder-constrained weight proposal, alternating best responses on a
// discrete grid, plus cohort simulation and a Pareto filter for the firm's
// objective vector.

#ifndef EBILAB_STAGE_ONE_HPP
#define EBILAB_STAGE_ONE_HPP

#include <algorithm>
#include <cstdint>
#include <cstddef>
#include <vector>

#include "ebilab/common.hpp"
#include "ebilab/payoff.hpp"

namespace ebilab {

inline constexpr int kStrategyComponents = 10;

// Component intensities, each in [0, 1]:
//   a[0] strike adjustment        a[5] reporting amendment
//   a[1] vesting shortening       a[6] detection-probability minimization
//   a[2] anti-dilution terms      a[7] benchmark minimization
//   a[3] registration rights      a[8] required-effort change
//   a[4] tax minimization         a[9] disclosure-basis change
struct StrategyComponents {
  std::vector<double> a = std::vector<double>(kStrategyComponents, 0.0);

  void validate() const {
    if (a.size() != static_cast<std::size_t>(kStrategyComponents)) {
      throw ConfigError("strategy needs exactly 10 components");
    }
    for (double x : a) require_in_range(x, 0.0, 1.0, "strategy component");
  }
};

struct EmployeeNegotiationParams {
  double s = 0.0;     // share price
  double k = 0.0;     // strike price
  double i_oe = 0.0;  // collusion information value
  double c_a = 0.0;   // work effort contributed
  double f_e = 0.0;   // penalty exposure
  double b = 0.0;     // minimum performance benchmark

  void validate() const {
    require_nonneg(s, "s");
    require_nonneg(k, "k");
    require_nonneg(i_oe, "i_oe");
    require_nonneg(c_a, "c_a");
    require_nonneg(f_e, "f_e");
    require_nonneg(b, "b");
  }
};

struct ShareholderParams {
  double s_p = 0.0;       // intervention strength
  double mgmt_own = 0.0;  // management ownership fraction
  double inst_own = 0.0;  // institutional ownership fraction
  double gov_score = 0.0; // perceived governance efficiency
  double phi = 0.0;       // moral-hazard loss
  double f_c = 0.0;       // company penalty exposure
  std::vector<double> q_weights = std::vector<double>(kStrategyComponents, 0.0);

  void validate() const {
    require_in_range(s_p, 0.0, 1.0, "s_p");
    require_in_range(mgmt_own, 0.0, 1.0, "mgmt_own");
    require_in_range(inst_own, 0.0, 1.0, "inst_own");
    require_in_range(gov_score, 0.0, 1.0, "gov_score");
    if (mgmt_own + inst_own > 1.0) {
      throw std::domain_error("mgmt_own + inst_own must not exceed 1");
    }
    require_nonneg(phi, "phi");
    require_nonneg(f_c, "f_c");
    if (q_weights.size() != static_cast<std::size_t>(kStrategyComponents)) {
      throw ConfigError("q_weights needs exactly 10 entries");
    }
    for (double w : q_weights) require_finite(w, "q_weight");
  }
};

// Additive aggregate of the component strategies.
inline double q_value(const StrategyComponents& strategy,
                      const std::vector<double>& q_weights) {
  strategy.validate();
  if (q_weights.size() != static_cast<std::size_t>(kStrategyComponents)) {
    throw ConfigError("q_weights needs exactly 10 entries");
  }
  double q = 0.0;
  for (std::size_t i = 0; i < strategy.a.size(); ++i) {
    q += q_weights[i] * strategy.a[i];
  }
  return q;
}

// Gain branch minus cost branch. Detection effort a[6] scales down the
// penalty exposure, a[7] the benchmark burden, a[8] the contributed effort.
inline double employee_payoff(const StrategyComponents& strategy,
                              const EmployeeNegotiationParams& params,
                              const std::vector<double>& q_weights) {
  params.validate();
  const double gain =
      q_value(strategy, q_weights) + params.s - params.k + params.i_oe;
  const double cost = params.c_a * (1.0 - strategy.a[8]) +
                      params.f_e * (1.0 - strategy.a[6]) +
                      params.b * (1.0 - strategy.a[7]);
  return gain - cost;
}

// Linear damping of shareholder influence; the factor collapses intervention
// strength, free float, and governance quality into [0, 1].
inline double c_transform(double x, const ShareholderParams& sh) {
  sh.validate();
  require_finite(x, "c_transform input");
  double g = sh.s_p * (1.0 - sh.mgmt_own) *
             (0.5 + 0.5 * sh.gov_score + 0.5 * sh.inst_own);
  g = std::clamp(g, 0.0, 1.0);
  return g * x;
}

inline double shareholder_payoff(const StrategyComponents& strategy,
                                 const ShareholderParams& sh,
                                 const EmployeeNegotiationParams& emp,
                                 const ModifierSet& mods,
                                 const std::vector<double>& q_weights) {
  emp.validate();
  mods.validate();
  const double e = mods.pi * mods.lam * mods.psi;
  const double x = q_value(strategy, q_weights) + sh.f_c + sh.phi;
  return signed_pow(c_transform(emp.b + emp.c_a, sh), e) -
         signed_pow(c_transform(x, sh), e);
}

inline double shareholder_payoff(const StrategyComponents& strategy,
                                 const ShareholderParams& sh,
                                 const EmployeeNegotiationParams& emp,
                                 const ModifierSet& mods) {
  return shareholder_payoff(strategy, sh, emp, mods, sh.q_weights);
}

struct ContractOutcome {
  StrategyComponents employee_strategy;
  std::vector<double> final_q_weights;  // base weights with chosen signs
  double employee_payoff = 0.0;
  double shareholder_payoff = 0.0;
  bool is_pure_nash = false;
  int rounds = 0;
  bool converged = false;
};

namespace detail {

// The employee objective is additive across components, so the grid argmax
// decomposes: per component, scan grid points for the best marginal term,
// lowest index on ties. Equivalent to full-grid enumeration (tests confirm).
inline int best_component_index(double coefficient, int grid_res) {
  int best = 0;
  double best_term = 0.0;  // grid value at index 0 is 0
  for (int idx = 1; idx < grid_res; ++idx) {
    const double x = static_cast<double>(idx) / (grid_res - 1);
    const double term = coefficient * x;
    if (term > best_term) {
      best_term = term;
      best = idx;
    }
  }
  return best;
}

inline double employee_component_coefficient(
    int i, const EmployeeNegotiationParams& emp,
    const std::vector<double>& signed_weights) {
  double c = signed_weights[static_cast<std::size_t>(i)];
  if (i == 6) c += emp.f_e;
  if (i == 7) c += emp.b;
  if (i == 8) c += emp.c_a;
  return c;
}

}  // namespace detail

// Alternating best response: the employee re-selects the component grid
// point-by-point, then the shareholder re-signs each weight, both with
// lowest-index tie-breaks from an all-zero / all-positive start. The
// returned fixed point is the signed contract; its equilibrium flag is an
// exhaustively verified claim, not an assumption.
inline ContractOutcome negotiate(int grid_res,
                                 const EmployeeNegotiationParams& emp,
                                 const ShareholderParams& sh,
                                 const ModifierSet& mods, int max_rounds) {
  emp.validate();
  sh.validate();
  mods.validate();
  if (grid_res < 2) throw ConfigError("grid_res must be >= 2");
  if (max_rounds < 1) throw ConfigError("max_rounds must be >= 1");

  std::vector<int> a_idx(kStrategyComponents, 0);
  std::vector<int> sign(kStrategyComponents, 0);  // 0 -> +1, 1 -> -1

  const auto signed_weights = [&]() {
    std::vector<double> w(sh.q_weights.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i] = (sign[i] == 0 ? 1.0 : -1.0) * sh.q_weights[i];
    }
    return w;
  };
  const auto strategy_of = [&]() {
    StrategyComponents s;
    for (std::size_t i = 0; i < s.a.size(); ++i) {
      s.a[i] = static_cast<double>(a_idx[i]) / (grid_res - 1);
    }
    return s;
  };

  ContractOutcome out;
  for (int round = 0; round < max_rounds; ++round) {
    const std::vector<int> a_before = a_idx;
    const std::vector<int> sign_before = sign;

    // Employee move.
    {
      const auto w = signed_weights();
      for (int i = 0; i < kStrategyComponents; ++i) {
        a_idx[static_cast<std::size_t>(i)] = detail::best_component_index(
            detail::employee_component_coefficient(i, emp, w), grid_res);
      }
    }

    // Shareholder move: flip a sign only when that strictly raises their
    // payoff; the exponent map is monotone in the aggregate X, so
    // per-component comparison is exact.
    {
      const double e = mods.pi * mods.lam * mods.psi;
      const auto strategy = strategy_of();
      for (std::size_t i = 0; i < sh.q_weights.size(); ++i) {
        double x_rest = sh.f_c + sh.phi;
        for (std::size_t j = 0; j < sh.q_weights.size(); ++j) {
          if (j == i) continue;
          x_rest += (sign[j] == 0 ? 1.0 : -1.0) * sh.q_weights[j] *
                    strategy.a[j];
        }
        const double term = sh.q_weights[i] * strategy.a[i];
        const double pay_plus =
            -signed_pow(c_transform(x_rest + term, sh), e);
        const double pay_minus =
            -signed_pow(c_transform(x_rest - term, sh), e);
        sign[i] = pay_minus > pay_plus ? 1 : 0;
      }
    }

    out.rounds = round + 1;
    if (a_idx == a_before && sign == sign_before) {
      out.converged = true;
      break;
    }
  }

  out.employee_strategy = strategy_of();
  out.final_q_weights = signed_weights();
  out.employee_payoff =
      employee_payoff(out.employee_strategy, emp, out.final_q_weights);
  out.shareholder_payoff =
      shareholder_payoff(out.employee_strategy, sh, emp, mods,
                         out.final_q_weights);

  if (out.converged) {
    bool stable = true;
    // Employee deviations: additivity makes per-component scans exhaustive.
    for (int i = 0; i < kStrategyComponents && stable; ++i) {
      const double c = detail::employee_component_coefficient(
          i, emp, out.final_q_weights);
      const double here =
          c * out.employee_strategy.a[static_cast<std::size_t>(i)];
      for (int idx = 0; idx < grid_res; ++idx) {
        const double x = static_cast<double>(idx) / (grid_res - 1);
        if (c * x > here) {
          stable = false;
          break;
        }
      }
    }
    // Shareholder deviations: any sign pattern. The payoff is antitone in
    // the aggregate X, so the component-wise minimum of X is the best
    // reachable pattern.
    if (stable) {
      const double e = mods.pi * mods.lam * mods.psi;
      double x_cur = sh.f_c + sh.phi;
      double x_min = sh.f_c + sh.phi;
      for (std::size_t i = 0; i < sh.q_weights.size(); ++i) {
        const double term = out.final_q_weights[i] *
                            out.employee_strategy.a[i];
        x_cur += term;
        x_min -= std::fabs(sh.q_weights[i] * out.employee_strategy.a[i]);
      }
      if (-signed_pow(c_transform(x_min, sh), e) >
          -signed_pow(c_transform(x_cur, sh), e)) {
        stable = false;
      }
    }
    out.is_pure_nash = stable;
  }
  return out;
}

struct CohortConfig {
  int n_employees = 1;
  std::uint64_t seed = 0;
  int grid_res = 2;
  int max_rounds = 8;
  // Half-widths of the symmetric per-employee draws.
  double perturb_v_e = 0.0;
  double perturb_u_e = 0.0;
  double perturb_t_e = 0.0;

  void validate() const {
    if (n_employees < 1) throw ConfigError("n_employees must be >= 1");
    require_nonneg(perturb_v_e, "perturb_v_e");
    require_nonneg(perturb_u_e, "perturb_u_e");
    require_nonneg(perturb_t_e, "perturb_t_e");
  }
};

struct CohortMember {
  CostLedger ledger;  // the perturbed per-employee ledger actually used
  ContractOutcome contract;
  double stage1_company = 0.0;
  double stage1_employee = 0.0;
};

// One negotiation per employee over individually perturbed ledgers. Streams
// are split per employee from the master seed, so results do not depend on
// evaluation order.
inline std::vector<CohortMember> run_cohort(
    const CohortConfig& config, const CostLedger& base_ledger,
    const EffortPair& effort, const EmployeeNegotiationParams& emp,
    const ShareholderParams& sh, const ModifierSet& mods_firm,
    const ModifierSet& mods_emp, const HorizonSpec& horizon) {
  config.validate();
  base_ledger.validate();

  std::vector<CohortMember> cohort;
  cohort.reserve(static_cast<std::size_t>(config.n_employees));
  for (int member = 0; member < config.n_employees; ++member) {
    Rng rng(split_seed(config.seed, static_cast<std::uint64_t>(member)));
    CohortMember entry;
    entry.ledger = base_ledger;
    entry.ledger.v_e += config.perturb_v_e * rng.symmetric();
    entry.ledger.u_e += config.perturb_u_e * rng.symmetric();
    entry.ledger.t_e =
        std::max(0.0, entry.ledger.t_e + config.perturb_t_e * rng.symmetric());
    entry.contract =
        negotiate(config.grid_res, emp, sh, mods_firm, config.max_rounds);
    entry.stage1_company =
        stage1_value_company(entry.ledger, effort, mods_firm);
    entry.stage1_employee =
        stage1_value_employee(entry.ledger, effort, mods_firm, mods_emp,
                              horizon);
    cohort.push_back(std::move(entry));
  }
  return cohort;
}

// Indices of the non-dominated points, preserving input order. A point is
// dominated when another is at least as good everywhere (per sense) and
// strictly better somewhere.
inline std::vector<std::size_t> pareto_filter(
    const std::vector<std::vector<double>>& points,
    const std::vector<Sense>& senses) {
  for (const auto& p : points) {
    if (p.size() != senses.size()) {
      throw std::invalid_argument("pareto_filter: dimension mismatch");
    }
    for (double v : p) require_finite(v, "pareto point");
  }
  const auto dominates = [&](const std::vector<double>& p,
                             const std::vector<double>& q) {
    bool strictly = false;
    for (std::size_t d = 0; d < senses.size(); ++d) {
      const double a = senses[d] == Sense::kMax ? p[d] : -p[d];
      const double b = senses[d] == Sense::kMax ? q[d] : -q[d];
      if (a < b) return false;
      if (a > b) strictly = true;
    }
    return strictly;
  };
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < points.size() && !dominated; ++j) {
      if (j != i && dominates(points[j], points[i])) dominated = true;
    }
    if (!dominated) keep.push_back(i);
  }
  return keep;
}

}  // namespace ebilab

#endif  // EBILAB_STAGE_ONE_HPP
