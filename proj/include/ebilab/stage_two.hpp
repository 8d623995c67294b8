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
// Quarterly post-grant games: exercise/hedge/effort choices under dilution
// coupling, a share-price process, trajectory simulation, and coalition
// value functions over joint-exercise agreements.

#ifndef EBILAB_STAGE_TWO_HPP
#define EBILAB_STAGE_TWO_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstddef>
#include <vector>

#include "ebilab/coalition.hpp"
#include "ebilab/common.hpp"
#include "ebilab/equilibrium.hpp"
#include "ebilab/payoff.hpp"

namespace ebilab {

// Identifier for the firm in per-player queries; employees are 0..n-1. The
// firm holds no action axis in the quarter tensors (it moves through grant
// terms and the exercise cap, not per-quarter play).
inline constexpr int kFirmPlayer = -1;

struct QuarterState {
  int quarter_index = 0;
  double share_price = 1.0;
  std::vector<double> vested_fraction;   // per employee, in [0, 1]
  std::vector<double> outstanding_ebi;   // per employee, unexercised units
  double shares_outstanding = 1.0;
  double carry_over = 0.0;  // prior-quarter value feeding this quarter's u

  int n_employees() const { return static_cast<int>(vested_fraction.size()); }

  void validate() const {
    if (quarter_index < 0) throw ConfigError("quarter_index must be >= 0");
    require_finite(share_price, "share_price");
    if (share_price <= 0.0) {
      throw std::domain_error("share_price must be positive");
    }
    if (vested_fraction.empty()) {
      throw ConfigError("state needs at least one employee");
    }
    if (vested_fraction.size() != outstanding_ebi.size()) {
      throw ConfigError("vested_fraction and outstanding_ebi sizes differ");
    }
    for (double f : vested_fraction) {
      require_in_range(f, 0.0, 1.0, "vested_fraction");
    }
    for (double u : outstanding_ebi) require_nonneg(u, "outstanding_ebi");
    require_finite(shares_outstanding, "shares_outstanding");
    if (shares_outstanding <= 0.0) {
      throw std::domain_error("shares_outstanding must be positive");
    }
    require_finite(carry_over, "carry_over");
  }
};

struct EmployeeAction {
  double exercise_fraction = 0.0;  // of vested, unexercised units
  double hedge_fraction = 0.0;
  double effort_level = 0.0;
};

struct ActionProfile {
  std::vector<EmployeeAction> actions;

  void validate() const {
    for (const auto& act : actions) {
      require_in_range(act.exercise_fraction, 0.0, 1.0, "exercise_fraction");
      require_in_range(act.hedge_fraction, 0.0, 1.0, "hedge_fraction");
      require_nonneg(act.effort_level, "effort_level");
    }
  }
};

enum class PriceKind { kDeterministicDrift, kSeededLognormal };

struct PriceModel {
  PriceKind kind = PriceKind::kDeterministicDrift;
  double drift = 0.0;  // per-quarter log drift
  double vol = 0.0;    // per-quarter volatility, lognormal kind only
  double dilution_sensitivity = 0.0;  // log-price impact per 1% dilution
  std::uint64_t seed = 0;             // ignored by the deterministic kind

  void validate() const {
    require_finite(drift, "drift");
    require_nonneg(vol, "vol");
    require_finite(dilution_sensitivity, "dilution_sensitivity");
    if (dilution_sensitivity > 0.0) {
      throw std::domain_error("dilution_sensitivity must be <= 0");
    }
  }
};

// Per-employee grant terms and quarterly posture. Hedging realizes the
// monetization modifier linearly: lambda = 1 + hedge * (lambda_max - 1),
// identity at zero hedge.
struct StageTwoPlayer {
  double strike = 0.0;
  double hedge_fraction = 0.0;
  double effort_level = 0.0;
  double required_effort = 0.0;
  double vesting_per_quarter = 0.25;

  void validate() const {
    require_nonneg(strike, "strike");
    require_in_range(hedge_fraction, 0.0, 1.0, "hedge_fraction");
    require_nonneg(effort_level, "effort_level");
    require_nonneg(required_effort, "required_effort");
    require_in_range(vesting_per_quarter, 0.0, 1.0, "vesting_per_quarter");
  }
};

struct PlayerSet {
  std::vector<StageTwoPlayer> employees;
  double lambda_max = 2.0;               // hedge-mapped monetization ceiling
  double max_exercise_per_quarter = 1.0; // firm-imposed cap, in (0, 1]

  void validate() const {
    if (employees.empty()) throw ConfigError("player set needs employees");
    for (const auto& p : employees) p.validate();
    require_in_range(lambda_max, 1.0, 2.0, "lambda_max");
    require_finite(max_exercise_per_quarter, "max_exercise_per_quarter");
    if (max_exercise_per_quarter <= 0.0 || max_exercise_per_quarter > 1.0) {
      throw std::domain_error("max_exercise_per_quarter out of range (0, 1]");
    }
  }
};

inline double hedge_to_lambda(double hedge_fraction, double lambda_max) {
  require_in_range(hedge_fraction, 0.0, 1.0, "hedge_fraction");
  require_in_range(lambda_max, 1.0, 2.0, "lambda_max");
  return 1.0 + hedge_fraction * (lambda_max - 1.0);
}

struct LedgerSet {
  std::vector<CostLedger> employee;  // one per employee
  CostLedger firm;

  void validate(int n_employees) const {
    if (employee.size() != static_cast<std::size_t>(n_employees)) {
      throw ConfigError("ledger count must match employee count");
    }
    for (const auto& led : employee) led.validate();
    firm.validate();
  }
};

namespace detail {

inline double issued_units(const QuarterState& state,
                           const ActionProfile& profile, std::size_t j) {
  return profile.actions[j].exercise_fraction * state.vested_fraction[j] *
         state.outstanding_ebi[j];
}

}  // namespace detail

// Dilution loss: the share of post-exercise equity issued by OTHER players,
// applied to this player's pre-exercise equity value. The firm's variant
// counts every exercising employee. Self-exercise never dilutes its owner.
inline double dilution_loss(const QuarterState& state,
                            const ActionProfile& profile, int for_player) {
  state.validate();
  profile.validate();
  const std::size_t n = state.vested_fraction.size();
  if (profile.actions.size() != n) {
    throw ConfigError("action profile size must match employee count");
  }
  if (for_player != kFirmPlayer &&
      (for_player < 0 || for_player >= static_cast<int>(n))) {
    throw ConfigError("unknown player id");
  }
  double total_issued = 0.0;
  double self_issued = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double units = detail::issued_units(state, profile, j);
    total_issued += units;
    if (static_cast<int>(j) == for_player) self_issued = units;
  }
  const double others_issued =
      for_player == kFirmPlayer ? total_issued : total_issued - self_issued;
  if (others_issued <= 0.0) return 0.0;
  const double post_shares = state.shares_outstanding + total_issued;
  double pre_equity = 0.0;
  if (for_player == kFirmPlayer) {
    pre_equity = state.shares_outstanding * state.share_price;
  } else {
    const auto p = static_cast<std::size_t>(for_player);
    pre_equity = state.vested_fraction[p] * state.outstanding_ebi[p] *
                 state.share_price;
  }
  return (others_issued / post_shares) * pre_equity;
}

// Stage-two value to employee p when `profile` is played: their ledger picks
// up the dilution loss, the realized intrinsic gain of their own exercise,
// and the carried-over value; hedging posture sets their lambda.
inline double quarter_employee_value(const QuarterState& state,
                                     const PlayerSet& players,
                                     const LedgerSet& ledgers,
                                     const ModifierSet& mods,
                                     const HorizonSpec& horizon,
                                     const ActionProfile& profile, int p) {
  state.validate();
  players.validate();
  const int n = state.n_employees();
  if (static_cast<int>(players.employees.size()) != n) {
    throw ConfigError("player set size must match employee count");
  }
  ledgers.validate(n);
  if (p < 0 || p >= n) throw ConfigError("unknown player id");

  const auto idx = static_cast<std::size_t>(p);
  CostLedger led = ledgers.employee[idx];
  led.lam_e += dilution_loss(state, profile, p);
  const double intrinsic =
      std::max(state.share_price - players.employees[idx].strike, 0.0);
  led.v_e += detail::issued_units(state, profile, idx) * intrinsic;
  led.u_e += state.carry_over;

  EffortPair effort;
  effort.e_a = profile.actions[idx].effort_level;
  effort.e_r = players.employees[idx].required_effort;

  ModifierSet view = mods;
  view.lam =
      hedge_to_lambda(profile.actions[idx].hedge_fraction, players.lambda_max);
  return stage2_value_employee(led, effort, view, view, horizon);
}

// The firm's value at the same profile: dilution from every exerciser, total
// delivered effort, its own ledger and modifiers.
inline double quarter_firm_value(const QuarterState& state,
                                 const PlayerSet& players,
                                 const LedgerSet& ledgers,
                                 const ModifierSet& mods,
                                 const HorizonSpec& horizon,
                                 const ActionProfile& profile) {
  state.validate();
  players.validate();
  const int n = state.n_employees();
  if (static_cast<int>(players.employees.size()) != n) {
    throw ConfigError("player set size must match employee count");
  }
  ledgers.validate(n);
  horizon.validate();

  CostLedger led = ledgers.firm;
  led.lam_c += dilution_loss(state, profile, kFirmPlayer);
  led.u_c += state.carry_over;
  EffortPair effort;
  for (const auto& act : profile.actions) effort.e_a += act.effort_level;
  for (const auto& p : players.employees) effort.e_r += p.required_effort;
  return stage2_value_company(led, effort, mods);
}

namespace detail {

inline ActionProfile profile_from_indices(const QuarterState& state,
                                          const PlayerSet& players,
                                          const std::vector<int>& indices,
                                          int grid_res) {
  ActionProfile profile;
  profile.actions.resize(indices.size());
  for (std::size_t j = 0; j < indices.size(); ++j) {
    profile.actions[j].exercise_fraction =
        players.max_exercise_per_quarter * indices[j] / (grid_res - 1);
    profile.actions[j].hedge_fraction = players.employees[j].hedge_fraction;
    profile.actions[j].effort_level = players.employees[j].effort_level;
  }
  return profile;
}

}  // namespace detail

// One quarter as a finite game: each employee's axis discretizes their
// exercise fraction up to the per-quarter cap; hedge and effort ride along
// from the player's posture. Payoffs are stage-two employee values.
inline NormalFormGame build_quarter_game(const QuarterState& state,
                                         const PlayerSet& players,
                                         const LedgerSet& ledgers,
                                         const ModifierSet& mods,
                                         const HorizonSpec& horizon,
                                         int action_grid_res,
                                         long cell_cap = 200000) {
  state.validate();
  players.validate();
  const int n = state.n_employees();
  if (n < 2) throw ConfigError("quarter game needs at least 2 employees");
  if (static_cast<int>(players.employees.size()) != n) {
    throw ConfigError("player set size must match employee count");
  }
  ledgers.validate(n);
  mods.validate();
  horizon.validate();
  if (action_grid_res < 2) throw ConfigError("action_grid_res must be >= 2");

  long cells = 1;
  for (int j = 0; j < n; ++j) {
    cells *= action_grid_res;
    if (cells > cell_cap) throw ConfigError("quarter game exceeds cell cap");
  }

  NormalFormGame game =
      NormalFormGame::zeros(std::vector<int>(n, action_grid_res));
  std::vector<int> indices(n, 0);
  do {
    const ActionProfile profile =
        detail::profile_from_indices(state, players, indices, action_grid_res);
    for (int p = 0; p < n; ++p) {
      game.set_payoff(p, indices,
                      quarter_employee_value(state, players, ledgers, mods,
                                             horizon, profile, p));
    }
  } while (game.next_profile(indices));
  return game;
}

enum class PolicyKind {
  kMyopicBestResponse,
  kAlwaysHold,
  kThresholdExercise
};

struct Policy {
  PolicyKind kind = PolicyKind::kAlwaysHold;
  double threshold = 0.0;  // intrinsic value per unit triggering exercise

  void validate() const { require_finite(threshold, "threshold"); }
};

struct QuarterRecord {
  QuarterState state;  // after the vesting advance, before actions
  std::vector<double> exercise_fraction;
  std::vector<double> employee_payoffs;
  double firm_payoff = 0.0;
  double realized_value = 0.0;  // sum of employee payoffs, feeds carry-over
  bool has_pure_nash = false;   // quarter game admits a pure equilibrium
};

struct Trajectory {
  std::vector<QuarterRecord> quarters;
  QuarterState final_state;
};

namespace detail {

// Myopic choice: each employee independently best-responds to everyone else
// holding, lowest grid index on ties. Simultaneous, so the outcome cannot
// depend on employee enumeration order.
inline std::vector<int> myopic_choice(const NormalFormGame& game) {
  std::vector<int> choice(static_cast<std::size_t>(game.n_players), 0);
  for (int p = 0; p < game.n_players; ++p) {
    std::vector<int> probe(static_cast<std::size_t>(game.n_players), 0);
    int best = 0;
    double best_pay = game.payoff(p, probe);
    for (int k = 1; k < game.action_counts[static_cast<std::size_t>(p)]; ++k) {
      probe[static_cast<std::size_t>(p)] = k;
      const double pay = game.payoff(p, probe);
      if (pay > best_pay) {
        best_pay = pay;
        best = k;
      }
    }
    choice[static_cast<std::size_t>(p)] = best;
  }
  return choice;
}

}  // namespace detail

// Quarter loop: vesting advances, the quarter game is built, the policy
// picks grid actions, payoffs are realized, then shares, price, and the
// carry-over coupling update. Deterministic for a fixed price-model seed.
inline Trajectory simulate_quarters(const QuarterState& initial,
                                    int n_quarters, const PlayerSet& players,
                                    const LedgerSet& ledgers,
                                    const ModifierSet& mods,
                                    const HorizonSpec& horizon,
                                    const PriceModel& price_model,
                                    const Policy& policy, double coupling,
                                    int action_grid_res = 2) {
  initial.validate();
  players.validate();
  price_model.validate();
  policy.validate();
  if (n_quarters < 1) throw ConfigError("n_quarters must be >= 1");
  require_finite(coupling, "coupling");
  if (coupling < 0.0 || coupling >= 1.0) {
    throw std::domain_error("coupling out of range [0, 1)");
  }
  const int n = initial.n_employees();

  Trajectory trajectory;
  QuarterState state = initial;
  for (int q = 0; q < n_quarters; ++q) {
    for (int j = 0; j < n; ++j) {
      const auto idx = static_cast<std::size_t>(j);
      state.vested_fraction[idx] =
          std::min(1.0, state.vested_fraction[idx] +
                            players.employees[idx].vesting_per_quarter);
    }

    const NormalFormGame game = build_quarter_game(
        state, players, ledgers, mods, horizon, action_grid_res);

    std::vector<int> choice(static_cast<std::size_t>(n), 0);
    switch (policy.kind) {
      case PolicyKind::kAlwaysHold:
        break;
      case PolicyKind::kMyopicBestResponse:
        choice = detail::myopic_choice(game);
        break;
      case PolicyKind::kThresholdExercise:
        for (int j = 0; j < n; ++j) {
          const auto idx = static_cast<std::size_t>(j);
          const double intrinsic =
              state.share_price - players.employees[idx].strike;
          if (intrinsic >= policy.threshold) {
            choice[idx] = action_grid_res - 1;
          }
        }
        break;
    }

    QuarterRecord record;
    record.state = state;
    record.has_pure_nash = !pure_nash(game).empty();
    const ActionProfile profile =
        detail::profile_from_indices(state, players, choice, action_grid_res);
    record.exercise_fraction.resize(static_cast<std::size_t>(n));
    record.employee_payoffs.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      const auto idx = static_cast<std::size_t>(j);
      record.exercise_fraction[idx] = profile.actions[idx].exercise_fraction;
      record.employee_payoffs[idx] = game.payoff(j, choice);
      record.realized_value += record.employee_payoffs[idx];
    }
    record.firm_payoff =
        quarter_firm_value(state, players, ledgers, mods, horizon, profile);

    double total_issued = 0.0;
    for (int j = 0; j < n; ++j) {
      const auto idx = static_cast<std::size_t>(j);
      const double units = detail::issued_units(state, profile, idx);
      state.outstanding_ebi[idx] =
          std::max(0.0, state.outstanding_ebi[idx] - units);
      total_issued += units;
    }
    state.shares_outstanding += total_issued;

    const double dilution_pct =
        100.0 * total_issued / state.shares_outstanding;
    double log_step =
        price_model.drift + price_model.dilution_sensitivity * dilution_pct;
    if (price_model.kind == PriceKind::kSeededLognormal) {
      Rng rng(split_seed(price_model.seed, static_cast<std::uint64_t>(q)));
      log_step += price_model.vol * rng.normal() -
                  0.5 * price_model.vol * price_model.vol;
    }
    state.share_price *= std::exp(log_step);

    state.carry_over = coupling * record.realized_value;
    state.quarter_index += 1;
    trajectory.quarters.push_back(std::move(record));
  }
  trajectory.final_state = state;
  return trajectory;
}

// Value of a joint-exercise agreement: exactly the coalition exercises at
// the per-quarter cap, outsiders hold, and members' stage-two values are
// summed. The empty coalition is worth zero by convention.
inline double exercise_coalition_value(const QuarterState& state,
                                       const PlayerSet& players,
                                       const LedgerSet& ledgers,
                                       const ModifierSet& mods,
                                       const HorizonSpec& horizon,
                                       const std::vector<int>& coalition) {
  state.validate();
  players.validate();
  const int n = state.n_employees();
  for (int member : coalition) {
    if (member < 0 || member >= n) throw ConfigError("unknown member id");
  }
  if (coalition.empty()) return 0.0;

  std::vector<int> indices(static_cast<std::size_t>(n), 0);
  for (int member : coalition) {
    auto& slot = indices[static_cast<std::size_t>(member)];
    if (slot != 0) throw ConfigError("duplicate member id");
    slot = 1;
  }
  const ActionProfile profile =
      detail::profile_from_indices(state, players, indices, 2);
  double total = 0.0;
  for (int member : coalition) {
    total += quarter_employee_value(state, players, ledgers, mods, horizon,
                                    profile, member);
  }
  return total;
}

// All 2^n joint-exercise values as a characteristic function ready for
// cooperative analysis; currency units match imputations one-for-one.
inline CharacteristicFunction characteristic_from_quarter(
    const QuarterState& state, const PlayerSet& players,
    const LedgerSet& ledgers, const ModifierSet& mods,
    const HorizonSpec& horizon) {
  state.validate();
  const int n = state.n_employees();
  if (n < 2 || n > 6) {
    throw ConfigError("characteristic function needs 2..6 employees");
  }
  CharacteristicFunction cf = CharacteristicFunction::zeros(n);
  for (CoalitionMask mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> members;
    for (int j = 0; j < n; ++j) {
      if ((mask >> j) & 1u) members.push_back(j);
    }
    cf.set_value(mask, exercise_coalition_value(state, players, ledgers, mods,
                                                horizon, members));
  }
  cf.validate();
  return cf;
}

}  // namespace ebilab

#endif  // EBILAB_STAGE_TWO_HPP
