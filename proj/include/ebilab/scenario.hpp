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
// Scenario files: a JSON key-value tree driving any subset of the four
// analysis blocks. Parsing collects every validation problem with a field
// path instead of stopping at the first, so a bad file is fixable in one
// round trip. docs/scenario.md documents the schema.

#ifndef EBILAB_SCENARIO_HPP
#define EBILAB_SCENARIO_HPP

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ebilab/coalition.hpp"
#include "ebilab/common.hpp"
#include "ebilab/payoff.hpp"
#include "ebilab/prodfn.hpp"
#include "ebilab/stage_one.hpp"
#include "ebilab/stage_two.hpp"

namespace ebilab {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kVersionString = "0.1.0";

struct StageOneBlock {
  CohortConfig cohort;  // cohort.seed is resolved at run time
  std::optional<std::uint64_t> cohort_seed;
  CostLedger ledger;
  EffortPair effort;
  EmployeeNegotiationParams employee;
  ShareholderParams shareholder;
  ModifierSet modifiers;
  std::optional<ModifierSet> employee_modifiers;  // defaults to modifiers
  HorizonSpec horizon;
};

struct StageTwoBlock {
  QuarterState initial_state;
  PlayerSet players;
  LedgerSet ledgers;
  ModifierSet modifiers;
  HorizonSpec horizon;
  PriceModel price_model;  // price_model.seed is resolved at run time
  std::optional<std::uint64_t> price_seed;
  Policy policy;
  int n_quarters = 4;
  double coupling = 0.25;
  int action_grid_res = 2;
};

struct CoalitionBlock {
  bool derive_from_stage2 = false;
  std::optional<CharacteristicFunction> explicit_cf;
  CoreOptions core;  // core.seed is resolved at run time
  std::optional<std::uint64_t> core_seed;
};

struct ProdfnBlock {
  AuditConfig audit;  // audit.seed is resolved at run time
  std::optional<std::uint64_t> audit_seed;
  std::vector<ProductionSpec> specs;
};

// One file drives all blocks; any block may be absent. The scenario seed is
// mandatory and feeds every block that does not pin its own.
struct Scenario {
  int schema_version = kSchemaVersion;
  std::string name;
  std::uint64_t seed = 0;
  std::optional<StageOneBlock> stage1;
  std::optional<StageTwoBlock> stage2;
  std::optional<CoalitionBlock> coalition;
  std::optional<ProdfnBlock> prodfn;
};

// Carries the complete list of problems; what() joins them for contexts
// that can only show one string.
class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(std::vector<std::string> errors)
      : std::runtime_error(join(errors)), errors_(std::move(errors)) {}

  const std::vector<std::string>& errors() const { return errors_; }

 private:
  static std::string join(const std::vector<std::string>& errors) {
    std::string all = "scenario invalid:";
    for (const auto& e : errors) {
      all += "\n  ";
      all += e;
    }
    return all;
  }
  std::vector<std::string> errors_;
};

namespace detail {

using Json = nlohmann::json;

struct ErrorSink {
  std::vector<std::string> items;

  void add(const std::string& path, const std::string& message) {
    items.push_back(path + ": " + message);
  }
};

inline std::string subpath(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

template <typename T>
void guard_validate(const T& value, const std::string& path,
                    ErrorSink& errors) {
  try {
    value.validate();
  } catch (const std::exception& e) {
    errors.add(path, e.what());
  }
}

inline void check_keys(const Json& node, const std::string& path,
                       std::initializer_list<const char*> allowed,
                       ErrorSink& errors) {
  for (auto it = node.begin(); it != node.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) errors.add(subpath(path, it.key()), "unknown field");
  }
}

inline const Json* child_object(const Json& node, const char* key,
                                const std::string& path, ErrorSink& errors) {
  if (!node.contains(key)) return nullptr;
  const Json& value = node.at(key);
  if (!value.is_object()) {
    errors.add(subpath(path, key), "expected an object");
    return nullptr;
  }
  return &value;
}

inline double get_num(const Json& node, const char* key,
                      const std::string& path, ErrorSink& errors,
                      double fallback) {
  if (!node.contains(key)) return fallback;
  const Json& value = node.at(key);
  if (!value.is_number()) {
    errors.add(subpath(path, key), "expected a number");
    return fallback;
  }
  return value.get<double>();
}

inline double need_num(const Json& node, const char* key,
                       const std::string& path, ErrorSink& errors,
                       double fallback) {
  if (!node.contains(key)) {
    errors.add(subpath(path, key), "missing required field");
    return fallback;
  }
  return get_num(node, key, path, errors, fallback);
}

inline int get_int(const Json& node, const char* key, const std::string& path,
                   ErrorSink& errors, int fallback) {
  if (!node.contains(key)) return fallback;
  const Json& value = node.at(key);
  if (!value.is_number_integer()) {
    errors.add(subpath(path, key), "expected an integer");
    return fallback;
  }
  return value.get<int>();
}

inline std::optional<std::uint64_t> get_seed(const Json& node, const char* key,
                                             const std::string& path,
                                             ErrorSink& errors) {
  if (!node.contains(key)) return std::nullopt;
  const Json& value = node.at(key);
  if (!value.is_number_integer() || (value.is_number_integer() &&
                                     !value.is_number_unsigned() &&
                                     value.get<std::int64_t>() < 0)) {
    errors.add(subpath(path, key), "expected a non-negative integer");
    return std::nullopt;
  }
  return value.get<std::uint64_t>();
}

inline bool get_bool(const Json& node, const char* key,
                     const std::string& path, ErrorSink& errors,
                     bool fallback) {
  if (!node.contains(key)) return fallback;
  const Json& value = node.at(key);
  if (!value.is_boolean()) {
    errors.add(subpath(path, key), "expected a boolean");
    return fallback;
  }
  return value.get<bool>();
}

inline std::string get_str(const Json& node, const char* key,
                           const std::string& path, ErrorSink& errors,
                           const std::string& fallback) {
  if (!node.contains(key)) return fallback;
  const Json& value = node.at(key);
  if (!value.is_string()) {
    errors.add(subpath(path, key), "expected a string");
    return fallback;
  }
  return value.get<std::string>();
}

inline std::vector<double> get_num_array(const Json& node, const char* key,
                                         const std::string& path,
                                         ErrorSink& errors, int required_size,
                                         std::vector<double> fallback) {
  if (!node.contains(key)) {
    if (required_size >= 0) {
      errors.add(subpath(path, key), "missing required field");
    }
    return fallback;
  }
  const Json& value = node.at(key);
  if (!value.is_array()) {
    errors.add(subpath(path, key), "expected an array of numbers");
    return fallback;
  }
  std::vector<double> out;
  out.reserve(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (!value.at(i).is_number()) {
      errors.add(subpath(path, key) + "[" + std::to_string(i) + "]",
                 "expected a number");
      return fallback;
    }
    out.push_back(value.at(i).get<double>());
  }
  if (required_size >= 0 &&
      out.size() != static_cast<std::size_t>(required_size)) {
    errors.add(subpath(path, key),
               "expected " + std::to_string(required_size) + " entries, got " +
                   std::to_string(out.size()));
    return fallback;
  }
  return out;
}

inline CostLedger parse_ledger(const Json& node, const std::string& path,
                               ErrorSink& errors) {
  check_keys(node, path,
             {"v_c", "v_e", "t_c", "t_e", "m_c", "m_e", "c_c", "c_e", "l_c",
              "l_e", "lam_c", "lam_e", "u_c", "u_e"},
             errors);
  CostLedger led;
  led.v_c = get_num(node, "v_c", path, errors, 0.0);
  led.v_e = get_num(node, "v_e", path, errors, 0.0);
  led.t_c = get_num(node, "t_c", path, errors, 0.0);
  led.t_e = get_num(node, "t_e", path, errors, 0.0);
  led.m_c = get_num(node, "m_c", path, errors, 0.0);
  led.m_e = get_num(node, "m_e", path, errors, 0.0);
  led.c_c = get_num(node, "c_c", path, errors, 0.0);
  led.c_e = get_num(node, "c_e", path, errors, 0.0);
  led.l_c = get_num(node, "l_c", path, errors, 0.0);
  led.l_e = get_num(node, "l_e", path, errors, 0.0);
  led.lam_c = get_num(node, "lam_c", path, errors, 0.0);
  led.lam_e = get_num(node, "lam_e", path, errors, 0.0);
  led.u_c = get_num(node, "u_c", path, errors, 0.0);
  led.u_e = get_num(node, "u_e", path, errors, 0.0);
  guard_validate(led, path, errors);
  return led;
}

inline ModifierSet parse_modifiers(const Json& node, const std::string& path,
                                   ErrorSink& errors) {
  check_keys(node, path, {"pi", "psi", "lam", "omega"}, errors);
  ModifierSet mods;
  mods.pi = get_num(node, "pi", path, errors, 1.0);
  mods.psi = get_num(node, "psi", path, errors, 1.0);
  mods.lam = get_num(node, "lam", path, errors, 1.0);
  mods.omega = get_num(node, "omega", path, errors, 1.0);
  guard_validate(mods, path, errors);
  return mods;
}

inline HorizonSpec parse_horizon(const Json& node, const std::string& path,
                                 ErrorSink& errors) {
  check_keys(node, path,
             {"t_c_limit", "t_e_limit", "h_limit", "n_steps", "gamma"},
             errors);
  HorizonSpec horizon;
  horizon.t_c_limit = get_num(node, "t_c_limit", path, errors, 1.0);
  horizon.t_e_limit = get_num(node, "t_e_limit", path, errors, 1.0);
  horizon.h_limit = get_num(node, "h_limit", path, errors, 1.0);
  horizon.n_steps = get_int(node, "n_steps", path, errors, 32);
  horizon.gamma = get_int(node, "gamma", path, errors, 1);
  guard_validate(horizon, path, errors);
  return horizon;
}

inline EffortPair parse_effort(const Json& node, const std::string& path,
                               ErrorSink& errors) {
  check_keys(node, path, {"e_a", "e_r"}, errors);
  EffortPair effort;
  effort.e_a = get_num(node, "e_a", path, errors, 0.0);
  effort.e_r = get_num(node, "e_r", path, errors, 0.0);
  guard_validate(effort, path, errors);
  return effort;
}

inline StageOneBlock parse_stage_one(const Json& node, const std::string& path,
                                     ErrorSink& errors) {
  check_keys(node, path,
             {"cohort_size", "seed", "grid_res", "max_rounds", "perturb_v_e",
              "perturb_u_e", "perturb_t_e", "ledger", "effort", "employee",
              "shareholder", "modifiers", "employee_modifiers", "horizon"},
             errors);
  StageOneBlock block;
  block.cohort.n_employees = get_int(node, "cohort_size", path, errors, 1);
  block.cohort.grid_res = get_int(node, "grid_res", path, errors, 2);
  block.cohort.max_rounds = get_int(node, "max_rounds", path, errors, 8);
  block.cohort.perturb_v_e = get_num(node, "perturb_v_e", path, errors, 0.0);
  block.cohort.perturb_u_e = get_num(node, "perturb_u_e", path, errors, 0.0);
  block.cohort.perturb_t_e = get_num(node, "perturb_t_e", path, errors, 0.0);
  block.cohort_seed = get_seed(node, "seed", path, errors);
  guard_validate(block.cohort, path, errors);

  if (const Json* sub = child_object(node, "ledger", path, errors)) {
    block.ledger = parse_ledger(*sub, subpath(path, "ledger"), errors);
  }
  if (const Json* sub = child_object(node, "effort", path, errors)) {
    block.effort = parse_effort(*sub, subpath(path, "effort"), errors);
  }
  if (const Json* sub = child_object(node, "employee", path, errors)) {
    const std::string sub_path = subpath(path, "employee");
    check_keys(*sub, sub_path, {"s", "k", "i_oe", "c_a", "f_e", "b"}, errors);
    block.employee.s = get_num(*sub, "s", sub_path, errors, 0.0);
    block.employee.k = get_num(*sub, "k", sub_path, errors, 0.0);
    block.employee.i_oe = get_num(*sub, "i_oe", sub_path, errors, 0.0);
    block.employee.c_a = get_num(*sub, "c_a", sub_path, errors, 0.0);
    block.employee.f_e = get_num(*sub, "f_e", sub_path, errors, 0.0);
    block.employee.b = get_num(*sub, "b", sub_path, errors, 0.0);
    guard_validate(block.employee, sub_path, errors);
  }
  if (const Json* sub = child_object(node, "shareholder", path, errors)) {
    const std::string sub_path = subpath(path, "shareholder");
    check_keys(*sub, sub_path,
               {"s_p", "mgmt_own", "inst_own", "gov_score", "phi", "f_c",
                "q_weights"},
               errors);
    block.shareholder.s_p = get_num(*sub, "s_p", sub_path, errors, 0.0);
    block.shareholder.mgmt_own =
        get_num(*sub, "mgmt_own", sub_path, errors, 0.0);
    block.shareholder.inst_own =
        get_num(*sub, "inst_own", sub_path, errors, 0.0);
    block.shareholder.gov_score =
        get_num(*sub, "gov_score", sub_path, errors, 0.0);
    block.shareholder.phi = get_num(*sub, "phi", sub_path, errors, 0.0);
    block.shareholder.f_c = get_num(*sub, "f_c", sub_path, errors, 0.0);
    block.shareholder.q_weights =
        get_num_array(*sub, "q_weights", sub_path, errors, -1,
                      std::vector<double>(kStrategyComponents, 0.0));
    if (block.shareholder.q_weights.size() !=
        static_cast<std::size_t>(kStrategyComponents)) {
      errors.add(subpath(sub_path, "q_weights"),
                 "expected " + std::to_string(kStrategyComponents) +
                     " entries");
      block.shareholder.q_weights.assign(kStrategyComponents, 0.0);
    }
    guard_validate(block.shareholder, sub_path, errors);
  }
  if (const Json* sub = child_object(node, "modifiers", path, errors)) {
    block.modifiers =
        parse_modifiers(*sub, subpath(path, "modifiers"), errors);
  }
  if (const Json* sub =
          child_object(node, "employee_modifiers", path, errors)) {
    block.employee_modifiers =
        parse_modifiers(*sub, subpath(path, "employee_modifiers"), errors);
  }
  if (const Json* sub = child_object(node, "horizon", path, errors)) {
    block.horizon = parse_horizon(*sub, subpath(path, "horizon"), errors);
  }
  return block;
}

inline StageTwoBlock parse_stage_two(const Json& node, const std::string& path,
                                     ErrorSink& errors) {
  check_keys(node, path,
             {"n_quarters", "coupling", "action_grid_res", "seed", "policy",
              "price_model", "initial_state", "players", "ledgers",
              "modifiers", "horizon"},
             errors);
  StageTwoBlock block;
  block.n_quarters = get_int(node, "n_quarters", path, errors, 4);
  block.coupling = get_num(node, "coupling", path, errors, 0.25);
  block.action_grid_res = get_int(node, "action_grid_res", path, errors, 2);
  block.price_seed = get_seed(node, "seed", path, errors);
  if (block.n_quarters < 1) {
    errors.add(subpath(path, "n_quarters"), "must be >= 1");
    block.n_quarters = 1;
  }
  if (!(block.coupling >= 0.0 && block.coupling < 1.0)) {
    errors.add(subpath(path, "coupling"), "out of range [0, 1)");
    block.coupling = 0.0;
  }
  if (block.action_grid_res < 2) {
    errors.add(subpath(path, "action_grid_res"), "must be >= 2");
    block.action_grid_res = 2;
  }

  if (const Json* sub = child_object(node, "policy", path, errors)) {
    const std::string sub_path = subpath(path, "policy");
    check_keys(*sub, sub_path, {"kind", "threshold"}, errors);
    const std::string kind =
        get_str(*sub, "kind", sub_path, errors, "always-hold");
    if (kind == "myopic-best-response") {
      block.policy.kind = PolicyKind::kMyopicBestResponse;
    } else if (kind == "always-hold") {
      block.policy.kind = PolicyKind::kAlwaysHold;
    } else if (kind == "threshold-exercise") {
      block.policy.kind = PolicyKind::kThresholdExercise;
    } else {
      errors.add(subpath(sub_path, "kind"),
                 "expected one of myopic-best-response, always-hold, "
                 "threshold-exercise");
    }
    block.policy.threshold = get_num(*sub, "threshold", sub_path, errors, 0.0);
    guard_validate(block.policy, sub_path, errors);
  }
  if (const Json* sub = child_object(node, "price_model", path, errors)) {
    const std::string sub_path = subpath(path, "price_model");
    check_keys(*sub, sub_path, {"kind", "drift", "vol", "dilution_sensitivity"},
               errors);
    const std::string kind =
        get_str(*sub, "kind", sub_path, errors, "deterministic-drift");
    if (kind == "deterministic-drift") {
      block.price_model.kind = PriceKind::kDeterministicDrift;
    } else if (kind == "seeded-lognormal") {
      block.price_model.kind = PriceKind::kSeededLognormal;
    } else {
      errors.add(subpath(sub_path, "kind"),
                 "expected one of deterministic-drift, seeded-lognormal");
    }
    block.price_model.drift = get_num(*sub, "drift", sub_path, errors, 0.0);
    block.price_model.vol = get_num(*sub, "vol", sub_path, errors, 0.0);
    block.price_model.dilution_sensitivity =
        get_num(*sub, "dilution_sensitivity", sub_path, errors, 0.0);
    guard_validate(block.price_model, sub_path, errors);
  }
  if (const Json* sub = child_object(node, "initial_state", path, errors)) {
    const std::string sub_path = subpath(path, "initial_state");
    check_keys(*sub, sub_path,
               {"quarter_index", "share_price", "shares_outstanding",
                "vested_fraction", "outstanding_ebi", "carry_over"},
               errors);
    block.initial_state.quarter_index =
        get_int(*sub, "quarter_index", sub_path, errors, 0);
    block.initial_state.share_price =
        need_num(*sub, "share_price", sub_path, errors, 1.0);
    block.initial_state.shares_outstanding =
        need_num(*sub, "shares_outstanding", sub_path, errors, 1.0);
    block.initial_state.vested_fraction =
        get_num_array(*sub, "vested_fraction", sub_path, errors, -1, {});
    block.initial_state.outstanding_ebi =
        get_num_array(*sub, "outstanding_ebi", sub_path, errors, -1, {});
    block.initial_state.carry_over =
        get_num(*sub, "carry_over", sub_path, errors, 0.0);
    guard_validate(block.initial_state, sub_path, errors);
  }
  if (const Json* sub = child_object(node, "players", path, errors)) {
    const std::string sub_path = subpath(path, "players");
    check_keys(*sub, sub_path,
               {"lambda_max", "max_exercise_per_quarter", "employees"},
               errors);
    block.players.lambda_max =
        get_num(*sub, "lambda_max", sub_path, errors, 2.0);
    block.players.max_exercise_per_quarter =
        get_num(*sub, "max_exercise_per_quarter", sub_path, errors, 1.0);
    if (sub->contains("employees") && sub->at("employees").is_array()) {
      const Json& list = sub->at("employees");
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string member_path =
            subpath(sub_path, "employees[" + std::to_string(i) + "]");
        if (!list.at(i).is_object()) {
          errors.add(member_path, "expected an object");
          continue;
        }
        const Json& member = list.at(i);
        check_keys(member, member_path,
                   {"strike", "hedge_fraction", "effort_level",
                    "required_effort", "vesting_per_quarter"},
                   errors);
        StageTwoPlayer player;
        player.strike = get_num(member, "strike", member_path, errors, 0.0);
        player.hedge_fraction =
            get_num(member, "hedge_fraction", member_path, errors, 0.0);
        player.effort_level =
            get_num(member, "effort_level", member_path, errors, 0.0);
        player.required_effort =
            get_num(member, "required_effort", member_path, errors, 0.0);
        player.vesting_per_quarter =
            get_num(member, "vesting_per_quarter", member_path, errors, 0.25);
        guard_validate(player, member_path, errors);
        block.players.employees.push_back(player);
      }
    } else {
      errors.add(subpath(sub_path, "employees"),
                 "missing required employee array");
    }
    guard_validate(block.players, sub_path, errors);
  }
  if (const Json* sub = child_object(node, "ledgers", path, errors)) {
    const std::string sub_path = subpath(path, "ledgers");
    check_keys(*sub, sub_path, {"employees", "firm"}, errors);
    if (sub->contains("employees") && sub->at("employees").is_array()) {
      const Json& list = sub->at("employees");
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string member_path =
            subpath(sub_path, "employees[" + std::to_string(i) + "]");
        if (!list.at(i).is_object()) {
          errors.add(member_path, "expected an object");
          continue;
        }
        block.ledgers.employee.push_back(
            parse_ledger(list.at(i), member_path, errors));
      }
    } else {
      errors.add(subpath(sub_path, "employees"),
                 "missing required ledger array");
    }
    if (const Json* firm = child_object(*sub, "firm", sub_path, errors)) {
      block.ledgers.firm =
          parse_ledger(*firm, subpath(sub_path, "firm"), errors);
    }
  }
  if (const Json* sub = child_object(node, "modifiers", path, errors)) {
    block.modifiers =
        parse_modifiers(*sub, subpath(path, "modifiers"), errors);
  }
  if (const Json* sub = child_object(node, "horizon", path, errors)) {
    block.horizon = parse_horizon(*sub, subpath(path, "horizon"), errors);
  }

  const std::size_t n_state = block.initial_state.vested_fraction.size();
  if (block.players.employees.size() != n_state) {
    errors.add(subpath(path, "players.employees"),
               "count must match initial_state.vested_fraction");
  }
  try {
    block.ledgers.validate(static_cast<int>(n_state));
  } catch (const std::exception& e) {
    errors.add(subpath(path, "ledgers"), e.what());
  }
  return block;
}

inline CoalitionBlock parse_coalition(const Json& node,
                                      const std::string& path,
                                      ErrorSink& errors) {
  check_keys(node, path,
             {"source", "n_players", "values", "sample_count", "seed"},
             errors);
  CoalitionBlock block;
  const std::string source =
      get_str(node, "source", path, errors, "explicit");
  if (source == "derive-from-stage2") {
    block.derive_from_stage2 = true;
    if (node.contains("values") || node.contains("n_players")) {
      errors.add(subpath(path, "values"),
                 "only applies when source is explicit");
    }
  } else if (source == "explicit") {
    const int n = get_int(node, "n_players", path, errors, 0);
    if (n < 2 || n > 6) {
      errors.add(subpath(path, "n_players"), "expected 2..6");
    } else {
      const int cells = 1 << n;
      const std::vector<double> values = get_num_array(
          node, "values", path, errors, cells, std::vector<double>(
                                                   static_cast<std::size_t>(cells), 0.0));
      CharacteristicFunction cf = CharacteristicFunction::zeros(n);
      for (int mask = 0; mask < cells; ++mask) {
        cf.v[static_cast<std::size_t>(mask)] =
            values[static_cast<std::size_t>(mask)];
      }
      guard_validate(cf, subpath(path, "values"), errors);
      block.explicit_cf = std::move(cf);
    }
  } else {
    errors.add(subpath(path, "source"),
               "expected one of explicit, derive-from-stage2");
  }
  block.core.sample_count =
      get_int(node, "sample_count", path, errors, block.core.sample_count);
  if (block.core.sample_count < 1) {
    errors.add(subpath(path, "sample_count"), "must be >= 1");
    block.core.sample_count = 1;
  }
  block.core_seed = get_seed(node, "seed", path, errors);
  return block;
}

inline ProdfnBlock parse_prodfn(const Json& node, const std::string& path,
                                ErrorSink& errors) {
  check_keys(node, path, {"audit", "specs"}, errors);
  ProdfnBlock block;
  if (const Json* sub = child_object(node, "audit", path, errors)) {
    const std::string sub_path = subpath(path, "audit");
    check_keys(*sub, sub_path, {"n_samples", "tol", "fd_step", "seed"},
               errors);
    block.audit.n_samples =
        get_int(*sub, "n_samples", sub_path, errors, block.audit.n_samples);
    block.audit.tol = get_num(*sub, "tol", sub_path, errors, block.audit.tol);
    block.audit.fd_step =
        get_num(*sub, "fd_step", sub_path, errors, block.audit.fd_step);
    block.audit_seed = get_seed(*sub, "seed", sub_path, errors);
    guard_validate(block.audit, sub_path, errors);
  }
  if (!node.contains("specs") || !node.at("specs").is_array() ||
      node.at("specs").empty()) {
    errors.add(subpath(path, "specs"),
               "expected a non-empty array of production specs");
    return block;
  }
  const Json& list = node.at("specs");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string spec_path =
        subpath(path, "specs[" + std::to_string(i) + "]");
    if (!list.at(i).is_object()) {
      errors.add(spec_path, "expected an object");
      continue;
    }
    const Json& node_spec = list.at(i);
    check_keys(node_spec, spec_path,
               {"family", "scale", "exponents", "incentive_coefficient",
                "ces_rho", "n_factors", "domain_box", "vesting_threshold"},
               errors);
    ProductionSpec spec;
    const std::string family = get_str(node_spec, "family", spec_path, errors,
                                       "cobb-douglas-incentive");
    if (family == "cobb-douglas-incentive") {
      spec.family = ProductionFamily::kCobbDouglasIncentive;
    } else if (family == "ces-incentive") {
      spec.family = ProductionFamily::kCesIncentive;
    } else if (family == "piecewise-vesting") {
      spec.family = ProductionFamily::kPiecewiseVesting;
    } else {
      errors.add(subpath(spec_path, "family"),
                 "expected one of cobb-douglas-incentive, ces-incentive, "
                 "piecewise-vesting");
    }
    spec.scale = get_num(node_spec, "scale", spec_path, errors, 1.0);
    spec.incentive_coefficient =
        get_num(node_spec, "incentive_coefficient", spec_path, errors, 1.0);
    spec.ces_rho = get_num(node_spec, "ces_rho", spec_path, errors, 0.5);
    spec.n_factors = get_int(node_spec, "n_factors", spec_path, errors, 2);
    spec.exponents =
        get_num_array(node_spec, "exponents", spec_path, errors, -1, {});
    if (node_spec.contains("vesting_threshold")) {
      spec.vesting_threshold =
          get_num(node_spec, "vesting_threshold", spec_path, errors, 0.0);
    }
    if (node_spec.contains("domain_box") &&
        node_spec.at("domain_box").is_array()) {
      const Json& box = node_spec.at("domain_box");
      for (std::size_t d = 0; d < box.size(); ++d) {
        const std::string range_path =
            subpath(spec_path, "domain_box[" + std::to_string(d) + "]");
        if (!box.at(d).is_array() || box.at(d).size() != 2 ||
            !box.at(d).at(0).is_number() || !box.at(d).at(1).is_number()) {
          errors.add(range_path, "expected a [lo, hi] pair");
          continue;
        }
        spec.domain_box.push_back(
            {box.at(d).at(0).get<double>(), box.at(d).at(1).get<double>()});
      }
    } else {
      errors.add(subpath(spec_path, "domain_box"),
                 "missing required array of [lo, hi] pairs");
    }
    guard_validate(spec, spec_path, errors);
    block.specs.push_back(std::move(spec));
  }
  return block;
}

}  // namespace detail

// Parses scenario text, collecting every problem. `origin` names the source
// in error messages (a path, or "<inline>" for embedded text).
inline Scenario parse_scenario_text(const std::string& text,
                                    const std::string& origin) {
  detail::Json root;
  try {
    root = detail::Json::parse(text);
  } catch (const detail::Json::parse_error& e) {
    throw ScenarioError({origin + ": " + e.what()});
  }
  detail::ErrorSink errors;
  if (!root.is_object()) {
    throw ScenarioError({origin + ": top level must be an object"});
  }
  detail::check_keys(
      root, "",
      {"schema_version", "name", "seed", "stage1", "stage2", "coalition",
       "prodfn"},
      errors);

  Scenario scenario;
  scenario.schema_version =
      detail::get_int(root, "schema_version", "", errors, kSchemaVersion);
  if (scenario.schema_version != kSchemaVersion) {
    errors.add("schema_version",
               "unsupported version " + std::to_string(scenario.schema_version) +
                   " (expected " + std::to_string(kSchemaVersion) + ")");
  }
  scenario.name = detail::get_str(root, "name", "", errors, "");
  if (scenario.name.empty()) {
    errors.add("name", "missing required non-empty string");
  }
  if (const auto seed = detail::get_seed(root, "seed", "", errors)) {
    scenario.seed = *seed;
  } else if (!root.contains("seed")) {
    errors.add("seed", "missing required field");
  }

  if (const detail::Json* sub =
          detail::child_object(root, "stage1", "", errors)) {
    scenario.stage1 = detail::parse_stage_one(*sub, "stage1", errors);
  }
  if (const detail::Json* sub =
          detail::child_object(root, "stage2", "", errors)) {
    scenario.stage2 = detail::parse_stage_two(*sub, "stage2", errors);
  }
  if (const detail::Json* sub =
          detail::child_object(root, "coalition", "", errors)) {
    scenario.coalition = detail::parse_coalition(*sub, "coalition", errors);
  }
  if (const detail::Json* sub =
          detail::child_object(root, "prodfn", "", errors)) {
    scenario.prodfn = detail::parse_prodfn(*sub, "prodfn", errors);
  }

  if (scenario.coalition && scenario.coalition->derive_from_stage2) {
    if (!scenario.stage2) {
      errors.add("coalition.source",
                 "derive-from-stage2 needs a stage2 block");
    } else {
      const std::size_t n =
          scenario.stage2->initial_state.vested_fraction.size();
      if (n < 2 || n > 6) {
        errors.add("coalition.source",
                   "derive-from-stage2 needs 2..6 stage2 employees");
      }
    }
  }

  if (!errors.items.empty()) throw ScenarioError(std::move(errors.items));
  return scenario;
}

inline Scenario parse_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError({path + ": cannot open file"});
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_text(buffer.str(), path);
}

namespace detail {

inline Json ledger_json(const CostLedger& led) {
  Json j = Json::object();
  j["v_c"] = led.v_c;
  j["v_e"] = led.v_e;
  j["t_c"] = led.t_c;
  j["t_e"] = led.t_e;
  j["m_c"] = led.m_c;
  j["m_e"] = led.m_e;
  j["c_c"] = led.c_c;
  j["c_e"] = led.c_e;
  j["l_c"] = led.l_c;
  j["l_e"] = led.l_e;
  j["lam_c"] = led.lam_c;
  j["lam_e"] = led.lam_e;
  j["u_c"] = led.u_c;
  j["u_e"] = led.u_e;
  return j;
}

inline Json modifiers_json(const ModifierSet& mods) {
  Json j = Json::object();
  j["pi"] = mods.pi;
  j["psi"] = mods.psi;
  j["lam"] = mods.lam;
  j["omega"] = mods.omega;
  return j;
}

inline Json horizon_json(const HorizonSpec& horizon) {
  Json j = Json::object();
  j["t_c_limit"] = horizon.t_c_limit;
  j["t_e_limit"] = horizon.t_e_limit;
  j["h_limit"] = horizon.h_limit;
  j["n_steps"] = horizon.n_steps;
  j["gamma"] = horizon.gamma;
  return j;
}

}  // namespace detail

// Canonical serialization: every field written explicitly, keys sorted by
// nlohmann's object ordering, numbers in shortest-round-trip form. Feeding
// the output back through parse_scenario_text reproduces the scenario.
inline std::string serialize_scenario(const Scenario& scenario) {
  using detail::Json;
  Json root = Json::object();
  root["schema_version"] = scenario.schema_version;
  root["name"] = scenario.name;
  root["seed"] = scenario.seed;

  if (scenario.stage1) {
    const StageOneBlock& block = *scenario.stage1;
    Json j = Json::object();
    j["cohort_size"] = block.cohort.n_employees;
    if (block.cohort_seed) j["seed"] = *block.cohort_seed;
    j["grid_res"] = block.cohort.grid_res;
    j["max_rounds"] = block.cohort.max_rounds;
    j["perturb_v_e"] = block.cohort.perturb_v_e;
    j["perturb_u_e"] = block.cohort.perturb_u_e;
    j["perturb_t_e"] = block.cohort.perturb_t_e;
    j["ledger"] = detail::ledger_json(block.ledger);
    Json effort = Json::object();
    effort["e_a"] = block.effort.e_a;
    effort["e_r"] = block.effort.e_r;
    j["effort"] = effort;
    Json employee = Json::object();
    employee["s"] = block.employee.s;
    employee["k"] = block.employee.k;
    employee["i_oe"] = block.employee.i_oe;
    employee["c_a"] = block.employee.c_a;
    employee["f_e"] = block.employee.f_e;
    employee["b"] = block.employee.b;
    j["employee"] = employee;
    Json shareholder = Json::object();
    shareholder["s_p"] = block.shareholder.s_p;
    shareholder["mgmt_own"] = block.shareholder.mgmt_own;
    shareholder["inst_own"] = block.shareholder.inst_own;
    shareholder["gov_score"] = block.shareholder.gov_score;
    shareholder["phi"] = block.shareholder.phi;
    shareholder["f_c"] = block.shareholder.f_c;
    shareholder["q_weights"] = block.shareholder.q_weights;
    j["shareholder"] = shareholder;
    j["modifiers"] = detail::modifiers_json(block.modifiers);
    if (block.employee_modifiers) {
      j["employee_modifiers"] = detail::modifiers_json(*block.employee_modifiers);
    }
    j["horizon"] = detail::horizon_json(block.horizon);
    root["stage1"] = j;
  }
  if (scenario.stage2) {
    const StageTwoBlock& block = *scenario.stage2;
    Json j = Json::object();
    j["n_quarters"] = block.n_quarters;
    j["coupling"] = block.coupling;
    j["action_grid_res"] = block.action_grid_res;
    if (block.price_seed) j["seed"] = *block.price_seed;
    Json policy = Json::object();
    switch (block.policy.kind) {
      case PolicyKind::kMyopicBestResponse:
        policy["kind"] = "myopic-best-response";
        break;
      case PolicyKind::kAlwaysHold:
        policy["kind"] = "always-hold";
        break;
      case PolicyKind::kThresholdExercise:
        policy["kind"] = "threshold-exercise";
        break;
    }
    policy["threshold"] = block.policy.threshold;
    j["policy"] = policy;
    Json price = Json::object();
    price["kind"] = block.price_model.kind == PriceKind::kDeterministicDrift
                        ? "deterministic-drift"
                        : "seeded-lognormal";
    price["drift"] = block.price_model.drift;
    price["vol"] = block.price_model.vol;
    price["dilution_sensitivity"] = block.price_model.dilution_sensitivity;
    j["price_model"] = price;
    Json state = Json::object();
    state["quarter_index"] = block.initial_state.quarter_index;
    state["share_price"] = block.initial_state.share_price;
    state["shares_outstanding"] = block.initial_state.shares_outstanding;
    state["vested_fraction"] = block.initial_state.vested_fraction;
    state["outstanding_ebi"] = block.initial_state.outstanding_ebi;
    state["carry_over"] = block.initial_state.carry_over;
    j["initial_state"] = state;
    Json players = Json::object();
    players["lambda_max"] = block.players.lambda_max;
    players["max_exercise_per_quarter"] =
        block.players.max_exercise_per_quarter;
    Json employees = Json::array();
    for (const auto& p : block.players.employees) {
      Json member = Json::object();
      member["strike"] = p.strike;
      member["hedge_fraction"] = p.hedge_fraction;
      member["effort_level"] = p.effort_level;
      member["required_effort"] = p.required_effort;
      member["vesting_per_quarter"] = p.vesting_per_quarter;
      employees.push_back(member);
    }
    players["employees"] = employees;
    j["players"] = players;
    Json ledgers = Json::object();
    Json employee_ledgers = Json::array();
    for (const auto& led : block.ledgers.employee) {
      employee_ledgers.push_back(detail::ledger_json(led));
    }
    ledgers["employees"] = employee_ledgers;
    ledgers["firm"] = detail::ledger_json(block.ledgers.firm);
    j["ledgers"] = ledgers;
    j["modifiers"] = detail::modifiers_json(block.modifiers);
    j["horizon"] = detail::horizon_json(block.horizon);
    root["stage2"] = j;
  }
  if (scenario.coalition) {
    const CoalitionBlock& block = *scenario.coalition;
    Json j = Json::object();
    if (block.derive_from_stage2) {
      j["source"] = "derive-from-stage2";
    } else {
      j["source"] = "explicit";
      if (block.explicit_cf) {
        j["n_players"] = block.explicit_cf->n;
        j["values"] = block.explicit_cf->v;
      }
    }
    j["sample_count"] = block.core.sample_count;
    if (block.core_seed) j["seed"] = *block.core_seed;
    root["coalition"] = j;
  }
  if (scenario.prodfn) {
    const ProdfnBlock& block = *scenario.prodfn;
    Json j = Json::object();
    Json audit = Json::object();
    audit["n_samples"] = block.audit.n_samples;
    audit["tol"] = block.audit.tol;
    audit["fd_step"] = block.audit.fd_step;
    if (block.audit_seed) audit["seed"] = *block.audit_seed;
    j["audit"] = audit;
    Json specs = Json::array();
    for (const auto& spec : block.specs) {
      Json s = Json::object();
      switch (spec.family) {
        case ProductionFamily::kCobbDouglasIncentive:
          s["family"] = "cobb-douglas-incentive";
          break;
        case ProductionFamily::kCesIncentive:
          s["family"] = "ces-incentive";
          break;
        case ProductionFamily::kPiecewiseVesting:
          s["family"] = "piecewise-vesting";
          break;
      }
      s["scale"] = spec.scale;
      s["exponents"] = spec.exponents;
      s["incentive_coefficient"] = spec.incentive_coefficient;
      if (spec.family == ProductionFamily::kCesIncentive) {
        s["ces_rho"] = spec.ces_rho;
      }
      s["n_factors"] = spec.n_factors;
      Json box = Json::array();
      for (const auto& range : spec.domain_box) {
        box.push_back(Json::array({range.lo, range.hi}));
      }
      s["domain_box"] = box;
      if (spec.vesting_threshold) {
        s["vesting_threshold"] = *spec.vesting_threshold;
      }
      specs.push_back(s);
    }
    j["specs"] = specs;
    root["prodfn"] = j;
  }
  return root.dump(2) + "\n";
}

inline bool scenario_equal(const Scenario& a, const Scenario& b) {
  return serialize_scenario(a) == serialize_scenario(b);
}

}  // namespace ebilab

#endif  // EBILAB_SCENARIO_HPP
