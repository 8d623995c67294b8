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
// Core value formulas of the two-stage incentive game: the per-pair cost
// ledger, the scalar modifier set, the stage-one and stage-two game values
// for firm and employee, and the firm's objective vector.

#ifndef EBILAB_PAYOFF_HPP
#define EBILAB_PAYOFF_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "ebilab/common.hpp"
#include "ebilab/quadrature.hpp"

namespace ebilab {

// All currency symbols for one firm-employee pair. A ledger is never shared
// between employees: two holders of identical grants may value them
// differently (v_e, u_e are subjective).
struct CostLedger {
  double v_c = 0.0;    // grant value to the firm
  double v_e = 0.0;    // grant value to the employee
  double t_c = 0.0;    // transaction costs, firm side
  double t_e = 0.0;    // transaction costs, employee side
  double m_c = 0.0;    // monitoring costs, firm side
  double m_e = 0.0;    // monitoring costs, employee side
  double c_c = 0.0;    // compliance costs, firm side
  double c_e = 0.0;    // compliance costs, employee side
  double l_c = 0.0;    // tax-related losses, firm side
  double l_e = 0.0;    // tax-related losses, employee side
  double lam_c = 0.0;  // dilution losses, firm side
  double lam_e = 0.0;  // dilution losses, employee side
  double u_c = 0.0;    // utility to the firm
  double u_e = 0.0;    // utility to the employee

  void validate() const {
    require_nonneg(t_c, "t_c");
    require_nonneg(t_e, "t_e");
    require_nonneg(m_c, "m_c");
    require_nonneg(m_e, "m_e");
    require_nonneg(c_c, "c_c");
    require_nonneg(c_e, "c_e");
    require_nonneg(l_c, "l_c");
    require_nonneg(l_e, "l_e");
    require_nonneg(lam_c, "lam_c");
    require_nonneg(lam_e, "lam_e");
    require_finite(v_c, "v_c");
    require_finite(v_e, "v_e");
    require_finite(u_c, "u_c");
    require_finite(u_e, "u_e");
  }
};

// The four scalar exponent modifiers. Each scenario carries two variants
// (firm view and employee view); lam > 1 models hedging/monetization raising
// the game's value.
struct ModifierSet {
  double pi = 1.0;     // labor substitutability
  double psi = 1.0;    // effort deviation
  double lam = 1.0;    // monetization / hedging propensity, in [0, 2]
  double omega = 1.0;  // employee's proportional share, in (0, 1]

  void validate() const {
    require_nonneg(pi, "pi");
    require_nonneg(psi, "psi");
    require_in_range(lam, 0.0, 2.0, "lam");
    require_finite(omega, "omega");
    if (omega <= 0.0 || omega > 1.0) {
      throw std::domain_error("omega out of range (0, 1]");
    }
  }
};

// e_a < e_r is legal: under-delivery of effort is part of the model.
struct EffortPair {
  double e_a = 0.0;  // actual effort
  double e_r = 0.0;  // minimum required effort

  void validate() const {
    require_nonneg(e_a, "e_a");
    require_nonneg(e_r, "e_r");
  }
};

struct HorizonSpec {
  double t_c_limit = 1.0;  // upper limit of the firm-side time integrals
  double t_e_limit = 1.0;  // upper limit of the employee-side time integrals
  double h_limit = 1.0;    // horizon of the stage-two double integrals
  int n_steps = 32;        // quadrature resolution
  int gamma = 1;           // number of employees in the program

  void validate() const {
    require_finite(t_c_limit, "t_c_limit");
    require_finite(t_e_limit, "t_e_limit");
    require_finite(h_limit, "h_limit");
    if (t_c_limit <= 0.0 || t_e_limit <= 0.0 || h_limit <= 0.0) {
      throw std::domain_error("horizon limits must be > 0");
    }
    if (n_steps < 2) throw ConfigError("n_steps must be >= 2");
    if (gamma < 1) throw ConfigError("gamma must be >= 1");
  }
};

// sgn(base)·|base|^exp. Powers of negative brackets keep their loss sign
// instead of going complex; continuous at 0. exp == 1 returns base exactly.
inline double signed_pow(double base, double exp) {
  require_finite(base, "signed_pow base");
  require_finite(exp, "signed_pow exponent");
  if (exp < 0.0) throw std::domain_error("signed_pow exponent must be >= 0");
  if (exp == 1.0) return base;
  if (base == 0.0) return 0.0;
  const double mag = std::pow(std::fabs(base), exp);
  return base < 0.0 ? -mag : mag;
}

// Net brackets of the value formulas. Kept as named functions so objective
// vectors and stage values can never drift apart.
inline double stage1_company_bracket(const CostLedger& led, const EffortPair& eff) {
  return led.u_c + eff.e_r - led.v_c - led.c_c - led.lam_c - led.m_c - led.l_c -
         led.t_c;
}

inline double stage2_company_bracket(const CostLedger& led, const EffortPair& eff) {
  return led.u_c + eff.e_a - led.v_c - led.c_c - led.lam_c - led.m_c - led.l_c -
         led.t_c;
}

// The employee's claim on firm-side surplus; note v_c enters positively here,
// unlike the firm's own bracket.
inline double firm_share_bracket(const CostLedger& led, const EffortPair& eff) {
  return led.u_c + eff.e_a + led.v_c - led.t_c - led.lam_c - led.m_c - led.l_c -
         led.c_c;
}

inline double employee_net_bracket(const CostLedger& led, const EffortPair& eff) {
  return led.u_e + led.v_e - eff.e_a - led.t_e - led.lam_e - led.m_e - led.l_e -
         led.c_e;
}

inline double company_cost_bracket(const CostLedger& led) {
  return led.v_c + led.t_c + led.m_c + led.l_c + led.c_c;
}

inline double stage1_value_company(const CostLedger& led, const EffortPair& eff,
                                   const ModifierSet& mods) {
  led.validate();
  eff.validate();
  mods.validate();
  return signed_pow(stage1_company_bracket(led, eff), mods.pi * mods.lam);
}

inline double stage2_value_company(const CostLedger& led, const EffortPair& eff,
                                   const ModifierSet& mods) {
  led.validate();
  eff.validate();
  mods.validate();
  return signed_pow(stage2_company_bracket(led, eff),
                    mods.pi * mods.psi * mods.lam);
}

// Which modifier view feeds the firm-share integral of the employee values.
// The employee-net integral always uses the employee view.
enum class FirstIntegralView { kFirmModifiers, kEmployeeModifiers };

namespace detail {

inline const ModifierSet& pick_view(const ModifierSet& firm,
                                    const ModifierSet& emp,
                                    FirstIntegralView view) {
  return view == FirstIntegralView::kFirmModifiers ? firm : emp;
}

}  // namespace detail

// Stage-one value to the employee: the larger of a zero-clamped claim on
// firm-side surplus and the employee's own net position. Ledger values are
// constant in time, so each integral collapses to integrand x limit.
inline double stage1_value_employee(
    const CostLedger& led, const EffortPair& eff, const ModifierSet& mods_firm,
    const ModifierSet& mods_emp, const HorizonSpec& horizon,
    FirstIntegralView view = FirstIntegralView::kFirmModifiers) {
  led.validate();
  eff.validate();
  mods_firm.validate();
  mods_emp.validate();
  horizon.validate();
  const ModifierSet& mv = detail::pick_view(mods_firm, mods_emp, view);
  const double i1 = signed_pow(firm_share_bracket(led, eff), mv.pi * mv.omega) *
                    horizon.t_c_limit;
  const double i2 =
      signed_pow(employee_net_bracket(led, eff), mods_emp.pi * mods_emp.lam) *
      horizon.t_e_limit;
  return std::max(std::max(i1, 0.0), i2);
}

// Time-profile variant: ledger values at time t scale by profile(t) and the
// integrals run through composite trapezoid quadrature.
template <typename Profile>
double stage1_value_employee(
    const CostLedger& led, const EffortPair& eff, const ModifierSet& mods_firm,
    const ModifierSet& mods_emp, const HorizonSpec& horizon, Profile&& profile,
    FirstIntegralView view = FirstIntegralView::kFirmModifiers) {
  led.validate();
  eff.validate();
  mods_firm.validate();
  mods_emp.validate();
  horizon.validate();
  const ModifierSet& mv = detail::pick_view(mods_firm, mods_emp, view);
  const double b1 = firm_share_bracket(led, eff);
  const double b2 = employee_net_bracket(led, eff);
  const double e1 = mv.pi * mv.omega;
  const double e2 = mods_emp.pi * mods_emp.lam;
  const auto steps = static_cast<std::size_t>(horizon.n_steps);
  const double i1 = trapezoid(
      [&](double t) { return signed_pow(b1 * profile(t), e1); },
      horizon.t_c_limit, steps);
  const double i2 = trapezoid(
      [&](double t) { return signed_pow(b2 * profile(t), e2); },
      horizon.t_e_limit, steps);
  return std::max(std::max(i1, 0.0), i2);
}

// Stage-two analogue over [0, H] x [0, T]; constant ledger values collapse
// each double integral to integrand x h_limit x t_limit.
inline double stage2_value_employee(
    const CostLedger& led, const EffortPair& eff, const ModifierSet& mods_firm,
    const ModifierSet& mods_emp, const HorizonSpec& horizon,
    FirstIntegralView view = FirstIntegralView::kFirmModifiers) {
  led.validate();
  eff.validate();
  mods_firm.validate();
  mods_emp.validate();
  horizon.validate();
  const ModifierSet& mv = detail::pick_view(mods_firm, mods_emp, view);
  const double i1 = signed_pow(firm_share_bracket(led, eff),
                               mv.pi * mv.psi * mv.lam * mv.omega) *
                    horizon.h_limit * horizon.t_c_limit;
  const double i2 = signed_pow(employee_net_bracket(led, eff),
                               mods_emp.pi * mods_emp.psi * mods_emp.lam) *
                    horizon.h_limit * horizon.t_e_limit;
  return std::max(std::max(i1, 0.0), i2);
}

template <typename Profile>
double stage2_value_employee(
    const CostLedger& led, const EffortPair& eff, const ModifierSet& mods_firm,
    const ModifierSet& mods_emp, const HorizonSpec& horizon, Profile&& profile,
    FirstIntegralView view = FirstIntegralView::kFirmModifiers) {
  led.validate();
  eff.validate();
  mods_firm.validate();
  mods_emp.validate();
  horizon.validate();
  const ModifierSet& mv = detail::pick_view(mods_firm, mods_emp, view);
  const double b1 = firm_share_bracket(led, eff);
  const double b2 = employee_net_bracket(led, eff);
  const double e1 = mv.pi * mv.psi * mv.lam * mv.omega;
  const double e2 = mods_emp.pi * mods_emp.psi * mods_emp.lam;
  const auto steps = static_cast<std::size_t>(horizon.n_steps);
  const double i1 = trapezoid2(
      [&](double h, double t) { return signed_pow(b1 * profile(h, t), e1); },
      horizon.h_limit, steps, horizon.t_c_limit, steps);
  const double i2 = trapezoid2(
      [&](double h, double t) { return signed_pow(b2 * profile(h, t), e2); },
      horizon.h_limit, steps, horizon.t_e_limit, steps);
  return std::max(std::max(i1, 0.0), i2);
}

// The firm's three stage-one objectives, unscalarized. Senses: minimize
// cost_integral, minimize effort_gap, maximize net_value.
struct CompanyObjectives {
  double cost_integral = 0.0;
  double effort_gap = 0.0;
  double net_value = 0.0;
};

inline CompanyObjectives company_objective_vector(const CostLedger& led,
                                                  const EffortPair& eff,
                                                  const ModifierSet& mods,
                                                  const HorizonSpec& horizon) {
  led.validate();
  eff.validate();
  mods.validate();
  horizon.validate();
  CompanyObjectives out;
  out.cost_integral =
      signed_pow(company_cost_bracket(led), mods.pi) * horizon.t_c_limit;
  out.effort_gap = eff.e_r - eff.e_a;
  out.net_value = stage1_company_bracket(led, eff);
  return out;
}

template <typename Profile>
CompanyObjectives company_objective_vector(const CostLedger& led,
                                           const EffortPair& eff,
                                           const ModifierSet& mods,
                                           const HorizonSpec& horizon,
                                           Profile&& profile) {
  led.validate();
  eff.validate();
  mods.validate();
  horizon.validate();
  const double bracket = company_cost_bracket(led);
  CompanyObjectives out;
  out.cost_integral = trapezoid(
      [&](double t) { return signed_pow(bracket * profile(t), mods.pi); },
      horizon.t_c_limit, static_cast<std::size_t>(horizon.n_steps));
  out.effort_gap = eff.e_r - eff.e_a;
  out.net_value = stage1_company_bracket(led, eff);
  return out;
}

// Stage-two variant: cost term is a double integral with exponent pi*lam and
// the net bracket uses actual effort.
inline CompanyObjectives stage2_company_objective_vector(
    const CostLedger& led, const EffortPair& eff, const ModifierSet& mods,
    const HorizonSpec& horizon) {
  led.validate();
  eff.validate();
  mods.validate();
  horizon.validate();
  CompanyObjectives out;
  out.cost_integral = signed_pow(company_cost_bracket(led),
                                 mods.pi * mods.lam) *
                      horizon.h_limit * horizon.t_c_limit;
  out.effort_gap = eff.e_r - eff.e_a;
  out.net_value = stage2_company_bracket(led, eff);
  return out;
}

enum class Sense { kMin, kMax };

// Weighted scalarization: max-sense terms add, min-sense terms subtract, so
// larger is always better for the caller.
inline double scalarize(const std::vector<double>& objectives,
                        const std::vector<double>& weights,
                        const std::vector<Sense>& senses) {
  if (objectives.size() != weights.size() || objectives.size() != senses.size()) {
    throw std::invalid_argument("scalarize: length mismatch");
  }
  double weight_sum = 0.0;
  for (double w : weights) {
    require_nonneg(w, "scalarize weight");
    weight_sum += w;
  }
  if (weight_sum <= 0.0) {
    throw std::invalid_argument("scalarize: weights must not all be zero");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < objectives.size(); ++i) {
    require_finite(objectives[i], "scalarize objective");
    const double term = weights[i] * objectives[i];
    total += senses[i] == Sense::kMax ? term : -term;
  }
  return total;
}

}  // namespace ebilab

#endif  // EBILAB_PAYOFF_HPP
