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
// Numerical audit of incentive-augmented production functions. The last
// factor is the incentive factor; it enters additively with its own
// coefficient (possibly negative) so a de-motivating grant can pull output
// below the classic core. Eight assumption checks sample the domain box
// with a deterministic low-discrepancy sequence and return verdicts backed
// by re-checkable witnesses.

#ifndef EBILAB_PRODFN_HPP
#define EBILAB_PRODFN_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ebilab/common.hpp"
#include "ebilab/payoff.hpp"

namespace ebilab {

enum class ProductionFamily {
  kCobbDouglasIncentive,
  kCesIncentive,
  kPiecewiseVesting
};

struct FactorRange {
  double lo = 0.0;
  double hi = 1.0;
};

// Core families:
//   cobb-douglas-incentive : A * prod x_i^a_i            + c * spow(x_m, a_m)
//   ces-incentive          : A * (sum w_i x_i^rho)^(1/r) + c * spow(x_m, a_m)
//   piecewise-vesting      : cobb-douglas core; the incentive term switches
//                            off entirely below vesting_threshold
// where spow keeps the sign of a negative incentive factor and, for the CES
// family, the non-incentive `exponents` entries act as the weights w_i.
struct ProductionSpec {
  ProductionFamily family = ProductionFamily::kCobbDouglasIncentive;
  double scale = 1.0;
  std::vector<double> exponents;  // one per factor; last is the incentive's
  double incentive_coefficient = 1.0;
  double ces_rho = 0.5;  // CES curvature, in (0, 1]
  int n_factors = 2;
  std::vector<FactorRange> domain_box;
  std::optional<double> vesting_threshold;

  void validate() const {
    if (n_factors < 2 || n_factors > 8) {
      throw ConfigError("n_factors must be in [2, 8]");
    }
    const auto m = static_cast<std::size_t>(n_factors);
    if (exponents.size() != m) {
      throw ConfigError("exponents must have one entry per factor");
    }
    if (domain_box.size() != m) {
      throw ConfigError("domain_box must have one range per factor");
    }
    require_finite(scale, "scale");
    require_finite(incentive_coefficient, "incentive_coefficient");
    for (std::size_t i = 0; i < m; ++i) {
      require_finite(exponents[i], "exponent");
      require_finite(domain_box[i].lo, "domain lo");
      require_finite(domain_box[i].hi, "domain hi");
      if (domain_box[i].hi <= domain_box[i].lo) {
        throw ConfigError("domain range needs hi > lo");
      }
    }
    for (std::size_t i = 0; i + 1 < m; ++i) {
      require_nonneg(exponents[i], "non-incentive exponent");
      if (domain_box[i].lo < 0.0) {
        throw std::domain_error("non-incentive factors need lo >= 0");
      }
    }
    if (exponents[m - 1] <= 0.0) {
      throw std::domain_error("incentive exponent must be positive");
    }
    if (family == ProductionFamily::kCesIncentive) {
      require_finite(ces_rho, "ces_rho");
      if (ces_rho <= 0.0 || ces_rho > 1.0) {
        throw std::domain_error("ces_rho out of range (0, 1]");
      }
    }
    if (family == ProductionFamily::kPiecewiseVesting) {
      if (!vesting_threshold.has_value()) {
        throw ConfigError("piecewise-vesting needs a vesting_threshold");
      }
      require_finite(*vesting_threshold, "vesting_threshold");
    } else if (vesting_threshold.has_value()) {
      throw ConfigError("vesting_threshold only applies to piecewise-vesting");
    }
  }
};

inline double evaluate(const ProductionSpec& spec,
                       const std::vector<double>& x) {
  spec.validate();
  const auto m = static_cast<std::size_t>(spec.n_factors);
  if (x.size() != m) {
    throw std::invalid_argument("factor vector size mismatch");
  }
  for (std::size_t i = 0; i < m; ++i) {
    const auto& range = spec.domain_box[i];
    const double cushion =
        1e-9 * (1.0 + std::fabs(range.lo) + std::fabs(range.hi));
    if (x[i] < range.lo - cushion || x[i] > range.hi + cushion) {
      throw std::domain_error("factor outside the domain box");
    }
  }

  double core = 0.0;
  if (spec.family == ProductionFamily::kCesIncentive) {
    double basket = 0.0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      basket += spec.exponents[i] * std::pow(std::max(x[i], 0.0),
                                            spec.ces_rho);
    }
    core = spec.scale *
           (basket > 0.0 ? std::pow(basket, 1.0 / spec.ces_rho) : 0.0);
  } else {
    core = spec.scale;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      core *= std::pow(std::max(x[i], 0.0), spec.exponents[i]);
    }
  }

  const double x_inc = x[m - 1];
  double incentive =
      spec.incentive_coefficient * signed_pow(x_inc, spec.exponents[m - 1]);
  if (spec.family == ProductionFamily::kPiecewiseVesting &&
      x_inc < *spec.vesting_threshold) {
    incentive = 0.0;
  }
  return core + incentive;
}

enum class Verdict { kHolds, kViolated, kInconclusive };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kHolds: return "holds";
    case Verdict::kViolated: return "violated";
    case Verdict::kInconclusive: return "inconclusive";
  }
  return "unknown";
}

// Stable report labels for the eight checks, in report order.
inline const char* check_name(std::size_t index) {
  static constexpr const char* kNames[8] = {
      "nonnegative-inputs",   "marginal-productivity",
      "finite-single-valued", "zero-input",
      "monotonicity",         "smoothness",
      "upper-set-convexity",  "upper-set-closedness"};
  return index < 8 ? kNames[index] : "unknown";
}

// Witness payloads by check:
//   a1: points {x, x_clamped},      values {f(x), f(x_clamped)}
//   a2: points {x},                 values {estimate, factor, fd_step}
//   a3: points {x},                 values {f(x)}
//   a5: points {upper, lower},      values {f(upper), f(lower)}
//   a6: points {x-e, x, x+e},       values {gap, s_fine, s_coarse, factor, h}
//   a7: points {a, b, midpoint},    values {f(a), f(b), f(mid), level}
//   a8: points along the ray,       values {f at each ray point}
struct Witness {
  std::vector<std::vector<double>> points;
  std::vector<double> values;
  std::string detail;
};

struct CheckResult {
  Verdict verdict = Verdict::kInconclusive;
  std::vector<Witness> evidence;
  std::string note;
};

struct AuditConfig {
  int n_samples = 512;
  double tol = 1e-3;
  double fd_step = 1e-3;
  std::uint64_t seed = 0;

  void validate() const {
    if (n_samples < 100) throw ConfigError("n_samples must be >= 100");
    require_finite(tol, "tol");
    require_finite(fd_step, "fd_step");
    if (tol <= 0.0) throw std::domain_error("tol must be positive");
    if (fd_step <= 0.0) throw std::domain_error("fd_step must be positive");
  }
};

struct AssumptionReport {
  std::array<CheckResult, 8> checks;
  AuditConfig config;
};

namespace detail {

inline constexpr std::array<std::uint64_t, 8> kHaltonPrimes{2,  3,  5,  7,
                                                            11, 13, 17, 19};

inline double radical_inverse(std::uint64_t index, std::uint64_t base) {
  const double inv = 1.0 / static_cast<double>(base);
  double factor = inv;
  double result = 0.0;
  while (index > 0) {
    result += factor * static_cast<double>(index % base);
    index /= base;
    factor *= inv;
  }
  return result;
}

inline double clamp_interior(double x, const FactorRange& range,
                             double margin) {
  return std::clamp(x, range.lo + margin, range.hi - margin);
}

}  // namespace detail

// Deterministic low-discrepancy sample of the domain box; the seed offsets
// the sequence start, so equal seeds give equal samples.
inline std::vector<std::vector<double>> audit_samples(
    const ProductionSpec& spec, int n_samples, std::uint64_t seed) {
  spec.validate();
  if (n_samples < 1) throw ConfigError("n_samples must be >= 1");
  const auto m = static_cast<std::size_t>(spec.n_factors);
  const std::uint64_t start = 1 + seed % 8191;
  std::vector<std::vector<double>> samples;
  samples.reserve(static_cast<std::size_t>(n_samples));
  for (int k = 0; k < n_samples; ++k) {
    std::vector<double> x(m);
    for (std::size_t d = 0; d < m; ++d) {
      const double u = detail::radical_inverse(
          start + static_cast<std::uint64_t>(k), detail::kHaltonPrimes[d]);
      x[d] = spec.domain_box[d].lo +
             u * (spec.domain_box[d].hi - spec.domain_box[d].lo);
    }
    samples.push_back(std::move(x));
  }
  return samples;
}

struct MarginalEstimate {
  double first = 0.0;
  double second = 0.0;
};

// Central differences; the caller keeps x +- step inside the box.
inline MarginalEstimate fd_marginals(const ProductionSpec& spec,
                                     const std::vector<double>& x, int factor,
                                     double step) {
  if (step <= 0.0) throw std::domain_error("step must be positive");
  std::vector<double> up = x;
  std::vector<double> down = x;
  const auto d = static_cast<std::size_t>(factor);
  up[d] += step;
  down[d] -= step;
  const double f_up = evaluate(spec, up);
  const double f_down = evaluate(spec, down);
  const double f_mid = evaluate(spec, x);
  MarginalEstimate est;
  est.first = (f_up - f_down) / (2.0 * step);
  est.second = (f_up - 2.0 * f_mid + f_down) / (step * step);
  return est;
}

// A#1 "defined to be non-negative": violated when a sample with a negative
// coordinate yields a different output than its clamped-to-zero twin.
inline CheckResult check_a1_nonneg(const ProductionSpec& spec,
                                   const std::vector<std::vector<double>>& samples,
                                   const AuditConfig& config) {
  CheckResult result;
  const auto m = static_cast<std::size_t>(spec.n_factors);
  bool negative_side = false;
  for (const auto& range : spec.domain_box) {
    if (range.lo < 0.0) negative_side = true;
  }
  if (!negative_side) {
    result.verdict = Verdict::kHolds;
    result.note = "domain box admits no negative inputs";
    return result;
  }

  std::vector<std::vector<double>> probes = samples;
  {
    // Guaranteed negative probe at the midpoint of every negative side.
    std::vector<double> x(m);
    for (std::size_t d = 0; d < m; ++d) {
      const auto& r = spec.domain_box[d];
      x[d] = r.lo < 0.0 ? 0.5 * r.lo : 0.5 * (r.lo + r.hi);
    }
    probes.push_back(std::move(x));
  }
  for (const auto& x : probes) {
    bool has_negative = false;
    std::vector<double> clamped = x;
    for (std::size_t d = 0; d < m; ++d) {
      if (x[d] < 0.0) {
        has_negative = true;
        clamped[d] = std::min(std::max(0.0, spec.domain_box[d].lo),
                              spec.domain_box[d].hi);
      }
    }
    if (!has_negative) continue;
    const double y = evaluate(spec, x);
    const double y_clamped = evaluate(spec, clamped);
    if (std::fabs(y - y_clamped) > config.tol) {
      result.verdict = Verdict::kViolated;
      Witness w;
      w.points = {x, clamped};
      w.values = {y, y_clamped};
      w.detail = "negative input changes output";
      result.evidence.push_back(std::move(w));
      result.note = "a negative factor value changes f";
      return result;
    }
  }
  result.verdict = Verdict::kHolds;
  result.note = "negative inputs leave f unchanged";
  return result;
}

// A#2 marginal productivity: first derivatives must not be negative; the
// second-derivative population decides between diminishing (holds),
// increasing (violated, the incentive regime), near-zero, and mixed.
inline CheckResult check_a2_marginals(const ProductionSpec& spec,
                                      const std::vector<std::vector<double>>& samples,
                                      const AuditConfig& config) {
  CheckResult result;
  const auto m = static_cast<std::size_t>(spec.n_factors);
  long evaluated = 0;
  long n_pos = 0;
  long n_neg = 0;
  long n_zero = 0;
  double worst_first = 0.0;
  Witness worst_first_witness;
  double best_pos_second = 0.0;
  Witness pos_second_witness;

  for (const auto& sample : samples) {
    for (std::size_t d = 0; d < m; ++d) {
      const auto& range = spec.domain_box[d];
      if (range.hi - range.lo <= 2.5 * config.fd_step) continue;
      std::vector<double> x = sample;
      x[d] = detail::clamp_interior(x[d], range, 1.01 * config.fd_step);
      const MarginalEstimate est =
          fd_marginals(spec, x, static_cast<int>(d), config.fd_step);
      ++evaluated;
      if (est.first < worst_first) {
        worst_first = est.first;
        worst_first_witness.points = {x};
        worst_first_witness.values = {est.first, static_cast<double>(d),
                                      config.fd_step};
        worst_first_witness.detail = "first-derivative estimate";
      }
      if (est.second > config.tol) {
        ++n_pos;
        if (est.second > best_pos_second) {
          best_pos_second = est.second;
          pos_second_witness.points = {x};
          pos_second_witness.values = {est.second, static_cast<double>(d),
                                       config.fd_step};
          pos_second_witness.detail = "second-derivative estimate";
        }
      } else if (est.second < -config.tol) {
        ++n_neg;
      } else {
        ++n_zero;
      }
    }
  }

  if (evaluated == 0) {
    result.verdict = Verdict::kInconclusive;
    result.note = "domain box too thin for differencing";
    return result;
  }
  const double frac_pos = static_cast<double>(n_pos) / evaluated;
  const double frac_neg = static_cast<double>(n_neg) / evaluated;
  const double frac_zero = static_cast<double>(n_zero) / evaluated;
  if (worst_first < -config.tol) {
    result.verdict = Verdict::kViolated;
    result.note = "negative marginal product detected";
    result.evidence.push_back(std::move(worst_first_witness));
  } else if (frac_pos > 0.10) {
    result.verdict = Verdict::kViolated;
    result.note = "increasing marginal productivity regime";
    result.evidence.push_back(std::move(pos_second_witness));
  } else if (frac_neg > 0.90) {
    result.verdict = Verdict::kHolds;
    result.note = "diminishing marginal productivity";
  } else if (frac_zero > 0.90) {
    result.verdict = Verdict::kInconclusive;
    result.note = "second derivative approximately zero";
  } else {
    result.verdict = Verdict::kInconclusive;
    result.note = "mixed curvature across the box";
  }
  return result;
}

// A#3 finite, non-negative, real- and single-valued outputs over the box.
inline CheckResult check_a3_finite_single(
    const ProductionSpec& spec, const std::vector<std::vector<double>>& samples,
    const AuditConfig& config) {
  CheckResult result;
  for (const auto& x : samples) {
    const double y = evaluate(spec, x);
    if (!std::isfinite(y) || y < -config.tol) {
      result.verdict = Verdict::kViolated;
      Witness w;
      w.points = {x};
      w.values = {y};
      w.detail = std::isfinite(y) ? "negative output" : "non-finite output";
      result.evidence.push_back(std::move(w));
      result.note = "output leaves the non-negative reals";
      return result;
    }
  }
  result.verdict = Verdict::kHolds;
  result.note = "finite, non-negative, single-valued on all samples";
  return result;
}

// A#4 behavior at the all-zero input, when the box contains it.
inline CheckResult check_a4_zero_input(const ProductionSpec& spec,
                                       const std::vector<std::vector<double>>&,
                                       const AuditConfig& config) {
  CheckResult result;
  for (const auto& range : spec.domain_box) {
    if (range.lo > 0.0 || range.hi < 0.0) {
      result.verdict = Verdict::kInconclusive;
      result.note = "zero input lies outside the domain box";
      return result;
    }
  }
  const std::vector<double> origin(static_cast<std::size_t>(spec.n_factors),
                                   0.0);
  const double y0 = evaluate(spec, origin);
  Witness w;
  w.points = {origin};
  w.values = {y0};
  w.detail = "output at the zero input";
  result.evidence.push_back(std::move(w));
  result.verdict = Verdict::kHolds;
  if (std::fabs(y0) <= config.tol) {
    result.note = "f(0) is approximately zero";
  } else if (y0 > 0.0) {
    result.note = "f(0) is positive (the >= 0 branch)";
  } else {
    result.note = "f(0) is negative (the <= 0 branch)";
  }
  return result;
}

// A#5 "an increase in inputs does not decrease output", on ordered pairs
// assembled from consecutive samples.
inline CheckResult check_a5_monotone(const ProductionSpec& spec,
                                     const std::vector<std::vector<double>>& samples,
                                     const AuditConfig& config) {
  CheckResult result;
  const auto m = static_cast<std::size_t>(spec.n_factors);
  long tested = 0;
  for (std::size_t k = 0; k + 1 < samples.size(); k += 2) {
    std::vector<double> upper(m);
    std::vector<double> lower(m);
    bool distinct = false;
    for (std::size_t d = 0; d < m; ++d) {
      upper[d] = std::max(samples[k][d], samples[k + 1][d]);
      lower[d] = std::min(samples[k][d], samples[k + 1][d]);
      if (upper[d] != lower[d]) distinct = true;
    }
    if (!distinct) continue;
    ++tested;
    const double f_upper = evaluate(spec, upper);
    const double f_lower = evaluate(spec, lower);
    if (f_upper < f_lower - config.tol) {
      result.verdict = Verdict::kViolated;
      Witness w;
      w.points = {upper, lower};
      w.values = {f_upper, f_lower};
      w.detail = "larger input, smaller output";
      result.evidence.push_back(std::move(w));
      result.note = "monotonicity fails on an ordered pair";
      return result;
    }
  }
  if (tested == 0) {
    result.verdict = Verdict::kInconclusive;
    result.note = "no distinct ordered pairs available";
    return result;
  }
  result.verdict = Verdict::kHolds;
  result.note = "no monotonicity violation across ordered pairs";
  return result;
}

// A#6 continuity and twice-differentiability. Second-difference curvature
// estimates must converge as the step shrinks; blow-up marks a jump or
// kink. Threshold crossings of piecewise specs get dedicated probes plus a
// one-sided curvature-mismatch test for discontinuities the symmetric
// stencil cancels out.
inline CheckResult check_a6_smooth(const ProductionSpec& spec,
                                   const std::vector<std::vector<double>>& samples,
                                   const AuditConfig& config) {
  CheckResult result;
  const auto m = static_cast<std::size_t>(spec.n_factors);

  struct Probe {
    std::vector<double> base;
    std::size_t factor;
    double h;
    bool at_threshold;
  };
  std::vector<Probe> probes;

  if (spec.family == ProductionFamily::kPiecewiseVesting) {
    const double t = *spec.vesting_threshold;
    const auto& range = spec.domain_box[m - 1];
    if (t > range.lo && t < range.hi) {
      const double room = std::min(t - range.lo, range.hi - t);
      const double h = std::min(config.fd_step, 0.45 * room);
      const std::size_t count = std::min<std::size_t>(samples.size(), 8);
      for (std::size_t k = 0; k < count; ++k) {
        Probe probe;
        probe.base = samples[k];
        probe.base[m - 1] = t;
        probe.factor = m - 1;
        probe.h = h;
        probe.at_threshold = true;
        probes.push_back(std::move(probe));
      }
    }
  }
  const std::size_t slice_count = std::min<std::size_t>(samples.size(), 16);
  for (std::size_t k = 0; k < slice_count; ++k) {
    for (std::size_t d = 0; d < m; ++d) {
      const auto& range = spec.domain_box[d];
      if (range.hi - range.lo <= 5.0 * config.fd_step) continue;
      Probe probe;
      probe.base = samples[k];
      probe.base[d] =
          detail::clamp_interior(probe.base[d], range, 2.05 * config.fd_step);
      probe.factor = d;
      probe.h = config.fd_step;
      probe.at_threshold = false;
      probes.push_back(std::move(probe));
    }
  }
  if (probes.empty()) {
    result.verdict = Verdict::kInconclusive;
    result.note = "no probe had room for differencing";
    return result;
  }

  const auto second_gap = [&](const std::vector<double>& x, std::size_t d,
                              double eps) {
    std::vector<double> up = x;
    std::vector<double> down = x;
    up[d] += eps;
    down[d] -= eps;
    return evaluate(spec, up) - 2.0 * evaluate(spec, x) +
           evaluate(spec, down);
  };

  for (const auto& probe : probes) {
    const double h = probe.h;
    if (h <= 0.0) continue;
    const double fine = h / 16.0;
    const double g_coarse = std::fabs(second_gap(probe.base, probe.factor, h));
    const double g_fine =
        std::fabs(second_gap(probe.base, probe.factor, fine));
    const double s_coarse = g_coarse / (h * h);
    const double s_fine = g_fine / (fine * fine);
    const double f_base = evaluate(spec, probe.base);
    const double noise_floor = 1e-12 * std::max(1.0, std::fabs(f_base));

    bool blew_up = s_fine > 3.0 * s_coarse && g_fine > noise_floor;
    if (!blew_up && probe.at_threshold) {
      // One-sided curvature mismatch, for discontinuities in the second
      // derivative that the symmetric stencil averages away. A smooth f
      // shrinks the mismatch with the step; a jump keeps it level.
      const auto one_sided = [&](double eps) {
        std::vector<double> x1 = probe.base;
        std::vector<double> x2 = probe.base;
        x1[probe.factor] += eps;
        x2[probe.factor] += 2.0 * eps;
        const double f0 = evaluate(spec, probe.base);
        const double right =
            (evaluate(spec, x2) - 2.0 * evaluate(spec, x1) + f0) / (eps * eps);
        x1[probe.factor] = probe.base[probe.factor] - eps;
        x2[probe.factor] = probe.base[probe.factor] - 2.0 * eps;
        const double left =
            (f0 - 2.0 * evaluate(spec, x1) + evaluate(spec, x2)) / (eps * eps);
        return std::fabs(right - left);
      };
      const double mm_coarse = one_sided(h / 2.0);
      const double mm_fine = one_sided(h / 32.0);
      blew_up = mm_fine > std::max(config.tol, 0.5 * mm_coarse);
    }
    if (blew_up) {
      result.verdict = Verdict::kViolated;
      Witness w;
      std::vector<double> down = probe.base;
      std::vector<double> up = probe.base;
      down[probe.factor] -= fine;
      up[probe.factor] += fine;
      w.points = {down, probe.base, up};
      w.values = {g_fine, s_fine, s_coarse,
                  static_cast<double>(probe.factor), h};
      w.detail = "curvature estimate fails to converge";
      result.evidence.push_back(std::move(w));
      result.note = "smoothness breaks near a probed slice";
      return result;
    }
  }
  result.verdict = Verdict::kHolds;
  result.note = "curvature estimates converge on all probes";
  return result;
}

namespace detail {

inline std::vector<double> positive_levels(
    const ProductionSpec& spec, const std::vector<std::vector<double>>& samples) {
  std::vector<double> values;
  for (const auto& x : samples) {
    const double y = evaluate(spec, x);
    if (y > 0.0) values.push_back(y);
  }
  std::sort(values.begin(), values.end());
  std::vector<double> levels;
  if (values.empty()) return levels;
  for (double q : {0.25, 0.50, 0.75}) {
    levels.push_back(values[static_cast<std::size_t>(
        q * static_cast<double>(values.size() - 1))]);
  }
  return levels;
}

}  // namespace detail

// A#7 convexity of the upper level sets V(y) = {x : f(x) >= y}, tested by
// midpoints of member pairs at three sampled output levels. "Holds" means
// no counterexample was found, nothing stronger.
inline CheckResult check_a7_vy_convex(const ProductionSpec& spec,
                                      const std::vector<std::vector<double>>& samples,
                                      const AuditConfig& config) {
  CheckResult result;
  const auto m = static_cast<std::size_t>(spec.n_factors);
  const std::vector<double> levels = detail::positive_levels(spec, samples);
  if (levels.empty()) {
    result.verdict = Verdict::kInconclusive;
    result.note = "no positive output level to test";
    return result;
  }
  long tests = 0;
  for (double level : levels) {
    std::vector<std::size_t> members;
    for (std::size_t k = 0; k < samples.size() && members.size() < 30; ++k) {
      if (evaluate(spec, samples[k]) >= level) members.push_back(k);
    }
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const auto& xa = samples[members[a]];
        const auto& xb = samples[members[b]];
        std::vector<double> mid(m);
        for (std::size_t d = 0; d < m; ++d) mid[d] = 0.5 * (xa[d] + xb[d]);
        ++tests;
        const double f_mid = evaluate(spec, mid);
        if (f_mid < level - config.tol) {
          result.verdict = Verdict::kViolated;
          Witness w;
          w.points = {xa, xb, mid};
          w.values = {evaluate(spec, xa), evaluate(spec, xb), f_mid, level};
          w.detail = "midpoint drops out of the upper level set";
          result.evidence.push_back(std::move(w));
          result.note = "upper level set fails midpoint convexity";
          return result;
        }
      }
    }
  }
  if (tests == 0) {
    result.verdict = Verdict::kInconclusive;
    result.note = "too few members reached any tested level";
    return result;
  }
  result.verdict = Verdict::kHolds;
  result.note = "no convexity counterexample in " + std::to_string(tests) +
                " midpoint tests (sampled, not proved)";
  return result;
}

// A#8 non-emptiness of V(y) at sampled levels; closedness is not
// numerically refutable and is noted as such. Growth along a ray toward the
// best sample is reported as unlimited-returns evidence.
inline CheckResult check_a8_vy_closed(const ProductionSpec& spec,
                                      const std::vector<std::vector<double>>& samples,
                                      const AuditConfig& config) {
  CheckResult result;
  (void)config;
  const auto m = static_cast<std::size_t>(spec.n_factors);
  const std::vector<double> levels = detail::positive_levels(spec, samples);
  if (levels.empty()) {
    result.verdict = Verdict::kInconclusive;
    result.note = "f never exceeds zero on the box";
    return result;
  }
  // Levels are attained order statistics, so each V(level) holds at least
  // one sample; record the strongest sample as the non-emptiness witness.
  std::size_t best = 0;
  double best_value = evaluate(spec, samples[0]);
  for (std::size_t k = 1; k < samples.size(); ++k) {
    const double y = evaluate(spec, samples[k]);
    if (y > best_value) {
      best_value = y;
      best = k;
    }
  }
  result.verdict = Verdict::kHolds;
  result.note =
      "non-empty at all tested levels; closedness assumed from continuity";

  std::vector<double> center(m);
  for (std::size_t d = 0; d < m; ++d) {
    center[d] = 0.5 * (spec.domain_box[d].lo + spec.domain_box[d].hi);
  }
  Witness ray;
  bool growing = true;
  double previous = evaluate(spec, center);
  for (double t : {0.25, 0.5, 0.75, 1.0}) {
    std::vector<double> p(m);
    for (std::size_t d = 0; d < m; ++d) {
      p[d] = center[d] + t * (samples[best][d] - center[d]);
    }
    const double y = evaluate(spec, p);
    if (y <= previous) growing = false;
    previous = y;
    ray.points.push_back(std::move(p));
    ray.values.push_back(y);
  }
  if (growing && previous >= levels.back()) {
    ray.detail = "output keeps growing along the sampled ray";
    result.evidence.push_back(std::move(ray));
    result.note += "; output grows along a sampled ray";
  }
  return result;
}

inline AssumptionReport audit(const ProductionSpec& spec,
                              const AuditConfig& config) {
  spec.validate();
  config.validate();
  const auto samples = audit_samples(spec, config.n_samples, config.seed);
  AssumptionReport report;
  report.config = config;
  report.checks[0] = check_a1_nonneg(spec, samples, config);
  report.checks[1] = check_a2_marginals(spec, samples, config);
  report.checks[2] = check_a3_finite_single(spec, samples, config);
  report.checks[3] = check_a4_zero_input(spec, samples, config);
  report.checks[4] = check_a5_monotone(spec, samples, config);
  report.checks[5] = check_a6_smooth(spec, samples, config);
  report.checks[6] = check_a7_vy_convex(spec, samples, config);
  report.checks[7] = check_a8_vy_closed(spec, samples, config);
  return report;
}

inline AssumptionReport audit(const ProductionSpec& spec, int n_samples,
                              double tol, double fd_step,
                              std::uint64_t seed) {
  AuditConfig config;
  config.n_samples = n_samples;
  config.tol = tol;
  config.fd_step = fd_step;
  config.seed = seed;
  return audit(spec, config);
}

}  // namespace ebilab

#endif  // EBILAB_PRODFN_HPP
