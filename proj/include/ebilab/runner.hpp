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
// Scenario execution and report emission. Blocks run in a fixed order
// (stage1, stage2, coalition, prodfn); the coalition block can consume the
// first-quarter game of the stage2 run. Emitted files are plot-ready and
// byte-stable: numbers carry 12 significant digits, nothing time-dependent
// is written, and re-running a scenario reproduces every output byte.

#ifndef EBILAB_RUNNER_HPP
#define EBILAB_RUNNER_HPP

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ebilab/scenario.hpp"

namespace ebilab {

struct StageOneFindings {
  std::vector<CohortMember> members;
};

struct StageTwoFindings {
  Trajectory trajectory;
};

struct CoalitionFindings {
  CharacteristicFunction cf;
  bool derived = false;  // built from the stage2 first-quarter game
  SuperadditivityReport superadditivity;
  CoreVerdict core;
  std::vector<Rational> shapley_exact;
  std::vector<double> shapley;
};

struct ProdfnFindings {
  ProductionSpec spec;
  AssumptionReport report;
};

struct RunReport {
  Scenario scenario;
  std::string version = kVersionString;
  std::optional<StageOneFindings> stage1;
  std::optional<StageTwoFindings> stage2;
  std::optional<CoalitionFindings> coalition;
  std::optional<std::vector<ProdfnFindings>> prodfn;
  // Measured for operators, never emitted: report files must be
  // byte-identical across re-runs.
  double wall_seconds = 0.0;
};

inline RunReport run(const Scenario& scenario) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.scenario = scenario;

  if (scenario.stage1) {
    const StageOneBlock& block = *scenario.stage1;
    CohortConfig config = block.cohort;
    config.seed = block.cohort_seed.value_or(scenario.seed);
    StageOneFindings findings;
    findings.members = run_cohort(
        config, block.ledger, block.effort, block.employee, block.shareholder,
        block.modifiers, block.employee_modifiers.value_or(block.modifiers),
        block.horizon);
    report.stage1 = std::move(findings);
  }

  if (scenario.stage2) {
    const StageTwoBlock& block = *scenario.stage2;
    PriceModel price = block.price_model;
    price.seed = block.price_seed.value_or(scenario.seed);
    StageTwoFindings findings;
    findings.trajectory = simulate_quarters(
        block.initial_state, block.n_quarters, block.players, block.ledgers,
        block.modifiers, block.horizon, price, block.policy, block.coupling,
        block.action_grid_res);
    report.stage2 = std::move(findings);
  }

  if (scenario.coalition) {
    const CoalitionBlock& block = *scenario.coalition;
    CoalitionFindings findings;
    if (block.derive_from_stage2) {
      if (!scenario.stage2 || !report.stage2 ||
          report.stage2->trajectory.quarters.empty()) {
        throw std::logic_error(
            "coalition derivation needs a completed stage2 run");
      }
      const StageTwoBlock& stage2 = *scenario.stage2;
      findings.cf = characteristic_from_quarter(
          report.stage2->trajectory.quarters.front().state, stage2.players,
          stage2.ledgers, stage2.modifiers, stage2.horizon);
      findings.derived = true;
    } else if (block.explicit_cf) {
      findings.cf = *block.explicit_cf;
    } else {
      throw std::logic_error("coalition block carries no usable source");
    }
    findings.superadditivity = is_superadditive(findings.cf);
    CoreOptions options = block.core;
    options.seed = block.core_seed.value_or(scenario.seed);
    findings.core = core_is_empty(findings.cf, options);
    findings.shapley_exact = shapley_value_exact(findings.cf);
    findings.shapley = shapley_value(findings.cf);
    report.coalition = std::move(findings);
  }

  if (scenario.prodfn) {
    const ProdfnBlock& block = *scenario.prodfn;
    AuditConfig config = block.audit;
    config.seed = block.audit_seed.value_or(scenario.seed);
    std::vector<ProdfnFindings> findings;
    findings.reserve(block.specs.size());
    for (const auto& spec : block.specs) {
      findings.push_back({spec, audit(spec, config)});
    }
    report.prodfn = std::move(findings);
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

enum class EmitFormat { kJsonLike, kCsvTables };

inline EmitFormat parse_emit_format(const std::string& name) {
  if (name == "json-like" || name == "json") return EmitFormat::kJsonLike;
  if (name == "csv-tables" || name == "csv") return EmitFormat::kCsvTables;
  throw ConfigError("unknown format '" + name +
                    "' (expected json-like or csv)");
}

namespace detail {

// All emitted numbers go through one formatter so every file renders with
// 12 significant digits, deterministically.
inline std::string format_g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline void json_escape_into(std::string& out, std::string_view text) {
  out += '"';
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

// Streaming JSON writer with explicit structure; commas are managed so the
// caller cannot produce malformed output by construction order.
class JsonOut {
 public:
  void begin_object() {
    value_prefix();
    out_ += '{';
    first_.push_back(true);
  }
  void end_object() {
    out_ += '}';
    first_.pop_back();
  }
  void begin_array() {
    value_prefix();
    out_ += '[';
    first_.push_back(true);
  }
  void end_array() {
    out_ += ']';
    first_.pop_back();
  }
  void key(std::string_view k) {
    if (!first_.empty() && !first_.back()) out_ += ',';
    if (!first_.empty()) first_.back() = false;
    json_escape_into(out_, k);
    out_ += ':';
    have_key_ = true;
  }
  void number(double v) {
    value_prefix();
    out_ += format_g12(v);
  }
  void integer(long long v) {
    value_prefix();
    out_ += std::to_string(v);
  }
  void unsigned_integer(std::uint64_t v) {
    value_prefix();
    out_ += std::to_string(v);
  }
  void boolean(bool v) {
    value_prefix();
    out_ += v ? "true" : "false";
  }
  void string(std::string_view v) {
    value_prefix();
    json_escape_into(out_, v);
  }
  void null() {
    value_prefix();
    out_ += "null";
  }
  std::string take() {
    out_ += '\n';
    return std::move(out_);
  }

 private:
  void value_prefix() {
    if (have_key_) {
      have_key_ = false;
      return;
    }
    if (!first_.empty()) {
      if (!first_.back()) out_ += ',';
      first_.back() = false;
    }
  }

  std::string out_;
  std::vector<bool> first_;
  bool have_key_ = false;
};

inline std::string csv_field(std::string_view text) {
  const bool needs_quotes =
      text.find_first_of(",\"\n\r") != std::string_view::npos;
  if (!needs_quotes) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

inline void write_numbers(JsonOut& json, const std::vector<double>& values) {
  json.begin_array();
  for (double v : values) json.number(v);
  json.end_array();
}

inline void write_rationals(JsonOut& json,
                            const std::vector<Rational>& values) {
  json.begin_array();
  for (const auto& v : values) json.string(v.get_str());
  json.end_array();
}

inline void write_ledger(JsonOut& json, const CostLedger& led) {
  json.begin_object();
  json.key("v_c"); json.number(led.v_c);
  json.key("v_e"); json.number(led.v_e);
  json.key("t_c"); json.number(led.t_c);
  json.key("t_e"); json.number(led.t_e);
  json.key("m_c"); json.number(led.m_c);
  json.key("m_e"); json.number(led.m_e);
  json.key("c_c"); json.number(led.c_c);
  json.key("c_e"); json.number(led.c_e);
  json.key("l_c"); json.number(led.l_c);
  json.key("l_e"); json.number(led.l_e);
  json.key("lam_c"); json.number(led.lam_c);
  json.key("lam_e"); json.number(led.lam_e);
  json.key("u_c"); json.number(led.u_c);
  json.key("u_e"); json.number(led.u_e);
  json.end_object();
}

inline void write_quarter_state(JsonOut& json, const QuarterState& state) {
  json.begin_object();
  json.key("quarter_index"); json.integer(state.quarter_index);
  json.key("share_price"); json.number(state.share_price);
  json.key("shares_outstanding"); json.number(state.shares_outstanding);
  json.key("vested_fraction"); write_numbers(json, state.vested_fraction);
  json.key("outstanding_ebi"); write_numbers(json, state.outstanding_ebi);
  json.key("carry_over"); json.number(state.carry_over);
  json.end_object();
}

inline const char* family_label(ProductionFamily family) {
  switch (family) {
    case ProductionFamily::kCobbDouglasIncentive:
      return "cobb-douglas-incentive";
    case ProductionFamily::kCesIncentive:
      return "ces-incentive";
    case ProductionFamily::kPiecewiseVesting:
      return "piecewise-vesting";
  }
  return "unknown";
}

inline std::string summary_json(const RunReport& report) {
  JsonOut json;
  json.begin_object();
  json.key("schema_version"); json.integer(report.scenario.schema_version);
  json.key("version"); json.string(report.version);
  json.key("name"); json.string(report.scenario.name);
  json.key("seed"); json.unsigned_integer(report.scenario.seed);
  json.key("blocks");
  json.begin_object();
  json.key("stage1"); json.boolean(report.stage1.has_value());
  json.key("stage2"); json.boolean(report.stage2.has_value());
  json.key("coalition"); json.boolean(report.coalition.has_value());
  json.key("prodfn"); json.boolean(report.prodfn.has_value());
  json.end_object();
  json.key("headline");
  json.begin_object();
  if (report.stage1) {
    int converged = 0;
    for (const auto& m : report.stage1->members) {
      if (m.contract.converged) ++converged;
    }
    json.key("stage1_members");
    json.integer(static_cast<long long>(report.stage1->members.size()));
    json.key("stage1_converged"); json.integer(converged);
  }
  if (report.stage2) {
    json.key("stage2_quarters");
    json.integer(
        static_cast<long long>(report.stage2->trajectory.quarters.size()));
    json.key("stage2_final_share_price");
    json.number(report.stage2->trajectory.final_state.share_price);
  }
  if (report.coalition) {
    json.key("coalition_players"); json.integer(report.coalition->cf.n);
    json.key("coalition_superadditive");
    json.boolean(report.coalition->superadditivity.holds);
    json.key("coalition_core_empty");
    json.boolean(report.coalition->core.empty);
    json.key("coalition_core_certified");
    json.boolean(report.coalition->core.certified);
  }
  if (report.prodfn) {
    int violated = 0;
    for (const auto& f : *report.prodfn) {
      for (const auto& check : f.report.checks) {
        if (check.verdict == Verdict::kViolated) ++violated;
      }
    }
    json.key("prodfn_specs");
    json.integer(static_cast<long long>(report.prodfn->size()));
    json.key("prodfn_violated_checks"); json.integer(violated);
  }
  json.end_object();
  json.end_object();
  return json.take();
}

inline std::string stage_one_json(const StageOneFindings& findings) {
  JsonOut json;
  json.begin_object();
  json.key("members");
  json.begin_array();
  for (std::size_t i = 0; i < findings.members.size(); ++i) {
    const CohortMember& member = findings.members[i];
    json.begin_object();
    json.key("member"); json.integer(static_cast<long long>(i));
    json.key("ledger"); write_ledger(json, member.ledger);
    json.key("strategy"); write_numbers(json, member.contract.employee_strategy.a);
    json.key("final_q_weights");
    write_numbers(json, member.contract.final_q_weights);
    json.key("employee_payoff"); json.number(member.contract.employee_payoff);
    json.key("shareholder_payoff");
    json.number(member.contract.shareholder_payoff);
    json.key("is_pure_nash"); json.boolean(member.contract.is_pure_nash);
    json.key("rounds"); json.integer(member.contract.rounds);
    json.key("converged"); json.boolean(member.contract.converged);
    json.key("stage1_company"); json.number(member.stage1_company);
    json.key("stage1_employee"); json.number(member.stage1_employee);
    json.end_object();
  }
  json.end_array();
  json.end_object();
  return json.take();
}

inline std::string stage_two_json(const StageTwoFindings& findings) {
  JsonOut json;
  json.begin_object();
  json.key("quarters");
  json.begin_array();
  for (const QuarterRecord& record : findings.trajectory.quarters) {
    json.begin_object();
    json.key("state"); write_quarter_state(json, record.state);
    json.key("exercise_fraction");
    write_numbers(json, record.exercise_fraction);
    json.key("employee_payoffs"); write_numbers(json, record.employee_payoffs);
    json.key("firm_payoff"); json.number(record.firm_payoff);
    json.key("realized_value"); json.number(record.realized_value);
    json.key("has_pure_nash"); json.boolean(record.has_pure_nash);
    json.end_object();
  }
  json.end_array();
  json.key("final_state");
  write_quarter_state(json, findings.trajectory.final_state);
  json.end_object();
  return json.take();
}

inline std::string coalition_json(const CoalitionFindings& findings) {
  JsonOut json;
  json.begin_object();
  json.key("n_players"); json.integer(findings.cf.n);
  json.key("derived"); json.boolean(findings.derived);
  json.key("values"); write_numbers(json, findings.cf.v);
  json.key("superadditive");
  json.begin_object();
  json.key("holds"); json.boolean(findings.superadditivity.holds);
  json.key("counterexample");
  if (findings.superadditivity.counterexample) {
    json.begin_array();
    json.unsigned_integer(findings.superadditivity.counterexample->first);
    json.unsigned_integer(findings.superadditivity.counterexample->second);
    json.end_array();
  } else {
    json.null();
  }
  json.end_object();
  json.key("core");
  json.begin_object();
  json.key("empty"); json.boolean(findings.core.empty);
  json.key("certified"); json.boolean(findings.core.certified);
  json.key("imputation");
  if (findings.core.imputation) {
    json.begin_array();
    for (const auto& r : *findings.core.imputation) {
      json.number(rational_to_double(r));
    }
    json.end_array();
  } else {
    json.null();
  }
  json.key("imputation_exact");
  if (findings.core.imputation) {
    write_rationals(json, *findings.core.imputation);
  } else {
    json.null();
  }
  json.key("blocking_collection");
  if (findings.core.blocking_collection) {
    json.begin_object();
    json.key("coalitions");
    json.begin_array();
    for (CoalitionMask mask : findings.core.blocking_collection->coalitions) {
      json.unsigned_integer(mask);
    }
    json.end_array();
    json.key("weights");
    write_rationals(json, findings.core.blocking_collection->weights);
    json.end_object();
  } else {
    json.null();
  }
  json.key("blocking_excess");
  json.string(findings.core.blocking_excess.get_str());
  json.key("samples_tried"); json.integer(findings.core.samples_tried);
  json.end_object();
  json.key("shapley"); write_numbers(json, findings.shapley);
  json.key("shapley_exact"); write_rationals(json, findings.shapley_exact);
  json.end_object();
  return json.take();
}

inline std::string prodfn_json(const std::vector<ProdfnFindings>& findings) {
  JsonOut json;
  json.begin_object();
  json.key("specs");
  json.begin_array();
  for (std::size_t i = 0; i < findings.size(); ++i) {
    const ProdfnFindings& f = findings[i];
    json.begin_object();
    json.key("index"); json.integer(static_cast<long long>(i));
    json.key("family"); json.string(family_label(f.spec.family));
    json.key("n_factors"); json.integer(f.spec.n_factors);
    json.key("audit");
    json.begin_object();
    json.key("n_samples"); json.integer(f.report.config.n_samples);
    json.key("tol"); json.number(f.report.config.tol);
    json.key("fd_step"); json.number(f.report.config.fd_step);
    json.key("seed"); json.unsigned_integer(f.report.config.seed);
    json.end_object();
    json.key("checks");
    json.begin_array();
    for (std::size_t c = 0; c < f.report.checks.size(); ++c) {
      const CheckResult& check = f.report.checks[c];
      json.begin_object();
      json.key("name"); json.string(check_name(c));
      json.key("verdict"); json.string(verdict_name(check.verdict));
      json.key("note"); json.string(check.note);
      json.key("evidence");
      json.begin_array();
      for (const Witness& witness : check.evidence) {
        json.begin_object();
        json.key("points");
        json.begin_array();
        for (const auto& point : witness.points) write_numbers(json, point);
        json.end_array();
        json.key("values"); write_numbers(json, witness.values);
        json.key("detail"); json.string(witness.detail);
        json.end_object();
      }
      json.end_array();
      json.end_object();
    }
    json.end_array();
    json.end_object();
  }
  json.end_array();
  json.end_object();
  return json.take();
}

inline std::string summary_csv(const RunReport& report) {
  std::string out = "key,value\n";
  const auto row = [&out](std::string_view key, const std::string& value) {
    out += csv_field(key);
    out += ',';
    out += csv_field(value);
    out += '\n';
  };
  row("schema_version", std::to_string(report.scenario.schema_version));
  row("version", report.version);
  row("name", report.scenario.name);
  row("seed", std::to_string(report.scenario.seed));
  row("stage1_present", report.stage1 ? "1" : "0");
  row("stage2_present", report.stage2 ? "1" : "0");
  row("coalition_present", report.coalition ? "1" : "0");
  row("prodfn_present", report.prodfn ? "1" : "0");
  if (report.stage1) {
    int converged = 0;
    for (const auto& m : report.stage1->members) {
      if (m.contract.converged) ++converged;
    }
    row("stage1_members", std::to_string(report.stage1->members.size()));
    row("stage1_converged", std::to_string(converged));
  }
  if (report.stage2) {
    row("stage2_quarters",
        std::to_string(report.stage2->trajectory.quarters.size()));
    row("stage2_final_share_price",
        format_g12(report.stage2->trajectory.final_state.share_price));
  }
  if (report.coalition) {
    row("coalition_players", std::to_string(report.coalition->cf.n));
    row("coalition_superadditive",
        report.coalition->superadditivity.holds ? "1" : "0");
    row("coalition_core_empty", report.coalition->core.empty ? "1" : "0");
    row("coalition_core_certified",
        report.coalition->core.certified ? "1" : "0");
    for (std::size_t i = 0; i < report.coalition->shapley.size(); ++i) {
      row("coalition_shapley_" + std::to_string(i),
          format_g12(report.coalition->shapley[i]));
    }
  }
  if (report.prodfn) {
    int violated = 0;
    for (const auto& f : *report.prodfn) {
      for (const auto& check : f.report.checks) {
        if (check.verdict == Verdict::kViolated) ++violated;
      }
    }
    row("prodfn_specs", std::to_string(report.prodfn->size()));
    row("prodfn_violated_checks", std::to_string(violated));
  }
  return out;
}

inline std::string stage_one_csv(const StageOneFindings& findings) {
  std::string out =
      "member,employee_payoff,shareholder_payoff,stage1_company,"
      "stage1_employee,rounds,converged,is_pure_nash,v_e,u_e,t_e\n";
  for (std::size_t i = 0; i < findings.members.size(); ++i) {
    const CohortMember& m = findings.members[i];
    out += std::to_string(i);
    out += ',' + format_g12(m.contract.employee_payoff);
    out += ',' + format_g12(m.contract.shareholder_payoff);
    out += ',' + format_g12(m.stage1_company);
    out += ',' + format_g12(m.stage1_employee);
    out += ',' + std::to_string(m.contract.rounds);
    out += m.contract.converged ? ",1" : ",0";
    out += m.contract.is_pure_nash ? ",1" : ",0";
    out += ',' + format_g12(m.ledger.v_e);
    out += ',' + format_g12(m.ledger.u_e);
    out += ',' + format_g12(m.ledger.t_e);
    out += '\n';
  }
  return out;
}

inline std::string stage_two_csv(const StageTwoFindings& findings) {
  std::string out =
      "quarter,player,exercise_fraction,payoff,share_price,"
      "shares_outstanding,vested_fraction,outstanding_ebi,carry_over,"
      "has_pure_nash,firm_payoff\n";
  for (const QuarterRecord& record : findings.trajectory.quarters) {
    for (std::size_t p = 0; p < record.employee_payoffs.size(); ++p) {
      out += std::to_string(record.state.quarter_index);
      out += ',' + std::to_string(p);
      out += ',' + format_g12(record.exercise_fraction[p]);
      out += ',' + format_g12(record.employee_payoffs[p]);
      out += ',' + format_g12(record.state.share_price);
      out += ',' + format_g12(record.state.shares_outstanding);
      out += ',' + format_g12(record.state.vested_fraction[p]);
      out += ',' + format_g12(record.state.outstanding_ebi[p]);
      out += ',' + format_g12(record.state.carry_over);
      out += record.has_pure_nash ? ",1" : ",0";
      out += ',' + format_g12(record.firm_payoff);
      out += '\n';
    }
  }
  return out;
}

inline std::string coalition_csv(const CoalitionFindings& findings) {
  std::string out = "mask,size,value\n";
  for (std::size_t mask = 0; mask < findings.cf.v.size(); ++mask) {
    int size = 0;
    for (int j = 0; j < findings.cf.n; ++j) {
      if ((mask >> j) & 1u) ++size;
    }
    out += std::to_string(mask);
    out += ',' + std::to_string(size);
    out += ',' + format_g12(findings.cf.v[mask]);
    out += '\n';
  }
  return out;
}

inline std::string prodfn_csv(const std::vector<ProdfnFindings>& findings) {
  std::string out = "spec,family,check,verdict,note\n";
  for (std::size_t i = 0; i < findings.size(); ++i) {
    for (std::size_t c = 0; c < findings[i].report.checks.size(); ++c) {
      const CheckResult& check = findings[i].report.checks[c];
      out += std::to_string(i);
      out += ',';
      out += csv_field(family_label(findings[i].spec.family));
      out += ',';
      out += csv_field(check_name(c));
      out += ',';
      out += csv_field(verdict_name(check.verdict));
      out += ',';
      out += csv_field(check.note);
      out += '\n';
    }
  }
  return out;
}

inline std::string write_report_file(const std::string& out_dir,
                                     const std::string& name,
                                     const std::string& block,
                                     const std::string& ext,
                                     const std::string& content) {
  const std::filesystem::path path =
      std::filesystem::path(out_dir) / (name + "." + block + "." + ext);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  return path.string();
}

}  // namespace detail

// Writes the report as <name>.<block>.<ext> files under out_dir and returns
// the paths. A report with no blocks still produces its summary file.
inline std::vector<std::string> emit(const RunReport& report,
                                     EmitFormat format,
                                     const std::string& out_dir) {
  namespace d = detail;
  std::filesystem::create_directories(out_dir);
  const std::string& name = report.scenario.name;
  const bool json = format == EmitFormat::kJsonLike;
  const std::string ext = json ? "json" : "csv";
  std::vector<std::string> paths;

  paths.push_back(d::write_report_file(
      out_dir, name, "summary", ext,
      json ? d::summary_json(report) : d::summary_csv(report)));
  if (report.stage1) {
    paths.push_back(d::write_report_file(
        out_dir, name, "stage1", ext,
        json ? d::stage_one_json(*report.stage1)
             : d::stage_one_csv(*report.stage1)));
  }
  if (report.stage2) {
    paths.push_back(d::write_report_file(
        out_dir, name, "stage2", ext,
        json ? d::stage_two_json(*report.stage2)
             : d::stage_two_csv(*report.stage2)));
  }
  if (report.coalition) {
    paths.push_back(d::write_report_file(
        out_dir, name, "coalition", ext,
        json ? d::coalition_json(*report.coalition)
             : d::coalition_csv(*report.coalition)));
  }
  if (report.prodfn) {
    paths.push_back(d::write_report_file(
        out_dir, name, "prodfn", ext,
        json ? d::prodfn_json(*report.prodfn)
             : d::prodfn_csv(*report.prodfn)));
  }
  return paths;
}

// The shipped end-to-end example: a three-member negotiation cohort, the
// two-employee dilution quarter whose joint-exercise game the coalition
// block consumes, and the three production audits (clean, demotivating,
// cliff-vesting). scenarios/demo.json carries the same bytes.
inline const char* demo_scenario_text() {
  return R"({
  "schema_version": 1,
  "name": "demo",
  "seed": 20260822,
  "stage1": {
    "cohort_size": 3,
    "grid_res": 2,
    "max_rounds": 8,
    "perturb_v_e": 0.5,
    "perturb_u_e": 0.5,
    "perturb_t_e": 0.05,
    "ledger": {"v_c": 1.0, "v_e": 2.0, "u_c": 3.0, "u_e": 5.0, "t_c": 0.2, "t_e": 0.1},
    "effort": {"e_a": 2.0, "e_r": 2.0},
    "employee": {"s": 10.0, "k": 4.0, "i_oe": 1.0, "c_a": 2.0, "f_e": 1.0, "b": 1.0},
    "shareholder": {
      "s_p": 0.6,
      "mgmt_own": 0.1,
      "inst_own": 0.3,
      "gov_score": 0.8,
      "phi": 0.5,
      "f_c": 0.5,
      "q_weights": [1.0, 1.0, 1.0, 1.0, 1.0, 2.0, 1.0, 1.0, 1.0, 1.0]
    },
    "modifiers": {"pi": 1.0, "psi": 1.0, "lam": 1.0, "omega": 0.5},
    "horizon": {"t_c_limit": 1.0, "t_e_limit": 1.0, "h_limit": 1.0, "n_steps": 16, "gamma": 3}
  },
  "stage2": {
    "n_quarters": 4,
    "coupling": 0.25,
    "action_grid_res": 2,
    "policy": {"kind": "myopic-best-response", "threshold": 0.0},
    "price_model": {"kind": "deterministic-drift", "drift": 0.01, "vol": 0.0, "dilution_sensitivity": -0.002},
    "initial_state": {
      "quarter_index": 0,
      "share_price": 10.0,
      "shares_outstanding": 56.0,
      "vested_fraction": [1.0, 1.0],
      "outstanding_ebi": [100.0, 100.0],
      "carry_over": 0.0
    },
    "players": {
      "lambda_max": 1.5,
      "max_exercise_per_quarter": 1.0,
      "employees": [
        {"strike": 0.0, "hedge_fraction": 0.0, "effort_level": 0.0, "required_effort": 0.0, "vesting_per_quarter": 0.25},
        {"strike": 0.0, "hedge_fraction": 0.0, "effort_level": 0.0, "required_effort": 0.0, "vesting_per_quarter": 0.25}
      ]
    },
    "ledgers": {
      "employees": [{"u_e": 1.0}, {"u_e": 1.0}],
      "firm": {"u_c": 1.0}
    },
    "modifiers": {"pi": 1.0, "psi": 1.0, "lam": 1.0, "omega": 1.0},
    "horizon": {"t_c_limit": 1.0, "t_e_limit": 1.0, "h_limit": 1.0, "n_steps": 16, "gamma": 2}
  },
  "coalition": {"source": "derive-from-stage2", "sample_count": 20000},
  "prodfn": {
    "audit": {"n_samples": 256, "tol": 0.001, "fd_step": 0.001},
    "specs": [
      {
        "family": "cobb-douglas-incentive",
        "scale": 1.0,
        "exponents": [0.4, 0.3, 0.6],
        "incentive_coefficient": 0.5,
        "n_factors": 3,
        "domain_box": [[0.0, 2.0], [0.0, 2.0], [0.0, 2.0]]
      },
      {
        "family": "cobb-douglas-incentive",
        "scale": 1.0,
        "exponents": [0.5, 1.0],
        "incentive_coefficient": -0.8,
        "n_factors": 2,
        "domain_box": [[0.0, 4.0], [-1.0, 1.0]]
      },
      {
        "family": "piecewise-vesting",
        "scale": 1.0,
        "exponents": [0.5, 1.0],
        "incentive_coefficient": 1.0,
        "n_factors": 2,
        "domain_box": [[0.0, 4.0], [0.0, 2.0]],
        "vesting_threshold": 0.5
      }
    ]
  }
}
)";
}

inline Scenario demo_scenario() {
  return parse_scenario_text(demo_scenario_text(), "<demo>");
}

}  // namespace ebilab

#endif  // EBILAB_RUNNER_HPP
