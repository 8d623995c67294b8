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
// Finite normal-form games and the solvers used to probe equilibrium claims:
// exhaustive pure-equilibrium search, exact two-player support enumeration,
// sequential best-response dynamics, dominance reports, and coalition
// deviation search.

#ifndef EBILAB_EQUILIBRIUM_HPP
#define EBILAB_EQUILIBRIUM_HPP

#include <algorithm>
#include <bit>
#include <cstddef>
#include <optional>
#include <vector>

#include "ebilab/common.hpp"
#include "ebilab/rational.hpp"

namespace ebilab {

// Payoff tensor layout: payoffs[player * cell_count + flat_cell], with cells
// flattened row-major (last player's action varies fastest).
struct NormalFormGame {
  int n_players = 0;
  std::vector<int> action_counts;
  std::vector<double> payoffs;

  static NormalFormGame zeros(std::vector<int> counts) {
    NormalFormGame g;
    g.n_players = static_cast<int>(counts.size());
    g.action_counts = std::move(counts);
    g.payoffs.assign(static_cast<std::size_t>(g.n_players) * g.cell_count(),
                     0.0);
    return g;
  }

  std::size_t cell_count() const {
    std::size_t cells = 1;
    for (int c : action_counts) cells *= static_cast<std::size_t>(c);
    return cells;
  }

  std::size_t flat_index(const std::vector<int>& profile) const {
    std::size_t idx = 0;
    for (int p = 0; p < n_players; ++p) {
      idx = idx * static_cast<std::size_t>(action_counts[p]) +
            static_cast<std::size_t>(profile[p]);
    }
    return idx;
  }

  double payoff(int player, const std::vector<int>& profile) const {
    return payoffs[static_cast<std::size_t>(player) * cell_count() +
                   flat_index(profile)];
  }

  void set_payoff(int player, const std::vector<int>& profile, double value) {
    payoffs[static_cast<std::size_t>(player) * cell_count() +
            flat_index(profile)] = value;
  }

  // Odometer over cells; returns false after wrapping past the last profile.
  bool next_profile(std::vector<int>& profile) const {
    for (int p = n_players - 1; p >= 0; --p) {
      if (++profile[p] < action_counts[p]) return true;
      profile[p] = 0;
    }
    return false;
  }

  void validate() const {
    if (n_players < 1) throw ConfigError("game needs at least one player");
    if (action_counts.size() != static_cast<std::size_t>(n_players)) {
      throw ConfigError("action_counts size must equal n_players");
    }
    for (int c : action_counts) {
      if (c < 1) throw ConfigError("every player needs at least one action");
    }
    if (payoffs.size() !=
        static_cast<std::size_t>(n_players) * cell_count()) {
      throw ConfigError("payoff tensor size mismatch");
    }
    for (double v : payoffs) require_finite(v, "payoff");
  }

  void validate_profile(const std::vector<int>& profile) const {
    if (profile.size() != static_cast<std::size_t>(n_players)) {
      throw std::invalid_argument("profile length mismatch");
    }
    for (int p = 0; p < n_players; ++p) {
      if (profile[p] < 0 || profile[p] >= action_counts[p]) {
        throw std::invalid_argument("profile action out of range");
      }
    }
  }
};

// All joint actions from which no player gains by a unilateral move.
// Exhaustive, so the result is both sound and complete within the cap.
inline std::vector<std::vector<int>> pure_nash(const NormalFormGame& game,
                                               std::size_t cell_cap = 1000000) {
  game.validate();
  if (game.cell_count() > cell_cap) {
    throw ConfigError("pure_nash: joint action space exceeds cap");
  }
  std::vector<std::vector<int>> found;
  std::vector<int> profile(static_cast<std::size_t>(game.n_players), 0);
  do {
    bool stable = true;
    for (int p = 0; p < game.n_players && stable; ++p) {
      const double here = game.payoff(p, profile);
      std::vector<int> dev = profile;
      for (int a = 0; a < game.action_counts[p]; ++a) {
        if (a == profile[p]) continue;
        dev[p] = a;
        if (game.payoff(p, dev) > here) {
          stable = false;
          break;
        }
      }
    }
    if (stable) found.push_back(profile);
  } while (game.next_profile(profile));
  return found;
}

// One mixed profile of a two-player game, held exactly.
struct MixedEquilibrium {
  std::vector<Rational> p0;  // row player's mixture over all their actions
  std::vector<Rational> p1;  // column player's mixture
  Rational value0;
  Rational value1;

  std::vector<double> p0_doubles() const {
    std::vector<double> out;
    out.reserve(p0.size());
    for (const auto& q : p0) out.push_back(q.get_d());
    return out;
  }
  std::vector<double> p1_doubles() const {
    std::vector<double> out;
    out.reserve(p1.size());
    for (const auto& q : p1) out.push_back(q.get_d());
    return out;
  }
};

struct SupportEnumerationResult {
  std::vector<MixedEquilibrium> equilibria;
  // Set when any indifference system is singular, a non-support action ties
  // the support value, or a support action carries zero probability. The
  // returned equilibria are still sound but may not be exhaustive.
  bool degenerate = false;
};

namespace detail {

// Solves for the opponent mixture q on `support` that makes `mover` exactly
// indifferent across `mover_support`, together with the achieved value.
// pay(i, j) must give the mover's payoff at (own action i, opponent action j).
template <typename Pay>
bool indifference_mixture(const std::vector<int>& mover_support,
                          const std::vector<int>& opp_support, Pay&& pay,
                          std::vector<Rational>& q_out, Rational& value_out,
                          bool& singular_out) {
  const std::size_t k = mover_support.size();
  const std::size_t dim = k + 1;  // k mixture weights + the common value
  std::vector<Rational> a(dim * dim, Rational(0));
  std::vector<Rational> b(dim, Rational(0));
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      a[r * dim + c] = rational_from_double(
          pay(mover_support[r], opp_support[c]));
    }
    a[r * dim + k] = Rational(-1);
  }
  for (std::size_t c = 0; c < k; ++c) a[k * dim + c] = Rational(1);
  b[k] = Rational(1);

  std::vector<Rational> x;
  const auto status = solve_linear_system(a, b, dim, x);
  if (status != LinearSolveStatus::kUnique) {
    singular_out = true;
    return false;
  }
  q_out.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(k));
  value_out = x[k];
  for (const auto& q : q_out) {
    if (q < 0) return false;
  }
  return true;
}

}  // namespace detail

// Equal-size support enumeration with exact rational elimination. Finds every
// equilibrium of a non-degenerate game; degenerate games are flagged and may
// yield a subset or a superset of extreme equilibria.
inline SupportEnumerationResult support_enumeration_2p(
    const NormalFormGame& game) {
  game.validate();
  if (game.n_players != 2) {
    throw ConfigError("support_enumeration_2p: exactly two players required");
  }
  const int m = game.action_counts[0];
  const int n = game.action_counts[1];
  if (m > 8 || n > 8) {
    throw ConfigError("support_enumeration_2p: at most 8 actions per player");
  }

  const auto pay0 = [&](int i, int j) {
    return game.payoff(0, {i, j});
  };
  const auto pay1 = [&](int j, int i) {  // mover is the column player
    return game.payoff(1, {i, j});
  };

  SupportEnumerationResult result;
  const int max_k = std::min(m, n);
  for (int k = 1; k <= max_k; ++k) {
    for (unsigned s0 = 0; s0 < (1u << m); ++s0) {
      if (std::popcount(s0) != k) continue;
      std::vector<int> sup0;
      for (int i = 0; i < m; ++i) {
        if (s0 & (1u << i)) sup0.push_back(i);
      }
      for (unsigned s1 = 0; s1 < (1u << n); ++s1) {
        if (std::popcount(s1) != k) continue;
        std::vector<int> sup1;
        for (int j = 0; j < n; ++j) {
          if (s1 & (1u << j)) sup1.push_back(j);
        }

        bool singular = false;
        std::vector<Rational> q;  // column mixture making rows indifferent
        Rational v0;
        if (!detail::indifference_mixture(sup0, sup1, pay0, q, v0, singular)) {
          result.degenerate |= singular;
          continue;
        }
        std::vector<Rational> p;  // row mixture making columns indifferent
        Rational v1;
        if (!detail::indifference_mixture(sup1, sup0, pay1, p, v1, singular)) {
          result.degenerate |= singular;
          continue;
        }

        // Off-support actions must not beat the support value; exact ties are
        // legal equilibria but mark the game degenerate.
        bool best = true;
        for (int i = 0; i < m && best; ++i) {
          if (s0 & (1u << i)) continue;
          Rational alt(0);
          for (std::size_t c = 0; c < sup1.size(); ++c) {
            alt += rational_from_double(pay0(i, sup1[c])) * q[c];
          }
          if (alt > v0) best = false;
          if (alt == v0) result.degenerate = true;
        }
        for (int j = 0; j < n && best; ++j) {
          if (s1 & (1u << j)) continue;
          Rational alt(0);
          for (std::size_t c = 0; c < sup0.size(); ++c) {
            alt += rational_from_double(pay1(j, sup0[c])) * p[c];
          }
          if (alt > v1) best = false;
          if (alt == v1) result.degenerate = true;
        }
        if (!best) continue;

        MixedEquilibrium eq;
        eq.p0.assign(static_cast<std::size_t>(m), Rational(0));
        eq.p1.assign(static_cast<std::size_t>(n), Rational(0));
        for (std::size_t c = 0; c < sup0.size(); ++c) {
          eq.p0[static_cast<std::size_t>(sup0[c])] = p[c];
          if (p[c] == 0) result.degenerate = true;
        }
        for (std::size_t c = 0; c < sup1.size(); ++c) {
          eq.p1[static_cast<std::size_t>(sup1[c])] = q[c];
          if (q[c] == 0) result.degenerate = true;
        }
        eq.value0 = v0;
        eq.value1 = v1;

        const bool duplicate =
            std::any_of(result.equilibria.begin(), result.equilibria.end(),
                        [&](const MixedEquilibrium& other) {
                          return other.p0 == eq.p0 && other.p1 == eq.p1;
                        });
        if (!duplicate) result.equilibria.push_back(std::move(eq));
      }
    }
  }
  return result;
}

struct DynamicsResult {
  // Profile after each completed round; the starting profile is first.
  std::vector<std::vector<int>> trajectory;
  bool converged = false;
  int rounds = 0;
};

// Sequential best response in fixed player order; ties break to the lowest
// action index, so the dynamic is fully deterministic.
inline DynamicsResult best_response_dynamics(const NormalFormGame& game,
                                             std::vector<int> start,
                                             int max_iter) {
  game.validate();
  game.validate_profile(start);
  if (max_iter < 1) throw ConfigError("best_response_dynamics: max_iter >= 1");

  DynamicsResult out;
  out.trajectory.push_back(start);
  std::vector<int> profile = std::move(start);
  for (int round = 0; round < max_iter; ++round) {
    const std::vector<int> before = profile;
    for (int p = 0; p < game.n_players; ++p) {
      int best_action = 0;
      double best_value = 0.0;
      std::vector<int> probe = profile;
      for (int a = 0; a < game.action_counts[p]; ++a) {
        probe[p] = a;
        const double v = game.payoff(p, probe);
        if (a == 0 || v > best_value) {
          best_value = v;
          best_action = a;
        }
      }
      profile[p] = best_action;
    }
    out.trajectory.push_back(profile);
    out.rounds = round + 1;
    if (profile == before) {
      out.converged = true;
      break;
    }
  }
  return out;
}

// A dominant action weakly beats every alternative against every opponent
// profile and strictly beats at least one alternative somewhere. Players
// with a single action report none: there is nothing to dominate.
inline std::vector<std::optional<int>> dominant_strategy_report(
    const NormalFormGame& game) {
  game.validate();
  std::vector<std::optional<int>> report(
      static_cast<std::size_t>(game.n_players));
  for (int p = 0; p < game.n_players; ++p) {
    if (game.action_counts[p] < 2) continue;
    for (int d = 0; d < game.action_counts[p]; ++d) {
      bool weakly_best = true;
      bool strict_somewhere = false;
      std::vector<int> profile(static_cast<std::size_t>(game.n_players), 0);
      do {
        if (profile[p] != 0) continue;  // opponent profiles only, once each
        std::vector<int> with_d = profile;
        with_d[p] = d;
        const double vd = game.payoff(p, with_d);
        for (int a = 0; a < game.action_counts[p] && weakly_best; ++a) {
          if (a == d) continue;
          with_d[p] = a;
          const double va = game.payoff(p, with_d);
          if (vd < va) weakly_best = false;
          if (vd > va) strict_somewhere = true;
        }
      } while (game.next_profile(profile) && weakly_best);
      if (weakly_best && strict_somewhere) {
        report[static_cast<std::size_t>(p)] = d;
        break;
      }
    }
  }
  return report;
}

struct JointDeviation {
  std::vector<int> players;      // ascending member ids
  std::vector<int> new_actions;  // per member, same order
};

// First coalition (size >= 2, smallest first, lexicographic members) whose
// joint re-selection strictly improves every member.
inline std::optional<JointDeviation> joint_improvability(
    const NormalFormGame& game, const std::vector<int>& profile,
    int max_coalition_size = 2) {
  game.validate();
  game.validate_profile(profile);
  const int n = game.n_players;
  const int cap = std::min(max_coalition_size, n);

  std::vector<double> base(static_cast<std::size_t>(n));
  for (int p = 0; p < n; ++p) base[static_cast<std::size_t>(p)] = game.payoff(p, profile);

  for (int size = 2; size <= cap; ++size) {
    std::vector<int> members(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) members[static_cast<std::size_t>(i)] = i;
    while (true) {
      // Odometer over the members' joint actions.
      std::vector<int> actions(static_cast<std::size_t>(size), 0);
      while (true) {
        bool is_current = true;
        for (int i = 0; i < size; ++i) {
          if (actions[static_cast<std::size_t>(i)] !=
              profile[static_cast<std::size_t>(members[static_cast<std::size_t>(i)])]) {
            is_current = false;
            break;
          }
        }
        if (!is_current) {
          std::vector<int> candidate = profile;
          for (int i = 0; i < size; ++i) {
            candidate[static_cast<std::size_t>(members[static_cast<std::size_t>(i)])] =
                actions[static_cast<std::size_t>(i)];
          }
          bool all_gain = true;
          for (int i = 0; i < size && all_gain; ++i) {
            const int member = members[static_cast<std::size_t>(i)];
            if (game.payoff(member, candidate) <=
                base[static_cast<std::size_t>(member)]) {
              all_gain = false;
            }
          }
          if (all_gain) {
            return JointDeviation{members, actions};
          }
        }
        int slot = size - 1;
        while (slot >= 0) {
          if (++actions[static_cast<std::size_t>(slot)] <
              game.action_counts[members[static_cast<std::size_t>(slot)]]) {
            break;
          }
          actions[static_cast<std::size_t>(slot)] = 0;
          --slot;
        }
        if (slot < 0) break;
      }
      // Next combination of member ids.
      int i = size - 1;
      while (i >= 0 && members[static_cast<std::size_t>(i)] == n - size + i) --i;
      if (i < 0) break;
      ++members[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < size; ++j) {
        members[static_cast<std::size_t>(j)] =
            members[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
  }
  return std::nullopt;
}

}  // namespace ebilab

#endif  // EBILAB_EQUILIBRIUM_HPP
