// Copyright 2026 The Tactful Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Strategy planning: choose the output strategy set S_out whose perceived
// politeness under the receiver model is closest to what the sender meant,
// using only strategies that survive the channel.
//
// Every planner works over the binary selection x_s of each lexicon strategy
// and honours the same constraint system:
//
//   x_s <= safe(s)                         always
//   x_s = 0 if b_s < 0                     negativity
//   x_Subjunctive + x_Indicative = k_in    subj_ind (k_in counted over S_in)
//   sum_{s not in S_in} x_s <= max_added   max_added
//   x_s = 0 / x_s = 1                      forbidden / required lists
//
// Among plans with equal gap (within 1e-12) the preferred one has fewer
// added strategies, then fewer removed strategies, then the earliest strategy
// list in lexicon order.

#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tactful/channel.hpp"
#include "tactful/error.hpp"
#include "tactful/extract.hpp"
#include "tactful/lexicon.hpp"
#include "tactful/message.hpp"
#include "tactful/perception.hpp"

namespace tactful {

inline constexpr const char* kSubjunctive = "Subjunctive";
inline constexpr const char* kIndicative = "Indicative";

struct Circumstance {
  PerceptionModel sender;
  PerceptionModel receiver;
  ChannelSpec channel;
};

struct ConstraintSet {
  bool negativity = false;
  bool subj_ind = true;
  bool max_added = true;
  StrategySet forbidden;
  StrategySet required;
};

struct PlanProblem {
  StrategySet s_in;
  double target = 0.0;
  ConstraintSet constraints;
  int max_added = 3;
};

struct SolverStats {
  std::uint64_t nodes = 0;
  double seconds = 0.0;
};

struct Plan {
  StrategySet s_out;
  double target = 0.0;
  double achieved = 0.0;
  double gap = 0.0;
  StrategySet added;
  StrategySet removed;
  std::string method;
  SolverStats stats;
  std::optional<std::size_t> retrieved;  // corpus index, retrieval only
};

struct BuildOptions {
  int max_added = 3;
  bool max_added_on = true;
  bool subj_ind = true;
  std::optional<bool> negativity;  // unset: on iff the input reads positive
  StrategySet forbidden;
  StrategySet required;
  std::optional<double> target;
};

inline void ValidateCircumstance(const Circumstance& circ, const StrategyLexicon& lex) {
  if (!circ.sender.covers(lex)) throw Error(ErrorCode::kValidation, "sender model does not cover the lexicon");
  if (!circ.receiver.covers(lex)) {
    throw Error(ErrorCode::kValidation, "receiver model does not cover the lexicon");
  }
  if (!circ.channel.covers(lex)) throw Error(ErrorCode::kValidation, "channel does not cover the lexicon");
}

inline PlanProblem BuildProblem(const StrategySet& s_in, const Circumstance& circ,
                                const StrategyLexicon& lex, const BuildOptions& opts = {}) {
  for (const StrategyId& s : s_in) lex.at(s);
  for (const StrategyId& s : opts.forbidden) lex.at(s);
  for (const StrategyId& s : opts.required) lex.at(s);
  if (opts.max_added < 0) throw Error(ErrorCode::kValidation, "max_added must be non-negative");
  PlanProblem p;
  p.s_in = s_in;
  p.target = opts.target.value_or(Perceive(circ.sender, s_in));
  if (!std::isfinite(p.target)) throw Error(ErrorCode::kValidation, "target must be finite");
  p.max_added = opts.max_added;
  p.constraints.max_added = opts.max_added_on;
  p.constraints.subj_ind = opts.subj_ind;
  p.constraints.negativity =
      opts.negativity.value_or(PolarityOf(circ.sender, s_in) == Polarity::kPositive);
  p.constraints.forbidden = opts.forbidden;
  p.constraints.required = opts.required;
  return p;
}

inline PlanProblem BuildProblem(const Message& m, const Circumstance& circ,
                                const StrategyLexicon& lex, const BuildOptions& opts = {}) {
  return BuildProblem(ExtractStrategies(m, lex).strategies, circ, lex, opts);
}

// Constraint violations of `s_out` for problem `p`; empty means feasible.
inline std::vector<std::string> CheckPlan(const PlanProblem& p, const Circumstance& circ,
                                          const StrategySet& s_out) {
  std::vector<std::string> out;
  const ConstraintSet& c = p.constraints;
  int added = 0;
  for (const StrategyId& s : s_out) {
    if (!circ.channel.IsSafe(s)) out.push_back("'" + s + "' is not channel-safe");
    if (c.negativity && circ.receiver.coefficient(s) < 0) {
      out.push_back("'" + s + "' has a negative receiver coefficient");
    }
    if (c.forbidden.count(s)) out.push_back("'" + s + "' is forbidden");
    if (!p.s_in.count(s)) ++added;
  }
  for (const StrategyId& s : c.required) {
    if (!s_out.count(s)) out.push_back("required '" + s + "' is missing");
  }
  if (c.subj_ind) {
    int want = static_cast<int>(p.s_in.count(kSubjunctive) + p.s_in.count(kIndicative));
    int have = static_cast<int>(s_out.count(kSubjunctive) + s_out.count(kIndicative));
    if (want != have) {
      out.push_back("Subjunctive/Indicative count " + std::to_string(have) + " differs from input count " +
                    std::to_string(want));
    }
  }
  if (c.max_added && added > p.max_added) {
    out.push_back(std::to_string(added) + " added strategies exceed the limit of " +
                  std::to_string(p.max_added));
  }
  return out;
}

namespace planner_detail {

constexpr double kTieTolerance = 1e-12;

// Sorted lexicon indices; the shorter of two lists that agree on a prefix
// comes first.
inline bool LexiconBefore(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct Candidate {
  double gap = std::numeric_limits<double>::infinity();
  int added = 0;
  int removed = 0;
  std::vector<std::size_t> indices;
};

inline bool Better(const Candidate& a, const Candidate& b) {
  if (std::abs(a.gap - b.gap) > kTieTolerance) return a.gap < b.gap;
  if (a.added != b.added) return a.added < b.added;
  if (a.removed != b.removed) return a.removed < b.removed;
  return LexiconBefore(a.indices, b.indices);
}

// The problem restated over lexicon indices, with variables forced by the
// channel, negativity and forbidden/required lists already fixed.
struct Universe {
  std::size_t n = 0;
  std::vector<double> b;
  std::vector<bool> in_input;
  std::vector<int> fixed;  // -1 free, else the forced value
  double intercept = 0.0;
  double target = 0.0;
  int subj = -1;
  int ind = -1;
  int subj_ind_count = -1;  // -1 when the constraint is off
  int max_added = std::numeric_limits<int>::max();
  int input_size = 0;
};

inline Universe BuildUniverse(const PlanProblem& p, const Circumstance& circ, const StrategyLexicon& lex) {
  ValidateCircumstance(circ, lex);
  if (!std::isfinite(p.target)) throw Error(ErrorCode::kValidation, "target must be finite");
  const ConstraintSet& c = p.constraints;
  for (const StrategyId& s : p.s_in) lex.at(s);
  for (const StrategyId& s : c.forbidden) lex.at(s);
  for (const StrategyId& s : c.required) lex.at(s);
  Universe u;
  u.n = lex.size();
  u.intercept = circ.receiver.intercept;
  u.target = p.target;
  u.input_size = static_cast<int>(p.s_in.size());
  if (c.max_added) {
    if (p.max_added < 0) throw Error(ErrorCode::kValidation, "max_added must be non-negative");
    u.max_added = p.max_added;
  }
  for (std::size_t i = 0; i < u.n; ++i) {
    const StrategyId& id = lex[i].id;
    u.b.push_back(circ.receiver.coefficient(id));
    u.in_input.push_back(p.s_in.count(id) > 0);
    bool banned = !circ.channel.IsSafe(id) || c.forbidden.count(id) ||
                  (c.negativity && u.b.back() < 0);
    if (c.required.count(id)) {
      if (banned) {
        throw Error(ErrorCode::kInfeasible,
                    "required strategy '" + id + "' is excluded by the channel or another constraint");
      }
      u.fixed.push_back(1);
    } else {
      u.fixed.push_back(banned ? 0 : -1);
    }
  }
  if (c.subj_ind) {
    auto si = lex.index_of(kSubjunctive);
    auto ii = lex.index_of(kIndicative);
    if (si && ii) {
      u.subj = static_cast<int>(*si);
      u.ind = static_cast<int>(*ii);
      u.subj_ind_count = static_cast<int>(u.in_input[*si]) + static_cast<int>(u.in_input[*ii]);
    }
  }
  return u;
}

inline Plan FinishPlan(const PlanProblem& p, const Circumstance& circ, const StrategyLexicon& lex,
                       const std::vector<std::size_t>& indices, std::string method) {
  Plan plan;
  for (std::size_t i : indices) plan.s_out.insert(lex[i].id);
  plan.target = p.target;
  plan.achieved = Perceive(circ.receiver, plan.s_out);
  plan.gap = std::abs(plan.target - plan.achieved);
  for (const StrategyId& s : plan.s_out) {
    if (!p.s_in.count(s)) plan.added.insert(s);
  }
  for (const StrategyId& s : p.s_in) {
    if (!plan.s_out.count(s)) plan.removed.insert(s);
  }
  plan.method = std::move(method);
  return plan;
}

class BranchAndBound {
 public:
  explicit BranchAndBound(const Universe& u) : u_(u) {
    base_ = u.intercept;
    for (std::size_t i = 0; i < u.n; ++i) {
      if (u.fixed[i] == 1) {
        base_ += u.b[i];
        base_mask_.push_back(i);
        if (!u.in_input[i]) ++base_added_;
      } else if (u.fixed[i] == 0 && u.in_input[i]) {
        ++base_removed_;
      }
      if (u.fixed[i] == -1) order_.push_back(i);
    }
    // Subjunctive/Indicative first so the equality prunes at the top of the
    // tree, then by coefficient magnitude.
    auto rank = [&](std::size_t i) {
      return (static_cast<int>(i) == u.subj || static_cast<int>(i) == u.ind) && u.subj_ind_count >= 0 ? 0 : 1;
    };
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      if (rank(a) != rank(b)) return rank(a) < rank(b);
      return std::abs(u.b[a]) > std::abs(u.b[b]);
    });
  }

  std::optional<Candidate> Solve() {
    if (base_added_ > u_.max_added) return std::nullopt;
    chosen_ = base_mask_;
    Search(0, base_, base_added_, base_removed_);
    if (!std::isfinite(best_.gap)) return std::nullopt;
    return best_;
  }

  std::uint64_t nodes() const { return nodes_; }

 private:
  int SubjIndSelected() const {
    int k = 0;
    for (std::size_t i : chosen_) k += static_cast<int>(i) == u_.subj || static_cast<int>(i) == u_.ind;
    return k;
  }

  // Lower bound on the gap reachable from this node: the interval of sums the
  // remaining free variables can produce, with at most `slots` of the
  // not-in-input ones switched on.
  double Bound(std::size_t depth, double sum, int added) const {
    double pos = 0.0, neg = 0.0;
    std::vector<double> pos_new, neg_new;
    for (std::size_t k = depth; k < order_.size(); ++k) {
      double b = u_.b[order_[k]];
      bool fresh = !u_.in_input[order_[k]];
      if (b > 0) {
        if (fresh) pos_new.push_back(b); else pos += b;
      } else if (b < 0) {
        if (fresh) neg_new.push_back(b); else neg += b;
      }
    }
    auto slots = static_cast<std::size_t>(std::max(0, u_.max_added - added));
    auto take = [slots](std::vector<double>& v, bool descending) {
      double total = 0.0;
      if (v.size() > slots) {
        std::partial_sort(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(slots), v.end(),
                          [descending](double a, double b) { return descending ? a > b : a < b; });
        v.resize(slots);
      }
      for (double x : v) total += x;
      return total;
    };
    double hi = sum + pos + take(pos_new, true);
    double lo = sum + neg + take(neg_new, false);
    if (u_.target > hi) return u_.target - hi;
    if (u_.target < lo) return lo - u_.target;
    return 0.0;
  }

  void Search(std::size_t depth, double sum, int added, int removed) {
    ++nodes_;
    if (added > u_.max_added) return;
    if (u_.subj_ind_count >= 0 && SubjIndDecided(depth) && SubjIndSelected() != u_.subj_ind_count) return;
    if (Bound(depth, sum, added) > best_.gap + kTieTolerance) return;
    if (depth == order_.size()) {
      Candidate c;
      c.gap = std::abs(u_.target - sum);
      c.added = added;
      c.removed = removed;
      c.indices = chosen_;
      std::sort(c.indices.begin(), c.indices.end());
      if (Better(c, best_)) best_ = std::move(c);
      return;
    }
    std::size_t v = order_[depth];
    bool fresh = !u_.in_input[v];
    // Try the branch closer to the target first.
    bool one_first = std::abs(u_.target - (sum + u_.b[v])) < std::abs(u_.target - sum);
    for (int pass = 0; pass < 2; ++pass) {
      bool take = (pass == 0) == one_first;
      if (take) {
        chosen_.push_back(v);
        Search(depth + 1, sum + u_.b[v], added + (fresh ? 1 : 0), removed);
        chosen_.pop_back();
      } else {
        Search(depth + 1, sum, added, removed + (fresh ? 0 : 1));
      }
    }
  }

  bool SubjIndDecided(std::size_t depth) const {
    for (std::size_t k = depth; k < order_.size(); ++k) {
      if (static_cast<int>(order_[k]) == u_.subj || static_cast<int>(order_[k]) == u_.ind) return false;
    }
    return true;
  }

  const Universe& u_;
  double base_ = 0.0;
  int base_added_ = 0;
  int base_removed_ = 0;
  std::vector<std::size_t> base_mask_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> chosen_;
  Candidate best_;
  std::uint64_t nodes_ = 0;
};

inline double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

// Names the constraints whose removal alone makes `p` feasible.
inline std::string DiagnoseInfeasible(const PlanProblem& p, const Circumstance& circ, const StrategyLexicon& lex) {
  std::vector<std::pair<std::string, PlanProblem>> relaxed;
  auto add = [&](const char* name, auto&& edit) {
    PlanProblem q = p;
    edit(q.constraints);
    relaxed.emplace_back(name, std::move(q));
  };
  if (p.constraints.subj_ind) add("subj_ind", [](ConstraintSet& c) { c.subj_ind = false; });
  if (p.constraints.max_added) add("max_added", [](ConstraintSet& c) { c.max_added = false; });
  if (p.constraints.negativity) add("negativity", [](ConstraintSet& c) { c.negativity = false; });
  if (!p.constraints.required.empty()) add("required", [](ConstraintSet& c) { c.required.clear(); });
  if (!p.constraints.forbidden.empty()) add("forbidden", [](ConstraintSet& c) { c.forbidden.clear(); });
  std::string names;
  for (const auto& [name, q] : relaxed) {
    try {
      Universe u = BuildUniverse(q, circ, lex);
      if (!BranchAndBound(u).Solve()) continue;
    } catch (const Error&) {
      continue;
    }
    names += names.empty() ? name : ", " + name;
  }
  std::string msg = "no strategy selection satisfies the constraints";
  if (!names.empty()) msg += " (violated: " + names + ")";
  return msg;
}

}  // namespace planner_detail

// Exact optimum by branch-and-bound. Throws kInfeasible when no selection
// satisfies the constraints.
inline Plan PlanIlp(const PlanProblem& p, const Circumstance& circ, const StrategyLexicon& lex) {
  auto start = std::chrono::steady_clock::now();
  planner_detail::Universe u = planner_detail::BuildUniverse(p, circ, lex);
  planner_detail::BranchAndBound bb(u);
  std::optional<planner_detail::Candidate> best = bb.Solve();
  if (!best) throw Error(ErrorCode::kInfeasible, planner_detail::DiagnoseInfeasible(p, circ, lex));
  Plan plan = planner_detail::FinishPlan(p, circ, lex, best->indices, "ilp");
  plan.stats.nodes = bb.nodes();
  plan.stats.seconds = planner_detail::Seconds(start);
  return plan;
}

// Exhaustive enumeration of every subset of the lexicon; the reference the
// branch-and-bound is checked against.
inline Plan PlanOracle(const PlanProblem& p, const Circumstance& circ, const StrategyLexicon& lex) {
  using planner_detail::Candidate;
  constexpr std::size_t kMaxUniverse = 24;
  if (lex.size() > kMaxUniverse) {
    throw Error(ErrorCode::kUniverseTooLarge,
                "exhaustive planning supports at most 24 strategies, lexicon has " + std::to_string(lex.size()));
  }
  auto start = std::chrono::steady_clock::now();
  ValidateCircumstance(circ, lex);
  const std::size_t n = lex.size();
  const ConstraintSet& c = p.constraints;
  std::uint32_t banned = 0, required = 0, input = 0, subj_ind = 0;
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const StrategyId& id = lex[i].id;
    b[i] = circ.receiver.coefficient(id);
    std::uint32_t bit = 1u << i;
    if (!circ.channel.IsSafe(id) || c.forbidden.count(id) || (c.negativity && b[i] < 0)) banned |= bit;
    if (c.required.count(id)) required |= bit;
    if (p.s_in.count(id)) input |= bit;
    if (id == kSubjunctive || id == kIndicative) subj_ind |= bit;
  }
  // Subset sums from two precomputed halves keep every sum a two-term
  // addition of directly accumulated partial sums.
  const std::size_t lo_bits = n / 2;
  const std::size_t hi_bits = n - lo_bits;
  std::vector<double> lo_sum(std::size_t{1} << lo_bits, 0.0), hi_sum(std::size_t{1} << hi_bits, 0.0);
  for (std::size_t m = 0; m < lo_sum.size(); ++m) {
    for (std::size_t i = 0; i < lo_bits; ++i) {
      if (m >> i & 1) lo_sum[m] += b[i];
    }
  }
  for (std::size_t m = 0; m < hi_sum.size(); ++m) {
    for (std::size_t i = 0; i < hi_bits; ++i) {
      if (m >> i & 1) hi_sum[m] += b[lo_bits + i];
    }
  }
  const int want_subj_ind = std::popcount(input & subj_ind);
  const std::uint32_t lo_mask = (1u << lo_bits) - 1;
  Candidate best;
  std::uint64_t visited = 0;
  for (std::uint64_t m64 = 0; m64 < (std::uint64_t{1} << n); ++m64) {
    auto m = static_cast<std::uint32_t>(m64);
    if (m & banned) continue;
    if ((m & required) != required) continue;
    if (c.subj_ind && std::popcount(m & subj_ind) != want_subj_ind) continue;
    int added = std::popcount(m & ~input);
    if (c.max_added && added > p.max_added) continue;
    ++visited;
    double achieved = circ.receiver.intercept + (lo_sum[m & lo_mask] + hi_sum[m >> lo_bits]);
    Candidate cand;
    cand.gap = std::abs(p.target - achieved);
    cand.added = added;
    cand.removed = std::popcount(input & ~m);
    if (std::abs(cand.gap - best.gap) <= planner_detail::kTieTolerance || cand.gap < best.gap) {
      for (std::size_t i = 0; i < n; ++i) {
        if (m >> i & 1) cand.indices.push_back(i);
      }
      if (planner_detail::Better(cand, best)) best = std::move(cand);
    }
  }
  if (!std::isfinite(best.gap)) throw Error(ErrorCode::kInfeasible, planner_detail::DiagnoseInfeasible(p, circ, lex));
  Plan plan = planner_detail::FinishPlan(p, circ, lex, best.indices, "oracle");
  plan.stats.nodes = visited;
  plan.stats.seconds = planner_detail::Seconds(start);
  return plan;
}

// Replaces each input strategy by the allowed strategy whose receiver
// coefficient is closest to the sender's coefficient for it; a strategy that
// is its own closest match stays. A replacement that would exceed max_added
// drops the strategy instead.
inline Plan PlanGreedy(const PlanProblem& p, const Circumstance& circ, const StrategyLexicon& lex) {
  auto start = std::chrono::steady_clock::now();
  ValidateCircumstance(circ, lex);
  for (const StrategyId& s : p.s_in) lex.at(s);
  const ConstraintSet& c = p.constraints;
  std::vector<std::size_t> safe;
  for (std::size_t i = 0; i < lex.size(); ++i) {
    if (circ.channel.IsSafe(lex[i].id)) safe.push_back(i);
  }
  if (safe.empty()) throw Error(ErrorCode::kNoSafeStrategy, "the channel keeps no strategy");
  auto is_subj_ind = [](const StrategyId& id) { return id == kSubjunctive || id == kIndicative; };
  auto allowed = [&](const StrategyId& id) {
    if (c.forbidden.count(id)) return false;
    if (c.negativity && circ.receiver.coefficient(id) < 0) return false;
    return true;
  };

  StrategySet out;
  StrategySet subj_ind_used;
  int added = 0;
  std::uint64_t steps = 0;
  for (const StrategyId& s : lex.Ordered(p.s_in)) {
    double a = circ.sender.coefficient(s);
    std::optional<std::size_t> pick;
    double pick_diff = std::numeric_limits<double>::infinity();
    bool self_minimizes = false;
    for (std::size_t i : safe) {
      ++steps;
      const StrategyId& cand = lex[i].id;
      if (!allowed(cand)) continue;
      if (c.subj_ind) {
        if (is_subj_ind(s) != is_subj_ind(cand)) continue;
        if (is_subj_ind(cand) && subj_ind_used.count(cand)) continue;
      }
      double diff = std::abs(a - circ.receiver.coefficient(cand));
      if (diff < pick_diff - planner_detail::kTieTolerance) {
        pick = i;
        pick_diff = diff;
        self_minimizes = cand == s;
      } else if (std::abs(diff - pick_diff) <= planner_detail::kTieTolerance && cand == s) {
        self_minimizes = true;
      }
    }
    if (!pick) continue;
    const StrategyId& chosen = self_minimizes ? s : lex[*pick].id;
    if (out.count(chosen)) continue;
    bool fresh = !p.s_in.count(chosen);
    if (fresh && c.max_added && added + 1 > p.max_added) continue;
    out.insert(chosen);
    if (is_subj_ind(chosen)) subj_ind_used.insert(chosen);
    added += fresh ? 1 : 0;
  }
  for (const StrategyId& r : c.required) out.insert(r);
  std::vector<std::string> violations = CheckPlan(p, circ, out);
  if (!violations.empty()) {
    throw Error(ErrorCode::kInfeasible, "greedy plan violates constraints: " + violations.front());
  }
  std::vector<std::size_t> indices;
  for (const StrategyId& s : out) indices.push_back(*lex.index_of(s));
  std::sort(indices.begin(), indices.end());
  Plan plan = planner_detail::FinishPlan(p, circ, lex, indices, "greedy");
  plan.stats.nodes = steps;
  plan.stats.seconds = planner_detail::Seconds(start);
  return plan;
}

// ---- retrieval ---------------------------------------------------------------

// A corpus prepared for similarity search: strategy sets, polarity under the
// judge model and TF-IDF weights over non-marker words, per polarity pool.
class RetrievalIndex {
 public:
  RetrievalIndex(const std::vector<std::string>& corpus, const PerceptionModel& judge,
                 const StrategyLexicon& lex)
      : lex_(&lex), judge_(judge) {
    if (corpus.empty()) throw Error(ErrorCode::kEmptyInput, "retrieval corpus is empty");
    for (const std::string& text : corpus) {
      Message m(text);
      Entry e;
      e.text = text;
      e.strategies = ExtractStrategies(m, lex).strategies;
      e.polarity = PolarityOf(judge, e.strategies);
      for (const std::string& w : NonMarkerWords(m, lex)) ++e.tf[w];
      entries_.push_back(std::move(e));
    }
    for (Polarity pol : {Polarity::kPositive, Polarity::kNegative}) {
      Pool& pool = pools_[static_cast<int>(pol)];
      std::map<std::string, std::size_t> df;
      for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].polarity != pol) continue;
        pool.members.push_back(i);
        for (const auto& [w, count] : entries_[i].tf) ++df[w];
      }
      pool.size = pool.members.size();
      for (const auto& [w, d] : df) pool.idf[w] = Idf(pool.size, d);
      for (std::size_t i : pool.members) {
        Entry& e = entries_[i];
        double norm = 0.0;
        for (const auto& [w, count] : e.tf) {
          double x = static_cast<double>(count) * pool.idf.at(w);
          norm += x * x;
        }
        e.norm = std::sqrt(norm);
      }
    }
  }

  std::size_t size() const { return entries_.size(); }
  const std::string& text(std::size_t i) const { return entries_.at(i).text; }
  const StrategySet& strategies(std::size_t i) const { return entries_.at(i).strategies; }
  Polarity polarity(std::size_t i) const { return entries_.at(i).polarity; }
  const PerceptionModel& judge() const { return judge_; }

  // Cosine similarities of `query` against the members of its polarity pool,
  // in corpus order.
  std::vector<std::pair<std::size_t, double>> Rank(const Message& query, const StrategySet& s_in) const {
    const Pool& pool = pools_[static_cast<int>(PolarityOf(judge_, s_in))];
    std::map<std::string, std::size_t> tf;
    for (const std::string& w : NonMarkerWords(query, *lex_)) ++tf[w];
    std::map<std::string, double> q;
    double qnorm = 0.0;
    for (const auto& [w, count] : tf) {
      auto it = pool.idf.find(w);
      double idf = it == pool.idf.end() ? Idf(pool.size, 0) : it->second;
      double x = static_cast<double>(count) * idf;
      q[w] = x;
      qnorm += x * x;
    }
    qnorm = std::sqrt(qnorm);
    std::vector<std::pair<std::size_t, double>> out;
    for (std::size_t i : pool.members) {
      const Entry& e = entries_[i];
      double dot = 0.0;
      for (const auto& [w, count] : e.tf) {
        auto it = q.find(w);
        if (it != q.end()) dot += it->second * static_cast<double>(count) * pool.idf.at(w);
      }
      double sim = qnorm > 0 && e.norm > 0 ? dot / (qnorm * e.norm) : 0.0;
      out.emplace_back(i, sim);
    }
    return out;
  }

 private:
  struct Entry {
    std::string text;
    StrategySet strategies;
    Polarity polarity = Polarity::kPositive;
    std::map<std::string, std::size_t> tf;
    double norm = 0.0;
  };
  struct Pool {
    std::vector<std::size_t> members;
    std::size_t size = 0;
    std::map<std::string, double> idf;
  };

  static double Idf(std::size_t n, std::size_t df) {
    return std::log((1.0 + static_cast<double>(n)) / (1.0 + static_cast<double>(df))) + 1.0;
  }

  const StrategyLexicon* lex_;
  PerceptionModel judge_;
  std::vector<Entry> entries_;
  Pool pools_[2];
};

struct RetrievalOptions {
  // Corpus entries never retrieved, e.g. the instance itself in
  // leave-one-out evaluation.
  std::vector<std::size_t> exclude;
};

// Takes the strategy set of the most similar same-polarity corpus message,
// filtered to what the channel and constraints allow. Candidates whose
// filtered set still violates a constraint are skipped.
inline Plan PlanRetrieval(const PlanProblem& p, const Circumstance& circ, const Message& query,
                          const RetrievalIndex& index, const StrategyLexicon& lex,
                          const RetrievalOptions& opts = {}) {
  auto start = std::chrono::steady_clock::now();
  ValidateCircumstance(circ, lex);
  auto ranked = index.Rank(query, p.s_in);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  bool any_candidate = false;
  for (const auto& [i, sim] : ranked) {
    if (std::find(opts.exclude.begin(), opts.exclude.end(), i) != opts.exclude.end()) continue;
    any_candidate = true;
    StrategySet filtered;
    for (const StrategyId& s : index.strategies(i)) {
      if (!circ.channel.IsSafe(s) || p.constraints.forbidden.count(s)) continue;
      if (p.constraints.negativity && circ.receiver.coefficient(s) < 0) continue;
      filtered.insert(s);
    }
    if (!CheckPlan(p, circ, filtered).empty()) continue;
    std::vector<std::size_t> indices;
    for (const StrategyId& s : filtered) indices.push_back(*lex.index_of(s));
    std::sort(indices.begin(), indices.end());
    Plan plan = planner_detail::FinishPlan(p, circ, lex, indices, "retrieval");
    plan.retrieved = i;
    plan.stats.nodes = ranked.size();
    plan.stats.seconds = planner_detail::Seconds(start);
    return plan;
  }
  if (!any_candidate) {
    throw Error(ErrorCode::kEmptyPool, "no corpus message has the input's politeness polarity");
  }
  throw Error(ErrorCode::kInfeasible, "no same-polarity corpus message yields a plan within the constraints");
}

inline Plan PlanRetrieval(const PlanProblem& p, const Circumstance& circ, const std::string& query,
                          const RetrievalIndex& index, const StrategyLexicon& lex,
                          const RetrievalOptions& opts = {}) {
  return PlanRetrieval(p, circ, Message(query), index, lex, opts);
}

}  // namespace tactful
