// Copyright 2026 The mdclt Authors.
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

// Exhaustive checks of the sigma-algebra identities behind the projection
// onto the product-type factor. Identities stated "for all f in L^2" are
// checked on an indicator basis, which is complete by linearity.

#pragma once

#include "mdclt/error.hpp"
#include "mdclt/exact/action.hpp"
#include "mdclt/exact/conditional.hpp"
#include "mdclt/exact/filtration.hpp"
#include "mdclt/exact/finite_space.hpp"
#include "mdclt/exact/partition.hpp"

#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace mdclt::exact {

enum class Status { Pass, Fail, PreconditionFailed };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::PreconditionFailed: return "precondition_failed";
  }
  return "unknown";
}

struct IdentityResult {
  std::string identity;
  Status status = Status::Pass;
  std::optional<std::string> witness;
};

inline bool all_pass(const std::vector<IdentityResult>& results) {
  for (const auto& r : results) {
    if (r.status != Status::Pass) return false;
  }
  return true;
}

inline std::string describe(const Partition& p) {
  std::ostringstream os;
  os << '{';
  const auto blocks = p.blocks();
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    os << (b ? "," : "") << '{';
    for (std::size_t i = 0; i < blocks[b].size(); ++i) os << (i ? "," : "") << blocks[b][i];
    os << '}';
  }
  os << '}';
  return os.str();
}

// Projection onto an invariant sub-algebra F versus projection onto J v C,
// where J holds the sets invariant under the whole action and C is a
// sub-algebra of F. Produces one result per identity:
//   (a) f in L^2(J v C)  =>  E[f|F] is (J v C)-measurable
//   (b) f in L^2(F)      =>  E[f|J v C] is F-measurable
//   (c) E[E[f|J v C]|F] = E[E[f|F]|J v C] = E[f | F ^ (J v C)]
// Hypothesis violations come back as a single PreconditionFailed entry.
inline std::vector<IdentityResult> verify_prop_pro(const FiniteSpace& space,
                                                   const FiniteAction& action,
                                                   const Partition& invariant,
                                                   const Partition& sub) {
  const auto n = space.size();
  auto precondition = [](std::string why) {
    return std::vector<IdentityResult>{{"hypotheses", Status::PreconditionFailed, std::move(why)}};
  };
  if (action.size() != n || invariant.size() != n || sub.size() != n) {
    throw std::invalid_argument("verify_prop_pro: inputs live on different spaces");
  }
  if (!action.preserves(space)) return precondition("action does not preserve the weights");
  for (std::size_t k = 0; k < action.dimension(); ++k) {
    if (!is_invariant(invariant, action.generator(k))) {
      return precondition("F is not invariant under generator " + std::to_string(k));
    }
  }
  if (!invariant.refines(sub)) return precondition("C is not contained in F");

  const auto orbits = orbit_partition(action);
  const auto joined = partition_join(orbits, sub);
  const auto common = partition_meet(invariant, joined);

  std::vector<IdentityResult> out;

  IdentityResult a{"E[f|F] is (J v C)-measurable for f in L2(J v C)"};
  for (std::size_t b = 0; b < joined.block_count() && !a.witness; ++b) {
    if (!is_measurable(cond_exp(space, block_indicator(joined, b), invariant), joined)) {
      a.status = Status::Fail;
      a.witness = "f = indicator of (J v C)-block " + std::to_string(b);
    }
  }
  out.push_back(std::move(a));

  IdentityResult b{"E[f|J v C] is F-measurable for f in L2(F)"};
  for (std::size_t blk = 0; blk < invariant.block_count() && !b.witness; ++blk) {
    if (!is_measurable(cond_exp(space, block_indicator(invariant, blk), joined), invariant)) {
      b.status = Status::Fail;
      b.witness = "f = indicator of F-block " + std::to_string(blk);
    }
  }
  out.push_back(std::move(b));

  IdentityResult c{"E[E[f|J v C]|F] = E[E[f|F]|J v C] = E[f|F ^ (J v C)]"};
  for (std::size_t x = 0; x < n && !c.witness; ++x) {
    const auto f = point_indicator(n, x);
    const auto via_joined = cond_exp(space, cond_exp(space, f, joined), invariant);
    const auto via_invariant = cond_exp(space, cond_exp(space, f, invariant), joined);
    const auto direct = cond_exp(space, f, common);
    if (via_joined != via_invariant || via_joined != direct) {
      c.status = Status::Fail;
      c.witness = "f = indicator of point " + std::to_string(x);
    }
  }
  out.push_back(std::move(c));
  return out;
}

// For an ergodic Z^d action, the algebras of sets invariant under the
// sub-actions leaving out one coordinate are independent. Throws
// PreconditionError when the action is not transitive (ergodic at finite
// scale) or does not preserve the weights.
inline IdentityResult verify_independence(const FiniteSpace& space, const FiniteAction& action) {
  if (action.size() != space.size()) {
    throw std::invalid_argument("verify_independence: action and space differ in size");
  }
  if (action.dimension() < 2) {
    throw std::invalid_argument("verify_independence: need at least two generators");
  }
  if (!action.preserves(space)) {
    throw PreconditionError("verify_independence: action does not preserve the weights");
  }
  if (!is_transitive(action)) {
    throw PreconditionError("verify_independence: action is not ergodic (not transitive)");
  }
  const auto d = action.dimension();
  std::vector<Partition> factors;
  for (std::size_t t = 0; t < d; ++t) {
    std::vector<std::size_t> others;
    for (std::size_t k = 0; k < d; ++k) {
      if (k != t) others.push_back(k);
    }
    factors.push_back(orbit_partition(action, others));
  }
  std::vector<RationalVector> mass(d);
  for (std::size_t t = 0; t < d; ++t) {
    mass[t].assign(factors[t].block_count(), Rational(0));
    for (std::size_t x = 0; x < space.size(); ++x) mass[t][factors[t].block_of(x)] += space.weight(x);
  }

  IdentityResult result{"mu(A_1 n ... n A_d) = mu(A_1)...mu(A_d) for invariant blocks"};
  std::vector<std::size_t> choice(d, 0);
  while (true) {
    Rational joint = 0;
    for (std::size_t x = 0; x < space.size(); ++x) {
      bool inside = true;
      for (std::size_t t = 0; t < d && inside; ++t) inside = factors[t].block_of(x) == choice[t];
      if (inside) joint += space.weight(x);
    }
    Rational product = 1;
    for (std::size_t t = 0; t < d; ++t) product *= mass[t][choice[t]];
    if (joint != product) {
      std::ostringstream os;
      os << "blocks (";
      for (std::size_t t = 0; t < d; ++t) os << (t ? "," : "") << choice[t];
      os << "): joint " << to_string(joint) << " vs product " << to_string(product);
      result.status = Status::Fail;
      result.witness = os.str();
      return result;
    }
    std::size_t t = 0;
    while (t < d && ++choice[t] == factors[t].block_count()) choice[t++] = 0;
    if (t == d) break;
  }
  return result;
}

// Coarsest partition containing p and all its pullbacks along s^{-1},
// s^{-2}, ...: the "past" generated by p. Pulling it back along s gives a
// finer partition, so it is a valid base for verify_lemma_class.
inline Partition generated_past(const Partition& p, const Permutation& s) {
  const auto back = s.inverse();
  Partition current = p;
  while (true) {
    auto next = partition_join(p, pullback(current, back));
    if (next == current) return current;
    current = std::move(next);
  }
}

// For the filtration F_n = s^{-n} F_0 (pullback along s^n), the invariant
// sets of s meet F_{+inf} and F_{-inf} in the same sub-algebra. Throws
// PreconditionError when F_1 does not refine F_0.
inline IdentityResult verify_lemma_class(const FiniteSpace& space, const Permutation& s,
                                         const Partition& base) {
  if (s.size() != space.size() || base.size() != space.size()) {
    throw std::invalid_argument("verify_lemma_class: inputs live on different spaces");
  }
  if (!preserves(s, space)) {
    throw PreconditionError("verify_lemma_class: permutation does not preserve the weights");
  }
  if (!pullback(base, s).refines(base)) {
    throw PreconditionError("verify_lemma_class: pullback filtration is not monotone");
  }
  // Increasing side stabilizes once two consecutive terms agree.
  Partition upper = base;
  while (true) {
    auto next = pullback(upper, s);
    if (next == upper) break;
    upper = std::move(next);
  }
  const auto back = s.inverse();
  Partition lower = base;
  while (true) {
    auto next = pullback(lower, back);
    if (next == lower) break;
    lower = std::move(next);
  }
  const auto invariant_sets = orbit_partition(s);
  const auto left = partition_meet(invariant_sets, upper);
  const auto right = partition_meet(invariant_sets, lower);
  IdentityResult result{"K ^ F_inf = K ^ F_-inf"};
  if (left != right) {
    result.status = Status::Fail;
    result.witness = "K ^ F_inf = " + describe(left) + ", K ^ F_-inf = " + describe(right);
  }
  return result;
}

inline IdentityResult verify_completely_commuting(const FiniteSpace& space,
                                                  const FiltrationGrid& grid) {
  IdentityResult result{"E[E[f|F_a]|F_b] = E[f|F_min(a,b)]"};
  const auto report = check_completely_commuting(space, grid);
  if (!report.holds) {
    result.status = Status::Fail;
    result.witness = report.witness->describe();
  }
  return result;
}

}  // namespace mdclt::exact
