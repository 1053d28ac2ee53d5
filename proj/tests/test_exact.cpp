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

#include "mdclt/exact/fixtures.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include <unistd.h>

namespace {

using namespace mdclt::exact;

Partition random_partition(std::mt19937_64& gen, std::size_t n, std::size_t max_blocks) {
  std::uniform_int_distribution<std::size_t> pick(0, max_blocks - 1);
  std::vector<std::size_t> labels(n);
  for (auto& l : labels) l = pick(gen);
  return Partition::from_labels(labels);
}

RationalVector random_function(std::mt19937_64& gen, std::size_t n) {
  std::uniform_int_distribution<int> pick(-9, 9);
  RationalVector f(n);
  for (auto& v : f) v = Rational(pick(gen), 1 + (pick(gen) + 9) % 4);
  return f;
}

FiniteSpace random_space(std::mt19937_64& gen, std::size_t n) {
  std::uniform_int_distribution<int> pick(1, 7);
  RationalVector w(n);
  Rational total = 0;
  for (auto& v : w) {
    v = pick(gen);
    total += v;
  }
  for (auto& v : w) v /= total;
  return FiniteSpace(std::move(w));
}

Permutation random_permutation(std::mt19937_64& gen, std::size_t n) {
  std::vector<std::size_t> image(n);
  std::iota(image.begin(), image.end(), std::size_t{0});
  std::shuffle(image.begin(), image.end(), gen);
  return Permutation(std::move(image));
}

Partition relabel(const Partition& p, const Permutation& pi) {
  // Point pi(x) gets the label of x.
  std::vector<std::size_t> labels(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) labels[pi(x)] = p.block_of(x);
  return Partition::from_labels(labels);
}

Permutation conjugate(const Permutation& s, const Permutation& pi) {
  return pi * s * pi.inverse();
}

TEST(Rational, ParsesAndPrints) {
  EXPECT_EQ(parse_rational("3/6"), Rational(1, 2));
  EXPECT_EQ(parse_rational("-2"), Rational(-2));
  EXPECT_EQ(to_string(Rational(9, 16)), "9/16");
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
}

TEST(FiniteSpace, RejectsInvalidWeights) {
  EXPECT_THROW(FiniteSpace({}), std::invalid_argument);
  EXPECT_THROW(FiniteSpace({Rational(1, 2), Rational(1, 3)}), std::invalid_argument);
  EXPECT_THROW(FiniteSpace({Rational(1), Rational(0)}), std::invalid_argument);
  EXPECT_THROW(FiniteSpace({Rational(3, 2), Rational(-1, 2)}), std::invalid_argument);
  EXPECT_EQ(FiniteSpace::uniform(4).weight(2), Rational(1, 4));
}

TEST(Partition, CanonicalLabelsMakeEqualityStructural) {
  const std::vector<std::size_t> a{7, 7, 3, 3, 9};
  const std::vector<std::size_t> b{0, 0, 1, 1, 2};
  EXPECT_EQ(Partition::from_labels(a), Partition::from_labels(b));
  EXPECT_EQ(Partition::from_labels(a).block_count(), 3u);
}

TEST(Partition, JoinAndMeetAreLatticeOperations) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = random_partition(gen, 12, 4);
    const auto q = random_partition(gen, 12, 4);
    const auto join = partition_join(p, q);
    const auto meet = partition_meet(p, q);
    EXPECT_TRUE(join.refines(p));
    EXPECT_TRUE(join.refines(q));
    EXPECT_TRUE(p.refines(meet));
    EXPECT_TRUE(q.refines(meet));
    EXPECT_EQ(join, partition_join(q, p));
    EXPECT_EQ(meet, partition_meet(q, p));
    EXPECT_EQ(partition_join(p, p), p);
    EXPECT_EQ(partition_meet(p, p), p);
    // Absorption.
    EXPECT_EQ(partition_join(p, meet), p);
    EXPECT_EQ(partition_meet(p, join), p);
  }
}

TEST(Partition, MeetMergesChainsOfOverlappingBlocks) {
  const auto p = Partition::from_blocks(4, {{0, 1}, {2, 3}});
  const auto q = Partition::from_blocks(4, {{0}, {1, 2}, {3}});
  EXPECT_EQ(partition_meet(p, q), Partition::trivial(4));
  EXPECT_EQ(partition_join(p, q), Partition::from_blocks(4, {{0}, {1}, {2}, {3}}));
}

TEST(ConditionalExpectation, TowerPropertyHoldsExactly) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto space = random_space(gen, 10);
    const auto coarse = random_partition(gen, 10, 3);
    const auto fine = partition_join(coarse, random_partition(gen, 10, 3));
    const auto f = random_function(gen, 10);
    EXPECT_EQ(cond_exp(space, cond_exp(space, f, fine), coarse), cond_exp(space, f, coarse));
    EXPECT_TRUE(is_measurable(cond_exp(space, f, coarse), coarse));
    EXPECT_EQ(expectation(space, cond_exp(space, f, coarse)), expectation(space, f));
    // Projection does not increase the L2 norm.
    EXPECT_LE(norm_squared(space, cond_exp(space, f, coarse)), norm_squared(space, f));
  }
}

TEST(ConditionalExpectation, HandComputedWeightedAverage) {
  const FiniteSpace space({Rational(1, 2), Rational(1, 6), Rational(1, 6), Rational(1, 6)});
  const auto p = Partition::from_labels(std::vector<std::size_t>{0, 0, 1, 1});
  const auto q = Partition::from_labels(std::vector<std::size_t>{0, 1, 0, 1});
  const auto f = point_indicator(4, 0);
  // E[1_0 | p] = 3/4 on {0,1}; then averaging over {0,2} gives (1/2*3/4)/(2/3) = 9/16.
  const auto e = cond_exp(space, cond_exp(space, f, p), q);
  EXPECT_EQ(e[0], Rational(9, 16));
  EXPECT_EQ(e[2], Rational(9, 16));
  EXPECT_NE(e[0], expectation(space, f));
}

TEST(Permutation, GroupOperations) {
  const auto r = Permutation::rotation(6, 1);
  EXPECT_EQ(r.pow(6), Permutation::identity(6));
  EXPECT_EQ(r.pow(-1), r.inverse());
  EXPECT_EQ(r.pow(-7), r.inverse());
  EXPECT_EQ((r * r)(4), 0u);
  EXPECT_THROW(Permutation(std::vector<std::size_t>{0, 0, 1}), std::invalid_argument);
}

TEST(FiniteAction, RejectsNonCommutingGenerators) {
  const Permutation swap01(std::vector<std::size_t>{1, 0, 2});
  const Permutation swap12(std::vector<std::size_t>{0, 2, 1});
  EXPECT_THROW(FiniteAction({swap01, swap12}), std::invalid_argument);
}

TEST(FiniteAction, OrbitsOfCoordinateRotations) {
  const std::vector<std::size_t> dims{6, 4};
  const auto action = coordinate_rotations(dims);
  EXPECT_TRUE(is_transitive(action));
  const std::vector<std::size_t> first{0};
  // Rotating the first coordinate only: orbits are the columns.
  EXPECT_EQ(orbit_partition(action, first).block_count(), 4u);
  const std::vector<std::int64_t> steps{2, 2};
  EXPECT_EQ(orbit_partition(coordinate_rotations(dims, steps)).block_count(), 4u);
  EXPECT_EQ(action.group(action.all_generators()).size(), 24u);
}

TEST(FiniteAction, InvariantHullIsInvariantAndRefines) {
  const std::vector<std::size_t> dims{3, 4};
  const auto action = coordinate_rotations(dims);
  const auto p = Partition::from_blocks(12, {{0}, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}});
  const auto hull = invariant_hull(p, action);
  EXPECT_TRUE(hull.refines(p));
  for (const auto& g : action.generators()) EXPECT_TRUE(is_invariant(hull, g));
  EXPECT_EQ(hull, Partition::discrete(12));
}

FiniteAction torus_action() {
  const std::vector<std::size_t> dims{6, 4};
  return coordinate_rotations(dims);
}

Partition residues_mod2() {
  std::vector<std::size_t> labels(24);
  for (std::size_t x = 0; x < 24; ++x) labels[x] = ((x / 4) % 2) * 2 + (x % 4) % 2;
  return Partition::from_labels(labels);
}

TEST(ProjectionIdentities, HoldOnTorus) {
  const auto space = FiniteSpace::uniform(24);
  const auto F = residues_mod2();
  for (const auto& C : {Partition::trivial(24), F}) {
    const auto results = verify_prop_pro(space, torus_action(), F, C);
    ASSERT_EQ(results.size(), 3u);
    for (const auto& r : results) EXPECT_EQ(r.status, Status::Pass) << r.identity;
  }
}

TEST(ProjectionIdentities, ReportHypothesisViolations) {
  const auto space = FiniteSpace::uniform(24);
  auto F = Partition::from_blocks(24, {{0}, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16,
                                            17, 18, 19, 20, 21, 22, 23}});
  auto results = verify_prop_pro(space, torus_action(), F, Partition::trivial(24));
  ASSERT_EQ(results.size(), 1u);
  EXPECT_EQ(results[0].status, Status::PreconditionFailed);

  // C not contained in F.
  results = verify_prop_pro(space, torus_action(), Partition::trivial(24), residues_mod2());
  ASSERT_EQ(results.size(), 1u);
  EXPECT_EQ(results[0].status, Status::PreconditionFailed);
}

TEST(ProjectionIdentities, EquivariantUnderRelabeling) {
  std::mt19937_64 gen(17);
  const auto space = FiniteSpace::uniform(24);
  const auto action = torus_action();
  const auto F = residues_mod2();
  const auto C = Partition::from_labels(std::vector<std::size_t>(24, 0));
  const auto base = verify_prop_pro(space, action, F, C);
  for (int trial = 0; trial < 5; ++trial) {
    const auto pi = random_permutation(gen, 24);
    std::vector<Permutation> gens;
    for (const auto& g : action.generators()) gens.push_back(conjugate(g, pi));
    const auto moved = verify_prop_pro(space, FiniteAction(gens), relabel(F, pi), relabel(C, pi));
    ASSERT_EQ(moved.size(), base.size());
    for (std::size_t k = 0; k < base.size(); ++k) EXPECT_EQ(moved[k].status, base[k].status);
  }
}

TEST(Independence, HoldsForRotationsOfProductGroup) {
  const std::vector<std::size_t> dims{2, 3, 5};
  const auto r = verify_independence(FiniteSpace::uniform(30), coordinate_rotations(dims));
  EXPECT_EQ(r.status, Status::Pass);
}

TEST(Independence, HoldsForRandomRelabelingsOfTheTorus) {
  std::mt19937_64 gen(23);
  const auto action = torus_action();
  for (int trial = 0; trial < 5; ++trial) {
    const auto pi = random_permutation(gen, 24);
    std::vector<Permutation> gens;
    for (const auto& g : action.generators()) gens.push_back(conjugate(g, pi));
    EXPECT_EQ(verify_independence(FiniteSpace::uniform(24), FiniteAction(gens)).status,
              Status::Pass);
  }
}

TEST(Independence, RequiresErgodicity) {
  const std::vector<std::size_t> dims{6, 4};
  const std::vector<std::int64_t> steps{2, 2};
  EXPECT_THROW(verify_independence(FiniteSpace::uniform(24), coordinate_rotations(dims, steps)),
               mdclt::PreconditionError);
}

TEST(Independence, RequiresMeasurePreservation) {
  std::mt19937_64 gen(3);
  const auto space = random_space(gen, 24);
  EXPECT_THROW(verify_independence(space, torus_action()), mdclt::PreconditionError);
}

TEST(LemmaClass, PastGeneratedByOnePointOnCycle) {
  const auto s = Permutation::rotation(6, 1);
  const auto base = generated_past(Partition::from_blocks(6, {{0}, {1, 2, 3, 4, 5}}), s);
  EXPECT_TRUE(pullback(base, s).refines(base));
  EXPECT_EQ(verify_lemma_class(FiniteSpace::uniform(6), s, base).status, Status::Pass);
}

TEST(LemmaClass, RejectsNonMonotoneBase) {
  const auto s = Permutation::rotation(6, 1);
  const auto base = Partition::from_blocks(6, {{0}, {1, 2, 3, 4, 5}});
  EXPECT_THROW(verify_lemma_class(FiniteSpace::uniform(6), s, base), mdclt::PreconditionError);
}

TEST(LemmaClass, RandomInvariantBasesPass) {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = random_permutation(gen, 8);
    const auto base = generated_past(random_partition(gen, 8, 3), s);
    EXPECT_EQ(verify_lemma_class(FiniteSpace::uniform(8), s, base).status, Status::Pass);
  }
}

std::vector<Partition> product_grid_cells() {
  // Z3 x Z4 with nested per-axis partitions.
  const std::vector<std::vector<std::size_t>> a{{0, 0, 0}, {0, 1, 1}, {0, 1, 2}};
  const std::vector<std::vector<std::size_t>> b{{0, 0, 0, 0}, {0, 0, 1, 1}, {0, 1, 2, 3}};
  std::vector<Partition> cells;
  for (const auto& pa : a) {
    for (const auto& pb : b) {
      std::vector<std::size_t> labels;
      for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 4; ++j) labels.push_back(pa[i] * 4 + pb[j]);
      }
      cells.push_back(Partition::from_labels(labels));
    }
  }
  return cells;
}

TEST(CompletelyCommuting, ProductFiltrationCommutes) {
  const FiltrationGrid grid({0, 0}, {3, 3}, product_grid_cells());
  RationalVector wa{Rational(1, 6), Rational(2, 6), Rational(3, 6)};
  RationalVector wb{Rational(1, 10), Rational(2, 10), Rational(3, 10), Rational(4, 10)};
  RationalVector w;
  for (const auto& x : wa) {
    for (const auto& y : wb) w.push_back(x * y);
  }
  EXPECT_TRUE(check_completely_commuting(FiniteSpace(w), grid).holds);
}

TEST(CompletelyCommuting, CrossingPartitionsFailWithWitness) {
  const FiniteSpace space({Rational(1, 2), Rational(1, 6), Rational(1, 6), Rational(1, 6)});
  const auto p = Partition::from_labels(std::vector<std::size_t>{0, 0, 1, 1});
  const auto q = Partition::from_labels(std::vector<std::size_t>{0, 1, 0, 1});
  const FiltrationGrid grid({0, 0}, {2, 2},
                            {Partition::trivial(4), q, p, Partition::discrete(4)});
  const auto report = check_completely_commuting(space, grid);
  ASSERT_FALSE(report.holds);
  ASSERT_TRUE(report.witness.has_value());
  EXPECT_FALSE(report.witness->describe().empty());
}

TEST(CompletelyCommuting, SameGridCommutesUnderUniformWeights) {
  const auto p = Partition::from_labels(std::vector<std::size_t>{0, 0, 1, 1});
  const auto q = Partition::from_labels(std::vector<std::size_t>{0, 1, 0, 1});
  const FiltrationGrid grid({0, 0}, {2, 2},
                            {Partition::trivial(4), q, p, Partition::discrete(4)});
  EXPECT_TRUE(check_completely_commuting(FiniteSpace::uniform(4), grid).holds);
}

TEST(FiltrationGrid, RejectsNonMonotoneCells) {
  EXPECT_THROW(FiltrationGrid({0}, {2}, {Partition::discrete(3), Partition::trivial(3)}),
               std::invalid_argument);
  EXPECT_THROW(FiltrationGrid({0}, {3}, {Partition::trivial(3)}), std::invalid_argument);
}

TEST(FiltrationGrid, StationarityCheckFindsShiftedCell) {
  const auto s = Permutation::rotation(4, 1);
  const FiniteAction action({s});
  const auto inv = Partition::from_labels(std::vector<std::size_t>{0, 1, 0, 1});
  const FiltrationGrid stationary({-1}, {3}, {inv, inv, inv});
  EXPECT_FALSE(find_stationarity_violation(stationary, action).has_value());
  const FiltrationGrid drifting({0}, {2}, {inv, Partition::discrete(4)});
  const auto bad = find_stationarity_violation(drifting, action);
  ASSERT_TRUE(bad.has_value());
  EXPECT_EQ((*bad)[0], 1);
}

TEST(Fixtures, BundledSuitePasses) {
  const auto outcomes = run_fixture_dir(MDCLT_FIXTURE_DIR);
  EXPECT_GE(outcomes.size(), 10u);
  for (const auto& o : outcomes) {
    EXPECT_TRUE(o.passed()) << o.name << ": " << to_json(o).dump();
  }
}

TEST(Fixtures, BrokenFiltrationFailsWithWitness) {
  const auto outcomes = run_fixture_dir(MDCLT_BROKEN_FIXTURE_DIR);
  ASSERT_EQ(outcomes.size(), 1u);
  ASSERT_EQ(outcomes[0].results.size(), 1u);
  EXPECT_EQ(outcomes[0].results[0].status, Status::Fail);
  EXPECT_TRUE(outcomes[0].results[0].witness.has_value());
}

class TempDir {
 public:
  TempDir() : path_(std::filesystem::temp_directory_path() / ("mdclt-" + std::to_string(::getpid()) + "-" + std::to_string(counter_++))) {
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

TEST(Fixtures, EmptyOrMissingDirectoryIsAnError) {
  TempDir dir;
  EXPECT_THROW(run_fixture_dir(dir.path()), FixtureError);
  EXPECT_THROW(run_fixture_dir(dir.path() / "missing"), FixtureError);
}

TEST(Fixtures, MalformedInputIsAnError) {
  TempDir dir;
  std::ofstream(dir.path() / "bad.json") << "{ not json";
  EXPECT_THROW(run_fixture_dir(dir.path()), FixtureError);
  std::ofstream(dir.path() / "bad.json", std::ios::trunc)
      << R"({"name": "x", "check": "prop_pro", "points": 2, "generators": [[0, 1]], "F": [0], "C": [0, 0]})";
  EXPECT_THROW(run_fixture_dir(dir.path()), FixtureError);
}

TEST(Fixtures, PreconditionFailureIsReportedNotThrown) {
  const auto j = nlohmann::json::parse(
      R"({"name": "x", "check": "independence", "points": 4, "generators": [[2, 3, 0, 1], [2, 3, 0, 1]]})");
  const auto outcome = run_fixture(j);
  ASSERT_EQ(outcome.results.size(), 1u);
  EXPECT_EQ(outcome.results[0].status, Status::PreconditionFailed);
  EXPECT_FALSE(outcome.passed());
}

}  // namespace
