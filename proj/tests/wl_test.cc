// Copyright 2026 The milpgnn Authors
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

#include <algorithm>
#include <set>

#include "gtest/gtest.h"
#include "milpgnn/generators.h"
#include "milpgnn/milp_graph.h"
#include "milpgnn/rng.h"
#include "milpgnn/wl.h"
#include "test_util.h"

namespace milpgnn {
namespace {

using Partition = std::vector<std::vector<int>>;

std::set<std::vector<int>> AsSet(const Partition& p) {
  return {p.begin(), p.end()};
}

MilpGraph WithRandom(const MilpGraph& g, std::vector<double> v,
                     std::vector<double> w) {
  return MilpGraph(g.edges(), g.v_features(), g.w_features(),
                   RandomFeatures{std::move(v), std::move(w)});
}

std::vector<MilpInstance> MixedInstances(int d1_count, int d2_count) {
  GenConfig cfg;
  cfg.seed = 99;
  cfg.count = d1_count;
  std::vector<MilpInstance> out = *GenerateD1(cfg);
  cfg.variant = Variant::kD2;
  cfg.count = d2_count;
  const auto d2 = *GenerateD2(cfg);
  out.insert(out.end(), d2.begin(), d2.end());
  return out;
}

// True when every block of fine lies inside one block of coarse.
bool Refines(const std::vector<int>& fine, const std::vector<int>& coarse) {
  for (size_t a = 0; a < fine.size(); ++a) {
    for (size_t b = 0; b < fine.size(); ++b) {
      if (fine[a] == fine[b] && coarse[a] != coarse[b]) return false;
    }
  }
  return true;
}

TEST(RefineColorsTest, TwoVariableExampleIsDiscrete) {
  const ColoringResult r = RefineColors(EncodeGraph(TwoVariableExample()));
  EXPECT_TRUE(r.is_discrete);
  EXPECT_EQ(r.v_partition.size(), 2u);
  EXPECT_EQ(r.w_partition.size(), 2u);
  // The w's differ from the start; the v's only after one round.
  EXPECT_NE(r.history[0].w[0], r.history[0].w[1]);
  EXPECT_EQ(r.history[0].v[0], r.history[0].v[1]);
  EXPECT_NE(r.history[1].v[0], r.history[1].v[1]);
}

TEST(RefineColorsTest, CycleGraphsKeepOneColorPerSide) {
  const auto [first, second] = CycleCounterexamplePair();
  for (const MilpInstance* inst : {&first, &second}) {
    const ColoringResult r = RefineColors(EncodeGraph(*inst));
    EXPECT_FALSE(r.is_discrete);
    for (const RoundColors& round : r.history) {
      EXPECT_EQ(std::set<int>(round.v.begin(), round.v.end()).size(), 1u);
      EXPECT_EQ(std::set<int>(round.w.begin(), round.w.end()).size(), 1u);
    }
  }
}

TEST(RefineColorsTest, DistinctRandomFeaturesSeparateAtRoundZero) {
  const MilpGraph g = WithRandom(EncodeGraph(CycleCounterexamplePair().first),
                                 {0.1, 0.2, 0.3, 0.4, 0.5, 0.6},
                                 {0.15, 0.25, 0.35, 0.45, 0.55, 0.65});
  const ColoringResult r = RefineColors(g);
  EXPECT_TRUE(r.is_discrete);
  const auto& h0 = r.history[0];
  EXPECT_EQ(std::set<int>(h0.v.begin(), h0.v.end()).size(), 6u);
  EXPECT_EQ(std::set<int>(h0.w.begin(), h0.w.end()).size(), 6u);
}

TEST(RefineColorsTest, RepeatedRandomFeatureCanStayFoldable) {
  const MilpGraph g = WithRandom(EncodeGraph(CycleCounterexamplePair().first),
                                 std::vector<double>(6, 0.5),
                                 std::vector<double>(6, 0.5));
  EXPECT_TRUE(IsFoldable(g));
}

TEST(IsFoldableTest, Verdicts) {
  EXPECT_FALSE(IsFoldable(EncodeGraph(TwoVariableExample())));
  EXPECT_TRUE(IsFoldable(EncodeGraph(CycleCounterexamplePair().first)));
  EXPECT_TRUE(IsFoldable(EncodeGraph(CycleCounterexamplePair().second)));
  auto one = MilpInstance::Create(*SparseMatrix::FromTriplets(1, 1, {{0, 0, 2.0}}),
                                  {1.0}, {Sense::kLe}, {1.0}, {Bound::Finite(0)},
                                  {Bound::Finite(4)}, {true});
  EXPECT_FALSE(IsFoldable(EncodeGraph(*one)));
}

TEST(GraphsEquivalentTest, CyclePairIsIndistinguishable) {
  const auto [first, second] = CycleCounterexamplePair();
  EXPECT_TRUE(*GraphsEquivalent(EncodeGraph(first), EncodeGraph(second)));
  EXPECT_TRUE(*GraphsWEquivalent(EncodeGraph(first), EncodeGraph(second)));
}

TEST(GraphsEquivalentTest, Reflexive) {
  for (const MilpInstance& inst : MixedInstances(10, 4)) {
    const MilpGraph g = EncodeGraph(inst);
    EXPECT_TRUE(*GraphsEquivalent(g, g));
    EXPECT_TRUE(*GraphsWEquivalent(g, g));
  }
}

TEST(GraphsEquivalentTest, DistinctD1SamplesAreSeparated) {
  GenConfig cfg;
  cfg.seed = 4;
  cfg.count = 20;
  const auto d1 = *GenerateD1(cfg);
  for (size_t k = 0; k + 1 < d1.size(); k += 2) {
    EXPECT_FALSE(*GraphsEquivalent(EncodeGraph(d1[k]), EncodeGraph(d1[k + 1])));
  }
}

TEST(GraphsEquivalentTest, SwappedCopyIsEquivalentButNotIndexWise) {
  const MilpGraph g = EncodeGraph(TwoVariableExample());
  const MilpGraph swapped = *ApplyPermutation(g, *Permutation::Create({0, 1}, {1, 0}));
  EXPECT_TRUE(*GraphsEquivalent(g, swapped));
  EXPECT_FALSE(*GraphsWEquivalent(g, swapped));
}

TEST(GraphsEquivalentTest, RejectsShapeMismatch) {
  const MilpGraph a = EncodeGraph(TwoVariableExample());
  const MilpGraph b = EncodeGraph(CycleCounterexamplePair().first);
  EXPECT_FALSE(GraphsEquivalent(a, b).ok());
  EXPECT_FALSE(GraphsWEquivalent(a, b).ok());
}

TEST(CheckFoldPartitionTest, Examples) {
  const auto [first, second] = CycleCounterexamplePair();
  EXPECT_TRUE(*CheckFoldPartition(first, RefineColors(EncodeGraph(first))));
  const MilpInstance two = TwoVariableExample();
  EXPECT_TRUE(*CheckFoldPartition(two, RefineColors(EncodeGraph(two))));

  const Partition all_v = {{0, 1, 2, 3, 4, 5}};
  const Partition split_w = {{0, 1, 2}, {3, 4, 5}};
  EXPECT_TRUE(*CheckFoldPartition(first, all_v, {{0, 1, 2, 3, 4, 5}}));
  EXPECT_FALSE(*CheckFoldPartition(second, all_v, split_w));
}

TEST(CheckFoldPartitionTest, RejectsBadPartitions) {
  const MilpInstance first = CycleCounterexamplePair().first;
  EXPECT_FALSE(CheckFoldPartition(first, {{0, 1, 2}}, {{0, 1, 2, 3, 4, 5}}).ok());
  EXPECT_FALSE(
      CheckFoldPartition(first, {{0, 1, 2, 3, 4, 5}, {0}}, {{0, 1, 2, 3, 4, 5}}).ok());
  EXPECT_FALSE(CheckFoldPartition(first, RefineColors(EncodeGraph(TwoVariableExample())))
                   .ok());
}

TEST(WlProperty, FixedPointReachedWithinMPlusNRounds) {
  for (const MilpInstance& inst : MixedInstances(40, 20)) {
    const MilpGraph g = EncodeGraph(inst);
    const int limit = g.m() + g.n();
    WlOptions at{limit, 0.0};
    WlOptions beyond{limit + 1, 0.0};
    const ColoringResult a = RefineColors(g, at);
    const ColoringResult b = RefineColors(g, beyond);
    EXPECT_LE(a.rounds, limit);
    EXPECT_EQ(AsSet(a.v_partition), AsSet(b.v_partition));
    EXPECT_EQ(AsSet(a.w_partition), AsSet(b.w_partition));
  }
}

TEST(WlProperty, PermutationInvariance) {
  Rng rng(17);
  for (const MilpInstance& inst : MixedInstances(30, 10)) {
    const MilpGraph g = EncodeGraph(inst);
    const Permutation p = testing::RandomPermutation(rng, g.m(), g.n());
    const MilpGraph h = *ApplyPermutation(g, p);
    EXPECT_EQ(IsFoldable(h), IsFoldable(g));
    EXPECT_TRUE(*GraphsEquivalent(g, h));
  }
}

TEST(WlProperty, PartitionDefinitionAgreesAtFixedPoint) {
  for (const MilpInstance& inst : MixedInstances(60, 20)) {
    const ColoringResult r = RefineColors(EncodeGraph(inst));
    EXPECT_TRUE(*CheckFoldPartition(inst, r));
    const bool nontrivial = r.v_partition.size() < static_cast<size_t>(inst.num_constraints()) ||
                            r.w_partition.size() < static_cast<size_t>(inst.num_variables());
    EXPECT_EQ(IsFoldable(EncodeGraph(inst)), nontrivial);
    EXPECT_EQ(r.is_discrete, !nontrivial);
  }
}

TEST(WlProperty, RefinementIsMonotone) {
  for (const MilpInstance& inst : MixedInstances(30, 10)) {
    const ColoringResult r = RefineColors(EncodeGraph(inst));
    for (size_t k = 1; k < r.history.size(); ++k) {
      EXPECT_TRUE(Refines(r.history[k].v, r.history[k - 1].v));
      EXPECT_TRUE(Refines(r.history[k].w, r.history[k - 1].w));
    }
  }
}

TEST(WlProperty, Deterministic) {
  for (const MilpInstance& inst : MixedInstances(10, 4)) {
    const ColoringResult a = RefineColors(EncodeGraph(inst));
    const ColoringResult b = RefineColors(EncodeGraph(inst));
    EXPECT_EQ(a.v_colors, b.v_colors);
    EXPECT_EQ(a.w_colors, b.w_colors);
    EXPECT_EQ(a.v_partition, b.v_partition);
    EXPECT_EQ(a.w_partition, b.w_partition);
  }
}

TEST(WlProperty, PartitionsCoverIndices) {
  for (const MilpInstance& inst : MixedInstances(10, 4)) {
    const ColoringResult r = RefineColors(EncodeGraph(inst));
    std::vector<int> seen;
    for (const auto& block : r.w_partition) seen.insert(seen.end(), block.begin(), block.end());
    std::sort(seen.begin(), seen.end());
    ASSERT_EQ(static_cast<int>(seen.size()), inst.num_variables());
    for (int j = 0; j < inst.num_variables(); ++j) EXPECT_EQ(seen[j], j);
  }
}

}  // namespace
}  // namespace milpgnn
