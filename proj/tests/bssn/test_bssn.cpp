#include <gtest/gtest.h>

#include <cmath>

#include "../support/bssn_fixtures.hpp"
#include "../support/inversion_suite.hpp"

namespace wai {
namespace {

using testing::make_rig;

Sample labelled(std::vector<double> x, Category c, std::vector<double> v = {}) {
  Sample s;
  s.x = std::move(x);
  s.v = v.empty() ? s.x : std::move(v);
  s.category = c;
  return s;
}

TEST(Wilson, AllSuccessesClosedForm) {
  // At p = 1 the lower bound reduces to n / (n + z^2).
  const double z = 1.645;
  EXPECT_NEAR(wilson_lower_bound(100, 100), 100.0 / (100.0 + z * z), 1e-12);
  EXPECT_NEAR(wilson_lower_bound(100, 100), 0.97365, 5e-6);
}

TEST(Wilson, HalfIsBelowHalf) { EXPECT_LT(wilson_lower_bound(50, 100), 0.5); }

TEST(Wilson, ConsistentAsSamplesGrow) {
  EXPECT_GT(wilson_lower_bound(1e7, 1e7), 0.9999997);
  EXPECT_EQ(wilson_lower_bound(0, 0), 0.0);
  double prev = 0.0;
  for (double n : {10.0, 100.0, 1000.0, 10000.0}) {
    const double b = wilson_lower_bound(n, n);
    EXPECT_GT(b, prev);
    prev = b;
  }
}

TEST(Wilson, RiskRatioWeighsUnpermissibleSamples) {
  LabelCounts c{};
  c[0] = 99;  // HS
  c[2] = 1;   // H'
  const auto e = purity_from_counts(c, 10.0);
  EXPECT_EQ(e.label, Category::HS);
  EXPECT_NEAR(e.bound, wilson_lower_bound(99, 109), 1e-15);
  EXPECT_NEAR(purity_from_counts(c, 1.0).bound, wilson_lower_bound(99, 100), 1e-15);
  // H' majority is not discounted.
  LabelCounts d{};
  d[0] = 1;
  d[2] = 99;
  EXPECT_NEAR(purity_from_counts(d, 10.0).bound, wilson_lower_bound(99, 100), 1e-15);
  // Ties go to the more severe label.
  LabelCounts tie{};
  tie[0] = tie[1] = 5;
  EXPECT_EQ(purity_from_counts(tie, 10.0).label, Category::HSPrime);
}

TEST(Params, Validation) {
  BssnParams p;
  EXPECT_NO_THROW(p.validate());
  for (double eps : {0.5, 1.0, 0.3}) {
    auto q = p;
    q.epsilon = eps;
    EXPECT_THROW(q.validate(), std::invalid_argument);
  }
  auto q = p;
  q.risk_ratio = 0.5;
  EXPECT_THROW(q.validate(), std::invalid_argument);
  q = p;
  q.staleness_window = 0;
  EXPECT_THROW(q.validate(), std::invalid_argument);
}

BssnAgent linear_agent(double lo, double hi, const std::string& constraints, BssnParams params = {}) {
  auto rig = make_rig(testing::doubling(lo, hi), constraints);
  return BssnAgent(0, std::move(rig.sut), rig.checker, params, 99);
}

TEST(RunRound, LinearSutMatchesClosedForm) {
  BssnParams p;
  p.round_budget = 1000;
  auto agent = linear_agent(0.0, 5.0, "lr hard v0 <= 4\n", p);
  const auto round = agent.run_round(Box{{0.0, 5.0}}, 0);
  ASSERT_EQ(round.size(), 1000u);
  std::size_t bad = 0;
  for (const auto& s : round.samples) {
    const bool over = 2.0 * s.x[0] - 4.0 > kHardTolerance;
    bad += (s.category == Category::HPrime) != over;
    EXPECT_DOUBLE_EQ(s.v[0], 2.0 * s.x[0]);
  }
  EXPECT_EQ(bad, 0u);
  EXPECT_TRUE(agent.gate().log().empty());
  EXPECT_EQ(agent.sut().proposal_count(), 0u);
  EXPECT_EQ(agent.prober().count(ProbeKind::Round), 1000u);
}

TEST(RunRound, ZeroBudgetAndPermissiveSystem) {
  BssnParams p;
  p.round_budget = 1;
  auto agent = linear_agent(0.0, 5.0, "", p);
  p.round_budget = 200;
  agent.set_params(p);
  const auto round = agent.run_round(Box{{0.0, 5.0}}, 0);
  for (const auto& s : round.samples) EXPECT_EQ(s.category, Category::HS);
  // M = 0 is outside the parameter range, so the empty round is exercised through compression.
  TestRound empty;
  EXPECT_TRUE(compress_inputs(empty).empty());
}

TEST(RunRound, RegionMustLieInInputSpace) {
  auto agent = linear_agent(0.0, 5.0, "");
  EXPECT_THROW(agent.run_round(Box{{-1.0, 5.0}}, 0), std::invalid_argument);
  EXPECT_THROW(agent.run_round(Box{{0.0, 1.0}, {0.0, 1.0}}, 0), std::invalid_argument);
}

TEST(RunRound, FaultTruncatesRound) {
  auto spec = testing::doubling(0.0, 5.0);
  spec.fault_rate = 0.05;
  spec.seed = 4;
  auto rig = make_rig(spec, "");
  BssnAgent agent(0, std::move(rig.sut), rig.checker, {}, 1);
  const auto round = agent.run_round(Box{{0.0, 5.0}}, 3);
  ASSERT_TRUE(round.fault.has_value());
  EXPECT_LT(round.size(), 500u);
  EXPECT_EQ(agent.prober().count(ProbeKind::Round), round.size() + 1);
  for (const auto& s : round.samples) EXPECT_FALSE(s.fault);
}

TEST(Compress, BoundingBoxes) {
  TestRound r;
  r.samples = {labelled({0.1, 0.2}, Category::HS), labelled({0.4, 0.3}, Category::HS)};
  auto cs = compress_inputs(r);
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs[0].box, (Box{{0.1, 0.4}, {0.2, 0.3}}));
  EXPECT_EQ(cs[0].support, 2u);

  TestRound one;
  one.samples = {labelled({0.7}, Category::HPrime)};
  cs = compress_inputs(one);
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs[0].box[0].lo, cs[0].box[0].hi);

  TestRound acts;
  acts.samples = {labelled({0.0}, Category::HPrime, {1.0}), labelled({0.0}, Category::HPrime, {3.0})};
  cs = compress_actions(acts);
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs[0].space, SpaceTag::Action);
  EXPECT_EQ(cs[0].box, (Box{{1.0, 3.0}}));
}

TEST(Compress, MixedSplitSupportsByRelabelling) {
  Rng rng(8);
  TestRound r;
  for (int i = 0; i < 1000; ++i)
    r.samples.push_back(labelled({rng.uniform(), rng.uniform()}, i % 5 < 3 ? Category::HS : Category::HPrime));
  // Brute-force recount independent of the operator.
  std::size_t hs = 0, hp = 0;
  for (const auto& s : r.samples) (s.category == Category::HS ? hs : hp)++;
  const auto cs = compress_inputs(r);
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(cs[0].support, hs);
  EXPECT_EQ(cs[1].support, hp);
  EXPECT_EQ(hs, 600u);
  EXPECT_EQ(hp, 400u);
}

TEST(Compress, BoundingBoxMinimality) {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    TestRound r;
    const int n = 1 + static_cast<int>(rng.uniform_int(0, 60));
    for (int i = 0; i < n; ++i)
      r.samples.push_back(labelled({rng.uniform(-3, 3), rng.uniform(0, 1), rng.uniform(5, 6)},
                                   static_cast<Category>(rng.uniform_int(0, 2))));
    for (const auto& c : compress_inputs(r)) {
      for (std::size_t d = 0; d < 3; ++d) {
        bool touches_lo = false, touches_hi = false;
        for (const auto& s : r.samples) {
          if (s.category != c.label) continue;
          EXPECT_TRUE(c.box.contains(s.x));
          touches_lo = touches_lo || s.x[d] == c.box[d].lo;
          touches_hi = touches_hi || s.x[d] == c.box[d].hi;
        }
        EXPECT_TRUE(touches_lo && touches_hi);
      }
    }
  }
}

TEST(Compress, LinearRoundActionBox) {
  BssnParams p;
  p.round_budget = 1000;
  auto agent = linear_agent(0.0, 5.0, "lr hard v0 <= 4\n", p);
  const auto cs = compress_actions(agent.run_round(Box{{0.0, 5.0}}, 0));
  bool found = false;
  for (const auto& c : cs) {
    if (c.label != Category::HPrime) continue;
    found = true;
    EXPECT_GT(c.box[0].lo, 4.0);
    EXPECT_LE(c.box[0].hi, 10.0);
  }
  EXPECT_TRUE(found);
}

TEST(EstimateConfidence, PureAndMixedBoxes) {
  auto rig = make_rig(testing::doubling(0.0, 5.0), "lr hard v0 <= 4\n");
  Rng rng(3);
  Cluster pure{SpaceTag::Input, Box{{0.0, 1.0}}, Category::HS};
  EXPECT_NEAR(estimate_confidence(pure, *rig.prober, 100, rng, 10.0), 100.0 / (100.0 + 1.645 * 1.645), 1e-12);
  Cluster mixed{SpaceTag::Input, Box{{1.0, 3.0}}, Category::HS};
  EXPECT_LT(estimate_confidence(mixed, *rig.prober, 100, rng, 10.0), 0.6);
  EXPECT_EQ(rig.prober->count(ProbeKind::Confidence), 200u);
  Cluster action{SpaceTag::Action, Box{{0.0, 1.0}}, Category::HS};
  EXPECT_THROW(estimate_confidence(action, *rig.prober, 10, rng, 10.0), std::invalid_argument);
  EXPECT_THROW(estimate_confidence(pure, *rig.prober, 0, rng, 10.0), std::invalid_argument);
}

TEST(EstimateConfidence, FaultIsFailSafe) {
  auto spec = testing::doubling(0.0, 5.0);
  spec.fault_rate = 0.5;
  auto rig = make_rig(spec, "");
  Rng rng(3);
  Cluster c{SpaceTag::Input, Box{{0.0, 1.0}}, Category::HS};
  EXPECT_EQ(estimate_confidence(c, *rig.prober, 20, rng, 10.0), 0.0);
}

void expect_exact_cover(const std::vector<Cluster>& leaves, const Box& parent) {
  double vol = 0.0;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    EXPECT_TRUE(parent.contains(leaves[i].box));
    vol += leaves[i].box.volume();
    for (std::size_t j = i + 1; j < leaves.size(); ++j) EXPECT_FALSE(leaves[i].box.overlaps(leaves[j].box));
  }
  EXPECT_NEAR(vol, parent.volume(), 1e-12);
}

TEST(Partition, HalfSplitOnDyadicBoundary) {
  auto rig = testing::half_split_rig(0.5);
  BssnParams p;
  Rng rng(5);
  const Cluster parent{SpaceTag::Input, Box{{0.0, 1.0}, {0.0, 1.0}}, Category::HS};
  const auto res = partition(parent, *rig.prober, p, rng, 0);
  expect_exact_cover(res.leaves, parent.box);
  const auto a = testing::audit_half_split(res.leaves, 0.5, p);
  EXPECT_EQ(a.impure_settled, 0u);
  EXPECT_EQ(a.misplaced_flagged, 0u);
  EXPECT_EQ(res.probes, rig.prober->count(ProbeKind::Partition));
}

TEST(Partition, HalfSplitOffGrid) {
  auto rig = testing::half_split_rig(0.3);
  BssnParams p;
  Rng rng(6);
  const Cluster parent{SpaceTag::Input, Box{{0.0, 1.0}, {0.0, 1.0}}, Category::HS};
  const auto res = partition(parent, *rig.prober, p, rng, 0);
  EXPECT_FALSE(res.budget_exhausted);
  expect_exact_cover(res.leaves, parent.box);
  const auto a = testing::audit_half_split(res.leaves, 0.3, p);
  EXPECT_EQ(a.impure_settled, 0u) << "worst purity " << a.worst_purity;
  EXPECT_EQ(a.misplaced_flagged, 0u);
  EXPECT_GT(a.flagged, 0u);
  for (std::size_t i = 0; i < res.leaves.size(); ++i)
    for (const auto& s : res.evidence[i]) EXPECT_TRUE(res.leaves[i].box.contains(s.x));
}

TEST(Partition, PureBoxIsReturnedWhole) {
  auto rig = testing::half_split_rig(0.5);
  Rng rng(7);
  const Cluster parent{SpaceTag::Input, Box{{0.6, 1.0}, {0.0, 1.0}}, Category::HS};
  const auto res = partition(parent, *rig.prober, {}, rng, 2);
  ASSERT_EQ(res.leaves.size(), 1u);
  EXPECT_EQ(res.leaves[0].box, parent.box);
  EXPECT_FALSE(res.leaves[0].unsettled);
  EXPECT_EQ(res.leaves[0].label, Category::HS);
  EXPECT_EQ(res.leaves[0].born_t, 2);
}

TEST(Partition, DepthZeroFlagsParent) {
  auto rig = testing::half_split_rig(0.5);
  Rng rng(7);
  BssnParams p;
  p.max_partition_depth = 0;  // outside the validated range, but the guard must still hold
  const Cluster parent{SpaceTag::Input, Box{{0.0, 1.0}, {0.0, 1.0}}, Category::HS};
  const auto res = partition(parent, *rig.prober, p, rng, 0);
  ASSERT_EQ(res.leaves.size(), 1u);
  EXPECT_TRUE(res.leaves[0].unsettled);
  EXPECT_EQ(res.leaves[0].box, parent.box);
}

TEST(Partition, BudgetExhaustionFlagsRemainder) {
  auto rig = testing::half_split_rig(0.3);
  Rng rng(7);
  BssnParams p;
  p.partition_budget = 200;
  const Cluster parent{SpaceTag::Input, Box{{0.0, 1.0}, {0.0, 1.0}}, Category::HS};
  const auto res = partition(parent, *rig.prober, p, rng, 0);
  EXPECT_TRUE(res.budget_exhausted);
  EXPECT_LE(res.probes, 200u);
  expect_exact_cover(res.leaves, parent.box);
  std::size_t flagged = 0;
  for (const auto& l : res.leaves) flagged += l.unsettled;
  EXPECT_GT(flagged, 0u);
}

TEST(Partition, ReusesKnownSamples) {
  auto rig = testing::half_split_rig(0.5);
  Rng rng(9);
  std::vector<Sample> known;
  for (int i = 0; i < 64; ++i) known.push_back(rig.prober->probe(std::vector<double>{0.6 + 0.4 * rng.uniform(), rng.uniform()}, ProbeKind::Round));
  const Cluster parent{SpaceTag::Input, Box{{0.6, 1.0}, {0.0, 1.0}}, Category::HS};
  const auto res = partition(parent, *rig.prober, {}, rng, 0, known);
  EXPECT_EQ(res.probes, 0u);
  EXPECT_EQ(res.leaves.size(), 1u);
}

TEST(Invert, LinearClosedForm) {
  auto rig = make_rig(testing::doubling(-5.0, 5.0), "");
  Rng rng(1);
  const auto r = invert(*rig.prober, Box{{3.9, 4.1}}, {}, rng);
  ASSERT_TRUE(r.ok());
  EXPECT_NEAR((*r.x)[0], 2.0, 0.05 + 1e-12);
  EXPECT_LE(std::fabs(r.v[0] - 4.0), 0.1);
  EXPECT_TRUE(r.reconfirmed);
  EXPECT_LE(r.evaluations, BssnParams{}.inversion_budget);
  EXPECT_EQ(r.evaluations, rig.prober->count(ProbeKind::Inversion));
}

TEST(Invert, UnreachableTargetExhaustsBudget) {
  auto rig = make_rig(testing::doubling(-5.0, 5.0), "");
  Rng rng(1);
  const auto r = invert(*rig.prober, Box{{19.0, 21.0}}, {}, rng);
  EXPECT_EQ(r.status, InversionStatus::BudgetExhausted);
  EXPECT_LE(r.evaluations, BssnParams{}.inversion_budget);
  EXPECT_FALSE(r.x.has_value());
}

TEST(Invert, PiecewiseCellImage) {
  SutSpec spec;
  spec.kind = SutKind::PiecewiseRugged;
  spec.input_box = Box{{0.0, 1.0}, {0.0, 1.0}};
  const Box action{{0.0, 10.0}, {0.0, 10.0}};
  spec.action_box = action;
  spec.cells = generate_rugged_cells(spec.input_box, action, 6, 17);
  auto rig = make_rig(spec, "");
  Rng rng(2);
  std::size_t ok = 0;
  for (std::size_t k = 0; k < spec.cells.size(); ++k) {
    // A small box in the middle of cell k's image, away from the other images.
    const auto& img = spec.cells[k].output;
    Box target = img;
    for (std::size_t d = 0; d < 2; ++d) target[d] = {img[d].mid() - 0.05 * img[d].width(), img[d].mid() + 0.05 * img[d].width()};
    bool shared = false;
    for (std::size_t j = 0; j < spec.cells.size(); ++j) shared = shared || (j != k && spec.cells[j].output.intersects(target));
    if (shared) continue;
    const auto r = invert(*rig.prober, target, {}, rng);
    ASSERT_TRUE(r.ok()) << "cell " << k;
    EXPECT_TRUE(r.reconfirmed);
    EXPECT_TRUE(spec.cells[k].input.contains(r.x->values()));
    ++ok;
  }
  EXPECT_GE(ok, 3u);
}

TEST(Invert, LabelledClusterNeedsMatchingLabel) {
  auto rig = make_rig(testing::doubling(-5.0, 5.0), "lr hard v0 <= 4\n");
  Rng rng(4);
  Cluster c{SpaceTag::Action, Box{{3.0, 5.0}}, Category::HPrime};
  const auto r = invert(*rig.prober, c, {}, rng);
  ASSERT_TRUE(r.ok());
  EXPECT_GT(r.v[0], 4.0);
  EXPECT_EQ(r.category, Category::HPrime);
  Cluster in{SpaceTag::Input, Box{{0.0, 1.0}}, Category::HS};
  EXPECT_THROW(invert(*rig.prober, in, {}, rng), std::invalid_argument);
}

TEST(Invert, RoundTripSuite) {
  const auto rep = testing::run_inversion_roundtrip(31, 20, 6);
  EXPECT_GE(rep.success_rate(), 0.95) << rep.first_failure;
  EXPECT_EQ(rep.reprobed_inside, rep.succeeded);
  EXPECT_EQ(rep.oracle_inside, rep.succeeded);
  EXPECT_EQ(rep.unreachable_exhausted, rep.unreachable) << rep.first_failure;
}

Cluster box_cluster(SpaceTag s, Box b, Category c, int t, double conf = 0.95) {
  Cluster k;
  k.space = s;
  k.box = std::move(b);
  k.label = c;
  k.confidence = conf;
  k.support = 10;
  k.born_t = k.last_confirmed_t = t;
  return k;
}

TEST(Adapt, MergesPureUnion) {
  auto rig = make_rig(testing::doubling(0.0, 5.0), "lr hard v0 <= 8\n");
  Rng rng(5);
  const auto out = adapt({box_cluster(SpaceTag::Input, Box{{0.0, 1.0}}, Category::HS, 0)},
                         {box_cluster(SpaceTag::Input, Box{{1.0, 2.0}}, Category::HS, 1)}, *rig.prober, {}, rng, 1);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].box, (Box{{0.0, 2.0}}));
  EXPECT_EQ(out[0].born_t, 0);
  EXPECT_EQ(out[0].last_confirmed_t, 1);
  EXPECT_GE(out[0].confidence, 0.9);
}

TEST(Adapt, NeverMergesAcrossLabels) {
  auto rig = make_rig(testing::doubling(0.0, 5.0), "lr hard v0 <= 4\n");
  Rng rng(5);
  AdaptStats st;
  const auto out = adapt({box_cluster(SpaceTag::Input, Box{{0.0, 2.0}}, Category::HS, 0)},
                         {box_cluster(SpaceTag::Input, Box{{2.0, 5.0}}, Category::HPrime, 1)}, *rig.prober, {}, rng, 1,
                         &st);
  EXPECT_EQ(out.size(), 2u);
  EXPECT_EQ(st.merged, 0u);
  EXPECT_EQ(st.carried, 1u);
  EXPECT_EQ(rig.prober->total(), 0u);
}

TEST(Adapt, ImpureUnionIsNotMerged) {
  // H' now ends at x = 1.5; the previous map still claims [0, 2].
  auto rig = make_rig(testing::doubling(0.0, 5.0), "lr hard -v0 <= -3\n");
  Rng rng(5);
  AdaptStats st;
  const auto out = adapt({box_cluster(SpaceTag::Input, Box{{0.0, 2.0}}, Category::HPrime, 0)},
                         {box_cluster(SpaceTag::Input, Box{{0.0, 1.5}}, Category::HPrime, 1)}, *rig.prober, {}, rng, 1,
                         &st);
  EXPECT_EQ(st.merged, 0u);
  EXPECT_EQ(st.carried, 1u);
  EXPECT_EQ(out.size(), 2u);
  EXPECT_GT(rig.prober->count(ProbeKind::Confidence), 0u);
}

TEST(Adapt, StalenessAfterWindow) {
  auto rig = make_rig(testing::doubling(0.0, 5.0), "");
  Rng rng(5);
  BssnParams p;
  std::vector<Cluster> map{box_cluster(SpaceTag::Action, Box{{9.0, 10.0}}, Category::HS, 3)};
  for (int t = 4; t <= 8; ++t) {
    map = adapt(map, {}, *rig.prober, p, rng, t);
    ASSERT_EQ(map.size(), 1u);
    EXPECT_EQ(map[0].stale, t - 3 >= p.staleness_window) << "t=" << t;
  }
  EXPECT_TRUE(map[0].stale);
  EXPECT_EQ(map[0].last_confirmed_t, 3);
}

TEST(Adapt, ActionUnionNeedsEvidenceSupport) {
  auto rig = make_rig(testing::identity_square(), "");
  Rng rng(5);
  AdaptStats st;
  // Touching boxes that tile their hull merge.
  auto out = adapt({box_cluster(SpaceTag::Action, Box{{0.0, 0.5}, {0.0, 1.0}}, Category::HS, 0)},
                   {box_cluster(SpaceTag::Action, Box{{0.5, 1.0}, {0.0, 1.0}}, Category::HS, 1)}, *rig.prober, {}, rng,
                   1, &st);
  EXPECT_EQ(st.merged, 1u);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].box, (Box{{0.0, 1.0}, {0.0, 1.0}}));
  // Boxes meeting at a corner leave half the hull without evidence.
  out = adapt({box_cluster(SpaceTag::Action, Box{{0.0, 0.5}, {0.0, 0.5}}, Category::HS, 0)},
              {box_cluster(SpaceTag::Action, Box{{0.5, 1.0}, {0.5, 1.0}}, Category::HS, 1)}, *rig.prober, {}, rng, 1,
              &st);
  EXPECT_EQ(st.merged, 0u);
  EXPECT_EQ(out.size(), 2u);
  // Action-space adaptation never touches the SUT.
  EXPECT_EQ(rig.prober->total(), 0u);
}

TEST(Adapt, ContainedPreviousIsAbsorbed) {
  auto rig = make_rig(testing::doubling(0.0, 5.0), "");
  Rng rng(5);
  AdaptStats st;
  const auto out = adapt({box_cluster(SpaceTag::Input, Box{{1.0, 2.0}}, Category::HS, 0)},
                         {box_cluster(SpaceTag::Input, Box{{0.0, 3.0}}, Category::HS, 4)}, *rig.prober, {}, rng, 4, &st);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].born_t, 0);
  EXPECT_EQ(st.absorbed, 1u);
  EXPECT_EQ(rig.prober->total(), 0u);
}

TEST(Reconfirm, ObservationThenInversion) {
  auto rig = make_rig(testing::doubling(0.0, 5.0), "");
  Rng rng(5);
  std::vector<Cluster> prev{box_cluster(SpaceTag::Action, Box{{1.0, 2.0}}, Category::HS, 0),
                            box_cluster(SpaceTag::Action, Box{{5.0, 6.0}}, Category::HS, 0),
                            box_cluster(SpaceTag::Action, Box{{9.999, 10.0}}, Category::HS, 0)};
  std::vector<Sample> seen{labelled({0.75}, Category::HS, {1.5})};
  const auto st = reconfirm(prev, {}, seen, *rig.prober, {}, rng, 1);
  EXPECT_EQ(st.by_observation, 1u);
  EXPECT_EQ(st.inversions, 2u);
  EXPECT_EQ(st.inversion_successes, 2u);
  for (const auto& c : prev) EXPECT_EQ(c.last_confirmed_t, 1);
}

TEST(Reconfirm, LostBehaviourIsNotConfirmed) {
  auto rig = make_rig(testing::doubling(0.0, 5.0), "");
  Rng rng(5);
  BssnParams p;
  p.inversion_budget = 200;
  std::vector<Cluster> prev{box_cluster(SpaceTag::Action, Box{{1.0, 2.0}}, Category::HPrime, 0)};
  const auto st = reconfirm(prev, {}, {}, *rig.prober, p, rng, 1);
  EXPECT_EQ(st.inversions, 1u);
  EXPECT_EQ(st.inversion_successes, 0u);
  EXPECT_EQ(prev[0].last_confirmed_t, 0);
  EXPECT_DOUBLE_EQ(prev[0].confidence, 0.95);
}

TEST(Agent, ExploreCoversRegionWithoutOverlap) {
  auto rig = testing::half_split_rig(0.3);
  BssnAgent agent(0, std::move(rig.sut), rig.checker, {}, 12);
  const Box region{{0.0, 1.0}, {0.0, 1.0}};
  const auto r = agent.explore(region, 0);
  for (std::size_t i = 0; i < r.leaves.size(); ++i)
    for (std::size_t j = i + 1; j < r.leaves.size(); ++j) EXPECT_FALSE(r.leaves[i].box.overlaps(r.leaves[j].box));
  EXPECT_GT(r.settled_volume, 0.9);
  EXPECT_NEAR(r.h_prime_volume, 0.3, 0.05);
  const auto a = testing::audit_half_split(r.leaves, 0.3, agent.params());
  EXPECT_EQ(a.impure_settled, 0u);
  EXPECT_EQ(r.evidence.size(), agent.prober().count(ProbeKind::Round) + agent.prober().count(ProbeKind::Partition));
  EXPECT_TRUE(agent.gate().log().empty());
}

TEST(Agent, FocusProbesFollowSeverity) {
  // Three equal unsettled boxes, one per label: H' gets at least as many probes as HS', and HS' as HS.
  auto rig = make_rig(testing::identity_square(), "");
  BssnParams p;
  p.explore_temperature = 0.0;
  BssnAgent agent(0, std::move(rig.sut), rig.checker, p, 3);
  agent.set_unsettled({box_cluster(SpaceTag::Input, Box{{0.0, 0.25}, {0.0, 0.25}}, Category::HS, 0),
                       box_cluster(SpaceTag::Input, Box{{0.5, 0.75}, {0.0, 0.25}}, Category::HSPrime, 0),
                       box_cluster(SpaceTag::Input, Box{{0.0, 0.25}, {0.5, 0.75}}, Category::HPrime, 0)});
  const auto r = agent.explore(Box{{0.0, 1.0}, {0.0, 1.0}}, 1);
  const auto& f = r.focus_probes;
  EXPECT_GE(f[2], f[1]);
  EXPECT_GE(f[1], f[0]);
  EXPECT_GT(f[0], 0u);
  EXPECT_EQ(f[0] + f[1] + f[2], p.round_budget);
}

TEST(Agent, DeterministicPerSeed) {
  auto run = [](std::uint64_t seed) {
    auto rig = testing::half_split_rig(0.3);
    BssnAgent agent(0, std::move(rig.sut), rig.checker, {}, seed);
    auto r = agent.explore(Box{{0.0, 1.0}, {0.0, 1.0}}, 0);
    auto r2 = agent.explore(Box{{0.0, 1.0}, {0.0, 1.0}}, 1);
    std::vector<double> xs;
    for (const auto& s : r2.evidence) xs.insert(xs.end(), s.x.begin(), s.x.end());
    return xs;
  };
  EXPECT_EQ(run(5), run(5));
  EXPECT_NE(run(5), run(6));
}

TEST(Agent, GatekeepDelegatesToGate) {
  auto rig = make_rig(testing::doubling(0.0, 5.0), "lr hard v0 <= 4\n");
  BssnAgent agent(0, std::move(rig.sut), rig.checker, {}, 1);
  const auto in = [&](double x) { return Assignment(agent.sut().input_space_ptr(), {x}); };
  EXPECT_EQ(agent.gatekeep(in(1.0), 0).verdict, Verdict::Released);
  EXPECT_EQ(agent.gatekeep(in(3.0), 0).verdict, Verdict::Blocked);
  shutdown(agent.sut(), agent.gate());
  EXPECT_EQ(agent.gatekeep(in(1.0), 0).verdict, Verdict::Blocked);
  EXPECT_EQ(agent.gate().released() + agent.gate().blocked(), 3u);
}

TEST(AlignedCover, FollowsBisectionGrid) {
  const VariableSpace space({Variable::real("a", 0, 1), Variable::real("b", 0, 1)});
  const Box region{{0.0, 1.0}, {0.0, 1.0}};
  EXPECT_EQ(aligned_cover(region, Box{{0.1, 0.2}, {0.6, 0.7}}, space, 16), (Box{{0.0, 0.25}, {0.5, 0.75}}));
  EXPECT_EQ(aligned_cover(region, Box{{0.4, 0.6}, {0.1, 0.2}}, space, 16), region);
}

}  // namespace
}  // namespace wai
