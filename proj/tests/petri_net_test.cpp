#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

using namespace hybrid_miner;
using namespace hm_test;

namespace {

struct Fixture {
  std::shared_ptr<Vocabulary> vocab = std::make_shared<Vocabulary>();
  ActivityId a = vocab->intern("a");
  ActivityId b = vocab->intern("b");
  ActivityId e = vocab->intern("e");
  ActivitySet all{kStart, kEnd, a, b, e};
};

}  // namespace

TEST(PetriNet, Enabled) {
  Fixture f;
  PetriNet net(f.vocab, f.all, {Place{{f.a}, {f.b, f.e}}});
  EXPECT_TRUE(enabled(net, Marking(1), f.a));  // empty preset
  EXPECT_FALSE(enabled(net, Marking(1), f.b));
  Marking one = Marking::single(1, 0);
  EXPECT_TRUE(enabled(net, one, f.b));
  EXPECT_TRUE(enabled(net, one, f.e));
  EXPECT_THROW(enabled(net, one, f.vocab->intern("zzz")), ModelError);
}

TEST(PetriNet, Fire) {
  Fixture f;
  PetriNet net(f.vocab, f.all, {Place{{f.a}, {f.b}}});
  EXPECT_EQ(fire(net, Marking(1), f.e), Marking(1));
  EXPECT_EQ(fire(net, Marking::single(1, 0), f.b), Marking(1));
  EXPECT_EQ(fire(net, Marking(1), f.a), Marking::single(1, 0));
  EXPECT_THROW(fire(net, Marking(1), f.b), ModelError);

  PetriNet chain(f.vocab, f.all, {Place{{}, {kStart}}, Place{{kStart}, {f.a}}});
  EXPECT_EQ(fire(chain, Marking::single(2, 0), kStart), Marking::single(2, 1));
}

TEST(PetriNet, ConstructorRejectsBadInput) {
  Fixture f;
  EXPECT_THROW(PetriNet(f.vocab, f.all, {Place{{f.a}, {f.b}}, Place{{f.a}, {f.b}}}), ModelError);
  EXPECT_THROW(PetriNet(f.vocab, ActivitySet{f.a}, {Place{{f.a}, {f.b}}}), ModelError);
  EXPECT_THROW(PetriNet(nullptr, f.all, {}), ModelError);
}

TEST(PetriNet, ConnectedPairs) {
  Fixture f;
  EXPECT_TRUE(connected_pairs(PetriNet(f.vocab, f.all, {})).empty());
  PetriNet net(f.vocab, f.all, {Place{{f.a}, {f.b, f.e}}});
  EXPECT_EQ(connected_pairs(net), (std::set<ActivityPair>{{f.a, f.b}, {f.a, f.e}}));
  PetriNet two(f.vocab, f.all, {Place{{f.a}, {f.b}}, Place{{f.a, f.e}, {f.b}}});
  EXPECT_EQ(connected_pairs(two), (std::set<ActivityPair>{{f.a, f.b}, {f.e, f.b}}));
}

TEST(HybridNet, AssembleLayout) {
  Fixture f;
  auto hsn = HybridSystemNet::assemble(f.vocab, f.all, {Place{{f.a}, {f.b}}}, {{kStart, f.a}}, {{f.b, f.e}});
  ASSERT_EQ(hsn.net().places().size(), 3u);
  EXPECT_EQ(hsn.net().places()[0], (Place{{}, {kStart}}));
  EXPECT_EQ(hsn.net().places()[1], (Place{{kEnd}, {}}));
  EXPECT_EQ(hsn.initial_marking(), Marking::single(3, 0));
  EXPECT_EQ(hsn.final_marking(), Marking::single(3, 1));
  EXPECT_EQ(hsn.internal_place_count(), 1u);
  EXPECT_FALSE(hsn.is_internal(0));
  EXPECT_TRUE(hsn.is_internal(2));
  EXPECT_THROW(HybridSystemNet::assemble(f.vocab, ActivitySet{kStart, kEnd}, {}, {{f.a, f.b}}, {}), ModelError);
}

TEST(HybridNet, InBehaviorWithoutInternalPlaces) {
  Fixture f;
  auto hsn = HybridSystemNet::assemble(f.vocab, f.all, {}, {}, {});
  EXPECT_TRUE(in_behavior(hsn, Trace{kStart, f.b, f.a, f.a, kEnd}));
  EXPECT_TRUE(in_behavior(hsn, Trace{kStart, kEnd}));
  EXPECT_FALSE(in_behavior(hsn, Trace{kStart, kStart, kEnd}));  // source holds one token
  EXPECT_FALSE(in_behavior(hsn, Trace{kStart}));                // sink stays empty
  EXPECT_THROW(in_behavior(hsn, Trace{kStart, f.vocab->intern("zzz"), kEnd}), ModelError);
}

TEST(HybridNet, InBehaviorEndpointPlace) {
  Fixture f;
  // With a place from ▷ to □ the empty trace ⟨▷,□⟩ fits; a place that needs
  // `a` in between rules it out.
  auto direct = HybridSystemNet::assemble(f.vocab, f.all, {Place{{kStart}, {kEnd}}}, {}, {});
  EXPECT_TRUE(in_behavior(direct, Trace{kStart, kEnd}));
  auto via_a = HybridSystemNet::assemble(f.vocab, f.all, {Place{{kStart}, {f.a}}, Place{{f.a}, {kEnd}}}, {}, {});
  EXPECT_FALSE(in_behavior(via_a, Trace{kStart, kEnd}));
  EXPECT_TRUE(in_behavior(via_a, Trace{kStart, f.a, kEnd}));
}

TEST(HybridNet, InBehaviorOnL1Place) {
  auto log = l1();
  auto hsn = HybridSystemNet::assemble(log.vocabulary(), log.alphabet(), {Place{set_of(log, {"a"}), set_of(log, {"b"})}},
                                       {}, {});
  EXPECT_TRUE(in_behavior(hsn, trace(log, {"▷", "a", "b", "c", "d", "□"})));
  EXPECT_FALSE(in_behavior(hsn, trace(log, {"▷", "a", "e", "d", "□"})));
  EXPECT_FALSE(in_behavior(hsn, trace(log, {"▷", "b", "a", "□"})));
}

TEST(HybridNet, ConsistencyOfDiscoveredNet) {
  auto log = l1();
  DiscoveryParams p;
  auto graph = discover_causal_graph(log, p.graph);
  auto result = discover_hybrid_net(log, graph, p);
  auto report = validate_consistency(log, graph, result.net);
  EXPECT_TRUE(report.consistent());
  EXPECT_TRUE(report.violations.empty());
}

TEST(HybridNet, ConsistencyViolations) {
  auto log = l1();
  auto a = id(log, "a"), b = id(log, "b");
  auto vocab = log.vocabulary();
  CausalGraph graph(vocab, log.alphabet(), {{a, b}}, {{b, a}});

  auto good = HybridSystemNet::assemble(vocab, log.alphabet(), {Place{{a}, {b}}}, {}, {{b, a}});
  EXPECT_TRUE(validate_consistency(log, graph, good).consistent());

  auto duplicate = HybridSystemNet::assemble(vocab, log.alphabet(), {Place{{a}, {b}}}, {{a, b}}, {{b, a}});
  auto r5 = validate_consistency(log, graph, duplicate);
  EXPECT_FALSE(r5.strong_matches);
  EXPECT_TRUE(r5.places_connected);

  auto dangling = HybridSystemNet::assemble(vocab, log.alphabet(), {Place{{a}, {}}}, {{a, b}}, {{b, a}});
  auto r4 = validate_consistency(log, graph, dangling);
  EXPECT_FALSE(r4.places_connected);
  EXPECT_TRUE(r4.strong_matches);

  auto no_unsure = HybridSystemNet::assemble(vocab, log.alphabet(), {}, {{a, b}}, {});
  EXPECT_FALSE(validate_consistency(log, graph, no_unsure).weak_matches);

  ActivitySet fewer = log.alphabet();
  ActivitySet trimmed;
  for (ActivityId x : fewer)
    if (x != id(log, "e")) trimmed.insert(x);
  auto missing = HybridSystemNet::assemble(vocab, trimmed, {Place{{a}, {b}}}, {}, {{b, a}});
  EXPECT_FALSE(validate_consistency(log, graph, missing).transitions_match);

  std::vector<Place> places{Place{{}, {kStart}}, Place{{kEnd}, {}}, Place{{a}, {b}}};
  PetriNet net(vocab, log.alphabet(), places);
  HybridSystemNet wrong_marking(net, {}, {{b, a}}, Marking(3), Marking::single(3, 1), 0, 1);
  auto r3 = validate_consistency(log, graph, wrong_marking);
  EXPECT_FALSE(r3.markings);
  EXPECT_TRUE(r3.source_sink_arcs);

  std::vector<Place> leaky{Place{{}, {kStart, a}}, Place{{kEnd}, {}}, Place{{a}, {b}}};
  HybridSystemNet bad_source(PetriNet(vocab, log.alphabet(), leaky), {}, {{b, a}}, Marking::single(3, 0),
                             Marking::single(3, 1), 0, 1);
  EXPECT_FALSE(validate_consistency(log, graph, bad_source).source_sink_arcs);
}

TEST(HybridNetProperty, InBehaviorMatchesMarkingSimulation) {
  std::mt19937_64 rng(31);
  int accepted = 0;
  for (int round = 0; round < 3000; ++round) {
    auto hsn = random_net(rng, 3, 3);
    auto t = random_trace(rng, hsn.net().transitions(), 10);
    bool expected = marking_simulation_oracle(hsn, t);
    ASSERT_EQ(in_behavior(hsn, t), expected) << "round " << round;
    accepted += expected;
  }
  EXPECT_GT(accepted, 0);
}

TEST(HybridNetProperty, FireConservesTokens) {
  std::mt19937_64 rng(37);
  for (int round = 0; round < 500; ++round) {
    auto hsn = random_net(rng, 3, 3);
    const auto& net = hsn.net();
    Marking m = hsn.initial_marking();
    for (int step = 0; step < 10; ++step) {
      std::vector<ActivityId> ready;
      for (ActivityId t : net.transitions())
        if (enabled(net, m, t)) ready.push_back(t);
      if (ready.empty()) break;
      ActivityId t = ready[rng() % ready.size()];
      Marking next = fire(net, m, t);
      EXPECT_EQ(next.total(), m.total() - net.preset(t).size() + net.postset(t).size());
      m = next;
    }
  }
}

TEST(HybridNetProperty, AddingPlacesGrowsConnectedPairs) {
  std::mt19937_64 rng(41);
  for (int round = 0; round < 200; ++round) {
    auto hsn = random_net(rng, 3, 3);
    const auto& places = hsn.net().places();
    std::vector<Place> fewer(places.begin(), places.end() - 1);
    PetriNet smaller(hsn.net().vocabulary(), hsn.net().transitions(), fewer);
    auto small_pairs = connected_pairs(smaller), big_pairs = connected_pairs(hsn.net());
    EXPECT_TRUE(std::includes(big_pairs.begin(), big_pairs.end(), small_pairs.begin(), small_pairs.end()));
    for (const auto& [x, y] : big_pairs) {
      EXPECT_TRUE(hsn.net().has_transition(x));
      EXPECT_TRUE(hsn.net().has_transition(y));
    }
  }
}
