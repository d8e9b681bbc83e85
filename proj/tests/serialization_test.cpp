#include <gtest/gtest.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <random>
#include <sstream>

#include "test_support.hpp"

using namespace hybrid_miner;
using namespace hm_test;

namespace {

HybridSystemNet l1_net(const EventLog& log) {
  DiscoveryParams p;
  p.graph.t_rs = 0.6;
  p.graph.t_rw = 0.3;
  p.t_replay = 0.8;
  auto graph = discover_causal_graph(log, p.graph);
  return discover_hybrid_net(log, graph, p).net;
}

std::vector<FieldError> field_errors(const Json& body) {
  try {
    discovery_params_from_json(body);
  } catch (const ParameterError& e) {
    return e.errors();
  }
  return {};
}

}  // namespace

TEST(Serialization, LogRoundTrip) {
  auto log = l1();
  auto j = log_to_json(log);
  EXPECT_EQ(j["variants"].size(), 3u);
  EXPECT_EQ(j["variants"][0]["count"], 45);
  EXPECT_EQ(log_from_json(j), log);
  EXPECT_EQ(log_from_json(Json::parse(j.dump())), log);
}

TEST(Serialization, MalformedLogJson) {
  EXPECT_THROW(log_from_json(Json::parse(R"({"variants": []})")), LogError);
  EXPECT_THROW(log_from_json(Json::parse(R"({"traces": []})")), LogError);
  EXPECT_THROW(log_from_json(Json::parse(R"({"variants": [{"trace": [1, 2]}]})")), LogError);
}

TEST(Serialization, L1Summary) {
  auto s = log_summary_json(l1());
  EXPECT_EQ(s["cases"], 100);
  EXPECT_EQ(s["events"], 380);
  EXPECT_EQ(s["events_with_endpoints"], 580);
  EXPECT_EQ(s["classes"], 7);
  EXPECT_EQ(s["variants"], 3);
}

TEST(Serialization, ParamsRoundTrip) {
  DiscoveryParams p;
  p.graph.t_freq = 1000;
  p.graph.causality = {1.0, 0.2, Rel1Numerator::symmetric};
  p.t_replay = 0.9;
  p.bounds = {3, 2};
  p.redundancy = RedundancyFilter::maximal_only;
  p.glob_floor = 0.25;
  auto back = discovery_params_from_json(params_to_json(p));
  EXPECT_EQ(params_to_json(back), params_to_json(p));
  // Missing keys keep the supplied defaults.
  auto partial = discovery_params_from_json(Json::parse(R"({"t_replay": 0.5})"), p);
  EXPECT_EQ(partial.graph.t_freq, 1000u);
  EXPECT_EQ(partial.t_replay, 0.5);
}

TEST(Serialization, ParamErrorsNameFields) {
  auto e = field_errors(Json::parse(R"({"t_rs": 0.5, "t_rw": 0.7})"));
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0].field, "t_rs");
  e = field_errors(Json::parse(R"({"t_freq": 0})"));
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0].field, "t_freq");
  e = field_errors(Json::parse(R"({"w": "high", "max_inputs": -1, "redundancy": "some"})"));
  ASSERT_EQ(e.size(), 3u);
  EXPECT_EQ(e[0].field, "w");
  EXPECT_EQ(e[1].field, "max_inputs");
  EXPECT_EQ(e[2].field, "redundancy");
  e = field_errors(Json::parse(R"({"t_replay": 2, "c": 0})"));
  ASSERT_EQ(e.size(), 2u);
  EXPECT_THROW(graph_params_from_json(Json::array()), ParameterError);
}

TEST(Serialization, GraphRoundTrip) {
  auto log = l1();
  GraphParams p;
  p.t_rs = 0.6;
  p.t_rw = 0.3;
  auto g = discover_causal_graph(log, p);
  auto table = build_table(log);
  auto j = graph_to_json(g, &table);
  EXPECT_EQ(j["activities"][0]["name"], "▷");
  EXPECT_TRUE(j["strong"][0].contains("causality"));
  EXPECT_EQ(graph_from_json(j, log.vocabulary()), g);
  auto fresh = graph_from_json(Json::parse(j.dump()));
  EXPECT_EQ(graph_to_json(fresh), graph_to_json(g));
}

TEST(Serialization, NetRoundTripIsFixpoint) {
  auto log = l1();
  auto net = l1_net(log);
  auto j = net_to_json(net);
  EXPECT_EQ(j["places"][0]["id"], "source");
  EXPECT_EQ(j["places"][1]["id"], "sink");
  EXPECT_EQ(j["initial_marking"], Json::parse(R"({"source": 1})"));
  auto same_vocab = net_from_json(j, log.vocabulary());
  EXPECT_EQ(same_vocab, net);
  auto fresh = net_from_json(Json::parse(j.dump()));
  EXPECT_EQ(net_to_json(fresh), j);
  EXPECT_EQ(net_to_json(net_from_json(net_to_json(fresh))), j);
}

TEST(SerializationProperty, RandomNetsRoundTrip) {
  std::mt19937_64 rng(19);
  for (int round = 0; round < 100; ++round) {
    auto hsn = random_net(rng, 4, 3);
    auto j = net_to_json(hsn);
    EXPECT_EQ(net_from_json(j, hsn.net().vocabulary()), hsn);
    EXPECT_EQ(net_to_json(net_from_json(Json::parse(j.dump()))), j);
  }
}

TEST(Serialization, MalformedNetJson) {
  EXPECT_THROW(net_from_json(Json::parse(R"({"places": []})")), ModelError);
  EXPECT_THROW(net_from_json(Json::parse(R"({"transitions": ["a"], "places": [{"id": "p", "inputs": ["b"], "outputs": []}]})")),
               Error);
  EXPECT_THROW(net_from_json(Json::parse(
                   R"({"transitions": ["a"], "places": [{"id": "p", "inputs": ["a"], "outputs": []}], "source": "q"})")),
               ModelError);
}

TEST(Serialization, ScoresAndQuality) {
  auto log = l1();
  auto graph = discover_causal_graph(log, {});
  auto result = discover_hybrid_net(log, graph, {});
  auto scores = scores_to_json(*log.vocabulary(), result.candidates);
  ASSERT_EQ(scores.size(), result.candidates.size());
  for (const auto& s : scores) {
    EXPECT_TRUE(s.contains("freq"));
    EXPECT_TRUE(s.contains("accepted"));
  }
  auto q = quality_to_json(result.net, evaluate_quality(result.net, log));
  EXPECT_EQ(q["total_cases"], 100);
  EXPECT_EQ(q["metrics"]["transitions"], 7);
  auto c = consistency_to_json(validate_consistency(log, graph, result.net));
  EXPECT_EQ(c["consistent"], true);
  EXPECT_TRUE(c["violations"].empty());
  LogBuilder b;
  b.add({"a"});
  auto other = std::move(b).build();
  auto s = score_to_json(*other.vocabulary(), Place{{kStart}, {kStart}}, PlaceScore{});
  EXPECT_TRUE(s["rel"].is_null());
}

TEST(Export, GraphDot) {
  auto log = l1();
  GraphParams p;
  p.t_rs = 0.6;
  p.t_rw = 0.3;
  auto g = discover_causal_graph(log, p);
  ASSERT_FALSE(g.weak().empty());
  auto dot = graph_to_dot(g);
  EXPECT_EQ(dot.rfind("digraph", 0), 0u);
  EXPECT_NE(dot.find("style=dashed, label=\"?\""), std::string::npos);
  std::size_t dashed = 0;
  for (std::size_t pos = 0; (pos = dot.find("style=dashed", pos)) != std::string::npos; ++pos) ++dashed;
  EXPECT_EQ(dashed, g.weak().size());
}

TEST(Export, NetDotAndPnml) {
  auto log = l1();
  auto net = l1_net(log);
  auto dot = net_to_dot(net);
  EXPECT_NE(dot.find("shape=box"), std::string::npos);
  EXPECT_NE(dot.find("shape=circle"), std::string::npos);
  std::size_t dashed = 0;
  for (std::size_t pos = 0; (pos = dot.find("style=dashed", pos)) != std::string::npos; ++pos) ++dashed;
  EXPECT_EQ(dashed, net.unsure().size());

  auto pnml = net_to_pnml(net);
  std::istringstream in(pnml);
  boost::property_tree::ptree tree;
  ASSERT_NO_THROW(boost::property_tree::read_xml(in, tree));
  const auto& page = tree.get_child("pnml.net.page");
  std::size_t places = 0, transitions = 0, arcs = 0;
  for (const auto& [tag, child] : page) {
    places += tag == "place";
    transitions += tag == "transition";
    arcs += tag == "arc";
  }
  EXPECT_EQ(places, net.net().places().size());
  EXPECT_EQ(transitions, net.net().transitions().size());
  std::size_t expected_arcs = 0;
  for (const auto& p : net.net().places()) expected_arcs += p.inputs.size() + p.outputs.size();
  EXPECT_EQ(arcs, expected_arcs);
  std::size_t unsure = 0;
  for (const auto& [tag, child] : tree.get_child("pnml.net.toolspecific")) unsure += tag == "unsureArc";
  EXPECT_EQ(unsure, net.unsure().size());
}

TEST(Export, EscapesLabels) {
  LogBuilder b;
  b.add({"say \"hi\"", "a<b&c"});
  auto log = std::move(b).build();
  auto hsn = HybridSystemNet::assemble(log.vocabulary(), log.alphabet(), {}, {}, {});
  auto pnml = net_to_pnml(hsn);
  EXPECT_NE(pnml.find("a&lt;b&amp;c"), std::string::npos);
  std::istringstream in(pnml);
  boost::property_tree::ptree tree;
  EXPECT_NO_THROW(boost::property_tree::read_xml(in, tree));
  EXPECT_NE(net_to_dot(hsn).find("\"say \\\"hi\\\"\""), std::string::npos);
}
