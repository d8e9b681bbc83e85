#pragma once

// Fixtures, random generators and independent oracles shared by the test
// binaries. Oracles here deliberately avoid the library's algorithms.

#include <algorithm>
#include <cstdint>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hybrid_miner/hybrid_miner.hpp"

namespace hm_test {

using namespace hybrid_miner;

// [⟨▷,a,b,c,d,□⟩^45, ⟨▷,a,c,b,d,□⟩^35, ⟨▷,a,e,d,□⟩^20]
inline EventLog l1() {
  LogBuilder b;
  b.add({"a", "b", "c", "d"}, 45);
  b.add({"a", "c", "b", "d"}, 35);
  b.add({"a", "e", "d"}, 20);
  return std::move(b).build();
}

// [⟨c,d⟩^1000, ⟨a,b⟩^100, ⟨b,a⟩^10, ⟨a^1000⟩]
inline EventLog l2() {
  LogBuilder b;
  b.add({"c", "d"}, 1000);
  b.add({"a", "b"}, 100);
  b.add({"b", "a"}, 10);
  b.add(std::vector<std::string>(1000, "a"), 1);
  return std::move(b).build();
}

inline ActivityId id(const EventLog& log, std::string_view label) { return log.vocabulary()->at(label); }

inline Trace trace(const EventLog& log, std::initializer_list<std::string_view> labels) {
  Trace t;
  for (auto l : labels) t.push_back(id(log, l));
  return t;
}

inline ActivitySet set_of(const EventLog& log, std::initializer_list<std::string_view> labels) {
  ActivitySet s;
  for (auto l : labels) s.insert(id(log, l));
  return s;
}

// Random log over activities "a".."(a+alphabet-1)": `variants` random
// sequences of length min_len..max_len with multiplicities 1..max_count.
inline EventLog random_log(std::mt19937_64& rng, int alphabet, int variants, int max_len, int max_count = 20,
                           int min_len = 0) {
  std::uniform_int_distribution<int> act(0, alphabet - 1), len(min_len, max_len), cnt(1, max_count);
  LogBuilder b;
  for (int v = 0; v < variants; ++v) {
    std::vector<std::string> labels;
    int n = len(rng);
    for (int i = 0; i < n; ++i) labels.push_back(std::string(1, static_cast<char>('a' + act(rng))));
    b.add(labels, static_cast<std::uint64_t>(cnt(rng)));
  }
  return std::move(b).build();
}

// Random causal graph over ▷, □ and `extra` user activities with each
// ordered pair strong with probability `density`.
inline CausalGraph random_graph(std::mt19937_64& rng, int extra, double density) {
  auto vocab = std::make_shared<Vocabulary>();
  ActivitySet acts{kStart, kEnd};
  for (int i = 0; i < extra; ++i) acts.insert(vocab->intern(std::string(1, static_cast<char>('a' + i))));
  std::bernoulli_distribution coin(density);
  std::set<ActivityPair> strong, weak;
  for (ActivityId a : acts)
    for (ActivityId b : acts) {
      if (coin(rng))
        strong.emplace(a, b);
      else if (coin(rng))
        weak.emplace(a, b);
    }
  return CausalGraph(vocab, acts, strong, weak);
}

// Net over ▷, □ and `extra` activities with 1..max_places random internal
// places, in the standard source/sink layout.
inline HybridSystemNet random_net(std::mt19937_64& rng, int extra, int max_places) {
  auto vocab = std::make_shared<Vocabulary>();
  ActivitySet acts{kStart, kEnd};
  for (int i = 0; i < extra; ++i) acts.insert(vocab->intern(std::string(1, static_cast<char>('a' + i))));
  std::vector<ActivityId> pool(acts.begin(), acts.end());
  auto random_subset = [&] {
    ActivitySet s;
    while (s.empty())
      for (ActivityId a : pool)
        if (rng() % 3 == 0) s.insert(a);
    return s;
  };
  std::set<Place> places;
  int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_places));
  while (static_cast<int>(places.size()) < n) places.insert(Place{random_subset(), random_subset()});
  return HybridSystemNet::assemble(vocab, acts, {places.begin(), places.end()}, {}, {});
}

// Random trace of length 0..max_len over the net's transitions; half of them
// are shaped ⟨▷,...,□⟩ so that accepted traces are not vanishingly rare.
inline Trace random_trace(std::mt19937_64& rng, const ActivitySet& transitions, int max_len) {
  std::vector<ActivityId> pool(transitions.begin(), transitions.end());
  std::vector<ActivityId> inner;
  for (ActivityId a : pool)
    if (a != kStart && a != kEnd) inner.push_back(a);
  Trace t;
  std::size_t len = rng() % static_cast<unsigned>(max_len + 1);
  if (rng() % 2 && len >= 2 && !inner.empty()) {
    t.push_back(kStart);
    while (t.size() + 1 < len) t.push_back(inner[rng() % inner.size()]);
    t.push_back(kEnd);
  } else {
    while (t.size() < len) t.push_back(pool[rng() % pool.size()]);
  }
  return t;
}

// Candidate places by brute force over all pairs of subsets of the activities.
inline std::set<Place> brute_force_candidates(const CausalGraph& g) {
  std::vector<ActivityId> acts(g.activities().begin(), g.activities().end());
  const std::size_t n = acts.size();
  std::set<Place> out;
  for (std::uint32_t in_mask = 1; in_mask < (1u << n); ++in_mask)
    for (std::uint32_t out_mask = 1; out_mask < (1u << n); ++out_mask) {
      bool ok = true;
      for (std::size_t i = 0; i < n && ok; ++i)
        for (std::size_t j = 0; j < n && ok; ++j)
          if ((in_mask >> i & 1u) && (out_mask >> j & 1u) && !g.strong().count({acts[i], acts[j]})) ok = false;
      if (!ok) continue;
      Place p;
      for (std::size_t i = 0; i < n; ++i) {
        if (in_mask >> i & 1u) p.inputs.insert(acts[i]);
        if (out_mask >> i & 1u) p.outputs.insert(acts[i]);
      }
      out.insert(p);
    }
  return out;
}

// Replay condition evaluated literally: counts recomputed from scratch for
// every prefix length k.
inline std::pair<bool, bool> prefix_count_oracle(const Place& p, const Trace& t) {
  auto in_i = [&](ActivityId a) { return std::find(p.inputs.begin(), p.inputs.end(), a) != p.inputs.end(); };
  auto in_o = [&](ActivityId a) { return std::find(p.outputs.begin(), p.outputs.end(), a) != p.outputs.end(); };
  bool fits = true;
  for (std::size_t k = 0; k < t.size(); ++k) {
    std::size_t produced = 0, consumed = 0;
    for (std::size_t i = 0; i < k; ++i) produced += in_i(t[i]);
    for (std::size_t i = 0; i <= k; ++i) consumed += in_o(t[i]);
    if (produced < consumed) fits = false;
  }
  std::size_t total_in = 0, total_out = 0;
  bool activated = false;
  for (ActivityId a : t) {
    total_in += in_i(a);
    total_out += in_o(a);
    activated = activated || in_i(a) || in_o(a);
  }
  return {fits && total_in == total_out, activated};
}

// Global marking simulation: every transition checks all its input places
// at once, then tokens move; the final marking must match exactly.
inline bool marking_simulation_oracle(const HybridSystemNet& hsn, const Trace& t) {
  const auto& places = hsn.net().places();
  std::vector<long> tokens(places.size());
  for (std::size_t i = 0; i < places.size(); ++i) tokens[i] = hsn.initial_marking()[i];
  for (ActivityId a : t) {
    for (std::size_t i = 0; i < places.size(); ++i) {
      bool consumes = std::find(places[i].outputs.begin(), places[i].outputs.end(), a) != places[i].outputs.end();
      if (consumes && tokens[i] == 0) return false;
    }
    for (std::size_t i = 0; i < places.size(); ++i) {
      bool consumes = std::find(places[i].outputs.begin(), places[i].outputs.end(), a) != places[i].outputs.end();
      bool produces = std::find(places[i].inputs.begin(), places[i].inputs.end(), a) != places[i].inputs.end();
      tokens[i] += (produces ? 1 : 0) - (consumes ? 1 : 0);
    }
  }
  for (std::size_t i = 0; i < places.size(); ++i)
    if (tokens[i] != static_cast<long>(hsn.final_marking()[i])) return false;
  return true;
}

// Escaping-edges precision from first principles: token vectors are
// simulated directly, enabledness is read off the place list and observed
// continuations are collected by comparing prefixes of every variant.
inline double precision_oracle(const HybridSystemNet& hsn, const EventLog& log) {
  const auto& places = hsn.net().places();
  auto consumes = [&](std::size_t i, ActivityId t) {
    return std::find(places[i].outputs.begin(), places[i].outputs.end(), t) != places[i].outputs.end();
  };
  auto produces = [&](std::size_t i, ActivityId t) {
    return std::find(places[i].inputs.begin(), places[i].inputs.end(), t) != places[i].inputs.end();
  };
  double enabled_total = 0, escaping_total = 0;
  for (const auto& v : log.variants()) {
    if (!marking_simulation_oracle(hsn, v.trace)) continue;
    std::vector<long> tokens(places.size());
    for (std::size_t i = 0; i < places.size(); ++i) tokens[i] = hsn.initial_marking()[i];
    for (std::size_t k = 0; k < v.trace.size(); ++k) {
      std::set<ActivityId> observed;
      for (const auto& w : log.variants())
        if (w.trace.size() > k && std::equal(v.trace.begin(), v.trace.begin() + static_cast<long>(k), w.trace.begin()))
          observed.insert(w.trace[k]);
      for (ActivityId t : hsn.net().transitions()) {
        bool ok = true;
        for (std::size_t i = 0; i < places.size(); ++i)
          if (consumes(i, t) && tokens[i] == 0) ok = false;
        if (!ok) continue;
        enabled_total += static_cast<double>(v.count);
        if (!observed.count(t)) escaping_total += static_cast<double>(v.count);
      }
      for (std::size_t i = 0; i < places.size(); ++i)
        tokens[i] += (produces(i, v.trace[k]) ? 1 : 0) - (consumes(i, v.trace[k]) ? 1 : 0);
    }
  }
  return enabled_total == 0 ? 0.0 : 1.0 - escaping_total / enabled_total;
}

// Causal relations recomputed from expanded cases: frequent activities,
// hand projection, pair counts per case and the measures written out again.
struct OracleGraph {
  std::set<ActivityId> activities;
  std::set<ActivityPair> strong, weak;
};

inline OracleGraph causal_graph_oracle(const EventLog& log, const GraphParams& p) {
  std::vector<Trace> cases;
  for (const auto& v : log.variants()) cases.insert(cases.end(), v.count, v.trace);
  std::map<ActivityId, std::uint64_t> occ;
  for (const auto& t : cases)
    for (ActivityId a : t) ++occ[a];
  OracleGraph g;
  g.activities = {kStart, kEnd};
  for (auto [a, n] : occ)
    if (n >= p.t_freq) g.activities.insert(a);
  std::map<ActivityPair, double> df;
  std::map<ActivityId, double> succ, pred;
  for (const auto& t : cases) {
    Trace kept;
    for (ActivityId a : t)
      if (g.activities.count(a)) kept.push_back(a);
    for (std::size_t i = 0; i + 1 < kept.size(); ++i) {
      df[{kept[i], kept[i + 1]}] += 1;
      succ[kept[i]] += 1;
      pred[kept[i + 1]] += 1;
    }
  }
  for (ActivityId a : g.activities)
    for (ActivityId b : g.activities) {
      double ab = df[{a, b}], ba = df[{b, a}];
      double den = succ[a] + pred[b];
      double r1 = den == 0 ? 0 : 2 * ab / den;
      double r2 = a == b ? ab / (ab + p.causality.c) : (ab > ba ? (ab - ba) / (ab + ba + p.causality.c) : 0);
      double caus = p.causality.w * r1 + (1 - p.causality.w) * r2;
      if (caus >= p.t_rs)
        g.strong.insert({a, b});
      else if (caus >= p.t_rw)
        g.weak.insert({a, b});
    }
  return g;
}

}  // namespace hm_test

namespace hybrid_miner {

inline void PrintTo(const EventLog& log, std::ostream* os) {
  *os << "[";
  for (const auto& v : log.variants()) {
    *os << " <";
    for (std::size_t i = 0; i < v.trace.size(); ++i) *os << (i ? "," : "") << log.name(v.trace[i]);
    *os << ">^" << v.count;
  }
  *os << " ]";
}

inline void PrintTo(const Place& p, std::ostream* os) {
  *os << "({";
  for (ActivityId a : p.inputs) *os << a.value << ' ';
  *os << "},{";
  for (ActivityId a : p.outputs) *os << a.value << ' ';
  *os << "})";
}

}  // namespace hybrid_miner
