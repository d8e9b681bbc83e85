#pragma once

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hybrid_miner.hpp"
#include "service.hpp"

namespace hybrid_miner {

namespace cli_detail {

struct Options {
  std::string log_path;
  std::string log_format = "auto";
  CsvColumns csv;
  std::string delimiter = ",";
  bool all_lifecycle = false;

  DiscoveryParams params;
  std::string rel1_numerator = "literal";
  std::string redundancy = "all";
  double glob_floor = -1;
  CLI::Option* glob_floor_option = nullptr;

  LogReadOptions read_options() const {
    LogReadOptions o;
    o.format = parse_log_format(log_format);
    o.csv = csv;
    if (delimiter.size() != 1) throw ParameterError("delimiter", "must be a single character");
    o.csv.delimiter = delimiter[0];
    o.xes.complete_only = !all_lifecycle;
    return o;
  }

  DiscoveryParams discovery() const {
    DiscoveryParams p = params;
    p.graph.causality.rel1_numerator = rel1_numerator == "symmetric" ? Rel1Numerator::symmetric : Rel1Numerator::literal;
    p.redundancy = redundancy == "maximal-only" ? RedundancyFilter::maximal_only : RedundancyFilter::all;
    if (glob_floor_option && glob_floor_option->count()) p.glob_floor = glob_floor;
    p.validate();
    return p;
  }
};

// Empty or "-" writes to `out`.
inline void write_output(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    if (!content.empty() && content.back() != '\n') out << '\n';
    return;
  }
  std::ofstream file(path, std::ios::binary);
  file << content;
  if (!content.empty() && content.back() != '\n') file << '\n';
  if (!file) throw Error("cannot write '" + path + "'");
}

inline void add_log_options(CLI::App& app, Options& o) {
  app.add_option("--log", o.log_path, "Event log (.xes, .csv, .json; '-' reads stdin)");
  app.add_option("--log-format", o.log_format, "auto, xes, csv or json")
      ->check(CLI::IsMember({"auto", "xes", "csv", "json"}));
  app.add_option("--case-column", o.csv.case_column, "CSV case identifier column");
  app.add_option("--activity-column", o.csv.activity_column, "CSV activity column");
  app.add_option("--timestamp-column", o.csv.timestamp_column, "CSV timestamp column");
  app.add_option("--delimiter", o.delimiter, "CSV field delimiter");
  app.add_flag("--all-lifecycle", o.all_lifecycle, "Keep XES events of every lifecycle transition");
}

inline void add_graph_options(CLI::App& app, Options& o) {
  auto& g = o.params.graph;
  app.add_option("--t-freq", g.t_freq, "Minimum activity frequency")->capture_default_str();
  app.add_option("--c", g.causality.c, "Loop damping constant")->capture_default_str();
  app.add_option("--w", g.causality.w, "Weight of the first relation measure")->capture_default_str();
  app.add_option("--t-rs", g.t_rs, "Strong causality threshold")->capture_default_str();
  app.add_option("--t-rw", g.t_rw, "Weak causality threshold")->capture_default_str();
  app.add_option("--rel1-numerator", o.rel1_numerator, "literal or symmetric")
      ->check(CLI::IsMember({"literal", "symmetric"}))
      ->capture_default_str();
}

inline void add_net_options(CLI::App& app, Options& o) {
  add_graph_options(app, o);
  app.add_option("--t-replay", o.params.t_replay, "Place acceptance threshold")->capture_default_str();
  app.add_option("--max-inputs", o.params.bounds.max_inputs, "Largest input set of a candidate")->capture_default_str();
  app.add_option("--max-outputs", o.params.bounds.max_outputs, "Largest output set of a candidate")
      ->capture_default_str();
  app.add_option("--redundancy", o.redundancy, "all or maximal-only")
      ->check(CLI::IsMember({"all", "maximal-only"}))
      ->capture_default_str();
  o.glob_floor_option = app.add_option("--glob-floor", o.glob_floor, "Prune candidates whose global score is lower");
  app.add_option("--threads", o.params.threads, "Scoring threads (0: all cores)")->capture_default_str();
}

inline EventLog load_log(const Options& o, std::istream& in) {
  if (o.log_path.empty()) throw ParameterError("log", "an event log is required (--log)");
  return read_log_path(o.log_path, o.read_options(), in);
}

inline HybridSystemNet load_net(const std::string& path, VocabularyPtr base) {
  Json j = Json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) throw ModelError("'" + path + "' is not valid JSON");
  return net_from_json(j, std::move(base));
}

inline std::string stats_tsv(const Json& stats) {
  std::ostringstream os;
  os << "source\ttarget\tcount\trel1\trel2\tcausality\n";
  for (const auto& p : stats.at("pairs"))
    os << p.at("source").get<std::string>() << '\t' << p.at("target").get<std::string>() << '\t'
       << p.at("count").get<std::uint64_t>() << '\t' << p.at("rel1").get<double>() << '\t'
       << p.at("rel2").get<double>() << '\t' << p.at("causality").get<double>() << '\n';
  return os.str();
}

// "a,b->c,d" with labels of `vocab`.
inline Place parse_place(const std::string& text, const Vocabulary& vocab) {
  auto arrow = text.find("->");
  if (arrow == std::string::npos) throw ParameterError("place", "expected 'inputs->outputs', got '" + text + "'");
  auto side = [&](const std::string& part) {
    ActivitySet set;
    std::stringstream ss(part);
    std::string label;
    while (std::getline(ss, label, ',')) {
      auto first = label.find_first_not_of(' ');
      if (first == std::string::npos) continue;
      label = label.substr(first, label.find_last_not_of(' ') - first + 1);
      auto a = vocab.find(label);
      if (!a) throw ParameterError("place", "unknown activity '" + label + "'");
      set.insert(*a);
    }
    if (set.empty()) throw ParameterError("place", "empty side in '" + text + "'");
    return set;
  };
  return Place{side(text.substr(0, arrow)), side(text.substr(arrow + 2))};
}

struct SweepRow {
  std::string param;
  double value;
  Json metrics;
  double fitness;
  double precision;
};

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "param,value,T,P,F1hat,F2,F3,fitness,precision\n";
  for (const auto& r : rows)
    os << r.param << ',' << r.value << ',' << r.metrics.at("transitions").get<std::size_t>() << ','
       << r.metrics.at("places").get<std::size_t>() << ',' << r.metrics.at("connected_pairs").get<std::size_t>()
       << ',' << r.metrics.at("sure").get<std::size_t>() << ',' << r.metrics.at("unsure").get<std::size_t>() << ','
       << r.fitness << ',' << r.precision << '\n';
  return os.str();
}

// "t-replay=0.7,0.8" or "t-rs=0.5,0.6".
inline std::pair<std::string, std::vector<double>> parse_sweep(const std::string& spec) {
  auto eq = spec.find('=');
  std::string name = spec.substr(0, eq);
  if (eq == std::string::npos || (name != "t-replay" && name != "t-rs"))
    throw ParameterError("sweep", "expected t-replay=v1,v2,... or t-rs=v1,v2,...");
  std::vector<double> values;
  std::stringstream ss(spec.substr(eq + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParameterError("sweep", "'" + item + "' is not a number");
    }
  }
  if (values.empty()) throw ParameterError("sweep", "no values given");
  return {name, values};
}

inline Service*& running_service() {
  static Service* service = nullptr;
  return service;
}

}  // namespace cli_detail

// Exit codes: 0 success, 1 data or I/O failure, 2 usage or parameter error.
inline int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  using namespace cli_detail;
  CLI::App app{"Hybrid process model discovery", "hybrid-miner"};
  app.require_subcommand(1);
  Options o;

  auto* stats = app.add_subcommand("stats", "Activity counts and pairwise relation measures");
  add_log_options(*stats, o);
  add_graph_options(*stats, o);
  std::string stats_format = "json", out_path;
  stats->add_option("--format", stats_format, "json or tsv")->check(CLI::IsMember({"json", "tsv"}));
  stats->add_option("--out", out_path, "Output file (default stdout)");

  auto* graph_cmd = app.add_subcommand("discover-graph", "Causal graph with strong and weak relations");
  add_log_options(*graph_cmd, o);
  add_graph_options(*graph_cmd, o);
  std::string dot_path;
  graph_cmd->add_option("--out", out_path, "Graph JSON (default stdout)");
  graph_cmd->add_option("--dot", dot_path, "Also write Graphviz DOT here");

  auto* net_cmd = app.add_subcommand("discover-net", "Hybrid Petri net");
  add_log_options(*net_cmd, o);
  add_net_options(*net_cmd, o);
  std::string scores_path, pnml_path;
  net_cmd->add_option("--out", out_path, "Net JSON (default stdout)");
  net_cmd->add_option("--dot", dot_path, "Also write Graphviz DOT here");
  net_cmd->add_option("--pnml", pnml_path, "Also write PNML here");
  net_cmd->add_option("--scores", scores_path, "Write every candidate's scores here");

  auto* score_cmd = app.add_subcommand("score", "Scores of given places, e.g. --place 'a,b->c'");
  add_log_options(*score_cmd, o);
  score_cmd->add_option("--t-freq", o.params.graph.t_freq, "Score on the log projected to frequent activities");
  std::vector<std::string> place_specs;
  score_cmd->add_option("--place", place_specs, "Place as 'inputs->outputs'")->required();
  score_cmd->add_option("--out", out_path, "Output file (default stdout)");

  auto* eval_cmd = app.add_subcommand("evaluate", "Fitness and precision of a net on a log");
  add_log_options(*eval_cmd, o);
  add_net_options(*eval_cmd, o);
  std::string net_path, sweep;
  bool no_precision = false;
  eval_cmd->add_option("--net", net_path, "Net JSON to evaluate (default: discover one)");
  eval_cmd->add_option("--sweep", sweep, "Discover and evaluate over t-replay=... or t-rs=..., CSV output");
  eval_cmd->add_flag("--no-precision", no_precision, "Skip the precision computation");
  eval_cmd->add_option("--out", out_path, "Output file (default stdout)");

  auto* export_cmd = app.add_subcommand("export", "Convert a net or discover one and write it");
  add_log_options(*export_cmd, o);
  add_net_options(*export_cmd, o);
  std::string export_format = "dot";
  export_cmd->add_option("--net", net_path, "Net JSON (otherwise discovered from --log)");
  export_cmd->add_option("--format", export_format, "dot, pnml or json")->check(CLI::IsMember({"dot", "pnml", "json"}));
  export_cmd->add_option("--out", out_path, "Output file (default stdout)");

  auto* gen_cmd = app.add_subcommand("gen-log", "Synthetic order-handling event log");
  std::string model = "order-handling", gen_format = "xes";
  OrderHandlingOptions gen;
  std::uint64_t events = 0, seed = 1;
  gen_cmd->add_option("--model", model, "Process model")->check(CLI::IsMember({"order-handling"}));
  gen_cmd->add_option("--cases", gen.cases, "Number of cases")->capture_default_str();
  auto* events_option = gen_cmd->add_option("--events", events, "Exact number of events");
  gen_cmd->add_option("--seed", seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--format", gen_format, "xes, csv or json")->check(CLI::IsMember({"xes", "csv", "json"}));
  gen_cmd->add_option("--out", out_path, "Output file (default stdout)");

  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  std::string config_path, host, data_dir;
  int port = -1;
  std::size_t max_upload = 0;
  serve_cmd->add_option("--config", config_path, "JSON configuration file");
  serve_cmd->add_option("--host", host, "Bind address");
  serve_cmd->add_option("--port", port, "Port (0 picks a free one)");
  serve_cmd->add_option("--data-dir", data_dir, "Persist uploaded logs here");
  serve_cmd->add_option("--max-upload", max_upload, "Largest accepted upload in bytes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (stats->parsed()) {
      o.params.graph.causality.rel1_numerator =
          o.rel1_numerator == "symmetric" ? Rel1Numerator::symmetric : Rel1Numerator::literal;
      o.params.graph.validate();
      auto log = load_log(o, in);
      Json j;
      if (o.params.graph.t_freq > 1) {
        auto projection = project_frequent(log, o.params.graph.t_freq);
        j = stats_to_json(projection.log, projection.table, o.params.graph.causality);
      } else {
        j = stats_to_json(log, build_table(log), o.params.graph.causality);
      }
      write_output(out_path, stats_format == "tsv" ? stats_tsv(j) : j.dump(2), out);
    } else if (graph_cmd->parsed()) {
      auto p = o.discovery().graph;
      auto log = load_log(o, in);
      auto projection = project_frequent(log, p.t_freq);
      auto g = classify_relations(projection, p);
      write_output(out_path, graph_to_json(g, &projection.table).dump(2), out);
      if (!dot_path.empty()) write_output(dot_path, graph_to_dot(g, &projection.table), out);
    } else if (net_cmd->parsed()) {
      auto p = o.discovery();
      auto log = load_log(o, in);
      auto g = discover_causal_graph(log, p.graph);
      auto result = discover_hybrid_net(log, g, p);
      write_output(out_path, net_to_json(result.net).dump(2), out);
      if (!dot_path.empty()) write_output(dot_path, net_to_dot(result.net), out);
      if (!pnml_path.empty()) write_output(pnml_path, net_to_pnml(result.net), out);
      if (!scores_path.empty())
        write_output(scores_path, scores_to_json(*log.vocabulary(), result.candidates).dump(2), out);
    } else if (score_cmd->parsed()) {
      o.params.graph.validate();
      auto log = load_log(o, in);
      auto projection = project_frequent(log, o.params.graph.t_freq);
      Json j = Json::array();
      for (const auto& spec : place_specs) {
        Place p = parse_place(spec, *log.vocabulary());
        j.push_back(score_to_json(*log.vocabulary(), p, score(p, projection.log, projection.table)));
      }
      write_output(out_path, j.dump(2), out);
    } else if (eval_cmd->parsed()) {
      auto p = o.discovery();
      auto log = load_log(o, in);
      if (!sweep.empty()) {
        auto [name, values] = parse_sweep(sweep);
        std::vector<SweepRow> rows;
        for (double v : values) {
          DiscoveryParams q = p;
          (name == "t-replay" ? q.t_replay : q.graph.t_rs) = v;
          if (name == "t-rs" && q.graph.t_rw > v) q.graph.t_rw = v;
          q.validate();
          auto net = discover_hybrid_net(log, discover_causal_graph(log, q.graph), q).net;
          auto quality = evaluate_quality(net, log, !no_precision);
          rows.push_back({name, v, net_metrics_json(net), quality.fitness_trace, quality.precision_escaping});
        }
        write_output(out_path, sweep_csv(rows), out);
      } else {
        auto net = net_path.empty() ? discover_hybrid_net(log, discover_causal_graph(log, p.graph), p).net
                                    : load_net(net_path, log.vocabulary());
        Json j = quality_to_json(net, evaluate_quality(net, log, !no_precision));
        if (no_precision) {
          j.erase("precision");
          j.erase("enabled");
          j.erase("escaping");
        }
        write_output(out_path, j.dump(2), out);
      }
    } else if (export_cmd->parsed()) {
      std::optional<HybridSystemNet> net;
      if (!net_path.empty()) {
        net = load_net(net_path, nullptr);
      } else {
        auto p = o.discovery();
        auto log = load_log(o, in);
        net = discover_hybrid_net(log, discover_causal_graph(log, p.graph), p).net;
      }
      std::string content = export_format == "dot"    ? net_to_dot(*net)
                            : export_format == "pnml" ? net_to_pnml(*net)
                                                      : net_to_json(*net).dump(2);
      write_output(out_path, content, out);
    } else if (gen_cmd->parsed()) {
      if (events_option->count()) gen.events = events;
      auto traces = generate_order_handling_traces(gen, seed);
      std::ostringstream os;
      if (gen_format == "xes")
        write_xes(os, traces);
      else if (gen_format == "csv")
        write_csv(os, traces);
      else {
        LogBuilder b;
        for (const auto& t : traces) b.add(t);
        os << log_to_json(std::move(b).build()).dump();
      }
      write_output(out_path, os.str(), out);
    } else if (serve_cmd->parsed()) {
      auto config = load_service_config(config_path.empty() ? std::nullopt : std::optional(config_path));
      if (!host.empty()) config.host = host;
      if (port >= 0) config.port = port;
      if (!data_dir.empty()) config.data_dir = data_dir;
      if (max_upload) config.max_upload_bytes = max_upload;
      Service service(config);
      int bound = service.bind();
      if (bound < 0) throw Error("cannot bind " + config.host + ":" + std::to_string(config.port));
      service.set_access_log(&err);
      err << "listening on http://" << config.host << ':' << bound << std::endl;
      running_service() = &service;
      auto previous_int = std::signal(SIGINT, [](int) {
        if (running_service()) running_service()->stop();
      });
      auto previous_term = std::signal(SIGTERM, [](int) {
        if (running_service()) running_service()->stop();
      });
      service.listen_after_bind();
      std::signal(SIGINT, previous_int);
      std::signal(SIGTERM, previous_term);
      running_service() = nullptr;
    }
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace hybrid_miner
