#pragma once

#include <cstdlib>
#include <functional>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <utility>

#include <httplib.h>

#include "export.hpp"
#include "session.hpp"

namespace hybrid_miner {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t max_upload_bytes = std::size_t{64} << 20;
  std::optional<std::string> data_dir;
  DiscoveryParams defaults;
};

// {"host", "port", "max_upload_bytes", "data_dir", "defaults": {params}}
inline ServiceConfig config_from_json(const Json& j, ServiceConfig c = {}) {
  if (!j.is_object()) throw ParameterError("config", "expected a JSON object");
  std::vector<FieldError> errors;
  detail::read_field(j, "host", c.host, errors);
  detail::read_field(j, "port", c.port, errors);
  detail::read_field(j, "max_upload_bytes", c.max_upload_bytes, errors);
  if (j.contains("data_dir")) {
    if (j.at("data_dir").is_string())
      c.data_dir = j.at("data_dir").get<std::string>();
    else if (j.at("data_dir").is_null())
      c.data_dir.reset();
    else
      errors.push_back({"data_dir", "must be a string"});
  }
  if (!errors.empty()) throw ParameterError(std::move(errors));
  if (c.port < 0 || c.port > 65535) throw ParameterError("port", "must lie in [0,65535]");
  if (j.contains("defaults")) c.defaults = discovery_params_from_json(j.at("defaults"), c.defaults);
  return c;
}

// HYBRID_MINER_HOST, _PORT, _MAX_UPLOAD, _DATA_DIR and _DEFAULTS (a JSON
// parameter object) override the file settings.
inline ServiceConfig apply_environment(ServiceConfig c,
                                       const std::function<const char*(const char*)>& getenv = std::getenv) {
  Json overrides = Json::object();
  if (const char* v = getenv("HYBRID_MINER_HOST")) overrides["host"] = v;
  auto number = [](const char* field, const char* v) {
    try {
      std::size_t used = 0;
      unsigned long long n = std::stoull(v, &used);
      if (used != std::string(v).size()) throw std::invalid_argument(v);
      return n;
    } catch (const std::exception&) {
      throw ParameterError(field, "must be a non-negative integer");
    }
  };
  if (const char* v = getenv("HYBRID_MINER_PORT")) overrides["port"] = number("port", v);
  if (const char* v = getenv("HYBRID_MINER_MAX_UPLOAD")) overrides["max_upload_bytes"] = number("max_upload_bytes", v);
  if (const char* v = getenv("HYBRID_MINER_DATA_DIR")) overrides["data_dir"] = v;
  if (const char* v = getenv("HYBRID_MINER_DEFAULTS")) {
    Json d = Json::parse(v, nullptr, false);
    if (d.is_discarded()) throw ParameterError("defaults", "HYBRID_MINER_DEFAULTS is not valid JSON");
    overrides["defaults"] = d;
  }
  return config_from_json(overrides, std::move(c));
}

inline ServiceConfig load_service_config(const std::optional<std::string>& path) {
  ServiceConfig c;
  if (path) {
    Json j = Json::parse(read_file(*path), nullptr, false);
    if (j.is_discarded()) throw ParameterError("config", "'" + *path + "' is not valid JSON");
    c = config_from_json(j, c);
  }
  return apply_environment(std::move(c));
}

namespace detail {

struct NotFound : Error {
  using Error::Error;
};

struct BadRequest : Error {
  using Error::Error;
};

inline const std::set<std::string>& parameter_keys() {
  static const std::set<std::string> keys{"t_freq", "c", "w", "t_rs", "t_rw", "rel1_numerator", "t_replay",
                                          "max_inputs", "max_outputs", "redundancy", "glob_floor"};
  return keys;
}

// Query-string parameters as a JSON object with numbers where they parse.
inline Json query_params(const httplib::Request& req) {
  Json j = Json::object();
  for (const auto& [key, value] : req.params) {
    if (!parameter_keys().count(key)) continue;
    if (key == "rel1_numerator" || key == "redundancy") {
      j[key] = value;
      continue;
    }
    if (key == "glob_floor" && value == "none") {
      j[key] = nullptr;
      continue;
    }
    Json parsed = Json::parse(value, nullptr, false);
    j[key] = parsed.is_number() ? parsed : Json(value);
  }
  return j;
}

inline Json body_object(const httplib::Request& req) {
  if (req.body.find_first_not_of(" \t\r\n") == std::string::npos) return Json::object();
  Json j = Json::parse(req.body, nullptr, false);
  if (j.is_discarded()) throw BadRequest("request body is not valid JSON");
  if (!j.is_object()) throw ParameterError("body", "expected a JSON object");
  return j;
}

inline Json field_errors_json(const ParameterError& e) {
  Json errors = Json::array();
  for (const auto& f : e.errors()) errors.push_back({{"field", f.field}, {"message", f.message}});
  return {{"errors", std::move(errors)}};
}

}  // namespace detail

// Causal graph and hybrid net for one parameter set, using the session's
// projection cache.
struct SessionDiscovery {
  std::shared_ptr<const FrequencyProjection> projection;
  CausalGraph graph;
  HybridNetDiscovery result;
};

inline CausalGraph session_graph(const Session& s, const GraphParams& p,
                                 std::shared_ptr<const FrequencyProjection>* projection_out = nullptr) {
  p.validate();
  auto projection = s.projection(p.t_freq);
  CausalGraph g = classify_relations(*projection, p);
  if (projection_out) *projection_out = projection;
  return g;
}

inline SessionDiscovery session_discover(const Session& s, const DiscoveryParams& p) {
  p.validate();
  std::shared_ptr<const FrequencyProjection> projection;
  CausalGraph graph = session_graph(s, p.graph, &projection);
  HybridNetDiscovery result = discover_hybrid_net(projection->log, graph, p);
  return {projection, std::move(graph), std::move(result)};
}

class Service {
 public:
  explicit Service(ServiceConfig config)
      : config_(std::move(config)),
        sessions_(config_.data_dir ? std::optional<std::filesystem::path>(*config_.data_dir) : std::nullopt) {
    config_.defaults.validate();
    server_.set_payload_max_length(config_.max_upload_bytes);
    routes();
  }

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Binds to the configured host; port 0 picks a free port. Returns the port
  // or -1.
  int bind() {
    if (config_.port == 0) return server_.bind_to_any_port(config_.host);
    return server_.bind_to_port(config_.host, config_.port) ? config_.port : -1;
  }
  bool listen_after_bind() { return server_.listen_after_bind(); }
  void stop() { server_.stop(); }
  void wait_until_ready() const { server_.wait_until_ready(); }
  void set_access_log(std::ostream* os) { access_log_ = os; }

  SessionStore& sessions() noexcept { return sessions_; }
  const ServiceConfig& config() const noexcept { return config_; }

 private:
  using Handler = std::function<std::pair<int, Json>(const httplib::Request&)>;

  void json_route(const char* method, const std::string& pattern, Handler handler) {
    auto wrapped = [this, handler](const httplib::Request& req, httplib::Response& res) {
      auto [status, body] = guarded([&] { return handler(req); });
      res.status = status;
      if (status != 204) res.set_content(body.dump(), "application/json");
    };
    if (std::string(method) == "GET")
      server_.Get(pattern, wrapped);
    else if (std::string(method) == "POST")
      server_.Post(pattern, wrapped);
    else
      server_.Delete(pattern, wrapped);
  }

  template <typename F>
  static std::pair<int, Json> guarded(F&& f) {
    try {
      return f();
    } catch (const ParameterError& e) {
      return {422, detail::field_errors_json(e)};
    } catch (const detail::NotFound& e) {
      return {404, {{"error", e.what()}}};
    } catch (const Error& e) {
      return {400, {{"error", e.what()}}};
    } catch (const Json::exception& e) {
      return {400, {{"error", e.what()}}};
    } catch (const std::exception& e) {
      return {500, {{"error", e.what()}}};
    }
  }

  std::shared_ptr<Session> session(const httplib::Request& req) const {
    auto s = sessions_.find(req.path_params.at("id"));
    if (!s) throw detail::NotFound("unknown session '" + req.path_params.at("id") + "'");
    return s;
  }

  LogReadOptions upload_options(const httplib::Request& req) const {
    LogReadOptions o;
    if (req.has_param("format")) {
      o.format = parse_log_format(req.get_param_value("format"));
    } else {
      auto type = req.get_header_value("Content-Type");
      if (type.find("json") != std::string::npos)
        o.format = LogFormat::json;
      else if (type.find("csv") != std::string::npos)
        o.format = LogFormat::csv;
      else if (type.find("xml") != std::string::npos || type.find("xes") != std::string::npos)
        o.format = LogFormat::xes;
    }
    if (req.has_param("case")) o.csv.case_column = req.get_param_value("case");
    if (req.has_param("activity")) o.csv.activity_column = req.get_param_value("activity");
    if (req.has_param("timestamp")) o.csv.timestamp_column = req.get_param_value("timestamp");
    if (req.has_param("delimiter")) {
      auto d = req.get_param_value("delimiter");
      if (d.size() != 1) throw ParameterError("delimiter", "must be a single character");
      o.csv.delimiter = d[0];
    }
    if (req.get_param_value("lifecycle") == "all") o.xes.complete_only = false;
    return o;
  }

  void routes() {
    server_.set_logger([this](const httplib::Request& req, const httplib::Response& res) {
      if (access_log_) *access_log_ << req.method << ' ' << req.path << ' ' << res.status << '\n';
    });

    json_route("GET", "/health", [this](const httplib::Request&) {
      return std::pair<int, Json>{200, {{"status", "ok"}, {"sessions", sessions_.size()}}};
    });

    json_route("POST", "/logs", [this](const httplib::Request& req) {
      EventLog log = read_log_text(req.body, upload_options(req));
      auto s = sessions_.create(std::move(log));
      return std::pair<int, Json>{201, {{"id", s->id()}, {"summary", log_summary_json(s->log())}}};
    });

    json_route("GET", "/logs/:id", [this](const httplib::Request& req) {
      auto s = session(req);
      return std::pair<int, Json>{200, {{"id", s->id()}, {"summary", log_summary_json(s->log())}}};
    });

    json_route("DELETE", "/logs/:id", [this](const httplib::Request& req) {
      if (!sessions_.erase(req.path_params.at("id")))
        throw detail::NotFound("unknown session '" + req.path_params.at("id") + "'");
      return std::pair<int, Json>{204, nullptr};
    });

    json_route("GET", "/logs/:id/stats", [this](const httplib::Request& req) {
      auto s = session(req);
      GraphParams p = graph_params_from_json(detail::query_params(req), config_.defaults.graph);
      if (req.has_param("t_freq")) {
        auto projection = s->projection(p.t_freq);
        return std::pair<int, Json>{200, stats_to_json(projection->log, projection->table, p.causality)};
      }
      return std::pair<int, Json>{200, stats_to_json(s->log(), s->table(), p.causality)};
    });

    json_route("POST", "/logs/:id/causal-graph", [this](const httplib::Request& req) {
      auto s = session(req);
      GraphParams p = graph_params_from_json(detail::body_object(req), config_.defaults.graph);
      std::shared_ptr<const FrequencyProjection> projection;
      CausalGraph g = session_graph(*s, p, &projection);
      return std::pair<int, Json>{
          200, {{"params", params_to_json(p)}, {"graph", graph_to_json(g, &projection->table)}, {"dot", graph_to_dot(g, &projection->table)}}};
    });

    json_route("POST", "/logs/:id/hybrid-net", [this](const httplib::Request& req) {
      auto s = session(req);
      Json body = detail::body_object(req);
      bool include_scores = body.value("include_scores", true);
      DiscoveryParams p = discovery_params_from_json(body, config_.defaults);
      auto d = session_discover(*s, p);
      s->remember_params(params_to_json(p));
      Json out = {{"params", params_to_json(p)},
                  {"graph", graph_to_json(d.graph, &d.projection->table)},
                  {"net", net_to_json(d.result.net)},
                  {"metrics", net_metrics_json(d.result.net)},
                  {"consistency", consistency_to_json(validate_consistency(d.projection->log, d.graph, d.result.net))}};
      if (include_scores) out["scores"] = scores_to_json(*d.graph.vocabulary(), d.result.candidates);
      return std::pair<int, Json>{200, std::move(out)};
    });

    json_route("POST", "/logs/:id/evaluate", [this](const httplib::Request& req) {
      auto s = session(req);
      Json body = detail::body_object(req);
      bool fitness = true, precision = true;
      if (body.contains("metrics")) {
        if (!body.at("metrics").is_array()) throw ParameterError("metrics", "must be an array");
        fitness = precision = false;
        for (const auto& m : body.at("metrics")) {
          std::string name = m.is_string() ? m.get<std::string>() : "";
          if (name == "fitness")
            fitness = true;
          else if (name == "precision")
            precision = true;
          else
            throw ParameterError("metrics", "unknown metric; expected 'fitness' or 'precision'");
        }
      }
      DiscoveryParams p = discovery_params_from_json(body, config_.defaults);
      std::optional<HybridSystemNet> net;
      if (body.contains("net"))
        net = net_from_json(body.at("net"), s->log().vocabulary());
      else
        net = session_discover(*s, p).result.net;
      QualityReport q = evaluate_quality(*net, s->log(), precision);
      Json quality = quality_to_json(*net, q);
      if (!precision) {
        quality.erase("precision");
        quality.erase("enabled");
        quality.erase("escaping");
      }
      if (!fitness) quality.erase("fitness");
      Json out = {{"quality", std::move(quality)}};
      out["params"] = body.contains("net") ? Json(nullptr) : params_to_json(p);
      return std::pair<int, Json>{200, std::move(out)};
    });

    server_.Get("/logs/:id/export", [this](const httplib::Request& req, httplib::Response& res) {
      std::string content, type;
      auto [status, error] = guarded([&]() -> std::pair<int, Json> {
        auto s = session(req);
        std::string format = req.has_param("format") ? req.get_param_value("format") : "json";
        Json base = s->last_params();
        Json overrides = detail::query_params(req);
        for (const auto& [k, v] : overrides.items()) base[k] = v;
        DiscoveryParams p = discovery_params_from_json(base, config_.defaults);
        auto d = session_discover(*s, p);
        if (format == "json") {
          content = net_to_json(d.result.net).dump(2);
          type = "application/json";
        } else if (format == "dot") {
          content = net_to_dot(d.result.net);
          type = "text/vnd.graphviz";
        } else if (format == "pnml") {
          content = net_to_pnml(d.result.net);
          type = "application/xml";
        } else if (format == "graph-dot") {
          content = graph_to_dot(d.graph, &d.projection->table);
          type = "text/vnd.graphviz";
        } else {
          throw ParameterError("format", "must be one of json, dot, pnml, graph-dot");
        }
        return {200, nullptr};
      });
      res.status = status;
      if (status == 200)
        res.set_content(content, type);
      else
        res.set_content(error.dump(), "application/json");
    });
  }

  ServiceConfig config_;
  SessionStore sessions_;
  httplib::Server server_;
  std::ostream* access_log_ = nullptr;
};

}  // namespace hybrid_miner
