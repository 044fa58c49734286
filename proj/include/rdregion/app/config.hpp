// Run configuration: JSON schema, parsing and field-level validation.
//
// {
//   "problem": "ceo" | "bt",
//   "source": {"generator": "bern-bsc", "p": 0.5, "alpha1": 0.25, "alpha2": 0.25}
//           | {"generator": "dsbs", "flip": 0.1}                          (bt)
//           | {"px": [...], "y1_given_x": [[...]], "y2_given_x": [[...]]}  (ceo)
//           | {"joint": [[...]]}                                          (bt),
//   "grid": {"s_values": [...] | {"min": a, "max": b, "count": n},
//            "product": false, "alpha_values": [...], "polish_passes": 8},
//   "solver": {"max_iters": 5000, "tol": 1e-9, "restarts": 10,
//              "init": "random_dirichlet" | "perturbed_identity",
//              "order": "lead_first" | "anchor_first"},
//   "cardinality": {"u1": 0, "u2": 0},
//   "outputs": {"equal_rate": true, "rate_max": null, "rate_points": 101,
//               "plot_script": true},
//   "oracle": {"enabled": false, "step": 0.02, "max_cells": 20000000},
//   "seed": 0,
//   "threads": 0,
//   "format": "csv" | "json" | "both"
// }
//
// Every key except "problem" and "source" is optional.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rdregion/bt.hpp"
#include "rdregion/ceo.hpp"
#include "rdregion/oracle.hpp"
#include "rdregion/region.hpp"
#include "rdregion/sources.hpp"

namespace rdregion::app {

/// Schema violation; what() names the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& msg) : std::runtime_error(field + ": " + msg) {}
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { csv, json, both };

struct OutputOptions {
  bool equal_rate = true;
  std::optional<double> rate_max;
  std::size_t rate_points = 101;
  bool plot_script = true;
};

struct OracleOptions {
  bool enabled = false;
  oracle::GridSpec grid;
};

struct RunConfig {
  region::Problem problem = region::Problem::ceo;
  std::string source_label;
  std::optional<ceo::CeoSourceModel> ceo_model;
  std::optional<bt::BtSourceModel> bt_model;
  region::SweepGrid grid;
  OutputOptions outputs;
  OracleOptions oracle;
  std::uint64_t seed = 0;
  Format format = Format::both;
};

namespace detail {

using nlohmann::json;

inline std::string show(const json& v) { return v.dump(); }

inline const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw ConfigError(path + key, "missing required field");
  return obj.at(key);
}

inline void expect_object(const json& v, const std::string& path) {
  if (!v.is_object()) throw ConfigError(path, "expected an object, got " + show(v));
}

inline void reject_unknown(const json& obj, const std::vector<std::string>& known, const std::string& path) {
  for (const auto& [k, _] : obj.items())
    if (std::find(known.begin(), known.end(), k) == known.end()) throw ConfigError(path + k, "unknown field");
}

inline double number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigError(field, "expected a number, got " + show(v));
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(field, "must be finite");
  return d;
}

inline double probability(const json& v, const std::string& field) {
  const double d = number(v, field);
  if (d < 0.0 || d > 1.0) throw ConfigError(field, "probability must lie in [0, 1], got " + show(v));
  return d;
}

inline double positive(const json& v, const std::string& field) {
  const double d = number(v, field);
  if (!(d > 0.0)) throw ConfigError(field, "must be strictly positive, got " + show(v));
  return d;
}

inline std::int64_t integer(const json& v, const std::string& field, std::int64_t lo) {
  if (!v.is_number_integer()) throw ConfigError(field, "expected an integer, got " + show(v));
  const auto i = v.get<std::int64_t>();
  if (i < lo) throw ConfigError(field, "must be at least " + std::to_string(lo) + ", got " + show(v));
  return i;
}

inline bool boolean(const json& v, const std::string& field) {
  if (!v.is_boolean()) throw ConfigError(field, "expected true or false, got " + show(v));
  return v.get<bool>();
}

inline std::string text(const json& v, const std::string& field) {
  if (!v.is_string()) throw ConfigError(field, "expected a string, got " + show(v));
  return v.get<std::string>();
}

inline std::vector<double> prob_vector(const json& v, const std::string& field) {
  if (!v.is_array() || v.empty()) throw ConfigError(field, "expected a non-empty array of probabilities");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(probability(v[i], field + "[" + std::to_string(i) + "]"));
  double s = 0.0;
  for (double x : out) s += x;
  if (std::abs(s - 1.0) > kRenormTol) throw ConfigError(field, "entries sum to " + std::to_string(s) + ", not 1");
  return out;
}

/// Rows of a conditional table; each row must be a distribution.
inline std::vector<std::vector<double>> prob_rows(const json& v, const std::string& field, bool rows_normalized) {
  if (!v.is_array() || v.empty()) throw ConfigError(field, "expected a non-empty array of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 0; r < v.size(); ++r) {
    const std::string f = field + "[" + std::to_string(r) + "]";
    if (!v[r].is_array() || v[r].empty()) throw ConfigError(f, "expected a non-empty array");
    if (rows_normalized) {
      rows.push_back(prob_vector(v[r], f));
    } else {
      std::vector<double> row;
      for (std::size_t c = 0; c < v[r].size(); ++c)
        row.push_back(probability(v[r][c], f + "[" + std::to_string(c) + "]"));
      rows.push_back(std::move(row));
    }
    if (rows.back().size() != rows.front().size()) throw ConfigError(f, "row length differs from row 0");
  }
  return rows;
}

inline CondPmf cond_from_rows(const std::vector<std::vector<double>>& rows) {
  std::vector<double> flat;
  for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
  return CondPmf(rows.size(), rows.front().size(), std::move(flat));
}

inline void parse_source(const json& src, RunConfig& c) {
  const std::string path = "source.";
  expect_object(src, "source");
  if (src.contains("generator")) {
    const auto gen = text(src.at("generator"), "source.generator");
    if (gen == "bern-bsc") {
      reject_unknown(src, {"generator", "p", "alpha1", "alpha2"}, path);
      const double p = src.contains("p") ? probability(src.at("p"), "source.p") : 0.5;
      const double a1 = probability(require(src, "alpha1", path), "source.alpha1");
      const double a2 = probability(require(src, "alpha2", path), "source.alpha2");
      std::ostringstream os;
      os << "bern-bsc(p=" << p << ", alpha1=" << a1 << ", alpha2=" << a2 << ")";
      c.source_label = os.str();
      if (c.problem == region::Problem::ceo)
        c.ceo_model = sources::bern_bsc(p, a1, a2);
      else
        c.bt_model = sources::bern_bsc_pair(p, a1, a2);
    } else if (gen == "dsbs") {
      if (c.problem != region::Problem::bt) throw ConfigError("source.generator", "dsbs is a Berger-Tung source");
      reject_unknown(src, {"generator", "flip"}, path);
      const double f = probability(require(src, "flip", path), "source.flip");
      c.source_label = "dsbs(flip=" + std::to_string(f) + ")";
      c.bt_model = sources::dsbs(f);
    } else {
      throw ConfigError("source.generator", "unknown generator '" + gen + "' (expected bern-bsc or dsbs)");
    }
    return;
  }
  c.source_label = "explicit";
  if (c.problem == region::Problem::ceo) {
    if (src.contains("joint")) throw ConfigError("source.joint", "explicit joint tables are for problem bt");
    reject_unknown(src, {"px", "y1_given_x", "y2_given_x"}, path);
    const auto px = prob_vector(require(src, "px", path), "source.px");
    const auto c1 = prob_rows(require(src, "y1_given_x", path), "source.y1_given_x", true);
    const auto c2 = prob_rows(require(src, "y2_given_x", path), "source.y2_given_x", true);
    if (c1.size() != px.size()) throw ConfigError("source.y1_given_x", "needs one row per symbol of px");
    if (c2.size() != px.size()) throw ConfigError("source.y2_given_x", "needs one row per symbol of px");
    c.ceo_model = ceo::CeoSourceModel(Pmf(px), cond_from_rows(c1), cond_from_rows(c2));
  } else {
    if (src.contains("px")) throw ConfigError("source.px", "channel tables are for problem ceo");
    reject_unknown(src, {"joint"}, path);
    const auto rows = prob_rows(require(src, "joint", path), "source.joint", false);
    std::vector<double> flat;
    for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
    double s = 0.0;
    for (double x : flat) s += x;
    if (std::abs(s - 1.0) > kRenormTol) throw ConfigError("source.joint", "entries sum to " + std::to_string(s) + ", not 1");
    c.bt_model = bt::BtSourceModel::from_table(rows.size(), rows.front().size(), std::move(flat));
  }
}

inline void parse_grid(const json& g, RunConfig& c) {
  expect_object(g, "grid");
  reject_unknown(g, {"s_values", "product", "alpha_values", "polish_passes"}, "grid.");
  if (g.contains("s_values")) {
    const auto& s = g.at("s_values");
    if (s.is_object()) {
      reject_unknown(s, {"min", "max", "count"}, "grid.s_values.");
      const double lo = positive(require(s, "min", "grid.s_values."), "grid.s_values.min");
      const double hi = positive(require(s, "max", "grid.s_values."), "grid.s_values.max");
      if (hi < lo) throw ConfigError("grid.s_values.max", "must not be below min");
      const auto n = integer(require(s, "count", "grid.s_values."), "grid.s_values.count", 1);
      c.grid.s_values = region::log_space(lo, hi, static_cast<std::size_t>(n));
    } else if (s.is_array() && !s.empty()) {
      c.grid.s_values.clear();
      for (std::size_t i = 0; i < s.size(); ++i)
        c.grid.s_values.push_back(positive(s[i], "grid.s_values[" + std::to_string(i) + "]"));
    } else {
      throw ConfigError("grid.s_values", "expected a non-empty array or {min, max, count}");
    }
  }
  if (g.contains("product")) c.grid.product = boolean(g.at("product"), "grid.product");
  if (g.contains("alpha_values")) {
    const auto& a = g.at("alpha_values");
    if (!a.is_array() || a.empty()) throw ConfigError("grid.alpha_values", "expected a non-empty array");
    c.grid.alpha_values.clear();
    for (std::size_t i = 0; i < a.size(); ++i)
      c.grid.alpha_values.push_back(probability(a[i], "grid.alpha_values[" + std::to_string(i) + "]"));
  }
  if (g.contains("polish_passes"))
    c.grid.polish_passes = static_cast<int>(integer(g.at("polish_passes"), "grid.polish_passes", 0));
}

inline void parse_solver(const json& s, RunConfig& c) {
  expect_object(s, "solver");
  reject_unknown(s, {"max_iters", "tol", "restarts", "init", "order"}, "solver.");
  auto& o = c.grid.solver;
  if (s.contains("max_iters")) o.max_iters = static_cast<int>(integer(s.at("max_iters"), "solver.max_iters", 1));
  if (s.contains("tol")) o.tol = positive(s.at("tol"), "solver.tol");
  if (s.contains("restarts")) o.restarts = static_cast<int>(integer(s.at("restarts"), "solver.restarts", 1));
  if (s.contains("init")) {
    const auto v = text(s.at("init"), "solver.init");
    if (v == "random_dirichlet")
      o.init = InitMode::random_dirichlet;
    else if (v == "perturbed_identity")
      o.init = InitMode::perturbed_identity;
    else
      throw ConfigError("solver.init", "expected random_dirichlet or perturbed_identity, got '" + v + "'");
  }
  if (s.contains("order")) {
    const auto v = text(s.at("order"), "solver.order");
    if (v == "lead_first")
      o.order = UpdateOrder::lead_first;
    else if (v == "anchor_first")
      o.order = UpdateOrder::anchor_first;
    else
      throw ConfigError("solver.order", "expected lead_first or anchor_first, got '" + v + "'");
  }
}

inline Format parse_format(const std::string& v, const std::string& field) {
  if (v == "csv") return Format::csv;
  if (v == "json") return Format::json;
  if (v == "both") return Format::both;
  throw ConfigError(field, "expected csv, json or both, got '" + v + "'");
}

}  // namespace detail

inline Format parse_format(const std::string& v) { return detail::parse_format(v, "format"); }

/// Parses and validates a configuration document.
inline RunConfig parse_config(const nlohmann::json& doc) {
  using namespace detail;
  expect_object(doc, "config");
  reject_unknown(doc,
                 {"problem", "source", "grid", "solver", "cardinality", "outputs", "oracle", "seed", "threads", "format"},
                 "");
  RunConfig c;
  const auto problem = text(require(doc, "problem", ""), "problem");
  if (problem == "ceo")
    c.problem = region::Problem::ceo;
  else if (problem == "bt")
    c.problem = region::Problem::bt;
  else
    throw ConfigError("problem", "expected ceo or bt, got '" + problem + "'");

  parse_source(require(doc, "source", ""), c);
  if (doc.contains("grid")) parse_grid(doc.at("grid"), c);
  if (doc.contains("solver")) parse_solver(doc.at("solver"), c);
  if (doc.contains("cardinality")) {
    const auto& k = doc.at("cardinality");
    expect_object(k, "cardinality");
    reject_unknown(k, {"u1", "u2"}, "cardinality.");
    if (k.contains("u1")) c.grid.solver.u1_size = static_cast<std::size_t>(integer(k.at("u1"), "cardinality.u1", 0));
    if (k.contains("u2")) c.grid.solver.u2_size = static_cast<std::size_t>(integer(k.at("u2"), "cardinality.u2", 0));
    const std::size_t y1 = c.ceo_model ? c.ceo_model->y1_size() : c.bt_model->y1_size();
    const std::size_t y2 = c.ceo_model ? c.ceo_model->y2_size() : c.bt_model->y2_size();
    if (c.grid.solver.u1_size > y1) throw ConfigError("cardinality.u1", "exceeds |Y1| = " + std::to_string(y1));
    if (c.grid.solver.u2_size > y2) throw ConfigError("cardinality.u2", "exceeds |Y2| = " + std::to_string(y2));
  }
  if (doc.contains("outputs")) {
    const auto& o = doc.at("outputs");
    expect_object(o, "outputs");
    reject_unknown(o, {"equal_rate", "rate_max", "rate_points", "plot_script"}, "outputs.");
    if (o.contains("equal_rate")) c.outputs.equal_rate = boolean(o.at("equal_rate"), "outputs.equal_rate");
    if (o.contains("rate_max") && !o.at("rate_max").is_null())
      c.outputs.rate_max = positive(o.at("rate_max"), "outputs.rate_max");
    if (o.contains("rate_points"))
      c.outputs.rate_points = static_cast<std::size_t>(integer(o.at("rate_points"), "outputs.rate_points", 2));
    if (o.contains("plot_script")) c.outputs.plot_script = boolean(o.at("plot_script"), "outputs.plot_script");
  }
  if (doc.contains("oracle")) {
    const auto& o = doc.at("oracle");
    expect_object(o, "oracle");
    reject_unknown(o, {"enabled", "step", "max_cells"}, "oracle.");
    if (o.contains("enabled")) c.oracle.enabled = boolean(o.at("enabled"), "oracle.enabled");
    if (o.contains("step")) {
      c.oracle.grid.step = positive(o.at("step"), "oracle.step");
      const double n = std::round(1.0 / c.oracle.grid.step);
      if (c.oracle.grid.step > 1.0 || std::abs(n * c.oracle.grid.step - 1.0) > 1e-9)
        throw ConfigError("oracle.step", "must divide 1, got " + show(o.at("step")));
    }
    if (o.contains("max_cells"))
      c.oracle.grid.max_cells = static_cast<std::uint64_t>(integer(o.at("max_cells"), "oracle.max_cells", 1));
  }
  if (doc.contains("seed")) c.seed = static_cast<std::uint64_t>(integer(doc.at("seed"), "seed", 0));
  if (doc.contains("threads")) c.grid.threads = static_cast<unsigned>(integer(doc.at("threads"), "threads", 0));
  if (doc.contains("format")) c.format = parse_format(text(doc.at("format"), "format"), "format");
  c.grid.solver.rng_seed = c.seed;
  try {
    c.grid.validate(c.problem);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("grid", e.what());
  }
  return c;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path.string() + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

}  // namespace rdregion::app
