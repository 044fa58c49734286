// Sweep execution and artifact emission for the command-line tool.
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rdregion/app/config.hpp"
#include "rdregion/oracle.hpp"
#include "rdregion/region.hpp"

namespace rdregion::app {

/// Command-line values that take precedence over the config file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<Format> format;
  bool oracle = false;
};

struct OracleRow {
  int region = 1;
  double s1 = 0.0, s2 = 0.0;
  std::optional<double> alpha;
  double f_solver = 0.0;
  double f_oracle = 0.0;
};

struct SliceSeries {
  std::optional<double> alpha;
  std::vector<region::SlicePoint> points;
};

struct RunResult {
  RunConfig config;
  region::RegionHull hull;
  std::vector<SliceSeries> slices;
  std::vector<OracleRow> oracle_rows;
  std::vector<std::filesystem::path> written;
};

/// %.12g with '.' as the decimal separator regardless of locale.
inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  std::string s(buf);
  for (char& c : s)
    if (c == ',') c = '.';
  return s;
}

inline std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

inline void apply(const Overrides& ov, RunConfig& c) {
  if (ov.seed) {
    c.seed = *ov.seed;
    c.grid.solver.rng_seed = *ov.seed;
  }
  if (ov.threads) c.grid.threads = *ov.threads;
  if (ov.format) c.format = *ov.format;
  if (ov.oracle) c.oracle.enabled = true;
}

namespace detail {

inline std::vector<SliceSeries> slices_of(const RunConfig& c, const region::RegionHull& hull) {
  std::vector<double> rates = c.outputs.rate_max ? region::lin_space(0.0, *c.outputs.rate_max, c.outputs.rate_points)
                                                 : region::default_rate_grid(hull, c.outputs.rate_points);
  std::vector<SliceSeries> out;
  if (hull.problem == region::Problem::ceo) {
    out.push_back({std::nullopt, region::equal_rate_slice(hull, rates)});
  } else {
    for (double a : c.grid.alpha_values) {
      const bool present = std::any_of(hull.halfspaces.begin(), hull.halfspaces.end(),
                                       [&](const region::Halfspace& h) { return h.alpha && *h.alpha == a; });
      if (present) out.push_back({a, region::equal_rate_slice(hull, rates, a)});
    }
  }
  return out;
}

inline std::vector<OracleRow> oracle_rows(const RunConfig& c, const region::RegionHull& hull) {
  std::vector<OracleRow> rows(hull.points.size());
  const auto check_binary = [&](std::size_t y1, std::size_t y2) {
    const auto& o = c.grid.solver;
    if (y1 != 2 || y2 != 2 || (o.u1_size && o.u1_size != 2) || (o.u2_size && o.u2_size != 2))
      throw ConfigError("oracle.enabled", "the grid oracle covers binary alphabets only");
  };
  if (c.ceo_model)
    check_binary(c.ceo_model->y1_size(), c.ceo_model->y2_size());
  else
    check_binary(c.bt_model->y1_size(), c.bt_model->y2_size());
  // The oracle parallelizes internally; points run sequentially.
  for (std::size_t i = 0; i < hull.points.size(); ++i) {
    const auto& p = hull.points[i];
    OracleRow r{p.region, p.s1, p.s2, p.alpha, p.objective, 0.0};
    if (c.ceo_model)
      r.f_oracle = oracle::grid_min_ceo(*c.ceo_model, {p.s1, p.s2, p.region}, c.oracle.grid, c.grid.threads).f_min;
    else
      r.f_oracle =
          oracle::grid_min_bt(*c.bt_model, {p.s1, p.s2, *p.alpha, p.region}, c.oracle.grid, c.grid.threads).f_min;
    rows[i] = r;
  }
  return rows;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace detail

inline std::string points_csv(const region::RegionHull& hull) {
  std::string s = "problem,region,s1,s2,alpha,R1,R2,D1,D2,F,iters,converged\n";
  for (const auto& p : hull.points) {
    s += std::string(region::to_string(p.problem)) + "," + std::to_string(p.region) + "," + fmt(p.s1) + "," +
         fmt(p.s2) + "," + fmt(p.alpha) + "," + fmt(p.R1) + "," + fmt(p.R2) + "," + fmt(p.D1) + "," + fmt(p.D2) +
         "," + fmt(p.objective) + "," + std::to_string(p.iterations) + "," + (p.converged ? "true" : "false") + "\n";
  }
  return s;
}

inline std::string equal_rate_csv(const std::vector<SliceSeries>& slices) {
  std::string s = "alpha,R,D\n";
  for (const auto& sl : slices)
    for (const auto& p : sl.points) s += fmt(sl.alpha) + "," + fmt(p.R) + "," + fmt(p.D) + "\n";
  return s;
}

inline std::string oracle_csv(const std::vector<OracleRow>& rows) {
  std::string s = "region,s1,s2,alpha,F_solver,F_oracle,difference\n";
  for (const auto& r : rows)
    s += std::to_string(r.region) + "," + fmt(r.s1) + "," + fmt(r.s2) + "," + fmt(r.alpha) + "," + fmt(r.f_solver) +
         "," + fmt(r.f_oracle) + "," + fmt(r.f_solver - r.f_oracle) + "\n";
  return s;
}

inline nlohmann::ordered_json hull_json(const RunResult& r) {
  using J = nlohmann::ordered_json;
  const auto opt = [](const std::optional<double>& v) { return v ? J(*v) : J(nullptr); };
  J doc;
  doc["problem"] = region::to_string(r.hull.problem);
  doc["source"] = r.config.source_label;
  doc["seed"] = r.config.seed;
  J hs = J::array();
  for (const auto& h : r.hull.halfspaces)
    hs.push_back({{"s1", h.s1}, {"s2", h.s2}, {"alpha", opt(h.alpha)}, {"offset", h.offset}, {"point", h.point}});
  doc["halfspaces"] = hs;
  J facets = J::array();
  for (const auto& f : r.hull.hull_facets)
    facets.push_back({{"vertices", f.vertices}, {"c0", f.c0}, {"c1", f.c1}, {"c2", f.c2}});
  doc["facets"] = facets;
  J pts = J::array();
  for (const auto& p : r.hull.points)
    pts.push_back({{"region", p.region},
                   {"s1", p.s1},
                   {"s2", p.s2},
                   {"alpha", opt(p.alpha)},
                   {"R1", p.R1},
                   {"R2", p.R2},
                   {"D1", p.D1},
                   {"D2", opt(p.D2)},
                   {"F", p.objective},
                   {"offset", p.offset},
                   {"iters", p.iterations},
                   {"converged", p.converged}});
  doc["points"] = pts;
  J er = J::array();
  for (const auto& sl : r.slices) {
    J pts_ = J::array();
    for (const auto& p : sl.points) pts_.push_back({p.R, p.D});
    er.push_back({{"alpha", opt(sl.alpha)}, {"points", pts_}});
  }
  doc["equal_rate"] = er;
  return doc;
}

/// Matplotlib script that reads only the files written next to it.
inline std::string plot_script(const RunResult& r, bool csv) {
  std::string s;
  s += "#!/usr/bin/env python3\n";
  s += "\"\"\"Plots the emitted region data. Run from any directory.\"\"\"\n";
  s += "import csv, json, os\n";
  s += "import matplotlib\n";
  s += "matplotlib.use('Agg')\n";
  s += "import matplotlib.pyplot as plt\n\n";
  s += "HERE = os.path.dirname(os.path.abspath(__file__))\n";
  s += std::string("PROBLEM = '") + region::to_string(r.hull.problem) + "'\n";
  s += std::string("HAVE_CSV = ") + (csv ? "True" : "False") + "\n";
  s += std::string("HAVE_SLICE = ") + (r.slices.empty() ? "False" : "True") + "\n\n";
  s += R"PY(

def num(v):
    return float(v) if v not in ('', None) else None


def load():
    if HAVE_CSV:
        with open(os.path.join(HERE, 'points.csv')) as f:
            points = [{k: v for k, v in row.items()} for row in csv.DictReader(f)]
        for p in points:
            for k in ('s1', 's2', 'alpha', 'R1', 'R2', 'D1', 'D2', 'F'):
                p[k] = num(p[k])
            p['region'] = int(p['region'])
            p['converged'] = p['converged'] == 'true'
        slices = {}
        if HAVE_SLICE:
            with open(os.path.join(HERE, 'equal_rate.csv')) as f:
                for row in csv.DictReader(f):
                    slices.setdefault(num(row['alpha']), []).append((float(row['R']), float(row['D'])))
        return points, slices
    with open(os.path.join(HERE, 'hull.json')) as f:
        doc = json.load(f)
    slices = {s['alpha']: [tuple(p) for p in s['points']] for s in doc['equal_rate']}
    return doc['points'], slices


def main():
    points, slices = load()
    points = [p for p in points if p['converged']]
    fig = plt.figure(figsize=(12, 5))
    ax = fig.add_subplot(1, 2, 1, projection='3d')
    for region, marker in ((1, 'o'), (2, '^')):
        sel = [p for p in points if p['region'] == region]
        if PROBLEM == 'ceo':
            z = [p['D1'] for p in sel]
        else:
            z = [p['alpha'] * p['D1'] + (1 - p['alpha']) * p['D2'] for p in sel]
        ax.scatter([p['R1'] for p in sel], [p['R2'] for p in sel], z, marker=marker, label='region %d' % region)
    ax.set_xlabel('R1 [bits]')
    ax.set_ylabel('R2 [bits]')
    ax.set_zlabel('D [bits]' if PROBLEM == 'ceo' else 'weighted D [bits]')
    ax.legend()
    ax2 = fig.add_subplot(1, 2, 2)
    for alpha, pts in sorted(slices.items(), key=lambda kv: -1 if kv[0] is None else kv[0]):
        ax2.plot([p[0] for p in pts], [p[1] for p in pts], label='R1 = R2' if alpha is None else 'alpha = %g' % alpha)
    ax2.set_xlabel('R [bits]')
    ax2.set_ylabel('D [bits]')
    if slices:
        ax2.legend()
    fig.tight_layout()
    fig.savefig(os.path.join(HERE, 'region.png'), dpi=150)


if __name__ == '__main__':
    main()
)PY";
  return s;
}

/// Runs the sweep (and the oracle when enabled). No files are touched.
inline RunResult compute(RunConfig c) {
  RunResult r;
  if (c.ceo_model)
    r.hull = region::sweep_ceo(*c.ceo_model, c.grid);
  else
    r.hull = region::sweep_bt(*c.bt_model, c.grid);
  if (c.outputs.equal_rate) r.slices = detail::slices_of(c, r.hull);
  if (c.oracle.enabled) r.oracle_rows = detail::oracle_rows(c, r.hull);
  r.config = std::move(c);
  return r;
}

/// Writes every artifact into `out_dir`, single-threaded, after compute().
inline void emit(RunResult& r, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + out_dir.string() + "': " + ec.message());
  const bool csv = r.config.format != Format::json;
  const bool json = r.config.format != Format::csv;
  auto put = [&](const char* name, const std::string& content) {
    detail::write_file(out_dir / name, content);
    r.written.push_back(out_dir / name);
  };
  if (csv) {
    put("points.csv", points_csv(r.hull));
    if (!r.slices.empty()) put("equal_rate.csv", equal_rate_csv(r.slices));
  }
  if (r.config.oracle.enabled) put("oracle.csv", oracle_csv(r.oracle_rows));
  if (json) put("hull.json", hull_json(r).dump(2) + "\n");
  if (r.config.outputs.plot_script) put("plot.py", plot_script(r, csv));
}

}  // namespace rdregion::app
