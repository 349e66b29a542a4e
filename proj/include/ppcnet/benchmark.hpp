#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ppcnet/core.hpp"
#include "ppcnet/environment.hpp"
#include "ppcnet/expert.hpp"
#include "ppcnet/inference.hpp"
#include "ppcnet/informed_rrtstar.hpp"
#include "ppcnet/mlp.hpp"

namespace ppcnet {

enum class Method { BiRrt, InformedRrtStar, PpcnetBinary, PpcnetPopulation, MpnetAblation };

inline std::string method_name(Method m) {
  switch (m) {
    case Method::BiRrt: return "bi-rrt";
    case Method::InformedRrtStar: return "informed-rrt*";
    case Method::PpcnetBinary: return "ppcnet-binary";
    case Method::PpcnetPopulation: return "ppcnet-population";
    case Method::MpnetAblation: return "mpnet-ablation";
  }
  throw ContractError("method_name: bad enum");
}

inline Method parse_method(const std::string& name) {
  if (name == "bi-rrt") return Method::BiRrt;
  if (name == "informed-rrt*") return Method::InformedRrtStar;
  if (name == "ppcnet-binary") return Method::PpcnetBinary;
  if (name == "ppcnet-population") return Method::PpcnetPopulation;
  if (name == "mpnet-ablation") return Method::MpnetAblation;
  throw FormatError("unknown method '" + name +
                    "' (expected bi-rrt, informed-rrt*, ppcnet-binary, ppcnet-population, "
                    "mpnet-ablation)");
}

// Stable per-method salt for seed derivation; independent of the order methods
// are requested in.
inline std::uint64_t method_salt(Method m) { return 100 + static_cast<std::uint64_t>(m); }

struct BenchmarkInputs {
  std::vector<Method> methods;
  int n_queries = 500;
  std::uint64_t seed = 0;
  BirrtParams birrt;
  RrtStarParams rrtstar;
  PlanParams plan;
  // Learned artifacts; only the ones the requested methods need must be set.
  const Mlp* planner_binary = nullptr;
  const Mlp* collision_binary = nullptr;
  const Mlp* planner_population = nullptr;
  const Mlp* collision_population = nullptr;
};

// One leg (home -> pick or pick -> place) of one query under one method.
struct LegRow {
  Method method = Method::BiRrt;
  int query = 0;
  int leg = 0;  // 0: home -> pick, 1: pick -> place
  bool success = false;
  double time = 0.0;    // seconds
  double length = 0.0;  // radians, 0 on failure
  int iterations = 0;
  int patches_attempted = 0;
  int patches_succeeded = 0;
  Path path;  // empty on failure
};

struct MethodAggregate {
  Method method = Method::BiRrt;
  int queries = 0;
  int successes = 0;            // queries with both legs successful
  double success_rate_pct = 0.0;
  double mean_time = 0.0;       // per successful query, both legs summed
  double std_time = 0.0;        // population standard deviation
  double mean_length = 0.0;
  double std_length = 0.0;
  double mean_time_pick = 0.0;  // per-leg means over successful queries
  double mean_time_place = 0.0;
  double mean_length_pick = 0.0;
  double mean_length_place = 0.0;
  double patch_rate_pct = 0.0;  // legs attempting >= 1 patch / all legs
};

struct BenchmarkReport {
  std::uint64_t seed = 0;
  std::vector<Configuration> picks;  // the shared query set
  std::vector<LegRow> legs;
  std::vector<MethodAggregate> aggregates;
};

namespace detail {

constexpr std::uint64_t kQuerySetSalt = 11;

inline LegRow run_leg(const Environment& env, const BenchmarkInputs& in, Method m, int query,
                      int leg, const Configuration& from, const Configuration& to) {
  LegRow row;
  row.method = m;
  row.query = query;
  row.leg = leg;
  Rng rng(derive_seed(in.seed, method_salt(m), static_cast<std::uint64_t>(query),
                      static_cast<std::uint64_t>(leg)));
  auto take_expert = [&row](const ExpertResult& res) {
    row.success = res.success;
    row.time = res.elapsed;
    row.iterations = res.iterations;
    if (res.success) {
      row.length = path_length(res.path);
      row.path = res.path;
    }
  };
  auto take_plan = [&row](const PlanResult& res) {
    row.success = res.success;
    row.time = res.elapsed;
    row.iterations = res.iterations;
    row.patches_attempted = res.patches_attempted;
    row.patches_succeeded = res.patches_succeeded;
    if (res.success) {
      row.length = res.length;
      row.path = res.path;
    }
  };
  switch (m) {
    case Method::BiRrt:
      take_expert(birrt_plan(env, from, to, in.birrt, rng));
      break;
    case Method::InformedRrtStar:
      take_expert(informed_rrtstar_plan(env, from, to, in.rrtstar, rng));
      break;
    case Method::PpcnetBinary: {
      if (!in.planner_binary || !in.collision_binary) {
        throw ContractError("benchmark: ppcnet-binary needs planner and collision checkpoints");
      }
      take_plan(ppcnet_plan(env, *in.planner_binary, make_net_probe(*in.collision_binary), from,
                            to, in.plan, rng));
      break;
    }
    case Method::PpcnetPopulation: {
      if (!in.planner_population || !in.collision_population) {
        throw ContractError(
            "benchmark: ppcnet-population needs planner and collision checkpoints");
      }
      take_plan(ppcnet_plan(env, *in.planner_population, make_net_probe(*in.collision_population),
                            from, to, in.plan, rng));
      break;
    }
    case Method::MpnetAblation: {
      const Mlp* planner = in.planner_population ? in.planner_population : in.planner_binary;
      if (!planner) {
        throw ContractError("benchmark: mpnet-ablation needs a planner checkpoint");
      }
      take_plan(ppcnet_plan(env, *planner, make_oracle_probe(env, in.plan.resolution), from, to,
                            in.plan, rng));
      break;
    }
  }
  return row;
}

inline MethodAggregate aggregate_method(Method m, int n_queries,
                                        const std::vector<LegRow>& legs) {
  MethodAggregate agg;
  agg.method = m;
  agg.queries = n_queries;
  std::vector<double> times, lengths;
  double sum_tp = 0, sum_tq = 0, sum_lp = 0, sum_lq = 0;
  int legs_total = 0, legs_patching = 0;
  for (int q = 0; q < n_queries; ++q) {
    const LegRow* pick_leg = nullptr;
    const LegRow* place_leg = nullptr;
    for (const LegRow& row : legs) {
      if (row.method != m || row.query != q) continue;
      ++legs_total;
      if (row.patches_attempted > 0) ++legs_patching;
      (row.leg == 0 ? pick_leg : place_leg) = &row;
    }
    if (pick_leg && place_leg && pick_leg->success && place_leg->success) {
      ++agg.successes;
      times.push_back(pick_leg->time + place_leg->time);
      lengths.push_back(pick_leg->length + place_leg->length);
      sum_tp += pick_leg->time;
      sum_tq += place_leg->time;
      sum_lp += pick_leg->length;
      sum_lq += place_leg->length;
    }
  }
  agg.success_rate_pct = n_queries > 0 ? 100.0 * agg.successes / n_queries : 0.0;
  agg.patch_rate_pct = legs_total > 0 ? 100.0 * legs_patching / legs_total : 0.0;
  auto mean_of = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
  };
  auto std_of = [&mean_of](const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    const double mu = mean_of(v);
    double s = 0;
    for (double x : v) s += (x - mu) * (x - mu);
    return std::sqrt(s / static_cast<double>(v.size()));
  };
  agg.mean_time = mean_of(times);
  agg.std_time = std_of(times);
  agg.mean_length = mean_of(lengths);
  agg.std_length = std_of(lengths);
  if (agg.successes > 0) {
    agg.mean_time_pick = sum_tp / agg.successes;
    agg.mean_time_place = sum_tq / agg.successes;
    agg.mean_length_pick = sum_lp / agg.successes;
    agg.mean_length_place = sum_lq / agg.successes;
  }
  return agg;
}

}  // namespace detail

// Poses the same n random pick-and-place queries (two legs each) to every
// requested method. Per-leg seeds depend only on (run seed, method, query,
// leg), so a method's rows are identical regardless of what else runs.
inline BenchmarkReport run_benchmark(const Environment& env, const BenchmarkInputs& in) {
  if (in.n_queries < 1) throw ContractError("run_benchmark: n_queries must be >= 1");
  if (in.methods.empty()) throw ContractError("run_benchmark: no methods requested");
  BenchmarkReport report;
  report.seed = in.seed;
  Rng query_rng(derive_seed(in.seed, detail::kQuerySetSalt, 0, 0));
  report.picks = random_goal_conf(env, in.n_queries, query_rng);

  for (Method m : in.methods) {
    for (int q = 0; q < in.n_queries; ++q) {
      report.legs.push_back(detail::run_leg(env, in, m, q, 0, env.home, report.picks[q]));
      report.legs.push_back(detail::run_leg(env, in, m, q, 1, report.picks[q], env.place));
    }
    report.aggregates.push_back(detail::aggregate_method(m, in.n_queries, report.legs));
  }
  return report;
}

// --- report serialization -------------------------------------------------------

inline std::string format_path_field(const Path& path) {
  std::ostringstream out;
  for (std::size_t w = 0; w < path.size(); ++w) {
    if (w) out << ';';
    for (Eigen::Index i = 0; i < path[w].size(); ++i) {
      if (i) out << ' ';
      out << format_double(path[w][i]);
    }
  }
  return out.str();
}

inline Path parse_path_field(const std::string& field) {
  Path path;
  std::istringstream waypoints(field);
  std::string token;
  while (std::getline(waypoints, token, ';')) {
    std::istringstream comps(token);
    std::vector<double> values;
    double v;
    while (comps >> v) values.push_back(v);
    Configuration q(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) q[static_cast<Eigen::Index>(i)] = values[i];
    path.push_back(std::move(q));
  }
  return path;
}

inline std::string report_csv(const BenchmarkReport& report) {
  std::ostringstream out;
  out << "# aggregate per method; failed queries excluded from time/length means; std is the "
         "population standard deviation; a query succeeds only if both legs do\n";
  out << "method,queries,successes,success_rate_pct,mean_time_s,std_time_s,mean_length_rad,"
         "std_length_rad,mean_time_pick_s,mean_time_place_s,mean_length_pick_rad,"
         "mean_length_place_rad,patch_rate_pct\n";
  for (const MethodAggregate& a : report.aggregates) {
    out << method_name(a.method) << ',' << a.queries << ',' << a.successes << ','
        << format_double(a.success_rate_pct) << ',' << format_double(a.mean_time) << ','
        << format_double(a.std_time) << ',' << format_double(a.mean_length) << ','
        << format_double(a.std_length) << ',' << format_double(a.mean_time_pick) << ','
        << format_double(a.mean_time_place) << ',' << format_double(a.mean_length_pick) << ','
        << format_double(a.mean_length_place) << ',' << format_double(a.patch_rate_pct) << "\n";
  }
  return out.str();
}

inline std::string queries_csv(const BenchmarkReport& report) {
  std::ostringstream out;
  out << "# per-leg rows; leg 0 is home->pick, leg 1 is pick->place; path is waypoints "
         "'c0 c1 ...' joined by ';'\n";
  out << "method,query,leg,success,time_s,length_rad,iterations,patches_attempted,"
         "patches_succeeded,path\n";
  for (const LegRow& row : report.legs) {
    out << method_name(row.method) << ',' << row.query << ',' << row.leg << ','
        << (row.success ? 1 : 0) << ',' << format_double(row.time) << ','
        << format_double(row.length) << ',' << row.iterations << ',' << row.patches_attempted
        << ',' << row.patches_succeeded << ',' << format_path_field(row.path) << "\n";
  }
  return out.str();
}

// Minimal hand-emitted SVG bar chart of mean planning times per method.
inline std::string times_svg(const BenchmarkReport& report) {
  const int width = 640, height = 360;
  const int margin_left = 70, margin_bottom = 60, margin_top = 30, margin_right = 20;
  const int plot_w = width - margin_left - margin_right;
  const int plot_h = height - margin_top - margin_bottom;
  double max_time = 0.0;
  for (const auto& a : report.aggregates) max_time = std::max(max_time, a.mean_time);
  if (max_time <= 0.0) max_time = 1.0;

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\">\n";
  out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "  <text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
      << "Mean planning time per query (s)</text>\n";
  out << "  <line x1=\"" << margin_left << "\" y1=\"" << margin_top << "\" x2=\"" << margin_left
      << "\" y2=\"" << margin_top + plot_h << "\" stroke=\"black\"/>\n";
  out << "  <line x1=\"" << margin_left << "\" y1=\"" << margin_top + plot_h << "\" x2=\""
      << margin_left + plot_w << "\" y2=\"" << margin_top + plot_h << "\" stroke=\"black\"/>\n";
  const std::size_t n = report.aggregates.size();
  const double slot = n > 0 ? static_cast<double>(plot_w) / static_cast<double>(n) : plot_w;
  for (std::size_t i = 0; i < n; ++i) {
    const MethodAggregate& a = report.aggregates[i];
    const double bar_w = slot * 0.6;
    const double x = margin_left + slot * (static_cast<double>(i) + 0.2);
    const double h = plot_h * (a.mean_time / max_time);
    const double y = margin_top + plot_h - h;
    out << "  <rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << bar_w << "\" height=\"" << h
        << "\" fill=\"#4878a8\"/>\n";
    out << "  <text x=\"" << x + bar_w / 2 << "\" y=\"" << y - 4
        << "\" text-anchor=\"middle\" font-size=\"11\">" << format_double(a.mean_time)
        << "</text>\n";
    out << "  <text x=\"" << x + bar_w / 2 << "\" y=\"" << margin_top + plot_h + 16
        << "\" text-anchor=\"middle\" font-size=\"11\">" << method_name(a.method) << "</text>\n";
  }
  out << "  <text x=\"" << margin_left - 6 << "\" y=\"" << margin_top + 4
      << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(max_time) << "</text>\n";
  out << "  <text x=\"" << margin_left - 6 << "\" y=\"" << margin_top + plot_h + 4
      << "\" text-anchor=\"end\" font-size=\"11\">0</text>\n";
  out << "</svg>\n";
  return out.str();
}

inline void write_benchmark_outputs(const BenchmarkReport& report, const std::string& out_dir) {
  auto write = [&](const std::string& name, const std::string& content) {
    const std::string path = out_dir + "/" + name;
    std::ofstream out(path);
    if (!out) throw FormatError("benchmark: cannot write '" + path + "'");
    out << content;
  };
  write("report.csv", report_csv(report));
  write("queries.csv", queries_csv(report));
  write("times.svg", times_svg(report));
}

}  // namespace ppcnet
