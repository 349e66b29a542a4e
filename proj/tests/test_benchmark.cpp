// Benchmark harness: shared query sets, per-leg seed isolation, aggregate
// arithmetic, and report serialization. Aggregates are verified against
// independent recomputation from the raw leg rows.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ppcnet/ppcnet.hpp"

using namespace ppcnet;

namespace {

struct LearnedStack {
  Mlp planner;
  Mlp collision;
};

// Random-initialized nets of the right shape: benchmark structure does not
// depend on training quality.
LearnedStack random_stack(const Environment& env, std::uint64_t seed) {
  LearnedStack stack;
  stack.planner = make_planner_net(env, {16, 16}, 0.5);
  stack.collision = make_collision_net(env, {16, 16}, 0.1);
  Rng rng(seed);
  stack.planner.init_random(rng);
  stack.collision.init_random(rng);
  return stack;
}

BenchmarkInputs small_inputs(const LearnedStack& stack) {
  BenchmarkInputs in;
  in.n_queries = 6;
  in.seed = derive_seed(41, 1, 0, 0);
  in.birrt.max_iterations = 300;
  in.birrt.max_time = 1.0;
  in.rrtstar.max_iterations = 150;
  in.rrtstar.max_time = 1.0;
  in.plan.s_max = 25;
  in.plan.expert = in.birrt;
  in.planner_binary = &stack.planner;
  in.collision_binary = &stack.collision;
  in.planner_population = &stack.planner;
  in.collision_population = &stack.collision;
  return in;
}

bool same_non_timing(const LegRow& a, const LegRow& b) {
  if (a.method != b.method || a.query != b.query || a.leg != b.leg) return false;
  if (a.success != b.success || a.length != b.length || a.iterations != b.iterations) return false;
  if (a.patches_attempted != b.patches_attempted) return false;
  if (a.patches_succeeded != b.patches_succeeded) return false;
  if (a.path.size() != b.path.size()) return false;
  for (std::size_t i = 0; i < a.path.size(); ++i) {
    if (a.path[i] != b.path[i]) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("method names round-trip") {
  const Method all[] = {Method::BiRrt, Method::InformedRrtStar, Method::PpcnetBinary,
                        Method::PpcnetPopulation, Method::MpnetAblation};
  for (const Method m : all) {
    REQUIRE(parse_method(method_name(m)) == m);
  }
  REQUIRE(method_name(Method::BiRrt) == "bi-rrt");
  REQUIRE(method_name(Method::InformedRrtStar) == "informed-rrt*");
  REQUIRE(method_name(Method::PpcnetPopulation) == "ppcnet-population");
  REQUIRE_THROWS_AS(parse_method("prm"), FormatError);
}

TEST_CASE("query set depends only on the seed") {
  const Environment env = make_point2d_environment();
  const LearnedStack stack = random_stack(env, derive_seed(41, 2, 0, 0));
  BenchmarkInputs in = small_inputs(stack);
  in.methods = {Method::BiRrt};
  const BenchmarkReport a = run_benchmark(env, in);
  in.methods = {Method::BiRrt, Method::InformedRrtStar};  // different workload
  const BenchmarkReport b = run_benchmark(env, in);
  REQUIRE(a.picks.size() == b.picks.size());
  for (std::size_t i = 0; i < a.picks.size(); ++i) {
    REQUIRE(a.picks[i] == b.picks[i]);
    REQUIRE(within_limits(env, a.picks[i]));
    REQUIRE(is_config_free(env, a.picks[i]));
    REQUIRE(env.bin_region.contains(end_effector(env, a.picks[i])));
  }

  SECTION("a method's rows do not depend on which other methods run") {
    int compared = 0;
    for (const LegRow& ra : a.legs) {
      for (const LegRow& rb : b.legs) {
        if (rb.method == ra.method && rb.query == ra.query && rb.leg == ra.leg) {
          REQUIRE(same_non_timing(ra, rb));
          ++compared;
        }
      }
    }
    REQUIRE(compared == static_cast<int>(a.legs.size()));
  }
}

TEST_CASE("benchmark runs every requested method on both legs") {
  const Environment env = make_point2d_environment();
  const LearnedStack stack = random_stack(env, derive_seed(41, 3, 0, 0));
  BenchmarkInputs in = small_inputs(stack);
  in.methods = {Method::BiRrt, Method::InformedRrtStar, Method::PpcnetBinary,
                Method::PpcnetPopulation, Method::MpnetAblation};
  const BenchmarkReport report = run_benchmark(env, in);

  REQUIRE(report.legs.size() == in.methods.size() * 2 * in.n_queries);
  REQUIRE(report.aggregates.size() == in.methods.size());
  for (std::size_t mi = 0; mi < in.methods.size(); ++mi) {
    REQUIRE(report.aggregates[mi].method == in.methods[mi]);
    REQUIRE(report.aggregates[mi].queries == in.n_queries);
  }
  // Per-leg bookkeeping: every (method, query, leg) triple appears exactly once.
  for (const Method m : in.methods) {
    for (int q = 0; q < in.n_queries; ++q) {
      for (int leg = 0; leg < 2; ++leg) {
        int count = 0;
        for (const LegRow& row : report.legs) {
          if (row.method == m && row.query == q && row.leg == leg) ++count;
        }
        REQUIRE(count == 1);
      }
    }
  }
  // The classical planner must solve this easy scene.
  REQUIRE(report.aggregates[0].successes == in.n_queries);

  SECTION("successful rows replay through the exact oracle") {
    int replayed = 0;
    for (const LegRow& row : report.legs) {
      if (!row.success) continue;
      REQUIRE(row.path.size() >= 2);
      REQUIRE(is_feasible(env, row.path, in.plan.resolution));
      REQUIRE(row.length == Catch::Approx(path_length(row.path)).margin(1e-12));
      const Configuration expected_from = row.leg == 0 ? env.home : report.picks[row.query];
      const Configuration expected_to = row.leg == 0 ? report.picks[row.query] : env.place;
      REQUIRE(row.path.front() == expected_from);
      REQUIRE(row.path.back() == expected_to);
      ++replayed;
    }
    REQUIRE(replayed > 0);
  }

  SECTION("aggregates match independent recomputation") {
    for (const MethodAggregate& agg : report.aggregates) {
      std::vector<double> times, lengths;
      int patching = 0, total = 0;
      for (int q = 0; q < in.n_queries; ++q) {
        const LegRow *pick = nullptr, *place = nullptr;
        for (const LegRow& row : report.legs) {
          if (row.method != agg.method || row.query != q) continue;
          ++total;
          if (row.patches_attempted > 0) ++patching;
          (row.leg == 0 ? pick : place) = &row;
        }
        if (pick->success && place->success) {
          times.push_back(pick->time + place->time);
          lengths.push_back(pick->length + place->length);
        }
      }
      REQUIRE(agg.successes == static_cast<int>(times.size()));
      REQUIRE(agg.success_rate_pct ==
              Catch::Approx(100.0 * times.size() / in.n_queries).margin(1e-9));
      REQUIRE(agg.patch_rate_pct == Catch::Approx(100.0 * patching / total).margin(1e-9));
      double mu_t = 0, mu_l = 0;
      for (double t : times) mu_t += t;
      for (double l : lengths) mu_l += l;
      mu_t = times.empty() ? 0.0 : mu_t / times.size();
      mu_l = lengths.empty() ? 0.0 : mu_l / lengths.size();
      double var_t = 0, var_l = 0;
      for (double t : times) var_t += (t - mu_t) * (t - mu_t);
      for (double l : lengths) var_l += (l - mu_l) * (l - mu_l);
      const double std_t = times.empty() ? 0.0 : std::sqrt(var_t / times.size());
      const double std_l = lengths.empty() ? 0.0 : std::sqrt(var_l / lengths.size());
      REQUIRE(agg.mean_time == Catch::Approx(mu_t).margin(1e-9));
      REQUIRE(agg.std_time == Catch::Approx(std_t).margin(1e-9));
      REQUIRE(agg.mean_length == Catch::Approx(mu_l).margin(1e-9));
      REQUIRE(agg.std_length == Catch::Approx(std_l).margin(1e-9));
      if (agg.successes > 0) {
        REQUIRE(agg.mean_time ==
                Catch::Approx(agg.mean_time_pick + agg.mean_time_place).margin(1e-9));
        REQUIRE(agg.mean_length ==
                Catch::Approx(agg.mean_length_pick + agg.mean_length_place).margin(1e-9));
      }
    }
  }
}

TEST_CASE("repeated runs are identical in every non-timing column") {
  const Environment env = make_point2d_environment();
  const LearnedStack stack = random_stack(env, derive_seed(41, 4, 0, 0));
  BenchmarkInputs in = small_inputs(stack);
  in.methods = {Method::BiRrt, Method::PpcnetPopulation};
  const BenchmarkReport a = run_benchmark(env, in);
  const BenchmarkReport b = run_benchmark(env, in);
  REQUIRE(a.legs.size() == b.legs.size());
  for (std::size_t i = 0; i < a.legs.size(); ++i) {
    REQUIRE(same_non_timing(a.legs[i], b.legs[i]));
  }
  // The serialized per-leg CSV is byte-identical after stripping time fields.
  auto strip_time = [](const std::string& csv) {
    std::istringstream lines(csv);
    std::ostringstream out;
    std::string line;
    while (std::getline(lines, line)) {
      std::vector<std::string> fields;
      std::istringstream row(line);
      std::string f;
      while (std::getline(row, f, ',')) fields.push_back(f);
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i == 4) continue;  // time_s
        out << fields[i] << ',';
      }
      out << '\n';
    }
    return out.str();
  };
  REQUIRE(strip_time(queries_csv(a)) == strip_time(queries_csv(b)));
}

TEST_CASE("path fields round-trip exactly") {
  Path path;
  Configuration a(3), b(3);
  a << 0.1, -2.25, M_PI;
  b << 1e-17, 3.0, -0.7500000000000001;
  path.push_back(a);
  path.push_back(b);
  const std::string field = format_path_field(path);
  const Path back = parse_path_field(field);
  REQUIRE(back.size() == 2);
  REQUIRE(back[0] == a);
  REQUIRE(back[1] == b);
  REQUIRE(format_path_field({}) == "");
  REQUIRE(parse_path_field("").empty());
}

TEST_CASE("csv reports have the documented shape") {
  const Environment env = make_point2d_environment();
  const LearnedStack stack = random_stack(env, derive_seed(41, 5, 0, 0));
  BenchmarkInputs in = small_inputs(stack);
  in.n_queries = 3;
  in.methods = {Method::BiRrt};
  const BenchmarkReport report = run_benchmark(env, in);

  const std::string agg_csv = report_csv(report);
  std::istringstream agg_lines(agg_csv);
  std::string line;
  REQUIRE(std::getline(agg_lines, line));
  REQUIRE(line.front() == '#');
  REQUIRE(std::getline(agg_lines, line));
  REQUIRE(line ==
          "method,queries,successes,success_rate_pct,mean_time_s,std_time_s,mean_length_rad,"
          "std_length_rad,mean_time_pick_s,mean_time_place_s,mean_length_pick_rad,"
          "mean_length_place_rad,patch_rate_pct");
  REQUIRE(std::getline(agg_lines, line));
  REQUIRE(line.rfind("bi-rrt,3,", 0) == 0);

  const std::string legs_csv = queries_csv(report);
  std::istringstream leg_lines(legs_csv);
  REQUIRE(std::getline(leg_lines, line));
  REQUIRE(line.front() == '#');
  REQUIRE(std::getline(leg_lines, line));
  REQUIRE(line ==
          "method,query,leg,success,time_s,length_rad,iterations,patches_attempted,"
          "patches_succeeded,path");
  int rows = 0;
  while (std::getline(leg_lines, line)) {
    ++rows;
    // 10 columns; the path column may itself contain spaces and semicolons
    // but no commas.
    REQUIRE(static_cast<int>(std::count(line.begin(), line.end(), ',')) == 9);
    REQUIRE(line.rfind("bi-rrt,", 0) == 0);
  }
  REQUIRE(rows == 2 * in.n_queries);
}

TEST_CASE("svg chart draws one labeled bar per method") {
  const Environment env = make_point2d_environment();
  const LearnedStack stack = random_stack(env, derive_seed(41, 6, 0, 0));
  BenchmarkInputs in = small_inputs(stack);
  in.n_queries = 2;
  in.methods = {Method::BiRrt, Method::MpnetAblation};
  const BenchmarkReport report = run_benchmark(env, in);
  const std::string svg = times_svg(report);
  REQUIRE(svg.rfind("<svg", 0) == 0);
  REQUIRE(svg.find("</svg>") != std::string::npos);
  std::size_t bars = 0, pos = 0;
  while ((pos = svg.find("fill=\"#4878a8\"", pos)) != std::string::npos) {
    ++bars;
    pos += 1;
  }
  REQUIRE(bars == in.methods.size());
  REQUIRE(svg.find(">bi-rrt<") != std::string::npos);
  REQUIRE(svg.find(">mpnet-ablation<") != std::string::npos);
}

TEST_CASE("benchmark outputs land in the requested directory") {
  const Environment env = make_point2d_environment();
  const LearnedStack stack = random_stack(env, derive_seed(41, 7, 0, 0));
  BenchmarkInputs in = small_inputs(stack);
  in.n_queries = 2;
  in.methods = {Method::BiRrt};
  const BenchmarkReport report = run_benchmark(env, in);

  const std::string dir = "/tmp/ppcnet_test_bench_out";
  std::filesystem::create_directories(dir);
  write_benchmark_outputs(report, dir);
  for (const std::string name : {"report.csv", "queries.csv", "times.svg"}) {
    std::ifstream file(dir + "/" + name);
    REQUIRE(file.good());
    std::ostringstream content;
    content << file.rdbuf();
    REQUIRE_FALSE(content.str().empty());
  }
  std::filesystem::remove_all(dir);
  REQUIRE_THROWS_AS(write_benchmark_outputs(report, "/nonexistent_dir_xyz"), FormatError);
}

TEST_CASE("benchmark contract checks") {
  const Environment env = make_point2d_environment();
  const LearnedStack stack = random_stack(env, derive_seed(41, 8, 0, 0));
  BenchmarkInputs in = small_inputs(stack);

  SECTION("no methods") {
    in.methods = {};
    REQUIRE_THROWS_AS(run_benchmark(env, in), ContractError);
  }
  SECTION("bad query count") {
    in.methods = {Method::BiRrt};
    in.n_queries = 0;
    REQUIRE_THROWS_AS(run_benchmark(env, in), ContractError);
  }
  SECTION("learned methods need their checkpoints") {
    in.methods = {Method::PpcnetBinary};
    in.planner_binary = nullptr;
    REQUIRE_THROWS_AS(run_benchmark(env, in), ContractError);
    in.methods = {Method::PpcnetPopulation};
    in.collision_population = nullptr;
    in.planner_population = nullptr;
    REQUIRE_THROWS_AS(run_benchmark(env, in), ContractError);
    in.methods = {Method::MpnetAblation};
    in.planner_binary = nullptr;
    REQUIRE_THROWS_AS(run_benchmark(env, in), ContractError);
  }
  SECTION("ablation accepts either planner checkpoint") {
    in.methods = {Method::MpnetAblation};
    in.planner_population = nullptr;
    in.collision_population = nullptr;
    in.collision_binary = nullptr;  // the ablation probes the exact oracle
    REQUIRE_NOTHROW(run_benchmark(env, in));
  }
}
