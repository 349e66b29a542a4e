// Command-line front end: environment generation, dataset generation, DAGGER
// training, single-query planning, benchmarking, and artifact inspection.

#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ppcnet/ppcnet.hpp"

namespace {

using namespace ppcnet;

Configuration parse_config_values(const std::string& text, int dof, const char* what) {
  std::istringstream in(text);
  std::vector<double> values;
  double v;
  while (in >> v) values.push_back(v);
  if (static_cast<int>(values.size()) != dof) {
    throw FormatError(std::string(what) + ": expected " + std::to_string(dof) +
                      " values, got " + std::to_string(values.size()));
  }
  Configuration q(dof);
  for (int i = 0; i < dof; ++i) q[i] = values[static_cast<std::size_t>(i)];
  return q;
}

TrainConfig load_config_or_default(const std::string& path) {
  if (path.empty()) return TrainConfig{};
  return load_train_config(path);
}

// "role=path" pairs from repeated --checkpoint flags.
std::map<std::string, std::string> parse_checkpoint_roles(const std::vector<std::string>& specs) {
  std::map<std::string, std::string> roles;
  for (const std::string& spec : specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) {
      throw FormatError("--checkpoint expects role=path, got '" + spec + "'");
    }
    roles[spec.substr(0, eq)] = spec.substr(eq + 1);
  }
  return roles;
}

int run_gen_env(const std::string& preset, const std::string& out) {
  const Environment env = make_preset_environment(preset);
  save_environment(env, out);
  std::cout << "wrote " << out << " (hash " << environment_hash(env) << ")\n";
  return 0;
}

int run_gen_data(const std::string& env_path, const std::string& config_path, std::uint64_t seed,
                 const std::string& out_dir) {
  const Environment env = load_environment(env_path);
  const TrainConfig cfg = load_config_or_default(config_path);
  std::filesystem::create_directories(out_dir);
  Dataset data(environment_hash(env));
  Rng rng(derive_seed(seed, 1, 0, 0));
  const InitialDemoStats stats = generate_initial_demos(env, cfg, data, rng);
  if (cfg.label_mode == LabelMode::Population) data.label_all_population(cfg.radius);
  data.save_planner(out_dir + "/planner.D");
  data.save_collision(out_dir + "/collision.C");
  std::cout << "queries " << stats.queries << ", expert failures " << stats.expert_failures
            << "\nplanner rows " << data.planner_samples().size() << " -> " << out_dir
            << "/planner.D\ncollision rows " << data.collision_samples().size() << " -> "
            << out_dir << "/collision.C\n";
  return 0;
}

int run_train(const std::string& env_path, const std::string& config_path, std::uint64_t seed,
              const std::string& data_dir, const std::string& out_dir) {
  const Environment env = load_environment(env_path);
  std::filesystem::create_directories(out_dir);
  TrainContext ctx;
  ctx.env = &env;
  ctx.cfg = load_config_or_default(config_path);
  ctx.rng.seed(derive_seed(seed, 2, 0, 0));
  ctx.data.set_env_hash(environment_hash(env));
  if (!data_dir.empty()) {
    ctx.data.load_planner(data_dir + "/planner.D");
    ctx.data.load_collision(data_dir + "/collision.C");
    std::cout << "loaded " << ctx.data.planner_samples().size() << " planner rows, "
              << ctx.data.collision_samples().size() << " collision rows\n";
  }
  ctx.planner = make_planner_net(env, ctx.cfg.planner_hidden, ctx.cfg.planner_dropout);
  ctx.collision = make_collision_net(env, ctx.cfg.collision_hidden, ctx.cfg.collision_dropout);

  std::ofstream log(out_dir + "/train_log.csv");
  log << round_report_csv_header() << "\n";
  TrainCallbacks callbacks;
  callbacks.on_round = [&](const TrainContext& c, const RoundReport& r) {
    log << round_report_csv_row(r) << "\n";
    log.flush();
    std::ostringstream tag;
    tag << out_dir << "/round_" << r.round << "_";
    save_checkpoint(c.planner, tag.str() + "planner.ckpt");
    save_checkpoint(c.collision, tag.str() + "collision.ckpt");
    std::cout << "round " << r.round << ": success " << r.success_rate << ", |D| "
              << r.planner_rows << ", |C| " << r.collision_rows << "\n";
  };
  const std::vector<RoundReport> reports = run_training(ctx, callbacks);
  save_checkpoint(ctx.planner, out_dir + "/planner.ckpt");
  save_checkpoint(ctx.collision, out_dir + "/collision.ckpt");
  ctx.data.save_planner(out_dir + "/planner.D");
  ctx.data.save_collision(out_dir + "/collision.C");
  std::cout << "rounds " << reports.size() << ", final success "
            << (reports.empty() ? 0.0 : reports.back().success_rate) << "\nartifacts in "
            << out_dir << "\n";
  return 0;
}

int run_plan(const std::string& env_path, const std::string& config_path,
             const std::vector<std::string>& checkpoints, bool oracle, std::uint64_t seed,
             const std::string& start_text, const std::string& goal_text) {
  const Environment env = load_environment(env_path);
  const TrainConfig cfg = load_config_or_default(config_path);
  const auto roles = parse_checkpoint_roles(checkpoints);
  if (!roles.count("planner")) throw FormatError("plan: needs --checkpoint planner=FILE");
  const Mlp planner = load_checkpoint(roles.at("planner"));
  Mlp collision;
  if (!oracle) {
    if (!roles.count("collision")) {
      throw FormatError("plan: needs --checkpoint collision=FILE (or --oracle)");
    }
    collision = load_checkpoint(roles.at("collision"));
  }
  const Configuration start = start_text.empty()
                                  ? env.home
                                  : parse_config_values(start_text, env.dof, "--start");
  const Configuration goal =
      goal_text.empty() ? env.place : parse_config_values(goal_text, env.dof, "--goal");

  PlanParams plan = cfg.plan;
  plan.expert = cfg.expert;
  Rng rng(derive_seed(seed, 3, 0, 0));
  const CollisionProbe probe =
      oracle ? make_oracle_probe(env, plan.resolution) : make_net_probe(collision);
  const PlanResult res = ppcnet_plan(env, planner, probe, start, goal, plan, rng);
  if (!res.success) {
    std::cout << "failure after " << res.iterations << " iterations ("
              << format_double(res.elapsed) << " s)\n";
    return 2;
  }
  std::cout << "success: " << res.path.size() << " waypoints, length "
            << format_double(res.length) << " rad, " << format_double(res.elapsed) << " s, "
            << res.patches_succeeded << "/" << res.patches_attempted << " patches\n";
  for (const Configuration& q : res.path) {
    for (Eigen::Index i = 0; i < q.size(); ++i) {
      std::cout << (i ? " " : "") << format_double(q[i]);
    }
    std::cout << "\n";
  }
  return 0;
}

int run_bench(const std::string& env_path, const std::string& config_path, std::uint64_t seed,
              int n, const std::string& methods_text, const std::string& out_dir,
              const std::vector<std::string>& checkpoints) {
  const Environment env = load_environment(env_path);
  const TrainConfig cfg = load_config_or_default(config_path);
  std::filesystem::create_directories(out_dir);

  BenchmarkInputs in;
  in.n_queries = n;
  in.seed = seed;
  in.birrt = cfg.expert;
  in.plan = cfg.plan;
  in.plan.expert = cfg.expert;
  std::istringstream methods(methods_text);
  std::string token;
  while (std::getline(methods, token, ',')) {
    if (!token.empty()) in.methods.push_back(parse_method(token));
  }

  const auto roles = parse_checkpoint_roles(checkpoints);
  Mlp planner_binary, collision_binary, planner_population, collision_population;
  auto load_role = [&roles](const char* role, Mlp& slot) -> const Mlp* {
    const auto it = roles.find(role);
    if (it == roles.end()) return nullptr;
    slot = load_checkpoint(it->second);
    return &slot;
  };
  in.planner_binary = load_role("planner-binary", planner_binary);
  in.collision_binary = load_role("collision-binary", collision_binary);
  in.planner_population = load_role("planner-population", planner_population);
  in.collision_population = load_role("collision-population", collision_population);

  const BenchmarkReport report = run_benchmark(env, in);
  write_benchmark_outputs(report, out_dir);
  std::cout << report_csv(report) << "wrote report.csv, queries.csv, times.svg to " << out_dir
            << "\n";
  return 0;
}

int run_inspect(const std::string& data_path, const std::string& checkpoint_path,
                const std::string& env_path) {
  if (!env_path.empty()) {
    const Environment env = load_environment(env_path);
    std::cout << "environment: dof " << env.dof << ", "
              << (env.robot == RobotKind::PlanarArm ? "planar-arm" : "point-2d") << ", "
              << env.circles.size() << " circles, " << env.rects.size() << " rects, hash "
              << environment_hash(env) << "\n";
  }
  if (!data_path.empty()) {
    std::ifstream probe(data_path);
    if (!probe) throw FormatError("inspect: cannot open '" + data_path + "'");
    std::string magic;
    probe >> magic;
    Dataset data;
    if (magic == "ppcnet-planner-data") {
      data.load_planner(data_path);
      std::cout << "planner dataset: " << data.planner_samples().size()
                << " rows, env hash " << data.env_hash() << "\n";
    } else if (magic == "ppcnet-collision-data") {
      data.load_collision(data_path);
      std::size_t free_rows = 0, labeled = 0;
      for (const auto& s : data.collision_samples()) {
        free_rows += s.free ? 1 : 0;
        labeled += s.has_population_label() ? 1 : 0;
      }
      std::cout << "collision dataset: " << data.collision_samples().size() << " rows, "
                << free_rows << " free, " << labeled << " population-labeled, env hash "
                << data.env_hash() << "\n";
    } else {
      throw FormatError("inspect: unrecognized dataset magic '" + magic + "'");
    }
  }
  if (!checkpoint_path.empty()) {
    const Mlp net = load_checkpoint(checkpoint_path);
    std::cout << "checkpoint: layers";
    for (int s : net.layer_sizes()) std::cout << " " << s;
    std::cout << ", head " << (net.head() == OutputHead::Regression ? "regression" : "logit")
              << ", dropout " << format_double(net.dropout_rate()) << ", parameters "
              << net.parameter_count() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PPCNet: learned sequential planning with a learned proxy collision checker"};
  app.require_subcommand(1);

  std::string env_path, config_path, out_path, data_dir, preset = "arm4";
  std::string start_text, goal_text, methods_text =
      "bi-rrt,informed-rrt*,ppcnet-binary,ppcnet-population,mpnet-ablation";
  std::string inspect_data, inspect_ckpt, inspect_env;
  std::vector<std::string> checkpoints;
  std::uint64_t seed = 0;
  int n = 500;
  bool oracle = false;

  auto* gen_env = app.add_subcommand("gen-env", "Write a reference environment file");
  gen_env->add_option("--preset", preset, "arm4 or point2d")->capture_default_str();
  gen_env->add_option("--out", out_path, "output file")->required();

  auto* gen_data = app.add_subcommand("gen-data", "Generate initial expert demonstrations");
  gen_data->add_option("--env", env_path, "environment file")->required();
  gen_data->add_option("--config", config_path, "training config file");
  gen_data->add_option("--seed", seed, "rng seed")->capture_default_str();
  gen_data->add_option("--out", out_path, "output directory")->required();

  auto* train = app.add_subcommand("train", "Run the full imitation-learning loop");
  train->add_option("--env", env_path, "environment file")->required();
  train->add_option("--config", config_path, "training config file");
  train->add_option("--seed", seed, "rng seed")->capture_default_str();
  train->add_option("--data", data_dir, "directory with pre-generated planner.D/collision.C");
  train->add_option("--out", out_path, "output directory")->required();

  auto* plan = app.add_subcommand("plan", "Answer one planning query from checkpoints");
  plan->add_option("--env", env_path, "environment file")->required();
  plan->add_option("--config", config_path, "training config file (for planner params)");
  plan->add_option("--checkpoint", checkpoints,
                   "role=path; roles: planner, collision")->expected(-1);
  plan->add_flag("--oracle", oracle, "use the exact oracle instead of a collision checkpoint");
  plan->add_option("--seed", seed, "rng seed")->capture_default_str();
  plan->add_option("--start", start_text, "start configuration, space-separated (default: home)");
  plan->add_option("--goal", goal_text, "goal configuration, space-separated (default: place)");

  auto* bench = app.add_subcommand("bench", "Benchmark methods on shared random queries");
  bench->add_option("--env", env_path, "environment file")->required();
  bench->add_option("--config", config_path, "training config file (for method params)");
  bench->add_option("--seed", seed, "rng seed")->capture_default_str();
  bench->add_option("--n", n, "number of pick-and-place queries")->capture_default_str();
  bench->add_option("--methods", methods_text, "comma-separated method list")
      ->capture_default_str();
  bench->add_option("--out", out_path, "output directory")->required();
  bench->add_option("--checkpoint", checkpoints,
                    "role=path; roles: planner-binary, collision-binary, planner-population, "
                    "collision-population")->expected(-1);

  auto* inspect = app.add_subcommand("inspect", "Print dataset/checkpoint/environment statistics");
  inspect->add_option("--data", inspect_data, "dataset file (planner.D or collision.C)");
  inspect->add_option("--checkpoint", inspect_ckpt, "checkpoint file");
  inspect->add_option("--env", inspect_env, "environment file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_env->parsed()) return run_gen_env(preset, out_path);
    if (gen_data->parsed()) return run_gen_data(env_path, config_path, seed, out_path);
    if (train->parsed()) return run_train(env_path, config_path, seed, data_dir, out_path);
    if (plan->parsed()) {
      return run_plan(env_path, config_path, checkpoints, oracle, seed, start_text, goal_text);
    }
    if (bench->parsed()) {
      return run_bench(env_path, config_path, seed, n, methods_text, out_path, checkpoints);
    }
    if (inspect->parsed()) return run_inspect(inspect_data, inspect_ckpt, inspect_env);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
