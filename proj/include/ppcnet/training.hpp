#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ppcnet/core.hpp"
#include "ppcnet/dataset.hpp"
#include "ppcnet/environment.hpp"
#include "ppcnet/expert.hpp"
#include "ppcnet/inference.hpp"
#include "ppcnet/mlp.hpp"
#include "ppcnet/postprocess.hpp"

namespace ppcnet {

enum class LabelMode { Binary, Population };

struct TrainConfig {
  // Aggregation loop.
  int T = 500;                  // initial demonstration queries
  int T_prime = 50;             // policy rollouts per round
  int S = 200;                  // states relabeled by the expert per round
  double zeta = 0.9;            // required policy success rate (early exit when exceeded)
  int dagger_rounds_max = 30;
  LabelMode label_mode = LabelMode::Population;
  double radius = 0.4;          // rad, population-label neighborhood
  int test_queries = 100;       // policy evaluation queries per round
  // Continue training the same networks round over round (first round still
  // starts fresh). The alternative re-initializes both nets every round.
  bool warm_start = true;

  // Expert and post-processing.
  BirrtParams expert;
  double resample_step = 0.1745;

  // Policy execution.
  PlanParams plan;

  // Networks and optimizer.
  std::vector<int> planner_hidden = {128, 128};
  std::vector<int> collision_hidden = {64, 64};
  double planner_dropout = 0.5;
  double collision_dropout = 0.1;
  int planner_epochs = 100;
  int collision_epochs = 12;
  int batch_size = 256;
  double learning_rate = 1e-4;
  // Per-round cap on collision rows fed to the optimizer (random subsample;
  // the stored dataset itself is never trimmed). 0 disables the cap.
  int collision_train_cap = 150000;
  // Cap on oracle events kept per expert call (random subsample of the call's
  // raw events); bounds dataset growth and labeling cost. 0 keeps every event.
  int event_cap_per_call = 120;

  void validate() const {
    if (T < 1 || T_prime < 1 || S < 1) throw ContractError("train config: counts must be >= 1");
    if (zeta <= 0.0 || zeta > 1.0) throw ContractError("train config: zeta must be in (0,1]");
    if (dagger_rounds_max < 1) throw ContractError("train config: rounds must be >= 1");
    if (radius <= 0.0) throw ContractError("train config: radius must be > 0");
    if (test_queries < 1) throw ContractError("train config: test_queries must be >= 1");
    if (resample_step <= 0.0) throw ContractError("train config: resample_step must be > 0");
    if (planner_epochs < 1 || collision_epochs < 1 || batch_size < 1) {
      throw ContractError("train config: training loop constants must be >= 1");
    }
    if (learning_rate <= 0.0) throw ContractError("train config: learning rate must be > 0");
  }
};

struct RoundReport {
  int round = 0;
  std::size_t planner_rows = 0;
  std::size_t collision_rows = 0;
  double success_rate = 0.0;   // policy evaluation, fraction in [0,1]
  double mean_length = 0.0;    // rad, successful queries (both legs summed)
  double mean_time = 0.0;      // seconds, successful queries
  double patch_rate = 0.0;     // fraction of legs that attempted a patch
  int expert_failures = 0;     // skipped relabel queries this round
};

inline Mlp make_planner_net(const Environment& env, const std::vector<int>& hidden,
                            double dropout) {
  std::vector<int> sizes{2 * env.dof};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(env.dof);
  VectorXd lo(2 * env.dof), hi(2 * env.dof);
  lo << env.limit_lo, env.limit_lo;
  hi << env.limit_hi, env.limit_hi;
  return Mlp(sizes, dropout, OutputHead::Regression, lo, hi);
}

inline Mlp make_collision_net(const Environment& env, const std::vector<int>& hidden,
                              double dropout) {
  std::vector<int> sizes{2 * env.dof};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(1);
  VectorXd lo(2 * env.dof), hi(2 * env.dof);
  lo << env.limit_lo, env.limit_lo;
  hi << env.limit_hi, env.limit_hi;
  return Mlp(sizes, dropout, OutputHead::Logit, lo, hi);
}

// --- dataset <-> matrix bridges ----------------------------------------------

// The planner head regresses the step to the next waypoint in units of the
// nominal resample step (see kPlannerStepScale); inference undoes the scaling.
// Raw next-configuration targets keep the loss surface so shallow under heavy
// dropout that the net never beats the identity map on desk-scale budgets.
inline void planner_matrices(const Dataset& data, MatrixXd& inputs, MatrixXd& targets) {
  const auto& rows = data.planner_samples();
  if (rows.empty()) throw ContractError("planner_matrices: empty dataset");
  const Eigen::Index dim = rows.front().current.size();
  inputs.resize(2 * dim, static_cast<Eigen::Index>(rows.size()));
  targets.resize(dim, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    inputs.block(0, static_cast<Eigen::Index>(i), dim, 1) = rows[i].current;
    inputs.block(dim, static_cast<Eigen::Index>(i), dim, 1) = rows[i].goal;
    targets.col(static_cast<Eigen::Index>(i)) =
        (rows[i].next - rows[i].current) / kPlannerStepScale;
  }
}

// Targets are hard oracle verdicts (binary mode) or stored population labels.
inline void collision_matrices(const Dataset& data, LabelMode mode, MatrixXd& inputs,
                               MatrixXd& targets) {
  const auto& rows = data.collision_samples();
  if (rows.empty()) throw ContractError("collision_matrices: empty dataset");
  const Eigen::Index dim = rows.front().segment.start.size();
  inputs.resize(2 * dim, static_cast<Eigen::Index>(rows.size()));
  targets.resize(1, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    inputs.block(0, static_cast<Eigen::Index>(i), dim, 1) = rows[i].segment.start;
    inputs.block(dim, static_cast<Eigen::Index>(i), dim, 1) = rows[i].segment.end;
    if (mode == LabelMode::Population) {
      if (!rows[i].has_population_label()) {
        throw ContractError("collision_matrices: population label missing");
      }
      targets(0, static_cast<Eigen::Index>(i)) = rows[i].population_label;
    } else {
      targets(0, static_cast<Eigen::Index>(i)) = rows[i].free ? 1.0 : 0.0;
    }
  }
}

// --- Alg. 1 phases ------------------------------------------------------------

struct InitialDemoStats {
  int queries = 0;
  int expert_failures = 0;
};

// Appends up to `cap` of the call's events, chosen uniformly without
// replacement (all of them when cap <= 0 or the call produced fewer).
inline int append_events_capped(Dataset& data, std::vector<CollisionEvent> events, int cap,
                                Rng& rng) {
  if (cap > 0 && static_cast<int>(events.size()) > cap) {
    for (int i = 0; i < cap; ++i) {
      std::uniform_int_distribution<int> pick(i, static_cast<int>(events.size()) - 1);
      std::swap(events[static_cast<std::size_t>(i)], events[static_cast<std::size_t>(pick(rng))]);
    }
    events.resize(static_cast<std::size_t>(cap));
  }
  return data.append_collision_events(events);
}

// Expert demonstrations for `T` random bin-pick queries. Each query contributes
// both legs of the pick-and-place task (home -> pick, pick -> place); paths
// are post-processed before entering the planner dataset. Every exact-checker
// verdict along the way enters the collision dataset: the expert's tree events
// (failed queries still yield valid ones) and the contraction probes, which
// concentrate coverage along the corridors the demonstrations teach.
inline InitialDemoStats generate_initial_demos(const Environment& env, const TrainConfig& cfg,
                                               Dataset& data, Rng& rng) {
  InitialDemoStats stats;
  stats.queries = cfg.T;
  const std::vector<Configuration> picks = random_goal_conf(env, cfg.T, rng);
  for (const Configuration& pick : picks) {
    const std::pair<Configuration, Configuration> legs[2] = {{env.home, pick},
                                                             {pick, env.place}};
    for (const auto& [from, to] : legs) {
      ExpertResult res = birrt_plan(env, from, to, cfg.expert, rng);
      append_events_capped(data, std::move(res.events), cfg.event_cap_per_call, rng);
      if (!res.success) {
        ++stats.expert_failures;
        continue;
      }
      std::vector<CollisionEvent> contraction_events;
      const Path processed = post_process(env, res.path, cfg.expert.resolution,
                                          cfg.resample_step, &contraction_events);
      append_events_capped(data, std::move(contraction_events), cfg.event_cap_per_call, rng);
      data.append_demonstration(processed, to);
    }
  }
  return stats;
}

struct RolloutAttempt {
  std::vector<Configuration> visited;
  Configuration target;
  bool success = false;
};

// Executes the current policy (no patching — failures are data) on both legs
// of each query. Oracle verdicts issued during the attempts are recorded into
// `data`'s collision store.
inline std::vector<RolloutAttempt> rollout_policy(const Environment& env, const Mlp& planner_net,
                                                  const CollisionProbe& probe,
                                                  const std::vector<Configuration>& picks,
                                                  const TrainConfig& cfg, Rng& rng,
                                                  Dataset* data) {
  std::vector<RolloutAttempt> attempts;
  PlanParams plan = cfg.plan;
  plan.allow_patching = false;
  for (const Configuration& pick : picks) {
    const std::pair<Configuration, Configuration> legs[2] = {{env.home, pick},
                                                             {pick, env.place}};
    for (const auto& [from, to] : legs) {
      RolloutAttempt attempt;
      attempt.target = to;
      std::vector<CollisionEvent> oracle_events;
      const PlanResult res =
          ppcnet_plan(env, planner_net, probe, from, to, plan, rng, &attempt.visited,
                      &oracle_events);
      attempt.success = res.success;
      if (data) data->append_collision_events(oracle_events);
      attempts.push_back(std::move(attempt));
    }
  }
  return attempts;
}

// Uniform sample without replacement of up to `S` visited states across all
// attempts, each paired with its attempt's goal.
inline std::vector<std::pair<Configuration, Configuration>> sample_states(
    const std::vector<RolloutAttempt>& attempts, int S, Rng& rng) {
  std::vector<std::pair<int, int>> pool;  // (attempt, state) indices
  for (std::size_t a = 0; a < attempts.size(); ++a) {
    for (std::size_t v = 0; v < attempts[a].visited.size(); ++v) {
      pool.emplace_back(static_cast<int>(a), static_cast<int>(v));
    }
  }
  const int take = std::min<int>(S, static_cast<int>(pool.size()));
  for (int i = 0; i < take; ++i) {
    std::uniform_int_distribution<int> pick(i, static_cast<int>(pool.size()) - 1);
    std::swap(pool[i], pool[static_cast<std::size_t>(pick(rng))]);
  }
  std::vector<std::pair<Configuration, Configuration>> out;
  out.reserve(static_cast<std::size_t>(take));
  for (int i = 0; i < take; ++i) {
    const auto& [a, v] = pool[static_cast<std::size_t>(i)];
    out.emplace_back(attempts[static_cast<std::size_t>(a)].visited[static_cast<std::size_t>(v)],
                     attempts[static_cast<std::size_t>(a)].target);
  }
  return out;
}

struct PolicyEvaluation {
  double success_rate = 0.0;
  double mean_length = 0.0;  // successful queries only, both legs summed
  double mean_time = 0.0;
  double patch_rate = 0.0;   // legs attempting >= 1 patch / total legs
};

// Full-pipeline evaluation (patching allowed) on fresh random queries; a query
// succeeds only if both of its legs do.
inline PolicyEvaluation test_policy(const Environment& env, const Mlp& planner_net,
                                    const CollisionProbe& probe, const TrainConfig& cfg,
                                    int n_queries, Rng& rng) {
  PolicyEvaluation eval;
  const std::vector<Configuration> picks = random_goal_conf(env, n_queries, rng);
  int successes = 0;
  int legs_total = 0;
  int legs_patching = 0;
  double sum_length = 0.0, sum_time = 0.0;
  for (const Configuration& pick : picks) {
    const std::pair<Configuration, Configuration> legs[2] = {{env.home, pick},
                                                             {pick, env.place}};
    bool all_ok = true;
    double q_length = 0.0, q_time = 0.0;
    for (const auto& [from, to] : legs) {
      const PlanResult res = ppcnet_plan(env, planner_net, probe, from, to, cfg.plan, rng);
      ++legs_total;
      if (res.patches_attempted > 0) ++legs_patching;
      q_time += res.elapsed;
      q_length += res.length;
      all_ok = all_ok && res.success;
    }
    if (all_ok) {
      ++successes;
      sum_length += q_length;
      sum_time += q_time;
    }
  }
  eval.success_rate = static_cast<double>(successes) / n_queries;
  if (successes > 0) {
    eval.mean_length = sum_length / successes;
    eval.mean_time = sum_time / successes;
  }
  eval.patch_rate = legs_total > 0 ? static_cast<double>(legs_patching) / legs_total : 0.0;
  return eval;
}

// --- training driver -----------------------------------------------------------

struct TrainContext {
  const Environment* env = nullptr;
  TrainConfig cfg;
  Dataset data;
  Mlp planner;
  Mlp collision;
  Rng rng{0};
};

inline void train_planner_on_dataset(TrainContext& ctx) {
  MatrixXd inputs, targets;
  planner_matrices(ctx.data, inputs, targets);
  if (!ctx.cfg.warm_start || ctx.planner.layer_sizes().empty()) {
    ctx.planner = make_planner_net(*ctx.env, ctx.cfg.planner_hidden, ctx.cfg.planner_dropout);
    ctx.planner.init_random(ctx.rng);
  }
  FitParams fp;
  fp.epochs = ctx.cfg.planner_epochs;
  fp.batch_size = ctx.cfg.batch_size;
  fp.lr = ctx.cfg.learning_rate;
  fit(ctx.planner, inputs, targets, LossKind::PlannerMse, fp, ctx.rng);
}

inline void train_collision_on_dataset(TrainContext& ctx) {
  MatrixXd inputs, targets;
  collision_matrices(ctx.data, ctx.cfg.label_mode, inputs, targets);
  const Eigen::Index n = inputs.cols();
  if (ctx.cfg.collision_train_cap > 0 && n > ctx.cfg.collision_train_cap) {
    // Random training-time subsample; the stored dataset keeps every row.
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    const Eigen::Index cap = ctx.cfg.collision_train_cap;
    for (Eigen::Index i = 0; i < cap; ++i) {
      std::uniform_int_distribution<Eigen::Index> pick(i, n - 1);
      std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick(ctx.rng))]);
    }
    MatrixXd in_cap(inputs.rows(), cap), tg_cap(targets.rows(), cap);
    for (Eigen::Index i = 0; i < cap; ++i) {
      in_cap.col(i) = inputs.col(idx[static_cast<std::size_t>(i)]);
      tg_cap.col(i) = targets.col(idx[static_cast<std::size_t>(i)]);
    }
    inputs = std::move(in_cap);
    targets = std::move(tg_cap);
  }
  if (!ctx.cfg.warm_start || ctx.collision.layer_sizes().empty()) {
    ctx.collision =
        make_collision_net(*ctx.env, ctx.cfg.collision_hidden, ctx.cfg.collision_dropout);
    ctx.collision.init_random(ctx.rng);
  }
  FitParams fp;
  fp.epochs = ctx.cfg.collision_epochs;
  fp.batch_size = ctx.cfg.batch_size;
  fp.lr = ctx.cfg.learning_rate;
  fit(ctx.collision, inputs, targets, LossKind::CollisionBce, fp, ctx.rng);
}

inline void relabel_collision_rows(TrainContext& ctx) {
  if (ctx.cfg.label_mode == LabelMode::Population) {
    ctx.data.label_all_population(ctx.cfg.radius);
  } else {
    ctx.data.clear_population_labels();
  }
}

// One DAGGER round: train the policy on the aggregated demonstrations, roll it
// out, let the expert relabel a sample of the visited states, aggregate, then
// refresh labels, retrain the collision net, and evaluate.
inline RoundReport dagger_round(TrainContext& ctx, int round_index) {
  const Environment& env = *ctx.env;
  RoundReport report;
  report.round = round_index;

  train_planner_on_dataset(ctx);

  const std::vector<Configuration> picks = random_goal_conf(env, ctx.cfg.T_prime, ctx.rng);
  const CollisionProbe probe = make_net_probe(ctx.collision);
  const std::vector<RolloutAttempt> attempts =
      rollout_policy(env, ctx.planner, probe, picks, ctx.cfg, ctx.rng, &ctx.data);

  const auto states = sample_states(attempts, ctx.cfg.S, ctx.rng);
  for (const auto& [state, goal] : states) {
    ExpertResult res = birrt_plan(env, state, goal, ctx.cfg.expert, ctx.rng);
    append_events_capped(ctx.data, std::move(res.events), ctx.cfg.event_cap_per_call, ctx.rng);
    if (!res.success) {
      ++report.expert_failures;
      continue;
    }
    if (state == goal) continue;  // degenerate relabel, nothing to imitate
    std::vector<CollisionEvent> contraction_events;
    const Path processed = post_process(env, res.path, ctx.cfg.expert.resolution,
                                        ctx.cfg.resample_step, &contraction_events);
    append_events_capped(ctx.data, std::move(contraction_events), ctx.cfg.event_cap_per_call,
                         ctx.rng);
    ctx.data.append_demonstration(processed, goal);
  }

  relabel_collision_rows(ctx);
  train_collision_on_dataset(ctx);

  const PolicyEvaluation eval = test_policy(env, ctx.planner, make_net_probe(ctx.collision),
                                            ctx.cfg, ctx.cfg.test_queries, ctx.rng);
  report.planner_rows = ctx.data.planner_samples().size();
  report.collision_rows = ctx.data.collision_samples().size();
  report.success_rate = eval.success_rate;
  report.mean_length = eval.mean_length;
  report.mean_time = eval.mean_time;
  report.patch_rate = eval.patch_rate;
  return report;
}

inline std::string round_report_csv_header() {
  return "round,planner_rows,collision_rows,success_rate,mean_length,mean_time,patch_rate,"
         "expert_failures";
}

inline std::string round_report_csv_row(const RoundReport& r) {
  std::ostringstream out;
  out << r.round << ',' << r.planner_rows << ',' << r.collision_rows << ','
      << format_double(r.success_rate) << ',' << format_double(r.mean_length) << ','
      << format_double(r.mean_time) << ',' << format_double(r.patch_rate) << ','
      << r.expert_failures;
  return out.str();
}

struct TrainCallbacks {
  // Called after each round with the fresh report (checkpointing, logging).
  std::function<void(const TrainContext&, const RoundReport&)> on_round;
};

// Full Alg. 1 driver. Seeds the datasets with initial demonstrations (unless
// `ctx.data` already holds planner rows), pre-trains the collision net so the
// first rollouts have a working checker, then iterates DAGGER rounds until the
// success rate exceeds zeta or the round budget is exhausted.
inline std::vector<RoundReport> run_training(TrainContext& ctx,
                                             const TrainCallbacks& callbacks = {}) {
  ctx.cfg.validate();
  if (ctx.data.planner_samples().empty()) {
    generate_initial_demos(*ctx.env, ctx.cfg, ctx.data, ctx.rng);
  }
  relabel_collision_rows(ctx);
  train_collision_on_dataset(ctx);

  std::vector<RoundReport> reports;
  for (int round = 1; round <= ctx.cfg.dagger_rounds_max; ++round) {
    reports.push_back(dagger_round(ctx, round));
    if (callbacks.on_round) callbacks.on_round(ctx, reports.back());
    if (reports.back().success_rate > ctx.cfg.zeta) break;
  }
  return reports;
}

// --- config file i/o ------------------------------------------------------------
//
// Same structured-text family as environment files: magic line
// "ppcnet-train 1", then "key value..." lines, '#' comments, defaults for
// omitted keys.

inline std::string train_config_to_text(const TrainConfig& cfg) {
  std::ostringstream out;
  out << "ppcnet-train 1\n";
  out << "T " << cfg.T << "\n";
  out << "T_prime " << cfg.T_prime << "\n";
  out << "S " << cfg.S << "\n";
  out << "zeta " << format_double(cfg.zeta) << "\n";
  out << "dagger_rounds_max " << cfg.dagger_rounds_max << "\n";
  out << "label_mode " << (cfg.label_mode == LabelMode::Population ? "population" : "binary")
      << "\n";
  out << "radius " << format_double(cfg.radius) << "\n";
  out << "test_queries " << cfg.test_queries << "\n";
  out << "warm_start " << (cfg.warm_start ? 1 : 0) << "\n";
  out << "expert_max_iterations " << cfg.expert.max_iterations << "\n";
  out << "expert_max_time " << format_double(cfg.expert.max_time) << "\n";
  out << "expert_resolution " << format_double(cfg.expert.resolution) << "\n";
  out << "expert_step " << format_double(cfg.expert.step) << "\n";
  out << "resample_step " << format_double(cfg.resample_step) << "\n";
  out << "plan_s_max " << cfg.plan.s_max << "\n";
  out << "plan_threshold " << format_double(cfg.plan.threshold) << "\n";
  out << "plan_resolution " << format_double(cfg.plan.resolution) << "\n";
  out << "plan_step_clamp " << format_double(cfg.plan.step_clamp) << "\n";
  out << "planner_hidden";
  for (int h : cfg.planner_hidden) out << ' ' << h;
  out << "\n";
  out << "collision_hidden";
  for (int h : cfg.collision_hidden) out << ' ' << h;
  out << "\n";
  out << "planner_dropout " << format_double(cfg.planner_dropout) << "\n";
  out << "collision_dropout " << format_double(cfg.collision_dropout) << "\n";
  out << "planner_epochs " << cfg.planner_epochs << "\n";
  out << "collision_epochs " << cfg.collision_epochs << "\n";
  out << "batch_size " << cfg.batch_size << "\n";
  out << "learning_rate " << format_double(cfg.learning_rate) << "\n";
  out << "collision_train_cap " << cfg.collision_train_cap << "\n";
  out << "event_cap_per_call " << cfg.event_cap_per_call << "\n";
  return out.str();
}

inline TrainConfig parse_train_config(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "ppcnet-train 1") {
    throw FormatError("train config: missing 'ppcnet-train 1' header");
  }
  TrainConfig cfg;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    std::string key;
    if (!(row >> key)) continue;
    auto read_int = [&row, &key]() {
      int v;
      if (!(row >> v)) throw FormatError("train config: bad value for '" + key + "'");
      return v;
    };
    auto read_double = [&row, &key]() {
      double v;
      if (!(row >> v)) throw FormatError("train config: bad value for '" + key + "'");
      return v;
    };
    auto read_int_list = [&row]() {
      std::vector<int> v;
      int x;
      while (row >> x) v.push_back(x);
      return v;
    };
    if (key == "T") cfg.T = read_int();
    else if (key == "T_prime") cfg.T_prime = read_int();
    else if (key == "S") cfg.S = read_int();
    else if (key == "zeta") cfg.zeta = read_double();
    else if (key == "dagger_rounds_max") cfg.dagger_rounds_max = read_int();
    else if (key == "label_mode") {
      std::string mode;
      if (!(row >> mode) || (mode != "binary" && mode != "population")) {
        throw FormatError("train config: label_mode must be 'binary' or 'population'");
      }
      cfg.label_mode = mode == "binary" ? LabelMode::Binary : LabelMode::Population;
    } else if (key == "radius") cfg.radius = read_double();
    else if (key == "test_queries") cfg.test_queries = read_int();
    else if (key == "warm_start") cfg.warm_start = read_int() != 0;
    else if (key == "expert_max_iterations") cfg.expert.max_iterations = read_int();
    else if (key == "expert_max_time") cfg.expert.max_time = read_double();
    else if (key == "expert_resolution") cfg.expert.resolution = read_double();
    else if (key == "expert_step") cfg.expert.step = read_double();
    else if (key == "resample_step") cfg.resample_step = read_double();
    else if (key == "plan_s_max") cfg.plan.s_max = read_int();
    else if (key == "plan_threshold") cfg.plan.threshold = read_double();
    else if (key == "plan_resolution") cfg.plan.resolution = read_double();
    else if (key == "plan_step_clamp") cfg.plan.step_clamp = read_double();
    else if (key == "planner_hidden") cfg.planner_hidden = read_int_list();
    else if (key == "collision_hidden") cfg.collision_hidden = read_int_list();
    else if (key == "planner_dropout") cfg.planner_dropout = read_double();
    else if (key == "collision_dropout") cfg.collision_dropout = read_double();
    else if (key == "planner_epochs") cfg.planner_epochs = read_int();
    else if (key == "collision_epochs") cfg.collision_epochs = read_int();
    else if (key == "batch_size") cfg.batch_size = read_int();
    else if (key == "learning_rate") cfg.learning_rate = read_double();
    else if (key == "collision_train_cap") cfg.collision_train_cap = read_int();
    else if (key == "event_cap_per_call") cfg.event_cap_per_call = read_int();
    else throw FormatError("train config: unknown key '" + key + "'");
  }
  cfg.validate();
  // The patching expert inside the plan loop mirrors the relabeling expert.
  cfg.plan.expert = cfg.expert;
  return cfg;
}

inline TrainConfig load_train_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("train config: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_train_config(buffer.str());
}

inline void save_train_config(const TrainConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("train config: cannot write '" + path + "'");
  out << train_config_to_text(cfg);
}

}  // namespace ppcnet
