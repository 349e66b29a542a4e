#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "ppcnet/core.hpp"
#include "ppcnet/environment.hpp"
#include "ppcnet/expert.hpp"
#include "ppcnet/mlp.hpp"

namespace ppcnet {

// Probability that the motion between two configurations is collision-free.
// Implementations: a trained collision net, or the exact oracle (as a stub
// returning hard 0/1 probabilities). `batch`, when present, evaluates many
// segments in one pass (columns stack start over end) with the same
// per-segment semantics as `single`; callers may use either.
struct CollisionProbe {
  std::function<double(const Configuration&, const Configuration&)> single;
  std::function<VectorXd(const MatrixXd&)> batch;
};

inline CollisionProbe make_oracle_probe(const Environment& env, double resolution) {
  CollisionProbe probe;
  probe.single = [&env, resolution](const Configuration& a, const Configuration& b) {
    return is_segment_free(env, Segment{a, b}, resolution) ? 1.0 : 0.0;
  };
  return probe;
}

inline CollisionProbe make_net_probe(const Mlp& net) {
  CollisionProbe probe;
  probe.single = [&net](const Configuration& a, const Configuration& b) {
    MatrixXd in(a.size() + b.size(), 1);
    in.col(0) << a, b;
    const double logit = net.infer(in, ForwardMode::InferDeterministic)(0, 0);
    return 1.0 / (1.0 + std::exp(-logit));
  };
  probe.batch = [&net](const MatrixXd& stacked) {
    const MatrixXd logits = net.infer(stacked, ForwardMode::InferDeterministic);
    return VectorXd((1.0 + (-logits.row(0).transpose().array()).exp()).inverse().matrix());
  };
  return probe;
}

struct LearnedSteerResult {
  SteerStatus status = SteerStatus::Trapped;
  Configuration reached;
  int probe_calls = 0;
};

// Advance from `from` toward `to` through ceil(len/resolution) equal
// sub-segments, each approved by the probe: advance while P(free) exceeds
// `threshold`, stop at the first rejection. The reached configuration is
// always an exact convex combination of the endpoints (`to` itself when every
// sub-segment is approved).
inline LearnedSteerResult learned_steer(const CollisionProbe& probe, const Configuration& from,
                                        const Configuration& to, double threshold,
                                        double resolution) {
  if (threshold <= 0.0 || threshold >= 1.0) {
    throw ContractError("learned_steer: threshold must be in (0,1)");
  }
  if (resolution <= 0.0) throw ContractError("learned_steer: resolution must be > 0");
  LearnedSteerResult result;
  if (from == to) {
    result.status = SteerStatus::Reached;
    result.reached = to;
    return result;
  }
  const std::vector<Configuration> points = steer_points(from, to, resolution);
  if (probe.batch) {
    // Evaluate sub-segments in blocks, scanning each block in order and
    // stopping at the first rejection; the reached point is the same as with
    // one-at-a-time evaluation.
    constexpr std::size_t kBlock = 16;
    const Eigen::Index dim = from.size();
    Configuration current = from;
    for (std::size_t base = 0; base < points.size(); base += kBlock) {
      const std::size_t count = std::min(kBlock, points.size() - base);
      MatrixXd stacked(2 * dim, static_cast<Eigen::Index>(count));
      Configuration head = current;
      for (std::size_t i = 0; i < count; ++i) {
        stacked.block(0, static_cast<Eigen::Index>(i), dim, 1) = head;
        stacked.block(dim, static_cast<Eigen::Index>(i), dim, 1) = points[base + i];
        head = points[base + i];
      }
      const VectorXd p_free = probe.batch(stacked);
      result.probe_calls += static_cast<int>(count);
      for (std::size_t i = 0; i < count; ++i) {
        if (!(p_free[static_cast<Eigen::Index>(i)] > threshold)) {
          result.status = current == from ? SteerStatus::Trapped : SteerStatus::Advanced;
          result.reached = current;
          return result;
        }
        current = points[base + i];
      }
    }
    result.status = SteerStatus::Reached;
    result.reached = current;
    return result;
  }
  Configuration current = from;
  for (const Configuration& next : points) {
    ++result.probe_calls;
    if (!(probe.single(current, next) > threshold)) {
      result.status = current == from ? SteerStatus::Trapped : SteerStatus::Advanced;
      result.reached = current;
      return result;
    }
    current = next;
  }
  result.status = SteerStatus::Reached;
  result.reached = current;
  return result;
}

// Waypoint index span [head, tail] of one maximal run of consecutive
// in-collision segments.
struct BadSpan {
  int head = 0;
  int tail = 0;
};

// Oracle-checks every consecutive segment of `path` and merges maximal runs of
// in-collision segments into single spans. `oracle_calls`, when given, is
// incremented per segment check; `events`, when given, receives each verdict.
// Interior waypoints are shared by two segments and tested against the oracle
// once; interior samples follow the same grid as is_segment_free, so the
// per-segment verdicts agree with it.
inline std::vector<BadSpan> find_in_collision_segments(const Environment& env, const Path& path,
                                                       double resolution,
                                                       long* oracle_calls = nullptr,
                                                       std::vector<CollisionEvent>* events = nullptr) {
  if (resolution <= 0.0) {
    throw ContractError("find_in_collision_segments: resolution must be > 0");
  }
  std::vector<BadSpan> spans;
  if (path.size() < 2) return spans;
  bool in_run = false;
  bool prev_free = is_config_free(env, path[0]);
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Segment seg{path[i - 1], path[i]};
    const bool end_free = is_config_free(env, path[i]);
    bool free = prev_free && end_free;
    if (free) {
      const bool swap = lexicographic_less(path[i], path[i - 1]);
      const Configuration& a = swap ? path[i] : path[i - 1];
      const Configuration& b = swap ? path[i - 1] : path[i];
      const int k = static_cast<int>(std::ceil((b - a).norm() / resolution));
      for (int s = 1; s < k && free; ++s) {
        free = is_config_free(env, a + (static_cast<double>(s) / k) * (b - a));
      }
    }
    prev_free = end_free;
    if (oracle_calls) ++*oracle_calls;
    if (events) events->push_back(CollisionEvent{seg, free});
    if (!free) {
      if (in_run) {
        spans.back().tail = static_cast<int>(i);
      } else {
        spans.push_back(BadSpan{static_cast<int>(i) - 1, static_cast<int>(i)});
        in_run = true;
      }
    } else {
      in_run = false;
    }
  }
  return spans;
}

// Replaces each bad span with an expert path between the span's endpoints.
// Spans are spliced back to front so indices stay valid; shared endpoints are
// not duplicated. Any expert failure aborts the whole patch.
inline std::optional<Path> patch(const Environment& env, const Path& path,
                                 const std::vector<BadSpan>& bad_spans,
                                 const BirrtParams& expert_params, Rng& rng,
                                 long* oracle_calls = nullptr,
                                 std::vector<CollisionEvent>* events = nullptr) {
  Path out = path;
  for (auto it = bad_spans.rbegin(); it != bad_spans.rend(); ++it) {
    const ExpertResult alt = birrt_plan(env, out[it->head], out[it->tail], expert_params, rng);
    if (oracle_calls) *oracle_calls += static_cast<long>(alt.events.size());
    if (events) events->insert(events->end(), alt.events.begin(), alt.events.end());
    if (!alt.success) return std::nullopt;
    out.erase(out.begin() + it->head, out.begin() + it->tail + 1);
    out.insert(out.begin() + it->head, alt.path.begin(), alt.path.end());
  }
  return out;
}

// Unit of the planner net's output head: the head regresses the step to the
// next waypoint divided by this scale (the nominal resample step), and the
// net wrapper multiplies it back and adds the current configuration. Keeping
// step targets O(1) is what makes the regression trainable under heavy
// dropout; training and inference must agree on the constant.
inline constexpr double kPlannerStepScale = 0.1745;

struct PlanParams {
  int s_max = 100;              // planning iterations
  double threshold = 0.8;       // learned-checker safety threshold
  double resolution = 0.1;      // rad, steer discretization and oracle checks
  double step_clamp = 0.349;    // rad, cap on the planner net's predicted step
  bool allow_patching = true;
  bool stochastic = true;       // inference-time dropout on the planner net
  BirrtParams expert;           // patching planner
};

struct PlanResult {
  bool success = false;
  Path path;
  double elapsed = 0.0;   // seconds
  double length = 0.0;    // radians, on success
  int iterations = 0;
  int patches_attempted = 0;
  int patches_succeeded = 0;
  long probe_calls = 0;   // learned-checker queries
  long oracle_calls = 0;  // exact-oracle segment checks
};

namespace detail {

inline Configuration clamp_prediction(const Environment& env, const Configuration& current,
                                      Configuration predicted, double step_clamp) {
  for (int i = 0; i < env.dof; ++i) {
    predicted[i] = std::clamp(predicted[i], env.limit_lo[i], env.limit_hi[i]);
  }
  const double d = (predicted - current).norm();
  if (d > step_clamp) predicted = current + (step_clamp / d) * (predicted - current);
  return predicted;
}

// True iff a sparse sample of the sub-segments from `from` to `to` already
// fails the probe. A full ordered scan reaches `to` only when every
// sub-segment passes, so one strided rejection proves the steer cannot reach
// and the scan can be skipped. Only worth it past one stride's worth of
// sub-segments; the final sub-segment (arrival) is always sampled.
inline bool strided_prescan_rejects(const CollisionProbe& probe, const Configuration& from,
                                    const Configuration& to, double threshold, double resolution,
                                    long* probe_calls) {
  constexpr int kStride = 8;
  const Configuration dir = to - from;
  const int m = std::max(1, static_cast<int>(std::ceil(dir.norm() / resolution)));
  if (m <= kStride) return false;
  // Sampled sub-segments sit on the same convex-combination grid that
  // learned_steer walks; segment i runs from grid point i to grid point i+1.
  const auto grid = [&](int i) -> Configuration {
    return i >= m ? to : Configuration(from + (static_cast<double>(i) / m) * dir);
  };
  std::vector<int> picks;
  for (int i = kStride - 1; i < m; i += kStride) picks.push_back(i);
  if (picks.back() != m - 1) picks.push_back(m - 1);
  if (probe.batch) {
    const Eigen::Index dim = from.size();
    MatrixXd stacked(2 * dim, static_cast<Eigen::Index>(picks.size()));
    for (std::size_t c = 0; c < picks.size(); ++c) {
      stacked.block(0, static_cast<Eigen::Index>(c), dim, 1) = grid(picks[c]);
      stacked.block(dim, static_cast<Eigen::Index>(c), dim, 1) = grid(picks[c] + 1);
    }
    const VectorXd p_free = probe.batch(stacked);
    *probe_calls += static_cast<long>(picks.size());
    return (p_free.array() <= threshold).any();
  }
  for (int i : picks) {
    ++*probe_calls;
    if (!(probe.single(grid(i), grid(i + 1)) > threshold)) return true;
  }
  return false;
}

}  // namespace detail

// Proposes the next waypoint given the current configuration and the target.
// Implementations: the planner net (with or without inference-time dropout),
// or any test double.
using PlannerFn = std::function<Configuration(const Configuration&, const Configuration&)>;

// Sequential waypoint generation: per iteration, try to steer straight to the
// target under the learned checker; on reach, the exact oracle has the final
// word (feasible => done, otherwise the expert patches the merged in-collision
// spans). Otherwise ask the planner for the next waypoint — with
// inference-time dropout, a blocked query re-samples a different candidate on
// the next iteration — and keep whatever progress the steer made.
// `visited`, when given, receives every waypoint of the attempt except the
// target itself; `oracle_events`, when given, records every exact-oracle
// verdict issued (feasibility scans and patching).
inline PlanResult ppcnet_plan(const Environment& env, const PlannerFn& planner,
                              const CollisionProbe& probe, const Configuration& q_start,
                              const Configuration& q_target, const PlanParams& params, Rng& rng,
                              std::vector<Configuration>* visited = nullptr,
                              std::vector<CollisionEvent>* oracle_events = nullptr) {
  check_dimension(env, q_start, "ppcnet_plan");
  check_dimension(env, q_target, "ppcnet_plan");
  PlanResult result;
  const auto t0 = std::chrono::steady_clock::now();
  auto finish = [&](bool success, Path path) {
    result.success = success;
    if (success) {
      result.length = path_length(path);
      result.path = std::move(path);
    }
    result.elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
  };

  Path path{q_start};
  if (visited) visited->push_back(q_start);
  if (q_start == q_target) return finish(true, Path{q_start, q_target});

  for (int s = 0; s < params.s_max; ++s) {
    result.iterations = s + 1;
    const Configuration current = path.back();

    // The direct steer's progress is discarded unless it reaches the target,
    // so a strided prescan that finds any rejection skips the full scan.
    LearnedSteerResult direct;
    if (!detail::strided_prescan_rejects(probe, current, q_target, params.threshold,
                                         params.resolution, &result.probe_calls)) {
      direct = learned_steer(probe, current, q_target, params.threshold, params.resolution);
      result.probe_calls += direct.probe_calls;
    }
    if (direct.status == SteerStatus::Reached) {
      path.push_back(q_target);
      const auto bad =
          find_in_collision_segments(env, path, params.resolution, &result.oracle_calls,
                                     oracle_events);
      if (bad.empty()) return finish(true, std::move(path));
      if (!params.allow_patching) return finish(false, {});
      ++result.patches_attempted;
      const auto patched = patch(env, path, bad, params.expert, rng, &result.oracle_calls,
                                 oracle_events);
      if (!patched) return finish(false, {});
      ++result.patches_succeeded;
      return finish(true, *patched);
    }

    Configuration predicted =
        detail::clamp_prediction(env, current, planner(current, q_target), params.step_clamp);

    const LearnedSteerResult step =
        learned_steer(probe, current, predicted, params.threshold, params.resolution);
    result.probe_calls += step.probe_calls;
    if (step.status != SteerStatus::Trapped && step.reached != current) {
      path.push_back(step.reached);
      if (visited) visited->push_back(step.reached);
    }
    // Trapped: stay put; dropout re-samples a different candidate next round.
  }
  return finish(false, {});
}

// Wraps the planner net as a PlannerFn: the net's scaled-step output is turned
// back into an absolute next configuration. `rng` drives both the
// inference-time dropout (when `params.stochastic`) and the patching expert.
inline PlanResult ppcnet_plan(const Environment& env, const Mlp& planner_net,
                              const CollisionProbe& probe, const Configuration& q_start,
                              const Configuration& q_target, const PlanParams& params, Rng& rng,
                              std::vector<Configuration>* visited = nullptr,
                              std::vector<CollisionEvent>* oracle_events = nullptr) {
  if (planner_net.input_size() != 2 * env.dof || planner_net.output_size() != env.dof) {
    throw DimensionError("ppcnet_plan: planner net shape does not match the environment");
  }
  const ForwardMode mode =
      params.stochastic ? ForwardMode::InferStochastic : ForwardMode::InferDeterministic;
  PlannerFn fn = [&planner_net, &rng, mode, dof = env.dof](const Configuration& current,
                                                           const Configuration& goal) {
    MatrixXd in(2 * dof, 1);
    in.col(0) << current, goal;
    return Configuration(current +
                         kPlannerStepScale * planner_net.infer(in, mode, &rng).col(0));
  };
  return ppcnet_plan(env, fn, probe, q_start, q_target, params, rng, visited, oracle_events);
}

}  // namespace ppcnet
