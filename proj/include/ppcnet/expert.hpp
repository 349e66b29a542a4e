#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <vector>

#include "ppcnet/core.hpp"
#include "ppcnet/environment.hpp"

namespace ppcnet {

// One oracle verdict on one checked segment, exactly as recorded during planning.
struct CollisionEvent {
  Segment segment;
  bool free = false;
};

struct Tree {
  std::vector<Configuration> nodes;
  std::vector<int> parent;  // -1 for the root

  int add(const Configuration& q, int parent_index) {
    nodes.push_back(q);
    parent.push_back(parent_index);
    return static_cast<int>(nodes.size()) - 1;
  }

  // Nearest by Euclidean distance; ties broken by lowest node index.
  int nearest(const Configuration& q) const {
    int best = 0;
    double best_d2 = (nodes[0] - q).squaredNorm();
    for (std::size_t i = 1; i < nodes.size(); ++i) {
      const double d2 = (nodes[i] - q).squaredNorm();
      if (d2 < best_d2) {
        best_d2 = d2;
        best = static_cast<int>(i);
      }
    }
    return best;
  }

  Path branch_to_root(int index) const {
    Path out;
    for (int i = index; i >= 0; i = parent[i]) out.push_back(nodes[i]);
    return out;
  }
};

struct ExpertResult {
  bool success = false;
  Path path;
  std::vector<CollisionEvent> events;
  int iterations = 0;
  double elapsed = 0.0;
};

enum class SteerStatus { Trapped, Advanced, Reached };

// Evenly spaced waypoints from `from` to `to`: ceil(len/step) pieces, tail of
// piece i at the exact convex combination i/m. The final entry is `to` itself.
inline std::vector<Configuration> steer_points(const Configuration& from, const Configuration& to,
                                               double step) {
  std::vector<Configuration> pts;
  const double len = (to - from).norm();
  const int m = std::max(1, static_cast<int>(std::ceil(len / step)));
  pts.reserve(m);
  for (int i = 1; i < m; ++i) {
    pts.push_back(from + (static_cast<double>(i) / m) * (to - from));
  }
  pts.push_back(to);
  return pts;
}

// Greedy advance from `from` toward `to` in increments of at most `step`, each
// increment oracle-checked at `resolution` and appended to `events`.
inline SteerStatus geometric_steer(const Environment& env, const Configuration& from,
                                   const Configuration& to, double step, double resolution,
                                   std::vector<CollisionEvent>& events, Configuration* reached) {
  if (step <= 0.0) throw ContractError("geometric_steer: step must be > 0");
  if (from == to) {
    const bool free = is_segment_free(env, Segment{from, to}, resolution);
    events.push_back(CollisionEvent{Segment{from, to}, free});
    if (reached) *reached = to;
    return free ? SteerStatus::Reached : SteerStatus::Trapped;
  }
  Configuration current = from;
  for (const Configuration& next : steer_points(from, to, step)) {
    const Segment inc{current, next};
    const bool free = is_segment_free(env, inc, resolution);
    events.push_back(CollisionEvent{inc, free});
    if (!free) {
      if (reached) *reached = current;
      return current == from ? SteerStatus::Trapped : SteerStatus::Advanced;
    }
    current = next;
  }
  if (reached) *reached = current;
  return SteerStatus::Reached;
}

struct BirrtParams {
  int max_iterations = 1000;
  double max_time = 5.0;       // seconds
  double resolution = 0.1;     // rad, oracle discretization
  double step = 0.1;           // rad, steer increment (defaults equal to resolution)
};

// True iff every consecutive waypoint pair passes the segment oracle.
inline bool is_feasible(const Environment& env, const Path& path, double resolution) {
  if (path.size() < 2) throw ContractError("is_feasible: path needs >= 2 waypoints");
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (!is_segment_free(env, Segment{path[i - 1], path[i]}, resolution)) return false;
  }
  return true;
}

namespace detail {

inline Path join_trees(const Tree& start_tree, int start_index, const Tree& goal_tree,
                       int goal_index) {
  Path head = start_tree.branch_to_root(start_index);
  std::reverse(head.begin(), head.end());  // root(start) ... connect point
  Path tail = goal_tree.branch_to_root(goal_index);
  // tail begins at the connect point already present at the end of head.
  for (std::size_t i = 1; i < tail.size(); ++i) head.push_back(tail[i]);
  return head;
}

}  // namespace detail

// RRT-Connect: two trees rooted at start and goal, greedy connect extensions,
// swapped every iteration. Every steer increment (both trees, including
// failures) is recorded in `events`.
inline ExpertResult birrt_plan(const Environment& env, const Configuration& start,
                               const Configuration& goal, const BirrtParams& params, Rng& rng) {
  check_dimension(env, start, "birrt_plan");
  check_dimension(env, goal, "birrt_plan");
  ExpertResult result;
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&t0]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  if (start == goal) {
    result.success = true;
    result.path = {start, goal};
    result.elapsed = elapsed();
    return result;
  }

  // Direct connect attempt before growing any tree.
  {
    Configuration reached;
    if (geometric_steer(env, start, goal, params.step, params.resolution, result.events,
                        &reached) == SteerStatus::Reached) {
      result.success = true;
      result.path = {start, goal};
      result.iterations = 0;
      result.elapsed = elapsed();
      return result;
    }
  }

  Tree start_tree, goal_tree;
  start_tree.add(start, -1);
  goal_tree.add(goal, -1);
  Tree* a = &start_tree;
  Tree* b = &goal_tree;
  bool a_is_start = true;

  for (int iter = 0; iter < params.max_iterations; ++iter) {
    result.iterations = iter + 1;
    if (elapsed() > params.max_time) break;

    const Configuration q_rand = sample_config(env, rng);
    const int na = a->nearest(q_rand);
    Configuration reached_a;
    const SteerStatus sa = geometric_steer(env, a->nodes[na], q_rand, params.step,
                                           params.resolution, result.events, &reached_a);
    if (sa != SteerStatus::Trapped) {
      const int ia = a->add(reached_a, na);
      const int nb = b->nearest(reached_a);
      Configuration reached_b;
      const SteerStatus sb = geometric_steer(env, b->nodes[nb], reached_a, params.step,
                                             params.resolution, result.events, &reached_b);
      if (sb != SteerStatus::Trapped) {
        const int ib = b->add(reached_b, nb);
        if (sb == SteerStatus::Reached) {
          result.success = true;
          result.path = a_is_start ? detail::join_trees(*a, ia, *b, ib)
                                   : detail::join_trees(*b, ib, *a, ia);
          result.elapsed = elapsed();
          return result;
        }
      }
    }
    std::swap(a, b);
    a_is_start = !a_is_start;
  }
  result.elapsed = elapsed();
  return result;
}

}  // namespace ppcnet
