#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <vector>

#include "ppcnet/core.hpp"
#include "ppcnet/environment.hpp"
#include "ppcnet/expert.hpp"

namespace ppcnet {

struct RrtStarParams {
  int max_iterations = 1000;
  double max_time = 10.0;       // seconds
  double gamma = 500.0;         // rewiring radius coefficient
  double goal_probability = 0.1;
  double resolution = 0.05;     // rad, oracle discretization
  double step = 0.5;            // rad, max extension per iteration
};

namespace detail {

// Tree with per-node cost-to-root; children lists let rewiring propagate cost
// improvements down the affected subtree.
struct CostedTree {
  std::vector<Configuration> nodes;
  std::vector<int> parent;
  std::vector<double> cost;
  std::vector<std::vector<int>> children;

  int add(const Configuration& q, int parent_index, double c) {
    nodes.push_back(q);
    parent.push_back(parent_index);
    cost.push_back(c);
    children.emplace_back();
    if (parent_index >= 0) children[parent_index].push_back(static_cast<int>(nodes.size()) - 1);
    return static_cast<int>(nodes.size()) - 1;
  }

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

  void reparent(int child, int new_parent, double new_cost) {
    auto& siblings = children[parent[child]];
    siblings.erase(std::find(siblings.begin(), siblings.end(), child));
    parent[child] = new_parent;
    children[new_parent].push_back(child);
    const double delta = new_cost - cost[child];
    // Depth-first cost shift over the rewired subtree.
    std::vector<int> stack{child};
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      cost[i] += delta;
      for (int c : children[i]) stack.push_back(c);
    }
  }

  Path branch_to_root(int index) const {
    Path out;
    for (int i = index; i >= 0; i = parent[i]) out.push_back(nodes[i]);
    return out;
  }
};

// Uniform sample from the unit n-ball: gaussian direction, radius u^(1/n).
inline Configuration sample_unit_ball(int dim, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Configuration x(dim);
  double norm2 = 0.0;
  do {
    for (int i = 0; i < dim; ++i) x[i] = gauss(rng);
    norm2 = x.squaredNorm();
  } while (norm2 == 0.0);
  const double radius = std::pow(unit(rng), 1.0 / dim);
  return x * (radius / std::sqrt(norm2));
}

// Orthogonal matrix whose first column is `axis` (a unit vector): the
// Householder reflection that swaps e1 and `axis`.
inline Eigen::MatrixXd rotation_to_axis(const Configuration& axis) {
  const int n = static_cast<int>(axis.size());
  Eigen::MatrixXd rot = Eigen::MatrixXd::Identity(n, n);
  Configuration v = axis;
  v[0] -= 1.0;
  const double v2 = v.squaredNorm();
  if (v2 > 1e-24) rot -= (2.0 / v2) * (v * v.transpose());
  return rot;
}

}  // namespace detail

// Uniform sample from the prolate hyperspheroid with foci `start`, `goal`,
// transverse diameter `c_best`: every point x inside satisfies
// dist(start,x) + dist(x,goal) <= c_best.
inline Configuration sample_hyperspheroid(const Configuration& start, const Configuration& goal,
                                          double c_best, Rng& rng) {
  const int dim = static_cast<int>(start.size());
  const double c_min = (goal - start).norm();
  const Configuration center = 0.5 * (start + goal);
  if (c_min <= 0.0) {
    // Degenerate ellipse: a ball of diameter c_best around the common focus.
    return center + (0.5 * c_best) * detail::sample_unit_ball(dim, rng);
  }
  Eigen::VectorXd radii(dim);
  radii[0] = 0.5 * c_best;
  const double conjugate = 0.5 * std::sqrt(std::max(0.0, c_best * c_best - c_min * c_min));
  for (int i = 1; i < dim; ++i) radii[i] = conjugate;
  const Eigen::MatrixXd rot = detail::rotation_to_axis((goal - start) / c_min);
  return center + rot * radii.asDiagonal() * detail::sample_unit_ball(dim, rng);
}

// RRT* with an informed sampling phase: once any solution is known, samples
// are drawn from the prolate hyperspheroid that contains every configuration
// able to improve it. Anytime — returns the best path at budget exhaustion.
// `cost_trace`, when given, receives the best known cost after each iteration
// (infinity until the first solution).
inline ExpertResult informed_rrtstar_plan(const Environment& env, const Configuration& start,
                                          const Configuration& goal, const RrtStarParams& params,
                                          Rng& rng, std::vector<double>* cost_trace = nullptr) {
  check_dimension(env, start, "informed_rrtstar_plan");
  check_dimension(env, goal, "informed_rrtstar_plan");
  if (params.step <= 0.0 || params.resolution <= 0.0) {
    throw ContractError("informed_rrtstar_plan: step and resolution must be > 0");
  }
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

  const double inf = std::numeric_limits<double>::infinity();
  const int dim = env.dof;
  detail::CostedTree tree;
  tree.add(start, -1, 0.0);
  int best_parent = -1;    // tree node the goal currently hangs off
  double c_best = inf;

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto segment_free = [&](const Configuration& a, const Configuration& b) {
    return is_segment_free(env, Segment{a, b}, params.resolution);
  };

  for (int iter = 0; iter < params.max_iterations; ++iter) {
    result.iterations = iter + 1;
    if (elapsed() > params.max_time) break;

    // --- sample -------------------------------------------------------------
    Configuration q_rand;
    if (c_best < inf) {
      bool ok = false;
      for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
        q_rand = sample_hyperspheroid(start, goal, c_best, rng);
        ok = within_limits(env, q_rand) &&
             (q_rand - start).norm() + (goal - q_rand).norm() <= c_best;
      }
      if (!ok) {
        if (cost_trace) cost_trace->push_back(c_best);
        continue;
      }
    } else if (unit(rng) < params.goal_probability) {
      q_rand = goal;
    } else {
      q_rand = sample_config(env, rng);
    }

    // --- extend -------------------------------------------------------------
    const int nearest = tree.nearest(q_rand);
    const double d_near = (q_rand - tree.nodes[nearest]).norm();
    if (d_near == 0.0) {
      if (cost_trace) cost_trace->push_back(c_best);
      continue;
    }
    const Configuration q_new =
        d_near <= params.step
            ? q_rand
            : Configuration(tree.nodes[nearest] +
                            (params.step / d_near) * (q_rand - tree.nodes[nearest]));
    if (!segment_free(tree.nodes[nearest], q_new)) {
      if (cost_trace) cost_trace->push_back(c_best);
      continue;
    }

    // --- choose parent within the rewiring radius ----------------------------
    const double n_nodes = static_cast<double>(tree.nodes.size());
    const double radius =
        n_nodes > 1.0
            ? std::min(params.gamma * std::pow(std::log(n_nodes) / n_nodes, 1.0 / dim),
                       params.step)
            : params.step;
    std::vector<int> neighbors;
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
      if ((tree.nodes[i] - q_new).norm() <= radius) neighbors.push_back(static_cast<int>(i));
    }
    int parent = nearest;
    double best_cost = tree.cost[nearest] + (tree.nodes[nearest] - q_new).norm();
    for (int i : neighbors) {
      const double c = tree.cost[i] + (tree.nodes[i] - q_new).norm();
      if (c < best_cost && segment_free(tree.nodes[i], q_new)) {
        best_cost = c;
        parent = i;
      }
    }
    const int new_index = tree.add(q_new, parent, best_cost);

    // --- rewire the neighborhood through the new node ------------------------
    for (int i : neighbors) {
      if (i == parent) continue;
      const double via = best_cost + (tree.nodes[i] - q_new).norm();
      if (via + 1e-12 < tree.cost[i] && segment_free(q_new, tree.nodes[i])) {
        tree.reparent(i, new_index, via);
      }
    }

    // --- try to improve the goal connection ----------------------------------
    const double via_goal = tree.cost[new_index] + (goal - q_new).norm();
    if (via_goal < c_best && segment_free(q_new, goal)) {
      best_parent = new_index;
      c_best = via_goal;
    }
    if (best_parent >= 0) {
      // Rewiring may have cheapened the current goal parent.
      c_best = std::min(c_best, tree.cost[best_parent] + (goal - tree.nodes[best_parent]).norm());
    }
    if (cost_trace) cost_trace->push_back(c_best);
  }

  result.elapsed = elapsed();
  if (best_parent < 0) return result;
  result.success = true;
  result.path = tree.branch_to_root(best_parent);
  std::reverse(result.path.begin(), result.path.end());
  result.path.push_back(goal);
  return result;
}

}  // namespace ppcnet
