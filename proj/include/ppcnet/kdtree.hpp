#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "ppcnet/core.hpp"

namespace ppcnet {

// Static KD-tree over fixed-dimension points, median split per axis. Built in
// one shot from a point set (payload = point index), queried by radius.
class KdTree {
 public:
  KdTree() = default;

  explicit KdTree(const std::vector<Configuration>& points) { build(points); }

  void build(const std::vector<Configuration>& points) {
    points_ = points;
    nodes_.clear();
    if (points_.empty()) return;
    dim_ = static_cast<int>(points_[0].size());
    std::vector<int> ids(points_.size());
    std::iota(ids.begin(), ids.end(), 0);
    nodes_.reserve(points_.size());
    root_ = build_recursive(ids.begin(), ids.end(), 0);
  }

  std::size_t size() const { return points_.size(); }

  // All stored point indices within Euclidean distance `radius` (inclusive) of q.
  std::vector<int> radius_query(const Configuration& q, double radius) const {
    std::vector<int> out;
    if (!nodes_.empty()) {
      query_recursive(root_, q, radius * radius, out);
    }
    return out;
  }

 private:
  struct Node {
    int point = -1;
    int axis = 0;
    int left = -1;
    int right = -1;
  };

  using IdIter = std::vector<int>::iterator;

  int build_recursive(IdIter first, IdIter last, int depth) {
    if (first == last) return -1;
    const int axis = depth % dim_;
    IdIter mid = first + (last - first) / 2;
    std::nth_element(first, mid, last, [&](int a, int b) {
      return points_[a][axis] < points_[b][axis];
    });
    Node node;
    node.point = *mid;
    node.axis = axis;
    const int index = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    const int left = build_recursive(first, mid, depth + 1);
    const int right = build_recursive(mid + 1, last, depth + 1);
    nodes_[index].left = left;
    nodes_[index].right = right;
    return index;
  }

  void query_recursive(int node_index, const Configuration& q, double r2,
                       std::vector<int>& out) const {
    const Node& node = nodes_[node_index];
    const Configuration& p = points_[node.point];
    if ((p - q).squaredNorm() <= r2) out.push_back(node.point);
    const double delta = q[node.axis] - p[node.axis];
    const int near = delta < 0.0 ? node.left : node.right;
    const int far = delta < 0.0 ? node.right : node.left;
    if (near >= 0) query_recursive(near, q, r2, out);
    if (far >= 0 && delta * delta <= r2) query_recursive(far, q, r2, out);
  }

  std::vector<Configuration> points_;
  std::vector<Node> nodes_;
  int root_ = -1;
  int dim_ = 0;
};

}  // namespace ppcnet
