#pragma once

#include <cmath>
#include <vector>

#include "ppcnet/core.hpp"
#include "ppcnet/expert.hpp"

namespace ppcnet {

// Binary State Contraction: single forward pass that repeatedly jumps the
// anchor to the furthest waypoint it can connect to directly. Each candidate
// jump is found by first trying the last waypoint, then bisecting back toward
// the anchor on failure. Output waypoints are a subsequence of the input with
// first and last preserved.
//
// When `events` is non-null, every segment verdict the exact checker issues
// here (the input-path validation segments and every candidate jump) is
// recorded, so callers can feed them to the collision dataset. These probes
// hug the corridors that demonstrations actually teach, which is exactly
// where the learned checker needs dense coverage.
inline Path binary_state_contraction(const Environment& env, const Path& path,
                                     double resolution,
                                     std::vector<CollisionEvent>* events = nullptr) {
  if (path.size() < 2) throw ContractError("binary_state_contraction: path needs >= 2 waypoints");
  const auto checked = [&](const Configuration& a, const Configuration& b) {
    const Segment seg{a, b};
    const bool free = is_segment_free(env, seg, resolution);
    if (events) events->push_back(CollisionEvent{seg, free});
    return free;
  };
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (!checked(path[i], path[i + 1])) {
      throw ContractError("binary_state_contraction: input path is not feasible");
    }
  }
  Path out;
  out.push_back(path.front());
  std::size_t anchor = 0;
  const std::size_t last = path.size() - 1;
  while (anchor < last) {
    std::size_t jump;
    if (checked(path[anchor], path[last])) {
      jump = last;
    } else {
      // Invariant: lo is directly connectable (anchor+1 always is, the input
      // path being feasible), hi is not.
      std::size_t lo = anchor + 1;
      std::size_t hi = last;
      while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (checked(path[anchor], path[mid])) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      jump = lo;
    }
    out.push_back(path[jump]);
    anchor = jump;
  }
  return out;
}

// Splits every segment of length L into ceil(L/step) equal pieces. Inserted
// waypoints are convex combinations of the segment endpoints, so the path and
// its total length are unchanged and no step exceeds `step` (up to rounding).
inline Path resample(const Path& path, double step) {
  if (step <= 0.0) throw ContractError("resample: step must be > 0");
  if (path.size() < 2) return path;
  Path out;
  out.push_back(path.front());
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Configuration& a = path[i - 1];
    const Configuration& b = path[i];
    const double len = (b - a).norm();
    const int m = std::max(1, static_cast<int>(std::ceil(len / step)));
    for (int j = 1; j < m; ++j) {
      out.push_back(a + (static_cast<double>(j) / m) * (b - a));
    }
    out.push_back(b);
  }
  return out;
}

inline Path post_process(const Environment& env, const Path& path, double resolution,
                         double step, std::vector<CollisionEvent>* events = nullptr) {
  return resample(binary_state_contraction(env, path, resolution, events), step);
}

}  // namespace ppcnet
