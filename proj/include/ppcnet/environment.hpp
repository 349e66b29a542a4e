#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ppcnet/core.hpp"
#include "ppcnet/geometry.hpp"

namespace ppcnet {

enum class RobotKind { Point2D, PlanarArm };

// World-frame robot geometry induced by one configuration: the point itself for
// the point robot, one capsule per link for the planar arm.
struct RobotShape {
  RobotKind kind = RobotKind::Point2D;
  Vec2 point = Vec2::Zero();
  std::vector<Capsule> capsules;
};

// Planar workspace with an exact geometric collision oracle. Immutable after
// construction; all queries are pure given an rng handle.
struct Environment {
  int dof = 0;
  Configuration limit_lo;
  Configuration limit_hi;
  RobotKind robot = RobotKind::Point2D;
  std::vector<double> link_lengths;  // planar arm only
  double link_half_width = 0.0;      // planar arm only
  std::vector<Circle> circles;
  std::vector<Rect> rects;
  Rect bin_region{Vec2::Zero(), Vec2::Zero()};
  Configuration home;
  Configuration place;

  double reach() const {
    double r = 0.0;
    for (double l : link_lengths) r += l;
    return r;
  }
};

inline void check_dimension(const Environment& env, const Configuration& q, const char* where) {
  if (q.size() != env.dof) {
    throw DimensionError(std::string(where) + ": configuration has dimension " +
                         std::to_string(q.size()) + ", environment dof is " +
                         std::to_string(env.dof));
  }
}

inline bool within_limits(const Environment& env, const Configuration& q) {
  for (int i = 0; i < env.dof; ++i) {
    if (q[i] < env.limit_lo[i] || q[i] > env.limit_hi[i]) return false;
  }
  return true;
}

// Link i's frame is the cumulative rotation of joints 1..i applied serially
// from the base at the origin.
inline RobotShape forward_kinematics(const Environment& env, const Configuration& q) {
  check_dimension(env, q, "forward_kinematics");
  RobotShape shape;
  shape.kind = env.robot;
  if (env.robot == RobotKind::Point2D) {
    shape.point = Vec2(q[0], q[1]);
    return shape;
  }
  shape.capsules.reserve(env.link_lengths.size());
  Vec2 base = Vec2::Zero();
  double angle = 0.0;
  for (std::size_t i = 0; i < env.link_lengths.size(); ++i) {
    angle += q[static_cast<int>(i)];
    const Vec2 tip = base + env.link_lengths[i] * Vec2(std::cos(angle), std::sin(angle));
    shape.capsules.push_back(Capsule{base, tip, env.link_half_width});
    base = tip;
  }
  shape.point = base;
  return shape;
}

// End-effector position: tip of the last link, or the point itself.
inline Vec2 end_effector(const Environment& env, const Configuration& q) {
  return forward_kinematics(env, q).point;
}

inline bool is_config_free(const Environment& env, const Configuration& q) {
  const RobotShape shape = forward_kinematics(env, q);
  if (env.robot == RobotKind::Point2D) {
    for (const Circle& c : env.circles) {
      if ((shape.point - c.center).norm() <= c.radius) return false;
    }
    for (const Rect& r : env.rects) {
      if (r.contains(shape.point)) return false;
    }
    return true;
  }
  for (const Capsule& cap : shape.capsules) {
    for (const Circle& c : env.circles) {
      if (point_segment_distance(c.center, cap.a, cap.b) <= c.radius + cap.half_width)
        return false;
    }
    for (const Rect& r : env.rects) {
      if (segment_rect_distance(cap.a, cap.b, r) <= cap.half_width) return false;
    }
  }
  // Self-collision between non-adjacent links; adjacent links share a joint.
  for (std::size_t i = 0; i + 2 < shape.capsules.size(); ++i) {
    for (std::size_t j = i + 2; j < shape.capsules.size(); ++j) {
      if (capsule_capsule_distance(shape.capsules[i], shape.capsules[j]) <=
          shape.capsules[i].half_width + shape.capsules[j].half_width)
        return false;
    }
  }
  return true;
}

// Fixed-step discretization of the joint-space segment: ceil(length/resolution)+1
// evenly spaced configurations including both endpoints, all checked against the
// oracle. Endpoints are ordered canonically first so the sampled set (and hence
// the verdict) is identical for (a,b) and (b,a).
inline bool is_segment_free(const Environment& env, const Segment& seg, double resolution) {
  if (resolution <= 0.0) throw ContractError("is_segment_free: resolution must be > 0");
  check_dimension(env, seg.start, "is_segment_free");
  check_dimension(env, seg.end, "is_segment_free");
  const bool swap = lexicographic_less(seg.end, seg.start);
  const Configuration& a = swap ? seg.end : seg.start;
  const Configuration& b = swap ? seg.start : seg.end;
  const double len = (b - a).norm();
  const int k = static_cast<int>(std::ceil(len / resolution));
  for (int i = 0; i <= k; ++i) {
    const double t = (k == 0) ? 0.0 : static_cast<double>(i) / k;
    const Configuration qi = a + t * (b - a);
    if (!is_config_free(env, qi)) return false;
  }
  return true;
}

inline Configuration sample_config(const Environment& env, Rng& rng) {
  Configuration q(env.dof);
  for (int i = 0; i < env.dof; ++i) {
    std::uniform_real_distribution<double> dist(env.limit_lo[i], env.limit_hi[i]);
    q[i] = dist(rng);
  }
  return q;
}

// Uniform rejection sampling within joint limits until collision-free.
inline Configuration sample_free_config(const Environment& env, Rng& rng, int max_attempts) {
  if (max_attempts < 1) throw ContractError("sample_free_config: max_attempts must be >= 1");
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Configuration q = sample_config(env, rng);
    if (is_config_free(env, q)) return q;
  }
  throw SamplingError("sample_free_config: no collision-free sample in " +
                          std::to_string(max_attempts) + " attempts",
                      0);
}

// Samples `count` collision-free configurations whose end-effector lies inside
// the bin region.
inline std::vector<Configuration> random_goal_conf(const Environment& env, int count, Rng& rng,
                                                   int max_attempts_each = 2000000) {
  if (count < 1) throw ContractError("random_goal_conf: count must be >= 1");
  std::vector<Configuration> goals;
  goals.reserve(count);
  for (int g = 0; g < count; ++g) {
    bool found = false;
    for (int attempt = 0; attempt < max_attempts_each; ++attempt) {
      Configuration q = sample_config(env, rng);
      if (!env.bin_region.contains(end_effector(env, q))) continue;
      if (!is_config_free(env, q)) continue;
      goals.push_back(std::move(q));
      found = true;
      break;
    }
    if (!found) {
      throw SamplingError("random_goal_conf: exhausted attempts for goal " + std::to_string(g) +
                              "/" + std::to_string(count),
                          g);
    }
  }
  return goals;
}

// --- environment file format ------------------------------------------------
//
// Line-oriented key/value text, '#' starts a comment. Keys:
//   schema 1
//   robot {point-2d | planar-arm}
//   dof N
//   limit LO HI           (one line per joint, in order; radians)
//   links L1 ... Lk       (planar-arm; meters)
//   half_width W          (planar-arm; meters)
//   circle CX CY R        (repeatable)
//   rect XMIN YMIN XMAX YMAX   (repeatable)
//   bin XMIN YMIN XMAX YMAX
//   home Q1 ... QN
//   place Q1 ... QN

namespace detail {

inline std::vector<double> parse_doubles(std::istringstream& in, const std::string& key,
                                         int expected = -1) {
  std::vector<double> vals;
  double v;
  while (in >> v) vals.push_back(v);
  if (expected >= 0 && static_cast<int>(vals.size()) != expected) {
    throw FormatError("environment: key '" + key + "' expects " + std::to_string(expected) +
                      " values, got " + std::to_string(vals.size()));
  }
  return vals;
}

}  // namespace detail

inline void validate_environment(const Environment& env) {
  if (env.dof < 1) throw FormatError("environment: dof must be >= 1");
  if (env.limit_lo.size() != env.dof || env.limit_hi.size() != env.dof) {
    throw FormatError("environment: joint limit count does not match dof");
  }
  for (int i = 0; i < env.dof; ++i) {
    if (!(env.limit_lo[i] < env.limit_hi[i])) {
      throw FormatError("environment: joint " + std::to_string(i) + " has empty limit range");
    }
  }
  if (env.robot == RobotKind::PlanarArm) {
    if (static_cast<int>(env.link_lengths.size()) != env.dof) {
      throw FormatError("environment: planar arm needs one link length per joint");
    }
    if (env.link_half_width <= 0.0) throw FormatError("environment: half_width must be > 0");
  } else if (env.dof != 2) {
    throw FormatError("environment: point robot is 2-dof");
  }
  if (env.bin_region.area() <= 0.0) throw FormatError("environment: bin region must have area");
  if (env.home.size() != env.dof || env.place.size() != env.dof) {
    throw FormatError("environment: home/place dimension mismatch");
  }
  if (!within_limits(env, env.home) || !within_limits(env, env.place)) {
    throw FormatError("environment: home/place outside joint limits");
  }
  if (!is_config_free(env, env.home)) throw FormatError("environment: home is in collision");
  if (!is_config_free(env, env.place)) throw FormatError("environment: place is in collision");
}

inline Environment parse_environment(std::istream& in) {
  Environment env;
  std::vector<double> lim_lo, lim_hi;
  std::string line;
  bool saw_schema = false;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "schema") {
      int v = 0;
      ls >> v;
      if (v != 1) throw FormatError("environment: unsupported schema version");
      saw_schema = true;
    } else if (key == "robot") {
      std::string kind;
      ls >> kind;
      if (kind == "point-2d") {
        env.robot = RobotKind::Point2D;
      } else if (kind == "planar-arm") {
        env.robot = RobotKind::PlanarArm;
      } else {
        throw FormatError("environment: unknown robot kind '" + kind + "'");
      }
    } else if (key == "dof") {
      ls >> env.dof;
    } else if (key == "limit") {
      auto v = detail::parse_doubles(ls, key, 2);
      lim_lo.push_back(v[0]);
      lim_hi.push_back(v[1]);
    } else if (key == "links") {
      env.link_lengths = detail::parse_doubles(ls, key);
    } else if (key == "half_width") {
      ls >> env.link_half_width;
    } else if (key == "circle") {
      auto v = detail::parse_doubles(ls, key, 3);
      env.circles.push_back(Circle{Vec2(v[0], v[1]), v[2]});
    } else if (key == "rect") {
      auto v = detail::parse_doubles(ls, key, 4);
      env.rects.push_back(Rect{Vec2(v[0], v[1]), Vec2(v[2], v[3])});
    } else if (key == "bin") {
      auto v = detail::parse_doubles(ls, key, 4);
      env.bin_region = Rect{Vec2(v[0], v[1]), Vec2(v[2], v[3])};
    } else if (key == "home" || key == "place") {
      auto v = detail::parse_doubles(ls, key);
      Configuration q(static_cast<int>(v.size()));
      for (std::size_t i = 0; i < v.size(); ++i) q[static_cast<int>(i)] = v[i];
      (key == "home" ? env.home : env.place) = std::move(q);
    } else {
      throw FormatError("environment: unknown key '" + key + "'");
    }
  }
  if (!saw_schema) throw FormatError("environment: missing 'schema' line");
  env.limit_lo = Eigen::Map<Eigen::VectorXd>(lim_lo.data(), static_cast<int>(lim_lo.size()));
  env.limit_hi = Eigen::Map<Eigen::VectorXd>(lim_hi.data(), static_cast<int>(lim_hi.size()));
  validate_environment(env);
  return env;
}

inline std::string environment_to_text(const Environment& env) {
  std::ostringstream out;
  out << "schema 1\n";
  out << "robot " << (env.robot == RobotKind::Point2D ? "point-2d" : "planar-arm") << "\n";
  out << "dof " << env.dof << "\n";
  for (int i = 0; i < env.dof; ++i) {
    out << "limit " << format_double(env.limit_lo[i]) << " " << format_double(env.limit_hi[i])
        << "\n";
  }
  if (env.robot == RobotKind::PlanarArm) {
    out << "links";
    for (double l : env.link_lengths) out << " " << format_double(l);
    out << "\n";
    out << "half_width " << format_double(env.link_half_width) << "\n";
  }
  for (const Circle& c : env.circles) {
    out << "circle " << format_double(c.center.x()) << " " << format_double(c.center.y()) << " "
        << format_double(c.radius) << "\n";
  }
  for (const Rect& r : env.rects) {
    out << "rect " << format_double(r.lo.x()) << " " << format_double(r.lo.y()) << " "
        << format_double(r.hi.x()) << " " << format_double(r.hi.y()) << "\n";
  }
  out << "bin " << format_double(env.bin_region.lo.x()) << " "
      << format_double(env.bin_region.lo.y()) << " " << format_double(env.bin_region.hi.x())
      << " " << format_double(env.bin_region.hi.y()) << "\n";
  out << "home";
  for (int i = 0; i < env.dof; ++i) out << " " << format_double(env.home[i]);
  out << "\n";
  out << "place";
  for (int i = 0; i < env.dof; ++i) out << " " << format_double(env.place[i]);
  out << "\n";
  return out.str();
}

inline Environment load_environment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("environment: cannot open '" + path + "'");
  return parse_environment(in);
}

inline void save_environment(const Environment& env, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("environment: cannot write '" + path + "'");
  out << environment_to_text(env);
}

inline std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Short identity for dataset/checkpoint headers: hash of the canonical text form.
inline std::string environment_hash(const Environment& env) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(environment_to_text(env))));
  return buf;
}

}  // namespace ppcnet
