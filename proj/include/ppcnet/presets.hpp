#pragma once

#include <cmath>

#include "ppcnet/environment.hpp"

namespace ppcnet {

// Reference environments used by the shipped configs, tests, and benchmarks.
// Both are planar problems with a bin region for pick goals, a home
// configuration, and a place configuration, mirroring a tabletop
// pick-and-place cell.

// 4-joint planar arm rooted at the origin, reaching over a desk scene. The
// pick tray is a three-walled box low and to the right (mouth 0.55 wide, walls
// up to y = -0.45); pick goals put the gripper inside the tray. Around the
// mid-field, circular fixtures and a shelf slab force detours between the home
// pose (tip near (1.09, 0.53)), the tray, and the place pose (tip near
// (0.19, 1.22)) while leaving the corridors themselves wide.
inline Environment make_arm4_environment() {
  Environment env;
  env.dof = 4;
  env.robot = RobotKind::PlanarArm;
  env.limit_lo = Configuration::Constant(4, -M_PI);
  env.limit_hi = Configuration::Constant(4, M_PI);
  env.link_lengths = {0.40, 0.35, 0.30, 0.25};
  env.link_half_width = 0.02;
  env.rects = {
      Rect{Vec2(0.425, -0.70), Vec2(0.475, -0.45)},   // tray left wall
      Rect{Vec2(1.025, -0.70), Vec2(1.075, -0.45)},   // tray right wall
      Rect{Vec2(0.425, -0.75), Vec2(1.075, -0.70)},   // tray floor
      Rect{Vec2(-1.05, -0.35), Vec2(-0.95, 0.35)},    // shelf slab on the left
  };
  env.circles = {
      Circle{Vec2(-0.55, 0.75), 0.15},   // lamp, upper left
      Circle{Vec2(-0.25, -0.65), 0.15},  // waste bin, lower left
      Circle{Vec2(0.72, 0.95), 0.10},    // fixture on the home->place sweep
      Circle{Vec2(1.15, -0.12), 0.05},   // fixture on the home->tray sweep
      Circle{Vec2(0.15, -0.55), 0.10},   // pocket fixture left of the tray
      Circle{Vec2(0.20, -0.95), 0.12},   // under-desk clutter
      Circle{Vec2(0.60, -0.95), 0.12},
      Circle{Vec2(-0.60, -0.95), 0.12},
      Circle{Vec2(-0.95, -0.75), 0.12},  // lower-left corner clutter
      Circle{Vec2(-0.20, -1.10), 0.10},  // deep under-desk clutter
      Circle{Vec2(-1.10, 0.60), 0.10},   // upper-left periphery fixture
      Circle{Vec2(-0.75, -0.55), 0.10},  // pocket between bin and shelf
      Circle{Vec2(0.88, -0.92), 0.10},   // below the tray floor
      Circle{Vec2(-1.20, -0.10), 0.08},  // left of the shelf
      Circle{Vec2(-1.15, -0.45), 0.10},  // below the shelf
      Circle{Vec2(-0.50, -1.10), 0.10},  // floor clutter
      Circle{Vec2(0.05, -1.15), 0.10},
      Circle{Vec2(0.45, -1.12), 0.10},
      Circle{Vec2(-1.15, 0.32), 0.08},   // left of the shelf top
      Circle{Vec2(-0.88, 0.88), 0.10},   // beyond the lamp
      Circle{Vec2(-0.35, -1.18), 0.08},  // floor clutter
      Circle{Vec2(0.30, -1.20), 0.06},
  };
  env.bin_region = Rect{Vec2(0.575, -0.53), Vec2(0.925, -0.44)};
  env.home = Configuration(4);
  env.home << -0.0909495, 0.618994, 0.197457, 0.130753;  // tip near (1.09, 0.53)
  env.place = Configuration(4);
  env.place << 0.9726, 0.431373, 0.307952, 0.07799;  // tip near (0.19, 1.22)
  validate_environment(env);
  return env;
}

// Point robot in a 6x6 box: a central disc, a vertical wall with a passage
// above it, and a pick bin behind the wall.
inline Environment make_point2d_environment() {
  Environment env;
  env.dof = 2;
  env.robot = RobotKind::Point2D;
  env.limit_lo = Configuration::Constant(2, -3.0);
  env.limit_hi = Configuration::Constant(2, 3.0);
  env.circles = {Circle{Vec2(0.0, 0.0), 0.8}};
  env.rects = {Rect{Vec2(1.2, -3.0), Vec2(1.5, 1.4)}};
  env.bin_region = Rect{Vec2(2.0, -1.0), Vec2(2.8, 1.0)};
  env.home = Configuration(2);
  env.home << -2.2, -2.2;
  env.place = Configuration(2);
  env.place << -2.2, 2.2;
  validate_environment(env);
  return env;
}

inline Environment make_preset_environment(const std::string& name) {
  if (name == "arm4") return make_arm4_environment();
  if (name == "point2d") return make_point2d_environment();
  throw ContractError("unknown preset environment '" + name + "' (expected arm4 or point2d)");
}

}  // namespace ppcnet
