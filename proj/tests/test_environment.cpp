#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ppcnet/environment.hpp"
#include "ppcnet/presets.hpp"

namespace {

using namespace ppcnet;

Configuration make_config(std::initializer_list<double> values) {
  Configuration q(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) q[i++] = v;
  return q;
}

Environment arm_env(std::vector<double> links, double half_width) {
  Environment env;
  env.robot = RobotKind::PlanarArm;
  env.dof = static_cast<int>(links.size());
  env.limit_lo = Configuration::Constant(env.dof, -M_PI);
  env.limit_hi = Configuration::Constant(env.dof, M_PI);
  env.link_lengths = std::move(links);
  env.link_half_width = half_width;
  return env;
}

Environment point_env(double lo = -6.0, double hi = 6.0) {
  Environment env;
  env.robot = RobotKind::Point2D;
  env.dof = 2;
  env.limit_lo = Configuration::Constant(2, lo);
  env.limit_hi = Configuration::Constant(2, hi);
  return env;
}

TEST_CASE("forward kinematics chains rotations serially from the origin", "[environment]") {
  Environment env = arm_env({1.0, 1.0}, 0.05);

  SECTION("zero angles lie along the x-axis") {
    const RobotShape s = forward_kinematics(env, make_config({0.0, 0.0}));
    REQUIRE(s.capsules.size() == 2);
    REQUIRE(s.capsules[0].a.isApprox(Vec2(0, 0), 1e-15));
    REQUIRE(s.capsules[0].b.isApprox(Vec2(1, 0), 1e-15));
    REQUIRE(s.capsules[1].a.isApprox(Vec2(1, 0), 1e-15));
    REQUIRE(s.capsules[1].b.isApprox(Vec2(2, 0), 1e-15));
  }
  SECTION("quarter turn at the base points the chain up") {
    const RobotShape s = forward_kinematics(env, make_config({M_PI / 2, 0.0}));
    REQUIRE((s.capsules[0].b - Vec2(0, 1)).norm() < 1e-12);
    REQUIRE((s.capsules[1].b - Vec2(0, 2)).norm() < 1e-12);
  }
  SECTION("eighth turns compose: tip at (sqrt2/2, sqrt2/2 + 1)") {
    // Composing pi/4 + pi/4 points link 2 straight up from the elbow.
    const RobotShape s = forward_kinematics(env, make_config({M_PI / 4, M_PI / 4}));
    const Vec2 elbow(std::sqrt(2.0) / 2.0, std::sqrt(2.0) / 2.0);
    REQUIRE((s.capsules[0].b - elbow).norm() < 1e-12);
    REQUIRE((s.capsules[1].b - Vec2(elbow.x(), elbow.y() + 1.0)).norm() < 1e-12);
  }
  SECTION("dimension mismatch throws") {
    REQUIRE_THROWS_AS(forward_kinematics(env, make_config({0.0})), DimensionError);
  }
  SECTION("tip norm never exceeds total reach") {
    Rng rng(11);
    for (int i = 0; i < 500; ++i) {
      const Configuration q = sample_config(env, rng);
      REQUIRE(end_effector(env, q).norm() <= env.reach() + 1e-12);
    }
  }
}

TEST_CASE("point robot collision oracle", "[environment]") {
  Environment env = point_env();
  env.circles.push_back(Circle{Vec2(0, 0), 1.0});
  REQUIRE(is_config_free(env, make_config({5.0, 5.0})));
  REQUIRE_FALSE(is_config_free(env, make_config({0.0, 0.0})));
  // Boundary counts as contact.
  REQUIRE_FALSE(is_config_free(env, make_config({1.0, 0.0})));
  REQUIRE(is_config_free(env, make_config({1.0 + 1e-9, 0.0})));
  env.rects.push_back(Rect{Vec2(2, 2), Vec2(3, 3)});
  REQUIRE_FALSE(is_config_free(env, make_config({2.5, 2.5})));
}

TEST_CASE("arm collision oracle agrees with dense capsule sampling", "[environment]") {
  // Straight 2-link arm reaching into a U-shaped bin whose near wall crosses
  // the second link.
  Environment env = arm_env({1.0, 1.0}, 0.04);
  env.rects.push_back(Rect{Vec2(1.2, -0.5), Vec2(1.3, 0.5)});   // near wall
  env.rects.push_back(Rect{Vec2(1.7, -0.5), Vec2(1.8, 0.5)});   // far wall
  env.rects.push_back(Rect{Vec2(1.2, -0.6), Vec2(1.8, -0.5)});  // floor
  const Configuration q = make_config({0.0, 0.0});
  REQUIRE_FALSE(is_config_free(env, q));

  // Independent confirmation: walk each link's spine densely and measure
  // point-to-rectangle clearance.
  const RobotShape s = forward_kinematics(env, q);
  bool dense_hit = false;
  for (const Capsule& cap : s.capsules) {
    for (int i = 0; i <= 2000; ++i) {
      const Vec2 p = cap.a + (double(i) / 2000) * (cap.b - cap.a);
      for (const Rect& r : env.rects) {
        if (point_rect_distance(p, r) <= cap.half_width) dense_hit = true;
      }
    }
  }
  REQUIRE(dense_hit);

  // Lifting the arm above the bin clears it.
  REQUIRE(is_config_free(env, make_config({M_PI / 2, 0.0})));
}

TEST_CASE("non-adjacent links self-collide when folded through each other", "[environment]") {
  Environment env = arm_env({1.0, 1.0, 1.0, 1.0}, 0.05);
  // Link 3 sweeps back across link 1.
  REQUIRE_FALSE(is_config_free(env, make_config({0.0, 3.0, 3.0, 0.0})));
  // A gently curled arm is fine.
  REQUIRE(is_config_free(env, make_config({0.0, 0.1, 0.1, 0.1})));
}

TEST_CASE("segment feasibility discretizes inclusively and symmetrically", "[environment]") {
  Environment env = point_env();
  env.circles.push_back(Circle{Vec2(0, 0), 0.5});

  SECTION("degenerate segment equals the point check") {
    Rng rng(3);
    for (int i = 0; i < 300; ++i) {
      const Configuration q = sample_config(env, rng);
      REQUIRE(is_segment_free(env, Segment{q, q}, 0.1) == is_config_free(env, q));
    }
  }
  SECTION("a midpoint inside an obstacle is always sampled") {
    const Segment s{make_config({-1.0, 0.0}), make_config({1.0, 0.0})};
    REQUIRE_FALSE(is_segment_free(env, s, 1.0));  // resolution = length/2
  }
  SECTION("verdict is independent of endpoint order") {
    Rng rng(4);
    for (int i = 0; i < 1000; ++i) {
      const Configuration a = sample_config(env, rng);
      const Configuration b = sample_config(env, rng);
      REQUIRE(is_segment_free(env, Segment{a, b}, 0.07) ==
              is_segment_free(env, Segment{b, a}, 0.07));
    }
  }
  SECTION("a collision found at resolution r persists at r/k") {
    Rng rng(5);
    int found = 0;
    for (int i = 0; i < 2000 && found < 200; ++i) {
      const Configuration a = sample_config(env, rng);
      const Configuration b = sample_config(env, rng);
      if (!is_segment_free(env, Segment{a, b}, 0.2)) {
        ++found;
        for (int k : {2, 3, 5}) {
          REQUIRE_FALSE(is_segment_free(env, Segment{a, b}, 0.2 / k));
        }
      }
    }
    REQUIRE(found >= 200);
  }
  SECTION("10x finer discretization agrees on at least 99% of random segments") {
    Rng rng(6);
    int agree = 0, disagree = 0;
    for (int i = 0; i < 1000; ++i) {
      const Configuration a = sample_config(env, rng);
      const Configuration b = sample_config(env, rng);
      const bool coarse = is_segment_free(env, Segment{a, b}, 0.1);
      const bool fine = is_segment_free(env, Segment{a, b}, 0.01);
      if (coarse == fine) {
        ++agree;
      } else {
        ++disagree;
        WARN("resolution disagreement on segment " << i << ": coarse=" << coarse
                                                   << " fine=" << fine);
      }
    }
    REQUIRE(agree >= 990);
    REQUIRE(agree + disagree == 1000);
  }
  SECTION("resolution must be positive") {
    const Segment s{make_config({0.0, 1.0}), make_config({1.0, 1.0})};
    REQUIRE_THROWS_AS(is_segment_free(env, s, 0.0), ContractError);
  }
}

TEST_CASE("rejection sampling of free configurations", "[environment]") {
  SECTION("obstacle-free world accepts the first draw") {
    Environment env = point_env();
    Rng rng_a(77), rng_b(77);
    const Configuration direct = sample_config(env, rng_a);
    const Configuration sampled = sample_free_config(env, rng_b, 5);
    REQUIRE(direct == sampled);
  }
  SECTION("fully blocked world exhausts attempts") {
    Environment env = point_env(-1.0, 1.0);
    env.rects.push_back(Rect{Vec2(-2, -2), Vec2(2, 2)});
    Rng rng(78);
    REQUIRE_THROWS_AS(sample_free_config(env, rng, 50), SamplingError);
  }
  SECTION("acceptance rate tracks the free-area fraction") {
    Environment env = point_env(-1.0, 1.0);
    env.rects.push_back(Rect{Vec2(-1.0, -1.0), Vec2(0.0, 1.0)});  // half the square
    Rng rng(79);
    int free = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
      if (is_config_free(env, sample_config(env, rng))) ++free;
    }
    REQUIRE(std::abs(double(free) / n - 0.5) < 0.03);
  }
}

TEST_CASE("bin goal sampling satisfies its postconditions on replay", "[environment]") {
  SECTION("point robot: batch of 500 stays inside the bin") {
    const Environment env = make_point2d_environment();
    Rng rng(101);
    const auto goals = random_goal_conf(env, 500, rng);
    REQUIRE(goals.size() == 500);
    double min_x = 1e9, max_x = -1e9, min_y = 1e9, max_y = -1e9;
    for (const auto& g : goals) {
      REQUIRE(is_config_free(env, g));
      const Vec2 tip = end_effector(env, g);
      REQUIRE(env.bin_region.contains(tip));
      min_x = std::min(min_x, tip.x());
      max_x = std::max(max_x, tip.x());
      min_y = std::min(min_y, tip.y());
      max_y = std::max(max_y, tip.y());
    }
    // The batch spreads over the bin interior rather than clustering.
    REQUIRE(max_x - min_x > 0.5 * env.bin_region.width());
    REQUIRE(max_y - min_y > 0.5 * env.bin_region.height());
  }
  SECTION("planar arm: goals are free with the tip inside the bin") {
    const Environment env = make_arm4_environment();
    Rng rng(102);
    const auto goals = random_goal_conf(env, 6, rng);
    for (const auto& g : goals) {
      REQUIRE(is_config_free(env, g));
      REQUIRE(env.bin_region.contains(end_effector(env, g)));
    }
  }
  SECTION("count must be positive") {
    const Environment env = make_point2d_environment();
    Rng rng(103);
    REQUIRE_THROWS_AS(random_goal_conf(env, 0, rng), ContractError);
  }
}

TEST_CASE("environment text format round-trips byte-identically", "[environment]") {
  for (const Environment& env : {make_arm4_environment(), make_point2d_environment()}) {
    const std::string text = environment_to_text(env);
    std::istringstream in(text);
    const Environment parsed = parse_environment(in);
    REQUIRE(environment_to_text(parsed) == text);
    REQUIRE(environment_hash(parsed) == environment_hash(env));
  }
}

TEST_CASE("environment file save/load preserves the oracle", "[environment]") {
  const Environment env = make_arm4_environment();
  const std::string path = "test_env_roundtrip.env";
  save_environment(env, path);
  const Environment loaded = load_environment(path);
  std::remove(path.c_str());
  REQUIRE(loaded.dof == env.dof);
  REQUIRE(loaded.home == env.home);
  REQUIRE(loaded.place == env.place);
  Rng rng(104);
  for (int i = 0; i < 200; ++i) {
    const Configuration q = sample_config(env, rng);
    REQUIRE(is_config_free(env, q) == is_config_free(loaded, q));
  }
}

TEST_CASE("environment parser rejects malformed input", "[environment]") {
  const std::string good = environment_to_text(make_point2d_environment());

  SECTION("missing schema") {
    std::istringstream in("robot point-2d\ndof 2\n");
    REQUIRE_THROWS_AS(parse_environment(in), FormatError);
  }
  SECTION("unsupported schema version") {
    std::istringstream in("schema 2\n" + good.substr(good.find('\n') + 1));
    REQUIRE_THROWS_AS(parse_environment(in), FormatError);
  }
  SECTION("unknown key") {
    std::istringstream in(good + "gravity 9.81\n");
    REQUIRE_THROWS_AS(parse_environment(in), FormatError);
  }
  SECTION("unknown robot kind") {
    std::istringstream in("schema 1\nrobot hexapod\n");
    REQUIRE_THROWS_AS(parse_environment(in), FormatError);
  }
  SECTION("wrong arity on a numeric key") {
    std::istringstream in("schema 1\nrobot point-2d\ndof 2\nlimit -1\n");
    REQUIRE_THROWS_AS(parse_environment(in), FormatError);
  }
  SECTION("comments and blank lines are ignored") {
    std::istringstream in("# header comment\n\n" + good + "\n# trailing\n");
    REQUIRE(environment_to_text(parse_environment(in)) == good);
  }
}

TEST_CASE("environment validation enforces the construction contract", "[environment]") {
  SECTION("home inside an obstacle is rejected") {
    Environment env = make_point2d_environment();
    env.home = make_config({0.0, 0.0});  // centre of the circle obstacle
    std::istringstream in(environment_to_text(env));
    REQUIRE_THROWS_AS(parse_environment(in), FormatError);
  }
  SECTION("zero-area bin is rejected") {
    Environment env = make_point2d_environment();
    env.bin_region = Rect{Vec2(1, 1), Vec2(1, 2)};
    std::istringstream in(environment_to_text(env));
    REQUIRE_THROWS_AS(parse_environment(in), FormatError);
  }
  SECTION("point robot must be 2-dof") {
    std::istringstream in(
        "schema 1\nrobot point-2d\ndof 3\nlimit -1 1\nlimit -1 1\nlimit -1 1\n"
        "bin 0 0 1 1\nhome 0.5 0.5 0.5\nplace 0.5 0.5 0.5\n");
    REQUIRE_THROWS_AS(parse_environment(in), FormatError);
  }
  SECTION("arm link count must match dof") {
    Environment env = make_arm4_environment();
    env.link_lengths.pop_back();
    REQUIRE_THROWS_AS(validate_environment(env), FormatError);
  }
  SECTION("presets validate cleanly") {
    REQUIRE_NOTHROW(validate_environment(make_arm4_environment()));
    REQUIRE_NOTHROW(validate_environment(make_point2d_environment()));
  }
}

TEST_CASE("within_limits checks the closed box", "[environment]") {
  const Environment env = point_env(-1.0, 1.0);
  REQUIRE(within_limits(env, make_config({1.0, -1.0})));
  REQUIRE_FALSE(within_limits(env, make_config({1.0 + 1e-12, 0.0})));
}

}  // namespace
