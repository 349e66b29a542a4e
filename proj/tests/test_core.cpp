#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <set>

#include "ppcnet/core.hpp"

namespace {

using namespace ppcnet;

Configuration make_config(std::initializer_list<double> values) {
  Configuration q(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) q[i++] = v;
  return q;
}

TEST_CASE("segment center and length are derived from the endpoints", "[core]") {
  Segment s{make_config({1.0, 2.0}), make_config({3.0, 6.0})};
  REQUIRE(s.center().isApprox(make_config({2.0, 4.0})));
  REQUIRE(s.length() == Catch::Approx(std::sqrt(4.0 + 16.0)).epsilon(1e-15));

  SECTION("degenerate segment has zero length and center at the point") {
    Segment d{make_config({-0.5, 0.25}), make_config({-0.5, 0.25})};
    REQUIRE(d.length() == 0.0);
    REQUIRE(d.center() == d.start);
  }
}

TEST_CASE("distance is Euclidean with no angular wrapping", "[core]") {
  const Configuration a = make_config({3.0});
  const Configuration b = make_config({-3.0});
  // Wrapped angular distance would be ~0.283; plain Euclidean is 6.
  REQUIRE(distance(a, b) == 6.0);
  REQUIRE(distance(a, a) == 0.0);
  REQUIRE(distance(make_config({0.0, 3.0}), make_config({4.0, 0.0})) == 5.0);
}

TEST_CASE("path_length sums consecutive waypoint distances", "[core]") {
  Path p{make_config({0.0, 0.0}), make_config({1.0, 0.0}), make_config({1.0, 2.0})};
  REQUIRE(path_length(p) == Catch::Approx(3.0).epsilon(1e-15));
  REQUIRE(path_length({}) == 0.0);
  REQUIRE(path_length({make_config({5.0})}) == 0.0);
}

TEST_CASE("format_double round-trips doubles exactly through text", "[core]") {
  Rng rng(123456789);
  std::uniform_real_distribution<double> mag(-40.0, 40.0);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double v = mant(rng) * std::pow(2.0, mag(rng));
    const std::string text = format_double(v);
    const double parsed = std::strtod(text.c_str(), nullptr);
    REQUIRE(parsed == v);
  }
  REQUIRE(std::strtod(format_double(0.0).c_str(), nullptr) == 0.0);
  REQUIRE(std::strtod(format_double(-0.1).c_str(), nullptr) == -0.1);
}

TEST_CASE("splitmix64 is a deterministic bijective-style mixer", "[core]") {
  REQUIRE(splitmix64(0) == splitmix64(0));
  REQUIRE(splitmix64(1) != splitmix64(2));
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 4096; ++i) seen.insert(splitmix64(i));
  REQUIRE(seen.size() == 4096);  // no collisions over a contiguous block
}

TEST_CASE("derive_seed separates task streams", "[core]") {
  REQUIRE(derive_seed(7, 1, 2, 3) == derive_seed(7, 1, 2, 3));
  REQUIRE(derive_seed(7, 1, 2, 3) != derive_seed(8, 1, 2, 3));
  REQUIRE(derive_seed(7, 1, 2, 3) != derive_seed(7, 2, 2, 3));
  REQUIRE(derive_seed(7, 1, 2, 3) != derive_seed(7, 1, 3, 3));
  REQUIRE(derive_seed(7, 1, 2, 3) != derive_seed(7, 1, 2, 4));
  // Swapping argument positions yields distinct streams.
  REQUIRE(derive_seed(7, 1, 2, 3) != derive_seed(7, 2, 1, 3));
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 16; ++a)
    for (std::uint64_t b = 0; b < 16; ++b)
      for (std::uint64_t c = 0; c < 16; ++c) seen.insert(derive_seed(99, a, b, c));
  REQUIRE(seen.size() == 16 * 16 * 16);
}

TEST_CASE("lexicographic_less is a strict weak ordering on equal-size vectors", "[core]") {
  const Configuration a = make_config({1.0, 2.0});
  const Configuration b = make_config({1.0, 3.0});
  const Configuration c = make_config({2.0, 0.0});
  REQUIRE(lexicographic_less(a, b));
  REQUIRE_FALSE(lexicographic_less(b, a));
  REQUIRE(lexicographic_less(a, c));
  REQUIRE(lexicographic_less(b, c));
  REQUIRE_FALSE(lexicographic_less(a, a));
}

TEST_CASE("error types form one catchable family", "[core]") {
  REQUIRE_THROWS_AS(throw DimensionError("d"), Error);
  REQUIRE_THROWS_AS(throw FormatError("f"), Error);
  REQUIRE_THROWS_AS(throw ContractError("c"), Error);
  try {
    throw SamplingError("ran dry", 17);
  } catch (const SamplingError& e) {
    REQUIRE(e.index == 17);
    REQUIRE(std::string(e.what()) == "ran dry");
  }
}

}  // namespace
