#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ppcnet {

// A configuration is a vector of joint angles in radians. Distances between
// configurations are plain Euclidean (no angular wrapping).
using Configuration = Eigen::VectorXd;

// A path is an ordered waypoint list; successful planner output has >= 2 entries.
using Path = std::vector<Configuration>;

using Rng = std::mt19937_64;

struct Segment {
  Configuration start;
  Configuration end;

  Configuration center() const { return 0.5 * (start + end); }
  double length() const { return (end - start).norm(); }
};

inline double distance(const Configuration& a, const Configuration& b) {
  return (a - b).norm();
}

inline double path_length(const Path& path) {
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    total += distance(path[i - 1], path[i]);
  }
  return total;
}

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
  using Error::Error;
};

// Rejection sampling ran out of attempts; `index` is the batch slot that failed
// (0 for single-sample calls).
struct SamplingError : Error {
  int index;
  SamplingError(const std::string& what, int index_) : Error(what), index(index_) {}
};

struct FormatError : Error {
  using Error::Error;
};

struct ContractError : Error {
  using Error::Error;
};

// 17 significant digits round-trip an IEEE double exactly through decimal text.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stable per-task seed streams so reordering one task never shifts another's draws.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
  std::uint64_t s = splitmix64(base ^ 0x853c49e6748fea9bULL);
  s = splitmix64(s ^ a);
  s = splitmix64(s ^ (b + 0x9e3779b97f4a7c15ULL));
  s = splitmix64(s ^ (c + 0xda942042e4dd58b5ULL));
  return s;
}

inline bool lexicographic_less(const Configuration& a, const Configuration& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

}  // namespace ppcnet
