#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ppcnet/core.hpp"
#include "ppcnet/expert.hpp"
#include "ppcnet/kdtree.hpp"

namespace ppcnet {

// One supervised step for the planner network: at `current`, heading for
// `goal`, the expert moved to `next` over an oracle-free segment.
struct PlannerSample {
  Configuration current;
  Configuration goal;
  Configuration next;
};

// One oracle-labeled segment for the collision network. `free` is the exact
// verdict; `population_label` (collision-free fraction of the radius
// neighborhood) is filled in by label_all_population, -1 until then.
struct CollisionSample {
  Segment segment;
  bool free = false;
  double population_label = -1.0;

  bool has_population_label() const { return population_label >= 0.0; }
};

// In-memory store for the planner demonstrations (D) and collision events (C),
// with a KD-tree over segment centers for radius queries. Mutation is single
// writer; queries between mutations are read-only.
class Dataset {
 public:
  explicit Dataset(std::string env_hash = "") : env_hash_(std::move(env_hash)) {}

  const std::string& env_hash() const { return env_hash_; }
  void set_env_hash(std::string h) { env_hash_ = std::move(h); }

  const std::vector<PlannerSample>& planner_samples() const { return planner_; }
  const std::vector<CollisionSample>& collision_samples() const { return collision_; }
  std::vector<CollisionSample>& collision_samples_mutable() { return collision_; }

  // Emits one sample per consecutive waypoint pair, all sharing `goal`.
  int append_demonstration(const Path& path, const Configuration& goal) {
    if (path.size() < 2) throw ContractError("append_demonstration: path needs >= 2 waypoints");
    const int added = static_cast<int>(path.size()) - 1;
    for (std::size_t i = 1; i < path.size(); ++i) {
      planner_.push_back(PlannerSample{path[i - 1], goal, path[i]});
    }
    return added;
  }

  int append_collision_events(const std::vector<CollisionEvent>& events) {
    for (const CollisionEvent& e : events) {
      collision_.push_back(CollisionSample{e.segment, e.free, -1.0});
    }
    index_stale_ = true;
    return static_cast<int>(events.size());
  }

  const KdTree& center_index() {
    rebuild_index_if_stale();
    return index_;
  }

  // Collision-free fraction of the stored samples whose centers lie within
  // `radius` of this sample's center. The sample itself is in its own
  // neighborhood, so the count is never zero.
  double population_label(std::size_t sample_id, double radius) {
    if (radius <= 0.0) throw ContractError("population_label: radius must be > 0");
    if (sample_id >= collision_.size()) throw ContractError("population_label: bad sample id");
    rebuild_index_if_stale();
    const std::vector<int> hood =
        index_.radius_query(collision_[sample_id].segment.center(), radius);
    int free_count = 0;
    for (int id : hood) {
      if (collision_[static_cast<std::size_t>(id)].free) ++free_count;
    }
    return static_cast<double>(free_count) / static_cast<double>(hood.size());
  }

  void label_all_population(double radius) {
    if (collision_.empty()) return;
    rebuild_index_if_stale();
    for (std::size_t i = 0; i < collision_.size(); ++i) {
      collision_[i].population_label = population_label(i, radius);
    }
  }

  void clear_population_labels() {
    for (CollisionSample& s : collision_) s.population_label = -1.0;
  }

  // --- persistence ----------------------------------------------------------
  //
  // Line-delimited decimal text, 17 significant digits. First line is the
  // header: "<magic> <schema-version> <environment-hash>".
  //   planner row:   dim current[dim] goal[dim] next[dim]
  //   collision row: dim start[dim] end[dim] free(0|1) pop_label(-1 if unset)

  static constexpr const char* kPlannerMagic = "ppcnet-planner-data";
  static constexpr const char* kCollisionMagic = "ppcnet-collision-data";

  void save_planner(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw FormatError("dataset: cannot write '" + path + "'");
    out << kPlannerMagic << " 1 " << env_hash_ << "\n";
    for (const PlannerSample& s : planner_) {
      out << s.current.size();
      write_vector(out, s.current);
      write_vector(out, s.goal);
      write_vector(out, s.next);
      out << "\n";
    }
  }

  void save_collision(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw FormatError("dataset: cannot write '" + path + "'");
    out << kCollisionMagic << " 1 " << env_hash_ << "\n";
    for (const CollisionSample& s : collision_) {
      out << s.segment.start.size();
      write_vector(out, s.segment.start);
      write_vector(out, s.segment.end);
      out << " " << (s.free ? 1 : 0) << " " << format_double(s.population_label);
      out << "\n";
    }
  }

  void load_planner(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("dataset: cannot open '" + path + "'");
    read_header(in, kPlannerMagic, path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      int dim = 0;
      if (!(ls >> dim) || dim < 1) throw FormatError("dataset: bad row in '" + path + "'");
      PlannerSample s;
      s.current = read_vector(ls, dim, path);
      s.goal = read_vector(ls, dim, path);
      s.next = read_vector(ls, dim, path);
      planner_.push_back(std::move(s));
    }
  }

  void load_collision(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("dataset: cannot open '" + path + "'");
    read_header(in, kCollisionMagic, path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      int dim = 0;
      if (!(ls >> dim) || dim < 1) throw FormatError("dataset: bad row in '" + path + "'");
      CollisionSample s;
      s.segment.start = read_vector(ls, dim, path);
      s.segment.end = read_vector(ls, dim, path);
      int free_flag = 0;
      if (!(ls >> free_flag >> s.population_label)) {
        throw FormatError("dataset: bad row in '" + path + "'");
      }
      s.free = free_flag != 0;
      collision_.push_back(std::move(s));
    }
    index_stale_ = true;
  }

 private:
  void rebuild_index_if_stale() {
    if (!index_stale_) return;
    std::vector<Configuration> centers;
    centers.reserve(collision_.size());
    for (const CollisionSample& s : collision_) centers.push_back(s.segment.center());
    index_.build(centers);
    index_stale_ = false;
  }

  static void write_vector(std::ostream& out, const Configuration& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) out << " " << format_double(v[i]);
  }

  static Configuration read_vector(std::istringstream& in, int dim, const std::string& path) {
    Configuration v(dim);
    for (int i = 0; i < dim; ++i) {
      if (!(in >> v[i])) throw FormatError("dataset: truncated row in '" + path + "'");
    }
    return v;
  }

  void read_header(std::istream& in, const std::string& magic, const std::string& path) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("dataset: empty file '" + path + "'");
    std::istringstream ls(line);
    std::string got_magic, got_hash;
    int version = 0;
    if (!(ls >> got_magic >> version >> got_hash) || got_magic != magic) {
      throw FormatError("dataset: bad header in '" + path + "'");
    }
    if (version != 1) throw FormatError("dataset: unsupported schema in '" + path + "'");
    if (env_hash_.empty()) {
      env_hash_ = got_hash;
    } else if (env_hash_ != got_hash) {
      throw FormatError("dataset: environment hash mismatch in '" + path + "' (expected " +
                        env_hash_ + ", got " + got_hash + ")");
    }
  }

  std::string env_hash_;
  std::vector<PlannerSample> planner_;
  std::vector<CollisionSample> collision_;
  KdTree index_;
  bool index_stale_ = true;
};

}  // namespace ppcnet
