#pragma once

// Finite metric spaces realized as weighted graphs with optional triangle
// faces. Distances are shortest-path lengths; volume lives on vertices.

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace covtrick {

/// Internal vertex index. Indices follow increasing external id.
using Vertex = std::uint32_t;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Malformed input: unknown ids, bad lengths, invalid walks, bad parameters.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A well-formed request whose mathematical preconditions do not hold
/// (ratio below 1, nonpositive denominator, no systole, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct VertexSpec {
  std::int64_t id;
  double weight;
};

struct EdgeSpec {
  std::int64_t u;
  std::int64_t v;
  double length;
};

using FaceSpec = std::array<std::int64_t, 3>;

struct Edge {
  Vertex u;
  Vertex v;
  double length;
};

using Face = std::array<Vertex, 3>;

struct Adjacency {
  Vertex to;
  std::size_t edge;
};

class MetricSpace {
 public:
  /// Validates every structural invariant and throws InputError on the
  /// first violation.
  MetricSpace(int dimension, std::vector<VertexSpec> vertices,
              std::vector<EdgeSpec> edges, std::vector<FaceSpec> faces = {});

  MetricSpace(const MetricSpace&) = default;
  MetricSpace(MetricSpace&&) noexcept = default;
  MetricSpace& operator=(const MetricSpace&) = default;
  MetricSpace& operator=(MetricSpace&&) noexcept = default;

  int dimension() const { return dimension_; }
  std::size_t vertex_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t face_count() const { return faces_.size(); }
  bool has_faces() const { return !faces_.empty(); }

  std::int64_t id(Vertex v) const { return ids_.at(v); }
  /// External id -> internal index; throws InputError for unknown ids.
  Vertex vertex(std::int64_t id) const;
  bool contains_id(std::int64_t id) const { return index_of_.contains(id); }

  double weight(Vertex v) const { return weights_.at(v); }
  std::span<const double> weights() const { return weights_; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const Face> faces() const { return faces_; }
  /// Edge indices of each face, parallel to faces().
  std::span<const std::array<std::size_t, 3>> face_edges() const {
    return face_edges_;
  }
  std::span<const Adjacency> neighbors(Vertex v) const { return adjacency_.at(v); }
  std::optional<std::size_t> edge_between(Vertex a, Vertex b) const;

  /// Single-source shortest-path distances (kInfinity across components).
  /// Rows are memoized; the cache is safe to share between threads.
  const std::vector<double>& distances_from(Vertex source) const;

  std::size_t component_count() const { return component_count_; }
  /// Component label of each vertex, labels 0..component_count()-1.
  std::span<const std::size_t> components() const { return component_of_; }

 private:
  class DistanceCache {
   public:
    DistanceCache() = default;
    DistanceCache(const DistanceCache&) : DistanceCache() {}
    DistanceCache& operator=(const DistanceCache&) {
      std::lock_guard lock(mutex_);
      rows_.clear();
      return *this;
    }
    DistanceCache(DistanceCache&&) noexcept : DistanceCache() {}
    DistanceCache& operator=(DistanceCache&&) noexcept {
      std::lock_guard lock(mutex_);
      rows_.clear();
      return *this;
    }

    std::mutex mutex_;
    std::vector<std::unique_ptr<const std::vector<double>>> rows_;
  };

  std::vector<double> dijkstra(Vertex source) const;

  int dimension_;
  std::vector<std::int64_t> ids_;
  std::unordered_map<std::int64_t, Vertex> index_of_;
  std::vector<double> weights_;
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, std::size_t> edge_lookup_;
  std::vector<std::vector<Adjacency>> adjacency_;
  std::vector<Face> faces_;
  std::vector<std::array<std::size_t, 3>> face_edges_;
  std::vector<std::size_t> component_of_;
  std::size_t component_count_ = 0;
  mutable DistanceCache cache_;
};

struct Ball {
  Vertex center;
  double radius;
  std::vector<Vertex> members;  // sorted ascending
  double volume;
};

double distance(const MetricSpace& s, Vertex p, Vertex q);

/// Closed ball {v : d(p, v) <= r}.
Ball ball(const MetricSpace& s, Vertex p, double r);

/// Closed ball of radius factor * r. Membership is tested as
/// d(p, v) / factor <= r, so a radius obtained by dividing a distance by
/// `factor` reaches exactly that distance.
Ball dilated_ball(const MetricSpace& s, Vertex p, double r, int factor);

/// Volume of the dilated ball without materializing its members.
double dilated_volume(const MetricSpace& s, Vertex p, double r, int factor);

double total_volume(const MetricSpace& s);

/// vol(B(p, r)) / r^n with n = s.dimension().
double density(const MetricSpace& s, Vertex p, double r);

/// Sorted distinct values of d(p, .) in (0, cap].
std::vector<double> breakpoints(const MetricSpace& s, Vertex p, double cap);

/// Largest finite distance between vertices of the same component.
double diameter(const MetricSpace& s);

}  // namespace covtrick
