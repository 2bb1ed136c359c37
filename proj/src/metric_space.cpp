#include "covtrick/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <utility>

namespace covtrick {

namespace {

std::uint64_t pair_key(Vertex a, Vertex b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

void require_vertex(const MetricSpace& s, Vertex v) {
  if (v >= s.vertex_count()) {
    throw InputError("vertex index " + std::to_string(v) + " out of range");
  }
}

}  // namespace

MetricSpace::MetricSpace(int dimension, std::vector<VertexSpec> vertices,
                         std::vector<EdgeSpec> edges,
                         std::vector<FaceSpec> faces)
    : dimension_(dimension) {
  if (dimension < 1) throw InputError("dimension must be a positive integer");
  if (vertices.empty()) throw InputError("instance has no vertices");

  std::sort(vertices.begin(), vertices.end(),
            [](const VertexSpec& a, const VertexSpec& b) { return a.id < b.id; });
  bool any_positive = false;
  for (const auto& spec : vertices) {
    if (!ids_.empty() && ids_.back() == spec.id) {
      throw InputError("duplicate vertex id " + std::to_string(spec.id));
    }
    if (!std::isfinite(spec.weight) || spec.weight < 0.0) {
      throw InputError("vertex " + std::to_string(spec.id) +
                       " has a negative or non-finite weight");
    }
    any_positive = any_positive || spec.weight > 0.0;
    index_of_.emplace(spec.id, static_cast<Vertex>(ids_.size()));
    ids_.push_back(spec.id);
    weights_.push_back(spec.weight);
  }
  if (!any_positive) throw InputError("at least one vertex weight must be positive");

  adjacency_.resize(ids_.size());
  for (const auto& spec : edges) {
    const Vertex u = vertex(spec.u);
    const Vertex v = vertex(spec.v);
    if (u == v) throw InputError("self-loop at vertex " + std::to_string(spec.u));
    if (!std::isfinite(spec.length) || spec.length <= 0.0) {
      throw InputError("edge (" + std::to_string(spec.u) + ", " +
                       std::to_string(spec.v) + ") must have positive length");
    }
    const auto [it, inserted] = edge_lookup_.emplace(pair_key(u, v), edges_.size());
    if (!inserted) {
      throw InputError("duplicate edge (" + std::to_string(spec.u) + ", " +
                       std::to_string(spec.v) + ")");
    }
    adjacency_[u].push_back({v, edges_.size()});
    adjacency_[v].push_back({u, edges_.size()});
    edges_.push_back({std::min(u, v), std::max(u, v), spec.length});
  }
  for (auto& row : adjacency_) {
    std::sort(row.begin(), row.end(),
              [](const Adjacency& a, const Adjacency& b) { return a.to < b.to; });
  }

  for (const auto& spec : faces) {
    Face face{vertex(spec[0]), vertex(spec[1]), vertex(spec[2])};
    if (face[0] == face[1] || face[1] == face[2] || face[0] == face[2]) {
      throw InputError("degenerate face");
    }
    std::array<std::size_t, 3> sides{};
    for (int i = 0; i < 3; ++i) {
      const auto e = edge_between(face[i], face[(i + 1) % 3]);
      if (!e) {
        throw InputError("face references missing edge (" +
                         std::to_string(ids_[face[i]]) + ", " +
                         std::to_string(ids_[face[(i + 1) % 3]]) + ")");
      }
      sides[i] = *e;
    }
    std::sort(face.begin(), face.end());
    faces_.push_back(face);
    face_edges_.push_back(sides);
  }

  // Connected components by union-find over edges.
  std::vector<std::size_t> parent(ids_.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& e : edges_) {
    const auto a = find(e.u);
    const auto b = find(e.v);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  component_of_.assign(ids_.size(), 0);
  std::unordered_map<std::size_t, std::size_t> label;
  for (std::size_t v = 0; v < ids_.size(); ++v) {
    const auto root = find(v);
    const auto [it, inserted] = label.emplace(root, label.size());
    component_of_[v] = it->second;
  }
  component_count_ = label.size();
}

Vertex MetricSpace::vertex(std::int64_t id) const {
  const auto it = index_of_.find(id);
  if (it == index_of_.end()) {
    throw InputError("unknown vertex id " + std::to_string(id));
  }
  return it->second;
}

std::optional<std::size_t> MetricSpace::edge_between(Vertex a, Vertex b) const {
  if (a == b) return std::nullopt;
  const auto it = edge_lookup_.find(pair_key(a, b));
  if (it == edge_lookup_.end()) return std::nullopt;
  return it->second;
}

std::vector<double> MetricSpace::dijkstra(Vertex source) const {
  std::vector<double> dist(ids_.size(), kInfinity);
  using Item = std::pair<double, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[source] = 0.0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    for (const auto& adj : adjacency_[u]) {
      const double candidate = d + edges_[adj.edge].length;
      if (candidate < dist[adj.to]) {
        dist[adj.to] = candidate;
        queue.emplace(candidate, adj.to);
      }
    }
  }
  return dist;
}

const std::vector<double>& MetricSpace::distances_from(Vertex source) const {
  if (source >= ids_.size()) {
    throw InputError("vertex index " + std::to_string(source) + " out of range");
  }
  {
    std::lock_guard lock(cache_.mutex_);
    if (cache_.rows_.size() != ids_.size()) cache_.rows_.resize(ids_.size());
    if (cache_.rows_[source]) return *cache_.rows_[source];
  }
  auto row = std::make_unique<const std::vector<double>>(dijkstra(source));
  std::lock_guard lock(cache_.mutex_);
  if (!cache_.rows_[source]) cache_.rows_[source] = std::move(row);
  return *cache_.rows_[source];
}

double distance(const MetricSpace& s, Vertex p, Vertex q) {
  require_vertex(s, q);
  return s.distances_from(p)[q];
}

Ball ball(const MetricSpace& s, Vertex p, double r) {
  return dilated_ball(s, p, r, 1);
}

Ball dilated_ball(const MetricSpace& s, Vertex p, double r, int factor) {
  if (!(r >= 0.0)) throw InputError("ball radius must be nonnegative");
  if (factor < 1) throw InputError("dilation factor must be positive");
  const auto& dist = s.distances_from(p);
  const double scale = factor;
  Ball b{p, r * scale, {}, 0.0};
  for (Vertex v = 0; v < dist.size(); ++v) {
    if (dist[v] / scale <= r) {
      b.members.push_back(v);
      b.volume += s.weight(v);
    }
  }
  return b;
}

double dilated_volume(const MetricSpace& s, Vertex p, double r, int factor) {
  const auto& dist = s.distances_from(p);
  const double scale = factor;
  double volume = 0.0;
  for (Vertex v = 0; v < dist.size(); ++v) {
    if (dist[v] / scale <= r) volume += s.weight(v);
  }
  return volume;
}

double total_volume(const MetricSpace& s) {
  double volume = 0.0;
  for (double w : s.weights()) volume += w;
  return volume;
}

double density(const MetricSpace& s, Vertex p, double r) {
  if (!(r > 0.0)) throw InputError("density radius must be positive");
  return ball(s, p, r).volume / std::pow(r, s.dimension());
}

std::vector<double> breakpoints(const MetricSpace& s, Vertex p, double cap) {
  std::vector<double> values;
  for (double d : s.distances_from(p)) {
    if (d > 0.0 && d <= cap) values.push_back(d);
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

double diameter(const MetricSpace& s) {
  double best = 0.0;
  for (Vertex p = 0; p < s.vertex_count(); ++p) {
    for (double d : s.distances_from(p)) {
      if (d != kInfinity) best = std::max(best, d);
    }
  }
  return best;
}

}  // namespace covtrick
