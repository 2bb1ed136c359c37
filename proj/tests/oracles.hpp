#pragma once

// Brute-force reference implementations. They read the instance data
// (vertices, weights, edges, faces) but share no algorithm with the library:
// Floyd-Warshall instead of Dijkstra, dense Gaussian elimination instead of
// the sparse basis, exhaustive simple-cycle search instead of shortest-path
// trees, and a plain sweep over every candidate radius.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "covtrick/metric_space.hpp"

namespace oracle {

using covtrick::MetricSpace;
using covtrick::Vertex;
using Matrix = std::vector<std::vector<double>>;
using Row = std::vector<std::uint8_t>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline Matrix all_pairs(const MetricSpace& s) {
  const std::size_t n = s.vertex_count();
  Matrix d(n, std::vector<double>(n, kInf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  for (const auto& e : s.edges()) {
    d[e.u][e.v] = std::min(d[e.u][e.v], e.length);
    d[e.v][e.u] = std::min(d[e.v][e.u], e.length);
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (d[i][k] == kInf) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
      }
    }
  }
  return d;
}

/// All-pairs distances by Bellman-Ford from every source. Path lengths are
/// accumulated outward from the source, so on instances with non-dyadic
/// lengths the values agree bit for bit with any single-source search, where
/// Floyd-Warshall's split-and-join sums can differ in the last place.
inline Matrix all_pairs_from_sources(const MetricSpace& s) {
  const std::size_t n = s.vertex_count();
  Matrix d(n, std::vector<double>(n, kInf));
  for (std::size_t src = 0; src < n; ++src) {
    auto& row = d[src];
    row[src] = 0.0;
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& e : s.edges()) {
        if (row[e.u] + e.length < row[e.v]) {
          row[e.v] = row[e.u] + e.length;
          changed = true;
        }
        if (row[e.v] + e.length < row[e.u]) {
          row[e.u] = row[e.v] + e.length;
          changed = true;
        }
      }
    }
  }
  return d;
}

inline std::size_t components(const MetricSpace& s, const Matrix& d) {
  std::vector<char> seen(s.vertex_count(), 0);
  std::size_t count = 0;
  for (std::size_t i = 0; i < s.vertex_count(); ++i) {
    if (seen[i]) continue;
    ++count;
    for (std::size_t j = 0; j < s.vertex_count(); ++j) {
      if (d[i][j] < kInf) seen[j] = 1;
    }
  }
  return count;
}

/// Row-reduced copy of `rows`; rank is its size.
inline std::vector<Row> echelon(std::vector<Row> rows) {
  std::vector<Row> out;
  if (rows.empty()) return out;
  const std::size_t width = rows.front().size();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < width && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && !rows[pivot][col]) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != rank && rows[r][col]) {
        for (std::size_t c = 0; c < width; ++c) rows[r][c] ^= rows[rank][c];
      }
    }
    ++rank;
  }
  rows.resize(rank);
  return rows;
}

inline std::size_t rank(const std::vector<Row>& rows) { return echelon(rows).size(); }

inline std::map<std::pair<Vertex, Vertex>, std::size_t> edge_index(const MetricSpace& s) {
  std::map<std::pair<Vertex, Vertex>, std::size_t> index;
  for (std::size_t i = 0; i < s.edge_count(); ++i) {
    const auto& e = s.edges()[i];
    index[{std::min(e.u, e.v), std::max(e.u, e.v)}] = i;
  }
  return index;
}

inline std::vector<Row> face_rows(const MetricSpace& s) {
  const auto index = edge_index(s);
  std::vector<Row> rows;
  for (const auto& f : s.faces()) {
    Row row(s.edge_count(), 0);
    for (int i = 0; i < 3; ++i) {
      const Vertex a = f[i];
      const Vertex b = f[(i + 1) % 3];
      row[index.at({std::min(a, b), std::max(a, b)})] ^= 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::size_t betti1(const MetricSpace& s) {
  const auto d = all_pairs(s);
  const long long cycle_rank = static_cast<long long>(s.edge_count()) -
                               static_cast<long long>(s.vertex_count()) +
                               static_cast<long long>(components(s, d));
  return static_cast<std::size_t>(cycle_rank - static_cast<long long>(rank(face_rows(s))));
}

/// Membership test against the span of face boundaries.
class FaceSpan {
 public:
  explicit FaceSpan(const MetricSpace& s) : basis_(echelon(face_rows(s))) {
    for (const auto& row : basis_) {
      pivots_.push_back(static_cast<std::size_t>(std::find(row.begin(), row.end(), 1) -
                                                 row.begin()));
    }
  }

  bool contains(Row v) const {
    for (std::size_t r = 0; r < basis_.size(); ++r) {
      if (v[pivots_[r]]) {
        for (std::size_t c = 0; c < v.size(); ++c) v[c] ^= basis_[r][c];
      }
    }
    return std::none_of(v.begin(), v.end(), [](std::uint8_t x) { return x != 0; });
  }

 private:
  std::vector<Row> basis_;
  std::vector<std::size_t> pivots_;
};

inline Row walk_row(const MetricSpace& s, const std::vector<Vertex>& closed_walk) {
  const auto index = edge_index(s);
  Row row(s.edge_count(), 0);
  for (std::size_t i = 0; i + 1 < closed_walk.size(); ++i) {
    const Vertex a = closed_walk[i];
    const Vertex b = closed_walk[i + 1];
    row[index.at({std::min(a, b), std::max(a, b)})] ^= 1;
  }
  return row;
}

/// Shortest simple cycle outside the face-boundary span, by exhaustive
/// depth-first enumeration of simple cycles (each rooted at its smallest
/// vertex) with branch-and-bound on the current best length. A cycle's
/// length is its edge lengths summed in ascending order. kInf when every
/// cycle is trivial.
inline double systole(const MetricSpace& s) {
  const auto d = all_pairs(s);
  const FaceSpan span(s);
  const auto index = edge_index(s);
  const std::size_t n = s.vertex_count();
  std::vector<std::vector<std::pair<Vertex, double>>> adj(n);
  for (const auto& e : s.edges()) {
    adj[e.u].push_back({e.v, e.length});
    adj[e.v].push_back({e.u, e.length});
  }
  double best = kInf;
  // Pruning uses walk-order sums; the slack keeps cycles whose sorted sum
  // may land a few ulps lower.
  const double slack = 1.0 + 1e-12;
  std::vector<Vertex> path;
  std::vector<char> on_path(n, 0);
  std::function<void(Vertex, Vertex, double)> extend = [&](Vertex root, Vertex at, double length) {
    for (const auto& [next, w] : adj[at]) {
      if (next < root) continue;
      if (next == root) {
        if (path.size() >= 3 && length + w <= slack * best) {
          Row row(s.edge_count(), 0);
          std::vector<double> lengths;
          for (std::size_t i = 0; i < path.size(); ++i) {
            const Vertex a = path[i];
            const Vertex b = path[(i + 1) % path.size()];
            const auto e = index.at({std::min(a, b), std::max(a, b)});
            row[e] ^= 1;
            lengths.push_back(s.edges()[e].length);
          }
          std::sort(lengths.begin(), lengths.end());
          double total = 0.0;
          for (double x : lengths) total += x;
          if (total < best && !span.contains(std::move(row))) best = total;
        }
        continue;
      }
      if (on_path[next]) continue;
      if (length + w + d[next][root] > slack * best) continue;
      on_path[next] = 1;
      path.push_back(next);
      extend(root, next, length + w);
      path.pop_back();
      on_path[next] = 0;
    }
  };
  for (Vertex root = 0; root < n; ++root) {
    path.assign(1, root);
    on_path[root] = 1;
    extend(root, root, 0.0);
    on_path[root] = 0;
  }
  return best;
}

inline double volume_within(const MetricSpace& s, const Matrix& d, Vertex p, double r,
                            double factor) {
  double volume = 0.0;
  for (std::size_t v = 0; v < s.vertex_count(); ++v) {
    if (d[p][v] / factor <= r) volume += s.weight(static_cast<Vertex>(v));
  }
  return volume;
}

/// Largest admissible radius among every candidate: R0, each distance up to
/// R0, each distance / 5 up to R0, and every scale R0 / 5^k down past the
/// smallest of these.
inline double admissible_radius(const MetricSpace& s, const Matrix& d, Vertex p, double r0,
                                double alpha) {
  std::vector<double> candidates{r0};
  double smallest = r0;
  for (std::size_t v = 0; v < s.vertex_count(); ++v) {
    const double x = d[p][v];
    if (x == 0.0 || x == kInf) continue;
    for (double c : {x, x / 5.0}) {
      if (c <= r0) {
        candidates.push_back(c);
        smallest = std::min(smallest, c);
      }
    }
  }
  for (int k = 0; r0 / std::pow(5.0, k) >= smallest / 25.0; ++k) {
    candidates.push_back(r0 / std::pow(5.0, k));
  }
  double best = 0.0;
  for (double r : candidates) {
    if (volume_within(s, d, p, r, 5.0) <= alpha * volume_within(s, d, p, r, 1.0)) {
      best = std::max(best, r);
    }
  }
  return best;
}

/// Greedy maximal disjoint system over `carrier` with given radii: decreasing
/// radius, ties by smaller vertex, kept iff disjoint from all kept balls.
inline std::vector<Vertex> greedy_centers(const MetricSpace& s, const Matrix& d,
                                          std::vector<std::pair<Vertex, double>> candidates) {
  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::pair<Vertex, double>> kept;
  for (const auto& [p, r] : candidates) {
    bool disjoint = true;
    for (const auto& [q, rq] : kept) {
      for (std::size_t x = 0; x < s.vertex_count() && disjoint; ++x) {
        if (d[p][x] <= r && d[q][x] <= rq) disjoint = false;
      }
    }
    if (disjoint) kept.push_back({p, r});
  }
  std::vector<Vertex> out;
  for (const auto& [p, r] : kept) out.push_back(p);
  return out;
}

/// Random connected graph: a random spanning tree plus `extra` chords, with
/// lengths drawn from a small set so ties occur, and random weights.
inline MetricSpace random_graph(std::mt19937_64& rng, int vertices, int extra, int dimension) {
  std::uniform_int_distribution<int> length_pick(1, 4);
  std::uniform_real_distribution<double> weight_pick(0.25, 2.0);
  std::vector<covtrick::VertexSpec> vs;
  for (int i = 0; i < vertices; ++i) vs.push_back({i, weight_pick(rng)});
  std::map<std::pair<int, int>, double> edges;
  for (int i = 1; i < vertices; ++i) {
    std::uniform_int_distribution<int> parent(0, i - 1);
    edges[{parent(rng), i}] = 0.5 * length_pick(rng);
  }
  std::uniform_int_distribution<int> any(0, vertices - 1);
  for (int t = 0; t < extra; ++t) {
    int a = any(rng);
    int b = any(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    edges.emplace(std::make_pair(a, b), 0.5 * length_pick(rng));
  }
  std::vector<covtrick::EdgeSpec> es;
  for (const auto& [ab, len] : edges) es.push_back({ab.first, ab.second, len});
  return MetricSpace(dimension, std::move(vs), std::move(es));
}

/// Random graph plus a random subset of its triangles as faces.
inline MetricSpace random_complex(std::mt19937_64& rng, int vertices, int extra) {
  const auto g = random_graph(rng, vertices, extra, 2);
  std::vector<covtrick::VertexSpec> vs;
  for (Vertex v = 0; v < g.vertex_count(); ++v) vs.push_back({g.id(v), g.weight(v)});
  std::vector<covtrick::EdgeSpec> es;
  for (const auto& e : g.edges()) es.push_back({g.id(e.u), g.id(e.v), e.length});
  std::vector<covtrick::FaceSpec> fs;
  std::bernoulli_distribution keep(0.6);
  const auto n = static_cast<Vertex>(g.vertex_count());
  for (Vertex a = 0; a < n; ++a) {
    for (Vertex b = a + 1; b < n; ++b) {
      if (!g.edge_between(a, b)) continue;
      for (Vertex c = b + 1; c < n; ++c) {
        if (g.edge_between(a, c) && g.edge_between(b, c) && keep(rng)) fs.push_back({a, b, c});
      }
    }
  }
  return MetricSpace(2, vs, es, fs);
}

}  // namespace oracle
