#pragma once

// GF(2) homology of a weighted graph or triangulated 2-complex: first Betti
// number, a short homology basis, the homological systole, and
// contractibility of balls.

#include <cstddef>
#include <optional>
#include <vector>

#include "covtrick/gf2.hpp"
#include "covtrick/metric_space.hpp"

namespace covtrick {

/// Closed edge walk. vertices.front() == vertices.back().
struct Loop {
  std::vector<Vertex> vertices;
  std::vector<std::size_t> edges;  // traversed edge indices, walk order
  double length = 0.0;
};

struct HomologyBasis {
  std::vector<Loop> loops;
  std::vector<Vertex> carrier;  // sorted union of loop vertices
};

/// Validates a closed walk (consecutive vertices adjacent, first == last,
/// at least one edge) and sums its length in walk order.
Loop make_loop(const MetricSpace& s, std::vector<Vertex> walk);

/// Edge-incidence vector of the loop; repeated traversals cancel.
BitVector cycle_vector(const MetricSpace& s, const Loop& loop);

/// Span of all face boundaries.
Gf2Basis face_boundary_basis(const MetricSpace& s);

std::size_t betti1(const MetricSpace& s);

/// Greedy shortest-first basis from the fundamental cycles of every
/// shortest-path tree. Ties break on the canonical vertex sequence (rotated to
/// start at the smallest vertex, oriented toward its smaller neighbour).
/// Empty when betti1 == 0.
HomologyBasis homology_basis(const MetricSpace& s);

/// Basis from user-supplied loops. Each loop must be nontrivial, the set
/// independent modulo faces, and its size equal to betti1.
HomologyBasis basis_from_loops(const MetricSpace& s, std::vector<Loop> loops);

/// Length of the shortest cycle with a nontrivial class; nullopt when
/// betti1 == 0. The edge lengths are summed in ascending order, so the value
/// does not depend on where or in which direction the cycle is traversed.
std::optional<double> systole(const MetricSpace& s);

bool is_trivial_cycle(const MetricSpace& s, const Loop& loop);

/// Induced subcomplex on the ball's members is connected with betti1 == 0.
bool ball_contractible(const MetricSpace& s, const Ball& b);

/// total_volume / systole^2 for a 2-dimensional instance.
double systolic_ratio(const MetricSpace& s);

/// Canonical rotation/orientation of a simple cycle given as a cyclic vertex
/// sequence without the repeated endpoint.
std::vector<Vertex> canonical_cycle(std::vector<Vertex> cycle);

}  // namespace covtrick
