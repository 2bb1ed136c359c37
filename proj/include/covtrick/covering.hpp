#pragma once

// The covering trick on a finite metric space: admissible radii, k-indices,
// the empirical density constant, maximal disjoint ball systems on a
// carrier set, doubled covers, nerve statistics, the containment lemma and
// the volume inequality chain that bounds the nerve edge count.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "covtrick/metric_space.hpp"
#include "covtrick/topology.hpp"

namespace covtrick {

struct AdmissibleBall {
  Ball ball;  // radius R
  int k = 0;  // R0 / 5^k <= R < R0 / 5^{k-1}, k == 0 iff R == R0
  double vol_R = 0.0;
  double vol_5R = 0.0;
  double alpha_used = 0.0;
  /// Supremum of the admissible set; differs from R when the supremum is
  /// a left limit that no closed ball attains.
  double sup_radius = 0.0;
  bool sup_attained = true;

  Vertex center() const { return ball.center; }
  double radius() const { return ball.radius; }
};

/// R0 / 5^k with 5^k formed exactly.
double five_adic_scale(double r0, int k);

/// Largest admissible radius in (0, R0] for the growth condition
/// vol(B(p, 5r)) <= alpha vol(B(p, r)).
///
/// Both volume maps are right-continuous step functions, so the admissible
/// set is a finite union of half-open intervals whose endpoints lie on the
/// grid {R0} U breakpoints(p, R0) U breakpoints(p, 5 R0) / 5. Within the
/// last admissible interval [c, c') the returned radius is the largest
/// 5-adic scale R0 / 5^k it contains, or c when it contains none. Below the
/// first grid point both balls are {p}, so an admissible radius always
/// exists.
AdmissibleBall admissible_radius(const MetricSpace& s, Vertex p, double r0, double alpha);

int k_index(double r, double r0);

/// inf over p and r in (0, R0] of vol(B(p, r)) / r^n, evaluated exactly from
/// the breakpoints: on each step the density c / r^n decreases, so only left
/// limits and R0 itself need checking.
double empirical_beta(const MetricSpace& s, double r0);

struct ThetaAlpha {
  double theta;
  double alpha;  // 5^{n + theta}
};

ThetaAlpha theta_alpha(double volume, double beta, double r0, int n);

/// A carrier vertex whose ball met an earlier (no smaller) chosen ball.
struct Rejection {
  Vertex vertex;
  double radius;
  std::size_t witness;  // index into BallSystem::balls
};

struct BallSystem {
  std::vector<AdmissibleBall> balls;  // decreasing radius
  double r0 = 0.0;
  double alpha = 0.0;
  std::vector<Vertex> carrier;
  std::vector<Rejection> rejected;
};

/// Greedy maximal system: carrier vertices in order of decreasing admissible
/// radius (ties: smaller vertex), each kept iff its ball is disjoint from
/// every ball kept so far.
BallSystem build_system(const MetricSpace& s, std::span<const Vertex> carrier,
                        double r0, double alpha);
BallSystem build_system(const MetricSpace& s, const HomologyBasis& basis, double r0,
                        double alpha);

/// B(p_j, 2 R_j) for every ball of the system.
std::vector<Ball> doubled_balls(const MetricSpace& s, const BallSystem& sys);

bool doubled_cover_check(const MetricSpace& s, const BallSystem& sys);

struct NerveStats {
  std::size_t balls = 0;       // N
  std::size_t pairs = 0;       // T
  std::size_t components = 0;  // C
  long long cycle_rank() const {
    return static_cast<long long>(pairs) - static_cast<long long>(balls) +
           static_cast<long long>(components);
  }
};

/// Unordered pairs (i, j), i < j, whose doubled balls share a vertex.
std::vector<std::pair<std::size_t, std::size_t>> nerve_edges(const MetricSpace& s,
                                                            const BallSystem& sys);

NerveStats nerve_stats(const MetricSpace& s, const BallSystem& sys);

/// For every intersecting doubled pair with R_l <= R_i, checks
/// B(p_l, R_l) subset of B(p_i, 5 R_i).
bool containment_check(const MetricSpace& s, const BallSystem& sys);

/// Index of the ball an intersecting pair is charged to: the larger radius,
/// ties to the smaller center.
std::size_t charged_side(const BallSystem& sys, std::size_t a, std::size_t b);

struct ChainReport {
  int n = 0;
  double volume = 0.0;       // V
  double sum_vol_R = 0.0;    // sum_j vol(B(p_j, R_j))
  double sum_vol_5R = 0.0;   // sum_j vol(B(p_j, 5 R_j))
  double double_sum = 0.0;   // sum_j sum_{i charged to j} vol(B(p_i, R_i))
  double beta_hat = 0.0;
  double r0 = 0.0;
  double alpha = 0.0;
  std::optional<double> theta;    // sqrt(log_5(V / (beta R0^n))) when defined
  std::size_t pairs = 0;          // T
  int max_charged_k = 0;

  bool l1_disjoint_volume = false;  // disjoint balls, V >= sum vol_R
  bool l2_admissible = false;       // alpha vol_R >= vol_5R per ball
  bool l3_containment = false;      // vol_5R(j) >= sum of charged vol_R
  bool l4_density = false;          // vol_R >= beta_hat R^n
  bool l5_scale = false;            // R >= R0 5^{-k}, k < k-bound

  std::optional<double> k_bound;    // needs alpha > 5^n
  std::optional<double> t_bound;    // needs V / (beta R0^n) >= 1
  double chain_bound = 0.0;         // alpha V / (beta (R0 5^{-kmax})^n)
  bool t_within_chain_bound = false;
  bool t_within_t_bound = false;

  std::vector<std::string> failed_links;

  bool links_pass() const {
    return l1_disjoint_volume && l2_admissible && l3_containment && l4_density && l5_scale;
  }
};

ChainReport verify_chain(const MetricSpace& s, const BallSystem& sys, double beta_hat);

}  // namespace covtrick
