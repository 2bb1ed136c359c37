#pragma once

// End-to-end run on one instance: topology, empirical beta, alpha choice,
// ball system, nerve, containment, inequality chain and bound evaluations,
// collected into a report that serializes to JSON and CSV and can be
// re-verified from its serialized form alone.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "covtrick/covering.hpp"
#include "covtrick/instance_io.hpp"

namespace covtrick {

struct R0Policy {
  enum class Kind { absolute, systole_fraction };
  Kind kind = Kind::systole_fraction;
  double value = 0.24;

  static R0Policy absolute(double r) { return {Kind::absolute, r}; }
  static R0Policy systole_fraction(double q) { return {Kind::systole_fraction, q}; }
};

struct AlphaPolicy {
  enum class Kind { absolute, theta_rule };
  Kind kind = Kind::theta_rule;
  double value = 0.0;  // used by absolute only

  static AlphaPolicy absolute(double a) { return {Kind::absolute, a}; }
  static AlphaPolicy theta_rule() { return {Kind::theta_rule, 0.0}; }
};

/// Parses "abs:X" / "sys:Q" and "theta" / a bare number.
R0Policy parse_r0_policy(const std::string& text);
AlphaPolicy parse_alpha_policy(const std::string& text);

struct PipelineOptions {
  R0Policy r0;
  AlphaPolicy alpha;
};

/// Failure inside a named pipeline stage.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message);
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct BallRecord {
  std::int64_t center_id = 0;
  double radius = 0.0;
  int k = 0;
  double vol_R = 0.0;
  double vol_5R = 0.0;
  double sup_radius = 0.0;
  bool sup_attained = true;
  std::vector<std::int64_t> members;
  std::vector<std::int64_t> doubled_members;
  std::vector<std::int64_t> dilated5_members;
  double diameter = 0.0;          // of the R-ball, ambient metric
  double doubled_diameter = 0.0;  // of the 2R-ball
  bool contractible = false;
  bool doubled_contractible = false;
};

struct RejectionRecord {
  std::int64_t vertex_id = 0;
  double radius = 0.0;
  std::size_t witness = 0;
};

struct PipelineReport {
  nlohmann::ordered_json instance_metadata = nlohmann::ordered_json::object();
  nlohmann::ordered_json instance_data;  // the full input instance
  PipelineOptions options;

  int dimension = 0;
  std::size_t vertex_count = 0;
  std::size_t edge_count = 0;
  std::size_t face_count = 0;
  std::string b1_notion;  // "homology" with faces, else "graph_cycle_rank"
  std::size_t b1 = 0;
  std::optional<double> systole;
  std::optional<double> systolic_ratio;
  double volume = 0.0;
  std::string basis_source;  // "shortest" or "marked"
  std::vector<std::vector<std::int64_t>> basis;
  std::vector<double> basis_lengths;
  std::vector<std::int64_t> carrier;

  double r0 = 0.0;
  double beta_hat = 0.0;
  std::optional<double> theta;
  double alpha = 0.0;

  std::vector<BallRecord> balls;
  std::vector<RejectionRecord> rejected;
  std::vector<std::pair<std::size_t, std::size_t>> nerve_pairs;
  NerveStats nerve;
  ChainReport chain;

  std::optional<double> k_bound;
  std::optional<double> t_bound;
  double main_lower_sqrt = 0.0;
  double main_lower_sqrt_log = 0.0;
  double durumeric = 0.0;

  // Hypotheses under which the nerve counts bound b1.
  bool r0_below_quarter_systole = false;
  bool doubled_balls_contractible = false;
  bool balls_below_systole = false;  // every R- and 2R-ball diameter < systole

  bool doubled_cover = false;
  bool containment = false;
  bool chain_ok = false;
  bool nerve_accounting = false;  // b1 <= T - N + C, when the hypotheses hold
  bool pair_counting = false;     // b1 <= N (N - 1) / 2, same hypotheses

  bool all_verdicts() const {
    return doubled_cover && containment && chain_ok && nerve_accounting && pair_counting;
  }
};

PipelineReport run_pipeline(const Instance& instance, const PipelineOptions& options = {});

nlohmann::ordered_json report_to_json(const PipelineReport& report);
std::string report_to_csv(const PipelineReport& report);

struct VerdictCheck {
  std::string name;
  bool stored = false;
  bool recomputed = false;
};

struct VerifyOutcome {
  std::vector<VerdictCheck> checks;
  std::vector<std::string> problems;  // inconsistencies in the serialized data

  bool ok() const;
};

/// Re-derives every verdict from a serialized report.
VerifyOutcome verify_report(const nlohmann::json& report);

}  // namespace covtrick
