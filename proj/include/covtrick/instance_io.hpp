#pragma once

// Instance files (JSON):
//   { "dimension": n,
//     "vertices": [{"id": i, "weight": w}, ...],
//     "edges": [{"u": i, "v": j, "length": l}, ...],
//     "faces": [[a, b, c], ...],                 optional
//     "marked_loops": [[v0, v1, ..., v0], ...],  optional
//     "metadata": {...} }                        optional, free-form

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "covtrick/metric_space.hpp"

namespace covtrick {

struct Instance {
  MetricSpace space;
  std::vector<std::vector<Vertex>> marked_loops;  // closed walks
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();
};

Instance instance_from_json(const nlohmann::json& doc);
nlohmann::ordered_json instance_to_json(const Instance& instance);

Instance read_instance(const std::filesystem::path& path);
void write_instance(const std::filesystem::path& path, const Instance& instance);

/// Generator front end shared by the CLI and tests. `kind` is one of
/// cycle, torus, genus, sampled; parameters come from `params`.
Instance make_instance(const std::string& kind, const nlohmann::json& params);

}  // namespace covtrick
