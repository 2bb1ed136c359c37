#include "covtrick/instance_io.hpp"

#include <fstream>
#include <sstream>

#include "covtrick/generators.hpp"

namespace covtrick {

namespace {

template <class T>
T field(const nlohmann::json& obj, const char* name) {
  if (!obj.is_object() || !obj.contains(name)) {
    throw InputError(std::string("instance: missing field \"") + name + "\"");
  }
  try {
    return obj.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(std::string("instance: field \"") + name + "\" has the wrong type");
  }
}

template <class T>
T param(const nlohmann::json& params, const char* name, T fallback) {
  if (!params.contains(name)) return fallback;
  return params.at(name).get<T>();
}

}  // namespace

Instance instance_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InputError("instance: top level must be an object");
  const int dimension = field<int>(doc, "dimension");

  std::vector<VertexSpec> vertices;
  for (const auto& v : field<nlohmann::json>(doc, "vertices")) {
    vertices.push_back({field<std::int64_t>(v, "id"), field<double>(v, "weight")});
  }
  std::vector<EdgeSpec> edges;
  for (const auto& e : field<nlohmann::json>(doc, "edges")) {
    edges.push_back({field<std::int64_t>(e, "u"), field<std::int64_t>(e, "v"),
                     field<double>(e, "length")});
  }
  std::vector<FaceSpec> faces;
  if (doc.contains("faces")) {
    for (const auto& f : doc.at("faces")) {
      if (!f.is_array() || f.size() != 3) throw InputError("instance: faces are vertex triples");
      faces.push_back({f[0].get<std::int64_t>(), f[1].get<std::int64_t>(),
                       f[2].get<std::int64_t>()});
    }
  }

  Instance instance{MetricSpace(dimension, std::move(vertices), std::move(edges),
                                std::move(faces)),
                    {},
                    nlohmann::ordered_json::object()};
  if (doc.contains("marked_loops")) {
    for (const auto& loop : doc.at("marked_loops")) {
      std::vector<Vertex> walk;
      for (const auto& id : loop) walk.push_back(instance.space.vertex(id.get<std::int64_t>()));
      instance.marked_loops.push_back(std::move(walk));
    }
  }
  if (doc.contains("metadata")) {
    instance.metadata = nlohmann::ordered_json::parse(doc.at("metadata").dump());
  }
  return instance;
}

nlohmann::ordered_json instance_to_json(const Instance& instance) {
  const auto& s = instance.space;
  nlohmann::ordered_json doc;
  doc["dimension"] = s.dimension();
  auto& vertices = doc["vertices"] = nlohmann::ordered_json::array();
  for (Vertex v = 0; v < s.vertex_count(); ++v) {
    vertices.push_back({{"id", s.id(v)}, {"weight", s.weight(v)}});
  }
  auto& edges = doc["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : s.edges()) {
    edges.push_back({{"u", s.id(e.u)}, {"v", s.id(e.v)}, {"length", e.length}});
  }
  if (s.has_faces()) {
    auto& faces = doc["faces"] = nlohmann::ordered_json::array();
    for (const auto& f : s.faces()) faces.push_back({s.id(f[0]), s.id(f[1]), s.id(f[2])});
  }
  if (!instance.marked_loops.empty()) {
    auto& loops = doc["marked_loops"] = nlohmann::ordered_json::array();
    for (const auto& walk : instance.marked_loops) {
      auto ids = nlohmann::ordered_json::array();
      for (auto v : walk) ids.push_back(s.id(v));
      loops.push_back(std::move(ids));
    }
  }
  if (!instance.metadata.empty()) doc["metadata"] = instance.metadata;
  return doc;
}

Instance read_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open instance file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("instance file " + path.string() + " is not valid JSON: " + e.what());
  }
  return instance_from_json(doc);
}

void write_instance(const std::filesystem::path& path, const Instance& instance) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write instance file " + path.string());
  out << instance_to_json(instance).dump(1) << '\n';
}

Instance make_instance(const std::string& kind, const nlohmann::json& params) {
  nlohmann::ordered_json meta;
  meta["generator"] = kind;
  if (kind == "cycle") {
    const int k = param(params, "k", 10);
    meta["k"] = k;
    return {gen_cycle(k), {}, meta};
  }
  if (kind == "torus") {
    const int m = param(params, "m", 4);
    const bool faces = param(params, "faces", true);
    meta["m"] = m;
    meta["with_faces"] = faces;
    return {gen_grid_torus(m, faces), {}, meta};
  }
  if (kind == "genus") {
    const int g = param(params, "g", 2);
    const int subdiv = param(params, "subdiv", 1);
    meta["g"] = g;
    meta["subdiv"] = subdiv;
    return {gen_genus_surface(g, subdiv), {}, meta};
  }
  if (kind == "sampled") {
    const auto sampled_kind = parse_sampled_kind(param<std::string>(params, "kind", "torus_embed"));
    const int count = param(params, "count", 200);
    const int knn = param(params, "knn", 8);
    const auto seed = param<std::uint64_t>(params, "seed", 1);
    auto sampled = gen_sampled(sampled_kind, count, knn, seed);
    meta["kind"] = to_string(sampled_kind);
    meta["count"] = count;
    meta["knn"] = knn;
    meta["knn_used"] = sampled.knn_used;
    meta["seed"] = seed;
    meta["face_data"] = false;
    return {std::move(sampled.space), {}, meta};
  }
  throw InputError("unknown generator '" + kind + "' (cycle, torus, genus, sampled)");
}

}  // namespace covtrick
