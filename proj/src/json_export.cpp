#include "mbtgen/json_export.hpp"

#include <fstream>
#include <stdexcept>
#include <system_error>
#include <unordered_set>

#include "json.hpp"
#include "mbtgen/error.hpp"

namespace mbtgen {
namespace {

using Json = nlohmann::ordered_json;

Json to_json(const ModelDocument& document) {
  const ModelRecord& m = document.model;
  Json model = Json::object();
  model["name"] = m.name;
  model["generator"] = m.generator;
  if (m.start_element_id) model["startElementId"] = *m.start_element_id;

  Json vertices = Json::array();
  for (const auto& v : m.vertices) {
    vertices.push_back({{"id", v.id}, {"name", v.name}, {"properties", {{"x", v.x}, {"y", v.y}}}});
  }
  Json edges = Json::array();
  for (const auto& e : m.edges) {
    edges.push_back({{"id", e.id},
                     {"name", e.name},
                     {"sourceVertexId", e.source_vertex_id},
                     {"targetVertexId", e.target_vertex_id}});
  }
  model["vertices"] = std::move(vertices);
  model["edges"] = std::move(edges);

  Json root = Json::object();
  root["models"] = Json::array({std::move(model)});
  return root;
}

class Checker {
 public:
  explicit Checker(ValidationReport& report) : report_(report) {}

  void add(ViolationKind kind, std::string id, std::string message) {
    report_.violations.push_back({kind, std::move(id), std::move(message)});
  }

  // Returns the string member, or records a MissingField violation.
  const std::string* string_field(const Json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) {
      add(ViolationKind::kMissingField, where, where + ": missing string field '" + key + "'");
      return nullptr;
    }
    return it->get_ptr<const std::string*>();
  }

  void check_model(const Json& model, std::size_t index) {
    const std::string where = "models[" + std::to_string(index) + "]";
    if (!model.is_object()) {
      add(ViolationKind::kMissingField, "", where + " is not an object");
      return;
    }
    string_field(model, "name", where);
    string_field(model, "generator", where);

    auto vertices = model.find("vertices");
    auto edges = model.find("edges");
    if (vertices == model.end() || !vertices->is_array()) {
      add(ViolationKind::kMissingField, "", where + ": missing array 'vertices'");
    }
    if (edges == model.end() || !edges->is_array()) {
      add(ViolationKind::kMissingField, "", where + ": missing array 'edges'");
    }

    std::unordered_set<std::string> ids;
    std::unordered_set<std::string> vertex_ids;
    auto claim = [&](const std::string& id) {
      if (!ids.insert(id).second) add(ViolationKind::kDuplicateId, id, "id '" + id + "' is used more than once");
    };

    if (vertices != model.end() && vertices->is_array()) {
      for (std::size_t i = 0; i < vertices->size(); ++i) {
        const Json& v = (*vertices)[i];
        const std::string at = where + ".vertices[" + std::to_string(i) + "]";
        if (!v.is_object()) {
          add(ViolationKind::kMissingField, "", at + " is not an object");
          continue;
        }
        const std::string* id = string_field(v, "id", at);
        const std::string* name = string_field(v, "name", at);
        auto props = v.find("properties");
        if (props == v.end() || !props->is_object() || !props->contains("x") || !props->contains("y") ||
            !(*props)["x"].is_number() || !(*props)["y"].is_number()) {
          add(ViolationKind::kMissingField, id ? *id : "", at + ": missing numeric properties.x/properties.y");
        }
        if (id) {
          claim(*id);
          vertex_ids.insert(*id);
        }
        if (name && !is_vertex_name(*name)) {
          add(ViolationKind::kNamePrefix, id ? *id : "", "vertex name '" + *name + "' must start with v_");
        }
      }
    }

    if (edges != model.end() && edges->is_array()) {
      for (std::size_t i = 0; i < edges->size(); ++i) {
        const Json& e = (*edges)[i];
        const std::string at = where + ".edges[" + std::to_string(i) + "]";
        if (!e.is_object()) {
          add(ViolationKind::kMissingField, "", at + " is not an object");
          continue;
        }
        const std::string* id = string_field(e, "id", at);
        const std::string* name = string_field(e, "name", at);
        const std::string* source = string_field(e, "sourceVertexId", at);
        const std::string* target = string_field(e, "targetVertexId", at);
        const std::string label = id ? *id : at;
        if (id) claim(*id);
        if (name && !is_edge_name(*name)) {
          add(ViolationKind::kNamePrefix, label, "edge name '" + *name + "' must start with e_");
        }
        for (const std::string* end : {source, target}) {
          if (end && !vertex_ids.count(*end)) {
            add(ViolationKind::kDanglingEndpoint, label,
                "edge '" + label + "' references missing vertex '" + *end + "'");
          }
        }
      }
    }

    if (auto start = model.find("startElementId"); start != model.end()) {
      if (!start->is_string()) {
        add(ViolationKind::kMissingField, "", where + ": startElementId must be a string");
      } else if (!vertex_ids.count(start->get<std::string>())) {
        add(ViolationKind::kStartElementNotFound, start->get<std::string>(),
            "startElementId '" + start->get<std::string>() + "' is not a vertex");
      }
    }
  }

 private:
  ValidationReport& report_;
};

}  // namespace

ModelDocument parse_model(const Model& model) {
  ModelDocument doc;
  doc.model.name = model.name();
  doc.model.generator = model.generator();
  doc.model.start_element_id = model.start_element_id();
  doc.model.vertices.reserve(model.vertices().size());
  for (const auto& v : model.vertices()) {
    if (!v.position) {
      throw Error(ErrorCode::kLayoutMissing, "vertex '" + v.id + "' has no coordinates");
    }
    doc.model.vertices.push_back({v.id, v.name, v.position->x, v.position->y});
  }
  doc.model.edges.reserve(model.edges().size());
  for (const auto& e : model.edges()) {
    doc.model.edges.push_back({e.id, e.name, e.source_id, e.target_id});
  }
  return doc;
}

std::string render_document(const ModelDocument& document) {
  return to_json(document).dump(2) + "\n";
}

ModelDocument read_document(std::string_view text) {
  const ValidationReport report = validate_document(text);
  if (!report.accepted()) {
    throw std::invalid_argument("invalid model document: " + report.violations.front().message);
  }
  const Json root = Json::parse(text);
  const Json& m = root["models"][0];
  ModelDocument doc;
  doc.model.name = m["name"].get<std::string>();
  doc.model.generator = m["generator"].get<std::string>();
  if (m.contains("startElementId")) doc.model.start_element_id = m["startElementId"].get<std::string>();
  for (const auto& v : m["vertices"]) {
    doc.model.vertices.push_back({v["id"].get<std::string>(), v["name"].get<std::string>(),
                                  v["properties"]["x"].get<double>(), v["properties"]["y"].get<double>()});
  }
  for (const auto& e : m["edges"]) {
    doc.model.edges.push_back({e["id"].get<std::string>(), e["name"].get<std::string>(),
                               e["sourceVertexId"].get<std::string>(), e["targetVertexId"].get<std::string>()});
  }
  return doc;
}

std::string sanitize_file_stem(std::string_view model_name) {
  std::string stem;
  stem.reserve(model_name.size());
  for (char c : model_name) {
    const bool keep = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                      c == '_' || c == '-';
    stem.push_back(keep ? c : '_');
  }
  if (stem.empty()) stem = "_";
  return stem;
}

void write_document(const ModelDocument& document, const std::filesystem::path& path) {
  const std::string text = render_document(document);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kStorageFailure, "cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw Error(ErrorCode::kStorageFailure, "failed writing '" + path.string() + "'");
}

std::filesystem::path save_mbt_json(const ModelDocument& document, std::string_view model_name,
                                    const std::filesystem::path& out_dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(out_dir, ec)) {
    throw Error(ErrorCode::kStorageFailure, "'" + out_dir.string() + "' is not a directory");
  }
  const std::filesystem::path path = out_dir / (sanitize_file_stem(model_name) + ".json");
  write_document(document, path);
  return path;
}

std::string_view to_string(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::kSyntax:
      return "Syntax";
    case ViolationKind::kMissingField:
      return "MissingField";
    case ViolationKind::kModelCount:
      return "ModelCount";
    case ViolationKind::kDanglingEndpoint:
      return "DanglingEndpoint";
    case ViolationKind::kDuplicateId:
      return "DuplicateId";
    case ViolationKind::kNamePrefix:
      return "NamePrefix";
    case ViolationKind::kStartElementNotFound:
      return "StartElementNotFound";
  }
  return "Unknown";
}

std::size_t ValidationReport::count(ViolationKind kind) const {
  std::size_t n = 0;
  for (const auto& v : violations) n += v.kind == kind ? 1 : 0;
  return n;
}

ValidationReport validate_document(std::string_view text) {
  ValidationReport report;
  Checker check(report);

  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    check.add(ViolationKind::kSyntax, "", e.what());
    return report;
  }

  if (!root.is_object()) {
    check.add(ViolationKind::kMissingField, "", "document root must be an object");
    return report;
  }
  auto models = root.find("models");
  if (models == root.end() || !models->is_array()) {
    check.add(ViolationKind::kMissingField, "", "missing array 'models'");
    return report;
  }
  if (models->size() != 1) {
    check.add(ViolationKind::kModelCount, "",
              "expected exactly one model, found " + std::to_string(models->size()));
  }
  for (std::size_t i = 0; i < models->size(); ++i) check.check_model((*models)[i], i);
  return report;
}

}  // namespace mbtgen
