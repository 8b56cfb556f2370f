#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mbtgen/model.hpp"

namespace mbtgen {

struct VertexRecord {
  std::string id;
  std::string name;
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const VertexRecord&, const VertexRecord&) = default;
};

struct EdgeRecord {
  std::string id;
  std::string name;
  std::string source_vertex_id;
  std::string target_vertex_id;

  friend bool operator==(const EdgeRecord&, const EdgeRecord&) = default;
};

struct ModelRecord {
  std::string name;
  std::string generator;
  std::optional<std::string> start_element_id;
  std::vector<VertexRecord> vertices;
  std::vector<EdgeRecord> edges;

  friend bool operator==(const ModelRecord&, const ModelRecord&) = default;
};

/// In-memory form of a GraphWalker model file. Always holds exactly one model.
struct ModelDocument {
  ModelRecord model;

  friend bool operator==(const ModelDocument&, const ModelDocument&) = default;
};

/// Maps a laid-out model onto the file schema, keeping creation order.
/// Throws Error(kLayoutMissing) if any vertex lacks coordinates.
ModelDocument parse_model(const Model& model);

/// Pretty-printed JSON text of the document. Doubles are written with full
/// round-trip precision; output is deterministic.
std::string render_document(const ModelDocument& document);

/// Reads a document previously produced by render_document. Throws
/// std::invalid_argument on anything validate_document would reject.
ModelDocument read_document(std::string_view text);

/// Characters outside [A-Za-z0-9_-] become '_'.
std::string sanitize_file_stem(std::string_view model_name);

/// Writes "<out_dir>/<sanitized name>.json", replacing any existing file.
/// Throws Error(kStorageFailure) when the file cannot be written.
std::filesystem::path save_mbt_json(const ModelDocument& document, std::string_view model_name,
                                    const std::filesystem::path& out_dir);

/// Writes the rendered document to an exact path.
void write_document(const ModelDocument& document, const std::filesystem::path& path);

enum class ViolationKind {
  kSyntax,
  kMissingField,
  kModelCount,
  kDanglingEndpoint,
  kDuplicateId,
  kNamePrefix,
  kStartElementNotFound,
};

std::string_view to_string(ViolationKind kind) noexcept;

struct Violation {
  ViolationKind kind;
  std::string element_id;  // offending element, empty for document-level issues
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool accepted() const { return violations.empty(); }
  std::size_t count(ViolationKind kind) const;
};

ValidationReport validate_document(std::string_view text);

}  // namespace mbtgen
