#include "mbtgen/model.hpp"

#include <cctype>
#include <charconv>
#include <utility>

#include "mbtgen/error.hpp"

namespace mbtgen {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_alnum_ascii(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}

char to_upper_ascii(char c) { return (c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Numeric suffix of ids shaped like "<prefix><digits>", if any.
std::optional<std::uint64_t> serial_of(std::string_view id, char prefix) {
  if (id.size() < 2 || id.front() != prefix) return std::nullopt;
  std::uint64_t value = 0;
  const char* first = id.data() + 1;
  const char* last = id.data() + id.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  return value;
}

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void fnv_mix(std::uint64_t& h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  // length terminator keeps ("ab","c") distinct from ("a","bc")
  for (int i = 0; i < 8; ++i) {
    h ^= static_cast<unsigned char>((bytes.size() >> (8 * i)) & 0xff);
    h *= kFnvPrime;
  }
}

void fnv_mix(std::uint64_t& h, double v) {
  fnv_mix(h, std::string_view(reinterpret_cast<const char*>(&v), sizeof v));
}

}  // namespace

std::string sanitize_vertex_name(std::string_view raw) {
  std::string_view body = raw;
  if (body.substr(0, kVertexPrefix.size()) == kVertexPrefix) body.remove_prefix(kVertexPrefix.size());

  std::string out(kVertexPrefix);
  std::size_t i = 0;
  while (i < body.size()) {
    while (i < body.size() && is_space(body[i])) ++i;
    bool first = true;
    for (; i < body.size() && !is_space(body[i]); ++i) {
      if (!is_alnum_ascii(body[i])) continue;
      out.push_back(first ? to_upper_ascii(body[i]) : body[i]);
      first = false;
    }
  }
  if (out.size() == kVertexPrefix.size()) {
    throw Error(ErrorCode::kUnusableName, "vertex label '" + std::string(raw) + "' has no usable characters");
  }
  return out;
}

std::string sanitize_edge_name(std::string_view raw) {
  std::string_view body = raw;
  if (body.substr(0, kEdgePrefix.size()) == kEdgePrefix) body.remove_prefix(kEdgePrefix.size());

  std::string out(kEdgePrefix);
  for (char c : body) {
    const char u = to_upper_ascii(c);
    if ((u >= 'A' && u <= 'Z') || (u >= '0' && u <= '9')) out.push_back(u);
  }
  if (out.size() == kEdgePrefix.size()) {
    throw Error(ErrorCode::kUnusableName, "edge label '" + std::string(raw) + "' has no usable characters");
  }
  return out;
}

bool is_vertex_name(std::string_view name) noexcept {
  return name.size() > kVertexPrefix.size() && name.substr(0, kVertexPrefix.size()) == kVertexPrefix;
}

bool is_edge_name(std::string_view name) noexcept {
  return name.size() > kEdgePrefix.size() && name.substr(0, kEdgePrefix.size()) == kEdgePrefix;
}

// ---------------------------------------------------------------------------
// Model

Model::Model(std::string name, std::string generator)
    : name_(std::move(name)), generator_(std::move(generator)) {}

void Model::set_start_element_id(std::optional<std::string> id) {
  if (id && !find_vertex(*id)) {
    throw Error(ErrorCode::kDanglingEndpoint, "start element '" + *id + "' is not a vertex");
  }
  start_element_id_ = std::move(id);
}

const Vertex* Model::find_vertex(std::string_view id) const {
  auto it = vertex_by_id_.find(std::string(id));
  return it == vertex_by_id_.end() ? nullptr : &vertices_[it->second];
}

Vertex* Model::find_vertex(std::string_view id) {
  auto it = vertex_by_id_.find(std::string(id));
  return it == vertex_by_id_.end() ? nullptr : &vertices_[it->second];
}

const Vertex* Model::find_vertex_by_name(std::string_view name) const {
  auto it = vertex_by_name_.find(std::string(name));
  return it == vertex_by_name_.end() ? nullptr : &vertices_[it->second];
}

const Edge* Model::find_edge(std::string_view name, std::string_view source_id,
                             std::string_view target_id) const {
  auto it = edge_by_key_.find({std::string(name), std::string(source_id), std::string(target_id)});
  return it == edge_by_key_.end() ? nullptr : &edges_[it->second];
}

void Model::claim_id(const std::string& id) {
  if (id.empty()) throw Error(ErrorCode::kDuplicateId, "element id must not be empty");
  if (vertex_by_id_.count(id) || edge_by_id_.count(id)) {
    throw Error(ErrorCode::kDuplicateId, "id '" + id + "' already used in model '" + name_ + "'");
  }
  if (auto n = serial_of(id, 'n'); n && *n >= next_vertex_serial_) next_vertex_serial_ = *n + 1;
  if (auto e = serial_of(id, 'e'); e && *e >= next_edge_serial_) next_edge_serial_ = *e + 1;
}

const Vertex& Model::add_vertex(Vertex vertex) {
  if (!is_vertex_name(vertex.name)) {
    throw Error(ErrorCode::kUnusableName, "vertex name '" + vertex.name + "' lacks the v_ prefix");
  }
  if (vertex_by_name_.count(vertex.name)) {
    throw Error(ErrorCode::kDuplicateId, "vertex name '" + vertex.name + "' already present");
  }
  claim_id(vertex.id);
  vertex.degree = 0;
  const std::size_t index = vertices_.size();
  vertex_by_id_.emplace(vertex.id, index);
  vertex_by_name_.emplace(vertex.name, index);
  vertices_.push_back(std::move(vertex));
  return vertices_.back();
}

const Edge& Model::add_edge(Edge edge) {
  if (!is_edge_name(edge.name)) {
    throw Error(ErrorCode::kUnusableName, "edge name '" + edge.name + "' lacks the e_ prefix");
  }
  Vertex* source = find_vertex(edge.source_id);
  Vertex* target = find_vertex(edge.target_id);
  if (!source || !target) {
    throw Error(ErrorCode::kDanglingEndpoint, "edge '" + edge.id + "' references unknown vertex");
  }
  EdgeKey key{edge.name, edge.source_id, edge.target_id};
  if (edge_by_key_.count(key)) {
    throw Error(ErrorCode::kDuplicateId, "edge '" + edge.name + "' already joins these vertices");
  }
  claim_id(edge.id);
  source->degree += 1;
  target->degree += 1;
  const std::size_t index = edges_.size();
  edge_by_id_.emplace(edge.id, index);
  edge_by_key_.emplace(std::move(key), index);
  edges_.push_back(std::move(edge));
  return edges_.back();
}

const Vertex& Model::get_or_create_vertex(std::string_view name) {
  if (const Vertex* existing = find_vertex_by_name(name)) return *existing;
  std::string id = "n" + std::to_string(next_vertex_serial_);
  while (vertex_by_id_.count(id) || edge_by_id_.count(id)) id = "n" + std::to_string(++next_vertex_serial_);
  return add_vertex(Vertex{std::move(id), std::string(name), std::nullopt, 0});
}

const Edge& Model::get_or_create_edge(std::string_view name, std::string_view source_id,
                                      std::string_view target_id) {
  if (!find_vertex(source_id) || !find_vertex(target_id)) {
    throw Error(ErrorCode::kDanglingEndpoint,
                "edge '" + std::string(name) + "' references unknown vertex");
  }
  if (const Edge* existing = find_edge(name, source_id, target_id)) return *existing;
  std::string id = "e" + std::to_string(next_edge_serial_);
  while (vertex_by_id_.count(id) || edge_by_id_.count(id)) id = "e" + std::to_string(++next_edge_serial_);
  return add_edge(Edge{std::move(id), std::string(name), std::string(source_id), std::string(target_id)});
}

void Model::set_position(std::string_view vertex_id, Point p) {
  Vertex* v = find_vertex(vertex_id);
  if (!v) throw Error(ErrorCode::kDanglingEndpoint, "no vertex '" + std::string(vertex_id) + "'");
  v->position = p;
}

void Model::set_degree(std::string_view vertex_id, int degree) {
  Vertex* v = find_vertex(vertex_id);
  if (!v) throw Error(ErrorCode::kDanglingEndpoint, "no vertex '" + std::string(vertex_id) + "'");
  v->degree = degree;
}

bool Model::laid_out() const {
  for (const auto& v : vertices_) {
    if (!v.position) return false;
  }
  return true;
}

std::uint64_t structural_hash(const Model& model) {
  std::uint64_t h = kFnvOffset;
  fnv_mix(h, model.name());
  fnv_mix(h, model.generator());
  fnv_mix(h, model.start_element_id().value_or(std::string("\x01<none>")));
  for (const auto& v : model.vertices()) {
    fnv_mix(h, v.id);
    fnv_mix(h, v.name);
    if (v.position) {
      fnv_mix(h, v.position->x);
      fnv_mix(h, v.position->y);
    } else {
      fnv_mix(h, std::string_view("\x01<unset>"));
    }
  }
  fnv_mix(h, std::string_view("\x02"));
  for (const auto& e : model.edges()) {
    fnv_mix(h, e.id);
    fnv_mix(h, e.name);
    fnv_mix(h, e.source_id);
    fnv_mix(h, e.target_id);
  }
  return h;
}

// ---------------------------------------------------------------------------
// Session

Session::Session(std::string_view title) {
  const std::string_view trimmed = trim(title);
  if (trimmed.empty()) throw Error(ErrorCode::kInvalidTitle, "session title is empty");
  model_ = Model(std::string(trimmed));
}

void Session::require_recording() const {
  if (state_ != SessionState::kRecording) {
    throw Error(ErrorCode::kSessionNotActive, "session '" + model_.name() + "' is finalized");
  }
}

void Session::resolve_pending_as_self_loop() {
  if (!pending_edge_) return;
  if (current_vertex_id_) {
    model_.get_or_create_edge(*pending_edge_, *current_vertex_id_, *current_vertex_id_);
  } else {
    warnings_.push_back("discarded edge '" + *pending_edge_ + "': no vertex recorded yet");
  }
  pending_edge_.reset();
}

std::string Session::record_vertex(std::string_view raw_label) {
  require_recording();
  const std::string name = sanitize_vertex_name(raw_label);
  const std::string id = model_.get_or_create_vertex(name).id;

  if (!model_.start_element_id()) model_.set_start_element_id(id);

  if (pending_edge_) {
    const std::string& source = current_vertex_id_ ? *current_vertex_id_ : id;
    model_.get_or_create_edge(*pending_edge_, source, id);
    pending_edge_.reset();
  } else if (current_vertex_id_ && *current_vertex_id_ != id) {
    std::string loaded(kLoadedEdgePrefix);
    for (char c : std::string_view(name).substr(kVertexPrefix.size())) loaded.push_back(to_upper_ascii(c));
    model_.get_or_create_edge(loaded, *current_vertex_id_, id);
  }
  current_vertex_id_ = id;
  return id;
}

void Session::record_edge(std::string_view raw_label) {
  require_recording();
  std::string name = sanitize_edge_name(raw_label);
  resolve_pending_as_self_loop();
  pending_edge_ = std::move(name);
}

Model Session::finalize() {
  require_recording();
  resolve_pending_as_self_loop();
  state_ = SessionState::kFinalized;
  return model_;
}

}  // namespace mbtgen
