#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace mbtgen {

// Path-generation directive: random walk until every edge has been covered.
inline constexpr std::string_view kDefaultGenerator = "random(edge_coverage(100))";

inline constexpr std::string_view kVertexPrefix = "v_";
inline constexpr std::string_view kEdgePrefix = "e_";
inline constexpr std::string_view kLoadedEdgePrefix = "e_LOADED_";

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct Vertex {
  std::string id;
  std::string name;
  std::optional<Point> position;  // unset until layout runs
  int degree = 0;                 // incident edge endpoints, a self-loop counts twice

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

struct Edge {
  std::string id;
  std::string name;
  std::string source_id;
  std::string target_id;

  bool is_self_loop() const { return source_id == target_id; }

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Turns a page label into a vertex name: "Welcome Page" -> "v_WelcomePage".
/// Words are capitalized and joined, anything outside [A-Za-z0-9] is dropped.
/// An existing "v_" prefix is kept rather than doubled.
/// Throws Error(kUnusableName) when nothing usable remains.
std::string sanitize_vertex_name(std::string_view raw);

/// Turns an action label into an edge name: "Find Owners" -> "e_FINDOWNERS".
std::string sanitize_edge_name(std::string_view raw);

bool is_vertex_name(std::string_view name) noexcept;
bool is_edge_name(std::string_view name) noexcept;

/// Named graph of UI states and user actions.
///
/// Vertices are unique by name and edges by (name, source, target); both
/// keep creation order. Ids assigned by the get_or_create_* factories are
/// sequential ("n1", "n2", ... and "e1", "e2", ...) and continue after the
/// largest numeric id already present.
class Model {
 public:
  Model() = default;
  explicit Model(std::string name, std::string generator = std::string(kDefaultGenerator));

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  const std::string& generator() const { return generator_; }
  void set_generator(std::string generator) { generator_ = std::move(generator); }

  const std::optional<std::string>& start_element_id() const { return start_element_id_; }
  void set_start_element_id(std::optional<std::string> id);

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }

  const Vertex* find_vertex(std::string_view id) const;
  Vertex* find_vertex(std::string_view id);
  const Vertex* find_vertex_by_name(std::string_view name) const;
  const Edge* find_edge(std::string_view name, std::string_view source_id,
                        std::string_view target_id) const;

  /// Inserts a vertex with a caller-chosen id. Throws on duplicate id or name,
  /// or on a name without the "v_" prefix.
  const Vertex& add_vertex(Vertex vertex);
  /// Inserts an edge with a caller-chosen id; endpoint degrees are updated.
  const Edge& add_edge(Edge edge);

  const Vertex& get_or_create_vertex(std::string_view name);
  const Edge& get_or_create_edge(std::string_view name, std::string_view source_id,
                                 std::string_view target_id);

  void set_position(std::string_view vertex_id, Point p);
  void set_degree(std::string_view vertex_id, int degree);

  bool laid_out() const;

  friend bool operator==(const Model& a, const Model& b) {
    return a.name_ == b.name_ && a.generator_ == b.generator_ &&
           a.start_element_id_ == b.start_element_id_ && a.vertices_ == b.vertices_ &&
           a.edges_ == b.edges_;
  }

 private:
  using EdgeKey = std::tuple<std::string, std::string, std::string>;

  void claim_id(const std::string& id);

  std::string name_;
  std::string generator_ = std::string(kDefaultGenerator);
  std::optional<std::string> start_element_id_;
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;

  std::unordered_map<std::string, std::size_t> vertex_by_id_;
  std::unordered_map<std::string, std::size_t> vertex_by_name_;
  std::unordered_map<std::string, std::size_t> edge_by_id_;
  std::map<EdgeKey, std::size_t> edge_by_key_;
  std::uint64_t next_vertex_serial_ = 1;
  std::uint64_t next_edge_serial_ = 1;
};

/// Order-sensitive FNV-1a digest over names, ids, endpoints and coordinates.
std::uint64_t structural_hash(const Model& model);

enum class SessionState { kRecording, kFinalized };

/// Live recording context. Turns an ordered stream of vertex and edge events
/// into a connected model with a cursor on the current vertex and at most
/// one buffered edge label.
///
/// Stitching when a vertex V arrives:
///   - first vertex, nothing pending: V becomes the start element;
///   - edge pending: edge(pending, current or V, V);
///   - nothing pending, V differs from current: synthesized "e_LOADED_<V>";
///   - nothing pending, V equals current: no edge.
/// Not thread-safe; callers serialize access.
class Session {
 public:
  explicit Session(std::string_view title);

  SessionState state() const { return state_; }
  bool recording() const { return state_ == SessionState::kRecording; }
  const Model& model() const { return model_; }
  const std::optional<std::string>& current_vertex_id() const { return current_vertex_id_; }
  const std::optional<std::string>& pending_edge_label() const { return pending_edge_; }

  /// Messages about events that could not be attached to the model.
  const std::vector<std::string>& warnings() const { return warnings_; }

  std::string record_vertex(std::string_view raw_label);
  void record_edge(std::string_view raw_label);

  /// Resolves any pending edge, freezes the session and hands the model out.
  Model finalize();

 private:
  void require_recording() const;
  void resolve_pending_as_self_loop();

  Model model_;
  std::optional<std::string> current_vertex_id_;
  std::optional<std::string> pending_edge_;
  SessionState state_ = SessionState::kRecording;
  std::vector<std::string> warnings_;
};

}  // namespace mbtgen
