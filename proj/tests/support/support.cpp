#include "support.hpp"

#include <atomic>
#include <cctype>
#include <chrono>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "httplib.h"

#ifndef MBTGEN_FIXTURE_DIR
#error "MBTGEN_FIXTURE_DIR must be defined"
#endif

namespace mbtgen::testing {

Model shopping_cart_model() {
  Model model("ShoppingCart");
  model.add_vertex({"n2", "v_Amazon", std::nullopt, 0});
  model.add_vertex({"n3", "v_SearchResult", std::nullopt, 0});
  model.add_vertex({"n4", "v_BookInformation", std::nullopt, 0});
  model.add_vertex({"n5", "v_AddedToCart", std::nullopt, 0});
  model.add_vertex({"n6", "v_ShoppingCart", std::nullopt, 0});

  model.add_edge({"e10", "e_SEARCHBOOK", "n4", "n3"});
  model.add_edge({"02a189b6-bd93-4fa8-a32a-c5d0aafe4a0a", "e_ENTERBASEURL", "n2", "n2"});
  model.add_edge({"e2", "e_SEARCHBOOK", "n2", "n3"});
  model.add_edge({"e3", "e_CLICKBOOK", "n3", "n4"});
  model.add_edge({"e4", "e_ADDBOOKTOCART", "n4", "n5"});
  model.add_edge({"e5", "e_SHOPPINGCART", "n5", "n6"});
  model.add_edge({"e6", "e_SHOPPINGCART", "n3", "n6"});
  model.add_edge({"e7", "e_SHOPPINGCART", "n4", "n6"});
  model.add_edge({"e8", "e_SEARCHBOOK", "n6", "n3"});
  model.add_edge({"e9", "e_SEARCHBOOK", "n5", "n3"});
  model.set_start_element_id("n2");
  return model;
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
  path_ = std::filesystem::temp_directory_path() /
          (tag + "-" + std::to_string(stamp) + "-" + std::to_string(counter++));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

std::filesystem::path fixture_path(const std::string& relative) {
  return std::filesystem::path(MBTGEN_FIXTURE_DIR) / relative;
}

namespace {

const std::vector<std::string> kPageLabels = {
    "Welcome Page", "Find Owners", "Owners", "Owner Information", "Veterinarians", "Error", "Add Owner",
};
const std::vector<std::string> kActionLabels = {
    "Find Owners", "Add Owner", "Edit Owner", "Home", "Veterinarians", "Submit", "Back",
};
// Labels the service must reject: nothing survives sanitization.
const std::vector<std::string> kUnusableLabels = {"!!", "\xe2\x86\x92", "--"};

template <typename T>
const T& pick(std::mt19937& rng, const std::vector<T>& pool) {
  return pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
}

bool chance(std::mt19937& rng, double p) { return std::bernoulli_distribution(p)(rng); }

// Deliberately written differently from the library: per-character
// classification over the whole string, then prefix handling.
std::string ref_vertex_name(const std::string& raw) {
  std::string body = raw.rfind("v_", 0) == 0 ? raw.substr(2) : raw;
  std::string out;
  bool at_word_start = true;
  for (unsigned char c : body) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      at_word_start = true;
      continue;
    }
    if (c < 0x80 && std::isalnum(c)) {
      out += at_word_start ? static_cast<char>(std::toupper(c)) : static_cast<char>(c);
      at_word_start = false;
    }
  }
  return out.empty() ? std::string() : "v_" + out;
}

std::string ref_edge_name(const std::string& raw) {
  std::string body = raw.rfind("e_", 0) == 0 ? raw.substr(2) : raw;
  std::string out;
  for (unsigned char c : body) {
    if (c < 0x80 && std::isalnum(c)) out += static_cast<char>(std::toupper(c));
  }
  return out.empty() ? std::string() : "e_" + out;
}

}  // namespace

std::vector<StreamEvent> random_stream(std::mt19937& rng, std::size_t max_events) {
  const std::size_t n = std::uniform_int_distribution<std::size_t>(0, max_events)(rng);
  std::vector<StreamEvent> events;
  events.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool vertex = chance(rng, 0.5);
    events.push_back({vertex, pick(rng, vertex ? kPageLabels : kActionLabels)});
  }
  return events;
}

std::vector<EventLogRecord> random_event_log(std::mt19937& rng, std::size_t max_events, Millis timeout) {
  std::vector<EventLogRecord> log;
  long long t = std::uniform_int_distribution<long long>(0, 500)(rng);
  log.push_back({Millis{t}, EventType::kStart, std::string("Session ") + std::to_string(rng() % 1000)});

  const std::size_t n = std::uniform_int_distribution<std::size_t>(0, max_events)(rng);
  for (std::size_t i = 0; i < n; ++i) {
    if (chance(rng, 0.03)) {
      t += timeout.count() + std::uniform_int_distribution<long long>(-1000, 3000)(rng);
    } else {
      t += std::uniform_int_distribution<long long>(0, 2500)(rng);
    }
    if (chance(rng, 0.3)) log.push_back({Millis{t}, EventType::kKeepAlive, std::nullopt});
    const bool vertex = chance(rng, 0.5);
    std::string label = chance(rng, 0.03) ? pick(rng, kUnusableLabels)
                                          : pick(rng, vertex ? kPageLabels : kActionLabels);
    log.push_back({Millis{t}, vertex ? EventType::kVertex : EventType::kEdge, std::move(label)});
  }
  if (chance(rng, 0.5)) {
    t += std::uniform_int_distribution<long long>(0, 2000)(rng);
    log.push_back({Millis{t}, EventType::kStop, std::nullopt});
  }
  return log;
}

ReferenceGraph reference_replay(const std::vector<StreamEvent>& events) {
  ReferenceGraph g;
  std::optional<std::string> current;
  std::optional<std::string> pending;

  auto add_vertex = [&](const std::string& name) {
    for (const auto& v : g.vertex_names) {
      if (v == name) return;
    }
    g.vertex_names.push_back(name);
  };
  auto add_edge = [&](const std::string& name, const std::string& src, const std::string& tgt) {
    auto key = std::make_tuple(name, src, tgt);
    for (const auto& e : g.edges) {
      if (e == key) return;
    }
    g.edges.push_back(key);
  };

  for (const auto& ev : events) {
    if (ev.is_vertex) {
      const std::string v = ref_vertex_name(ev.label);
      if (v.empty()) continue;
      add_vertex(v);
      if (!g.start_name) g.start_name = v;
      if (pending) {
        add_edge(*pending, current ? *current : v, v);
        pending.reset();
      } else if (current && *current != v) {
        std::string loaded = "e_LOADED_";
        for (char c : v.substr(2)) loaded += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        add_edge(loaded, *current, v);
      }
      current = v;
    } else {
      const std::string e = ref_edge_name(ev.label);
      if (e.empty()) continue;
      if (pending && current) add_edge(*pending, *current, *current);
      pending = e;
    }
  }
  if (pending && current) add_edge(*pending, *current, *current);
  return g;
}

ReferenceGraph project(const Model& model) {
  ReferenceGraph g;
  for (const auto& v : model.vertices()) g.vertex_names.push_back(v.name);
  for (const auto& e : model.edges()) {
    g.edges.emplace_back(e.name, model.find_vertex(e.source_id)->name, model.find_vertex(e.target_id)->name);
  }
  if (model.start_element_id()) g.start_name = model.find_vertex(*model.start_element_id())->name;
  return g;
}

void replay_over_http(const std::vector<EventLogRecord>& records, int port, ManualScheduler& clock,
                      Millis timeout) {
  httplib::Client client("127.0.0.1", port);
  client.set_keep_alive(true);
  for (const auto& rec : records) {
    clock.advance_to(rec.t);
    httplib::Result res;
    switch (rec.type) {
      case EventType::kStart:
        res = client.Post("/startrec", httplib::Params{{"title", *rec.name}});
        break;
      case EventType::kVertex:
        res = client.Post("/vertex", httplib::Params{{"name", *rec.name}});
        break;
      case EventType::kEdge:
        res = client.Post("/edge", httplib::Params{{"name", *rec.name}});
        break;
      case EventType::kKeepAlive:
        res = client.Post("/keepalive");
        break;
      case EventType::kStop:
        res = client.Post("/stoprec");
        break;
    }
    if (!res) throw std::runtime_error("HTTP request failed: " + httplib::to_string(res.error()));
  }
  clock.advance(timeout);
}

}  // namespace mbtgen::testing
