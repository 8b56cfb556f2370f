#include "mbtgen/layout.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "mbtgen/error.hpp"

namespace mbtgen {
namespace {

double radians(double degrees) { return degrees * std::numbers::pi / 180.0; }

// "n2" < "n10": compare alphabetic prefix, then numeric suffix, then the raw id.
bool id_less(std::string_view a, std::string_view b) {
  auto split = [](std::string_view s) {
    std::size_t cut = s.size();
    while (cut > 0 && std::isdigit(static_cast<unsigned char>(s[cut - 1]))) --cut;
    std::string_view digits = s.substr(cut);
    unsigned long long value = 0;
    bool numeric = !digits.empty() && digits.size() < 19 &&
                   std::from_chars(digits.data(), digits.data() + digits.size(), value).ec == std::errc{};
    return std::tuple{s.substr(0, cut), numeric, value};
  };
  auto [pa, na, va] = split(a);
  auto [pb, nb, vb] = split(b);
  if (pa != pb) return a < b;
  if (na && nb && va != vb) return va < vb;
  return a < b;
}

}  // namespace

void LayoutConfig::validate() const {
  if (!(minimum_separation > 0.0) || !std::isfinite(minimum_separation)) {
    throw Error(ErrorCode::kInvalidConfig, "minimum separation must be positive");
  }
  if (!(rotation_offset >= 0.0 && rotation_offset < 360.0)) {
    throw Error(ErrorCode::kInvalidConfig, "rotation offset must lie in [0, 360)");
  }
}

int compute_degree(Model& model, std::string_view vertex_id) {
  if (!model.find_vertex(vertex_id)) {
    throw Error(ErrorCode::kDanglingEndpoint, "no vertex '" + std::string(vertex_id) + "'");
  }
  int degree = 0;
  for (const auto& e : model.edges()) {
    if (e.source_id == vertex_id) ++degree;
    if (e.target_id == vertex_id) ++degree;
  }
  model.set_degree(vertex_id, degree);
  return degree;
}

double circle_radius(std::size_t n, const LayoutConfig& config) {
  if (n <= 1) return 0.0;
  return config.minimum_separation / (2.0 * std::sin(radians(180.0 / static_cast<double>(n))));
}

Model generate_plane_data(Model model, const LayoutConfig& config) {
  config.validate();
  const std::size_t n = model.vertices().size();
  if (n == 0) return model;

  struct Slot {
    std::string id;
    int degree;
  };
  std::vector<Slot> order;
  order.reserve(n);
  for (const auto& v : model.vertices()) order.push_back({v.id, 0});
  for (auto& slot : order) slot.degree = compute_degree(model, slot.id);

  std::sort(order.begin(), order.end(), [](const Slot& a, const Slot& b) {
    if (a.degree != b.degree) return a.degree < b.degree;
    return id_less(a.id, b.id);
  });

  const double r = circle_radius(n, config);
  const double step = 360.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (n == 1) {
      model.set_position(order[i].id, Point{0.0, 0.0});
      continue;
    }
    const double theta = radians(config.rotation_offset + static_cast<double>(i) * step);
    model.set_position(order[i].id, Point{r * std::cos(theta), r * std::sin(theta)});
  }
  return model;
}

}  // namespace mbtgen
