#pragma once

#include <cstddef>
#include <string_view>

#include "mbtgen/model.hpp"

namespace mbtgen {

struct LayoutConfig {
  double minimum_separation = 400.0;  // chord between neighbouring vertices
  double rotation_offset = 90.0;      // degrees, angle of the first placed vertex

  void validate() const;
};

/// Counts edge endpoints on `vertex_id` (self-loops count twice) and stores
/// the result in the vertex's degree cache.
int compute_degree(Model& model, std::string_view vertex_id);

/// Radius at which `n` equidistant points have neighbour chord equal to the
/// minimum separation. Zero for n <= 1.
double circle_radius(std::size_t n, const LayoutConfig& config = {});

/// Places every vertex on a circle centred on the origin, ordered by
/// ascending degree (ties by id), counterclockwise from the rotation offset.
/// Graph structure is left untouched.
Model generate_plane_data(Model model, const LayoutConfig& config = {});

}  // namespace mbtgen
