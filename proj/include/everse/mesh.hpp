#pragma once

#include "everse/params.hpp"
#include "everse/smoothness.hpp"
#include "everse/vec3.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace everse {

struct MeshFrame {
  std::vector<Vec3> vertices;
  std::vector<Vec3> normals;  // unit, per vertex
  std::vector<std::array<std::uint32_t, 3>> triangles;
  int rows = 0, cols = 0;
  bool closed = false;

  std::array<Vec3, 2> bounds() const;
};

// Raised instead of meshing a stage that fails the prechecks; carries the
// numbers behind the refusal.
struct MeshRefusal : std::runtime_error {
  SmoothnessReport report;
  MeshRefusal(const std::string& what, SmoothnessReport rep)
      : std::runtime_error(what), report(std::move(rep)) {}
};

// Closed tessellation over the (theta, phi) chart: rows latitude intervals,
// cols welded longitudes, both poles collapsed to single vertices, so the
// vertex count is (rows - 1) * cols + 2.  Refuses invalid or nonpositive
// margin stages; rows must be at least 3 and cols at least 3.
MeshFrame tessellate(const StageParams& stage, int rows = 128, int cols = 402);

// Open tessellation of one family member over h in [h_min, h_max], phi
// welded around; rows height samples (at least 2), cols longitudes.
MeshFrame tessellate_open(const SurfaceParams& shape, int rows, int cols,
                          double h_min = -3.0, double h_max = 3.0);

// Divergence-theorem volume; sign tracks the global orientation.
double signed_volume(const MeshFrame& mesh);

double max_edge_length(const MeshFrame& mesh);

}  // namespace everse
