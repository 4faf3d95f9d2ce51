#pragma once

#include "everse/mesh.hpp"
#include "everse/params.hpp"
#include "everse/vec3.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace everse {

enum class BranchKind { axis_line, z_axis, quadrifolium, trifolium, general };

std::string to_string(BranchKind k);

// One point of a double-curve branch.  The two parameter preimages of the
// point are (h+ + h-, phi+ + phi-) and (h+ - h-, phi+ - phi-).
struct BranchSample {
  double phi_plus = 0.0;
  double phi_minus = 0.0;
  double h_plus = 0.0;
  double h_minus = 0.0;
  Vec3 point;

  std::array<ParamPoint, 2> preimages() const {
    return {ParamPoint::at_h(h_plus + h_minus, phi_plus + phi_minus),
            ParamPoint::at_h(h_plus - h_minus, phi_plus - phi_minus)};
  }
};

struct IntersectionBranch {
  BranchKind kind = BranchKind::general;
  std::string label;
  std::vector<BranchSample> samples;
};

// Closed-form double curves of one family member.  Implemented for n = 2
// (any t, q >= 0) and for the n = 3 halfway member; other members return
// an empty list.  h_span clips the unbounded straight-line branches.
std::vector<IntersectionBranch> self_intersection_branches(
    const SurfaceParams& sp, int samples_per_branch = 256, double h_span = 3.0);

// Positivity certificate for the derivative of the double-curve radius
// profile, plus the tangent-slope margin of the q = 0 section.
struct MonotonicityWitness {
  double min_derivative = 0.0;  // over S = -sin(2 phi+) in [max(0,qt), 1]
  double arg_s = 0.0;
  double g_margin = 0.0;  // min of (tk-1+k^2)^2 - 2tk(tk-2) over the band
  bool pass = false;
};

MonotonicityWitness monotonicity_witness(double t, double q, int samples = 2001);

// Triangle-triangle crossing segments of a mesh against itself, excluding
// pairs that share a vertex, in a canonical sorted order.
struct IntersectionCloud {
  std::vector<std::array<Vec3, 2>> segments;
  std::size_t pairs_tested = 0;
  double total_length = 0.0;
};

IntersectionCloud mesh_self_intersections(const MeshFrame& mesh);

// Number of parameter points of one family member mapping to pt, found by a
// coarse (h, phi) scan refined with Gauss-Newton and merged at 1e-6.
int preimage_count(const SurfaceParams& sp, const Vec3& pt, double h_span = 3.0,
                   int grid = 160, double tol = 1e-8);

// Largest distance from any probe point to the union of the branch samples;
// infinity when the branches carry no samples.
double max_distance_to_branches(const std::vector<Vec3>& probes,
                                const std::vector<IntersectionBranch>& branches);

}  // namespace everse
