#pragma once

#include "everse/params.hpp"
#include "everse/vec3.hpp"

#include <string>

namespace everse {

struct MarginWitness {
  double margin = 0.0;  // (n-1) p (1 - q|t|) + q t^2
  double phi = 0.0;     // point where the planar normal norm attains it
  double h = 0.0;
  bool pass = false;
};

struct SmoothnessReport {
  double margin = 0.0;
  double min_normal_norm = 0.0;
  double min_jacobian = 0.0;
  bool pass = false;
  // pole diagnostics (filled by pole_regularity_check)
  double slope_jump = 0.0;
  double probe_order3 = 0.0;
  double probe_order4 = 0.0;
  std::string note;
};

// Analytic normal of the open family, r_h x r_phi.
Vec3 normal_vector(const SurfaceParams& sp, double h, double phi);

// Lower bound for |normal| on the horizontal locus n_z = 0, with the point
// attaining it.  Positive margin means the family member is an immersion.
MarginWitness smoothness_margin(const SurfaceParams& sp);

// Jacobian determinant of damp_map at r.
double jacobian_damp(const Vec3& r, const StageParams& st);

// Jacobian determinant of inversion_map at the damped point rp,
// exp(3 gamma z') / (alpha + beta |w'|^2)^2.
double jacobian_inversion(const Vec3& rp, const StageParams& st);

// Jacobian determinant of plane_inversion (the fused xi = 0, alpha = 0 step)
// at the raw point r.
double jacobian_plane_inversion(const Vec3& r, const StageParams& st);

// Total ambient volume distortion of the stage maps at the raw point r.
double composite_jacobian(const Vec3& r, const StageParams& st);

// For unfold-leg stages (p = 0, xi = 0, alpha = 0): the squared planar radius
// of the image is strictly increasing in C = cos^2(theta).  Checks the closed
// form of the derivative and the sampled profile; samples is the grid size.
bool radial_monotonicity_check(const StageParams& st, int samples);

// Looks for a C^n-order break of the image along lines through the two pole
// points.  pass is false when a break is resolved; the probe fields carry the
// largest order-3 and order-4 line defects seen.
SmoothnessReport pole_regularity_check(const StageParams& st);

// Margin, minimum normal norm and minimum map Jacobian over an
// (h, phi) grid on |h| <= h_span.
SmoothnessReport stage_report(const StageParams& st, int h_samples = 64,
                              int phi_samples = 128, double h_span = 3.0);

// Normal of the closed image surface from second-order tangent differences.
Vec3 pipeline_normal(const StageParams& st, double theta, double phi);

}  // namespace everse
