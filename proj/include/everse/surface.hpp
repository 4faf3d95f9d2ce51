#pragma once

#include "everse/params.hpp"
#include "everse/vec3.hpp"

namespace everse {

// Open ruled surface at t=0 (the halfway shape).
Vec3 halfway_point(int n, double h, double phi);

// Open ruled surface of the full family.
//   x = t cos(phi) + p sin((n-1)phi) - h sin(phi)
//   y = t sin(phi) + p cos((n-1)phi) + h cos(phi)
//   z = h sin(n phi) - (t/n) cos(n phi) - q t h
Vec3 family_point(const SurfaceParams& sp, double h, double phi);

// Height profile h = omega sin(theta) / cos(theta)^n that carries the closed
// chart onto the open one.  Throws std::domain_error at |theta| >= pi/2.
double theta_to_h(double theta, double omega, int n);

// Monotone inverse of theta_to_h.
double h_to_theta(double h, double omega, int n);

// Damping step: (w, z) -> (w s^-kappa, z / s) with s = xi + eta |w|^2.
Vec3 damp_map(const Vec3& r, const StageParams& st);

// Exponential inversion step (alpha > 0), acting on a damped point.
Vec3 inversion_map(const Vec3& rp, const StageParams& st);

// Fused damping + inversion in the alpha = 0, xi = 0 limit, acting on a raw
// family point:
//   w -> eta^kappa w / (beta |w|^(2(1-kappa))),  z -> -(z/eta)/|w|^2.
Vec3 plane_inversion(const Vec3& r, const StageParams& st);

// Closed-chart evaluator of the damped and inverted surface, interpolated
// toward the round sphere by st.lam.  Single expression in C = cos^2(theta);
// the poles theta = +-pi/2 are ordinary points of it.
Vec3 closed_point(const StageParams& st, double theta, double phi);

// lam-weighted map between the inverted surface and the round sphere.
Vec3 unfold_sphere_point(double theta, double phi, const StageParams& st);

// Full composite at a domain point in either chart.
Vec3 pipeline_point(const ParamPoint& pt, const StageParams& st);

}  // namespace everse
