#include "everse/smoothness.hpp"

#include "everse/surface.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace everse {

namespace {
constexpr double kPi = 3.141592653589793;
constexpr double kHalfPi = 1.5707963267948966;
using cplx = std::complex<double>;
}  // namespace

Vec3 normal_vector(const SurfaceParams& sp, double h, double phi) {
  const double n = sp.n;
  const cplx u = std::polar(1.0, phi);
  const cplx i(0.0, 1.0);
  const cplx w_h = i * u;
  const double z_h = std::sin(n * phi) - sp.q * sp.t;
  const cplx w_phi = i * sp.t * u - h * u + sp.p * (n - 1) * std::pow(std::conj(u), n - 1);
  const double z_phi = n * h * std::cos(n * phi) + sp.t * std::sin(n * phi);
  const cplx n_xy = i * z_h * w_phi - i * z_phi * w_h;
  const double n_z = std::imag(std::conj(w_h) * w_phi);
  return {n_xy.real(), n_xy.imag(), n_z};
}

MarginWitness smoothness_margin(const SurfaceParams& sp) {
  MarginWitness w;
  const double aqt = std::fabs(sp.q * sp.t);
  w.margin = (sp.n - 1) * sp.p * (1.0 - aqt) + sp.q * sp.t * sp.t;
  // the bound is attained on n_z = 0 at sin(n phi) = sgn(q t), h = 0
  double sgn = 1.0;
  if (sp.q * sp.t != 0.0) sgn = sp.q * sp.t > 0 ? 1.0 : -1.0;
  else if (sp.t != 0.0) sgn = sp.t > 0 ? 1.0 : -1.0;
  w.phi = sgn * kHalfPi / sp.n;
  w.h = 0.0;
  w.pass = w.margin > 0.0;
  return w;
}

double jacobian_damp(const Vec3& r, const StageParams& st) {
  const double k = st.kappa();
  const double w2 = r.x * r.x + r.y * r.y;
  const double s = st.xi + st.eta * w2;
  if (s <= 0.0) throw std::domain_error("jacobian_damp: denominator vanishes");
  const double num = st.xi * st.xi + st.xi * st.eta * w2 * (2.0 - 2.0 * k) +
                     st.eta * st.eta * w2 * w2 * (1.0 - 2.0 * k);
  return num / std::pow(s, 3.0 + 2.0 * k);
}

double jacobian_inversion(const Vec3& rp, const StageParams& st) {
  if (st.alpha <= 0.0)
    throw std::domain_error("jacobian_inversion needs alpha > 0");
  const double den = st.alpha + st.beta * (rp.x * rp.x + rp.y * rp.y);
  return std::exp(3.0 * st.gamma() * rp.z) / (den * den);
}

double jacobian_plane_inversion(const Vec3& r, const StageParams& st) {
  const double k = st.kappa();
  const double w2 = r.x * r.x + r.y * r.y;
  if (w2 == 0.0)
    throw std::domain_error("jacobian_plane_inversion: point on the z-axis");
  return (1.0 - 2.0 * k) * std::pow(st.eta, 2.0 * k - 1.0) *
         std::pow(w2, 2.0 * k - 3.0) / (st.beta * st.beta);
}

double composite_jacobian(const Vec3& r, const StageParams& st) {
  if (st.alpha == 0.0) return jacobian_plane_inversion(r, st);
  return jacobian_damp(r, st) * jacobian_inversion(damp_map(r, st), st);
}

bool radial_monotonicity_check(const StageParams& st, int samples) {
  const SurfaceParams& sp = st.shape;
  if (sp.p != 0.0 || st.xi != 0.0 || st.alpha != 0.0)
    throw std::domain_error(
        "radial_monotonicity_check applies to unfold-leg stages (p=0, xi=0, alpha=0)");
  if (samples < 2) samples = 2;
  const int n = sp.n;
  const double t2 = sp.t * sp.t, l = st.lam, om2 = st.omega * st.omega;

  // closed form of C^(n+1) g'(C) for g = |G|^2 C^-n; must stay negative
  for (int i = 1; i <= samples; ++i) {
    const double C = static_cast<double>(i) / samples;
    const double D = -n * t2 * l * (1.0 - l) * std::pow(C, n / 2.0) -
                     n * t2 * (1.0 - l) * (1.0 - l) - n * l * l * om2 +
                     (n - 1) * l * l * om2 * C;
    if (!(D < 0.0)) return false;
  }

  // sampled profile: planar radius grows from the pole to the equator
  double prev = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= samples; ++i) {
    const double theta = kHalfPi * (1.0 - static_cast<double>(i) / samples);
    const Vec3 r = closed_point(st, theta, 0.0);
    const double r2 = r.x * r.x + r.y * r.y;
    if (!(r2 > prev)) return false;
    prev = r2;
  }
  return true;
}

namespace {

struct LineProbe {
  std::array<double, 3> k3{}, k4{};
};

// Even/odd line defects along a chart line through a pole.  sampler(s) must
// evaluate the image at chart coordinate s with sampler(0) the pole itself.
template <typename F>
LineProbe line_probe(F&& sampler, double delta) {
  const Vec3 r0 = sampler(0.0);
  std::array<Vec3, 9> ev{}, od{};
  for (int k : {1, 2, 4, 8}) {
    const Vec3 rp = sampler(k * delta);
    const Vec3 rm = sampler(-k * delta);
    ev[k] = (rp + rm) * 0.5 - r0;
    od[k] = (rp - rm) * 0.5;
  }
  LineProbe pr;
  const double d3 = delta * delta * delta;
  const double d4 = d3 * delta;
  // even combination annihilates delta^2 and delta^4; |s|^3 survives as -32c
  const Vec3 K3 = (ev[4] - 20.0 * ev[2] + 64.0 * ev[1]) / d3;
  // odd combination annihilates delta, delta^3, delta^5; s|s|^3 -> -1792d
  const Vec3 K4 = (-512.0 * od[1] + 336.0 * od[2] - 42.0 * od[4] + od[8]) / d4;
  pr.k3 = {K3.x, K3.y, K3.z};
  pr.k4 = {K4.x, K4.y, K4.z};
  return pr;
}

}  // namespace

SmoothnessReport pole_regularity_check(const StageParams& st) {
  SmoothnessReport rep;
  rep.margin = smoothness_margin(st.shape).margin;

  constexpr double delta = 0.008;
  constexpr double floor_mag = 1e-3;
  constexpr double ratio_gate = 0.5;  // genuine break holds its size when delta halves

  bool detected = false;
  double max_slope_jump = 0.0;

  for (double pole : {1.0, -1.0}) {
    for (int j = 0; j < 7; ++j) {
      const double phi0 = kPi * j / 6.0;
      auto sampler = [&](double s) {
        const double th = pole * std::acos(std::min(std::fabs(s), 1.0));
        const double ph = s >= 0.0 ? phi0 : phi0 + kPi;
        return closed_point(st, th, ph);
      };
      const LineProbe a = line_probe(sampler, delta);
      const LineProbe b = line_probe(sampler, delta / 2.0);
      for (int c = 0; c < 3; ++c) {
        for (auto [pa, pb] : {std::pair{a.k3[c], b.k3[c]}, std::pair{a.k4[c], b.k4[c]}}) {
          const double mag = std::fabs(pb);
          const double ratio = mag / std::max(std::fabs(pa), 1e-300);
          if (mag > floor_mag && ratio > ratio_gate) detected = true;
        }
        rep.probe_order3 = std::max(rep.probe_order3, std::fabs(b.k3[c]));
        rep.probe_order4 = std::max(rep.probe_order4, std::fabs(b.k4[c]));
      }
      // one-sided first differences, second order, from either side of the pole
      const Vec3 r0 = sampler(0.0);
      const Vec3 sp1 = (4.0 * sampler(delta) - sampler(2.0 * delta) - 3.0 * r0) / (2.0 * delta);
      const Vec3 sm1 = (3.0 * r0 + sampler(-2.0 * delta) - 4.0 * sampler(-delta)) / (2.0 * delta);
      max_slope_jump = std::max(max_slope_jump, (sp1 - sm1).max_abs());
    }
  }

  rep.slope_jump = max_slope_jump;
  rep.pass = !detected;
  if (st.shape.n >= 5 && st.shape.n % 2 == 1 && !detected)
    rep.note = "breaks of order 5 and above sit below the probe floor";
  return rep;
}

SmoothnessReport stage_report(const StageParams& st, int h_samples,
                              int phi_samples, double h_span) {
  SmoothnessReport rep;
  const MarginWitness mw = smoothness_margin(st.shape);
  rep.margin = mw.margin;

  double min_norm = std::numeric_limits<double>::infinity();
  double min_jac = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= h_samples; ++i) {
    const double h = -h_span + 2.0 * h_span * i / h_samples;
    for (int j = 0; j < phi_samples; ++j) {
      const double phi = 2.0 * kPi * j / phi_samples;
      min_norm = std::min(min_norm, normal_vector(st.shape, h, phi).norm());
      min_jac = std::min(min_jac, composite_jacobian(family_point(st.shape, h, phi), st));
    }
  }
  rep.min_normal_norm = min_norm;
  rep.min_jacobian = min_jac;
  rep.pass = st.valid() && mw.pass && min_norm > 1e-12 && min_jac > 0.0;
  if (!st.valid()) rep.note = st.check();
  return rep;
}

Vec3 pipeline_normal(const StageParams& st, double theta, double phi) {
  const double d = 1e-5;
  Vec3 n;
  if (std::fabs(theta) > kHalfPi - 2.0 * d) {
    // pole neighborhood: cross two chart lines through the pole
    const double pole = theta > 0 ? 1.0 : -1.0;
    auto line = [&](double s, double phi0) {
      const double th = pole * std::acos(std::min(std::fabs(s), 1.0));
      const double ph = s >= 0.0 ? phi0 : phi0 + kPi;
      return closed_point(st, th, ph);
    };
    const Vec3 t1 = (line(d, phi) - line(-d, phi)) / (2.0 * d);
    const Vec3 t2 = (line(d, phi + kHalfPi) - line(-d, phi + kHalfPi)) / (2.0 * d);
    n = t1.cross(t2);
    // orient against the interior normal just off the pole
    const double th_in = pole * (kHalfPi - 64.0 * d);
    const Vec3 tth = (closed_point(st, th_in + d, phi) - closed_point(st, th_in - d, phi)) / (2.0 * d);
    const Vec3 tph = (closed_point(st, th_in, phi + d) - closed_point(st, th_in, phi - d)) / (2.0 * d);
    if (n.dot(tth.cross(tph)) < 0.0) n = -n;
  } else {
    const Vec3 tth = (closed_point(st, theta + d, phi) - closed_point(st, theta - d, phi)) / (2.0 * d);
    const Vec3 tph = (closed_point(st, theta, phi + d) - closed_point(st, theta, phi - d)) / (2.0 * d);
    n = tth.cross(tph);
  }
  const double len = n.norm();
  return len > 0.0 ? n / len : n;
}

}  // namespace everse
