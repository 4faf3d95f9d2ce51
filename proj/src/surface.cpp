#include "everse/surface.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace everse {

namespace {
constexpr double kHalfPi = 1.5707963267948966;
using cplx = std::complex<double>;
}  // namespace

Vec3 family_point(const SurfaceParams& sp, double h, double phi) {
  const double n = sp.n;
  return {sp.t * std::cos(phi) + sp.p * std::sin((n - 1) * phi) - h * std::sin(phi),
          sp.t * std::sin(phi) + sp.p * std::cos((n - 1) * phi) + h * std::cos(phi),
          h * std::sin(n * phi) - (sp.t / n) * std::cos(n * phi) - sp.q * sp.t * h};
}

Vec3 halfway_point(int n, double h, double phi) {
  return family_point(SurfaceParams::halfway(n), h, phi);
}

double theta_to_h(double theta, double omega, int n) {
  if (!(std::fabs(theta) < kHalfPi))
    throw std::domain_error("theta_to_h: |theta| must be below pi/2");
  const double c = std::cos(theta);
  return omega * std::sin(theta) / std::pow(c, n);
}

double h_to_theta(double h, double omega, int n) {
  if (h == 0.0) return 0.0;
  // omega sin(theta) - h cos(theta)^n is increasing in theta, one sign change
  double lo = -kHalfPi, hi = kHalfPi;
  double th = std::atan(h / omega);
  for (int it = 0; it < 200; ++it) {
    const double c = std::cos(th), s = std::sin(th);
    const double cn = std::pow(c, n);
    const double f = omega * s - h * cn;
    if (f > 0.0) hi = th; else lo = th;
    const double df = omega * c + h * n * cn / c * s;
    double step = f / df;
    double next = th - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - th) < 1e-15 * (1.0 + std::fabs(th))) return next;
    th = next;
  }
  return th;
}

Vec3 damp_map(const Vec3& r, const StageParams& st) {
  const double s = st.xi + st.eta * (r.x * r.x + r.y * r.y);
  if (s <= 0.0) throw std::domain_error("damp_map: denominator vanishes");
  const double sk = std::pow(s, -st.kappa());
  return {r.x * sk, r.y * sk, r.z / s};
}

Vec3 inversion_map(const Vec3& rp, const StageParams& st) {
  if (st.alpha <= 0.0)
    throw std::domain_error("inversion_map needs alpha > 0; use plane_inversion");
  const double g = st.gamma();
  const double w2 = rp.x * rp.x + rp.y * rp.y;
  const double den = st.alpha + st.beta * w2;
  const double e = std::exp(g * rp.z);
  return {rp.x * e / den, rp.y * e / den,
          (st.alpha - st.beta * w2) / den * e / g -
              (st.alpha - st.beta) / ((st.alpha + st.beta) * g)};
}

Vec3 plane_inversion(const Vec3& r, const StageParams& st) {
  if (st.eta <= 0.0) throw std::domain_error("plane_inversion: eta must be positive");
  const double w2 = r.x * r.x + r.y * r.y;
  if (w2 == 0.0) throw std::domain_error("plane_inversion: point on the z-axis");
  const double k = st.kappa();
  const double f = std::pow(st.eta, k) / (st.beta * std::pow(w2, 1.0 - k));
  return {r.x * f, r.y * f, -(r.z / st.eta) / w2};
}

// One closed-form expression for the whole composite.  Everything is written
// in C = cos^2(theta) so that both poles are interior points of the formula;
// the half-integer powers C^(n/2) that would break odd n are collected into
// Cn2 = sqrt(C^n + eps), which is where the pole smoothing enters.
Vec3 closed_point(const StageParams& st, double theta, double phi) {
  const int n = st.shape.n;
  const double t = st.shape.t, p = st.shape.p, q = st.shape.q;
  const double kap = st.kappa();
  const double gam = st.gamma();
  const double lam = st.lam;

  const double C = std::cos(theta) * std::cos(theta);
  const double Z = std::sin(theta);
  const double Cn = std::pow(C, n);
  const double Cn2 = std::sqrt(Cn + st.eps);
  const cplx W = std::polar(std::sqrt(C), phi);
  const cplx Wn = std::pow(W, n);

  const cplx G = t * (lam * Cn2 + 1.0 - lam) +
                 cplx(0.0, 1.0) * (lam * st.omega * Z + p * std::conj(Wn));
  const cplx F = W * G;
  const double Rg = std::norm(G);
  const double Rp = Cn * st.xi + st.eta * Rg;

  const double zcn =
      lam * (st.omega * Z * Wn.imag() - t * Cn2 * (Wn.real() / n + q * st.omega * Z)) -
      (1.0 - lam) * std::pow(st.eta, 1.0 + kap) * t * std::pow(std::fabs(t), 2.0 * kap) * Z;
  const double zp = zcn / Rp;

  const double Rp2k = std::pow(Rp, 2.0 * kap);
  const double den = C * st.alpha * Rp2k + st.beta * Rg;

  double egz, S;  // exp(gam zp) and its difference quotient (exp(gam zp)-1)/gam
  if (gam < 1e-8) {
    S = zp * (1.0 + gam * zp / 2.0 * (1.0 + gam * zp / 3.0));
    egz = 1.0 + gam * zp;
  } else {
    S = std::expm1(gam * zp) / gam;
    egz = std::exp(gam * zp);
  }

  const cplx wpp = F * std::pow(Rp, kap) * egz / den;
  const double A = (C * st.alpha * Rp2k - st.beta * Rg) / den;
  const double zpp = A * S + std::sqrt(st.alpha * st.beta) * (C * Rp2k - Rg) /
                                 (den * (st.alpha + st.beta));
  return {wpp.real(), wpp.imag(), zpp};
}

Vec3 unfold_sphere_point(double theta, double phi, const StageParams& st) {
  return closed_point(st, theta, phi);
}

Vec3 pipeline_point(const ParamPoint& pt, const StageParams& st) {
  const double theta = pt.chart == ParamPoint::Chart::angle
                           ? pt.u
                           : h_to_theta(pt.u, st.omega, st.shape.n);
  if (!(std::fabs(theta) <= kHalfPi))
    throw std::domain_error("pipeline_point: theta outside the closed chart");
  return closed_point(st, theta, pt.phi);
}

}  // namespace everse
