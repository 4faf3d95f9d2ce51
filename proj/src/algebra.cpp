#include "everse/algebra.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>

namespace everse {

namespace {

ResidualReport from_terms(const double* terms, int count) {
  ResidualReport r;
  for (int i = 0; i < count; ++i) {
    r.value += terms[i];
    r.scale = std::max(r.scale, std::fabs(terms[i]));
  }
  r.relative = r.scale > 0.0 ? std::fabs(r.value) / r.scale : 0.0;
  return r;
}

// dense ascending-coefficient arithmetic for assembling the elimination pair
using Poly = std::vector<double>;

Poly mul(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

Poly& add_to(Poly& a, const Poly& b, double f = 1.0) {
  if (a.size() < b.size()) a.resize(b.size(), 0.0);
  for (size_t i = 0; i < b.size(); ++i) a[i] += f * b[i];
  return a;
}

Poly shift_up(const Poly& a) {  // multiply by h
  Poly out(a.size() + 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i) out[i + 1] = a[i];
  return out;
}

}  // namespace

ResidualReport sextic_residual_halfway(const Vec3& pt) {
  const double x = pt.x, y = pt.y, z = pt.z;
  const double C = x * x + y * y;
  const double terms[4] = {4.0 * x * y * z * (x * x - y * y),
                           4.0 * x * x * y * y * (C - 1.0),
                           -4.0 * z * z * z * z,
                           -z * z * C * (C - 4.0)};
  return from_terms(terms, 4);
}

ResidualReport boy_quintic_residual(const Vec3& pt) {
  const double x = pt.x, y = pt.y, z = pt.z;
  const double C = x * x + y * y;
  const double terms[4] = {4.0 * z * z * z,
                           z * C * (C - 3.0),
                           2.0 * z * (3.0 * x * x * y - y * y * y),
                           (1.0 - C) * (x * x * x - 3.0 * x * y * y)};
  return from_terms(terms, 4);
}

// Writing the planar part as w = (t + ih) e^(i phi) + i p e^(-i phi), the
// point data C = |w|^2, B = x^2-y^2, A = 2xy and the height relation
// 2h sin(2phi) - t cos(2phi) = 2(z + qth) are linear in (cos 2phi, sin 2phi).
// Solving the norm equation together with the height relation and insisting
// the solution lands on the unit circle gives the first polynomial in h; the
// B relation gives the second.  p = 0 collapses the planar system and gets
// its own pair.
std::pair<UniPoly, UniPoly> height_elimination_pair(const Vec3& pt, double t,
                                                    double q) {
  const double x = pt.x, y = pt.y, z = pt.z;
  const double A = 2.0 * x * y;
  const double B = x * x - y * y;
  const double C = x * x + y * y;
  const double t2 = t * t;
  const double p = 1.0 - std::fabs(q * t);

  if (p == 0.0 && t != 0.0) {
    // w = (t+ih) e^(i phi): the radius pins h^2 and (B, A) pin the angle
    UniPoly pa({t2 - C, 0.0, 1.0});
    const Poly az{z, q * t};                     // z + q t h
    const Poly r2{t2, 0.0, 1.0};                 // t^2 + h^2
    const Poly a{t2, 0.0, -1.0};                 // t^2 - h^2
    const Poly b{0.0, 2.0 * t};                  // 2 t h
    Poly pb = mul(az, mul(r2, r2));
    Poly aAbB{t2 * A, -2.0 * t * B, -A};         // a A - b B
    add_to(pb, shift_up(aAbB), -1.0);
    Poly aBbA{t2 * B, 2.0 * t * A, -B};          // a B + b A
    add_to(pb, aBbA, 0.5 * t);
    return {pa, UniPoly(std::move(pb))};
  }

  const Poly E{C - t2 - p * p, 0.0, -1.0};       // C - t^2 - h^2 - p^2
  const Poly zt{2.0 * z, 2.0 * q * t};           // 2(z + q t h)
  const Poly D{2.0 * p * t2, 0.0, 4.0 * p};      // 2p (2h^2 + t^2)

  Poly Nc = shift_up(E);                         // Nc = D cos 2phi = 2hE - 2pt zt
  for (double& c : Nc) c *= 2.0;
  add_to(Nc, zt, -2.0 * p * t);
  Poly Ns = shift_up(zt);                        // Ns = D sin 2phi = 2ph zt + tE
  for (double& c : Ns) c *= 2.0 * p;
  add_to(Ns, E, t);

  Poly pa = mul(Nc, Nc);                         // unit-circle identity
  add_to(pa, mul(Ns, Ns));
  add_to(pa, mul(D, D), -1.0);

  Poly pb = mul(Poly{B, 2.0 * p}, D);            // B relation
  add_to(pb, mul(Poly{t2 - p * p, 0.0, -1.0}, Nc), -1.0);
  add_to(pb, shift_up(Ns), 2.0 * t);
  return {UniPoly(std::move(pa)), UniPoly(std::move(pb))};
}

double resultant(const UniPoly& a, const UniPoly& b) {
  UniPoly pa = a, pb = b;
  pa.trim(1e-300);
  pb.trim(1e-300);
  const int m = pa.degree(), n = pb.degree();
  if (m < 0 || n < 0) return 0.0;
  if (m == 0) return std::pow(pa.c[0], n);
  if (n == 0) return std::pow(pb.c[0], m);

  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(m + n, m + n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= m; ++j) S(i, i + j) = pa.c[m - j];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= n; ++j) S(n + i, i + j) = pb.c[n - j];
  return Eigen::FullPivLU<Eigen::MatrixXd>(S).determinant();
}

ResidualReport sextic_residual_t(const Vec3& pt, double t, double q) {
  auto [pa, pb] = height_elimination_pair(pt, t, q);
  pa.trim(1e-14);
  pb.trim(1e-14);
  ResidualReport r;
  r.value = resultant(pa, pb);
  const double ma = pa.max_abs_coeff(), mb = pb.max_abs_coeff();
  r.scale = std::pow(ma, std::max(pb.degree(), 0)) *
            std::pow(mb, std::max(pa.degree(), 0));
  r.relative = r.scale > 0.0 ? std::fabs(r.value) / r.scale : 0.0;
  r.degenerate = r.scale == 0.0;
  return r;
}

ResidualReport quadratic_common_root_residual(const Vec3& pt) {
  const double x = pt.x, y = pt.y, z = pt.z;
  const double a1 = z, b1 = 2.0 * x * y, c1 = -z;
  const double C = x * x + y * y, B = x * x - y * y;
  const double a2 = z * z * C - 4.0 * x * x * y * y;
  const double b2 = 2.0 * z * z * B;
  const double c2 = z * z * C;
  const double lhs = (c1 * a2 - c2 * a1) * (c1 * a2 - c2 * a1);
  const double rhs = (a1 * b2 - a2 * b1) * (c2 * b1 - c1 * b2);
  ResidualReport r;
  r.value = lhs - rhs;
  r.scale = std::max({std::fabs(lhs), std::fabs(rhs),
                      (c1 * a2) * (c1 * a2), (c2 * a1) * (c2 * a1)});
  r.relative = r.scale > 0.0 ? std::fabs(r.value) / r.scale : 0.0;
  r.degenerate = std::fabs(z) * std::fabs(z) <= 1e-12 * std::max(1.0, C);
  return r;
}

}  // namespace everse
