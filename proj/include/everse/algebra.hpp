#pragma once

#include "everse/roots.hpp"
#include "everse/vec3.hpp"

#include <utility>

namespace everse {

struct ResidualReport {
  double value = 0.0;     // signed combination before normalizing
  double scale = 0.0;     // magnitude of the largest contributing term
  double relative = 0.0;  // |value| / scale, 0 when everything vanishes
  bool degenerate = false;
};

// Implicit sextic of the n=2, t=0 member:
//   4xyz(x^2-y^2) + 4x^2y^2(C-1) - 4z^4 - z^2 C (C-4),  C = x^2+y^2.
ResidualReport sextic_residual_halfway(const Vec3& pt);

// Implicit quintic of the n=3, t=0 member:
//   4z^3 + zC(C-3) + 2z(3x^2y - y^3) + (1-C)(x^3-3xy^2).
ResidualReport boy_quintic_residual(const Vec3& pt);

// The two height polynomials whose common root marks membership of the n=2
// family member at (t, q): a quartic from the planar distance relation and a
// cubic from the height relation.  Ascending coefficients.
std::pair<UniPoly, UniPoly> height_elimination_pair(const Vec3& pt, double t,
                                                    double q);

// Sylvester resultant.
double resultant(const UniPoly& a, const UniPoly& b);

// Membership residual of the n=2 family member at (t, q): the resultant of
// the elimination pair over the product of coefficient norms.
ResidualReport sextic_residual_t(const Vec3& pt, double t, double q);

// Shared-root criterion of the two height quadratics of the halfway surface,
//   (c1 a2 - c2 a1)^2 = (a1 b2 - a2 b1)(c2 b1 - c1 b2);
// degenerate is set when z ~ 0 collapses the first quadratic.
ResidualReport quadratic_common_root_residual(const Vec3& pt);

}  // namespace everse
