#pragma once

#include <cmath>
#include <string>

namespace everse {

// Shape of one member of the ruled-surface family.  n is the winding of the
// ruling direction (n=2 is the wormhole family, n=3 closes up over the Boy
// surface), t the family time, p the ruling amplitude and q the vertical
// shear.  The usual coupling is p = 1 - |q t|.
struct SurfaceParams {
  int n = 2;
  double t = 0.0;
  double p = 1.0;
  double q = 0.0;

  static SurfaceParams halfway(int n_, double t_ = 0.0) {
    return {n_, t_, 1.0, 0.0};
  }
  static SurfaceParams coupled(int n_, double t_, double q_) {
    return {n_, t_, 1.0 - std::fabs(q_ * t_), q_};
  }
};

// A full stage of the eversion: the shape plus the damping denominator
// (xi + eta |w|^2), the inversion profile (alpha, beta), the pole-chart scale
// omega, the sphere interpolation weight lam (1 = full surface, 0 = round
// sphere) and the pole smoothing eps used for odd n.
struct StageParams {
  SurfaceParams shape;
  double xi = 1.0;
  double eta = 1.0;
  double alpha = 1.0;
  double beta = 1.0 / 25.0;
  double omega = 2.0;
  double lam = 1.0;
  double eps = 0.0;

  double kappa() const { return (shape.n - 1) / (2.0 * shape.n); }
  double gamma() const { return 2.0 * std::sqrt(alpha * beta); }

  // Empty when the stage is usable; otherwise the reason it is not.
  std::string check() const {
    if (shape.n < 2) return "winding n must be at least 2";
    if (shape.p < 0.0) return "ruling amplitude p must be nonnegative";
    if (xi < 0.0 || eta < 0.0 || (xi == 0.0 && eta == 0.0))
      return "damping denominator must be positive";
    if (alpha < 0.0 || beta <= 0.0) return "inversion profile needs alpha >= 0, beta > 0";
    if (omega <= 0.0) return "pole-chart scale omega must be positive";
    if (lam < 0.0 || lam > 1.0) return "sphere weight lam must lie in [0,1]";
    if (eps < 0.0) return "pole smoothing eps must be nonnegative";
    if (xi == 0.0 && alpha == 0.0 && std::fabs(shape.t) <= shape.p)
      return "plane inversion of a surface meeting the z-axis (|t| <= p) is unbounded";
    return {};
  }
  bool valid() const { return check().empty(); }

  static StageParams closed_wormhole(double t, double q = 0.0) {
    StageParams s;
    s.shape = SurfaceParams::coupled(2, t, q);
    s.xi = 1.0; s.eta = 1.0; s.alpha = 1.0; s.beta = 1.0 / 25.0;
    return s;
  }
  static StageParams unfolded(double t, double big_q = 2.0 / 3.0) {
    StageParams s;
    s.shape = SurfaceParams::coupled(2, t, big_q);
    s.xi = 1.0; s.eta = 1.0; s.alpha = 1.0; s.beta = 1.0 / 25.0;
    return s;
  }
  static StageParams inverted(double t, double big_q = 2.0 / 3.0) {
    StageParams s;
    s.shape = SurfaceParams::coupled(2, t, big_q);
    s.xi = 0.0; s.eta = 1.0; s.alpha = 0.0; s.beta = 1.0;
    return s;
  }
  static StageParams round_sphere(double t, double big_q = 2.0 / 3.0) {
    StageParams s = inverted(t, big_q);
    s.lam = 0.0;
    return s;
  }
};

// A point of the parameter domain, in either the (h, phi) chart of the open
// surface or the (theta, phi) chart that closes up the ends.
struct ParamPoint {
  enum class Chart { height, angle };
  Chart chart = Chart::height;
  double u = 0.0;  // h in the height chart, theta in the angle chart
  double phi = 0.0;

  static ParamPoint at_h(double h, double phi_) {
    return {Chart::height, h, phi_};
  }
  static ParamPoint at_theta(double theta, double phi_) {
    return {Chart::angle, theta, phi_};
  }
};

}  // namespace everse
