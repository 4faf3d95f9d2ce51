#include "everse/events.hpp"

#include "everse/algebra.hpp"
#include "everse/roots.hpp"
#include "everse/surface.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace everse {

namespace {

constexpr double kPi = 3.141592653589793;
constexpr double kHalfPi = 1.5707963267948966;
const double kTT = (std::sqrt(17.0) - 3.0) / 2.0;  // t of the T events
const double kSqrt2 = std::sqrt(2.0);

// Determinant quartic of the sheet-degeneracy system, descending in s.
std::array<double, 5> degeneracy_quartic(double t) {
  const double t2 = t * t, t3 = t2 * t, t4 = t2 * t2;
  return {5.0 * t2 - 4.0,
          8.0 * t - 16.0 * t3,
          18.0 * t4,
          -8.0 * t4 * t - 8.0 * t3,
          t4 * t2 + 4.0 * t4};
}

Eigen::Matrix4d degeneracy_system(double s, double t) {
  const double c = std::sqrt(std::max(0.0, 1.0 - s * s));
  const double t2 = t * t, t3 = t2 * t;
  Eigen::Matrix4d m;
  m << 1.5 * t * c, s, 0.0, 1.0,
      (2.0 * t2 - 1.0) * s - t, -1.5 * t * c, -1.0, -2.0 * c,
      c * (t - t3) / 2.0, s - t, -2.0 * c, 2.0 * t * s - 1.0 - t2,
      (t2 - 1.0) * (t2 - 1.0) * s, c * (t - t3) / 2.0, 2.0 * t * s - 1.0 - t2, 0.0;
  return m;
}

// Solves the singular system at the kept root s, normalized by a sin(psi)=1.
TriplePoint solve_at(double s, double t) {
  Eigen::JacobiSVD<Eigen::Matrix4d> svd(degeneracy_system(s, t),
                                        Eigen::ComputeFullV);
  Eigen::Vector4d v = svd.matrixV().col(3);
  v /= v(0) * s;
  TriplePoint tp;
  tp.s = s;
  tp.psi = std::asin(std::clamp(s, -1.0, 1.0));
  tp.a = v(0);
  tp.b = v(1);
  tp.w_prime = v(2);
  tp.z_prime = v(3);
  tp.z = tp.z_prime / tp.a;
  tp.w = tp.w_prime - tp.b * tp.z;
  const double r = std::sqrt(std::max(0.0, tp.w));
  tp.point = {r * std::cos(tp.psi / 2.0), r * std::sin(tp.psi / 2.0), tp.z};

  // heights of the three sheets through the point
  const double c = std::sqrt(std::max(0.0, 1.0 - s * s));
  UniPoly cubic({tp.z * (t * t + 1.0 - 2.0 * t * s) + (t / 2.0) * (t * t - 1.0) * c,
                 t - s + 2.0 * tp.z * c,
                 tp.z + 1.5 * t * c,
                 s});
  const auto hr = real_roots(cubic, 1e-7);
  for (std::size_t i = 0; i < 3 && i < hr.size(); ++i) tp.h_roots[i] = hr[i];
  return tp;
}

double wrap_angle(double phi) {
  phi = std::fmod(phi, 2.0 * kPi);
  if (phi > kPi) phi -= 2.0 * kPi;
  if (phi <= -kPi) phi += 2.0 * kPi;
  return phi;
}

}  // namespace

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::D0: return "D0";
    case EventKind::D1: return "D1";
    case EventKind::D2: return "D2";
    case EventKind::D01: return "D01";
    case EventKind::D21: return "D21";
    case EventKind::Tplus: return "T+";
    case EventKind::Tminus: return "T-";
    case EventKind::Q: return "Q";
    case EventKind::Triple: return "T";
  }
  return "?";
}

std::vector<TriplePoint> triple_points(double t) {
  if (std::fabs(t) < 1e-12) return {};
  if (std::fabs(t) >= 1.0 || std::fabs(t) >= kTT) return {};

  const auto qc = degeneracy_quartic(t);
  UniPoly quartic({qc[4], qc[3], qc[2], qc[1], qc[0]});
  double s = std::numeric_limits<double>::quiet_NaN();
  for (double r : real_roots(quartic, 1e-9))
    if (t * r < 0.0 && std::fabs(r) <= 1.0) s = r;
  if (!std::isfinite(s)) {
    // the kept root in closed form; the quartic factors as (s-t)^3 (s-rho)
    s = t * (t * t + 4.0) / (5.0 * t * t - 4.0);
  }

  const TriplePoint base = solve_at(s, t);
  const double x = base.point.x, y = base.point.y, z = base.point.z;

  std::vector<TriplePoint> out(4, base);
  out[1].point = {y, x, -z};
  out[2].point = {-x, -y, z};
  out[3].point = {-y, -x, -z};
  for (int i = 0; i < 3; ++i) {
    out[1].h_roots[i] = -base.h_roots[i];  // (h,phi) -> (-h, pi/2 - phi)
    out[3].h_roots[i] = -base.h_roots[i];
  }
  return out;
}

std::array<double, 5> degeneracy_quartic_coeffs(double t) {
  const double t2 = t * t, t3 = t2 * t, t4 = t2 * t2;
  return {-(4.0 + 3.0 * t2 + 4.0 * t4),
          8.0 * t * (1.0 + t2),
          2.0 * t2 * (2.0 + 7.0 * t2),
          -8.0 * t3 * (4.0 + t2),
          t4 * t2 + 12.0 * t4 + 4.0 * t2};
}

QuarticStructure quartic_root_structure(double t) {
  if (std::fabs(t) < 1e-9)
    throw std::domain_error(
        "quartic_root_structure: at t = 0 the quartic degenerates to -4 s^4");
  QuarticStructure qs;
  qs.coeffs = degeneracy_quartic_coeffs(t);
  UniPoly p({qs.coeffs[4], qs.coeffs[3], qs.coeffs[2], qs.coeffs[1], qs.coeffs[0]});
  qs.roots = poly_roots(p);
  qs.complex_pair_imag = std::numeric_limits<double>::infinity();
  for (const auto& r : qs.roots) {
    if (std::fabs(r.imag()) <= 1e-9 * (1.0 + std::fabs(r.real())))
      ++qs.real_count;
    else
      qs.complex_pair_imag = std::min(qs.complex_pair_imag, std::fabs(r.imag()));
  }
  if (!std::isfinite(qs.complex_pair_imag)) qs.complex_pair_imag = 0.0;

  const double a = 4.0 * qs.coeffs[0], b = 3.0 * qs.coeffs[1];
  const double c = 2.0 * qs.coeffs[2], d = qs.coeffs[3];
  qs.derivative_discriminant = 18.0 * a * b * c * d - 4.0 * b * b * b * d +
                               b * b * c * c - 4.0 * a * c * c * c -
                               27.0 * a * a * d * d;
  return qs;
}

TEventInfo t_of_T_events() {
  TEventInfo info;
  info.t_plus = -kTT;
  info.t_minus = kTT;
  const TriplePoint birth = solve_at(1.0, -kTT);   // psi = pi/2, x = y
  const TriplePoint death = solve_at(-1.0, kTT);   // psi = -pi/2, x = -y
  info.plus_locations = {birth.point, Vec3{-birth.point.x, -birth.point.y, birth.point.z}};
  info.minus_locations = {death.point, Vec3{-death.point.x, -death.point.y, death.point.z}};
  return info;
}

std::vector<ParamPoint> n2_point_preimages(const Vec3& pt, double t, double q,
                                           double tol) {
  const SurfaceParams sp{2, t, 1.0 - std::fabs(q * t), q};
  std::vector<ParamPoint> found;
  auto push_unique = [&](double h, double phi) {
    phi = wrap_angle(phi);
    if ((family_point(sp, h, phi) - pt).norm() > tol) return;
    for (const auto& f : found)
      if (std::fabs(f.u - h) < 1e-6 &&
          std::fabs(wrap_angle(f.phi - phi)) < 1e-6)
        return;
    found.push_back(ParamPoint::at_h(h, phi));
  };

  // heights from the planar distance quartic, angles by back substitution
  const UniPoly pa = height_elimination_pair(pt, t, q).first;
  for (double h : real_roots(pa, 1e-7)) {
    const double den = h * h + t * t - 1.0;
    if (std::fabs(den) > 1e-8) {
      const double cph = (pt.x * t - pt.y * (1.0 - h)) / den;
      const double sph = (pt.y * t - pt.x * (1.0 + h)) / den;
      push_unique(h, std::atan2(sph, cph));
    } else {
      // rank drop: the planar system no longer pins phi, walk the circle
      for (int j = 0; j < 720; ++j) {
        double phi = -kPi + 2.0 * kPi * j / 720.0;
        if ((family_point(sp, h, phi) - pt).norm() < 0.05) {
          // polish on |family - pt|^2 over phi
          for (int it = 0; it < 60; ++it) {
            const double d = 1e-7;
            auto f = [&](double ph) {
              return (family_point(sp, h, ph) - pt).norm2();
            };
            const double g = (f(phi + d) - f(phi - d)) / (2.0 * d);
            const double gg = (f(phi + d) - 2.0 * f(phi) + f(phi - d)) / (d * d);
            if (std::fabs(gg) < 1e-14) break;
            const double step = g / gg;
            phi -= std::clamp(step, -0.1, 0.1);
          }
          push_unique(h, phi);
        }
      }
    }
  }
  return found;
}

std::vector<EventRecord> halfway_events(int n) {
  std::vector<EventRecord> out;
  if (n == 2) {
    EventRecord quad{EventKind::Q, 0.0, {0.0, 0.0, 0.0}, {}, "quadruple point"};
    quad.preimages = {ParamPoint::at_h(-1.0, 0.0), ParamPoint::at_h(-1.0, kPi),
                      ParamPoint::at_h(1.0, kHalfPi), ParamPoint::at_h(1.0, -kHalfPi)};
    out.push_back(std::move(quad));

    const double hs = 1.0 - kSqrt2, hl = 1.0 + kSqrt2;
    struct Pinch { Vec3 at; double h0, phi0, h1, phi1; };
    const Pinch pinches[4] = {
        {{kSqrt2, 0.0, 0.0}, hs, kHalfPi, hl, -kHalfPi},
        {{-kSqrt2, 0.0, 0.0}, hs, -kHalfPi, hl, kHalfPi},
        {{0.0, kSqrt2, 0.0}, kSqrt2 - 1.0, 0.0, -1.0 - kSqrt2, kPi},
        {{0.0, -kSqrt2, 0.0}, kSqrt2 - 1.0, kPi, -1.0 - kSqrt2, 0.0}};
    for (const auto& pc : pinches) {
      EventRecord rec{EventKind::D1, 0.0, pc.at, {}, "pinch of the double curve"};
      rec.preimages = {ParamPoint::at_h(pc.h0, pc.phi0),
                       ParamPoint::at_h(pc.h1, pc.phi1)};
      out.push_back(std::move(rec));
    }
  } else if (n == 3) {
    EventRecord tri{EventKind::Triple, 0.0, {0.0, 0.0, 0.0}, {},
                    "triple point; the double cover pairs (h,phi) ~ (-h,phi+pi)"};
    tri.preimages = {ParamPoint::at_h(-1.0, 0.0),
                     ParamPoint::at_h(1.0, kPi),
                     ParamPoint::at_h(1.0, kPi / 3.0),
                     ParamPoint::at_h(-1.0, -2.0 * kPi / 3.0),
                     ParamPoint::at_h(1.0, -kPi / 3.0),
                     ParamPoint::at_h(-1.0, 2.0 * kPi / 3.0)};
    out.push_back(std::move(tri));
  }
  return out;
}

std::vector<EventRecord> d_events(int n, double q, double alpha, double beta) {
  std::vector<EventRecord> out;
  if (q > 0.0) {
    const double tq = 1.0 / q;
    const Vec3 pole_image{0.0, 0.0, -std::sqrt(alpha / beta) / (alpha + beta)};
    EventRecord d01{EventKind::D01, -tq, pole_image,
                    {ParamPoint::at_theta(kHalfPi, 0.0), ParamPoint::at_theta(-kHalfPi, 0.0)},
                    "pole caps touch their image point (image-space location)"};
    EventRecord d21 = d01;
    d21.kind = EventKind::D21;
    d21.t = tq;
    out.push_back(std::move(d01));
    out.push_back(std::move(d21));
  }
  if (n == 2) {
    EventRecord d0{EventKind::D0, -1.0, {0.0, 0.0, 0.0},
                   {ParamPoint::at_h(0.0, kPi / 4.0), ParamPoint::at_h(0.0, -3.0 * kPi / 4.0)},
                   "central loop born through the origin"};
    EventRecord d2{EventKind::D2, 1.0, {0.0, 0.0, 0.0},
                   {ParamPoint::at_h(0.0, 3.0 * kPi / 4.0), ParamPoint::at_h(0.0, -kPi / 4.0)},
                   "central loop dies through the origin"};
    out.push_back(std::move(d0));
    out.push_back(std::move(d2));
  }
  std::sort(out.begin(), out.end(),
            [](const EventRecord& a, const EventRecord& b) { return a.t < b.t; });
  return out;
}

std::vector<LocalPatch> local_model(EventKind kind, double t, int grid) {
  if (grid < 1) grid = 1;
  auto graph = [grid](const std::string& label, auto f) {
    LocalPatch p{label, grid, {}};
    p.points.reserve((grid + 1) * (grid + 1));
    for (int i = 0; i <= grid; ++i)
      for (int j = 0; j <= grid; ++j) {
        const double u = -1.0 + 2.0 * i / grid;
        const double v = -1.0 + 2.0 * j / grid;
        p.points.push_back(f(u, v));
      }
    return p;
  };
  std::vector<LocalPatch> out;
  switch (kind) {
    case EventKind::D0:
      out.push_back(graph("static sheet", [](double u, double v) { return Vec3{u, v, 0.0}; }));
      out.push_back(graph("moving sheet", [t](double u, double v) {
        return Vec3{u, v, u * u + v * v - t};
      }));
      break;
    case EventKind::D2:
      out.push_back(graph("static sheet", [](double u, double v) { return Vec3{u, v, 0.0}; }));
      out.push_back(graph("moving sheet", [t](double u, double v) {
        return Vec3{u, v, u * u + v * v + t};
      }));
      break;
    case EventKind::D1:
      out.push_back(graph("static sheet", [](double u, double v) { return Vec3{u, v, 0.0}; }));
      out.push_back(graph("moving sheet", [t](double u, double v) {
        return Vec3{u, v, u * v - t};
      }));
      break;
    case EventKind::D01:
    case EventKind::D21:
      out.push_back(graph("static sheet", [](double u, double v) { return Vec3{u, v, 0.0}; }));
      out.push_back(graph("moving sheet", [t](double u, double v) {
        const double r2 = u * u + v * v;
        return Vec3{u, v, u * u - v * v + t * (1.0 + r2) * r2};
      }));
      break;
    case EventKind::Tplus:
    case EventKind::Tminus: {
      const double tm = kind == EventKind::Tplus ? t : -t;
      out.push_back(graph("fixed sheet x=y", [](double u, double v) {
        return Vec3{u, u, v};
      }));
      out.push_back(graph("fixed sheet x=-y", [](double u, double v) {
        return Vec3{u, -u, v};
      }));
      out.push_back(graph("moving sheet", [tm](double u, double v) {
        return Vec3{v * v - tm, u, v};
      }));
      break;
    }
    case EventKind::Q:
      out.push_back(graph("sheet x=0", [](double u, double v) { return Vec3{0.0, u, v}; }));
      out.push_back(graph("sheet y=0", [](double u, double v) { return Vec3{u, 0.0, v}; }));
      out.push_back(graph("sheet z=0", [](double u, double v) { return Vec3{u, v, 0.0}; }));
      out.push_back(graph("moving sheet", [t](double u, double v) {
        return Vec3{u, v, t - u - v};
      }));
      break;
    case EventKind::Triple:
      out.push_back(graph("sheet x=0", [](double u, double v) { return Vec3{0.0, u, v}; }));
      out.push_back(graph("sheet y=0", [](double u, double v) { return Vec3{u, 0.0, v}; }));
      out.push_back(graph("sheet z=0", [](double u, double v) { return Vec3{u, v, 0.0}; }));
      break;
  }
  return out;
}

std::vector<EventRecord> event_timeline(const StageSchedule& sched) {
  const auto frames = schedule_keyframes(sched);
  if (frames.empty()) return {};
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  double qmax = 0.0;
  for (const auto& kf : frames) {
    lo = std::min(lo, kf.stage.shape.t);
    hi = std::max(hi, kf.stage.shape.t);
    qmax = std::max(qmax, kf.stage.shape.q);
  }
  const bool reversed = sched.reversed;

  std::vector<EventRecord> canon;
  const auto de = d_events(2, qmax);
  canon.insert(canon.end(), de.begin(), de.end());

  const TEventInfo te = t_of_T_events();
  for (const Vec3& at : te.plus_locations) {
    EventRecord rec{EventKind::Tplus, te.t_plus, at, {}, "triple points born"};
    rec.preimages = n2_point_preimages(at, te.t_plus, 0.0, 1e-6);
    canon.push_back(std::move(rec));
  }
  for (const Vec3& at : te.minus_locations) {
    EventRecord rec{EventKind::Tminus, te.t_minus, at, {}, "triple points die"};
    rec.preimages = n2_point_preimages(at, te.t_minus, 0.0, 1e-6);
    canon.push_back(std::move(rec));
  }

  auto hw = halfway_events(2);
  canon.insert(canon.end(), hw.begin(), hw.end());

  if (sched.extra_d1) {
    StageParams st = StageParams::closed_wormhole(sched.extra_d1_t);
    EventRecord rec{EventKind::D1, sched.extra_d1_t,
                    closed_point(st, kHalfPi, 0.0), {ParamPoint::at_theta(kHalfPi, 0.0)},
                    "configured pole-image crossing (image-space location)"};
    canon.push_back(std::move(rec));
  }

  std::vector<EventRecord> out;
  for (auto& rec : canon)
    if (rec.t >= lo - 1e-9 && rec.t <= hi + 1e-9) out.push_back(std::move(rec));

  if (reversed) {
    for (auto& rec : out) {
      switch (rec.kind) {
        case EventKind::D0: rec.kind = EventKind::D2; break;
        case EventKind::D2: rec.kind = EventKind::D0; break;
        case EventKind::D01: rec.kind = EventKind::D21; break;
        case EventKind::D21: rec.kind = EventKind::D01; break;
        case EventKind::Tplus: rec.kind = EventKind::Tminus; break;
        case EventKind::Tminus: rec.kind = EventKind::Tplus; break;
        default: break;
      }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const EventRecord& a, const EventRecord& b) { return a.t > b.t; });
  } else {
    std::stable_sort(out.begin(), out.end(),
                     [](const EventRecord& a, const EventRecord& b) { return a.t < b.t; });
  }

  if (lo > 0.0 || hi < 0.0) {
    if (!out.empty())
      out.front().note += " [warning: sweep does not cross t = 0; partial timeline]";
    else
      out.push_back({EventKind::Q, 0.0, {}, {},
                     "warning: sweep does not cross t = 0; no events covered"});
  }
  return out;
}

}  // namespace everse
