#include "everse/intersections.hpp"

#include "everse/bvh.hpp"
#include "everse/surface.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace everse {

namespace {

constexpr double kPi = 3.141592653589793;
constexpr double kHalfPi = 1.5707963267948966;

double wrap_angle(double phi) {
  phi = std::fmod(phi, 2.0 * kPi);
  if (phi > kPi) phi -= 2.0 * kPi;
  if (phi <= -kPi) phi += 2.0 * kPi;
  return phi;
}

// A sample is accepted only when its two reconstructed preimages land on the
// same ambient point; that agreement is what makes it a double point.
bool accept_sample(const SurfaceParams& sp, BranchSample& s, double tol = 1e-8) {
  const auto pre = s.preimages();
  const Vec3 a = family_point(sp, pre[0].u, pre[0].phi);
  const Vec3 b = family_point(sp, pre[1].u, pre[1].phi);
  if ((a - b).norm() > tol * (1.0 + a.norm())) return false;
  s.point = (a + b) * 0.5;
  return true;
}

// Same, but the target point is known; flips the phi- strand when the first
// choice lands on the rotated copy of the curve.
bool accept_known_point(const SurfaceParams& sp, BranchSample& s, const Vec3& target,
                        double tol = 1e-8) {
  BranchSample trial = s;
  for (int flip = 0; flip < 2; ++flip) {
    if (accept_sample(sp, trial, tol) &&
        (trial.point - target).norm() <= tol * (1.0 + target.norm())) {
      s = trial;
      return true;
    }
    trial = s;
    trial.phi_minus = kPi - s.phi_minus;
    trial.h_minus = -s.h_minus;
  }
  return false;
}

std::vector<IntersectionBranch> n2_branches(const SurfaceParams& sp, int count,
                                            double h_span) {
  const double q = sp.q;
  std::vector<IntersectionBranch> out;

  if (sp.t == 0.0) {
    // petal curve of the halfway member
    IntersectionBranch rose{BranchKind::quadrifolium, "quadrifolium", {}};
    for (int j = 0; j < count; ++j) {
      const double phi = 2.0 * kPi * (j + 0.5) / count;
      const Vec3 target{std::sqrt(2.0) * std::cos(2.0 * phi) * std::cos(phi),
                        std::sqrt(2.0) * std::cos(2.0 * phi) * std::sin(phi),
                        -0.5 * std::sin(4.0 * phi)};
      BranchSample s;
      s.phi_plus = -phi;
      const double sin2 = std::sin(2.0 * s.phi_plus);
      s.h_plus = std::cos(2.0 * s.phi_plus);
      const double c2 = 0.5 * sin2 * sin2;
      s.phi_minus = std::acos(std::sqrt(c2));
      s.h_minus = sin2 * std::tan(s.phi_minus);
      if (accept_known_point(sp, s, target)) rose.samples.push_back(s);
    }
    out.push_back(std::move(rose));

    // the two straight double lines
    for (int axis = 0; axis < 2; ++axis) {
      IntersectionBranch line{BranchKind::axis_line,
                              axis == 0 ? "x axis" : "y axis", {}};
      const double phi_plus = axis == 0 ? 0.0 : kHalfPi;
      const double h_plus = axis == 0 ? 1.0 : -1.0;
      for (int j = 0; j < count; ++j) {
        const double hm = -h_span + 2.0 * h_span * (j + 0.5) / count;
        BranchSample s;
        s.phi_plus = phi_plus;
        s.phi_minus = kHalfPi;
        s.h_plus = h_plus;
        s.h_minus = hm;
        if (accept_sample(sp, s)) line.samples.push_back(s);
      }
      out.push_back(std::move(line));
    }
    return out;
  }

  // t != 0: work at |t| and rotate back at the end when t < 0
  const bool mirrored = sp.t < 0.0;
  const double t = std::fabs(sp.t);
  const double p = sp.p, qt = q * t;

  IntersectionBranch inner{BranchKind::general, "inner band", {}};
  IntersectionBranch outer{BranchKind::general, "outer band", {}};
  for (int j = 0; j < 4 * count; ++j) {
    const double phi_plus = 2.0 * kPi * (j + 0.5) / (4 * count);
    const double S = std::sin(2.0 * phi_plus);
    const double den = 2.0 * p - t * S;
    if (std::fabs(den) < 1e-12 || std::fabs(S + qt) < 1e-10) continue;
    const double c2 = (S + qt) * (p * S - t) / den;
    if (!(c2 >= 0.0 && c2 <= 1.0)) continue;
    for (int strand = 0; strand < 2; ++strand) {
      const double pm0 = std::acos(std::clamp(std::sqrt(c2), 0.0, 1.0));
      const double pm = strand == 0 ? pm0 : kPi - pm0;
      const double cm = std::cos(pm), sm = std::sin(pm);
      if (std::fabs(cm) < 1e-10) {
        if (std::fabs(p * S - t) > 1e-8) continue;  // strand closes off
      }
      BranchSample s;
      s.phi_plus = phi_plus;
      s.phi_minus = pm;
      s.h_plus = p * std::cos(2.0 * phi_plus);
      s.h_minus = std::fabs(cm) < 1e-10 ? 0.0 : (p * S - t) * sm / cm;
      SurfaceParams ref = sp;
      ref.t = t;
      if (!accept_sample(ref, s)) continue;
      if (mirrored) {
        s.point = {s.point.y, -s.point.x, s.point.z};
        s.h_plus = -s.h_plus;
        s.h_minus = -s.h_minus;
        s.phi_plus = wrap_angle(s.phi_plus + kHalfPi);
      }
      (S < 0.0 ? inner : outer).samples.push_back(s);
    }
  }
  if (!inner.samples.empty()) out.push_back(std::move(inner));
  if (!outer.samples.empty()) out.push_back(std::move(outer));

  // isolated double points on the z axis, present while |t| <= p
  if (std::fabs(sp.t) <= p) {
    IntersectionBranch axis{BranchKind::z_axis, "z-axis double points", {}};
    const double h = std::sqrt(std::max(0.0, p * p - sp.t * sp.t));
    for (double hz : {h, -h}) {
      const std::complex<double> u2 =
          std::complex<double>(0.0, -p) / std::complex<double>(sp.t, hz);
      const double phi0 = 0.5 * std::arg(u2);
      BranchSample s;
      s.phi_plus = wrap_angle(phi0 + kHalfPi);
      s.phi_minus = kHalfPi;
      s.h_plus = hz;
      s.h_minus = 0.0;
      if (accept_sample(sp, s)) axis.samples.push_back(s);
      if (h == 0.0) break;
    }
    out.push_back(std::move(axis));
  }
  return out;
}

std::vector<IntersectionBranch> n3_halfway_branches(const SurfaceParams& sp,
                                                    int count) {
  IntersectionBranch tri{BranchKind::trifolium, "trifolium", {}};
  const double p = sp.p;
  for (int j = 0; j < count; ++j) {
    const double phi_plus = kPi * (j + 0.5) / count;
    const double s6 = std::sin(6.0 * phi_plus);
    const Vec3 target{-p * std::cos(2.0 * phi_plus) * s6,
                      p * std::sin(2.0 * phi_plus) * s6,
                      -(p / 4.0) * std::sin(12.0 * phi_plus)};
    const double c2m = std::acos(std::clamp(-std::cos(6.0 * phi_plus) / 2.0, -1.0, 1.0));
    BranchSample s;
    s.phi_plus = phi_plus;
    s.phi_minus = c2m / 2.0;  // in [pi/6, pi/3]
    const double s2m = std::sin(2.0 * s.phi_minus);
    s.h_plus = p * std::cos(3.0 * phi_plus) * s2m / std::sin(s.phi_minus);
    s.h_minus = p * std::sin(3.0 * phi_plus) * s2m / std::cos(s.phi_minus);
    if (accept_known_point(sp, s, target)) tri.samples.push_back(s);
  }
  std::vector<IntersectionBranch> out;
  out.push_back(std::move(tri));
  return out;
}

}  // namespace

std::string to_string(BranchKind k) {
  switch (k) {
    case BranchKind::axis_line: return "axis-line";
    case BranchKind::z_axis: return "z-axis";
    case BranchKind::quadrifolium: return "quadrifolium";
    case BranchKind::trifolium: return "trifolium";
    case BranchKind::general: return "general";
  }
  return "?";
}

std::vector<IntersectionBranch> self_intersection_branches(
    const SurfaceParams& sp, int samples_per_branch, double h_span) {
  if (sp.q < 0.0)
    throw std::invalid_argument("self_intersection_branches: needs q >= 0");
  if (samples_per_branch < 8) samples_per_branch = 8;
  if (sp.n == 2) return n2_branches(sp, samples_per_branch, h_span);
  if (sp.n == 3 && sp.t == 0.0) return n3_halfway_branches(sp, samples_per_branch);
  return {};
}

MonotonicityWitness monotonicity_witness(double t, double q, int samples) {
  if (!(t > 0.0) || q < 0.0 || q * t >= 1.0)
    throw std::invalid_argument("monotonicity_witness: needs 0 < t, 0 <= q, qt < 1");
  if (samples < 3) samples = 3;
  const double qt = q * t, p = 1.0 - qt;
  const double p2 = p * p, p3 = p2 * p, p4 = p2 * p2;
  const double t2 = t * t, t3 = t2 * t, t4 = t2 * t2;
  const double qt2 = qt * qt, qt3 = qt2 * qt;

  auto der = [&](double S) {
    const double S2 = S * S, S3 = S2 * S, S4 = S2 * S2, S5 = S4 * S;
    return qt * S2 * t4 +
           8.0 * p4 * (2.0 * S3 + qt * (1.0 + qt2) - 3.0 * qt * S2) +
           p * S * t3 *
               (3.0 * S3 + 4.0 * qt + S * (2.0 + 4.0 * qt2) - 6.0 * qt * S2) +
           2.0 * p2 * t2 *
               (4.0 * S5 + 4.0 * S * (1.0 + 3.0 * qt2) + S3 * (6.0 + 4.0 * qt2) +
                2.0 * (qt - qt3) - 13.0 * qt * S2 - 8.0 * qt * S4) +
           4.0 * p3 * t *
               (2.0 + 2.0 * qt2 + 7.0 * S4 + S2 * (1.0 + 7.0 * qt2) -
                14.0 * qt * S3);
  };

  MonotonicityWitness w;
  w.min_derivative = std::numeric_limits<double>::infinity();
  const double lo = std::max(0.0, qt);
  for (int i = 0; i < samples; ++i) {
    const double S = lo + (1.0 - lo) * i / (samples - 1);
    const double d = der(S);
    if (d < w.min_derivative) {
      w.min_derivative = d;
      w.arg_s = S;
    }
  }

  if (q == 0.0 && t <= 1.0) {
    w.g_margin = std::numeric_limits<double>::infinity();
    const double k_lo = std::tan(0.5 * std::asin(std::min(t, 1.0)));
    for (int i = 0; i < samples; ++i) {
      const double k = k_lo + (1.0 - k_lo) * i / (samples - 1);
      const double e = t * k - 1.0 + k * k;
      const double m = e * e - 2.0 * t * k * (t * k - 2.0);
      w.g_margin = std::min(w.g_margin, m);
    }
    w.pass = w.min_derivative > 0.0 && w.g_margin > 0.0;
  } else {
    w.g_margin = std::numeric_limits<double>::infinity();
    w.pass = w.min_derivative > 0.0;
  }
  return w;
}

IntersectionCloud mesh_self_intersections(const MeshFrame& mesh) {
  IntersectionCloud cloud;
  TriangleBvh bvh(mesh.vertices, mesh.triangles);
  const auto pairs = bvh.self_pairs();

  auto shares_vertex = [&](std::uint32_t a, std::uint32_t b) {
    for (auto va : mesh.triangles[a])
      for (auto vb : mesh.triangles[b])
        if (va == vb) return true;
    return false;
  };

  for (const auto& [a, b] : pairs) {
    if (shares_vertex(a, b)) continue;
    ++cloud.pairs_tested;
    const auto& ta = mesh.triangles[a];
    const auto& tb = mesh.triangles[b];
    Vec3 s0, s1;
    if (tri_tri_segment({mesh.vertices[ta[0]], mesh.vertices[ta[1]], mesh.vertices[ta[2]]},
                        {mesh.vertices[tb[0]], mesh.vertices[tb[1]], mesh.vertices[tb[2]]},
                        s0, s1)) {
      auto less = [](const Vec3& u, const Vec3& v) {
        if (u.x != v.x) return u.x < v.x;
        if (u.y != v.y) return u.y < v.y;
        return u.z < v.z;
      };
      if (less(s1, s0)) std::swap(s0, s1);
      cloud.segments.push_back({s0, s1});
      cloud.total_length += (s1 - s0).norm();
    }
  }
  std::sort(cloud.segments.begin(), cloud.segments.end(),
            [](const std::array<Vec3, 2>& u, const std::array<Vec3, 2>& v) {
              auto key = [](const std::array<Vec3, 2>& s) {
                return std::array<double, 6>{s[0].x, s[0].y, s[0].z,
                                             s[1].x, s[1].y, s[1].z};
              };
              return key(u) < key(v);
            });
  return cloud;
}

int preimage_count(const SurfaceParams& sp, const Vec3& pt, double h_span,
                   int grid, double tol) {
  if (grid < 8) grid = 8;
  const int nh = grid + 1, nphi = 2 * grid;
  std::vector<double> d2(static_cast<std::size_t>(nh) * nphi);
  auto misfit = [&](double h, double phi) {
    return (family_point(sp, h, phi) - pt).norm2();
  };
  for (int i = 0; i < nh; ++i) {
    const double h = -h_span + 2.0 * h_span * i / (nh - 1);
    for (int j = 0; j < nphi; ++j) {
      const double phi = -kPi + 2.0 * kPi * j / nphi;
      d2[static_cast<std::size_t>(i) * nphi + j] = misfit(h, phi);
    }
  }

  const double thresh = 0.09 * (1.0 + pt.norm2());
  std::vector<std::pair<double, double>> found;
  auto merge_in = [&](double h, double phi) {
    phi = wrap_angle(phi);
    for (const auto& f : found)
      if (std::fabs(f.first - h) < 1e-6 &&
          std::fabs(wrap_angle(f.second - phi)) < 1e-6)
        return;
    found.emplace_back(h, phi);
  };

  for (int i = 0; i < nh; ++i)
    for (int j = 0; j < nphi; ++j) {
      const double v = d2[static_cast<std::size_t>(i) * nphi + j];
      if (v > thresh) continue;
      auto at = [&](int ii, int jj) {
        ii = std::clamp(ii, 0, nh - 1);
        jj = (jj % nphi + nphi) % nphi;
        return d2[static_cast<std::size_t>(ii) * nphi + jj];
      };
      if (v > at(i - 1, j) || v > at(i + 1, j) || v > at(i, j - 1) ||
          v > at(i, j + 1))
        continue;

      // Gauss-Newton on the 3-residual, 2-parameter misfit
      double h = -h_span + 2.0 * h_span * i / (nh - 1);
      double phi = -kPi + 2.0 * kPi * j / nphi;
      double mu = 1e-12;
      for (int it = 0; it < 80; ++it) {
        const Vec3 f = family_point(sp, h, phi) - pt;
        const double d = 1e-7;
        const Vec3 jh = (family_point(sp, h + d, phi) - family_point(sp, h - d, phi)) / (2.0 * d);
        const Vec3 jp = (family_point(sp, h, phi + d) - family_point(sp, h, phi - d)) / (2.0 * d);
        const double a11 = dot(jh, jh) + mu, a12 = dot(jh, jp);
        const double a22 = dot(jp, jp) + mu;
        const double g1 = dot(jh, f), g2 = dot(jp, f);
        const double det = a11 * a22 - a12 * a12;
        if (std::fabs(det) < 1e-30) break;
        const double dh = (a22 * g1 - a12 * g2) / det;
        const double dphi = (a11 * g2 - a12 * g1) / det;
        const double step_h = std::clamp(dh, -0.5, 0.5);
        const double step_phi = std::clamp(dphi, -0.5, 0.5);
        if (misfit(h - step_h, phi - step_phi) <= f.norm2()) {
          h -= step_h;
          phi -= step_phi;
          mu = std::max(mu * 0.25, 1e-14);
        } else {
          mu = std::min(mu * 16.0, 1e6);
        }
        if (f.norm2() < 1e-28) break;
      }
      if (std::sqrt(misfit(h, phi)) < tol && std::fabs(h) <= h_span + 0.5)
        merge_in(h, phi);
    }
  return static_cast<int>(found.size());
}

double max_distance_to_branches(const std::vector<Vec3>& probes,
                                const std::vector<IntersectionBranch>& branches) {
  std::vector<Vec3> anchors;
  for (const auto& br : branches)
    for (const auto& s : br.samples) anchors.push_back(s.point);
  if (anchors.empty())
    return probes.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const auto& p : probes) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& a : anchors) best = std::min(best, (p - a).norm2());
    worst = std::max(worst, best);
  }
  return std::sqrt(worst);
}

}  // namespace everse
