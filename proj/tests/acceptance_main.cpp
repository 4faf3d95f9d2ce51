// Acceptance gate: one line per criterion, exit code counts the failures.

#include "everse/algebra.hpp"
#include "everse/events.hpp"
#include "everse/intersections.hpp"
#include "everse/mesh.hpp"
#include "everse/mesh_io.hpp"
#include "everse/schedule.hpp"
#include "everse/smoothness.hpp"
#include "everse/surface.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace everse;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.141592653589793;

// pinned tolerances
constexpr double kTolSextic = 1e-8;
constexpr double kTolQuintic = 1e-9;
constexpr double kTolResultant = 1e-8;
constexpr double kTolPreimage = 1e-8;
constexpr double kTolTTime = 1e-10;
constexpr double kTolTLocation = 1e-8;
constexpr double kTolTripleAmbient = 1e-7;
constexpr double kTolQuarticCollapse = 1e-12;
constexpr double kTolFiniteDiff = 1e-6;
constexpr double kTolSphereRadius = 1e-10;
constexpr double kTolVolumeMatch = 0.01;
constexpr double kMeshSecondsAllowance = 300.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof buf, pattern, args);
  va_end(args);
  return buf;
}

double rel_gap(double a, double b) {
  const double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
  return std::fabs(a - b) / scale;
}

// central-difference Jacobian determinant of a 3d map
double fd_det(const std::function<Vec3(const Vec3&)>& f, const Vec3& r,
              double d = 1e-5) {
  Vec3 col[3];
  const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (int k = 0; k < 3; ++k)
    col[k] = (f(r + d * axes[k]) - f(r - d * axes[k])) / (2.0 * d);
  return col[0].dot(col[1].cross(col[2]));
}

Vec3 fd_normal(const SurfaceParams& sp, double h, double phi, double d = 1e-6) {
  const Vec3 rh =
      (family_point(sp, h + d, phi) - family_point(sp, h - d, phi)) / (2.0 * d);
  const Vec3 rp =
      (family_point(sp, h, phi + d) - family_point(sp, h, phi - d)) / (2.0 * d);
  return rh.cross(rp);
}

std::string slurp(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return "<unreadable:" + path.string() + ">";
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// --- criterion 1: implicit residual suites -------------------------------

Outcome implicit_residuals() {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> uh(-3.0, 3.0), uphi(-kPi, kPi);

  auto sweep = [&](const SurfaceParams& sp,
                   const std::function<ResidualReport(const Vec3&)>& residual) {
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Vec3 pt = family_point(sp, uh(rng), uphi(rng));
      worst = std::max(worst, residual(pt).relative);
    }
    return worst;
  };

  const double sextic = sweep(SurfaceParams::halfway(2), [](const Vec3& pt) {
    return sextic_residual_halfway(pt);
  });
  const double quintic = sweep(SurfaceParams::halfway(3), [](const Vec3& pt) {
    return boy_quintic_residual(pt);
  });
  const double res_a = sweep(SurfaceParams::coupled(2, 1.5, 0.0), [](const Vec3& pt) {
    return sextic_residual_t(pt, 1.5, 0.0);
  });
  const double res_b =
      sweep(SurfaceParams::coupled(2, 0.5, 1.0 / 3.0), [](const Vec3& pt) {
        return sextic_residual_t(pt, 0.5, 1.0 / 3.0);
      });

  Outcome out;
  out.pass = sextic < kTolSextic && quintic < kTolQuintic &&
             res_a < kTolResultant && res_b < kTolResultant;
  out.detail =
      fmt("1000-point max rel: sextic %.2e (tol %.0e), quintic %.2e (tol %.0e), "
          "resultant %.2e / %.2e (tol %.0e)",
          sextic, kTolSextic, quintic, kTolQuintic, res_a, res_b, kTolResultant);
  return out;
}

// --- criterion 2: event coordinates --------------------------------------

Outcome event_coordinates() {
  const auto flat = SurfaceParams::halfway(2);
  const double r2 = std::sqrt(2.0);

  bool d1_ok = true;
  int d1_min = 99;
  for (const Vec3 pt : {Vec3{r2, 0, 0}, Vec3{-r2, 0, 0}, Vec3{0, r2, 0}, Vec3{0, -r2, 0}}) {
    const int count = preimage_count(flat, pt, 3.0, 160, kTolPreimage);
    d1_min = std::min(d1_min, count);
    d1_ok = d1_ok && count >= 2;
  }
  const int q_count = preimage_count(flat, {0, 0, 0}, 3.0, 160, kTolPreimage);

  // quartic values at s = +-1 factor as (t -+ 2)(t -+ 1)^3 (t^2 -+ 3t - 2),
  // so the death time is the positive root of the last minus-side factor
  auto at_minus_one = [](double t) {
    const auto c = degeneracy_quartic_coeffs(t);
    return c[0] - c[1] + c[2] - c[3] + c[4];
  };
  double factor_gap = 0.0;
  for (double t : {0.1, 0.25, 0.4, 0.55, 0.7}) {
    const auto c = degeneracy_quartic_coeffs(t);
    const double at_plus_one = c[0] + c[1] + c[2] + c[3] + c[4];
    factor_gap = std::max(
        factor_gap,
        rel_gap(at_plus_one,
                (t - 2.0) * std::pow(t - 1.0, 3) * (t * t - 3.0 * t - 2.0)));
    factor_gap = std::max(
        factor_gap,
        rel_gap(at_minus_one(t),
                (t + 2.0) * std::pow(t + 1.0, 3) * (t * t + 3.0 * t - 2.0)));
  }
  const double t_expected = (std::sqrt(17.0) - 3.0) / 2.0;
  const auto info = t_of_T_events();
  const double time_gap = std::max(std::fabs(info.t_minus - t_expected),
                                   std::fabs(info.t_plus + t_expected));
  const double root_residual = std::fabs(at_minus_one(t_expected));

  const double x_expected = (5.0 - std::sqrt(17.0)) / (2.0 * std::sqrt(2.0));
  double loc_gap = 0.0;
  for (const auto& loc : info.plus_locations) {
    loc_gap = std::max(loc_gap, std::fabs(std::fabs(loc.x) - x_expected));
    loc_gap = std::max(loc_gap, std::fabs(loc.x - loc.y));  // on x = y
    loc_gap = std::max(loc_gap, std::fabs(loc.z));
  }
  for (const auto& loc : info.minus_locations) {
    loc_gap = std::max(loc_gap, std::fabs(std::fabs(loc.x) - x_expected));
    loc_gap = std::max(loc_gap, std::fabs(loc.x + loc.y));  // on x = -y
    loc_gap = std::max(loc_gap, std::fabs(loc.z));
  }

  Outcome out;
  out.pass = d1_ok && q_count == 4 && factor_gap < 1e-12 &&
             time_gap < kTolTTime && root_residual < kTolTTime &&
             loc_gap < kTolTLocation;
  out.detail = fmt("pinch preimages >= 2 (min %d), origin preimages %d (want 4), "
                   "birth/death time gap %.2e (tol %.0e), location gap %.2e (tol %.0e)",
                   d1_min, q_count, time_gap, kTolTTime, loc_gap, kTolTLocation);
  return out;
}

// --- criterion 3: triple points vs brute force ---------------------------

Outcome triple_point_oracles() {
  double worst_ambient = 0.0;
  bool counts_ok = true;
  for (double t : {0.2, 0.4, 0.55}) {
    const auto sp = SurfaceParams::coupled(2, t, 0.0);
    const auto points = triple_points(t);
    if (points.size() != 4) counts_ok = false;
    for (const auto& tp : points) {
      const auto pre = n2_point_preimages(tp.point, t, 0.0);
      if (pre.size() != 3) {
        counts_ok = false;
        continue;
      }
      for (const auto& p : pre) {
        const Vec3 img = family_point(sp, p.u, p.phi);
        worst_ambient = std::max(worst_ambient, (img - tp.point).norm());
      }
    }
  }

  // at t = 0 only the quartic's s^4 term survives (scaled by -4)
  const auto c0 = degeneracy_quartic_coeffs(0.0);
  double collapse = std::fabs(c0[0] / 4.0 + 1.0);
  for (int k = 1; k < 5; ++k)
    collapse = std::max(collapse, std::fabs(c0[k] / 4.0));

  double max_disc = -1e300;
  for (int k = 1; k <= 20; ++k) {
    const double t = 0.048 * k;  // inside (0,1), clear of the degenerate t = 1
    max_disc = std::max(max_disc, quartic_root_structure(t).derivative_discriminant);
  }

  Outcome out;
  out.pass = counts_ok && worst_ambient < kTolTripleAmbient &&
             collapse < kTolQuarticCollapse && max_disc < 0.0;
  out.detail = fmt("3 preimages each, max ambient gap %.2e (tol %.0e); "
                   "t=0 collapse defect %.2e (tol %.0e); max discriminant %.3g (want < 0)",
                   worst_ambient, kTolTripleAmbient, collapse,
                   kTolQuarticCollapse, max_disc);
  return out;
}

// --- criterion 4: smoothness suite ----------------------------------------

Outcome smoothness_suite() {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> uh(-3.0, 3.0), uphi(-kPi, kPi),
      ut(-1.6, 1.6), uq(0.0, 0.6), uc(-2.0, 2.0);

  double worst_normal = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int n = 2 + i % 3;
    const auto sp = SurfaceParams::coupled(n, ut(rng), uq(rng));
    const double h = uh(rng), phi = uphi(rng);
    const Vec3 a = normal_vector(sp, h, phi);
    const Vec3 b = fd_normal(sp, h, phi);
    worst_normal = std::max(worst_normal, (a - b).norm() / (1.0 + a.norm()));
  }

  const StageParams st = StageParams::closed_wormhole(1.5);
  double worst_damp = 0.0, worst_inv = 0.0;
  for (int i = 0; i < 500; ++i) {
    const Vec3 r{uc(rng), uc(rng), uc(rng)};
    worst_damp = std::max(
        worst_damp,
        rel_gap(jacobian_damp(r, st),
                fd_det([&](const Vec3& v) { return damp_map(v, st); }, r)));
    const Vec3 rp{uc(rng), uc(rng), uc(rng)};
    worst_inv = std::max(
        worst_inv,
        rel_gap(jacobian_inversion(rp, st),
                fd_det([&](const Vec3& v) { return inversion_map(v, st); }, rp)));
  }

  double min_margin = 1e300;
  for (const auto& frame : schedule_frames(default_schedule()))
    min_margin = std::min(min_margin, smoothness_margin(frame.stage.shape).margin);

  // flat ruling: zero margin, and the mesher must refuse it
  StageParams flat;
  flat.shape = SurfaceParams{2, 1.0, 0.0, 0.0};
  const bool flat_margin = !(smoothness_margin(flat.shape).margin > 0.0);
  bool refused = false;
  try {
    tessellate(flat, 8, 12);
  } catch (const MeshRefusal&) {
    refused = true;
  }

  Outcome out;
  out.pass = worst_normal < kTolFiniteDiff && worst_damp < kTolFiniteDiff &&
             worst_inv < kTolFiniteDiff && min_margin > 0.0 && flat_margin &&
             refused;
  out.detail = fmt("fd rel: normal %.2e, damp %.2e, inversion %.2e (tol %.0e); "
                   "min frame margin %.3g; flat ruling refused: %s",
                   worst_normal, worst_damp, worst_inv, kTolFiniteDiff,
                   min_margin, refused && flat_margin ? "yes" : "NO");
  return out;
}

// --- criterion 5: sphere endpoints ----------------------------------------

Outcome sphere_endpoints() {
  const auto frames = schedule_frames(default_schedule());
  const auto& first = frames.front();
  const auto& last = frames.back();

  double radius_gap = 0.0;
  double volume[2] = {0.0, 0.0};
  bool lam_zero = true;
  int side = 0;
  for (const auto* fp : {&first, &last}) {
    lam_zero = lam_zero && fp->stage.lam == 0.0;
    const double r = std::pow(fp->stage.eta, fp->stage.kappa()) *
                     std::pow(std::fabs(fp->stage.shape.t),
                              -1.0 / fp->stage.shape.n);
    const auto mesh = tessellate(fp->stage, 128, 402);
    for (const auto& v : mesh.vertices)
      radius_gap = std::max(radius_gap, std::fabs(v.norm() - r));
    volume[side++] = signed_volume(mesh);
  }

  const bool opposite = volume[0] * volume[1] < 0.0;
  const double vol_gap = std::fabs(std::fabs(volume[0]) - std::fabs(volume[1])) /
                         std::max(std::fabs(volume[0]), std::fabs(volume[1]));

  Outcome out;
  out.pass = lam_zero && radius_gap < kTolSphereRadius && opposite &&
             vol_gap < kTolVolumeMatch;
  out.detail = fmt("max radius gap %.2e (tol %.0e); volumes %+.6f / %+.6f "
                   "(opposite: %s, magnitude gap %.2e, tol %.0e)",
                   radius_gap, kTolSphereRadius, volume[0], volume[1],
                   opposite ? "yes" : "NO", vol_gap, kTolVolumeMatch);
  return out;
}

// --- criterion 6: mesh self-intersections vs the analytic curves ----------

Outcome mesh_cross_validation() {
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  };

  auto check_open = [&](const SurfaceParams& sp, std::size_t& segments,
                        double& hausdorff, double& bound) {
    // odd flat members are doubly covered; mesh a fundamental domain,
    // nudged off the fold circle at h = 0
    const double h_lo = sp.n % 2 == 1 ? 3.0 / (2.0 * 199.0) : -3.0;
    const auto mesh = tessellate_open(sp, 200, 628, h_lo, 3.0);
    const auto cloud = mesh_self_intersections(mesh);
    segments = cloud.segments.size();
    std::vector<Vec3> probes;
    probes.reserve(cloud.segments.size() * 3);
    for (const auto& seg : cloud.segments) {
      probes.push_back(seg[0]);
      probes.push_back(seg[1]);
      probes.push_back((seg[0] + seg[1]) * 0.5);
    }
    const auto dense = self_intersection_branches(sp, 4096, 4.0);
    hausdorff = max_distance_to_branches(probes, dense);
    bound = 2.0 * max_edge_length(mesh);
    return segments > 0 && hausdorff <= bound;
  };

  std::size_t seg_n2 = 0, seg_n3 = 0;
  double h_n2 = 0, b_n2 = 0, h_n3 = 0, b_n3 = 0;
  const bool ok_n2 = check_open(SurfaceParams::halfway(2), seg_n2, h_n2, b_n2);
  const bool ok_n3 = check_open(SurfaceParams::halfway(3), seg_n3, h_n3, b_n3);

  const auto sphere = tessellate(StageParams::round_sphere(1.5), 128, 402);
  const auto sphere_cloud = mesh_self_intersections(sphere);
  const bool ok_sphere = sphere_cloud.segments.empty();

  const double secs = elapsed();
  Outcome out;
  out.pass = ok_n2 && ok_n3 && ok_sphere && secs < kMeshSecondsAllowance;
  out.detail = fmt("flat n=2: %zu segs, dist %.4f <= %.4f; n=3: %zu segs, "
                   "dist %.4f <= %.4f; sphere segs %zu (want 0); %.1f s (allow %.0f)",
                   seg_n2, h_n2, b_n2, seg_n3, h_n3, b_n3,
                   sphere_cloud.segments.size(), secs, kMeshSecondsAllowance);
  return out;
}

// --- criterion 7: monotonicity properties ---------------------------------

Outcome monotonicity_properties() {
  double min_der = 1e300;
  for (double t : {0.2, 0.5, 0.8, 1.0, 1.3})
    for (double q : {0.0, 0.2, 1.0 / 3.0}) {
      if (q * t >= 1.0) continue;
      const auto w = monotonicity_witness(t, q);
      min_der = std::min(min_der, w.min_derivative);
    }

  double min_g = 1e300;
  for (double t : {0.2, 0.5, 0.8, 1.0})
    min_g = std::min(min_g, monotonicity_witness(t, 0.0).g_margin);

  bool radial_ok = true;
  for (int n : {2, 3})
    for (double t : {0.8, 1.5, -1.5})
      for (double lam : {0.0, 0.3, 0.7, 1.0})
        for (double omega : {1.0, 2.0}) {
          StageParams st;
          st.shape = SurfaceParams{n, t, 0.0, 1.0 / std::fabs(t)};
          st.xi = 0.0;
          st.alpha = 0.0;
          st.beta = 1.0;
          st.lam = lam;
          st.omega = omega;
          radial_ok = radial_ok && radial_monotonicity_check(st, 512);
        }

  Outcome out;
  out.pass = min_der > 0.0 && min_g > 0.0 && radial_ok;
  out.detail = fmt("min radius derivative %.3g (want > 0); min slope margin %.3g "
                   "(want > 0); radial profiles monotone: %s",
                   min_der, min_g, radial_ok ? "yes" : "NO");
  return out;
}

// --- criterion 8: timeline encoding ----------------------------------------

Outcome timeline_encoding() {
  auto grouped = [](const std::vector<EventRecord>& events) {
    std::vector<std::string> kinds;
    for (const auto& r : events) {
      switch (r.kind) {
        case EventKind::D01: kinds.push_back("D0"); break;
        case EventKind::D21: kinds.push_back("D2"); break;
        default: kinds.push_back(to_string(r.kind));
      }
    }
    return kinds;
  };

  const auto timeline = event_timeline(default_schedule());
  const std::vector<std::string> expected{"D0", "D0", "T+", "T+", "Q",  "D1", "D1",
                                          "D1", "D1", "T-", "T-", "D2", "D2"};
  bool ordered = true;
  for (std::size_t i = 1; i < timeline.size(); ++i)
    ordered = ordered && timeline[i - 1].t <= timeline[i].t;
  const bool base_ok = grouped(timeline) == expected && ordered;

  auto with_extra = default_schedule();
  with_extra.extra_d1 = true;
  with_extra.extra_d1_t = 0.25;
  const auto extended = event_timeline(with_extra);
  const int extra_d1_count = static_cast<int>(
      std::count_if(extended.begin(), extended.end(), [](const EventRecord& r) {
        return r.kind == EventKind::D1;
      }));
  const bool extra_ok = extended.size() == 14 && extra_d1_count == 5;

  Outcome out;
  out.pass = base_ok && extra_ok;
  out.detail = fmt("13 events grouped to 2xD0, 2xT+, Q, 4xD1, 2xT-, 2xD2 in time "
                   "order: %s; configurable extra pinch gives 14 events, 5 D1: %s",
                   base_ok ? "yes" : "NO", extra_ok ? "yes" : "NO");
  return out;
}

// --- criterion 9: byte-identical generation through the tool ---------------

Outcome generation_determinism() {
  const fs::path base = fs::temp_directory_path() / "everse_acceptance";
  const fs::path dir_a = base / "gen_a", dir_b = base / "gen_b";
  fs::remove_all(base);
  fs::create_directories(dir_a);
  fs::create_directories(dir_b);

  auto invoke = [&](const fs::path& dir) {
    const std::string cmd = std::string(EVERSE_CLI_PATH) +
                            " generate --frames 2 --sweep-frames 3 --rows 24"
                            " --cols 48 --jump-limit 2 -o " +
                            dir.string() + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) && WEXITSTATUS(status) == 0;
  };

  const bool ran = invoke(dir_a) && invoke(dir_b);
  int compared = 0;
  bool identical = ran;
  if (ran) {
    for (const auto& entry : fs::directory_iterator(dir_a)) {
      const auto name = entry.path().filename();
      identical = identical && slurp(entry.path()) == slurp(dir_b / name);
      ++compared;
    }
  }
  fs::remove_all(base);

  Outcome out;
  out.pass = ran && identical && compared >= 16;  // 15 frames + manifest
  out.detail = fmt("two runs, %d files compared, byte-identical: %s", compared,
                   out.pass ? "yes" : "NO");
  return out;
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  struct Entry {
    const char* name;
    Outcome (*run)();
  };
  const Entry entries[] = {
      {"implicit residual suites", implicit_residuals},
      {"event coordinates", event_coordinates},
      {"triple-point oracle equivalence", triple_point_oracles},
      {"smoothness suite", smoothness_suite},
      {"sphere endpoints", sphere_endpoints},
      {"mesh cross-validation", mesh_cross_validation},
      {"monotonicity properties", monotonicity_properties},
      {"timeline encoding", timeline_encoding},
      {"generation determinism", generation_determinism},
  };

  int failures = 0;
  int index = 0;
  for (const auto& entry : entries) {
    ++index;
    const Outcome result = entry.run();
    if (!result.pass) ++failures;
    std::printf("criterion %d (%s): %s  [%s]\n", index, entry.name,
                result.pass ? "PASS" : "FAIL", result.detail.c_str());
    std::fflush(stdout);
  }

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%d of 9 criteria pass (%.1f s)\n", 9 - failures, secs);
  return failures;
}
