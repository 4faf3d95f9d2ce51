#pragma once

#include "everse/params.hpp"
#include "everse/schedule.hpp"
#include "everse/vec3.hpp"

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace everse {

enum class EventKind { D0, D1, D2, D01, D21, Tplus, Tminus, Q, Triple };

std::string to_string(EventKind k);

struct EventRecord {
  EventKind kind = EventKind::D0;
  double t = 0.0;
  Vec3 location;                      // open-family coordinates unless noted
  std::vector<ParamPoint> preimages;  // merging parameter points
  std::string note;
};

// One of the four symmetry copies of the triple self-intersection of the
// n=2 member at time t, together with the linear-system solve behind it.
struct TriplePoint {
  double s = 0.0;    // sin(psi), the kept root of the degeneracy quartic
  double psi = 0.0;  // cos(psi) >= 0
  double a = 0.0, b = 0.0;          // solved multipliers
  double w_prime = 0.0, z_prime = 0.0;
  double w = 0.0, z = 0.0;          // w = x^2 + y^2 of the point
  std::array<double, 3> h_roots{};  // heights of the three sheets
  Vec3 point;
};

struct TEventInfo {
  double t_plus = 0.0;   // birth time (negative)
  double t_minus = 0.0;  // death time (positive)
  std::array<Vec3, 2> plus_locations{};   // on x = y
  std::array<Vec3, 2> minus_locations{};  // on x = -y
};

// Printed degeneracy quartic in s = sin(psi) and the structure of its roots.
struct QuarticStructure {
  std::array<double, 5> coeffs{};  // descending
  std::vector<std::complex<double>> roots;
  int real_count = 0;
  double complex_pair_imag = 0.0;        // smallest |Im| over nonreal roots
  double derivative_discriminant = 0.0;  // closed form; negative off |t| = 1
};

// Small analytic models of each transition type over [-1,1]^2 patches.
struct LocalPatch {
  std::string label;
  int grid = 0;                         // points per side
  std::vector<Vec3> points;             // row major, (grid+1)^2
};
std::vector<LocalPatch> local_model(EventKind kind, double t, int grid);

// Self-intersection events of the t=0 member: the quadruple point and the
// four pinch points for n=2, the single triple point for n=3.
std::vector<EventRecord> halfway_events(int n);

// Times and merge locations of the triple-point births and deaths.
TEventInfo t_of_T_events();

// All triple self-intersections of the n=2, q=0 member at time t; empty
// outside 0 < |t| < (sqrt(17)-3)/2.
std::vector<TriplePoint> triple_points(double t);

// Coefficients of the printed degeneracy quartic in s, descending; defined
// for every t (at t = 0 only the s^4 term survives).
std::array<double, 5> degeneracy_quartic_coeffs(double t);

// Root structure of the printed degeneracy quartic; throws std::domain_error
// at t = 0 where the quartic collapses.
QuarticStructure quartic_root_structure(double t);

// Double-point births/deaths: D0/D2 at t = -+1 through the origin, plus the
// pole crossings D01/D21 at |q t| = 1 when q > 0 (location in image space).
std::vector<EventRecord> d_events(int n, double q = 0.0, double alpha = 1.0,
                                  double beta = 1.0 / 25.0);

// Heights h of the n=2 member meeting the given ambient point, with angles
// recovered per root; only residuals below tol survive.
std::vector<ParamPoint> n2_point_preimages(const Vec3& pt, double t, double q,
                                           double tol = 1e-8);

// Ordered event list of a full schedule run.  Partial sweeps produce the
// covered subset plus a warning note on the first record; reversed schedules
// mirror birth and death kinds.
std::vector<EventRecord> event_timeline(const StageSchedule& sched);

}  // namespace everse
