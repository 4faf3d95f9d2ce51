#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "everse/algebra.hpp"
#include "everse/roots.hpp"
#include "everse/smoothness.hpp"
#include "everse/surface.hpp"

#include <cmath>
#include <random>

using namespace everse;

namespace {
constexpr double kPi = 3.141592653589793;

Vec3 off_surface(const SurfaceParams& sp, double h, double phi, double step) {
  const Vec3 pt = family_point(sp, h, phi);
  Vec3 n = normal_vector(sp, h, phi);
  return pt + n * (step / n.norm());
}

// remainder chain ending in the degree-0 residue; each remainder is
// renormalized so the magnitude only reflects common-root proximity
double euclid_tail(UniPoly a, UniPoly b) {
  a.trim(1e-14);
  b.trim(1e-14);
  while (b.degree() > 0) {
    // a mod b by synthetic long division
    UniPoly r = a;
    const int db = b.degree();
    const double lead = b.c[db];
    for (int k = r.degree(); k >= db; --k) {
      const double f = r.c[k] / lead;
      for (int j = 0; j <= db; ++j) r.c[k - db + j] -= f * b.c[j];
      r.c[k] = 0.0;
    }
    r.c.resize(db);
    const double m = r.max_abs_coeff();
    if (m < 1e-13) return 0.0;  // b divides a: certainly a common factor
    for (double& c : r.c) c /= m;
    r.trim(1e-14);
    a = b;
    b = r;
    if (b.degree() < 0) return 0.0;
  }
  return std::fabs(b.c[0]);
}
}  // namespace

TEST_CASE("roots utilities") {
  // (h-1)(h-2)(h+3) = 6 - 7h + 0h^2 + h^3
  const auto r = real_roots(UniPoly({6.0, -7.0, 0.0, 1.0}));
  REQUIRE(r.size() == 3);
  CHECK(r[0] == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(r[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r[2] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(real_roots(UniPoly({1.0, 0.0, 1.0})).empty());
  const auto rr = real_roots(UniPoly({1.0, -2.0, 1.0}), 1e-6);
  REQUIRE(rr.size() == 2);
  CHECK(rr[0] == doctest::Approx(1.0).epsilon(1e-5));

  UniPoly p({1.0, 2.0, 3e-18});
  p.trim(1e-12);
  CHECK(p.degree() == 1);
}

TEST_CASE("halfway sextic vanishes on the surface and only there") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> uh(-3.0, 3.0), uphi(-kPi, kPi);
  const SurfaceParams sp = SurfaceParams::halfway(2);
  for (int i = 0; i < 500; ++i) {
    const double h = uh(rng), phi = uphi(rng);
    CHECK(sextic_residual_halfway(family_point(sp, h, phi)).relative < 1e-10);
    // near the double curve an offset can graze the other sheet, so judge the
    // largest response over a few depths along the normal ray
    double best = 0.0;
    for (double step : {0.1, 0.2, 0.3})
      best = std::max(
          best, sextic_residual_halfway(off_surface(sp, h, phi, step)).relative);
    CHECK(best > 1e-2);
  }
}

TEST_CASE("halfway sextic term bookkeeping") {
  const ResidualReport r = sextic_residual_halfway(Vec3{1.0, 1.0, 1.0});
  CHECK(r.value == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(r.scale == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(r.relative == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("winding-three quintic vanishes on the surface and only there") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> uh(-3.0, 3.0), uphi(-kPi, kPi);
  const SurfaceParams sp = SurfaceParams::halfway(3);
  for (int i = 0; i < 500; ++i) {
    const double h = uh(rng), phi = uphi(rng);
    CHECK(boy_quintic_residual(family_point(sp, h, phi)).relative < 1e-10);
    double best = 0.0;
    for (double step : {0.1, 0.2, 0.3})
      best = std::max(
          best, boy_quintic_residual(off_surface(sp, h, phi, step)).relative);
    CHECK(best > 1e-3);
  }
  // two points the quintic happens to annihilate
  CHECK(boy_quintic_residual(Vec3{0.0, 1.0, 0.0}).relative ==
        doctest::Approx(0.0));
  CHECK(boy_quintic_residual(Vec3{-1.0, -1.0, -1.0}).relative <= 1e-15);
}

TEST_CASE("Sylvester resultant spot values") {
  CHECK(resultant(UniPoly({-1.0, 0.0, 1.0}), UniPoly({-1.0, 1.0})) ==
        doctest::Approx(0.0));
  CHECK(resultant(UniPoly({1.0, 0.0, 1.0}), UniPoly({-1.0, 1.0})) ==
        doctest::Approx(2.0).epsilon(1e-12));
  // constant arguments
  CHECK(resultant(UniPoly({3.0}), UniPoly({-1.0, 0.0, 1.0})) ==
        doctest::Approx(9.0));
}

TEST_CASE("height elimination pair vanishes at the generating height") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> uh(-3.0, 3.0), uphi(-kPi, kPi);
  for (auto [t, q] :
       {std::pair{1.5, 0.0}, {0.5, 1.0 / 3.0}, {-0.8, 0.2}, {1.5, 2.0 / 3.0}}) {
    const SurfaceParams sp = SurfaceParams::coupled(2, t, q);
    for (int i = 0; i < 100; ++i) {
      const double h = uh(rng), phi = uphi(rng);
      const Vec3 pt = family_point(sp, h, phi);
      const auto [pa, pb] = height_elimination_pair(pt, t, q);
      const double sa =
          pa.max_abs_coeff() * std::pow(1.0 + std::fabs(h), pa.degree());
      const double sb =
          pb.max_abs_coeff() * std::pow(1.0 + std::fabs(h), pb.degree());
      CHECK(std::fabs(pa.eval(h)) < 1e-10 * sa);
      CHECK(std::fabs(pb.eval(h)) < 1e-10 * sb);
      CHECK(sextic_residual_t(pt, t, q).relative < 1e-10);
    }
  }
}

TEST_CASE("membership resultant separates the surface from its offsets") {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> uh(-2.5, 2.5), uphi(-kPi, kPi);
  for (auto [t, q] : {std::pair{1.5, 0.0}, {0.5, 1.0 / 3.0}}) {
    const SurfaceParams sp = SurfaceParams::coupled(2, t, q);
    double on_max = 0.0;
    for (int i = 0; i < 200; ++i) {
      const Vec3 pt = family_point(sp, uh(rng), uphi(rng));
      on_max = std::max(on_max, sextic_residual_t(pt, t, q).relative);
    }
    double off_min = 1e300;
    for (int i = 0; i < 60; ++i) {
      const double h = uh(rng), phi = uphi(rng);
      // the resultant has spurious zero sheets away from the surface, so an
      // offset point is probed at several depths and the largest response
      // along the ray is what must stay away from zero
      double best = 0.0;
      for (double step : {0.1, 0.2, 0.3})
        best = std::max(best,
                        sextic_residual_t(off_surface(sp, h, phi, step), t, q)
                            .relative);
      off_min = std::min(off_min, best);
    }
    CHECK(on_max < 1e-10);
    CHECK(off_min > 1e3 * std::max(on_max, 1e-14));
  }
}

TEST_CASE("resultant vanishes exactly when the Euclid chain bottoms out") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> uc(-1.0, 1.0);
  auto lead = [&rng, &uc]() {
    const double u = uc(rng);
    return (u >= 0 ? 1.0 : -1.0) * (0.3 + std::fabs(u));
  };
  int shared_seen = 0, generic_seen = 0;
  for (int trial = 0; trial < 100; ++trial) {
    UniPoly a, b;
    const bool plant = trial % 2 == 0;
    if (plant) {
      // multiply a shared linear factor into both
      const double r = uc(rng);
      const UniPoly a3({uc(rng), uc(rng), uc(rng), lead()});
      const UniPoly b2({uc(rng), uc(rng), lead()});
      a.c = {-r * a3.c[0], a3.c[0] - r * a3.c[1], a3.c[1] - r * a3.c[2],
             a3.c[2] - r * a3.c[3], a3.c[3]};
      b.c = {-r * b2.c[0], b2.c[0] - r * b2.c[1], b2.c[1] - r * b2.c[2],
             b2.c[2]};
    } else {
      a.c = {uc(rng), uc(rng), uc(rng), uc(rng), lead()};
      b.c = {uc(rng), uc(rng), uc(rng), lead()};
    }
    const double scale = std::pow(a.max_abs_coeff(), 3) *
                         std::pow(b.max_abs_coeff(), 4);
    const bool res_zero = std::fabs(resultant(a, b)) < 1e-8 * scale;
    const bool tail_zero = euclid_tail(a, b) < 1e-8;
    CHECK(res_zero == tail_zero);
    (plant ? shared_seen : generic_seen) += res_zero == plant;
  }
  CHECK(shared_seen == 50);
  CHECK(generic_seen == 50);
}

TEST_CASE("shared-root criterion of the two height quadratics") {
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> uh(-3.0, 3.0), uphi(-kPi, kPi);
  const SurfaceParams sp = SurfaceParams::halfway(2);
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    const Vec3 pt = family_point(sp, uh(rng), uphi(rng));
    if (std::fabs(pt.z) < 0.05) continue;
    const ResidualReport r = quadratic_common_root_residual(pt);
    CHECK_FALSE(r.degenerate);
    CHECK(r.relative < 1e-10);
    ++checked;
  }
  CHECK(checked > 200);
  CHECK(quadratic_common_root_residual(Vec3{0.0, 1.0, 0.0}).degenerate);
  CHECK(quadratic_common_root_residual(Vec3{1.0, 1.0, 1.0}).relative ==
        doctest::Approx(1.0).epsilon(1e-12));
}
