#include "everse/roots.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace everse {

void UniPoly::trim(double tol) {
  const double cut = tol * max_abs_coeff();
  while (c.size() > 1 && std::fabs(c.back()) <= cut) c.pop_back();
}

double UniPoly::eval(double x) const {
  double r = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
  return r;
}

std::complex<double> UniPoly::eval(std::complex<double> x) const {
  std::complex<double> r = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
  return r;
}

UniPoly UniPoly::derivative() const {
  UniPoly d;
  for (std::size_t k = 1; k < c.size(); ++k) d.c.push_back(k * c[k]);
  if (d.c.empty()) d.c.push_back(0.0);
  return d;
}

double UniPoly::max_abs_coeff() const {
  double m = 0.0;
  for (double v : c) m = std::max(m, std::fabs(v));
  return m;
}

std::vector<std::complex<double>> poly_roots(const UniPoly& p) {
  UniPoly q = p;
  q.trim(1e-14);
  const int deg = q.degree();
  if (deg < 1) return {};

  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
  const double lead = q.c[deg];
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -q.c[i] / lead;
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;

  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  const UniPoly dq = q.derivative();
  std::vector<std::complex<double>> out;
  out.reserve(deg);
  for (int i = 0; i < deg; ++i) {
    std::complex<double> r = es.eigenvalues()[i];
    const std::complex<double> f = q.eval(r), df = dq.eval(r);
    if (std::abs(df) > 1e-30) {
      const std::complex<double> step = f / df;
      if (std::abs(step) < 0.1 * (1.0 + std::abs(r))) r -= step;
    }
    out.push_back(r);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

std::vector<double> real_roots(const UniPoly& p, double imag_tol) {
  std::vector<double> out;
  for (const auto& r : poly_roots(p))
    if (std::fabs(r.imag()) <= imag_tol * (1.0 + std::fabs(r.real())))
      out.push_back(r.real());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace everse
