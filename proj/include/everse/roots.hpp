#pragma once

#include <complex>
#include <vector>

namespace everse {

// Dense univariate polynomial, coefficients in ascending order of degree.
struct UniPoly {
  std::vector<double> c;

  UniPoly() = default;
  explicit UniPoly(std::vector<double> coeffs) : c(std::move(coeffs)) {}

  // strips trailing coefficients smaller than tol * max|c|
  void trim(double tol = 0.0);
  int degree() const { return static_cast<int>(c.size()) - 1; }
  double eval(double x) const;
  std::complex<double> eval(std::complex<double> x) const;
  UniPoly derivative() const;
  double max_abs_coeff() const;
};

// Roots via the companion matrix, each polished by one Newton step.
std::vector<std::complex<double>> poly_roots(const UniPoly& p);

// Real roots only; a root counts as real when |Im| <= imag_tol * (1 + |Re|).
std::vector<double> real_roots(const UniPoly& p, double imag_tol = 1e-9);

}  // namespace everse
