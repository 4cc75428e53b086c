#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "soler/errors.hpp"

namespace soler {

/// Scalar self-interaction f(s) = a s^k + sum_j c_j s^{e_j} with e_j > k,
/// together with g(s) = m - f(s) and the antiderivative G of g, G(0) = 0.
struct NonlinearityModel {
  int k = 1;
  double a = 1.0;
  std::vector<std::pair<int, double>> higher_terms;  // (exponent, coefficient)
  double m = 1.0;

  double f(double s) const {
    double r = a * std::pow(s, k);
    for (const auto& [e, c] : higher_terms) r += c * std::pow(s, e);
    return r;
  }
  double fprime(double s) const {
    double r = a * k * std::pow(s, k - 1);
    for (const auto& [e, c] : higher_terms) r += c * e * std::pow(s, e - 1);
    return r;
  }
  double g(double s) const { return m - f(s); }
  double G(double s) const {
    double r = m * s - a * std::pow(s, k + 1) / (k + 1);
    for (const auto& [e, c] : higher_terms) r -= c * std::pow(s, e + 1) / (e + 1);
    return r;
  }
};

/// Build and self-check a nonlinearity model. G is validated against a
/// numerical antiderivative of g on [0, 1].
inline NonlinearityModel make_model(
    int k, double a = 1.0,
    std::vector<std::pair<int, double>> higher_terms = {}, double m = 1.0) {
  if (k < 1) throw ConfigError("make_model: k must be a positive integer");
  if (a <= 0.0) throw ConfigError("make_model: leading coefficient must be > 0");
  if (m <= 0.0) throw ConfigError("make_model: mass must be positive");
  for (const auto& [e, c] : higher_terms) {
    (void)c;
    if (e <= k) throw ConfigError("make_model: higher-term exponents must exceed k");
  }
  NonlinearityModel model{k, a, std::move(higher_terms), m};
  // composite-Simpson antiderivative of g vs closed-form G
  const int n = 2000;
  const double h = 1.0 / n;
  double acc = 0.0;
  for (int i = 0; i < n; i += 2) {
    const double s0 = i * h, s1 = (i + 1) * h, s2 = (i + 2) * h;
    acc += h / 3.0 * (model.g(s0) + 4.0 * model.g(s1) + model.g(s2));
    const double err = std::abs(acc - model.G(s2));
    if (err > 1e-10 * std::max(1.0, std::abs(acc)))
      throw ConfigError("make_model: G disagrees with the antiderivative of g");
  }
  return model;
}

}  // namespace soler
