#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "crosswitch/fields.hpp"
#include "crosswitch/polynomial.hpp"

namespace testsupport {

using namespace crosswitch;

inline Polynomial poly(std::initializer_list<Monomial> t) { return Polynomial(t); }

inline PiecewiseSystem constant_system(double x1, double x2, double y1, double y2) {
  return {FieldSpec::constant(x1, x2), FieldSpec::constant(y1, y2)};
}

inline double sgn_of(std::mt19937_64& rng) { return std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0; }

// Random polynomial of total degree <= deg, coefficients in [-1, 1]. When
// c0_min > 0 the constant term is pushed to magnitude [c0_min, 2].
inline Polynomial random_poly(std::mt19937_64& rng, int deg, double c0_min = 0.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Monomial> t;
  for (int i = 0; i <= deg; ++i) {
    for (int j = 0; i + j <= deg; ++j) {
      double c = u(rng);
      if (i == 0 && j == 0 && c0_min > 0) c = sgn_of(rng) * std::uniform_real_distribution<double>(c0_min, 2.0)(rng);
      t.push_back({c, i, j});
    }
  }
  return Polynomial(std::move(t));
}

inline FieldSpec random_field(std::mt19937_64& rng, int deg, double c0_min = 0.0) {
  return {random_poly(rng, deg, c0_min), random_poly(rng, deg, c0_min)};
}

inline PiecewiseSystem random_system(std::mt19937_64& rng, int deg, double c0_min = 0.0) {
  return {random_field(rng, deg, c0_min), random_field(rng, deg, c0_min)};
}

// Directory of golden inputs, injected by the build.
inline std::string data_path(const std::string& name) { return std::string(CROSSWITCH_TEST_DATA) + "/" + name; }

}  // namespace testsupport
