#pragma once

#include <random>

#include "stadisc/model.hpp"

namespace stadisc::testing {

inline Eigen::MatrixXcd random_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = Complex(g(rng), g(rng));
  return 0.5 * (m + m.adjoint());
}

inline HermitianModel random_model(int n, int d, std::mt19937_64& rng) {
  HermitianModel model;
  model.n = n;
  model.d = d;
  for (int j = 0; j < d; ++j) model.A.push_back(random_hermitian(n, rng));
  return model;
}

inline Eigen::VectorXcd random_cvector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v[i] = Complex(g(rng), g(rng));
  return v;
}

inline Eigen::VectorXd random_rvector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

}  // namespace stadisc::testing
