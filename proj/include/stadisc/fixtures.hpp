#pragma once

#include "stadisc/model.hpp"

namespace stadisc::fixtures {

/// Re w = |z|^2 in C^2 (n = d = 1).
inline HermitianModel sphere() {
  HermitianModel m;
  m.n = 1;
  m.d = 1;
  m.A.push_back(Eigen::MatrixXcd::Identity(1, 1));
  return m;
}

/// Re w_1 = |z_1|^2, Re w_2 = |z_2|^2, Re w_3 = z_1 conj(z_2) + conj(z_1) z_2
/// in C^5 (n = 2, d = 3).
inline HermitianModel q1() {
  HermitianModel m;
  m.n = 2;
  m.d = 3;
  Eigen::MatrixXcd a1 = Eigen::MatrixXcd::Zero(2, 2);
  a1(0, 0) = 1;
  Eigen::MatrixXcd a2 = Eigen::MatrixXcd::Zero(2, 2);
  a2(1, 1) = 1;
  Eigen::MatrixXcd a3 = Eigen::MatrixXcd::Zero(2, 2);
  a3(0, 1) = 1;
  a3(1, 0) = 1;
  m.A = {a1, a2, a3};
  return m;
}

/// Re w_1 = |z_1|^2 - |z_2|^2, Re w_2 = |z_3|^2 in C^5 (n = 3, d = 2).
inline HermitianModel q2() {
  HermitianModel m;
  m.n = 3;
  m.d = 2;
  Eigen::MatrixXcd a1 = Eigen::MatrixXcd::Zero(3, 3);
  a1(0, 0) = 1;
  a1(1, 1) = -1;
  Eigen::MatrixXcd a2 = Eigen::MatrixXcd::Zero(3, 3);
  a2(2, 2) = 1;
  m.A = {a1, a2};
  return m;
}

/// Re w_1 = Re w_2 = |z|^2 in C^3 (n = 1, d = 2): satisfies (t) but the
/// rank-one B matrix rules out (d) for every witness.
inline HermitianModel twin_sphere() {
  HermitianModel m;
  m.n = 1;
  m.d = 2;
  m.A.push_back(Eigen::MatrixXcd::Identity(1, 1));
  m.A.push_back(Eigen::MatrixXcd::Identity(1, 1));
  return m;
}

}  // namespace stadisc::fixtures
