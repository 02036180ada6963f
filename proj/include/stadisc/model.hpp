#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "stadisc/poly.hpp"

namespace stadisc {

/// One real polynomial term coeff * Re(z^a conj(z)^b (Im w)^m) added to a
/// defining function.  Total weight |a| + |b| + 2|m| must be at least 3
/// (z carries weight one, Im w weight two).
struct PerturbationTerm {
  int row = 1;  // 1-based index of the defining function it perturbs
  double coeff = 0.0;
  std::vector<int> z_exp;
  std::vector<int> zbar_exp;
  std::vector<int> imw_exp;

  int weight() const {
    int w = 0;
    for (int e : z_exp) w += e;
    for (int e : zbar_exp) w += e;
    for (int e : imw_exp) w += 2 * e;
    return w;
  }
};

/// Quadric model of a generic submanifold of C^{n+d}:
///   r_j = Re w_j - conj(z)^T A_j z (+ optional higher-weight terms),
/// with A_1..A_d Hermitian n x n.
struct HermitianModel {
  int n = 0;
  int d = 0;
  std::vector<Eigen::MatrixXcd> A;
  std::vector<PerturbationTerm> perturbation;

  int N() const { return n + d; }
  bool is_quadric() const { return perturbation.empty(); }

  void validate() const;
};

/// Values and holomorphic first derivatives of the defining functions.
struct DefiningMapValue {
  Eigen::VectorXd values;        // r_j(point), j = 1..d
  Eigen::MatrixXcd z_gradients;  // d x n, row j = dr_j/dz
  Eigen::MatrixXcd w_gradients;  // d x d, row j = dr_j/dw
};

/// Evaluate r and its holomorphic gradients at point = (z, w) in C^{n+d}.
DefiningMapValue defining_map(const HermitianModel& model,
                              const Eigen::VectorXcd& point);

/// Full conormal gradient rows: d x N matrix whose row j is
/// (dr_j/dz, dr_j/dw).
Eigen::MatrixXcd conormal_gradients(const HermitianModel& model,
                                    const Eigen::VectorXcd& point);

}  // namespace stadisc
