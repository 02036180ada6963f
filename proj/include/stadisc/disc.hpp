#pragma once

#include <Eigen/Dense>
#include <limits>
#include <optional>
#include <vector>

#include "stadisc/model.hpp"
#include "stadisc/nondegeneracy.hpp"
#include "stadisc/poly.hpp"

namespace stadisc {

/// A disc in C^N together with its cotangent lift in C^N.  Component order
/// of the stacked 2N-vector is (h, g, htilde, gtilde) with h in C^n.
struct LiftedDisc {
  PolyDisc base;       // (h, g), dim N
  PolyDisc cotangent;  // (htilde, gtilde), dim N

  Eigen::Index N() const { return base.dim(); }
  PolyDisc stacked() const { return vstack(base, cotangent); }
};

/// Degree-one stationary lift built from a witness V and combination c:
///   h = (1-zeta) V,
///   g_j = 2 (1-zeta) conj(V)^T A_j V,
///   htilde = (1-zeta) conj(V)^T A,   gtilde = (zeta/2) c,
/// with A = sum c_j A_j required invertible.
LiftedDisc canonical_lift(const HermitianModel& model,
                          const Eigen::VectorXcd& V, const Eigen::VectorXd& c,
                          double tol = kRankTol);

/// Max over sampled boundary points of |r(f(zeta))|_inf.
double attachment_residual(const HermitianModel& model, const PolyDisc& disc,
                           int samples = 0);

struct StationarityBreakdown {
  double span_distance = 0.0;       // fiber condition at boundary samples
  double negative_fourier = 0.0;    // holomorphy of the cotangent part
  double zero_section_margin = 0.0; // min |ftilde| / max |ftilde|
  double residual = 0.0;            // max of the two, +inf on zero section
};

/// Residual of the stationarity conditions: at every boundary sample the
/// rotated cotangent value conj(zeta) ftilde(zeta) must lie in the real span
/// of the conormal gradient rows.  Lifts too close to the zero section get
/// residual +inf.
StationarityBreakdown stationarity_check(const HermitianModel& model,
                                         const LiftedDisc& lift,
                                         int samples = 0);
double stationarity_residual(const HermitianModel& model,
                             const LiftedDisc& lift, int samples = 0);

struct DefectResult {
  int defect = 0;
  std::vector<Eigen::VectorXd> kernel_basis;  // orthonormal real d-vectors
  Eigen::VectorXd residual_singular_values;
};

/// Defect of a disc attached to a quadric: kernel dimension of the real
/// linear map c -> negative-frequency Fourier content of c . d_z rho(f(.)).
/// The boundary trace of conj(z) is a Laurent polynomial, so the map is
/// assembled by exact coefficient bookkeeping.
DefectResult compute_defect(const HermitianModel& model, const PolyDisc& disc,
                            double tol = kRankTol);

bool is_nondefective(const HermitianModel& model, const PolyDisc& disc,
                     double tol = kRankTol);

/// Polynomial map germ C^N -> C^N, one list of terms per component.
struct PolyMapTerm {
  Complex coeff;
  std::vector<int> exp;  // length N
};
struct PolyMap {
  int N = 0;
  std::vector<std::vector<PolyMapTerm>> components;  // size N

  static PolyMap identity(int N);
  Eigen::VectorXcd eval(const Eigen::VectorXcd& p) const;
  Eigen::MatrixXcd jacobian(const Eigen::VectorXcd& p) const;
};

struct PushforwardResult {
  LiftedDisc lift;
  double truncation_tail = 0.0;  // discarded Fourier mass
};

/// Pushforward of a lift under F: base part F o f, cotangent part
/// ftilde (dF)^{-1}, both re-projected to polynomials of degree deg_max by
/// discrete Fourier truncation at 4x oversampling.
PushforwardResult pushforward_lift(const PolyMap& F, const LiftedDisc& lift,
                                   int deg_max = 16);

inline int default_boundary_samples(Eigen::Index degree) {
  return std::max<int>(64, 8 * static_cast<int>(std::max<Eigen::Index>(degree, 1)));
}

}  // namespace stadisc
