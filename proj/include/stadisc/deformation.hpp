#pragma once

#include <Eigen/Dense>
#include <vector>

#include "stadisc/disc.hpp"
#include "stadisc/model.hpp"
#include "stadisc/rh.hpp"

namespace stadisc {

struct SolveConfig {
  int deg_max = 16;
  double newton_tol = 1e-11;  // infinity norm target of the boundary system
  int max_iters = 25;
  double damping = 1.0;       // initial step scale, backtracked by halving
  int samples = 0;            // 0 = max(64, 8 deg_max)
};

/// The discretized stationary family around a canonical lift: unknowns are
/// the inner coefficients of (1-zeta) p(zeta) on top of the affine pin
/// (0, 0, 0, c/2) at zeta = 1, plus one real multiplier vector per boundary
/// sample for the conormal fiber condition.
class StationaryFamily {
 public:
  StationaryFamily(const HermitianModel& model, const Eigen::VectorXcd& V,
                   const Eigen::VectorXd& c, const SolveConfig& config);

  int n() const { return model_.n; }
  int d() const { return model_.d; }
  int N() const { return model_.N(); }
  int coeff_params() const { return 4 * N() * cfg_.deg_max; }
  int multiplier_params() const { return model_.d * samples_; }
  int total_params() const { return coeff_params() + multiplier_params(); }

  const SolveConfig& config() const { return cfg_; }
  const std::vector<int>& pin_indices() const { return pin_indices_; }

  /// Unknown vector of the initial canonical lift (exact multipliers c).
  Eigen::VectorXd initial_state() const;

  LiftedDisc lift_from_state(const Eigen::VectorXd& x) const;

  /// Realified 1-jet derivative coordinates (f'(1), ftilde'(1)) in R^{4N}.
  Eigen::VectorXd jet_coordinates(const LiftedDisc& lift) const;
  /// The pinned subset of jet_coordinates, in R^{2N}.
  Eigen::VectorXd pinned_params(const LiftedDisc& lift) const;

  /// Stacked residual: attachment rows, fiber rows, pinning rows.
  Eigen::VectorXd residual(const Eigen::VectorXd& x,
                           const Eigen::VectorXd& target_params) const;
  /// Analytic Jacobian for the quadric part; perturbation contributions to
  /// the fiber rows enter by central finite differences.
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x,
                           const Eigen::VectorXd& target_params) const;

 private:
  HermitianModel model_;
  HermitianModel quadric_;  // model without its perturbation terms
  SolveConfig cfg_;
  Eigen::VectorXcd V_;
  Eigen::VectorXd c_;
  int samples_;
  std::vector<Complex> roots_;
  std::vector<int> pin_indices_;  // 2N realified jet coordinates
};

struct SolvedFamilyPoint {
  LiftedDisc lift;
  Eigen::VectorXd params;  // pinned jet coordinates, R^{2N}
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;
};

/// Damped least-squares Newton on the stationary boundary system with 2N
/// pinned jet coordinates.  Throws on a rank-deficient linearization.
SolvedFamilyPoint newton_solve(const StationaryFamily& family,
                               const Eigen::VectorXd& initial_state,
                               const Eigen::VectorXd& target_params);
SolvedFamilyPoint newton_solve(const HermitianModel& model,
                               const Eigen::VectorXcd& V,
                               const Eigen::VectorXd& c,
                               const Eigen::VectorXd& target_params,
                               const SolveConfig& config = {});

struct CoverageReport {
  int jacobian_rank = 0;
  int required_rank = 0;  // 2N
  double sigma_min = 0.0;
  bool covering_certified = false;
  double psi_max_residual = 0.0;  // conormal membership along theta samples
  int image_affine_dim = 0;
};

/// Rank probe for the boundary-evaluation map: the derivative of
/// params -> (f'(1), ftilde'(1)) restricted to the tangent kernel must have
/// full rank 2N, and every rotated boundary point e^{-i theta}.f(e^{i theta})
/// must satisfy conormal membership.
CoverageReport coverage_probe(const HermitianModel& model,
                              const Eigen::VectorXcd& V,
                              const Eigen::VectorXd& c,
                              const std::vector<SolvedFamilyPoint>& family,
                              double theta_max = 0.1, double tol = kRankTol);

/// Reorder a kernel disc from the boundary-matrix ordering (g, h, ht, gt)
/// to the lift ordering (h, g, ht, gt).
PolyDisc lift_order_from_g_order(const PolyDisc& p, int n, int d);

}  // namespace stadisc
