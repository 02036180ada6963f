#pragma once

#include <Eigen/Dense>
#include <vector>

#include "stadisc/disc.hpp"
#include "stadisc/model.hpp"
#include "stadisc/nondegeneracy.hpp"
#include "stadisc/poly.hpp"

namespace stadisc {

/// Boundary matrix of the linearized problem at a canonical lift, with
/// unknown ordering (g, h, htilde, gtilde).  Block rows:
///   [ (1/2) I_d   B(zeta)      0        ]
///   [ 0           G2(zeta)     C(zeta)  ]
///   [ 0           0            -i zeta I_d ]
/// where G2 = [[zeta A^T, I_n], [i zeta A^T, -i I_n]], B = (1-zeta) B1 and
/// C carries the factor (1-zeta) V through h0.
struct GAssembly {
  int n = 0, d = 0;
  Eigen::MatrixXcd A;   // sum c_j A_j (invertible)
  Eigen::MatrixXcd D;   // n x d, columns A_j V
  Eigen::MatrixXcd B1;  // d x 2n constant part of B
  Eigen::VectorXcd V;
  Eigen::VectorXd c;

  int N() const { return n + d; }
  Eigen::MatrixXcd operator()(Complex zeta) const;
};

GAssembly assemble_G(const HermitianModel& model, const Eigen::VectorXcd& V,
                     const Eigen::VectorXd& c, double tol = kRankTol);

/// Boundary residual max_k |2 Re[conj(G(zeta_k)) f(zeta_k)]|_inf of a disc
/// against the linearized system.
double kernel_residual(const GAssembly& G, const PolyDisc& f, int samples = 0);

enum class KernelMethod { ClosedForm, Numeric, Both };

/// One tangent-space element in closed form: parameters (a, y, ytilde) with
/// derived degree-one inner polynomials; the htilde block is recovered by a
/// least-squares solve against the boundary system.
struct KernelElement {
  Eigen::VectorXcd a;       // C^d
  Eigen::VectorXd y, ytilde;  // R^n each
  Eigen::VectorXcd X, Y;    // derived, C^n
  PolyDisc disc;            // dim 2N, ordering (g, h, htilde, gtilde)
  double residual = 0.0;
};

KernelElement closed_form_element(const GAssembly& G, const Eigen::VectorXcd& a,
                                  const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& ytilde);

struct KernelBasis {
  std::vector<PolyDisc> elements;       // dim 2N each
  std::vector<KernelElement> closed_form;  // populated for ClosedForm/Both
  Eigen::VectorXd singular_values;      // of the Galerkin system (Numeric)
  int expected_dim = 0;                 // 2N
  double max_residual = 0.0;
  std::vector<double> principal_angles_rad;  // numeric vs closed-form (Both)
  std::vector<int> dimension_ladder;    // kernel dim as svd tol sweeps
};

/// Kernel of 2 Re[conj(G(zeta)) . ] on discs of the form (1-zeta) p(zeta)
/// with deg p <= 1.  Numeric route: Galerkin collocation at oversampled
/// boundary points, kernel by SVD.  Closed form: the 2N-parameter family
/// enumerated over a real basis of (a, y, ytilde).
KernelBasis tangent_kernel(const GAssembly& G,
                           KernelMethod method = KernelMethod::Both,
                           double tol = kRankTol);

/// Jet of a polynomial disc at zeta = 1: value and derivatives up to the
/// given order, stacked.
Eigen::VectorXcd jet_map(const PolyDisc& disc, int order);

struct JetCertificate {
  int order = 1;
  int kernel_dim = 0;
  Eigen::MatrixXd jet_matrix;  // realified jets of a kernel basis
  int rank = 0;
  bool injective = false;
  double sigma_min = 0.0;
  std::vector<int> dimension_ladder;
};

/// Rank certificate for the jet map restricted to the tangent kernel.
/// Order 1 uses the pinned space (1-zeta)(deg <= 1); order 2 uses the
/// unpinned degree <= 2 ansatz of the larger stationary family.
JetCertificate certify_jet_injectivity(const GAssembly& G, int order,
                                       double tol = kRankTol);

struct BirkhoffReport {
  double theta_identity_error = 0.0;  // coefficient-wise, expected 0
  int block_kernel_dim = 0;           // expected 4
  double max_high_degree_coeff = 0.0; // expected ~0 beyond degree 1
  bool pass = false;
};

/// Verifies the explicit factorization of the per-component reflection
/// system: the constant matrix identity for Theta = [[1,-1],[i,i]] and the
/// degree profile of the Galerkin kernel of 2 Re[conj(R(zeta)) u] with
/// R = [[zeta, 1], [i zeta, -i]].
BirkhoffReport birkhoff_check(int deg_max = 8, double tol = kRankTol);

}  // namespace stadisc
