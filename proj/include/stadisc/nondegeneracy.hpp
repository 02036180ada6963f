#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "stadisc/model.hpp"

namespace stadisc {

/// Relative singular-value threshold shared by every rank decision:
/// a matrix counts as invertible iff sigma_min > tol * max(1, sigma_max).
inline constexpr double kRankTol = 1e-9;

struct SearchConfig {
  std::uint64_t seed = 0;
  int budget = 10000;      // random samples after the deterministic lattice
  double tol = kRankTol;
  int sign_pattern_cap = 4096;
};

double sigma_min(const Eigen::MatrixXcd& m);
double sigma_max(const Eigen::MatrixXcd& m);
bool invertible(const Eigen::MatrixXcd& m, double tol = kRankTol);
int rank_of(const Eigen::MatrixXd& m, double tol = kRankTol);
int rank_of(const Eigen::MatrixXcd& m, double tol = kRankTol);

/// Conditions (a) and (b): the Levi matrices are linearly independent over
/// the reals, and their kernels intersect trivially.
struct BeloshapkaVerdict {
  bool cond_a = false;
  bool cond_b = false;
  double sigma_min_a = 0.0;  // smallest singular value behind each decision
  double sigma_min_b = 0.0;
};
BeloshapkaVerdict check_beloshapka(const HermitianModel& model,
                                   double tol = kRankTol);

/// Search result for condition (t): a real combination sum c_j A_j that is
/// invertible.  exactly_singular is set when the determinant is the zero
/// polynomial (decidable for n <= 2), in which case no search is attempted.
struct CombinationSearchResult {
  std::optional<Eigen::VectorXd> c;  // unit norm on success
  bool exactly_singular = false;
  double sigma_min = 0.0;
};
CombinationSearchResult find_invertible_combination(
    const HermitianModel& model, const SearchConfig& search = {});

/// D = [A_1 V ... A_d V] and B = conj(D)^T A^{-1} D for A = sum c_j A_j.
struct WitnessMatrices {
  Eigen::MatrixXcd A;  // n x n combination
  Eigen::MatrixXcd D;  // n x d
  Eigen::MatrixXcd B;  // d x d
};
WitnessMatrices witness_matrices(const HermitianModel& model,
                                 const Eigen::VectorXd& c,
                                 const Eigen::VectorXcd& V);

/// Search result for conditions (d) / (f).  exactly_impossible is set when
/// the codimension bound rules the condition out (d > 2n resp. d > n).
struct WitnessSearchResult {
  std::optional<Eigen::VectorXcd> V;  // unit norm on success
  Eigen::MatrixXcd B;
  bool exactly_impossible = false;
  double sigma_min = 0.0;  // of Re B (condition d) resp. min(Re B, B) (f)
};
WitnessSearchResult certify_D_nondegenerate(const HermitianModel& model,
                                            const Eigen::VectorXd& c,
                                            const SearchConfig& search = {});
WitnessSearchResult certify_fully_nondegenerate(const HermitianModel& model,
                                                const Eigen::VectorXd& c,
                                                const SearchConfig& search = {});

/// Per-witness strict pseudoconvexity: sum c_j A_j positive definite.
bool check_strict_pseudoconvexity_witness(const HermitianModel& model,
                                          const Eigen::VectorXd& c,
                                          double tol = kRankTol);

/// Totally-real test for the conormal bundle at (0, sum c_j dr_j(0)):
/// assemble a real basis of the tangent space T and require that [T | iT]
/// has full rank 4N.
bool conormal_totally_real_check(const HermitianModel& model,
                                 const Eigen::VectorXd& c,
                                 double tol = kRankTol);

/// Aggregate report over all conditions, with explicit certificates.
struct NondegeneracyReport {
  bool cond_a = false, cond_b = false, cond_t = false, cond_f = false,
       cond_d = false;
  bool t_exactly_singular = false;
  bool d_exactly_impossible = false;
  bool f_exactly_impossible = false;
  std::optional<Eigen::VectorXd> c_cert;
  std::optional<Eigen::VectorXcd> V_cert;    // witness for (d)
  std::optional<Eigen::VectorXcd> V_f_cert;  // witness for (f), when found
  Eigen::MatrixXcd A_comb;
  Eigen::MatrixXcd D_matrix;
  Eigen::MatrixXcd B_matrix;
  bool strictly_pseudoconvex_witness = false;
  bool conormal_totally_real = false;
  std::map<std::string, double> sigma_min_values;
};
NondegeneracyReport classify(const HermitianModel& model,
                             const SearchConfig& search = {});

}  // namespace stadisc
