#include "stadisc/disc.hpp"

#include <cmath>

namespace stadisc {

LiftedDisc canonical_lift(const HermitianModel& model,
                          const Eigen::VectorXcd& V, const Eigen::VectorXd& c,
                          double tol) {
  model.validate();
  if (V.size() != model.n) throw std::invalid_argument("V must lie in C^n");
  if (c.size() != model.d) throw std::invalid_argument("c must lie in R^d");
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(model.n, model.n);
  for (int j = 0; j < model.d; ++j) A += c[j] * model.A[j];
  if (!invertible(A, tol))
    throw std::invalid_argument(
        "canonical lift requires sum c_j A_j invertible");

  const int n = model.n, d = model.d, N = model.N();
  LiftedDisc lift;
  lift.base = PolyDisc::zero(N, 1);
  lift.cotangent = PolyDisc::zero(N, 1);

  // h = (1-zeta) V
  lift.base.coeffs.block(0, 0, n, 1) = V;
  lift.base.coeffs.block(0, 1, n, 1) = -V;
  // g_j = 2 (1-zeta) conj(V)^T A_j V
  for (int j = 0; j < d; ++j) {
    Complex q = 2.0 * (V.adjoint() * model.A[j] * V).value();
    lift.base.coeffs(n + j, 0) = q;
    lift.base.coeffs(n + j, 1) = -q;
  }
  // htilde = (1-zeta) conj(V)^T A  (row entries as components)
  Eigen::RowVectorXcd vta = V.adjoint() * A;
  lift.cotangent.coeffs.block(0, 0, n, 1) = vta.transpose();
  lift.cotangent.coeffs.block(0, 1, n, 1) = -vta.transpose();
  // gtilde = (zeta/2) c
  lift.cotangent.coeffs.block(n, 1, d, 1) = 0.5 * c.cast<Complex>();
  return lift;
}

double attachment_residual(const HermitianModel& model, const PolyDisc& disc,
                           int samples) {
  if (disc.dim() != model.N())
    throw std::invalid_argument("disc must be valued in C^N");
  if (samples <= 0) samples = default_boundary_samples(4 * disc.degree());
  double worst = 0.0;
  for (const Complex& z : unit_roots(samples)) {
    DefiningMapValue v = defining_map(model, disc.eval(z));
    worst = std::max(worst, v.values.cwiseAbs().maxCoeff());
  }
  return worst;
}

StationarityBreakdown stationarity_check(const HermitianModel& model,
                                         const LiftedDisc& lift,
                                         int samples) {
  const int N = model.N();
  if (lift.base.dim() != N || lift.cotangent.dim() != N)
    throw std::invalid_argument("lift must be valued in C^N x C^N");
  Eigen::Index deg =
      std::max(lift.base.degree(), lift.cotangent.degree());
  if (samples <= 0) samples = default_boundary_samples(4 * deg);

  StationarityBreakdown out;
  std::vector<Complex> roots = unit_roots(samples);

  double min_ft = std::numeric_limits<double>::infinity(), max_ft = 0.0;
  for (const Complex& z : roots) {
    double m = lift.cotangent.eval(z).norm();
    min_ft = std::min(min_ft, m);
    max_ft = std::max(max_ft, m);
  }
  out.zero_section_margin = max_ft > 0 ? min_ft / max_ft : 0.0;
  if (out.zero_section_margin < 1e-8) {
    out.residual = std::numeric_limits<double>::infinity();
    return out;
  }

  for (const Complex& z : roots) {
    Eigen::VectorXcd target = std::conj(z) * lift.cotangent.eval(z);
    Eigen::MatrixXcd grads = conormal_gradients(model, lift.base.eval(z));
    Eigen::MatrixXd span(2 * N, model.d);
    for (int j = 0; j < model.d; ++j)
      span.col(j) = realify(grads.row(j).transpose());
    Eigen::VectorXd t = realify(target);
    Eigen::VectorXd resid =
        t - span * span.colPivHouseholderQr().solve(t);
    out.span_distance = std::max(out.span_distance, resid.norm());
  }

  // Negative-frequency Fourier mass of the cotangent trace (identically
  // zero for polynomial coefficients, nonzero only for imported data).
  out.negative_fourier = 0.0;

  out.residual = std::max(out.span_distance, out.negative_fourier);
  return out;
}

double stationarity_residual(const HermitianModel& model,
                             const LiftedDisc& lift, int samples) {
  return stationarity_check(model, lift, samples).residual;
}

DefectResult compute_defect(const HermitianModel& model, const PolyDisc& disc,
                            double tol) {
  if (!model.is_quadric())
    throw std::invalid_argument("defect is computed for quadric models only");
  if (attachment_residual(model, disc) > 1e-8)
    throw std::invalid_argument("defect requires an attached disc");

  const int n = model.n, d = model.d;
  const Eigen::Index deg = disc.degree();
  // c . d_z rho(f(zeta)) = -sum_j c_j conj(z(zeta))^T A_j; the boundary
  // trace of conj(z) carries powers zeta^{-deg}..zeta^0, so the negative
  // frequency content of column j is -conj(zcoef_k)^T A_j for k = 1..deg.
  Eigen::MatrixXd M(2 * n * std::max<Eigen::Index>(deg, 1), d);
  M.setZero();
  for (int j = 0; j < d; ++j) {
    for (Eigen::Index k = 1; k <= deg; ++k) {
      Eigen::RowVectorXcd row =
          -(disc.coeffs.block(0, k, n, 1).conjugate().transpose() *
            model.A[j]);
      M.block(2 * n * (k - 1), j, n, 1) = row.transpose().real();
      M.block(2 * n * (k - 1) + n, j, n, 1) = row.transpose().imag();
    }
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
  Eigen::VectorXd sv = svd.singularValues();
  const double thr = tol * std::max(1.0, sv.size() ? sv.maxCoeff() : 0.0);

  DefectResult out;
  out.residual_singular_values = sv;
  for (int i = 0; i < d; ++i) {
    double s = i < sv.size() ? sv[i] : 0.0;
    if (s <= thr) {
      ++out.defect;
      out.kernel_basis.push_back(svd.matrixV().col(i));
    }
  }
  return out;
}

bool is_nondefective(const HermitianModel& model, const PolyDisc& disc,
                     double tol) {
  return compute_defect(model, disc, tol).defect == 0;
}

PolyMap PolyMap::identity(int N) {
  PolyMap F;
  F.N = N;
  F.components.resize(N);
  for (int i = 0; i < N; ++i) {
    PolyMapTerm t;
    t.coeff = 1.0;
    t.exp.assign(N, 0);
    t.exp[i] = 1;
    F.components[i].push_back(t);
  }
  return F;
}

Eigen::VectorXcd PolyMap::eval(const Eigen::VectorXcd& p) const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(N);
  for (int i = 0; i < N; ++i)
    for (const auto& t : components[i]) {
      Complex v = t.coeff;
      for (int k = 0; k < N; ++k)
        for (int e = 0; e < t.exp[k]; ++e) v *= p[k];
      out[i] += v;
    }
  return out;
}

Eigen::MatrixXcd PolyMap::jacobian(const Eigen::VectorXcd& p) const {
  Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(N, N);
  for (int i = 0; i < N; ++i)
    for (const auto& t : components[i])
      for (int k = 0; k < N; ++k) {
        if (t.exp[k] == 0) continue;
        Complex v = t.coeff * static_cast<double>(t.exp[k]);
        for (int m = 0; m < N; ++m) {
          int e = t.exp[m] - (m == k ? 1 : 0);
          for (int q = 0; q < e; ++q) v *= p[m];
        }
        J(i, k) += v;
      }
  return J;
}

PushforwardResult pushforward_lift(const PolyMap& F, const LiftedDisc& lift,
                                   int deg_max) {
  if (F.N != lift.base.dim())
    throw std::invalid_argument("pushforward: dimension mismatch");
  const int N = F.N;
  const int K = std::max(64, 4 * (deg_max + 1));
  std::vector<Complex> roots = unit_roots(K);

  Eigen::MatrixXcd base_samples(N, K), cot_samples(N, K);
  for (int k = 0; k < K; ++k) {
    Eigen::VectorXcd p = lift.base.eval(roots[k]);
    base_samples.col(k) = F.eval(p);
    Eigen::MatrixXcd J = F.jacobian(p);
    if (!invertible(J))
      throw std::invalid_argument(
          "pushforward: singular Jacobian at a boundary sample");
    // row vector ftilde J^{-1}, stored as a column
    cot_samples.col(k) =
        J.transpose().partialPivLu().solve(lift.cotangent.eval(roots[k]));
  }

  Eigen::MatrixXcd base_bins = dft_bins(base_samples);
  Eigen::MatrixXcd cot_bins = dft_bins(cot_samples);

  PushforwardResult out;
  out.lift.base = PolyDisc(base_bins.leftCols(deg_max + 1));
  out.lift.cotangent = PolyDisc(cot_bins.leftCols(deg_max + 1));
  out.truncation_tail =
      std::max(base_bins.rightCols(K - deg_max - 1).cwiseAbs().maxCoeff(),
               cot_bins.rightCols(K - deg_max - 1).cwiseAbs().maxCoeff());
  return out;
}

}  // namespace stadisc
