#include "stadisc/deformation.hpp"

#include <cmath>
#include <stdexcept>

namespace stadisc {

namespace {

constexpr double kFdStep = 1e-6;

Eigen::VectorXcd grad_row(const Eigen::MatrixXcd& grads, int j) {
  return grads.row(j).transpose();
}

/// Distance of a cotangent value to the real span of the gradient rows.
double span_distance(const Eigen::MatrixXcd& grads,
                     const Eigen::VectorXcd& target) {
  const int d = static_cast<int>(grads.rows());
  Eigen::MatrixXd span(2 * grads.cols(), d);
  for (int j = 0; j < d; ++j) span.col(j) = realify(grad_row(grads, j));
  Eigen::VectorXd t = realify(target);
  return (t - span * span.colPivHouseholderQr().solve(t)).norm();
}

}  // namespace

PolyDisc lift_order_from_g_order(const PolyDisc& p, int n, int d) {
  PolyDisc out = PolyDisc::zero(p.dim(), p.degree());
  out.coeffs.topRows(n) = p.coeffs.middleRows(d, n);        // h
  out.coeffs.middleRows(n, d) = p.coeffs.topRows(d);        // g
  out.coeffs.bottomRows(2 * n + d - n) =
      p.coeffs.bottomRows(n + d);                           // htilde, gtilde
  return out;
}

StationaryFamily::StationaryFamily(const HermitianModel& model,
                                   const Eigen::VectorXcd& V,
                                   const Eigen::VectorXd& c,
                                   const SolveConfig& config)
    : model_(model), quadric_(model), cfg_(config), V_(V), c_(c) {
  model_.validate();
  quadric_.perturbation.clear();
  samples_ = cfg_.samples > 0 ? cfg_.samples
                              : std::max(64, 8 * cfg_.deg_max);
  roots_ = unit_roots(samples_);

  // Pin the 2N best-conditioned realified coordinates of the derivative
  // jet, chosen by pivoted QR on the jet matrix of the tangent kernel.
  GAssembly G = assemble_G(quadric_, V_, c_);
  KernelBasis kb = tangent_kernel(G, KernelMethod::Numeric);
  const int twoN = 2 * N();
  Eigen::MatrixXd jets(2 * twoN, static_cast<int>(kb.elements.size()));
  for (size_t i = 0; i < kb.elements.size(); ++i) {
    PolyDisc el = lift_order_from_g_order(kb.elements[i], model_.n, model_.d);
    jets.col(static_cast<int>(i)) = realify(el.derivative(1.0));
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(jets.transpose());
  Eigen::VectorXi perm = qr.colsPermutation().indices();
  for (int i = 0; i < twoN && i < perm.size(); ++i)
    pin_indices_.push_back(perm[i]);
  std::sort(pin_indices_.begin(), pin_indices_.end());
}

Eigen::VectorXd StationaryFamily::initial_state() const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(total_params());
  // inner polynomial of the canonical lift is constant in zeta
  const int n = model_.n, d = model_.d;
  auto set_coeff = [&](int comp, int k, Complex v) {
    int base = comp * 2 * cfg_.deg_max + 2 * k;
    x[base] = v.real();
    x[base + 1] = v.imag();
  };
  for (int i = 0; i < n; ++i) set_coeff(i, 0, V_[i]);
  for (int j = 0; j < d; ++j)
    set_coeff(n + j, 0, 2.0 * (V_.adjoint() * model_.A[j] * V_).value());
  Eigen::MatrixXcd Acomb = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < d; ++j) Acomb += c_[j] * model_.A[j];
  Eigen::RowVectorXcd vta = V_.adjoint() * Acomb;
  for (int i = 0; i < n; ++i) set_coeff(N() + i, 0, vta[i]);
  // gtilde inner is zero; multipliers start at c
  for (int k = 0; k < samples_; ++k)
    x.segment(coeff_params() + k * d, d) = c_;
  return x;
}

LiftedDisc StationaryFamily::lift_from_state(const Eigen::VectorXd& x) const {
  const int twoN = 2 * N();
  Eigen::MatrixXcd inner(twoN, cfg_.deg_max);
  for (int comp = 0; comp < twoN; ++comp)
    for (int k = 0; k < cfg_.deg_max; ++k) {
      int base = comp * 2 * cfg_.deg_max + 2 * k;
      inner(comp, k) = Complex(x[base], x[base + 1]);
    }
  PolyDisc full = one_minus_zeta_times(PolyDisc(inner));
  for (int j = 0; j < model_.d; ++j)
    full.coeffs(N() + model_.n + j, 1) += 0.5 * c_[j];
  LiftedDisc lift;
  lift.base = full.head(0, N());
  lift.cotangent = full.head(N(), N());
  return lift;
}

Eigen::VectorXd StationaryFamily::jet_coordinates(
    const LiftedDisc& lift) const {
  Eigen::VectorXcd der(2 * N());
  der.head(N()) = lift.base.derivative(1.0);
  der.tail(N()) = lift.cotangent.derivative(1.0);
  return realify(der);
}

Eigen::VectorXd StationaryFamily::pinned_params(const LiftedDisc& lift) const {
  Eigen::VectorXd jets = jet_coordinates(lift);
  Eigen::VectorXd out(pin_indices_.size());
  for (size_t i = 0; i < pin_indices_.size(); ++i)
    out[i] = jets[pin_indices_[i]];
  return out;
}

Eigen::VectorXd StationaryFamily::residual(
    const Eigen::VectorXd& x, const Eigen::VectorXd& target_params) const {
  const int d = model_.d, twoN = 2 * N();
  LiftedDisc lift = lift_from_state(x);
  Eigen::VectorXd r(samples_ * (d + twoN) + twoN);
  for (int k = 0; k < samples_; ++k) {
    const Complex z = roots_[k];
    Eigen::VectorXcd base = lift.base.eval(z);
    DefiningMapValue dm = defining_map(model_, base);
    Eigen::MatrixXcd grads(d, N());
    grads.leftCols(model_.n) = dm.z_gradients;
    grads.rightCols(d) = dm.w_gradients;

    int row = k * (d + twoN);
    r.segment(row, d) = dm.values;
    Eigen::VectorXcd fiber = std::conj(z) * lift.cotangent.eval(z);
    for (int j = 0; j < d; ++j)
      fiber -= x[coeff_params() + k * d + j] * grad_row(grads, j);
    r.segment(row + d, twoN) = realify(fiber);
  }
  r.tail(twoN) = pinned_params(lift) - target_params;
  return r;
}

Eigen::MatrixXd StationaryFamily::jacobian(
    const Eigen::VectorXd& x, const Eigen::VectorXd& target_params) const {
  (void)target_params;
  const int n = model_.n, d = model_.d, twoN = 2 * N();
  const int rows = samples_ * (d + twoN) + twoN;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(rows, total_params());
  LiftedDisc lift = lift_from_state(x);

  // Cache per-sample geometry.
  std::vector<Eigen::VectorXcd> base_vals(samples_);
  std::vector<Eigen::MatrixXcd> grads(samples_);
  for (int k = 0; k < samples_; ++k) {
    base_vals[k] = lift.base.eval(roots_[k]);
    DefiningMapValue dm = defining_map(model_, base_vals[k]);
    grads[k].resize(d, N());
    grads[k].leftCols(n) = dm.z_gradients;
    grads[k].rightCols(d) = dm.w_gradients;
  }

  // Analytic columns for the inner coefficients.
  for (int p = 0; p < coeff_params(); ++p) {
    const int comp = p / (2 * cfg_.deg_max);
    const int k = (p % (2 * cfg_.deg_max)) / 2;
    const Complex unit = p % 2 == 0 ? Complex(1, 0) : kI;
    const bool base_comp = comp < N();

    for (int s = 0; s < samples_; ++s) {
      const Complex z = roots_[s];
      Complex pz = unit;
      for (int q = 0; q < k; ++q) pz *= z;
      pz *= (1.0 - z);  // value of the delta component at the sample
      const int row = s * (d + twoN);

      if (base_comp) {
        // attachment rows: dr_j = 2 Re(grad . dpoint)
        for (int j = 0; j < d; ++j)
          J(row + j, p) = 2.0 * (grads[s](j, comp) * pz).real();
        // fiber rows through the gradient's dependence on conj(z):
        // d(dz r_j) = -t(conj(dz)) A_j on the quadric part
        if (comp < n) {
          Eigen::VectorXcd dfiber = Eigen::VectorXcd::Zero(N());
          for (int j = 0; j < d; ++j) {
            const double lambda = x[coeff_params() + s * d + j];
            dfiber.head(n) +=
                lambda * std::conj(pz) *
                quadric_.A[j].row(comp).transpose();
          }
          J.block(row + d, p, twoN, 1) += realify(dfiber);
        }
      } else {
        // cotangent rows: d(ftilde conj(z)) straight through
        Eigen::VectorXcd dfiber = Eigen::VectorXcd::Zero(N());
        dfiber[comp - N()] = std::conj(z) * pz;
        J.block(row + d, p, twoN, 1) += realify(dfiber);
      }
    }

    // pinning rows: realified derivative jet of the delta disc
    Eigen::VectorXcd delta = Eigen::VectorXcd::Zero(twoN);
    // derivative at 1 of (1-zeta) zeta^k unit = -unit
    delta[comp] = -unit;
    Eigen::VectorXd jet = realify(delta);
    for (size_t i = 0; i < pin_indices_.size(); ++i)
      J(samples_ * (d + twoN) + static_cast<int>(i), p) =
          jet[pin_indices_[i]];
  }

  // Multiplier columns.
  for (int s = 0; s < samples_; ++s)
    for (int j = 0; j < d; ++j) {
      const int p = coeff_params() + s * d + j;
      J.block(s * (d + twoN) + d, p, twoN, 1) =
          -realify(grad_row(grads[s], j));
    }

  // Perturbation contribution to the fiber rows by central differences.
  if (!model_.is_quadric()) {
    auto fiber_pert = [&](const Eigen::VectorXd& xx) {
      LiftedDisc lf = lift_from_state(xx);
      Eigen::VectorXd out = Eigen::VectorXd::Zero(samples_ * twoN);
      for (int s = 0; s < samples_; ++s) {
        Eigen::VectorXcd pt = lf.base.eval(roots_[s]);
        Eigen::MatrixXcd gm = conormal_gradients(model_, pt);
        Eigen::MatrixXcd gq = conormal_gradients(quadric_, pt);
        Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(N());
        for (int j = 0; j < d; ++j)
          acc -= xx[coeff_params() + s * d + j] *
                 Eigen::VectorXcd((gm - gq).row(j).transpose());
        out.segment(s * twoN, twoN) = realify(acc);
      }
      return out;
    };
    Eigen::VectorXd xp = x, xm = x;
    for (int p = 0; p < coeff_params(); ++p) {
      xp[p] += kFdStep;
      xm[p] -= kFdStep;
      Eigen::VectorXd col = (fiber_pert(xp) - fiber_pert(xm)) / (2 * kFdStep);
      xp[p] = x[p];
      xm[p] = x[p];
      for (int s = 0; s < samples_; ++s)
        J.block(s * (d + twoN) + d, p, twoN, 1) +=
            col.segment(s * twoN, twoN);
    }
  }
  return J;
}

SolvedFamilyPoint newton_solve(const StationaryFamily& family,
                               const Eigen::VectorXd& initial_state,
                               const Eigen::VectorXd& target_params) {
  const SolveConfig& cfg = family.config();
  Eigen::VectorXd x = initial_state;
  SolvedFamilyPoint out;

  double rnorm = family.residual(x, target_params).lpNorm<Eigen::Infinity>();
  out.residual_history.push_back(rnorm);

  for (int iter = 0; iter < cfg.max_iters && rnorm > cfg.newton_tol; ++iter) {
    Eigen::VectorXd r = family.residual(x, target_params);
    Eigen::MatrixXd J = family.jacobian(x, target_params);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(J);
    qr.setThreshold(1e-10);
    if (qr.rank() < J.cols())
      throw std::runtime_error(
          "newton_solve: singular linearization (rank " +
          std::to_string(qr.rank()) + " of " + std::to_string(J.cols()) +
          "); the jet pinning does not determine the family");
    Eigen::VectorXd step = qr.solve(r);

    double alpha = iter == 0 ? cfg.damping : 1.0;
    Eigen::VectorXd best_x = x;
    double best = rnorm;
    while (alpha >= 1.0 / 64.0) {
      Eigen::VectorXd trial = x - alpha * step;
      double tn =
          family.residual(trial, target_params).lpNorm<Eigen::Infinity>();
      if (tn < best) {
        best = tn;
        best_x = trial;
        break;
      }
      alpha *= 0.5;
    }
    if (best >= rnorm) break;  // no descent
    x = best_x;
    rnorm = best;
    out.residual_history.push_back(rnorm);
    out.iterations = iter + 1;
  }

  out.lift = family.lift_from_state(x);
  out.params = family.pinned_params(out.lift);
  out.residual = rnorm;
  out.converged = rnorm <= cfg.newton_tol;
  return out;
}

SolvedFamilyPoint newton_solve(const HermitianModel& model,
                               const Eigen::VectorXcd& V,
                               const Eigen::VectorXd& c,
                               const Eigen::VectorXd& target_params,
                               const SolveConfig& config) {
  StationaryFamily family(model, V, c, config);
  Eigen::VectorXd target = target_params;
  if (target.size() == 0)
    target =
        family.pinned_params(family.lift_from_state(family.initial_state()));
  return newton_solve(family, family.initial_state(), target);
}

CoverageReport coverage_probe(const HermitianModel& model,
                              const Eigen::VectorXcd& V,
                              const Eigen::VectorXd& c,
                              const std::vector<SolvedFamilyPoint>& family,
                              double theta_max, double tol) {
  CoverageReport rep;
  const int twoN = 2 * model.N();
  rep.required_rank = twoN;

  HermitianModel quadric = model;
  quadric.perturbation.clear();

  // Derivative of params -> realified (f'(1), ftilde'(1)).  Finite
  // differences across the family when it is rich enough, otherwise the
  // analytic tangent kernel at the quadric.
  Eigen::MatrixXd jac;
  if (family.size() >= static_cast<size_t>(twoN + 1)) {
    const int m = static_cast<int>(family.size()) - 1;
    Eigen::MatrixXd dp(twoN, m), dj(2 * twoN, m);
    auto jet_of = [&](const SolvedFamilyPoint& pt) {
      Eigen::VectorXcd der(twoN);
      der.head(model.N()) = pt.lift.base.derivative(1.0);
      der.tail(model.N()) = pt.lift.cotangent.derivative(1.0);
      return realify(der);
    };
    Eigen::VectorXd j0 = jet_of(family[0]);
    for (int i = 0; i < m; ++i) {
      dp.col(i) = family[i + 1].params - family[0].params;
      dj.col(i) = jet_of(family[i + 1]) - j0;
    }
    jac = dp.transpose()
              .colPivHouseholderQr()
              .solve(dj.transpose())
              .transpose();
  } else {
    GAssembly G = assemble_G(quadric, V, c, tol);
    KernelBasis kb = tangent_kernel(G, KernelMethod::Numeric, tol);
    jac.resize(2 * twoN, static_cast<int>(kb.elements.size()));
    for (size_t i = 0; i < kb.elements.size(); ++i) {
      PolyDisc el = lift_order_from_g_order(kb.elements[i], model.n, model.d);
      jac.col(static_cast<int>(i)) = realify(el.derivative(1.0));
    }
  }
  Eigen::VectorXd sv = jac.jacobiSvd().singularValues();
  rep.sigma_min = sv.minCoeff();
  rep.jacobian_rank = rank_of(jac, tol);

  // Conormal membership of the rotated boundary map along theta samples.
  std::vector<LiftedDisc> lifts;
  if (family.empty())
    lifts.push_back(canonical_lift(quadric, V, c, tol));
  else
    for (const auto& pt : family) lifts.push_back(pt.lift);

  const int theta_samples = 8;
  std::vector<Eigen::VectorXd> cloud;
  for (const auto& lift : lifts)
    for (int t = 0; t < theta_samples; ++t) {
      double theta = theta_max * t / theta_samples;
      Complex z(std::cos(theta), std::sin(theta));
      Eigen::VectorXcd base = lift.base.eval(z);
      Eigen::VectorXcd fiber = std::conj(z) * lift.cotangent.eval(z);
      DefiningMapValue dm = defining_map(model, base);
      Eigen::MatrixXcd grads(model.d, model.N());
      grads.leftCols(model.n) = dm.z_gradients;
      grads.rightCols(model.d) = dm.w_gradients;
      double res = std::max(dm.values.cwiseAbs().maxCoeff(),
                            span_distance(grads, fiber));
      rep.psi_max_residual = std::max(rep.psi_max_residual, res);

      Eigen::VectorXcd point(twoN);
      point.head(model.N()) = base;
      point.tail(model.N()) = fiber;
      cloud.push_back(realify(point));
    }
  if (cloud.size() > 1) {
    Eigen::MatrixXd M(cloud[0].size(), cloud.size() - 1);
    for (size_t i = 1; i < cloud.size(); ++i)
      M.col(static_cast<int>(i - 1)) = cloud[i] - cloud[0];
    rep.image_affine_dim = rank_of(M, 1e-7);
  }

  rep.covering_certified =
      rep.jacobian_rank == twoN && rep.psi_max_residual <= 1e-8;
  return rep;
}

}  // namespace stadisc
