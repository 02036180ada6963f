#include "stadisc/rh.hpp"

#include <cmath>

namespace stadisc {

namespace {

const double kLadder[] = {1e-11, 1e-10, 1e-9, 1e-8, 1e-7};

/// Residual rows 2 Re[conj(G(zeta)) f(zeta)] stacked over samples.
Eigen::VectorXd boundary_rows(const GAssembly& G, const PolyDisc& f,
                              const std::vector<Complex>& roots) {
  const int twoN = 2 * G.N();
  Eigen::VectorXd rows(twoN * roots.size());
  for (size_t k = 0; k < roots.size(); ++k) {
    Eigen::VectorXcd v = G(roots[k]).conjugate() * f.eval(roots[k]);
    rows.segment(twoN * k, twoN) = 2.0 * v.real();
  }
  return rows;
}

/// Materialize the real coordinate `param` of a coefficient space with
/// `ncoeff` complex coefficients per component over `dim` components.
/// Ordering: component-major, then coefficient, then (re, im).
PolyDisc coordinate_disc(int dim, int ncoeff, int param) {
  PolyDisc p = PolyDisc::zero(dim, ncoeff - 1);
  int comp = param / (2 * ncoeff);
  int rem = param % (2 * ncoeff);
  int k = rem / 2;
  p.coeffs(comp, k) = rem % 2 == 0 ? Complex(1, 0) : kI;
  return p;
}

struct GalerkinKernel {
  std::vector<Eigen::VectorXd> null_vectors;  // in parameter coordinates
  Eigen::VectorXd singular_values;
  std::vector<int> ladder;
};

/// Kernel of the collocated boundary system over a parametrized disc space.
template <typename Materialize>
GalerkinKernel galerkin_kernel(const GAssembly& G, int params, int samples,
                               Materialize&& materialize, double tol) {
  std::vector<Complex> roots = unit_roots(samples);
  Eigen::MatrixXd M(2 * G.N() * samples, params);
  for (int p = 0; p < params; ++p)
    M.col(p) = boundary_rows(G, materialize(p), roots);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
  Eigen::VectorXd sv = svd.singularValues();
  const double scale = std::max(1.0, sv.size() ? sv.maxCoeff() : 0.0);

  GalerkinKernel out;
  out.singular_values = sv;
  for (double t : kLadder)
    out.ladder.push_back(
        params - static_cast<int>((sv.array() > t * scale).count()));
  const double thr = tol * scale;
  for (int i = 0; i < params; ++i) {
    double s = i < sv.size() ? sv[i] : 0.0;
    if (s <= thr) out.null_vectors.push_back(svd.matrixV().col(i));
  }
  return out;
}

Eigen::MatrixXd orthonormal_span(const std::vector<Eigen::VectorXd>& cols) {
  Eigen::MatrixXd M(cols[0].size(), cols.size());
  for (size_t i = 0; i < cols.size(); ++i) M.col(i) = cols[i];
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
  Eigen::MatrixXd Q = qr.householderQ() *
                      Eigen::MatrixXd::Identity(M.rows(), M.cols());
  return Q;
}

Eigen::VectorXd flatten_real(const PolyDisc& p, int ncoeff) {
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(p.dim(), ncoeff);
  c.leftCols(p.coeffs.cols()) = p.coeffs;
  Eigen::Map<const Eigen::VectorXcd> v(c.data(), c.size());
  return realify(v);
}

}  // namespace

Eigen::MatrixXcd GAssembly::operator()(Complex zeta) const {
  const int twoN = 2 * N();
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(twoN, twoN);
  const Complex omz = 1.0 - zeta;

  g.block(0, 0, d, d) = 0.5 * Eigen::MatrixXcd::Identity(d, d);
  g.block(0, d, d, 2 * n) = omz * B1;

  g.block(d, d, n, n) = zeta * A.transpose();
  g.block(d, d + n, n, n) = Eigen::MatrixXcd::Identity(n, n);
  g.block(d + n, d, n, n) = kI * zeta * A.transpose();
  g.block(d + n, d + n, n, n) = -kI * Eigen::MatrixXcd::Identity(n, n);

  g.block(d, d + 2 * n, n, d) = omz * 2.0 * D;
  g.block(d + n, d + 2 * n, n, d) = omz * (-2.0 * kI) * D;

  g.block(d + 2 * n, d + 2 * n, d, d) =
      -kI * zeta * Eigen::MatrixXcd::Identity(d, d);
  return g;
}

GAssembly assemble_G(const HermitianModel& model, const Eigen::VectorXcd& V,
                     const Eigen::VectorXd& c, double tol) {
  model.validate();
  if (!model.is_quadric())
    throw std::invalid_argument("boundary matrix is assembled for quadrics");
  GAssembly G;
  G.n = model.n;
  G.d = model.d;
  G.V = V;
  G.c = c;
  G.A = Eigen::MatrixXcd::Zero(model.n, model.n);
  for (int j = 0; j < model.d; ++j) G.A += c[j] * model.A[j];
  if (!invertible(G.A, tol))
    throw std::invalid_argument("assemble_G requires sum c_j A_j invertible");
  G.D.resize(model.n, model.d);
  for (int j = 0; j < model.d; ++j) G.D.col(j) = model.A[j] * V;
  G.B1 = Eigen::MatrixXcd::Zero(model.d, 2 * model.n);
  G.B1.leftCols(model.n) = -G.D.transpose();
  return G;
}

double kernel_residual(const GAssembly& G, const PolyDisc& f, int samples) {
  if (samples <= 0)
    samples = default_boundary_samples(4 * (f.degree() + 1));
  std::vector<Complex> roots = unit_roots(samples);
  return boundary_rows(G, f, roots).cwiseAbs().maxCoeff();
}

KernelElement closed_form_element(const GAssembly& G, const Eigen::VectorXcd& a,
                                  const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& ytilde) {
  const int n = G.n, d = G.d, twoN = 2 * G.N();
  KernelElement el;
  el.a = a;
  el.y = y;
  el.ytilde = ytilde;

  el.X = 2.0 * G.D * a.real().cast<Complex>() +
         0.5 * (ytilde.cast<Complex>() + kI * y.cast<Complex>());
  el.Y = -2.0 * G.D * a.conjugate();

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(G.A);
  Eigen::VectorXcd h0 = lu.solve(el.X);
  Eigen::VectorXcd h1 = lu.solve(el.Y);

  const Eigen::MatrixXcd E = -G.D.adjoint();  // conj of the live B1 block
  Eigen::VectorXcd ex = E * lu.solve(el.X);
  Eigen::VectorXcd ey = E * lu.solve(el.Y);
  Eigen::VectorXcd g0 = -4.0 * ex.real().cast<Complex>() + 2.0 * ey;
  Eigen::VectorXcd g1 = -2.0 * ey;

  // inner polynomial, ordering (g, h, htilde, gtilde); htilde solved below
  Eigen::MatrixXcd inner = Eigen::MatrixXcd::Zero(twoN, 2);
  inner.block(0, 0, d, 1) = g0;
  inner.block(0, 1, d, 1) = g1;
  inner.block(d, 0, n, 1) = h0;
  inner.block(d, 1, n, 1) = h1;
  inner.block(d + 2 * n, 0, d, 1) = a;
  inner.block(d + 2 * n, 1, d, 1) = -a.conjugate();

  // Least-squares recovery of htilde from the boundary system.
  const int samples = 8 * 4;
  std::vector<Complex> roots = unit_roots(samples);
  PolyDisc without = one_minus_zeta_times(PolyDisc(inner));
  Eigen::VectorXd rhs = -boundary_rows(G, without, roots);
  Eigen::MatrixXd M(rhs.size(), 4 * n);
  for (int p = 0; p < 4 * n; ++p) {
    PolyDisc basis = PolyDisc::zero(twoN, 1);
    int comp = d + n + p / 4;
    int k = (p / 2) % 2;
    basis.coeffs(comp, k) = p % 2 == 0 ? Complex(1, 0) : kI;
    M.col(p) = boundary_rows(G, one_minus_zeta_times(basis), roots);
  }
  Eigen::VectorXd sol = M.colPivHouseholderQr().solve(rhs);
  for (int p = 0; p < 4 * n; ++p) {
    Complex unit = p % 2 == 0 ? Complex(1, 0) : kI;
    inner(d + n + p / 4, (p / 2) % 2) += sol[p] * unit;
  }

  el.disc = one_minus_zeta_times(PolyDisc(inner));
  el.residual = kernel_residual(G, el.disc);
  return el;
}

KernelBasis tangent_kernel(const GAssembly& G, KernelMethod method,
                           double tol) {
  const int n = G.n, d = G.d, twoN = 2 * G.N();
  KernelBasis out;
  out.expected_dim = 2 * G.N();

  if (method != KernelMethod::Numeric) {
    for (int j = 0; j < d; ++j)
      for (int im = 0; im < 2; ++im) {
        Eigen::VectorXcd a = Eigen::VectorXcd::Zero(d);
        a[j] = im ? kI : Complex(1, 0);
        out.closed_form.push_back(closed_form_element(
            G, a, Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)));
      }
    for (int k = 0; k < n; ++k)
      out.closed_form.push_back(
          closed_form_element(G, Eigen::VectorXcd::Zero(d),
                              Eigen::VectorXd::Unit(n, k),
                              Eigen::VectorXd::Zero(n)));
    for (int k = 0; k < n; ++k)
      out.closed_form.push_back(
          closed_form_element(G, Eigen::VectorXcd::Zero(d),
                              Eigen::VectorXd::Zero(n),
                              Eigen::VectorXd::Unit(n, k)));
    for (const auto& el : out.closed_form)
      out.max_residual = std::max(out.max_residual, el.residual);
    if (method == KernelMethod::ClosedForm)
      for (const auto& el : out.closed_form) out.elements.push_back(el.disc);
  }

  if (method != KernelMethod::ClosedForm) {
    // unknown = (1 - zeta)(c0 + c1 zeta), 8N real parameters
    const int params = 2 * 2 * twoN;
    const int samples = 8 * 4;
    GalerkinKernel gk = galerkin_kernel(
        G, params, samples,
        [&](int p) {
          return one_minus_zeta_times(coordinate_disc(twoN, 2, p));
        },
        tol);
    out.singular_values = gk.singular_values;
    out.dimension_ladder = gk.ladder;
    out.elements.clear();
    for (const auto& v : gk.null_vectors) {
      PolyDisc sum = PolyDisc::zero(twoN, 1);
      for (int p = 0; p < params; ++p)
        sum.coeffs += v[p] * coordinate_disc(twoN, 2, p).coeffs;
      out.elements.push_back(one_minus_zeta_times(sum));
      out.max_residual =
          std::max(out.max_residual, kernel_residual(G, out.elements.back()));
    }
  }

  if (method == KernelMethod::Both && !out.closed_form.empty() &&
      !out.elements.empty()) {
    const int ncoeff = 3;
    std::vector<Eigen::VectorXd> numc, clsc;
    for (const auto& e : out.elements) numc.push_back(flatten_real(e, ncoeff));
    for (const auto& e : out.closed_form)
      clsc.push_back(flatten_real(e.disc, ncoeff));
    Eigen::MatrixXd Q1 = orthonormal_span(numc);
    Eigen::MatrixXd Q2 = orthonormal_span(clsc);
    Eigen::VectorXd cosines =
        (Q1.transpose() * Q2).jacobiSvd().singularValues();
    for (Eigen::Index i = 0; i < cosines.size(); ++i)
      out.principal_angles_rad.push_back(
          std::acos(std::min(1.0, std::max(-1.0, cosines[i]))));
  }
  return out;
}

Eigen::VectorXcd jet_map(const PolyDisc& disc, int order) {
  Eigen::VectorXcd jet((order + 1) * disc.dim());
  jet.head(disc.dim()) = disc.eval(1.0);
  for (int o = 1; o <= order; ++o)
    jet.segment(o * disc.dim(), disc.dim()) = disc.derivative(1.0, o);
  return jet;
}

JetCertificate certify_jet_injectivity(const GAssembly& G, int order,
                                       double tol) {
  if (order != 1 && order != 2)
    throw std::invalid_argument("jet order must be 1 or 2");
  const int twoN = 2 * G.N();
  JetCertificate cert;
  cert.order = order;

  std::vector<PolyDisc> basis;
  if (order == 1) {
    KernelBasis kb = tangent_kernel(G, KernelMethod::Numeric, tol);
    basis = kb.elements;
    cert.dimension_ladder = kb.dimension_ladder;
  } else {
    // unpinned degree <= 2 ansatz of the wider stationary family
    const int params = 2 * 3 * twoN;
    GalerkinKernel gk = galerkin_kernel(
        G, params, 8 * 4, [&](int p) { return coordinate_disc(twoN, 3, p); },
        tol);
    cert.dimension_ladder = gk.ladder;
    for (const auto& v : gk.null_vectors) {
      PolyDisc sum = PolyDisc::zero(twoN, 2);
      for (int p = 0; p < params; ++p)
        sum.coeffs += v[p] * coordinate_disc(twoN, 3, p).coeffs;
      basis.push_back(sum);
    }
  }

  cert.kernel_dim = static_cast<int>(basis.size());
  if (cert.kernel_dim == 0) {
    cert.injective = true;
    return cert;
  }
  cert.jet_matrix.resize(2 * (order + 1) * twoN, cert.kernel_dim);
  for (int i = 0; i < cert.kernel_dim; ++i)
    cert.jet_matrix.col(i) = realify(jet_map(basis[i], order));

  Eigen::VectorXd sv = cert.jet_matrix.jacobiSvd().singularValues();
  cert.sigma_min = sv.minCoeff();
  cert.rank = rank_of(cert.jet_matrix, tol);
  cert.injective = cert.rank == cert.kernel_dim;
  return cert;
}

BirkhoffReport birkhoff_check(int deg_max, double tol) {
  BirkhoffReport rep;

  Eigen::Matrix2cd theta;
  theta << Complex(1, 0), Complex(-1, 0), kI, kI;
  Eigen::Matrix2cd target;
  target << Complex(0, 0), Complex(-1, 0), Complex(-1, 0), Complex(0, 0);
  // Theta^{-1} diag(zeta, zeta) conj(Theta) is zeta times a constant matrix;
  // the identity reduces to that constant equaling -[[0,1],[1,0]].
  Eigen::Matrix2cd lhs = theta.inverse() * theta.conjugate();
  rep.theta_identity_error = (lhs - target).cwiseAbs().maxCoeff();

  // Reflection system for one component pair (h_k, htilde_k).
  const int params = 2 * 2 * (deg_max + 1);
  const int samples = 8 * (deg_max + 1);
  std::vector<Complex> roots = unit_roots(samples);
  Eigen::MatrixXd M(2 * samples, params);
  auto coord = [&](int p) { return coordinate_disc(2, deg_max + 1, p); };
  for (int p = 0; p < params; ++p) {
    PolyDisc u = coord(p);
    for (int k = 0; k < samples; ++k) {
      const Complex z = roots[k];
      Eigen::Matrix2cd R;
      R << z, Complex(1, 0), kI * z, -kI;
      Eigen::Vector2cd v = R.conjugate() * u.eval(z);
      M(2 * k, p) = 2.0 * v[0].real();
      M(2 * k + 1, p) = 2.0 * v[1].real();
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
  Eigen::VectorXd sv = svd.singularValues();
  const double thr = tol * std::max(1.0, sv.maxCoeff());
  for (int i = 0; i < params; ++i) {
    double s = i < sv.size() ? sv[i] : 0.0;
    if (s > thr) continue;
    ++rep.block_kernel_dim;
    PolyDisc u = PolyDisc::zero(2, deg_max);
    for (int p = 0; p < params; ++p)
      u.coeffs += svd.matrixV()(p, i) * coord(p).coeffs;
    if (deg_max >= 2)
      rep.max_high_degree_coeff =
          std::max(rep.max_high_degree_coeff,
                   u.coeffs.rightCols(deg_max - 1).cwiseAbs().maxCoeff());
  }

  rep.pass = rep.theta_identity_error <= 1e-14 && rep.block_kernel_dim == 4 &&
             rep.max_high_degree_coeff <= 1e-10;
  return rep;
}

}  // namespace stadisc
