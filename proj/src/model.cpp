#include "stadisc/model.hpp"

#include <cmath>

namespace stadisc {

namespace {

double real_monomial(const Eigen::VectorXcd& z, const Eigen::VectorXd& imw,
                     const PerturbationTerm& t, Complex& u) {
  // u = z^a conj(z)^b (Im w)^m; returns Re u.
  u = Complex(t.coeff, 0.0);
  for (int k = 0; k < z.size(); ++k) {
    for (int e = 0; e < t.z_exp[k]; ++e) u *= z[k];
    for (int e = 0; e < t.zbar_exp[k]; ++e) u *= std::conj(z[k]);
  }
  for (int j = 0; j < imw.size(); ++j)
    for (int e = 0; e < t.imw_exp[j]; ++e) u *= imw[j];
  return u.real();
}

Complex monomial_z_zbar(const Eigen::VectorXcd& z, const std::vector<int>& a,
                        const std::vector<int>& b) {
  Complex u(1.0, 0.0);
  for (int k = 0; k < z.size(); ++k) {
    for (int e = 0; e < a[k]; ++e) u *= z[k];
    for (int e = 0; e < b[k]; ++e) u *= std::conj(z[k]);
  }
  return u;
}

double imw_power(const Eigen::VectorXd& imw, const std::vector<int>& m) {
  double p = 1.0;
  for (int j = 0; j < imw.size(); ++j)
    for (int e = 0; e < m[j]; ++e) p *= imw[j];
  return p;
}

}  // namespace

void HermitianModel::validate() const {
  if (n < 1 || d < 1)
    throw std::invalid_argument("model requires n >= 1 and d >= 1");
  if (static_cast<int>(A.size()) != d)
    throw std::invalid_argument("model has " + std::to_string(A.size()) +
                                " Levi matrices, expected d = " +
                                std::to_string(d));
  for (int j = 0; j < d; ++j) {
    if (A[j].rows() != n || A[j].cols() != n)
      throw std::invalid_argument("A[" + std::to_string(j + 1) +
                                  "] is not " + std::to_string(n) + "x" +
                                  std::to_string(n));
    double scale = std::max(1.0, A[j].cwiseAbs().maxCoeff());
    Eigen::MatrixXcd skew = A[j] - A[j].adjoint();
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        if (std::abs(skew(r, c)) > 1e-14 * scale)
          throw std::invalid_argument(
              "A[" + std::to_string(j + 1) + "] entry (" + std::to_string(r) +
              "," + std::to_string(c) + ") violates hermitian symmetry");
  }
  for (const auto& t : perturbation) {
    if (t.row < 1 || t.row > d)
      throw std::invalid_argument("perturbation row out of range 1.." +
                                  std::to_string(d));
    if (static_cast<int>(t.z_exp.size()) != n ||
        static_cast<int>(t.zbar_exp.size()) != n ||
        static_cast<int>(t.imw_exp.size()) != d)
      throw std::invalid_argument("perturbation exponent length mismatch");
    if (t.weight() < 3)
      throw std::invalid_argument("perturbation term has weight " +
                                  std::to_string(t.weight()) +
                                  ", must be >= 3");
  }
}

DefiningMapValue defining_map(const HermitianModel& model,
                              const Eigen::VectorXcd& point) {
  const int n = model.n, d = model.d;
  if (point.size() != model.N())
    throw std::invalid_argument("point dimension mismatch");
  const Eigen::VectorXcd z = point.head(n);
  const Eigen::VectorXcd w = point.tail(d);
  const Eigen::VectorXd imw = w.imag();

  DefiningMapValue out;
  out.values.resize(d);
  out.z_gradients = Eigen::MatrixXcd::Zero(d, n);
  out.w_gradients = Eigen::MatrixXcd::Zero(d, d);

  for (int j = 0; j < d; ++j) {
    out.values[j] = w[j].real() - (z.adjoint() * model.A[j] * z).value().real();
    out.z_gradients.row(j) = -(z.adjoint() * model.A[j]);
    out.w_gradients(j, j) = 0.5;  // holomorphic derivative of Re w_j
  }

  for (const auto& t : model.perturbation) {
    const int j = t.row - 1;
    Complex u;
    out.values[j] += real_monomial(z, imw, t, u);

    // d/dz_k of Re(u): (1/2)(du/dz_k + conj(du/dzbar_k)).
    const double mu = imw_power(imw, t.imw_exp);
    for (int k = 0; k < n; ++k) {
      Complex dz(0, 0);
      if (t.z_exp[k] > 0) {
        auto a = t.z_exp;
        a[k] -= 1;
        dz += static_cast<double>(t.z_exp[k]) *
              monomial_z_zbar(z, a, t.zbar_exp);
      }
      if (t.zbar_exp[k] > 0) {
        // conj(du/dzbar_k) = b_k conj(z)^a z^{b - e_k}
        auto b = t.zbar_exp;
        b[k] -= 1;
        dz += static_cast<double>(t.zbar_exp[k]) *
              monomial_z_zbar(z, b, t.z_exp);
      }
      out.z_gradients(j, k) += 0.5 * t.coeff * mu * dz;
    }

    // d/dw_l of Re(u): Im w_l = (w_l - conj(w_l)) / (2i).
    for (int l = 0; l < d; ++l) {
      if (t.imw_exp[l] == 0) continue;
      auto m = t.imw_exp;
      m[l] -= 1;
      const double mul = imw_power(imw, m);
      const Complex zz = monomial_z_zbar(z, t.z_exp, t.zbar_exp);
      out.w_gradients(j, l) += t.coeff * static_cast<double>(t.imw_exp[l]) *
                               mul * zz.real() / (2.0 * kI);
    }
  }
  return out;
}

Eigen::MatrixXcd conormal_gradients(const HermitianModel& model,
                                    const Eigen::VectorXcd& point) {
  DefiningMapValue v = defining_map(model, point);
  Eigen::MatrixXcd g(model.d, model.N());
  g.leftCols(model.n) = v.z_gradients;
  g.rightCols(model.d) = v.w_gradients;
  return g;
}

}  // namespace stadisc
