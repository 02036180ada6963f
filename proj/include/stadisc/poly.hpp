#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace stadisc {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

/// Vector-valued polynomial disc: component-major complex coefficients,
/// coeffs(m, k) is the zeta^k coefficient of component m.
struct PolyDisc {
  Eigen::MatrixXcd coeffs;

  PolyDisc() = default;
  explicit PolyDisc(Eigen::MatrixXcd c) : coeffs(std::move(c)) {}

  static PolyDisc zero(Eigen::Index dim, Eigen::Index degree) {
    return PolyDisc(Eigen::MatrixXcd::Zero(dim, degree + 1));
  }

  Eigen::Index dim() const { return coeffs.rows(); }
  Eigen::Index degree() const { return coeffs.cols() - 1; }

  Eigen::VectorXcd eval(Complex zeta) const {
    Eigen::VectorXcd v = coeffs.col(coeffs.cols() - 1);
    for (Eigen::Index k = coeffs.cols() - 2; k >= 0; --k)
      v = v * zeta + coeffs.col(k);
    return v;
  }

  /// Exact polynomial derivative of the given order, evaluated at zeta.
  Eigen::VectorXcd derivative(Complex zeta, int order = 1) const {
    Eigen::MatrixXcd c = coeffs;
    for (int o = 0; o < order; ++o) {
      if (c.cols() == 1) return Eigen::VectorXcd::Zero(c.rows());
      Eigen::MatrixXcd dc(c.rows(), c.cols() - 1);
      for (Eigen::Index k = 1; k < c.cols(); ++k)
        dc.col(k - 1) = static_cast<double>(k) * c.col(k);
      c = dc;
    }
    Eigen::VectorXcd v = c.col(c.cols() - 1);
    for (Eigen::Index k = c.cols() - 2; k >= 0; --k) v = v * zeta + c.col(k);
    return v;
  }

  /// Coefficient sums; zero iff the disc vanishes at zeta = 1.
  Eigen::VectorXcd value_at_one() const { return coeffs.rowwise().sum(); }

  PolyDisc head(Eigen::Index first, Eigen::Index count) const {
    return PolyDisc(coeffs.middleRows(first, count));
  }
};

inline PolyDisc operator+(const PolyDisc& a, const PolyDisc& b) {
  Eigen::Index deg = std::max(a.degree(), b.degree());
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(a.dim(), deg + 1);
  c.leftCols(a.coeffs.cols()) = a.coeffs;
  c.leftCols(b.coeffs.cols()) += b.coeffs;
  return PolyDisc(std::move(c));
}

inline PolyDisc operator*(double s, const PolyDisc& a) {
  return PolyDisc(s * a.coeffs);
}

/// Stack two discs component-wise (a on top).
inline PolyDisc vstack(const PolyDisc& a, const PolyDisc& b) {
  Eigen::Index deg = std::max(a.degree(), b.degree());
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(a.dim() + b.dim(), deg + 1);
  c.topLeftCorner(a.dim(), a.coeffs.cols()) = a.coeffs;
  c.bottomLeftCorner(b.dim(), b.coeffs.cols()) = b.coeffs;
  return PolyDisc(std::move(c));
}

/// Multiply every component by (1 - zeta).
inline PolyDisc one_minus_zeta_times(const PolyDisc& p) {
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(p.dim(), p.coeffs.cols() + 1);
  c.leftCols(p.coeffs.cols()) = p.coeffs;
  c.rightCols(p.coeffs.cols()) -= p.coeffs;
  return PolyDisc(std::move(c));
}

inline std::vector<Complex> unit_roots(int count) {
  std::vector<Complex> zs(count);
  for (int k = 0; k < count; ++k) {
    double th = 2.0 * M_PI * k / count;
    zs[k] = Complex(std::cos(th), std::sin(th));
  }
  return zs;
}

/// Plain DFT of boundary samples: bin m of K samples.  Holomorphic content
/// lives in the low bins; bins above the truncation degree are the tail.
inline Eigen::MatrixXcd dft_bins(const Eigen::MatrixXcd& samples) {
  const Eigen::Index m = samples.rows(), K = samples.cols();
  Eigen::MatrixXcd bins(m, K);
  for (Eigen::Index b = 0; b < K; ++b) {
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(m);
    for (Eigen::Index k = 0; k < K; ++k) {
      double th = -2.0 * M_PI * b * k / K;
      acc += samples.col(k) * Complex(std::cos(th), std::sin(th));
    }
    bins.col(b) = acc / static_cast<double>(K);
  }
  return bins;
}

/// Realify a complex vector as (Re; Im).
inline Eigen::VectorXd realify(const Eigen::VectorXcd& v) {
  Eigen::VectorXd r(2 * v.size());
  r.head(v.size()) = v.real();
  r.tail(v.size()) = v.imag();
  return r;
}

}  // namespace stadisc
