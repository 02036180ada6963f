#include "stadisc/nondegeneracy.hpp"

#include <cmath>
#include <random>

namespace stadisc {

namespace {

Eigen::MatrixXcd combination(const HermitianModel& model,
                             const Eigen::VectorXd& c) {
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(model.n, model.n);
  for (int j = 0; j < model.d; ++j) A += c[j] * model.A[j];
  return A;
}

/// Deterministic candidate stream for real vectors c in R^d: canonical basis,
/// +-1 sign patterns, then seeded gaussian samples.
class RealCandidates {
 public:
  RealCandidates(int dim, const SearchConfig& cfg)
      : dim_(dim), cfg_(cfg), rng_(cfg.seed), normal_(0.0, 1.0) {
    patterns_ = 1;
    for (int i = 0; i < dim && patterns_ < cfg_.sign_pattern_cap; ++i)
      patterns_ *= 2;
  }

  std::optional<Eigen::VectorXd> next() {
    if (stage_ == 0) {
      if (index_ < dim_) return Eigen::VectorXd::Unit(dim_, index_++);
      stage_ = 1;
      index_ = 0;
    }
    if (stage_ == 1) {
      while (index_ < patterns_ && index_ < cfg_.sign_pattern_cap) {
        Eigen::VectorXd v(dim_);
        for (int i = 0; i < dim_; ++i)
          v[i] = (index_ >> i) & 1 ? -1.0 : 1.0;
        ++index_;
        return v;
      }
      stage_ = 2;
      index_ = 0;
    }
    if (index_ >= cfg_.budget) return std::nullopt;
    ++index_;
    Eigen::VectorXd v(dim_);
    for (int i = 0; i < dim_; ++i) v[i] = normal_(rng_);
    return v;
  }

 private:
  int dim_;
  SearchConfig cfg_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
  int stage_ = 0;
  long index_ = 0;
  long patterns_ = 0;
};

/// Candidate stream for complex witness vectors V: canonical basis, the
/// gaussian-integer lattice with entries in {-2..2} + {-2..2}i, then seeded
/// random vectors.
class ComplexCandidates {
 public:
  ComplexCandidates(int dim, const SearchConfig& cfg)
      : dim_(dim), cfg_(cfg), rng_(cfg.seed), normal_(0.0, 1.0),
        odometer_(dim, 0) {}

  std::optional<Eigen::VectorXcd> next() {
    if (stage_ == 0) {
      if (index_ < dim_) return Eigen::VectorXcd::Unit(dim_, index_++);
      stage_ = 1;
      index_ = 0;
    }
    if (stage_ == 1) {
      while (index_ < cfg_.budget) {
        ++index_;
        if (!advance()) break;
        Eigen::VectorXcd v(dim_);
        bool zero = true;
        for (int i = 0; i < dim_; ++i) {
          v[i] = kValues[odometer_[i]];
          if (v[i] != Complex(0, 0)) zero = false;
        }
        if (!zero) return v;
      }
      stage_ = 2;
      index_ = 0;
    }
    if (index_ >= cfg_.budget) return std::nullopt;
    ++index_;
    Eigen::VectorXcd v(dim_);
    for (int i = 0; i < dim_; ++i) v[i] = Complex(normal_(rng_), normal_(rng_));
    return v;
  }

 private:
  static constexpr int kNumValues = 25;
  static const Complex kValues[kNumValues];

  bool advance() {
    for (int i = 0; i < dim_; ++i) {
      if (++odometer_[i] < kNumValues) return true;
      odometer_[i] = 0;
    }
    return false;
  }

  int dim_;
  SearchConfig cfg_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
  std::vector<int> odometer_;
  int stage_ = 0;
  long index_ = 0;
};

const Complex ComplexCandidates::kValues[] = {
    {0, 0},  {1, 0},   {-1, 0}, {0, 1},   {0, -1},  {1, 1},   {1, -1},
    {-1, 1}, {-1, -1}, {2, 0},  {-2, 0},  {0, 2},   {0, -2},  {2, 1},
    {2, -1}, {-2, 1},  {-2, -1}, {1, 2},  {1, -2},  {-1, 2},  {-1, -2},
    {2, 2},  {2, -2},  {-2, 2}, {-2, -2}};

double det2(const Eigen::MatrixXcd& m) {
  return (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
}

/// For n <= 2 the determinant of sum c_j A_j is a polynomial in c of degree
/// <= 2 whose coefficients we can read off exactly; identically zero means
/// condition (t) provably fails.
bool determinant_identically_zero(const HermitianModel& model) {
  double scale = 0.0;
  for (const auto& a : model.A)
    scale = std::max(scale, a.cwiseAbs().maxCoeff());
  if (scale == 0.0) return true;
  const double tol = 1e-12 * std::max(1.0, scale * scale);
  if (model.n == 1) {
    for (const auto& a : model.A)
      if (std::abs(a(0, 0)) > tol) return false;
    return true;
  }
  for (int j = 0; j < model.d; ++j) {
    if (std::abs(det2(model.A[j])) > tol) return false;
    for (int k = j + 1; k < model.d; ++k) {
      double cross = det2(model.A[j] + model.A[k]) - det2(model.A[j]) -
                     det2(model.A[k]);
      if (std::abs(cross) > tol) return false;
    }
  }
  return true;
}

WitnessSearchResult witness_search(const HermitianModel& model,
                                   const Eigen::VectorXd& c,
                                   const SearchConfig& search,
                                   bool require_B_invertible) {
  WitnessSearchResult out;
  const int bound = require_B_invertible ? model.n : 2 * model.n;
  if (model.d > bound) {
    out.exactly_impossible = true;
    return out;
  }
  const Eigen::MatrixXcd A = combination(model, c);
  if (!invertible(A, search.tol))
    throw std::invalid_argument(
        "witness search requires an invertible combination sum c_j A_j");

  ComplexCandidates candidates(model.n, search);
  while (auto V = candidates.next()) {
    Eigen::VectorXcd v = V->normalized();
    WitnessMatrices wm = witness_matrices(model, c, v);
    const Eigen::MatrixXcd reB = wm.B.real().cast<Complex>();
    double s = sigma_min(reB);
    bool ok = s > search.tol * std::max(1.0, sigma_max(reB));
    if (ok && require_B_invertible) {
      double sb = sigma_min(wm.B);
      ok = sb > search.tol * std::max(1.0, sigma_max(wm.B));
      s = std::min(s, sb);
    }
    if (ok) {
      out.V = v;
      out.B = wm.B;
      out.sigma_min = s;
      return out;
    }
  }
  return out;
}

}  // namespace

double sigma_min(const Eigen::MatrixXcd& m) {
  return m.jacobiSvd().singularValues().minCoeff();
}

double sigma_max(const Eigen::MatrixXcd& m) {
  return m.jacobiSvd().singularValues().maxCoeff();
}

bool invertible(const Eigen::MatrixXcd& m, double tol) {
  Eigen::VectorXd sv = m.jacobiSvd().singularValues();
  return sv.minCoeff() > tol * std::max(1.0, sv.maxCoeff());
}

int rank_of(const Eigen::MatrixXd& m, double tol) {
  Eigen::VectorXd sv = m.jacobiSvd().singularValues();
  const double thr = tol * std::max(1.0, sv.size() ? sv.maxCoeff() : 0.0);
  return static_cast<int>((sv.array() > thr).count());
}

int rank_of(const Eigen::MatrixXcd& m, double tol) {
  Eigen::VectorXd sv = m.jacobiSvd().singularValues();
  const double thr = tol * std::max(1.0, sv.size() ? sv.maxCoeff() : 0.0);
  return static_cast<int>((sv.array() > thr).count());
}

BeloshapkaVerdict check_beloshapka(const HermitianModel& model, double tol) {
  model.validate();
  BeloshapkaVerdict v;

  // (a): flatten each Levi matrix to a real vector of length 2n^2.
  Eigen::MatrixXd flat(model.d, 2 * model.n * model.n);
  for (int j = 0; j < model.d; ++j) {
    const Eigen::VectorXcd col =
        Eigen::Map<const Eigen::VectorXcd>(model.A[j].data(),
                                           model.n * model.n);
    flat.row(j).head(model.n * model.n) = col.real().transpose();
    flat.row(j).tail(model.n * model.n) = col.imag().transpose();
  }
  Eigen::VectorXd sv_a = flat.jacobiSvd().singularValues();
  v.sigma_min_a = sv_a.minCoeff();
  v.cond_a = rank_of(flat, tol) == model.d;

  // (b): the stacked (dn) x n matrix has trivial kernel.
  Eigen::MatrixXcd stacked(model.d * model.n, model.n);
  for (int j = 0; j < model.d; ++j)
    stacked.middleRows(j * model.n, model.n) = model.A[j];
  Eigen::VectorXd sv_b = stacked.jacobiSvd().singularValues();
  v.sigma_min_b = sv_b.minCoeff();
  v.cond_b = rank_of(stacked, tol) == model.n;
  return v;
}

CombinationSearchResult find_invertible_combination(
    const HermitianModel& model, const SearchConfig& search) {
  model.validate();
  CombinationSearchResult out;
  if (model.n <= 2 && determinant_identically_zero(model)) {
    out.exactly_singular = true;
    return out;
  }
  RealCandidates candidates(model.d, search);
  while (auto c = candidates.next()) {
    Eigen::VectorXd cu = c->normalized();
    Eigen::MatrixXcd A = combination(model, cu);
    Eigen::VectorXd sv = A.jacobiSvd().singularValues();
    if (sv.minCoeff() > search.tol * std::max(1.0, sv.maxCoeff())) {
      out.c = cu;
      out.sigma_min = sv.minCoeff();
      return out;
    }
  }
  return out;
}

WitnessMatrices witness_matrices(const HermitianModel& model,
                                 const Eigen::VectorXd& c,
                                 const Eigen::VectorXcd& V) {
  WitnessMatrices wm;
  wm.A = combination(model, c);
  wm.D.resize(model.n, model.d);
  for (int j = 0; j < model.d; ++j) wm.D.col(j) = model.A[j] * V;
  wm.B = wm.D.adjoint() * wm.A.partialPivLu().solve(wm.D);
  return wm;
}

WitnessSearchResult certify_D_nondegenerate(const HermitianModel& model,
                                            const Eigen::VectorXd& c,
                                            const SearchConfig& search) {
  return witness_search(model, c, search, /*require_B_invertible=*/false);
}

WitnessSearchResult certify_fully_nondegenerate(const HermitianModel& model,
                                                const Eigen::VectorXd& c,
                                                const SearchConfig& search) {
  return witness_search(model, c, search, /*require_B_invertible=*/true);
}

bool check_strict_pseudoconvexity_witness(const HermitianModel& model,
                                          const Eigen::VectorXd& c,
                                          double tol) {
  Eigen::MatrixXcd A = combination(model, c);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
  const Eigen::VectorXd ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  return ev.minCoeff() > tol * scale;
}

bool conormal_totally_real_check(const HermitianModel& model,
                                 const Eigen::VectorXd& c, double tol) {
  const int n = model.n, d = model.d, N = model.N();
  const Eigen::MatrixXcd A = combination(model, c);

  // Real tangent basis of the conormal bundle at (0, sum c_j dr_j(0)),
  // as 2N vectors in C^{2N} ordered (z, w, ztilde, wtilde).
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(2 * N, 2 * N);
  int col = 0;
  for (int k = 0; k < n; ++k) {
    // directions e_k and i e_k in z; the ztilde part moves by -t(dzbar) A
    T(k, col) = 1.0;
    T.block(N, col, n, 1) = -(A.transpose().col(k));
    ++col;
    T(k, col) = kI;
    T.block(N, col, n, 1) = kI * A.transpose().col(k);
    ++col;
  }
  for (int j = 0; j < d; ++j) T(n + j, col++) = kI;        // Im w directions
  for (int j = 0; j < d; ++j) T(N + n + j, col++) = 0.5;   // conormal fiber

  Eigen::MatrixXd M(4 * N, 4 * N);
  for (int i = 0; i < 2 * N; ++i) {
    M.col(i) = realify(T.col(i));
    M.col(2 * N + i) = realify(Eigen::VectorXcd(kI * T.col(i)));
  }
  return rank_of(M, tol) == 4 * N;
}

NondegeneracyReport classify(const HermitianModel& model,
                             const SearchConfig& search) {
  model.validate();
  NondegeneracyReport rep;

  BeloshapkaVerdict bel = check_beloshapka(model, search.tol);
  rep.cond_a = bel.cond_a;
  rep.cond_b = bel.cond_b;
  rep.sigma_min_values["cond_a"] = bel.sigma_min_a;
  rep.sigma_min_values["cond_b"] = bel.sigma_min_b;

  CombinationSearchResult comb = find_invertible_combination(model, search);
  rep.t_exactly_singular = comb.exactly_singular;
  rep.cond_t = comb.c.has_value();
  if (!comb.c) return rep;

  rep.c_cert = comb.c;
  rep.sigma_min_values["cond_t"] = comb.sigma_min;
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(model.n, model.n);
  for (int j = 0; j < model.d; ++j) A += (*comb.c)[j] * model.A[j];
  rep.A_comb = A;

  WitnessSearchResult dres = certify_D_nondegenerate(model, *comb.c, search);
  rep.d_exactly_impossible = dres.exactly_impossible;
  rep.cond_d = dres.V.has_value();
  if (dres.V) {
    rep.V_cert = dres.V;
    WitnessMatrices wm = witness_matrices(model, *comb.c, *dres.V);
    rep.D_matrix = wm.D;
    rep.B_matrix = wm.B;
    rep.sigma_min_values["cond_d"] = dres.sigma_min;
  }

  WitnessSearchResult fres =
      certify_fully_nondegenerate(model, *comb.c, search);
  rep.f_exactly_impossible = fres.exactly_impossible;
  rep.cond_f = fres.V.has_value();
  if (fres.V) {
    rep.V_f_cert = fres.V;
    rep.sigma_min_values["cond_f"] = fres.sigma_min;
  }

  rep.strictly_pseudoconvex_witness =
      check_strict_pseudoconvexity_witness(model, *comb.c, search.tol);
  rep.conormal_totally_real =
      conormal_totally_real_check(model, *comb.c, search.tol);
  return rep;
}

}  // namespace stadisc
