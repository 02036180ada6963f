#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "stadisc/disc.hpp"
#include "stadisc/fixtures.hpp"
#include "stadisc/nondegeneracy.hpp"

using namespace stadisc;
using namespace stadisc::testing;

namespace {

// Largest principal angle between the column spans of two real matrices.
double max_principal_angle(const Eigen::MatrixXd& U, const Eigen::MatrixXd& W) {
  auto thin = [](const Eigen::MatrixXd& m) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    Eigen::MatrixXd q = qr.householderQ() *
                        Eigen::MatrixXd::Identity(m.rows(), m.cols());
    return q;
  };
  Eigen::MatrixXd q1 = thin(U), q2 = thin(W);
  // sine-based formula: accurate for small angles where acos saturates
  Eigen::MatrixXd resid = q2 - q1 * (q1.transpose() * q2);
  double s = resid.jacobiSvd().singularValues().maxCoeff();
  return std::asin(std::clamp(s, 0.0, 1.0));
}

struct Sample {
  HermitianModel model;
  Eigen::VectorXd c;
  Eigen::VectorXcd V;
};

Sample random_t_sample(std::mt19937_64& rng) {
  for (;;) {
    int n = 1 + static_cast<int>(rng() % 3);
    int d = 1 + static_cast<int>(rng() % 3);
    Sample s;
    s.model = random_model(n, d, rng);
    auto t = find_invertible_combination(s.model);
    if (!t.c) continue;
    s.c = *t.c;
    s.V = random_cvector(n, rng);
    return s;
  }
}

}  // namespace

TEST_CASE("canonical lifts attach and are stationary on random models") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    Sample s = random_t_sample(rng);
    LiftedDisc lift = canonical_lift(s.model, s.V, s.c);
    CHECK(attachment_residual(s.model, lift.base) <= 1e-12);
    CHECK(stationarity_residual(s.model, lift) <= 1e-10);
  }
}

TEST_CASE("canonical lift is scale-covariant in c") {
  auto q1 = fixtures::q1();
  Eigen::VectorXd c(3);
  c << 1, 1, 0;
  Eigen::VectorXcd V(2);
  V << Complex(1, 0), Complex(0, 1);
  LiftedDisc a = canonical_lift(q1, V, c);
  LiftedDisc b = canonical_lift(q1, V, Eigen::VectorXd(3.0 * c));
  CHECK((b.base.coeffs - a.base.coeffs).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((b.cotangent.coeffs - 3.0 * a.cotangent.coeffs).cwiseAbs().maxCoeff() <
        1e-13);
  CHECK(stationarity_residual(q1, b) <= 1e-10);
}

TEST_CASE("canonical lift rejects singular combinations") {
  auto q2 = fixtures::q2();
  Eigen::VectorXd c(2);
  c << 1, 0;  // A1 = diag(1,-1,0) singular
  Eigen::VectorXcd V(3);
  V << 1.0, 0.0, 1.0;
  CHECK_THROWS_AS(canonical_lift(q2, V, c), std::invalid_argument);
}

TEST_CASE("defect kernel equals the kernel of c -> sum c_j A_j V") {
  std::mt19937_64 rng(77);
  int degenerate_seen = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Sample s = random_t_sample(rng);
    const int n = s.model.n, d = s.model.d;
    LiftedDisc lift = canonical_lift(s.model, s.V, s.c);
    DefectResult res = compute_defect(s.model, lift.base);

    // oracle: real kernel of the d columns realify(A_j V)
    Eigen::MatrixXd M(2 * n, d);
    for (int j = 0; j < d; ++j) M.col(j) = realify(s.model.A[j] * s.V);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
    Eigen::VectorXd sv = svd.singularValues();
    double thr = 1e-9 * std::max(1.0, sv.size() ? sv.maxCoeff() : 0.0);
    int rank = static_cast<int>((sv.array() > thr).count());
    int oracle_defect = d - rank;
    CHECK(res.defect == oracle_defect);
    if (oracle_defect > 0) {
      ++degenerate_seen;
      Eigen::MatrixXd oracle_kernel = svd.matrixV().rightCols(oracle_defect);
      Eigen::MatrixXd computed(d, res.defect);
      for (int k = 0; k < res.defect; ++k) computed.col(k) = res.kernel_basis[k];
      CHECK(max_principal_angle(oracle_kernel, computed) <= 1e-8);
    }
  }
  (void)degenerate_seen;  // generic samples are mostly nondefective
}

TEST_CASE("q1 with V=(1,1) has defect one with the frozen kernel vector") {
  auto q1 = fixtures::q1();
  Eigen::VectorXd c(3);
  c << 1, 1, 0;
  Eigen::VectorXcd V(2);
  V << Complex(1, 0), Complex(1, 0);
  LiftedDisc lift = canonical_lift(q1, V, c);
  DefectResult res = compute_defect(q1, lift.base);
  REQUIRE(res.defect == 1);
  Eigen::VectorXd expect(3);
  expect << 1, 1, -1;
  expect.normalize();
  double overlap = std::abs(res.kernel_basis[0].dot(expect));
  CHECK(overlap == doctest::Approx(1.0).epsilon(1e-10));

  Eigen::VectorXcd Vg(2);
  Vg << Complex(1, 0), Complex(0, 1);
  CHECK(is_nondefective(q1, canonical_lift(q1, Vg, c).base));
}

TEST_CASE("defect rejects perturbed models and non-attached discs") {
  auto q1 = fixtures::q1();
  HermitianModel pert = q1;
  PerturbationTerm t;
  t.row = 1;
  t.coeff = 1.0;
  t.z_exp = {2, 0};
  t.zbar_exp = {0, 1};
  t.imw_exp = {0, 0, 0};
  pert.perturbation = {t};
  Eigen::VectorXd c(3);
  c << 1, 1, 0;
  Eigen::VectorXcd V(2);
  V << Complex(1, 0), Complex(0, 1);
  PolyDisc disc = canonical_lift(q1, V, c).base;
  CHECK_THROWS_AS(compute_defect(pert, disc), std::invalid_argument);

  PolyDisc off = disc;
  off.coeffs(2, 0) += 0.5;  // breaks attachment
  CHECK_THROWS_AS(compute_defect(q1, off), std::invalid_argument);
}

TEST_CASE("defect is invariant under disc reparametrizations fixing 1") {
  auto q1 = fixtures::q1();
  Eigen::VectorXd c(3);
  c << 1, 1, 0;
  for (double vre : {1.0}) {
    for (Complex v2 : {Complex(1, 0), Complex(0, 1)}) {
      Eigen::VectorXcd V(2);
      V << Complex(vre, 0), v2;
      PolyDisc disc = canonical_lift(q1, V, c).base;
      int base_defect = compute_defect(q1, disc).defect;

      // phi_a(zeta) = (zeta - a) / (1 - a zeta), a real, fixes 1; the
      // composition is projected back to a polynomial of high degree.
      const double a = 0.2;
      const int deg = 40, K = 256;
      auto roots = unit_roots(K);
      Eigen::MatrixXcd samples(disc.dim(), K);
      for (int k = 0; k < K; ++k) {
        Complex phi = (roots[k] - a) / (1.0 - a * roots[k]);
        samples.col(k) = disc.eval(phi);
      }
      Eigen::MatrixXcd bins = dft_bins(samples);
      CHECK(bins.rightCols(K - deg - 1).cwiseAbs().maxCoeff() < 1e-12);
      PolyDisc re(bins.leftCols(deg + 1));
      CHECK(compute_defect(q1, re).defect == base_defect);
    }
  }
}

TEST_CASE("pushforward by rotations and dilations preserves stationarity") {
  auto sphere = fixtures::sphere();
  Eigen::VectorXd c(1);
  c << 1;
  Eigen::VectorXcd V(1);
  V << Complex(1, 0);
  LiftedDisc lift = canonical_lift(sphere, V, c);

  // rotation (e^{i phi} z, w)
  PolyMap rot = PolyMap::identity(2);
  rot.components[0][0].coeff = std::polar(1.0, 0.7);
  auto pr = pushforward_lift(rot, lift);
  CHECK(pr.truncation_tail < 1e-12);
  CHECK(attachment_residual(sphere, pr.lift.base) <= 1e-10);
  CHECK(stationarity_residual(sphere, pr.lift) <= 1e-8);

  // dilation (t z, t^2 w)
  PolyMap dil = PolyMap::identity(2);
  dil.components[0][0].coeff = 1.3;
  dil.components[1][0].coeff = 1.3 * 1.3;
  auto pd = pushforward_lift(dil, lift);
  CHECK(attachment_residual(sphere, pd.lift.base) <= 1e-10);
  CHECK(stationarity_residual(sphere, pd.lift) <= 1e-8);
}

TEST_CASE("maps with trivial 2-jet preserve the 1-jet of the lift at 1") {
  auto sphere = fixtures::sphere();
  Eigen::VectorXd c(1);
  c << 1;
  Eigen::VectorXcd V(1);
  V << Complex(1, 0);
  LiftedDisc lift = canonical_lift(sphere, V, c);

  // F = (z + eps z w, w + eps z^3): identity plus weight-3 terms whose
  // classical Hessian only touches the z-component.
  const double eps = 1e-2;
  PolyMap F = PolyMap::identity(2);
  F.components[0].push_back({Complex(eps, 0), {1, 1}});
  F.components[1].push_back({Complex(eps, 0), {3, 0}});
  auto pf = pushforward_lift(F, lift);
  CHECK(pf.truncation_tail < 1e-12);

  auto jet = [](const LiftedDisc& L) {
    Eigen::VectorXcd j(2 * L.N() * 2);
    j << L.base.value_at_one(), L.base.derivative(1.0),
        L.cotangent.value_at_one(), L.cotangent.derivative(1.0);
    return j;
  };
  CHECK((jet(pf.lift) - jet(lift)).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("pushforward by the identity is the identity") {
  auto q1 = fixtures::q1();
  Eigen::VectorXd c(3);
  c << 1, 1, 0;
  Eigen::VectorXcd V(2);
  V << Complex(1, 0), Complex(0, 1);
  LiftedDisc lift = canonical_lift(q1, V, c);
  auto p = pushforward_lift(PolyMap::identity(5), lift, 4);
  CHECK((p.lift.base.coeffs.leftCols(2) - lift.base.coeffs).cwiseAbs().maxCoeff() <
        1e-13);
  CHECK((p.lift.cotangent.coeffs.leftCols(2) - lift.cotangent.coeffs)
            .cwiseAbs()
            .maxCoeff() < 1e-13);
}
