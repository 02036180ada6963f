// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure.  Tolerances are pinned here and nowhere else.
#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "stadisc/deformation.hpp"
#include "stadisc/disc.hpp"
#include "stadisc/fixtures.hpp"
#include "stadisc/nondegeneracy.hpp"
#include "stadisc/rh.hpp"

using namespace stadisc;

namespace {

int g_failures = 0;

void report(int criterion, const char* label, bool pass, double elapsed_s) {
  std::printf("%s  criterion %d: %s (%.2fs)\n", pass ? "PASS" : "FAIL",
              criterion, label, elapsed_s);
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

Eigen::MatrixXcd random_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = Complex(g(rng), g(rng));
  return 0.5 * (m + m.adjoint());
}

struct Sample {
  HermitianModel model;
  Eigen::VectorXd c;
  Eigen::VectorXcd V;
};

Sample random_t_sample(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  for (;;) {
    int n = 1 + static_cast<int>(rng() % 3);
    int d = 1 + static_cast<int>(rng() % 3);
    Sample s;
    s.model.n = n;
    s.model.d = d;
    for (int j = 0; j < d; ++j) s.model.A.push_back(random_hermitian(n, rng));
    auto t = find_invertible_combination(s.model);
    if (!t.c) continue;
    s.c = *t.c;
    s.V = Eigen::VectorXcd(n);
    for (int i = 0; i < n; ++i) s.V[i] = Complex(g(rng), g(rng));
    return s;
  }
}

double max_principal_angle(const Eigen::MatrixXd& U, const Eigen::MatrixXd& W) {
  auto thin = [](const Eigen::MatrixXd& m) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    return Eigen::MatrixXd(qr.householderQ() *
                           Eigen::MatrixXd::Identity(m.rows(), m.cols()));
  };
  Eigen::MatrixXd q1 = thin(U), q2 = thin(W);
  Eigen::MatrixXd resid = q2 - q1 * (q1.transpose() * q2);
  double s = resid.jacobiSvd().singularValues().maxCoeff();
  return std::asin(std::clamp(s, 0.0, 1.0));
}

// 1: fixture classification verdicts.
void criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  auto rep1 = classify(fixtures::q1());
  bool q1_ok = rep1.cond_a && rep1.cond_b && rep1.cond_t && rep1.cond_d &&
               !rep1.cond_f && rep1.f_exactly_impossible;
  double t1 = seconds_since(t0);

  auto tq2 = std::chrono::steady_clock::now();
  auto rep2 = classify(fixtures::q2());
  bool q2_ok = rep2.cond_d && !rep2.strictly_pseudoconvex_witness;
  double t2 = seconds_since(tq2);

  report(1, "fixture classification verdicts",
         q1_ok && q2_ok && t1 < 1.0 && t2 < 1.0, seconds_since(t0));
}

// 2: canonical lifts on 200 seeded models.
void criterion2() {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240601);
  bool ok = true;
  for (int trial = 0; trial < 200; ++trial) {
    Sample s = random_t_sample(rng);
    LiftedDisc lift = canonical_lift(s.model, s.V, s.c);
    ok = ok && attachment_residual(s.model, lift.base) <= 1e-12 &&
         stationarity_residual(s.model, lift) <= 1e-10;
  }
  double e = seconds_since(t0);
  report(2, "canonical lifts attach and are stationary (200 models)",
         ok && e < 30.0, e);
}

// 3: Fourier-defect kernel equals the kernel of c -> sum c_j A_j V.
void criterion3() {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::mt19937_64 rng(777);
  int pairs = 0;
  while (pairs < 99) {
    Sample s = random_t_sample(rng);
    const int d = s.model.d, n = s.model.n;
    LiftedDisc lift = canonical_lift(s.model, s.V, s.c);
    DefectResult res = compute_defect(s.model, lift.base);

    Eigen::MatrixXd M(2 * n, d);
    for (int j = 0; j < d; ++j) M.col(j) = realify(s.model.A[j] * s.V);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
    Eigen::VectorXd sv = svd.singularValues();
    double thr = 1e-9 * std::max(1.0, sv.maxCoeff());
    int rank = static_cast<int>((sv.array() > thr).count());
    ok = ok && res.defect == d - rank;
    if (res.defect > 0 && res.defect == d - rank) {
      Eigen::MatrixXd expect = svd.matrixV().rightCols(res.defect);
      Eigen::MatrixXd got(d, res.defect);
      for (int k = 0; k < res.defect; ++k) got.col(k) = res.kernel_basis[k];
      ok = ok && max_principal_angle(expect, got) <= 1e-8;
    }
    ++pairs;
  }

  // the defect-1 pair: q1 with V = (1,1)
  auto q1 = fixtures::q1();
  Eigen::VectorXd c(3);
  c << 1, 1, 0;
  Eigen::VectorXcd V(2);
  V << Complex(1, 0), Complex(1, 0);
  auto res = compute_defect(q1, canonical_lift(q1, V, c).base);
  Eigen::VectorXd expect(3);
  expect << 1, 1, -1;
  expect.normalize();
  ok = ok && res.defect == 1 &&
       std::abs(std::abs(res.kernel_basis[0].dot(expect)) - 1.0) <= 1e-8;

  report(3, "defect kernel oracle equivalence (100 pairs)", ok,
         seconds_since(t0));
}

// 4: tangent-kernel dimension 2N; closed-form elements solve the system.
void criterion4() {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;

  std::vector<Sample> cases;
  {
    Sample s;
    s.model = fixtures::sphere();
    s.c = Eigen::VectorXd::Ones(1);
    s.V = Eigen::VectorXcd::Ones(1);
    cases.push_back(s);
  }
  {
    Sample s;
    s.model = fixtures::q1();
    s.c = Eigen::VectorXd(3);
    s.c << 1, 1, 0;
    s.V = Eigen::VectorXcd(2);
    s.V << Complex(1, 0), Complex(0, 1);
    cases.push_back(s);
  }
  {
    Sample s;
    s.model = fixtures::q2();
    s.c = Eigen::VectorXd(2);
    s.c << 1, 1;
    s.V = Eigen::VectorXcd(3);
    s.V << 1.0, 0.0, 1.0;
    cases.push_back(s);
  }
  {
    Sample s;
    s.model = fixtures::twin_sphere();
    s.c = Eigen::VectorXd(2);
    s.c << 1, 1;
    s.V = Eigen::VectorXcd::Ones(1);
    cases.push_back(s);
  }
  std::mt19937_64 rng(4242);
  for (int k = 0; k < 50; ++k) cases.push_back(random_t_sample(rng));

  for (const Sample& s : cases) {
    GAssembly G = assemble_G(s.model, s.V, s.c);
    KernelBasis kb = tangent_kernel(G, KernelMethod::Both);
    ok = ok && static_cast<int>(kb.elements.size()) == 2 * s.model.N();
    for (const auto& el : kb.closed_form) ok = ok && el.residual <= 1e-9;
  }
  report(4, "tangent kernel dimension 2N and closed-form residuals", ok,
         seconds_since(t0));
}

// 5: jet certificates on the fixture witnesses.
void criterion5() {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;

  Eigen::VectorXd c1(3);
  c1 << 1, 1, 0;
  Eigen::VectorXcd V1(2);
  V1 << Complex(1, 0), Complex(0, 1);
  ok = ok && certify_jet_injectivity(assemble_G(fixtures::q1(), V1, c1), 1)
                 .injective;

  Eigen::VectorXd c2(2);
  c2 << 1, 1;
  Eigen::VectorXcd Vgood(3), Vbad(3);
  Vgood << 1.0, 0.0, 1.0;
  Vbad << 1.0, 1.0, 1.0;
  ok = ok && certify_jet_injectivity(assemble_G(fixtures::q2(), Vgood, c2), 1)
                 .injective;
  auto bad = certify_jet_injectivity(assemble_G(fixtures::q2(), Vbad, c2), 1);
  ok = ok && !bad.injective && (bad.kernel_dim - bad.rank) == 1;

  Eigen::VectorXd ct(2);
  ct << 1, 1;
  Eigen::VectorXcd Vt(1);
  Vt << Complex(1, 0);
  auto twin = assemble_G(fixtures::twin_sphere(), Vt, ct);
  ok = ok && !certify_jet_injectivity(twin, 1).injective &&
       certify_jet_injectivity(twin, 2).injective;

  report(5, "jet injectivity certificates (orders 1 and 2)", ok,
         seconds_since(t0));
}

// 6: explicit factorization identity and reflection kernel profile.
void criterion6() {
  auto t0 = std::chrono::steady_clock::now();
  BirkhoffReport bk = birkhoff_check();
  bool ok = bk.theta_identity_error <= 1e-14 && bk.block_kernel_dim == 4 &&
            bk.max_high_degree_coeff <= 1e-10 && bk.pass;
  report(6, "factorization identity and reflection kernel", ok,
         seconds_since(t0));
}

// 7: Newton continuation.
void criterion7() {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;

  Eigen::VectorXd c(3);
  c << 1, 1, 0;
  Eigen::VectorXcd V(2);
  V << Complex(1, 0), Complex(0, 1);

  // zero-perturbation fixed point
  {
    SolveConfig cfg;
    cfg.deg_max = 8;
    StationaryFamily fam(fixtures::q1(), V, c, cfg);
    Eigen::VectorXd x0 = fam.initial_state();
    auto pt =
        newton_solve(fam, x0, fam.pinned_params(fam.lift_from_state(x0)));
    ok = ok && pt.converged && pt.residual <= 1e-12;
  }

  // cubic perturbation
  HermitianModel pert = fixtures::q1();
  PerturbationTerm t;
  t.row = 1;
  t.coeff = 1e-3;
  t.z_exp = {2, 0};
  t.zbar_exp = {0, 1};
  t.imw_exp = {0, 0, 0};
  pert.perturbation = {t};
  {
    SolveConfig cfg;
    cfg.deg_max = 12;
    auto pt = newton_solve(pert, V, c, Eigen::VectorXd(), cfg);
    ok = ok && pt.converged && pt.residual <= 1e-10 &&
         attachment_residual(pert, pt.lift.base) <= 1e-10;
  }

  // damping independence at a fixed pinned target
  {
    SolveConfig a;
    a.deg_max = 10;
    SolveConfig b = a;
    b.damping = 0.5;
    StationaryFamily fa(pert, V, c, a), fb(pert, V, c, b);
    Eigen::VectorXd target =
        fa.pinned_params(fa.lift_from_state(fa.initial_state()));
    target[0] += 0.01;
    auto pa = newton_solve(fa, fa.initial_state(), target);
    auto pb = newton_solve(fb, fb.initial_state(), target);
    double diff = std::max(
        (pa.lift.base.coeffs - pb.lift.base.coeffs).cwiseAbs().maxCoeff(),
        (pa.lift.cotangent.coeffs - pb.lift.cotangent.coeffs)
            .cwiseAbs()
            .maxCoeff());
    ok = ok && pa.converged && pb.converged && diff <= 1e-8;
  }

  // analytic Jacobian against central finite differences
  {
    SolveConfig cfg;
    cfg.deg_max = 3;
    cfg.samples = 24;
    StationaryFamily fam(pert, V, c, cfg);
    Eigen::VectorXd x = fam.initial_state();
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (int i = 0; i < x.size(); ++i) x[i] += 0.01 * g(rng);
    Eigen::VectorXd target = Eigen::VectorXd::Zero(fam.pin_indices().size());
    Eigen::MatrixXd J = fam.jacobian(x, target);
    double scale = std::max(1.0, J.cwiseAbs().maxCoeff());
    const double h = 1e-6;
    double max_rel = 0.0;
    for (int p = 0; p < x.size(); ++p) {
      Eigen::VectorXd xp = x, xm = x;
      xp[p] += h;
      xm[p] -= h;
      Eigen::VectorXd col =
          (fam.residual(xp, target) - fam.residual(xm, target)) / (2 * h);
      max_rel =
          std::max(max_rel, (col - J.col(p)).cwiseAbs().maxCoeff() / scale);
    }
    ok = ok && max_rel <= 1e-6;
  }

  double e = seconds_since(t0);
  report(7, "Newton continuation (fixed point, perturbed solve, Jacobian)",
         ok && e < 60.0, e);
}

// 8: coverage probe.
void criterion8() {
  auto t0 = std::chrono::steady_clock::now();
  Eigen::VectorXd c1(3);
  c1 << 1, 1, 0;
  Eigen::VectorXcd V1(2);
  V1 << Complex(1, 0), Complex(0, 1);
  auto good = coverage_probe(fixtures::q1(), V1, c1, {});
  bool ok = good.jacobian_rank == 10 && good.covering_certified &&
            good.psi_max_residual <= 1e-8;

  Eigen::VectorXd c2(2);
  c2 << 1, 1;
  Eigen::VectorXcd V2(3);
  V2 << 1.0, 1.0, 1.0;
  auto bad = coverage_probe(fixtures::q2(), V2, c2, {});
  ok = ok && bad.jacobian_rank < bad.required_rank &&
       !bad.covering_certified && bad.psi_max_residual <= 1e-8;

  report(8, "conormal coverage probe (rank and membership)", ok,
         seconds_since(t0));
}

// 9: pushforward properties on the sphere.
void criterion9() {
  auto t0 = std::chrono::steady_clock::now();
  auto sphere = fixtures::sphere();
  Eigen::VectorXd c(1);
  c << 1;
  Eigen::VectorXcd V(1);
  V << Complex(1, 0);
  LiftedDisc lift = canonical_lift(sphere, V, c);
  bool ok = true;

  PolyMap rot = PolyMap::identity(2);
  rot.components[0][0].coeff = std::polar(1.0, 1.1);
  auto pr = pushforward_lift(rot, lift);
  ok = ok && attachment_residual(sphere, pr.lift.base) <= 1e-8 &&
       stationarity_residual(sphere, pr.lift) <= 1e-8;

  PolyMap dil = PolyMap::identity(2);
  dil.components[0][0].coeff = 0.8;
  dil.components[1][0].coeff = 0.64;
  auto pd = pushforward_lift(dil, lift);
  ok = ok && attachment_residual(sphere, pd.lift.base) <= 1e-8 &&
       stationarity_residual(sphere, pd.lift) <= 1e-8;

  // trivial 2-jet: F = (z + eps z w, w + eps z^3)
  PolyMap F = PolyMap::identity(2);
  F.components[0].push_back({Complex(1e-2, 0), {1, 1}});
  F.components[1].push_back({Complex(1e-2, 0), {3, 0}});
  auto pf = pushforward_lift(F, lift);
  auto jet = [](const LiftedDisc& L) {
    Eigen::VectorXcd j(4 * L.N());
    j << L.base.value_at_one(), L.base.derivative(1.0),
        L.cotangent.value_at_one(), L.cotangent.derivative(1.0);
    return j;
  };
  ok = ok && (jet(pf.lift) - jet(lift)).cwiseAbs().maxCoeff() <= 1e-8;

  report(9, "pushforward invariance and shared 1-jet", ok, seconds_since(t0));
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  if (g_failures) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all 9 criteria passed\n");
  return 0;
}
