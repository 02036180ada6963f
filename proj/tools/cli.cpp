// Command-line front end: classification, disc construction, defect,
// kernel/jet certificates, Newton continuation and the coverage probe.
#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stadisc/deformation.hpp"
#include "stadisc/disc.hpp"
#include "stadisc/fixtures.hpp"
#include "stadisc/io.hpp"
#include "stadisc/model.hpp"
#include "stadisc/nondegeneracy.hpp"
#include "stadisc/rh.hpp"

namespace fs = std::filesystem;
using namespace stadisc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNegative = 2;

struct Options {
  std::uint64_t seed = 0;
  double tol = kRankTol;
  int deg = 16;
  int order = 1;
  std::string V_str, c_str;
  double theta_max = 0.1;
  std::string format = "text";
  std::string out_path;
};

// Deterministic report: ordered key/value pairs rendered either as an
// aligned table (text) or one record per line (structured).
class Report {
 public:
  explicit Report(const Options& opt) : structured_(opt.format == "structured") {
    add("seed", std::to_string(opt.seed));
  }

  void add(const std::string& key, const std::string& value) {
    rows_.emplace_back(key, value);
  }
  void add(const std::string& key, double value) {
    std::ostringstream os;
    os << std::setprecision(12) << value;
    add(key, os.str());
  }
  void add(const std::string& key, int value) { add(key, std::to_string(value)); }
  void add(const std::string& key, bool value) {
    add(key, std::string(value ? "true" : "false"));
  }

  void print(std::ostream& os) const {
    if (structured_) {
      for (const auto& [k, v] : rows_) os << k << "=" << v << "\n";
      return;
    }
    std::size_t w = 0;
    for (const auto& [k, v] : rows_) w = std::max(w, k.size());
    for (const auto& [k, v] : rows_)
      os << "  " << std::left << std::setw(static_cast<int>(w) + 2) << k << v
         << "\n";
  }

 private:
  bool structured_;
  std::vector<std::pair<std::string, std::string>> rows_;
};

std::string fmt_complex(const Complex& z) {
  std::ostringstream os;
  os << std::setprecision(12) << z.real() << (z.imag() < 0 ? "-" : "+")
     << std::abs(z.imag()) << "i";
  return os.str();
}

std::string fmt_cvector(const Eigen::VectorXcd& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += fmt_complex(v[i]);
  }
  return s;
}

std::string fmt_rvector(const Eigen::VectorXd& v) {
  std::ostringstream os;
  os << std::setprecision(12);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) os << ",";
    os << v[i];
  }
  return os.str();
}

// Complex entries accepted as "a", "bi", "a+bi", "a-bi", "i", "-i".
Complex parse_complex_token(std::string t) {
  t.erase(std::remove_if(t.begin(), t.end(), ::isspace), t.end());
  if (t.empty()) throw std::invalid_argument("empty complex entry");
  if (t.back() == 'i' || t.back() == 'I') {
    t.pop_back();
    // split at the last +/- that is not an exponent sign or leading sign
    for (std::size_t p = t.size(); p-- > 1;) {
      if ((t[p] == '+' || t[p] == '-') &&
          t[p - 1] != 'e' && t[p - 1] != 'E') {
        double re = std::stod(t.substr(0, p));
        std::string ims = t.substr(p);
        double im = (ims == "+" || ims == "-") ? (ims == "-" ? -1.0 : 1.0)
                                               : std::stod(ims);
        return Complex(re, im);
      }
    }
    if (t.empty() || t == "+") return Complex(0, 1);
    if (t == "-") return Complex(0, -1);
    return Complex(0, std::stod(t));
  }
  return Complex(std::stod(t), 0);
}

Eigen::VectorXcd parse_cvector(const std::string& s) {
  std::vector<Complex> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) v.push_back(parse_complex_token(tok));
  Eigen::VectorXcd out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
  return out;
}

Eigen::VectorXd parse_rvector(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) v.push_back(std::stod(tok));
  return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

SearchConfig search_config(const Options& opt) {
  SearchConfig sc;
  sc.seed = opt.seed;
  sc.tol = opt.tol;
  return sc;
}

// Witness resolution: explicit --V/--c win; otherwise run the searches.
struct Witness {
  Eigen::VectorXd c;
  Eigen::VectorXcd V;
};

Witness resolve_witness(const HermitianModel& model, const Options& opt,
                        bool need_V = true) {
  Witness w;
  if (!opt.c_str.empty()) {
    w.c = parse_rvector(opt.c_str);
    if (w.c.size() != model.d)
      throw std::invalid_argument("--c: expected " + std::to_string(model.d) +
                                  " entries");
  } else {
    auto res = find_invertible_combination(model, search_config(opt));
    if (!res.c)
      throw std::invalid_argument(
          res.exactly_singular
              ? "no invertible combination exists (determinant identically zero)"
              : "no invertible combination found within budget");
    w.c = *res.c;
  }
  if (!need_V) return w;
  if (!opt.V_str.empty()) {
    w.V = parse_cvector(opt.V_str);
    if (w.V.size() != model.n)
      throw std::invalid_argument("--V: expected " + std::to_string(model.n) +
                                  " entries");
  } else {
    auto res = certify_D_nondegenerate(model, w.c, search_config(opt));
    if (!res.V)
      throw std::invalid_argument(
          res.exactly_impossible
              ? "no D-nondegeneracy witness exists (d > 2n)"
              : "no D-nondegeneracy witness found within budget");
    w.V = *res.V;
  }
  return w;
}

int run_classify_one(const fs::path& path, const Options& opt,
                     std::ostream& os) {
  HermitianModel model = load_model(path.string());
  NondegeneracyReport rep = classify(model, search_config(opt));

  Report r(opt);
  r.add("model", path.string());
  r.add("n", model.n);
  r.add("d", model.d);
  r.add("cond_a", rep.cond_a);
  r.add("cond_b", rep.cond_b);
  r.add("cond_t", rep.cond_t);
  if (rep.t_exactly_singular) r.add("cond_t_exact", std::string("determinant identically zero"));
  if (rep.c_cert) r.add("c", fmt_rvector(*rep.c_cert));
  r.add("cond_d", rep.cond_d);
  if (rep.d_exactly_impossible) r.add("cond_d_exact", std::string("impossible: d > 2n"));
  if (rep.V_cert) r.add("V", fmt_cvector(*rep.V_cert));
  r.add("cond_f", rep.cond_f);
  if (rep.f_exactly_impossible) r.add("cond_f_exact", std::string("impossible: d > n"));
  if (rep.V_f_cert) r.add("V_f", fmt_cvector(*rep.V_f_cert));
  r.add("strictly_pseudoconvex_witness", rep.strictly_pseudoconvex_witness);
  r.add("conormal_totally_real", rep.conormal_totally_real);
  for (const auto& [k, v] : rep.sigma_min_values) r.add("sigma_min_" + k, v);
  r.print(os);

  bool ok = rep.cond_a && rep.cond_b && rep.cond_t && rep.cond_d;
  return ok ? kExitOk : kExitNegative;
}

int run_classify(const std::string& target, const Options& opt) {
  fs::path p(target);
  if (!fs::is_directory(p)) return run_classify_one(p, opt, std::cout);

  // Directory fan-out: stable filename order, per-file seed derived from
  // the master seed so reports stay reproducible under parallel dispatch.
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(p))
    if (e.path().extension() == ".model") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::invalid_argument("no .model files in " + target);

  std::vector<std::future<std::pair<int, std::string>>> jobs;
  for (const auto& f : files) {
    Options per = opt;
    per.seed = opt.seed ^ fnv1a(f.filename().string());
    jobs.push_back(std::async(std::launch::async, [f, per] {
      std::ostringstream os;
      int code = run_classify_one(f, per, os);
      return std::make_pair(code, os.str());
    }));
  }
  int worst = kExitOk;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    auto [code, text] = jobs[i].get();
    std::cout << text;
    if (i + 1 < jobs.size()) std::cout << "\n";
    worst = std::max(worst, code);
  }
  return worst;
}

int run_disc(const std::string& model_path, const Options& opt) {
  HermitianModel model = load_model(model_path);
  Witness w = resolve_witness(model, opt);
  LiftedDisc lift = canonical_lift(model, w.V, w.c, opt.tol);
  HermitianModel quadric = model;
  quadric.perturbation.clear();
  double attach = attachment_residual(quadric, lift.base);
  StationarityBreakdown st = stationarity_check(quadric, lift);

  Report r(opt);
  r.add("model", model_path);
  r.add("V", fmt_cvector(w.V));
  r.add("c", fmt_rvector(w.c));
  r.add("degree", static_cast<int>(lift.base.degree()));
  r.add("attachment_residual", attach);
  r.add("stationarity_residual", st.residual);
  r.add("zero_section_margin", st.zero_section_margin);
  r.print(std::cout);
  if (!opt.out_path.empty()) save_text(serialize_lift(lift), opt.out_path);
  return (attach <= 1e-10 && st.residual <= 1e-8) ? kExitOk : kExitNegative;
}

int run_defect(const std::string& model_path, const Options& opt) {
  HermitianModel model = load_model(model_path);
  Witness w = resolve_witness(model, opt);
  LiftedDisc lift = canonical_lift(model, w.V, w.c, opt.tol);
  DefectResult res = compute_defect(model, lift.base, opt.tol);

  Report r(opt);
  r.add("model", model_path);
  r.add("V", fmt_cvector(w.V));
  r.add("c", fmt_rvector(w.c));
  r.add("defect", res.defect);
  r.add("nondefective", res.defect == 0);
  for (std::size_t i = 0; i < res.kernel_basis.size(); ++i)
    r.add("kernel_" + std::to_string(i), fmt_rvector(res.kernel_basis[i]));
  r.print(std::cout);
  return res.defect == 0 ? kExitOk : kExitNegative;
}

int run_kernel(const std::string& model_path, const Options& opt) {
  HermitianModel model = load_model(model_path);
  Witness w = resolve_witness(model, opt);
  GAssembly G = assemble_G(model, w.V, w.c, opt.tol);
  KernelBasis kb = tangent_kernel(G, KernelMethod::Both, opt.tol);

  Report r(opt);
  r.add("model", model_path);
  r.add("V", fmt_cvector(w.V));
  r.add("c", fmt_rvector(w.c));
  r.add("kernel_dim", static_cast<int>(kb.elements.size()));
  r.add("expected_dim", kb.expected_dim);
  r.add("max_residual", kb.max_residual);
  double max_cf = 0.0;
  for (const auto& el : kb.closed_form) max_cf = std::max(max_cf, el.residual);
  r.add("closed_form_max_residual", max_cf);
  double max_angle = 0.0;
  for (double a : kb.principal_angles_rad) max_angle = std::max(max_angle, a);
  r.add("max_principal_angle", max_angle);
  std::string ladder;
  for (std::size_t i = 0; i < kb.dimension_ladder.size(); ++i)
    ladder += (i ? "," : "") + std::to_string(kb.dimension_ladder[i]);
  r.add("dimension_ladder", ladder);
  r.print(std::cout);
  bool ok = static_cast<int>(kb.elements.size()) == kb.expected_dim &&
            kb.max_residual <= 1e-9 && max_cf <= 1e-9;
  return ok ? kExitOk : kExitNegative;
}

int run_jets(const std::string& model_path, const Options& opt) {
  HermitianModel model = load_model(model_path);
  Witness w = resolve_witness(model, opt);
  GAssembly G = assemble_G(model, w.V, w.c, opt.tol);
  JetCertificate cert = certify_jet_injectivity(G, opt.order, opt.tol);

  Report r(opt);
  r.add("model", model_path);
  r.add("V", fmt_cvector(w.V));
  r.add("c", fmt_rvector(w.c));
  r.add("order", cert.order);
  r.add("kernel_dim", cert.kernel_dim);
  r.add("jet_rank", cert.rank);
  r.add("jet_kernel_dim", cert.kernel_dim - cert.rank);
  r.add("sigma_min", cert.sigma_min);
  r.add("injective", cert.injective);
  r.print(std::cout);
  return cert.injective ? kExitOk : kExitNegative;
}

int run_solve(const std::string& model_path, const Options& opt,
              const std::string& target_str) {
  HermitianModel model = load_model(model_path);
  Witness w = resolve_witness(model, opt);
  SolveConfig cfg;
  cfg.deg_max = opt.deg;
  StationaryFamily fam(model, w.V, w.c, cfg);
  Eigen::VectorXd target =
      fam.pinned_params(fam.lift_from_state(fam.initial_state()));
  if (!target_str.empty()) {
    Eigen::VectorXd t = parse_rvector(target_str);
    if (t.size() != target.size())
      throw std::invalid_argument("--target: expected " +
                                  std::to_string(target.size()) + " entries");
    target = t;
  }

  Report r(opt);
  r.add("model", model_path);
  r.add("V", fmt_cvector(w.V));
  r.add("c", fmt_rvector(w.c));
  r.add("deg_max", cfg.deg_max);
  std::string pins;
  for (std::size_t i = 0; i < fam.pin_indices().size(); ++i)
    pins += (i ? "," : "") + std::to_string(fam.pin_indices()[i]);
  r.add("pin_indices", pins);
  r.add("target", fmt_rvector(target));
  try {
    SolvedFamilyPoint pt = newton_solve(fam, fam.initial_state(), target);
    r.add("residual", pt.residual);
    r.add("iterations", pt.iterations);
    r.add("converged", pt.converged);
    r.print(std::cout);
    if (!opt.out_path.empty()) save_text(serialize_lift(pt.lift), opt.out_path);
    return pt.converged ? kExitOk : kExitNegative;
  } catch (const std::runtime_error& e) {
    r.add("verdict", std::string(e.what()));
    r.print(std::cout);
    return kExitNegative;
  }
}

int run_probe(const std::string& model_path, const Options& opt) {
  HermitianModel model = load_model(model_path);
  Witness w = resolve_witness(model, opt);
  CoverageReport rep =
      coverage_probe(model, w.V, w.c, {}, opt.theta_max, opt.tol);

  Report r(opt);
  r.add("model", model_path);
  r.add("V", fmt_cvector(w.V));
  r.add("c", fmt_rvector(w.c));
  r.add("jacobian_rank", rep.jacobian_rank);
  r.add("required_rank", rep.required_rank);
  r.add("sigma_min", rep.sigma_min);
  r.add("psi_max_residual", rep.psi_max_residual);
  r.add("image_affine_dim", rep.image_affine_dim);
  r.add("covering_certified", rep.covering_certified);
  r.print(std::cout);
  return rep.covering_certified ? kExitOk : kExitNegative;
}

int run_selftest(const Options& opt) {
  struct Check {
    std::string name;
    bool pass;
  };
  std::vector<Check> checks;
  auto expect = [&](const std::string& name, bool ok) {
    checks.push_back({name, ok});
  };

  auto q1 = fixtures::q1();
  auto q2 = fixtures::q2();
  auto sphere = fixtures::sphere();
  auto twin = fixtures::twin_sphere();

  {
    auto rep = classify(q1, search_config(opt));
    expect("q1 conditions a,b,t,d hold", rep.cond_a && rep.cond_b &&
                                             rep.cond_t && rep.cond_d);
    expect("q1 not fully nondegenerate (exact: d > n)",
           !rep.cond_f && rep.f_exactly_impossible);
  }
  {
    auto rep = classify(q2, search_config(opt));
    expect("q2 D-nondegenerate", rep.cond_d);
    expect("q2 witness combination not positive definite",
           !rep.strictly_pseudoconvex_witness);
  }
  {
    Eigen::VectorXd c(3);
    c << 1, 1, 0;
    Eigen::VectorXcd V(2);
    V << Complex(1, 0), Complex(0, 1);
    auto lift = canonical_lift(q1, V, c);
    expect("q1 canonical lift attaches",
           attachment_residual(q1, lift.base) <= 1e-12);
    expect("q1 canonical lift stationary",
           stationarity_residual(q1, lift) <= 1e-10);
    auto kb = tangent_kernel(assemble_G(q1, V, c), KernelMethod::Both);
    expect("q1 tangent kernel has dimension 2N",
           static_cast<int>(kb.elements.size()) == kb.expected_dim);
    expect("q1 closed-form kernel residuals small", [&] {
      for (const auto& el : kb.closed_form)
        if (el.residual > 1e-9) return false;
      return true;
    }());
    expect("q1 order-1 jets injective",
           certify_jet_injectivity(assemble_G(q1, V, c), 1).injective);
  }
  {
    Eigen::VectorXd c(1);
    c << 1;
    Eigen::VectorXcd V(1);
    V << Complex(1, 0);
    auto kb = tangent_kernel(assemble_G(sphere, V, c), KernelMethod::Numeric);
    expect("sphere tangent kernel has dimension 4", kb.elements.size() == 4);
  }
  {
    Eigen::VectorXd c(2);
    c << 1, 1;
    Eigen::VectorXcd V(1);
    V << Complex(1, 0);
    expect("twin-sphere order-2 jets injective",
           certify_jet_injectivity(assemble_G(twin, V, c), 2).injective);
  }
  {
    auto bk = birkhoff_check();
    expect("explicit factorization identity and kernel profile", bk.pass);
  }

  bool all = true;
  for (const auto& ck : checks) {
    all = all && ck.pass;
    if (opt.format == "structured")
      std::cout << "check=" << ck.name << "|pass=" << (ck.pass ? "true" : "false")
                << "\n";
    else
      std::cout << "  [" << (ck.pass ? "pass" : "FAIL") << "] " << ck.name
                << "\n";
  }
  std::cout << (all ? "selftest: all checks passed"
                    : "selftest: FAILURES present")
            << "\n";
  return all ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stationary analytic discs on quadric models"};
  app.require_subcommand(1);

  Options opt;
  std::string model_path, target_str;

  auto add_common = [&](CLI::App* cmd, bool with_model = true) {
    if (with_model)
      cmd->add_option("model", model_path, "model file")->required();
    cmd->add_option("--seed", opt.seed, "search seed");
    cmd->add_option("--tol", opt.tol, "rank tolerance");
    cmd->add_option("--deg", opt.deg, "max polynomial degree");
    cmd->add_option("--order", opt.order, "jet order (1 or 2)")
        ->check(CLI::IsMember({1, 2}));
    cmd->add_option("--V", opt.V_str, "witness vector, comma-separated complex");
    cmd->add_option("--c", opt.c_str, "combination vector, comma-separated reals");
    cmd->add_option("--theta-max", opt.theta_max, "rotation range for probe");
    cmd->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"text", "structured"}));
    cmd->add_option("--out", opt.out_path, "output path for serialized lifts");
    return cmd;
  };

  auto* classify_cmd =
      app.add_subcommand("classify", "nondegeneracy report for a model or directory");
  add_common(classify_cmd);
  auto* disc_cmd = app.add_subcommand("disc", "build and verify a canonical lift");
  add_common(disc_cmd);
  auto* defect_cmd = app.add_subcommand("defect", "defect of the canonical disc");
  add_common(defect_cmd);
  auto* kernel_cmd =
      app.add_subcommand("kernel", "tangent kernel of the boundary system");
  add_common(kernel_cmd);
  auto* jets_cmd = app.add_subcommand("jets", "jet injectivity certificate");
  add_common(jets_cmd);
  auto* solve_cmd = app.add_subcommand("solve", "Newton continuation to pinned jets");
  add_common(solve_cmd);
  solve_cmd->add_option("--target", target_str,
                        "pinned jet coordinates, comma-separated reals");
  auto* probe_cmd = app.add_subcommand("probe", "conormal coverage rank probe");
  add_common(probe_cmd);
  auto* selftest_cmd =
      app.add_subcommand("selftest", "invariant suite on bundled fixtures");
  add_common(selftest_cmd, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (classify_cmd->parsed()) return run_classify(model_path, opt);
    if (disc_cmd->parsed()) return run_disc(model_path, opt);
    if (defect_cmd->parsed()) return run_defect(model_path, opt);
    if (kernel_cmd->parsed()) return run_kernel(model_path, opt);
    if (jets_cmd->parsed()) return run_jets(model_path, opt);
    if (solve_cmd->parsed()) return run_solve(model_path, opt, target_str);
    if (probe_cmd->parsed()) return run_probe(model_path, opt);
    if (selftest_cmd->parsed()) return run_selftest(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
