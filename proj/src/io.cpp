#include "stadisc/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace stadisc {

using nlohmann::json;

namespace {

Complex parse_entry(const json& e, const std::string& where) {
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
      !e[1].is_number())
    throw std::invalid_argument(where + ": expected [re, im]");
  return Complex(e[0].get<double>(), e[1].get<double>());
}

json entry(const Complex& c) { return json::array({c.real(), c.imag()}); }

Eigen::MatrixXcd parse_matrix(const json& m, int n, const std::string& name) {
  if (!m.is_array() || static_cast<int>(m.size()) != n)
    throw std::invalid_argument(name + ": expected " + std::to_string(n) +
                                " rows");
  Eigen::MatrixXcd out(n, n);
  for (int r = 0; r < n; ++r) {
    if (!m[r].is_array() || static_cast<int>(m[r].size()) != n)
      throw std::invalid_argument(name + " row " + std::to_string(r) +
                                  ": expected " + std::to_string(n) +
                                  " entries");
    for (int c = 0; c < n; ++c)
      out(r, c) = parse_entry(m[r][c], name + "(" + std::to_string(r) + "," +
                                           std::to_string(c) + ")");
  }
  return out;
}

Eigen::MatrixXcd parse_coeffs(const json& j, const std::string& name) {
  const int dim = j.at("dim").get<int>();
  const auto& comps = j.at("components");
  if (static_cast<int>(comps.size()) != dim)
    throw std::invalid_argument(name + ": component count mismatch");
  const int ncoeff = static_cast<int>(comps[0].size());
  Eigen::MatrixXcd coeffs(dim, ncoeff);
  for (int m = 0; m < dim; ++m) {
    if (static_cast<int>(comps[m].size()) != ncoeff)
      throw std::invalid_argument(name + ": ragged coefficient arrays");
    for (int k = 0; k < ncoeff; ++k)
      coeffs(m, k) = parse_entry(comps[m][k], name + " component " +
                                                  std::to_string(m));
  }
  return coeffs;
}

json coeffs_json(const PolyDisc& d) {
  json comps = json::array();
  for (Eigen::Index m = 0; m < d.dim(); ++m) {
    json row = json::array();
    for (Eigen::Index k = 0; k < d.coeffs.cols(); ++k)
      row.push_back(entry(d.coeffs(m, k)));
    comps.push_back(row);
  }
  return json{{"dim", d.dim()}, {"deg_max", d.degree()}, {"components", comps}};
}

}  // namespace

HermitianModel parse_model(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("model parse error: ") + e.what());
  }
  HermitianModel model;
  model.n = j.at("n").get<int>();
  model.d = j.at("d").get<int>();
  const auto& mats = j.at("A");
  if (!mats.is_array() || static_cast<int>(mats.size()) != model.d)
    throw std::invalid_argument("field A must list d matrices");
  for (int k = 0; k < model.d; ++k)
    model.A.push_back(
        parse_matrix(mats[k], model.n, "A[" + std::to_string(k + 1) + "]"));
  if (j.contains("perturbation"))
    for (const auto& t : j["perturbation"]) {
      PerturbationTerm term;
      term.row = t.at("row").get<int>();
      term.coeff = t.at("coeff").get<double>();
      term.z_exp = t.at("z_exp").get<std::vector<int>>();
      term.zbar_exp = t.at("zbar_exp").get<std::vector<int>>();
      term.imw_exp = t.at("imw_exp").get<std::vector<int>>();
      model.perturbation.push_back(term);
    }
  model.validate();
  return model;
}

HermitianModel load_model(const std::string& path) {
  return parse_model(load_text(path));
}

std::string serialize_model(const HermitianModel& model) {
  json j;
  j["n"] = model.n;
  j["d"] = model.d;
  json mats = json::array();
  for (const auto& a : model.A) {
    json m = json::array();
    for (int r = 0; r < model.n; ++r) {
      json row = json::array();
      for (int c = 0; c < model.n; ++c) row.push_back(entry(a(r, c)));
      m.push_back(row);
    }
    mats.push_back(m);
  }
  j["A"] = mats;
  if (!model.perturbation.empty()) {
    json terms = json::array();
    for (const auto& t : model.perturbation)
      terms.push_back(json{{"row", t.row},
                           {"coeff", t.coeff},
                           {"z_exp", t.z_exp},
                           {"zbar_exp", t.zbar_exp},
                           {"imw_exp", t.imw_exp}});
    j["perturbation"] = terms;
  }
  return j.dump(2) + "\n";
}

void save_model(const HermitianModel& model, const std::string& path) {
  save_text(serialize_model(model), path);
}

std::string serialize_disc(const PolyDisc& disc) {
  return coeffs_json(disc).dump(2) + "\n";
}

PolyDisc parse_disc(const std::string& text) {
  return PolyDisc(parse_coeffs(json::parse(text), "disc"));
}

std::string serialize_lift(const LiftedDisc& lift) {
  json j;
  j["base"] = coeffs_json(lift.base);
  j["cotangent"] = coeffs_json(lift.cotangent);
  return j.dump(2) + "\n";
}

LiftedDisc parse_lift(const std::string& text) {
  json j = json::parse(text);
  LiftedDisc lift;
  lift.base = PolyDisc(parse_coeffs(j.at("base"), "base"));
  lift.cotangent = PolyDisc(parse_coeffs(j.at("cotangent"), "cotangent"));
  return lift;
}

void save_text(const std::string& text, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
}

std::string load_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace stadisc
