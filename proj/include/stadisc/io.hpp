#pragma once

#include <string>

#include "stadisc/disc.hpp"
#include "stadisc/model.hpp"

namespace stadisc {

/// Model file format: structured text with fields n, d, A (list of d
/// matrices of [re, im] entries) and optional perturbation records
/// {row, coeff, z_exp, zbar_exp, imw_exp}.  Hermitian symmetry is validated
/// on load and a violation names the offending matrix entry.
HermitianModel load_model(const std::string& path);
HermitianModel parse_model(const std::string& text);
std::string serialize_model(const HermitianModel& model);
void save_model(const HermitianModel& model, const std::string& path);

/// Disc serialization: component-major complex coefficients with metadata
/// {dim, deg_max}, used to pipe discs between CLI subcommands.
std::string serialize_disc(const PolyDisc& disc);
PolyDisc parse_disc(const std::string& text);
std::string serialize_lift(const LiftedDisc& lift);
LiftedDisc parse_lift(const std::string& text);
void save_text(const std::string& text, const std::string& path);
std::string load_text(const std::string& path);

}  // namespace stadisc
