#ifndef QLAT_CATALOG_HPP
#define QLAT_CATALOG_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlat/fermion.hpp"
#include "qlat/model.hpp"
#include "qlat/report.hpp"

namespace qlat {

// Malformed or inconsistent configuration input (CLI maps this to its own
// exit code, distinct from numeric failures).
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dissipative spin chain: one thermalizing channel per site built from
// sigma_1, sigma_2 jumps, plus exchange couplings J_j sigma_j sigma_j on
// nearest-neighbour pairs in every lattice direction.
ModelSpec model_xyz(double J1, double J2, double J3, int dims = 1);

// Fit of a covariant jump family by a diagonal single-site channel.  The
// first two jumps are matched by sigma_1 g, sigma_2 g and the third by g
// alone, with g running over real diagonal 2x2 matrices; the minimizers give
// the reference channel and the distances delta12, delta3 measure the
// residual perturbation.
struct SpinFitReport {
  double delta12 = 0;
  double delta3 = 0;
  double alpha0 = 0, alpha1 = 0; // diagonal of the fitted a
  double beta0 = 0, beta1 = 0;   // diagonal of the fitted b
  double s = 0;                  // alpha0^2 + alpha1^2
  double lambda = 0;             // single-site eigenvalue 4 s
  double mu = 0;                 // single-site eigenvalue 2 s + (beta0 - beta1)^2
  double eta = 0;
  double M_exact = 0;  // from the assembled certificate on a window
  double M_budget = 0; // closed-form budget in terms of the fit distances
  ModelSpec model;
};

// jumps: three operators on the centered block of side 2*range+1 per
// dimension (2x2 matrices when range = 0).
SpinFitReport model_spin_dissipative(const std::vector<Mat>& jumps, int range, int dims);

// Classical flip rate as a lookup over the spin configuration of a window of
// offsets (offset 0 must be present).  Bit i of the table index corresponds
// to offsets[i], first offset most significant; bit value 0 means spin +1.
struct ClassicalRate {
  std::vector<Site> offsets;
  RVec values;
};

ClassicalRate constant_rate();
ClassicalRate glauber_rate(double beta);

// Diagonal-algebra embedding of a classical spin-flip dynamics: jumps
// sigma_j sqrt(c_x)/2 for j = 1,2.  The residual compares the assembled
// generator against a dense classical flip generator on the configuration
// space of the given volume, over all indicator functions.
struct ConjugationReport {
  double residual = 0;
  ModelSpec model;
};

ConjugationReport model_classical_conjugation(const ClassicalRate& rate, const Volume& vol);

// Named built-in models with default parameters and volumes.
struct ModelConfig {
  std::string name;
  std::string statistics; // "qudit" | "fermion"
  int dims = 1;
  Volume volume{{3}, false};
  std::optional<ModelSpec> qudit;
  double h_field = 0.0;
  double hopping = 0.0;
  std::map<std::string, double> parameters;
};

std::vector<std::string> catalog_names();
std::string catalog_summary(const std::string& name);
ModelConfig catalog_config(const std::string& name);

Json config_to_json(const ModelConfig& config);
ModelConfig config_from_json(const Json& j);

// Driver entry points shared by the command line tool and the bindings.
Json certify_config(const ModelConfig& config);
Json spectrum_config(const ModelConfig& config);
std::vector<CheckResult> verify_config(const ModelConfig& config, unsigned seed,
                                       double tol_scale);

} // namespace qlat

#endif
