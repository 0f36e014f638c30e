#ifndef QLAT_DYNAMICS_HPP
#define QLAT_DYNAMICS_HPP

#include <functional>

#include "qlat/locality.hpp"

namespace qlat {

// matrix of a linear map on d x d observables, one column per matrix unit
Mat superop_of(const std::function<Mat(const Mat&)>& op, long d);

struct EvolutionResult {
  std::vector<double> times;
  std::vector<Mat> values;
};

// evolve x0 under the given generator (column-stacking form) on a uniform
// time grid with `steps` points from t0 to t1 inclusive
EvolutionResult evolve(const Mat& gen, const Mat& x0, double t0, double t1,
                       int steps);
// classical fourth-order Runge-Kutta integration, used as an independent
// cross-check of the propagator route
Mat evolve_rk4(const Mat& gen, const Mat& x0, double t, int substeps);

struct StationaryState {
  Mat rho;
  double residual = 0.0;
  int kernel_dim = 1;
};

// stationary density matrix of a trace-dual generator; shifted inverse
// iteration with LU refinement, falling back to a full eigendecomposition
// for small dimensions if the iteration stalls
StationaryState stationary_state(const Mat& schrod_gen);

struct CheckSample {
  double t = 0.0;
  std::string quantity;
  double value = 0.0;
  double bound = 0.0;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  double worst_slack = 0.0;  // min over samples of bound - value
  std::vector<CheckSample> samples;

  void add(double t, const std::string& q, double value, double bound);
  void finish(double tol);
};

// commutation of the site components with the free part: applying a site
// component after the free evolution only rescales it
CheckResult check_intertwining(const FiniteVolumeGenerator& g, double tol);

// resolvent locality: solve (lambda - L)g = f for random local f and compare
// the dependence profile of g with the matrix-inverse bound, and its total
// with the scalar bound
CheckResult check_resolvent(const FiniteVolumeGenerator& g, double lambda,
                            int nobs, unsigned seed, double tol);

// seminorm contraction along the flow plus the site-resolved refinement
CheckResult check_contraction(const FiniteVolumeGenerator& g, double t0,
                              double t1, int npts, int nobs, unsigned seed,
                              double tol);

// exponential convergence to the stationary value for local observables
CheckResult check_convergence(const FiniteVolumeGenerator& g, double t0,
                              double t1, int npts, int nobs, unsigned seed,
                              double tol);

// decay of the commutation defect between evolved disjoint observables,
// both the closed-form bound and the quadrature form
CheckResult check_propagation(const FiniteVolumeGenerator& g, double xi,
                              double t0, double t1, int npts, unsigned seed,
                              double tol);

// exponential decay of stationary correlations with the certified rate
CheckResult check_correlation_decay(const FiniteVolumeGenerator& g,
                                    const std::vector<int>& separations,
                                    unsigned seed, double tol);

// complete positivity of the flow via the smallest Choi eigenvalue
CheckResult check_choi(const FiniteVolumeGenerator& g,
                       const std::vector<double>& times, double tol);

// stability of the certificate constants as the volume grows
CheckResult check_volume_limit(const ModelSpec& spec,
                               const std::vector<int>& sides, double tol);

// Choi matrix of a channel given in column-stacking form
Mat choi_matrix(const Mat& sup);

}  // namespace qlat

#endif
