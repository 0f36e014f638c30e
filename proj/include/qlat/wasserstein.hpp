#ifndef QLAT_WASSERSTEIN_HPP
#define QLAT_WASSERSTEIN_HPP

#include <vector>

#include "qlat/dynamics.hpp"
#include "qlat/local_op.hpp"
#include "qlat/locality.hpp"
#include "qlat/model.hpp"

namespace qlat {

// Normalized conditional expectation that forgets site x: trace out the site
// with the uniform state and put the identity factor back.
Mat forget_site(const Mat& f, int x, const Space& sp);

struct LipschitzBracket {
  RVec site_lower; // ||f - T_x f|| per site
  RVec site_upper; // certified upper bound on the per-site variation
  double lower = 0;
  double upper = 0;
};

// Per-site variation bracket.  The per-site quantity is twice the distance
// from f to the operators that ignore site x; it is sandwiched between
// ||f - T_x f|| and 2 ||f - T_x f||, and the upper end is tightened by
// projected subgradient descent over the ignoring algebra.  The seminorm is
// the maximum over sites.
LipschitzBracket lipschitz_seminorm(const Mat& f, const Space& sp, int refine_iters = 500,
                                    double refine_tol = 1e-7);

struct WassersteinBracket {
  double lower = 0;
  double upper = 0;
  std::vector<int> site_order;          // enumeration used by the primal witness
  std::vector<Mat> witness_decomposition;
  Mat witness_observable;               // best dual dictionary element, normalized
  double witness_pairing = 0;           // tr(delta * witness); |pairing| = lower
};

// Certified two-sided bracket on the transport distance between two states.
// Upper: half the summed trace norms of a telescoped decomposition of the
// difference into per-site traceless pieces.  Lower: best pairing against a
// dictionary of observables normalized by their certified seminorm.
WassersteinBracket w1_bracket(const Mat& mu, const Mat& nu, const Space& sp);

// Primal witness only (skips the dual dictionary); used on time grids.
double w1_upper(const Mat& delta, const Space& sp);

// Transport decay of an evolved state toward the stationary one, per site,
// against the exponential bound implied by a passing certificate; also spot
// checks that the locality seminorm of a random observable is controlled by
// its transport seminorm.
CheckResult check_w_decay(const FiniteVolumeGenerator& g, const CertificateReport& cert,
                          const Mat& mu, double t0, double t1, int npts, unsigned seed,
                          double tol);

} // namespace qlat

#endif
