#ifndef QLAT_LOCALITY_HPP
#define QLAT_LOCALITY_HPP

#include "qlat/model.hpp"

namespace qlat {

// Site-h component of an observable: weighted conditional expectation of
// e_{x,h}^* f onto the complement of site x (h = 0 gives the conditional
// expectation itself).
Mat exh_apply(const FiniteVolumeGenerator& g, const Mat& f, int x, int h);

// delta_x(f) = sum over h >= 1 of the norm of the site-h components
RVec delta_profile(const FiniteVolumeGenerator& g, const Mat& f);
// same, but only sites in `support` are computed (the rest are exact zeros
// whenever f acts trivially outside the support)
RVec delta_profile_support(const FiniteVolumeGenerator& g, const Mat& f,
                           const std::vector<int>& support);
double seminorm(const FiniteVolumeGenerator& g, const Mat& f);

// norm bound constant: || L f || <= C0 * seminorm(f)
double compute_C0(const FiniteVolumeGenerator& g);

// site-to-site coupling matrix controlling how the interacting part moves
// dependence between sites; M is its largest column sum
RMat compute_theta(const FiniteVolumeGenerator& g);
// contribution of a single instantiated term to the coupling matrix
RMat theta_term(const FiniteVolumeGenerator& g, const InteractionTerm& t);

// pair coupling weights for the propagation bound
RMat omega_matrix(const FiniteVolumeGenerator& g);

double column_sum_max(const RMat& theta);
// largest exponentially weighted column sum, weight exp(xi * distance)
double column_sum_max_weighted(const RMat& theta, const Volume& vol,
                               double xi);
double max_entry_weighted(const RMat& omega, const Volume& vol, double xi);

struct CertificateReport {
  std::string model;
  int volume_sites = 0;
  bool periodic = false;
  int excluded_terms = 0;
  int N = 0;
  double eta = 0.0;
  double lambda1 = 0.0;
  double C0 = 0.0;
  double M = 0.0;
  double margin = 0.0;  // lambda1 - M
  bool pass = false;
  // correlation decay data (valid when pass)
  double xi = 0.0;
  double M_xi = 0.0;
  double Omega_xi = 0.0;
  double zeta = 0.0;
  double C_corr = 0.0;  // prefactor of the correlation decay bound
  double C = 0.0;       // prefactor of the convergence bound, C0 / margin
};

CertificateReport certify_instance(const FiniteVolumeGenerator& g);
CertificateReport certify(const ModelSpec& spec, const Volume& vol);

// certificate on a periodic window just large enough to reproduce the
// translation-covariant constants
CertificateReport covariant_certificate(const ModelSpec& spec);

}  // namespace qlat

#endif
