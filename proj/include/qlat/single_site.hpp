#ifndef QLAT_SINGLE_SITE_HPP
#define QLAT_SINGLE_SITE_HPP

#include <optional>

#include "qlat/linalg.hpp"

namespace qlat {

// Raised when the one-site generator fails to have a one-dimensional fixed
// space, i.e. when its restriction to a single qudit is not ergodic.
struct ErgodicityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Eigendata of the one-site generator with respect to the weighted inner
// product tr(rho a^* b): eigenvalues of minus the generator in ascending
// order and an orthonormal eigenbasis, basis[0] = identity.
struct SpectralData {
  RVec lambda;
  std::vector<Mat> basis;
  double eta = 0.0;  // max operator norm of basis[1..]

  int N() const { return static_cast<int>(lambda.size()) - 1; }
  double gap() const { return lambda(1); }
};

struct SingleSiteGenerator {
  int n = 2;
  Mat rho;                 // faithful invariant density matrix
  std::vector<Mat> jumps;  // jump operators of the dissipative part
  Mat l0;                  // generator on observables, n^2 x n^2
  SpectralData spec;
};

// Sum over jumps of l^*[.,l] + [l^*,.]l in column-stacking coordinates.
Mat build_L0(int n, const std::vector<Mat>& jumps);

// Residual of self-adjointness with respect to tr(rho .^* .): operator norm
// of G L - L^+ G with G the Gram matrix of that inner product.
double check_gns_selfadjoint(const Mat& l0, const Mat& rho);

// Diagonalize minus the generator in the weighted inner product.  A basis
// override replaces the solver output after validation (orthonormality,
// eigenvector property, identity first, ascending eigenvalues).
SpectralData spectral_decompose(
    const Mat& l0, const Mat& rho,
    const std::optional<std::vector<Mat>>& basis_override = std::nullopt);

SingleSiteGenerator make_single_site(
    int n, const Mat& rho, const std::vector<Mat>& jumps,
    const std::optional<std::vector<Mat>>& basis_override = std::nullopt);

}  // namespace qlat

#endif
