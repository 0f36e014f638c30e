#include "qlat/single_site.hpp"

#include <algorithm>
#include <cmath>

#include "qlat/lattice.hpp"

namespace qlat {

namespace {

// Gram matrix of tr(rho a^* b) in column-stacking coordinates
Mat gram_matrix(const Mat& rho) {
  const Eigen::Index n = rho.rows();
  return kron(rho.transpose(), Mat::Identity(n, n));
}

void check_density(const Mat& rho) {
  require(rho.rows() == rho.cols(), "density matrix must be square");
  require(op_norm(rho - rho.adjoint()) < 1e-12, "density matrix not hermitian");
  require(std::abs(rho.trace() - cplx(1.0)) < 1e-10,
          "density matrix must have unit trace");
  Eigen::SelfAdjointEigenSolver<Mat> es(rho);
  require(es.eigenvalues().minCoeff() > 1e-12,
          "density matrix must be faithful (strictly positive)");
}

// order degenerate eigenvectors deterministically: lexicographic over
// rounded entries, column-major, real part before imaginary part
bool entry_order(const Mat& a, const Mat& b) {
  auto key = [](double x) { return std::llround(x * 1e8); };
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const long long ra = key(a(i, j).real()), rb = key(b(i, j).real());
      if (ra != rb) return ra > rb;
      const long long ia = key(a(i, j).imag()), ib = key(b(i, j).imag());
      if (ia != ib) return ia > ib;
    }
  return false;
}

// rotate the global phase so the largest-magnitude entry is real positive
void fix_phase(Mat& e) {
  cplx top = 0.0;
  double best = -1.0;
  for (Eigen::Index j = 0; j < e.cols(); ++j)
    for (Eigen::Index i = 0; i < e.rows(); ++i)
      if (std::abs(e(i, j)) > best + 1e-12) {
        best = std::abs(e(i, j));
        top = e(i, j);
      }
  if (best > 0.0) e *= std::conj(top) / std::abs(top);
}

SpectralData validate_override(const Mat& l0, const Mat& rho,
                               const std::vector<Mat>& basis) {
  const Eigen::Index n = rho.rows();
  require(static_cast<Eigen::Index>(basis.size()) == n * n,
          "basis override must have n^2 elements");
  for (const Mat& e : basis)
    require(e.rows() == n && e.cols() == n, "basis element dimension mismatch");
  require(op_norm(basis[0] - Mat::Identity(n, n)) < 1e-9,
          "first basis element must be the identity");
  SpectralData sd;
  sd.lambda = RVec(n * n);
  sd.basis = basis;
  for (std::size_t h = 0; h < basis.size(); ++h) {
    for (std::size_t g = 0; g <= h; ++g) {
      const cplx ip = gns_inner(rho, basis[g], basis[h]);
      const double want = (g == h) ? 1.0 : 0.0;
      require(std::abs(ip - want) < 1e-8, "basis override not orthonormal");
    }
    const Vec v = vec_stack(basis[h]);
    const Vec lv = l0 * v;
    const cplx rq = -gns_inner(rho, basis[h], unvec(lv, n, n));
    require(std::abs(rq.imag()) < 1e-8, "eigenvalue not real");
    sd.lambda(h) = rq.real();
    require((lv + sd.lambda(h) * v).norm() < 1e-8 * (1.0 + sd.lambda(h)),
            "basis override element is not an eigenvector");
  }
  require(std::abs(sd.lambda(0)) < 1e-9, "identity must have eigenvalue zero");
  sd.lambda(0) = 0.0;
  for (int h = 1; h < n * n; ++h)
    require(sd.lambda(h) >= sd.lambda(h - 1) - 1e-10,
            "basis override eigenvalues must be ascending");
  require(sd.lambda(1) > 1e-9, "fixed space must be one-dimensional");
  sd.eta = 0.0;
  for (std::size_t h = 1; h < basis.size(); ++h)
    sd.eta = std::max(sd.eta, op_norm(basis[h]));
  return sd;
}

}  // namespace

Mat build_L0(int n, const std::vector<Mat>& jumps) {
  Mat l = Mat::Zero(static_cast<Eigen::Index>(n) * n,
                    static_cast<Eigen::Index>(n) * n);
  for (const Mat& j : jumps) {
    require(j.rows() == n && j.cols() == n, "jump operator dimension mismatch");
    l += sop_dissipator(j);
  }
  return l;
}

double check_gns_selfadjoint(const Mat& l0, const Mat& rho) {
  const Mat g = gram_matrix(rho);
  return op_norm(g * l0 - l0.adjoint() * g);
}

SpectralData spectral_decompose(
    const Mat& l0, const Mat& rho,
    const std::optional<std::vector<Mat>>& basis_override) {
  check_density(rho);
  const Eigen::Index n = rho.rows();
  require(l0.rows() == n * n && l0.cols() == n * n,
          "generator dimension must be n^2");

  if (basis_override) return validate_override(l0, rho, *basis_override);

  // reduce the weighted eigenproblem to a hermitian one via the Cholesky
  // factor of the Gram matrix
  const Mat g = gram_matrix(rho);
  Eigen::LLT<Mat> llt(g);
  require(llt.info() == Eigen::Success, "Gram matrix not positive definite");
  const Mat c = llt.matrixL();
  const Mat cinv = c.inverse();
  const Mat my = c.adjoint() * l0 * cinv.adjoint();
  require(op_norm(my - my.adjoint()) < 1e-6 * (1.0 + op_norm(my)),
          "generator is not self-adjoint in the weighted inner product");

  Eigen::SelfAdjointEigenSolver<Mat> es(Mat(-hermitize(my)));
  SpectralData sd;
  sd.lambda = es.eigenvalues();
  const double scale = std::max(1.0, sd.lambda(n * n - 1));
  int zero_dim = 0;
  while (zero_dim < n * n && sd.lambda(zero_dim) < 1e-8 * scale) ++zero_dim;
  if (zero_dim != 1)
    throw ErgodicityError("fixed space of the one-site generator has dimension " +
                          std::to_string(zero_dim));

  sd.basis.resize(n * n);
  for (Eigen::Index h = 0; h < n * n; ++h) {
    const Vec v = cinv.adjoint() * es.eigenvectors().col(h);
    sd.basis[h] = unvec(v, n, n);
    if (h > 0) fix_phase(sd.basis[h]);
  }
  sd.lambda(0) = 0.0;
  sd.basis[0] = Mat::Identity(n, n);

  // deterministic order inside degenerate clusters
  for (Eigen::Index h = 1; h < n * n;) {
    Eigen::Index e = h;
    while (e + 1 < n * n && sd.lambda(e + 1) - sd.lambda(h) <= 1e-8 * scale)
      ++e;
    std::sort(sd.basis.begin() + h, sd.basis.begin() + e + 1, entry_order);
    h = e + 1;
  }

  sd.eta = 0.0;
  for (Eigen::Index h = 1; h < n * n; ++h)
    sd.eta = std::max(sd.eta, op_norm(sd.basis[h]));
  return sd;
}

SingleSiteGenerator make_single_site(
    int n, const Mat& rho, const std::vector<Mat>& jumps,
    const std::optional<std::vector<Mat>>& basis_override) {
  SingleSiteGenerator g;
  g.n = n;
  g.rho = rho;
  g.jumps = jumps;
  g.l0 = build_L0(n, jumps);
  const double res = check_gns_selfadjoint(g.l0, rho);
  require(res < 1e-9, "one-site generator not self-adjoint in the weighted "
                      "inner product (residual " + std::to_string(res) + ")");
  g.spec = spectral_decompose(g.l0, rho, basis_override);
  return g;
}

}  // namespace qlat
