#include "qlat/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

namespace qlat {

namespace {

// Orthonormal (Frobenius) Hermitian basis of the d-dimensional matrix algebra.
std::vector<Mat> hermitian_basis(long d) {
  std::vector<Mat> out;
  out.reserve(d * d);
  const double r = 1.0 / std::sqrt(2.0);
  for (long i = 0; i < d; ++i) out.push_back(matrix_unit(d, i, i));
  for (long i = 0; i < d; ++i) {
    for (long j = i + 1; j < d; ++j) {
      out.push_back(r * (matrix_unit(d, i, j) + matrix_unit(d, j, i)));
      out.push_back(cplx(0, r) * (matrix_unit(d, i, j) - matrix_unit(d, j, i)));
    }
  }
  return out;
}

// Traceless Hermitian basis of one site (diagonal ladder + off-diagonal pairs).
std::vector<Mat> traceless_site_basis(long n) {
  std::vector<Mat> out;
  for (long k = 1; k < n; ++k) {
    Mat d = Mat::Zero(n, n);
    for (long i = 0; i < k; ++i) d(i, i) = 1.0;
    d(k, k) = -static_cast<double>(k);
    out.push_back(d * std::sqrt(2.0 / (k * (k + 1.0))));
  }
  for (long i = 0; i < n; ++i) {
    for (long j = i + 1; j < n; ++j) {
      out.push_back(matrix_unit(n, i, j) + matrix_unit(n, j, i));
      out.push_back(cplx(0, 1) * (matrix_unit(n, i, j) - matrix_unit(n, j, i)));
    }
  }
  return out;
}

std::vector<int> complement_sites(int x, int m) {
  std::vector<int> out;
  for (int y = 0; y < m; ++y) {
    if (y != x) out.push_back(y);
  }
  return out;
}

// Overall sign of the first entry that dominates rounding (+1 for the zero
// matrix).  Used to canonicalize inputs of even functionals so that f and -f
// take bitwise identical paths through iterative refinements.
double leading_sign(const Mat& f) {
  const double cmax = f.cwiseAbs().maxCoeff();
  if (cmax == 0.0) return 1.0;
  for (long c = 0; c < f.cols(); ++c) {
    for (long r = 0; r < f.rows(); ++r) {
      const cplx z = f(r, c);
      if (std::abs(z) > 1e-12 * cmax) {
        const double lead =
            (std::abs(z.real()) >= std::abs(z.imag())) ? z.real() : z.imag();
        return (lead < 0.0) ? -1.0 : 1.0;
      }
    }
  }
  return 1.0;
}

} // namespace

Mat forget_site(const Mat& f, int x, const Space& sp) {
  const long n = sp.n;
  return cond_expectation(f, x, Mat(Mat::Identity(n, n) / static_cast<double>(n)), sp);
}

LipschitzBracket lipschitz_seminorm(const Mat& f, const Space& sp, int refine_iters,
                                    double refine_tol) {
  require(op_norm(Mat(f - dagger(f))) < 1e-9 * std::max(1.0, op_norm(f)),
          "variation seminorm needs a self-adjoint observable");
  // The functional is even in f; canonicalize the sign so f and -f run
  // through identical refinement iterates and report identical values.
  const Mat fc = leading_sign(f) * f;
  const int m = sp.vol.num_sites();
  LipschitzBracket out;
  out.site_lower = RVec::Zero(m);
  out.site_upper = RVec::Zero(m);
  for (int x = 0; x < m; ++x) {
    const Mat gx = forget_site(fc, x, sp);
    const double base = op_norm(Mat(fc - gx));
    double best = base;
    if (base > 1e-14 && refine_iters > 0) {
      // Projected subgradient descent of ||f - g|| over the operators g that
      // ignore site x, parametrized as gx plus a Hermitian deviation.
      const std::vector<int> rest = complement_sites(x, m);
      const long dc = rest.empty() ? 1 : static_cast<long>(std::llround(
                                             std::pow(static_cast<double>(sp.n),
                                                      static_cast<double>(rest.size()))));
      std::vector<Mat> basis;
      for (const Mat& b : hermitian_basis(dc)) basis.push_back(embed(b, rest, sp));
      const int K = static_cast<int>(basis.size());
      Mat diff = fc - gx;
      double last_best = best;
      int stale = 0;
      for (int it = 0; it < refine_iters; ++it) {
        Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(diff));
        const RVec ev = es.eigenvalues();
        long idx = 0;
        ev.cwiseAbs().maxCoeff(&idx);
        const double lam = ev(idx);
        const Vec psi = es.eigenvectors().col(idx);
        RVec gradc(K);
        for (int k = 0; k < K; ++k) {
          gradc(k) = -((lam >= 0) ? 1.0 : -1.0) * std::real(cplx(psi.dot(basis[k] * psi)));
        }
        const double gn = gradc.norm();
        if (gn < 1e-14) break;
        const double step = base / (gn * std::sqrt(it + 1.0));
        for (int k = 0; k < K; ++k) {
          if (gradc(k) != 0) diff += (step * gradc(k)) * basis[k];
        }
        const double h = op_norm(diff);
        best = std::min(best, h);
        if (it % 50 == 49) {
          if (last_best - best < refine_tol) ++stale;
          if (stale >= 2) break;
          last_best = best;
        }
      }
    }
    out.site_lower(x) = base;
    out.site_upper(x) = 2.0 * best;
  }
  out.lower = (m > 0) ? out.site_lower.maxCoeff() : 0.0;
  out.upper = (m > 0) ? out.site_upper.maxCoeff() : 0.0;
  return out;
}

namespace {

void require_state(const Mat& rho, const char* what) {
  const double scale = std::max(1.0, op_norm(rho));
  require(op_norm(Mat(rho - dagger(rho))) < 1e-8 * scale, "state is not self-adjoint");
  require(std::abs(rho.trace() - cplx(1, 0)) < 1e-8, what);
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(rho));
  require(es.eigenvalues().minCoeff() > -1e-8, "state has a negative eigenvalue");
}

std::vector<Mat> telescope(const Mat& delta, const Space& sp) {
  const int m = sp.vol.num_sites();
  std::vector<Mat> pieces;
  Mat acc = delta;
  for (int x = 0; x < m; ++x) {
    const Mat averaged = forget_site(acc, x, sp);
    pieces.push_back(acc - averaged);
    acc = averaged;
  }
  return pieces;
}

} // namespace

double w1_upper(const Mat& delta, const Space& sp) {
  double total = 0;
  for (const Mat& p : telescope(delta, sp)) total += trace_norm(p);
  return 0.5 * total;
}

WassersteinBracket w1_bracket(const Mat& mu, const Mat& nu, const Space& sp) {
  require_state(mu, "first argument is not a unit-trace state");
  require_state(nu, "second argument is not a unit-trace state");
  const int m = sp.vol.num_sites();
  const Mat delta = hermitize(Mat(mu - nu));

  WassersteinBracket out;
  for (int x = 0; x < m; ++x) out.site_order.push_back(x);
  out.witness_decomposition = telescope(delta, sp);
  double total = 0;
  for (const Mat& p : out.witness_decomposition) total += trace_norm(p);
  out.upper = 0.5 * total;

  // Dual dictionary: single-site traceless observables, their site sums, and
  // the spectral sign of the difference, each normalized by a certified upper
  // bound on its variation seminorm.
  std::vector<Mat> dict;
  for (const Mat& b : traceless_site_basis(sp.n)) {
    Mat summed = Mat::Zero(sp.dim(), sp.dim());
    for (int x = 0; x < m; ++x) {
      const Mat e = embed(b, {x}, sp);
      dict.push_back(e);
      summed += e;
    }
    if (m > 1) dict.push_back(summed);
  }
  // Eigensolve the canonical-sign representative of the difference so that
  // swapping the arguments leaves every dictionary value bitwise unchanged.
  const double ds = leading_sign(delta);
  Eigen::SelfAdjointEigenSolver<Mat> es(Mat(ds * delta));
  Mat sign = Mat::Zero(sp.dim(), sp.dim());
  for (long i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()(i);
    if (std::abs(lam) > 1e-12) {
      const Vec v = es.eigenvectors().col(i);
      sign += ((lam > 0) ? 1.0 : -1.0) * (v * v.adjoint());
    }
  }
  if (op_norm(sign) > 1e-12) dict.push_back(Mat(ds * sign));

  out.lower = 0;
  for (const Mat& f : dict) {
    const LipschitzBracket lb = lipschitz_seminorm(f, sp);
    if (lb.upper < 1e-12) continue;
    const double pairing = std::real(cplx((delta * f).trace()));
    const double value = std::abs(pairing) / lb.upper;
    if (value > out.lower) {
      out.lower = value;
      out.witness_observable = f / lb.upper;
      out.witness_pairing = pairing / lb.upper;
    }
  }
  return out;
}

CheckResult check_w_decay(const FiniteVolumeGenerator& g, const CertificateReport& cert,
                          const Mat& mu, double t0, double t1, int npts, unsigned seed,
                          double tol) {
  CheckResult r;
  r.name = "transport decay";
  require(cert.pass, "transport decay bound needs a passing certificate");
  const Space sp{g.space};
  require_state(mu, "initial state is not a unit-trace state");
  const int m = sp.vol.num_sites();
  const StationaryState ss = stationary_state(schrodinger_generator(g));
  const Mat dual = schrodinger_generator(g);
  const double cw = cert.C0 / cert.margin * cert.N * cert.eta / 2.0;

  const double dt = (npts > 1) ? (t1 - t0) / (npts - 1) : 0.0;
  const Mat step = expm(Mat(dual * dt));
  Vec state = expm(Mat(dual * t0)) * vec_stack(mu);
  for (int i = 0; i < npts; ++i) {
    const double t = t0 + dt * i;
    const Mat mut = hermitize(unvec(state, g.dim(), g.dim()));
    r.add(t, "per-site transport upper", w1_upper(Mat(mut - ss.rho), sp) / m,
          cw * std::exp(-cert.margin * t));
    if (i + 1 < npts) state = step * state;
  }

  // The locality seminorm of a local observable is controlled by the volume
  // times its per-site variation, up to N eta / 2.
  std::mt19937_64 gen(seed);
  for (int o = 0; o < 5; ++o) {
    const int size = 1 + static_cast<int>(gen() % 2u);
    std::vector<int> sites;
    while (static_cast<int>(sites.size()) < std::min(size, m)) {
      const int x = static_cast<int>(gen() % static_cast<unsigned>(m));
      if (std::find(sites.begin(), sites.end(), x) == sites.end()) sites.push_back(x);
    }
    std::sort(sites.begin(), sites.end());
    const long dloc = static_cast<long>(
        std::llround(std::pow(static_cast<double>(sp.n), static_cast<double>(sites.size()))));
    Mat floc = random_hermitian(static_cast<int>(dloc), gen);
    floc /= std::max(1.0, op_norm(floc));
    const Mat f = embed(floc, sites, sp);
    const LipschitzBracket lb = lipschitz_seminorm(f, sp, 200, 1e-6);
    r.add(0, "locality versus variation obs " + std::to_string(o), seminorm(g, f),
          0.5 * cert.N * cert.eta * m * lb.upper);
  }
  r.finish(tol);
  return r;
}

} // namespace qlat
