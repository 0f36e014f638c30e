#include "qlat/dynamics.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace qlat {

Mat superop_of(const std::function<Mat(const Mat&)>& op, long d) {
  Mat s(d * d, d * d);
  for (long c = 0; c < d * d; ++c) {
    Vec e = Vec::Zero(d * d);
    e(c) = 1.0;
    s.col(c) = vec_stack(op(unvec(e, d, d)));
  }
  return s;
}

namespace {

long isqrt_dim(long d2) {
  const long d = std::lround(std::sqrt(static_cast<double>(d2)));
  require(d * d == d2, "superoperator dimension is not a perfect square");
  return d;
}

struct LocalObs {
  Mat full;               // embedded observable
  std::vector<int> sites;
};

LocalObs random_local_obs(const FiniteVolumeGenerator& g, std::mt19937_64& gen,
                          int max_support, bool interior_only,
                          bool hermitian) {
  std::vector<int> pool;
  for (int x = 0; x < g.num_sites(); ++x) {
    if (interior_only && !g.space.vol.periodic) {
      const Site c = g.space.vol.coords(x);
      bool ok = true;
      for (int k = 0; k < g.space.vol.dim(); ++k)
        if (std::min(c[k], g.space.vol.shape[k] - 1 - c[k]) < g.spec.range)
          ok = false;
      if (!ok) continue;
    }
    pool.push_back(x);
  }
  require(!pool.empty(), "no admissible support sites in this volume");
  const int size =
      1 + static_cast<int>(gen() % static_cast<unsigned>(
                               std::min<std::size_t>(max_support, pool.size())));
  std::shuffle(pool.begin(), pool.end(), gen);
  LocalObs o;
  o.sites.assign(pool.begin(), pool.begin() + size);
  std::sort(o.sites.begin(), o.sites.end());
  long dloc = 1;
  for (int s = 0; s < size; ++s) dloc *= g.space.n;
  Mat a = random_matrix(dloc, gen);
  if (hermitian) a = hermitize(a);
  a /= op_norm(a);
  o.full = embed(a, o.sites, g.space);
  return o;
}

RMat real_expm(const RMat& a) {
  return expm(a.cast<cplx>()).real();
}

}  // namespace

void CheckResult::add(double t, const std::string& q, double value,
                      double bound) {
  samples.push_back({t, q, value, bound});
}

void CheckResult::finish(double tol) {
  worst_slack = std::numeric_limits<double>::infinity();
  for (const CheckSample& s : samples)
    worst_slack = std::min(worst_slack, s.bound - s.value);
  if (samples.empty()) worst_slack = 0.0;
  pass = worst_slack >= -tol;
}

EvolutionResult evolve(const Mat& gen, const Mat& x0, double t0, double t1,
                       int steps) {
  require(steps >= 1, "need at least one time point");
  const long d = isqrt_dim(gen.rows());
  require(x0.rows() == d && x0.cols() == d, "initial value dimension mismatch");
  EvolutionResult r;
  const double dt = steps > 1 ? (t1 - t0) / (steps - 1) : 0.0;
  Vec v = expm(Mat(gen * t0)) * vec_stack(x0);
  const Mat step = steps > 1 ? expm(Mat(gen * dt)) : Mat();
  for (int k = 0; k < steps; ++k) {
    r.times.push_back(t0 + k * dt);
    r.values.push_back(unvec(v, d, d));
    if (k + 1 < steps) v = step * v;
  }
  return r;
}

Mat evolve_rk4(const Mat& gen, const Mat& x0, double t, int substeps) {
  const long d = isqrt_dim(gen.rows());
  require(substeps >= 1, "need at least one substep");
  Vec v = vec_stack(x0);
  const double h = t / substeps;
  for (int k = 0; k < substeps; ++k) {
    const Vec k1 = gen * v;
    const Vec k2 = gen * Vec(v + 0.5 * h * k1);
    const Vec k3 = gen * Vec(v + 0.5 * h * k2);
    const Vec k4 = gen * Vec(v + h * k3);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return unvec(v, d, d);
}

StationaryState stationary_state(const Mat& schrod_gen) {
  const long d2 = schrod_gen.rows();
  const long d = isqrt_dim(d2);
  const double scale = schrod_gen.cwiseAbs().rowwise().sum().maxCoeff();

  Mat shifted = schrod_gen;
  shifted.diagonal().array() -= 1e-8;
  Eigen::PartialPivLU<Mat> lu(shifted);

  Vec x = vec_stack(Mat(Mat::Identity(d, d) / static_cast<double>(d)));
  x.normalize();
  double res = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 8; ++it) {
    x = lu.solve(x);
    x.normalize();
    res = (schrod_gen * x).norm();
    if (res < 1e-12 * std::max(1.0, scale)) break;
  }

  StationaryState st;
  st.kernel_dim = 1;

  if (res > 1e-9 && d2 <= 1024) {
    // stalled iteration on a small problem: diagonalize instead
    Eigen::ComplexEigenSolver<Mat> ces(schrod_gen);
    Eigen::Index best = 0;
    double best_abs = std::numeric_limits<double>::infinity();
    int kdim = 0;
    for (Eigen::Index i = 0; i < d2; ++i) {
      const double a = std::abs(ces.eigenvalues()(i));
      if (a < best_abs) {
        best_abs = a;
        best = i;
      }
      if (a < 1e-8 * std::max(1.0, scale)) ++kdim;
    }
    x = ces.eigenvectors().col(best);
    st.kernel_dim = std::max(kdim, 1);
  } else {
    // probe for a second kernel direction
    std::mt19937_64 gen(12345);
    Vec y = vec_stack(random_matrix(d, gen));
    y.normalize();
    for (int it = 0; it < 6; ++it) {
      y = lu.solve(y);
      y.normalize();
    }
    Vec z = y - x.dot(y) * x;
    if (z.norm() > 1e-8) {
      z.normalize();
      if ((schrod_gen * z).norm() < 1e-6 * std::max(1.0, scale))
        st.kernel_dim = 2;
    }
  }

  Mat rho = unvec(x, d, d);
  const cplx tr = rho.trace();
  if (std::abs(tr) > 1e-8) {
    rho /= tr;
  } else {
    st.kernel_dim = std::max(st.kernel_dim, 2);
  }
  st.rho = hermitize(rho);
  st.residual = (schrod_gen * vec_stack(st.rho)).norm();
  return st;
}

CheckResult check_intertwining(const FiniteVolumeGenerator& g, double tol) {
  CheckResult r;
  r.name = "intertwining";
  const auto [l0, l1] = split_perturbation(g);
  (void)l1;
  const long d = g.dim();
  for (int x = 0; x < g.num_sites(); ++x)
    for (int h = 1; h <= g.sd().N(); ++h) {
      const Mat e = superop_of(
          [&](const Mat& f) { return exh_apply(g, f, x, h); }, d);
      const double resid =
          op_norm(e * l0 - l0 * e + g.sd().lambda(h) * e);
      r.add(0.0, "site " + std::to_string(x) + " component " +
                     std::to_string(h),
            resid, 0.0);
    }
  r.finish(tol);
  return r;
}

CheckResult check_resolvent(const FiniteVolumeGenerator& g, double lambda,
                            int nobs, unsigned seed, double tol) {
  CheckResult r;
  r.name = "resolvent";
  const RMat theta = compute_theta(g);
  const double m_const = column_sum_max(theta);
  const double lam1 = g.sd().gap();
  require(lambda > 0 && lambda + lam1 > m_const,
          "resolvent bound needs lambda + gap above the coupling constant");
  const long d = g.dim();
  const Mat lhei = heisenberg_generator(g);
  Eigen::PartialPivLU<Mat> lu(
      Mat(lambda * Mat::Identity(d * d, d * d) - lhei));
  const RMat binv =
      ((lambda + lam1) * RMat::Identity(g.num_sites(), g.num_sites()) - theta)
          .inverse();
  std::mt19937_64 gen(seed);
  for (int o = 0; o < nobs; ++o) {
    const LocalObs f = random_local_obs(g, gen, 2, false, false);
    const RVec df = delta_profile_support(g, f.full, f.sites);
    const Mat gm = unvec(lu.solve(vec_stack(f.full)), d, d);
    const RVec dg = delta_profile(g, gm);
    const RVec rhs = binv * df;
    r.add(o, "profile excess", (dg - rhs).maxCoeff(), 0.0);
    r.add(o, "seminorm", dg.sum(), df.sum() / (lambda + lam1 - m_const));
  }
  r.finish(tol);
  return r;
}

CheckResult check_contraction(const FiniteVolumeGenerator& g, double t0,
                              double t1, int npts, int nobs, unsigned seed,
                              double tol) {
  CheckResult r;
  r.name = "contraction";
  const RMat theta = compute_theta(g);
  const double m_const = column_sum_max(theta);
  const double lam1 = g.sd().gap();
  const Mat lhei = heisenberg_generator(g);
  std::mt19937_64 gen(seed);
  std::vector<LocalObs> obs;
  std::vector<RVec> df;
  std::vector<Vec> cur;
  for (int o = 0; o < nobs; ++o) {
    obs.push_back(random_local_obs(g, gen, 2, false, false));
    df.push_back(delta_profile_support(g, obs.back().full, obs.back().sites));
    cur.push_back(vec_stack(obs.back().full));
  }
  const double dt = npts > 1 ? (t1 - t0) / (npts - 1) : 0.0;
  const Mat p0 = expm(Mat(lhei * t0));
  const Mat pd = npts > 1 ? expm(Mat(lhei * dt)) : Mat();
  for (auto& v : cur) v = p0 * v;
  const long d = g.dim();
  for (int k = 0; k < npts; ++k) {
    const double t = t0 + k * dt;
    const RMat et = real_expm(RMat(theta * t));
    for (int o = 0; o < nobs; ++o) {
      const RVec dpt = delta_profile(g, unvec(cur[o], d, d));
      r.add(t, "seminorm obs " + std::to_string(o), dpt.sum(),
            std::exp((m_const - lam1) * t) * df[o].sum());
      const RVec rhs = std::exp(-lam1 * t) * (et * df[o]);
      r.add(t, "profile excess obs " + std::to_string(o),
            (dpt - rhs).maxCoeff(), 0.0);
    }
    if (k + 1 < npts)
      for (auto& v : cur) v = pd * v;
  }
  r.finish(tol);
  return r;
}

CheckResult check_convergence(const FiniteVolumeGenerator& g, double t0,
                              double t1, int npts, int nobs, unsigned seed,
                              double tol) {
  CheckResult r;
  r.name = "convergence";
  const double c0 = compute_C0(g);
  const double m_const = column_sum_max(compute_theta(g));
  const double lam1 = g.sd().gap();
  const double margin = lam1 - m_const;
  require(margin > 0, "convergence bound needs a positive margin");
  const StationaryState st = stationary_state(schrodinger_generator(g));
  const Mat lhei = heisenberg_generator(g);
  const long d = g.dim();
  std::mt19937_64 gen(seed);
  std::vector<LocalObs> obs;
  std::vector<double> semi;
  std::vector<cplx> target;
  std::vector<Vec> cur;
  for (int o = 0; o < nobs; ++o) {
    obs.push_back(random_local_obs(g, gen, 2, true, false));
    semi.push_back(seminorm(g, obs.back().full));
    target.push_back((st.rho * obs.back().full).trace());
    cur.push_back(vec_stack(obs.back().full));
  }
  const double dt = npts > 1 ? (t1 - t0) / (npts - 1) : 0.0;
  const Mat p0 = expm(Mat(lhei * t0));
  const Mat pd = npts > 1 ? expm(Mat(lhei * dt)) : Mat();
  for (auto& v : cur) v = p0 * v;
  for (int k = 0; k < npts; ++k) {
    const double t = t0 + k * dt;
    for (int o = 0; o < nobs; ++o) {
      const Mat diff =
          unvec(cur[o], d, d) - target[o] * Mat::Identity(d, d);
      r.add(t, "distance obs " + std::to_string(o), op_norm(diff),
            c0 / margin * std::exp(-margin * t) * semi[o]);
    }
    if (k + 1 < npts)
      for (auto& v : cur) v = pd * v;
  }
  r.finish(tol);
  return r;
}

CheckResult check_propagation(const FiniteVolumeGenerator& g, double xi,
                              double t0, double t1, int npts, unsigned seed,
                              double tol) {
  CheckResult r;
  r.name = "propagation";
  const RMat theta = compute_theta(g);
  const RMat omega = omega_matrix(g);
  const double lam1 = g.sd().gap();
  const double m_xi = column_sum_max_weighted(theta, g.space.vol, xi);
  const double om_xi = max_entry_weighted(omega, g.space.vol, xi);

  // pick the two most separated sites
  int x1 = 0, x2 = 0;
  for (int a = 0; a < g.num_sites(); ++a)
    for (int b = 0; b < g.num_sites(); ++b)
      if (g.space.vol.distance(a, b) > g.space.vol.distance(x1, x2)) {
        x1 = a;
        x2 = b;
      }
  const int dist = g.space.vol.distance(x1, x2);
  std::mt19937_64 gen(seed);
  Mat a1 = random_matrix(g.space.n, gen);
  a1 /= op_norm(a1);
  Mat a2 = random_matrix(g.space.n, gen);
  a2 /= op_norm(a2);
  const Mat f1 = embed(a1, {x1}, g.space);
  const Mat f2 = embed(a2, {x2}, g.space);
  const RVec d1 = delta_profile_support(g, f1, {x1});
  const RVec d2 = delta_profile_support(g, f2, {x2});

  const Mat lhei = heisenberg_generator(g);
  const long d = g.dim();
  const double dt = npts > 1 ? (t1 - t0) / (npts - 1) : 0.0;
  const Mat p0 = expm(Mat(lhei * t0));
  const Mat pd = npts > 1 ? expm(Mat(lhei * dt)) : Mat();
  Vec v1 = p0 * vec_stack(f1), v2 = p0 * vec_stack(f2),
      v12 = p0 * vec_stack(Mat(f1 * f2));

  auto closed_bound = [&](double t) {
    const double rate = 2.0 * (m_xi - lam1);
    const double psi =
        std::abs(rate) < 1e-12 ? t : (std::exp(rate * t) - 1.0) / rate;
    return om_xi * psi * std::exp(-xi * dist) * d1.sum() * d2.sum();
  };
  auto quadrature_bound = [&](double t) {
    if (t <= 0.0) return 0.0;
    const int nseg = 64;  // composite Simpson rule
    const double h = t / nseg;
    double acc = 0.0;
    for (int k = 0; k <= nseg; ++k) {
      const double s = k * h;
      const RMat es = real_expm(RMat(theta * s));
      const RVec g1 = es * d1, g2 = es * d2;
      double inner = 0.0;
      for (int x = 0; x < g.num_sites(); ++x)
        for (int y = 0; y < g.num_sites(); ++y)
          inner += omega(x, y) * g1(x) * g2(y);
      const double w = (k == 0 || k == nseg) ? 1.0 : (k % 2 ? 4.0 : 2.0);
      acc += w * std::exp(-2.0 * lam1 * s) * inner;
    }
    return acc * h / 3.0;
  };

  for (int k = 0; k < npts; ++k) {
    const double t = t0 + k * dt;
    const double actual =
        op_norm(unvec(v12, d, d) - unvec(v1, d, d) * unvec(v2, d, d));
    r.add(t, "defect vs closed form", actual, closed_bound(t));
    r.add(t, "defect vs quadrature", actual, quadrature_bound(t));
    if (k + 1 < npts) {
      v1 = pd * v1;
      v2 = pd * v2;
      v12 = pd * v12;
    }
  }
  r.finish(tol);
  return r;
}

CheckResult check_correlation_decay(const FiniteVolumeGenerator& g,
                                    const std::vector<int>& separations,
                                    unsigned seed, double tol) {
  CheckResult r;
  r.name = "correlation decay";
  const CertificateReport cert = certify_instance(g);
  require(cert.pass, "correlation decay needs a certified positive margin");
  const StationaryState st = stationary_state(schrodinger_generator(g));
  std::mt19937_64 gen(seed);
  Mat a1 = hermitize(random_matrix(g.space.n, gen));
  a1 /= op_norm(a1);
  const Mat f1 = embed(a1, {0}, g.space);
  const double n1 = op_norm(a1) + seminorm(g, f1);
  const cplx e1 = (st.rho * f1).trace();
  for (int s : separations) {
    require(s > 0 && s < g.num_sites(), "separation outside the volume");
    Mat a2 = hermitize(random_matrix(g.space.n, gen));
    a2 /= op_norm(a2);
    const Mat f2 = embed(a2, {s}, g.space);
    const double n2 = op_norm(a2) + seminorm(g, f2);
    const cplx e2 = (st.rho * f2).trace();
    const cplx e12 = (st.rho * f1 * f2).trace();
    const double dist = g.space.vol.distance(0, s);
    r.add(dist, "separation " + std::to_string(s), std::abs(e12 - e1 * e2),
          cert.C_corr * std::exp(-cert.zeta * dist) * n1 * n2);
  }
  r.finish(tol);
  return r;
}

Mat choi_matrix(const Mat& sup) {
  const long d = isqrt_dim(sup.rows());
  Mat c = Mat::Zero(d * d, d * d);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) {
      const Mat s = unvec(sup * vec_stack(matrix_unit(d, i, j)), d, d);
      c.block(i * d, j * d, d, d) = s;
    }
  return c;
}

CheckResult check_choi(const FiniteVolumeGenerator& g,
                       const std::vector<double>& times, double tol) {
  CheckResult r;
  r.name = "complete positivity";
  const Mat lsch = schrodinger_generator(g);
  for (double t : times) {
    const Mat c = choi_matrix(expm(Mat(lsch * t)));
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(c));
    r.add(t, "negative part of the Choi spectrum",
          -es.eigenvalues().minCoeff(), 0.0);
  }
  r.finish(tol);
  return r;
}

CheckResult check_volume_limit(const ModelSpec& spec,
                               const std::vector<int>& sides, double tol) {
  CheckResult r;
  r.name = "volume stability";
  require(sides.size() >= 2, "need at least two volumes to compare");
  std::vector<CertificateReport> certs;
  for (int side : sides) {
    const Volume vol(std::vector<int>(spec.dims, side), false);
    certs.push_back(certify(spec, vol));
  }
  const CertificateReport cov = covariant_certificate(spec);
  for (std::size_t i = 1; i < certs.size(); ++i) {
    r.add(sides[i], "coupling constant drift",
          std::abs(certs[i].M - certs[i - 1].M), 0.0);
    r.add(sides[i], "norm constant drift",
          std::abs(certs[i].C0 - certs[i - 1].C0), 0.0);
  }
  r.add(sides.back(), "coupling constant vs covariant window",
        std::abs(certs.back().M - cov.M), 0.0);
  r.add(sides.back(), "norm constant vs covariant window",
        std::abs(certs.back().C0 - cov.C0), 0.0);
  r.finish(tol);
  return r;
}

}  // namespace qlat
