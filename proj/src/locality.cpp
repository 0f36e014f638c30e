#include "qlat/locality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qlat {

Mat exh_apply(const FiniteVolumeGenerator& g, const Mat& f, int x, int h) {
  require(x >= 0 && x < g.num_sites(), "site index out of range");
  const SpectralData& sd = g.sd();
  require(h >= 0 && h <= sd.N(), "component index out of range");
  if (h == 0) return cond_expectation(f, x, g.site_gen.rho, g.space);
  const Mat e = embed(sd.basis[h], {x}, g.space);
  return cond_expectation(e.adjoint() * f, x, g.site_gen.rho, g.space);
}

RVec delta_profile(const FiniteVolumeGenerator& g, const Mat& f) {
  std::vector<int> all(g.num_sites());
  for (int x = 0; x < g.num_sites(); ++x) all[x] = x;
  return delta_profile_support(g, f, all);
}

RVec delta_profile_support(const FiniteVolumeGenerator& g, const Mat& f,
                           const std::vector<int>& support) {
  RVec d = RVec::Zero(g.num_sites());
  for (int x : support)
    for (int h = 1; h <= g.sd().N(); ++h) d(x) += op_norm(exh_apply(g, f, x, h));
  return d;
}

double seminorm(const FiniteVolumeGenerator& g, const Mat& f) {
  return delta_profile(g, f).sum();
}

double compute_C0(const FiniteVolumeGenerator& g) {
  RVec per_site = RVec::Zero(g.num_sites());
  for (const InteractionTerm& t : g.terms) {
    double w = 0.0;
    if (t.k.size() > 0) w += op_norm(t.k);
    if (t.jump.size() > 0) {
      const double nl = op_norm(t.jump);
      w += 2.0 * nl * nl;
    }
    for (int x : t.sites) per_site(x) += w;
  }
  return 2.0 * g.sd().eta * per_site.maxCoeff();
}

namespace {

struct TermProfiles {
  // deforming terms: reference jump r, deformation v = jump - reference
  // ordinary terms: jump l
  RVec dk;           // profile of the hamiltonian part
  RVec dl, dls;      // profiles of l and l^*
  RVec dr, drs, dv, dvs;
  double nl = 0, nr = 0, nv = 0;
  bool deforming = false;
  std::vector<int> xs;  // sites where any profile can be nonzero
};

TermProfiles term_profiles(const FiniteVolumeGenerator& g,
                           const InteractionTerm& t) {
  TermProfiles p;
  p.xs = t.sites;
  if (t.k.size() > 0)
    p.dk = delta_profile_support(g, g.embed_k(t), t.sites);
  else
    p.dk = RVec::Zero(g.num_sites());
  p.deforming = t.site >= 0;
  if (p.deforming) {
    const Mat r = g.embed_reference(t);
    const Mat l = t.jump.size() > 0 ? g.embed_jump(t)
                                    : Mat::Zero(g.dim(), g.dim()).eval();
    const Mat v = l - r;
    p.nr = op_norm(r);
    p.nv = op_norm(v);
    p.dr = delta_profile_support(g, r, t.sites);
    p.drs = delta_profile_support(g, r.adjoint(), t.sites);
    p.dv = delta_profile_support(g, v, t.sites);
    p.dvs = delta_profile_support(g, v.adjoint(), t.sites);
  } else if (t.jump.size() > 0) {
    const Mat l = g.embed_jump(t);
    p.nl = op_norm(l);
    p.dl = delta_profile_support(g, l, t.sites);
    p.dls = delta_profile_support(g, l.adjoint(), t.sites);
  } else {
    p.dl = p.dls = RVec::Zero(g.num_sites());
  }
  return p;
}

// six-term bracket controlling a deformed one-site channel
double deform_bracket(const TermProfiles& p, int x) {
  return p.drs(x) * p.nv + p.nr * p.dv(x) + p.dvs(x) * p.nr +
         p.nv * p.dr(x) + p.dvs(x) * p.nv + p.nv * p.dv(x);
}

// two-term bracket for an ordinary interaction jump
double plain_bracket(const TermProfiles& p, int x) {
  return p.dls(x) * p.nl + p.nl * p.dls(x);
}

}  // namespace

RMat compute_theta(const FiniteVolumeGenerator& g) {
  const int m = g.num_sites();
  const int N = g.sd().N();
  const double eta = g.sd().eta;
  const double e2 = eta * eta;
  RMat th = RMat::Zero(m, m);
  for (const InteractionTerm& t : g.terms) {
    const TermProfiles p = term_profiles(g, t);
    if (p.deforming) {
      const int y = t.site;
      for (int x : p.xs) {
        const double dxy = (x == y) ? 1.0 : 0.0;
        th(x, y) += 2.0 * N * eta *
                    ((1.0 + e2 * dxy) * p.dk(x) +
                     2.0 * (e2 + dxy) * deform_bracket(p, x));
      }
    } else {
      for (int y : t.sites)
        for (int x : p.xs) {
          const double dxy = (x == y) ? 1.0 : 0.0;
          th(x, y) += 2.0 * N * eta *
                      ((1.0 + e2 * dxy) * p.dk(x) +
                       2.0 * (e2 + dxy) * plain_bracket(p, x));
        }
    }
  }
  return th;
}

RMat theta_term(const FiniteVolumeGenerator& g, const InteractionTerm& t) {
  const int m = g.num_sites();
  const double eta = g.sd().eta;
  const double e2 = eta * eta;
  RMat th = RMat::Zero(m, m);
  const TermProfiles p = term_profiles(g, t);
  for (int y : t.sites)
    for (int x : p.xs) {
      const double dxy = (x == y) ? 1.0 : 0.0;
      const double bracket =
          p.deforming ? deform_bracket(p, x) : plain_bracket(p, x);
      th(x, y) += 2.0 * eta * (1.0 + e2 * dxy) * p.dk(x) +
                  4.0 * eta * eta * eta * (1.0 + dxy / e2) * bracket;
    }
  return th;
}

RMat omega_matrix(const FiniteVolumeGenerator& g) {
  const int m = g.num_sites();
  const double e2 = g.sd().eta * g.sd().eta;
  RMat om = RMat::Zero(m, m);
  for (const InteractionTerm& t : g.terms) {
    if (t.jump.size() == 0) continue;
    const double nl = op_norm(t.jump);
    if (nl == 0.0) continue;
    for (int x : t.sites)
      for (int y : t.sites) om(x, y) += 8.0 * e2 * nl * nl;
  }
  return om;
}

double column_sum_max(const RMat& theta) {
  return theta.colwise().sum().maxCoeff();
}

double column_sum_max_weighted(const RMat& theta, const Volume& vol,
                               double xi) {
  double best = 0.0;
  for (int y = 0; y < theta.cols(); ++y) {
    double s = 0.0;
    for (int x = 0; x < theta.rows(); ++x)
      s += theta(x, y) * std::exp(xi * vol.distance(x, y));
    best = std::max(best, s);
  }
  return best;
}

double max_entry_weighted(const RMat& omega, const Volume& vol, double xi) {
  double best = 0.0;
  for (int y = 0; y < omega.cols(); ++y)
    for (int x = 0; x < omega.rows(); ++x)
      best = std::max(best, omega(x, y) * std::exp(xi * vol.distance(x, y)));
  return best;
}

CertificateReport certify_instance(const FiniteVolumeGenerator& g) {
  CertificateReport r;
  r.model = g.spec.name;
  r.volume_sites = g.num_sites();
  r.periodic = g.space.vol.periodic;
  r.excluded_terms = g.excluded_terms;
  r.N = g.sd().N();
  r.eta = g.sd().eta;
  r.lambda1 = g.sd().gap();
  r.C0 = compute_C0(g);
  const RMat theta = compute_theta(g);
  r.M = column_sum_max(theta);
  r.margin = r.lambda1 - r.M;
  r.pass = r.margin > 0.0;
  if (!r.pass) {
    r.xi = r.M_xi = r.Omega_xi = r.zeta = r.C_corr = r.C =
        std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  r.C = r.C0 / r.margin;
  const RMat omega = omega_matrix(g);
  const double R = std::max(1, g.spec.range);
  if (r.M > 1e-14) {
    // scan decay rates over a logarithmic grid and keep the best
    double best_zeta = -1.0, best_xi = 0.0;
    for (int k = 0; k < 32; ++k) {
      const double xi =
          std::exp(std::log(1e-3) + k * (std::log(5.0) - std::log(1e-3)) / 31);
      const double z = r.margin * xi / (r.margin + 2.0 * r.M * std::exp(R * xi));
      if (z > best_zeta) {
        best_zeta = z;
        best_xi = xi;
      }
    }
    r.xi = best_xi;
    r.zeta = best_zeta;
    r.M_xi = column_sum_max_weighted(theta, g.space.vol, r.xi);
    r.Omega_xi = max_entry_weighted(omega, g.space.vol, r.xi);
    r.C_corr =
        2.0 * r.N * r.eta * r.eta *
        std::max(r.C, r.Omega_xi / (2.0 * r.M * std::exp(R * r.xi)));
  } else {
    // free dynamics: no site-to-site coupling, any rate up to the grid top
    r.xi = 5.0;
    r.zeta = 5.0;
    r.M_xi = column_sum_max_weighted(theta, g.space.vol, r.xi);
    r.Omega_xi = max_entry_weighted(omega, g.space.vol, r.xi);
    r.C_corr = 2.0 * r.N * r.eta * r.eta * r.C;
  }
  return r;
}

CertificateReport certify(const ModelSpec& spec, const Volume& vol) {
  return certify_instance(assemble(spec, vol));
}

CertificateReport covariant_certificate(const ModelSpec& spec) {
  const int side = std::max(2 * spec.range + 3, 4);
  const Volume window(std::vector<int>(spec.dims, side), true);
  return certify(spec, window);
}

}  // namespace qlat
