#include "qlat/fermion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <random>

#include "qlat/dynamics.hpp"

namespace qlat {

namespace {

int popcount_long(long x) { return std::popcount(static_cast<unsigned long>(x)); }

Mat embed_mode_op(int modes, int p, bool create) {
  // Annihilator (or creator) for mode p with the string sign over lower modes.
  const long d = 1L << modes;
  Mat m = Mat::Zero(d, d);
  const long bit = 1L << p;
  const long mask = bit - 1;
  for (long x = 0; x < d; ++x) {
    if (!(x & bit)) continue;
    const double sign = (popcount_long(x & mask) % 2 == 0) ? 1.0 : -1.0;
    if (create) {
      m(x, x ^ bit) = sign;
    } else {
      m(x ^ bit, x) = sign;
    }
  }
  return m;
}

} // namespace

CarRep build_car(const Volume& vol, double h) {
  const int m = vol.num_sites();
  require(m >= 1 && m <= 16, "mode count out of range for a dense representation");
  CarRep rep;
  rep.vol = vol;
  rep.h = h;
  const long d = 1L << m;
  rep.w = Mat::Zero(d, d);
  for (long x = 0; x < d; ++x) rep.w(x, x) = (popcount_long(x) % 2 == 0) ? 1.0 : -1.0;
  rep.a.reserve(m);
  rep.ad.reserve(m);
  rep.v.reserve(m);
  rep.vd.reserve(m);
  for (int p = 0; p < m; ++p) {
    rep.a.push_back(embed_mode_op(m, p, false));
    rep.ad.push_back(embed_mode_op(m, p, true));
    rep.v.push_back(rep.w * rep.a[p]);
    rep.vd.push_back(rep.ad[p] * rep.w);
  }
  return rep;
}

Mat grad(const CarRep& rep, int x, const Mat& f) { return rep.w * comm(rep.v[x], f); }
Mat grad_bar(const CarRep& rep, int x, const Mat& f) { return -rep.w * comm(rep.vd[x], f); }
Mat grad_bare(const CarRep& rep, int x, const Mat& f) { return rep.w * comm(rep.a[x], f); }
Mat grad_bare_bar(const CarRep& rep, int x, const Mat& f) { return -rep.w * comm(rep.ad[x], f); }

Mat mode_expectation(const CarRep& rep, int x, const Mat& f) {
  // Average over conjugation by the dressed single-mode unitaries; this is
  // the normalized trace on the commuting factor generated by v_x, v_x*.
  const Mat X = rep.v[x] + rep.vd[x];
  const Mat Y = cplx(0, 1) * (rep.v[x] - rep.vd[x]);
  const Mat Z = rep.vd[x] * rep.v[x] - rep.v[x] * rep.vd[x];
  return 0.25 * (f + X * f * X + Y * f * Y + Z * f * Z);
}

double decomposition_residual(const CarRep& rep, int x, const Mat& f) {
  const Mat df = grad(rep, x, f);
  const Mat dbf = grad_bar(rep, x, f);
  const Mat Df = rep.ad[x] * df;
  const Mat Dbf = rep.a[x] * dbf;
  const Mat DDb = rep.ad[x] * grad(rep, x, Dbf);
  const Mat DbD = rep.a[x] * grad_bar(rep, x, Df);
  const Mat rhs = mode_expectation(rep, x, f) + Df + Dbf - 0.5 * (DDb + DbD);
  return op_norm(f - rhs);
}

RVec grad_profile(const CarRep& rep, const Mat& f) {
  RVec out(rep.modes());
  for (int x = 0; x < rep.modes(); ++x) out(x) = op_norm(grad(rep, x, f));
  return out;
}

RVec grad_bar_profile(const CarRep& rep, const Mat& f) {
  RVec out(rep.modes());
  for (int x = 0; x < rep.modes(); ++x) out(x) = op_norm(grad_bar(rep, x, f));
  return out;
}

double fermi_seminorm(const CarRep& rep, const Mat& f) {
  return grad_profile(rep, f).sum() + grad_bar_profile(rep, f).sum();
}

double fermi_gap(double h) { return 2.0 * std::cosh(h / 2.0); }

Mat fermi_ou_mode(const CarRep& rep, int x) {
  return std::exp(rep.h / 2.0) * sop_dissipator(rep.vd[x]) +
         std::exp(-rep.h / 2.0) * sop_dissipator(rep.v[x]);
}

Mat fermi_ou_generator(const CarRep& rep) {
  const long d2 = rep.dim() * rep.dim();
  Mat gen = Mat::Zero(d2, d2);
  for (int x = 0; x < rep.modes(); ++x) gen += fermi_ou_mode(rep, x);
  return gen;
}

Mat fermi_ou_dual(const CarRep& rep) {
  const long d2 = rep.dim() * rep.dim();
  Mat gen = Mat::Zero(d2, d2);
  for (int x = 0; x < rep.modes(); ++x) {
    gen += std::exp(rep.h / 2.0) * sop_dissipator_dual(rep.vd[x]) +
           std::exp(-rep.h / 2.0) * sop_dissipator_dual(rep.v[x]);
  }
  return gen;
}

Mat gibbs_state(const CarRep& rep) {
  const long d = rep.dim();
  Mat rho = Mat::Zero(d, d);
  const double z = std::pow(1.0 + std::exp(rep.h), rep.modes());
  for (long x = 0; x < d; ++x) rho(x, x) = std::exp(rep.h * popcount_long(x)) / z;
  return rho;
}

FermionModelSpec fermion_hopping(double J, double h, const CarRep& rep) {
  FermionModelSpec spec;
  spec.name = "fermion_hopping";
  spec.h = h;
  const int m = rep.modes();
  for (int x = 0; x < m; ++x) {
    for (int y = x + 1; y < m; ++y) {
      if (rep.vol.distance(x, y) != 1) continue;
      FermionTerm t;
      t.sites = {x, y};
      t.k = J * (rep.ad[x] * rep.a[y] + rep.ad[y] * rep.a[x]);
      spec.terms.push_back(std::move(t));
    }
  }
  return spec;
}

FermionVolumeGenerator fermion_assemble(const FermionModelSpec& spec, const CarRep& rep) {
  FermionVolumeGenerator g;
  g.rep = rep;
  g.spec = spec;
  const long d = rep.dim();
  const long d2 = d * d;
  Mat pert = Mat::Zero(d2, d2);
  for (const auto& t : spec.terms) {
    require(!t.sites.empty(), "interaction term has empty support");
    for (int s : t.sites) require(s >= 0 && s < rep.modes(), "interaction site out of range");
    if (t.k.size() > 0) {
      require(t.k.rows() == d && t.k.cols() == d, "Hamiltonian term has wrong dimension");
      const double scale = std::max(1.0, op_norm(t.k));
      require(op_norm(Mat(t.k - dagger(t.k))) < 1e-10 * scale,
              "Hamiltonian term is not self-adjoint");
      require(op_norm(Mat(rep.w * t.k * rep.w - t.k)) < 1e-12 * scale,
              "Hamiltonian term is not even");
      pert += cplx(0, 1) * (sop_left(t.k) - sop_right(t.k));
    }
    if (t.jump.size() > 0) {
      require(t.jump.rows() == d && t.jump.cols() == d, "jump term has wrong dimension");
      const double scale = std::max(1.0, op_norm(t.jump));
      const double sign = (t.parity % 2 == 0) ? 1.0 : -1.0;
      require(op_norm(Mat(rep.w * t.jump * rep.w - sign * t.jump)) < 1e-12 * scale,
              "jump operator does not have the declared parity");
      pert += sop_dissipator(t.jump);
    }
  }
  g.l_free = fermi_ou_generator(rep);
  g.l_pert = std::move(pert);
  g.l_total = g.l_free + g.l_pert;
  return g;
}

Mat fermion_schrodinger(const FermionVolumeGenerator& g) {
  Mat dual = fermi_ou_dual(g.rep);
  for (const auto& t : g.spec.terms) {
    if (t.k.size() > 0) dual += cplx(0, -1) * (sop_left(t.k) - sop_right(t.k));
    if (t.jump.size() > 0) dual += sop_dissipator_dual(t.jump);
  }
  return dual;
}

namespace {

RMat theta_weights(const FermionVolumeGenerator& g, bool barred) {
  const int m = g.rep.modes();
  RMat th = RMat::Zero(m, m);
  for (const auto& t : g.spec.terms) {
    for (int x = 0; x < m; ++x) {
      double row = 0;
      if (t.k.size() > 0) {
        row += barred ? op_norm(grad_bar(g.rep, x, t.k)) : op_norm(grad(g.rep, x, t.k));
      }
      if (t.jump.size() > 0) {
        const Mat js = dagger(t.jump);
        const double dl = barred ? op_norm(grad_bare_bar(g.rep, x, t.jump))
                                 : op_norm(grad_bare(g.rep, x, t.jump));
        const double dls = barred ? op_norm(grad_bare_bar(g.rep, x, js))
                                  : op_norm(grad_bare(g.rep, x, js));
        row += 2.0 * op_norm(t.jump) * (dl + dls);
      }
      if (row == 0) continue;
      for (int y : t.sites) th(x, y) += 4.0 * row;
    }
  }
  return th;
}

} // namespace

RMat fermion_theta(const FermionVolumeGenerator& g) { return theta_weights(g, false); }
RMat fermion_theta_bar(const FermionVolumeGenerator& g) { return theta_weights(g, true); }

double fermion_C0(const FermionVolumeGenerator& g) {
  const int m = g.rep.modes();
  RVec per_site = RVec::Zero(m);
  for (const auto& t : g.spec.terms) {
    double s = 0;
    if (t.k.size() > 0) s += op_norm(t.k);
    if (t.jump.size() > 0) {
      const double nj = op_norm(t.jump);
      s += 2.0 * nj * nj;
    }
    for (int y : t.sites) per_site(y) += s;
  }
  return fermi_gap(g.rep.h) + 4.0 * per_site.maxCoeff();
}

FermionCertificateReport fermion_certify(const FermionModelSpec& spec, const CarRep& rep) {
  const FermionVolumeGenerator g = fermion_assemble(spec, rep);
  FermionCertificateReport r;
  r.model = spec.name;
  r.volume_sites = rep.modes();
  r.periodic = rep.vol.periodic;
  r.h = rep.h;
  r.gap = fermi_gap(rep.h);
  r.C0 = fermion_C0(g);
  const RMat total = fermion_theta(g) + fermion_theta_bar(g);
  r.M = (rep.modes() > 0) ? total.colwise().sum().maxCoeff() : 0.0;
  r.margin = r.gap - r.M;
  r.pass = r.M < r.gap;
  return r;
}

namespace {

// Random element of the algebra generated by the listed letters: a quadratic
// polynomial with Gaussian coefficients, enough to leave any fixed subspace.
Mat random_word_poly(const std::vector<Mat>& letters, long d, std::mt19937_64& gen) {
  std::normal_distribution<double> dist;
  auto rand_linear = [&]() {
    Mat s = dist(gen) * Mat::Identity(d, d);
    for (const auto& l : letters) s += cplx(dist(gen), dist(gen)) * l;
    return s;
  };
  const Mat g1 = rand_linear();
  const Mat g2 = rand_linear();
  const Mat g3 = rand_linear();
  return g1 * g2 + g3;
}

// Random linear combination of the dressed generators on the given modes:
// an odd element of the commuting local algebra.
Mat random_dressed_odd(const CarRep& rep, const std::vector<int>& modes, std::mt19937_64& gen) {
  std::normal_distribution<double> dist;
  Mat u = Mat::Zero(rep.dim(), rep.dim());
  for (int x : modes) {
    u += cplx(dist(gen), dist(gen)) * rep.v[x];
    u += cplx(dist(gen), dist(gen)) * rep.vd[x];
  }
  return u;
}

std::vector<int> random_mode_subset(int m, int max_size, std::mt19937_64& gen) {
  std::vector<int> pool(m);
  for (int i = 0; i < m; ++i) pool[i] = i;
  std::shuffle(pool.begin(), pool.end(), gen);
  const int size = 1 + static_cast<int>(gen() % static_cast<unsigned>(std::min(max_size, m)));
  pool.resize(size);
  std::sort(pool.begin(), pool.end());
  return pool;
}

} // namespace

CheckResult fermion_car_suite(const CarRep& rep, double tol) {
  CheckResult r;
  r.name = "fermion algebra identities";
  const int m = rep.modes();
  const long d = rep.dim();
  const Mat id = Mat::Identity(d, d);
  auto sample = [&](const std::string& q, double value) { r.add(0, q, value, 0.0); };

  sample("parity squares to identity", op_norm(Mat(rep.w * rep.w - id)));
  for (long x = 0; x < d; ++x) {
    const double want = (popcount_long(x) % 2 == 0) ? 1.0 : -1.0;
    if (std::abs(rep.w(x, x).real() - want) > 0 || std::abs(rep.w(x, x).imag()) > 0) {
      sample("parity basis action", 1.0);
      break;
    }
  }
  for (int x = 0; x < m; ++x) {
    sample("parity anticommutes with mode " + std::to_string(x),
           op_norm(Mat(rep.w * rep.a[x] + rep.a[x] * rep.w)));
    for (int y = x; y < m; ++y) {
      const double delta = (x == y) ? 1.0 : 0.0;
      sample("pair annihilators " + std::to_string(x) + "," + std::to_string(y),
             op_norm(acomm(rep.a[x], rep.a[y])));
      sample("pair mixed " + std::to_string(x) + "," + std::to_string(y),
             op_norm(Mat(acomm(rep.a[x], rep.ad[y]) - delta * id)));
      sample("dressed pair " + std::to_string(x) + "," + std::to_string(y),
             op_norm(acomm(rep.v[x], rep.v[y])));
      sample("dressed mixed " + std::to_string(x) + "," + std::to_string(y),
             op_norm(Mat(acomm(rep.v[x], rep.vd[y]) - delta * id)));
    }
    for (int y = 0; y < m; ++y) {
      const double delta = (x == y) ? 1.0 : 0.0;
      sample("dressed commutes with annihilator", op_norm(comm(rep.v[x], rep.a[y])));
      sample("dressed against creator", op_norm(Mat(comm(rep.v[x], rep.ad[y]) - delta * rep.w)));
      sample("dressed adjoint against annihilator",
             op_norm(Mat(comm(rep.vd[x], rep.a[y]) + delta * rep.w)));
      sample("dressed bilinear commutes off-site",
             delta == 1.0 ? 0.0 : op_norm(comm(Mat(rep.vd[x] * rep.v[x]), rep.a[y])));
      sample("dressed bilinear matches bare bilinear",
             op_norm(Mat(rep.vd[x] * rep.v[y] - rep.ad[x] * rep.a[y])));
    }
  }
  // Derivation tables and product rule on the first mode.
  const int x0 = 0;
  sample("derivative of identity", op_norm(grad(rep, x0, id)));
  sample("derivative of own annihilator", op_norm(grad(rep, x0, rep.a[x0])));
  sample("bar derivative of own creator", op_norm(grad_bar(rep, x0, rep.ad[x0])));
  sample("creator recovery",
         op_norm(Mat(rep.ad[x0] * grad(rep, x0, rep.ad[x0]) - rep.ad[x0])));
  sample("annihilator recovery",
         op_norm(Mat(rep.a[x0] * grad_bar(rep, x0, rep.a[x0]) - rep.a[x0])));
  const Mat n0 = rep.ad[x0] * rep.a[x0];
  sample("number derivative", op_norm(Mat(grad(rep, x0, n0) - rep.a[x0])));
  sample("number bar derivative", op_norm(Mat(grad_bar(rep, x0, n0) + rep.ad[x0])));
  std::mt19937_64 gen(2024);
  for (int rep_i = 0; rep_i < 3; ++rep_i) {
    const Mat f = random_matrix(static_cast<int>(d), gen);
    const Mat g2 = random_matrix(static_cast<int>(d), gen);
    const Mat lhs = grad(rep, x0, Mat(f * g2));
    const Mat rhs = grad(rep, x0, f) * g2 + rep.w * f * rep.w * grad(rep, x0, g2);
    sample("twisted product rule", op_norm(Mat(lhs - rhs)) / (1 + op_norm(f) * op_norm(g2)));
    if (m > 1) {
      std::vector<Mat> letters;
      for (int y = 1; y < m; ++y) {
        letters.push_back(rep.a[y]);
        letters.push_back(rep.ad[y]);
      }
      const Mat away = random_word_poly(letters, d, gen);
      const double scale = std::max(1.0, op_norm(away));
      sample("derivative vanishes off support", op_norm(grad(rep, x0, away)) / scale);
      sample("bar derivative vanishes off support", op_norm(grad_bar(rep, x0, away)) / scale);
    }
  }
  r.finish(tol);
  return r;
}

CheckResult fermion_decomposition_check(const CarRep& rep, int nobs, unsigned seed, double tol) {
  CheckResult r;
  r.name = "fermion gradient decomposition";
  std::mt19937_64 gen(seed);
  for (int o = 0; o < nobs; ++o) {
    Mat f = random_matrix(static_cast<int>(rep.dim()), gen);
    f /= std::max(1.0, op_norm(f));
    for (int x = 0; x < rep.modes(); ++x) {
      r.add(0, "mode " + std::to_string(x) + " obs " + std::to_string(o),
            decomposition_residual(rep, x, f), 0.0);
    }
  }
  r.finish(tol);
  return r;
}

CheckResult fermion_intertwining(const CarRep& rep, double tol) {
  CheckResult r;
  r.name = "fermion free-generator intertwining";
  const Mat l0 = fermi_ou_generator(rep);
  const double rate = fermi_gap(rep.h);
  const long d = rep.dim();
  for (int x = 0; x < rep.modes(); ++x) {
    const Mat sd = superop_of([&](const Mat& f) { return grad(rep, x, f); }, d);
    const Mat sdb = superop_of([&](const Mat& f) { return grad_bar(rep, x, f); }, d);
    r.add(0, "mode " + std::to_string(x), op_norm(Mat(sd * l0 - l0 * sd + rate * sd)), 0.0);
    r.add(0, "mode " + std::to_string(x) + " bar",
          op_norm(Mat(sdb * l0 - l0 * sdb + rate * sdb)), 0.0);
  }
  r.finish(tol);
  return r;
}

CheckResult fermion_commutator_bounds(const CarRep& rep, int nobs, unsigned seed, double tol) {
  CheckResult r;
  r.name = "fermion commutator norm bounds";
  std::mt19937_64 gen(seed);
  const int m = rep.modes();
  const long d = rep.dim();
  const double c2 = fermi_gap(rep.h);
  for (int o = 0; o < nobs; ++o) {
    Mat f = random_matrix(static_cast<int>(d), gen);
    f /= std::max(1.0, op_norm(f));
    const RVec dp = grad_profile(rep, f);
    const RVec dbp = grad_bar_profile(rep, f);
    const int x = static_cast<int>(gen() % static_cast<unsigned>(m));
    const std::string tag = " obs " + std::to_string(o);

    // Gradient norms agree with the dressed commutators.
    r.add(0, "dressed commutator norm" + tag,
          std::abs(op_norm(comm(rep.v[x], f)) - dp(x)), 0.0);
    r.add(0, "dressed adjoint commutator norm" + tag,
          std::abs(op_norm(comm(rep.vd[x], f)) - dbp(x)), 0.0);
    const Mat nx = rep.ad[x] * rep.a[x];
    r.add(0, "number commutator" + tag, op_norm(comm(nx, f)), dp(x) + dbp(x));

    // One mode of the free generator is controlled by the local gradients.
    const Mat lx = fermi_ou_mode(rep, x);
    r.add(0, "free mode action" + tag,
          op_norm(unvec(Vec(lx * vec_stack(f)), d, d)), c2 * (dp(x) + dbp(x)));

    // Commutator against a local dressed element.
    const std::vector<int> sup = random_mode_subset(m, 2, gen);
    std::vector<Mat> letters;
    for (int y : sup) {
      letters.push_back(rep.v[y]);
      letters.push_back(rep.vd[y]);
    }
    const Mat u = random_word_poly(letters, d, gen);
    double budget = 0;
    for (int y : sup) budget += dp(y) + dbp(y);
    r.add(0, "local commutator" + tag, op_norm(comm(u, f)), 4.0 * op_norm(u) * budget);

    // Even local elements commute with the gradients up to their own gradient.
    const Mat o1 = random_dressed_odd(rep, sup, gen);
    const Mat o2 = random_dressed_odd(rep, sup, gen);
    std::normal_distribution<double> dist;
    const Mat ueven = o1 * o2 + dist(gen) * Mat::Identity(d, d);
    for (int xx : {sup.front(), (sup.front() + 1) % m}) {
      const Mat defect = grad(rep, xx, comm(ueven, f)) - comm(ueven, grad(rep, xx, f));
      r.add(0, "even commutation defect" + tag, op_norm(defect),
            4.0 * op_norm(grad(rep, xx, ueven)) * budget);
      const Mat defect_b =
          grad_bar(rep, xx, comm(ueven, f)) - comm(ueven, grad_bar(rep, xx, f));
      r.add(0, "even commutation defect bar" + tag, op_norm(defect_b),
            4.0 * op_norm(grad_bar(rep, xx, ueven)) * budget);
    }

    // Dissipator-shaped expressions for homogeneous u, both parities.
    for (int par = 0; par <= 1; ++par) {
      const Mat u_h = (par == 1) ? random_dressed_odd(rep, sup, gen) : Mat(o1 * o2);
      const Mat us = dagger(u_h);
      const Mat expr = us * comm(f, u_h) + comm(us, f) * u_h;
      const int xx = sup.front();
      const Mat lhs = grad(rep, xx, expr) -
                      (us * comm(grad(rep, xx, f), u_h) + comm(us, grad(rep, xx, f)) * u_h);
      const double cap = 8.0 * op_norm(u_h) *
                         (op_norm(grad_bare(rep, xx, us)) + op_norm(grad_bare(rep, xx, u_h)));
      r.add(0, "dissipator-shape defect parity " + std::to_string(par) + tag, op_norm(lhs),
            cap * budget);
      const Mat lhs_b =
          grad_bar(rep, xx, expr) -
          (us * comm(grad_bar(rep, xx, f), u_h) + comm(us, grad_bar(rep, xx, f)) * u_h);
      const double cap_b =
          8.0 * op_norm(u_h) *
          (op_norm(grad_bare_bar(rep, xx, us)) + op_norm(grad_bare_bar(rep, xx, u_h)));
      r.add(0, "dissipator-shape defect bar parity " + std::to_string(par) + tag,
            op_norm(lhs_b), cap_b * budget);
    }
  }
  r.finish(tol);
  return r;
}

CheckResult fermion_generator_commutator(const FermionVolumeGenerator& g, int nobs, unsigned seed,
                                         double tol) {
  CheckResult r;
  r.name = "fermion interaction commutation weights";
  std::mt19937_64 gen(seed);
  const RMat th = fermion_theta(g);
  const RMat thb = fermion_theta_bar(g);
  const long d = g.rep.dim();
  for (int o = 0; o < nobs; ++o) {
    Mat f = random_matrix(static_cast<int>(d), gen);
    f /= std::max(1.0, op_norm(f));
    const RVec dp = grad_profile(g.rep, f);
    const RVec dbp = grad_bar_profile(g.rep, f);
    const Mat l1f = unvec(Vec(g.l_pert * vec_stack(f)), d, d);
    for (int x = 0; x < g.rep.modes(); ++x) {
      const double budget = (th.row(x).transpose().array() * (dp + dbp).array()).sum();
      r.add(0, "defect mode " + std::to_string(x) + " obs " + std::to_string(o),
            op_norm(Mat(grad(g.rep, x, l1f) -
                        unvec(Vec(g.l_pert * vec_stack(grad(g.rep, x, f))), d, d))),
            budget);
      const double budget_b = (thb.row(x).transpose().array() * (dp + dbp).array()).sum();
      r.add(0, "defect bar mode " + std::to_string(x) + " obs " + std::to_string(o),
            op_norm(Mat(grad_bar(g.rep, x, l1f) -
                        unvec(Vec(g.l_pert * vec_stack(grad_bar(g.rep, x, f))), d, d))),
            budget_b);
    }
  }
  r.finish(tol);
  return r;
}

CheckResult fermion_contraction(const FermionVolumeGenerator& g, double t0, double t1, int npts,
                                int nobs, unsigned seed, double tol) {
  CheckResult r;
  r.name = "fermion seminorm contraction";
  const FermionCertificateReport cert = fermion_certify(g.spec, g.rep);
  std::mt19937_64 gen(seed);
  const long d = g.rep.dim();
  std::vector<Mat> obs;
  std::vector<double> base;
  for (int o = 0; o < nobs; ++o) {
    Mat f = random_matrix(static_cast<int>(g.rep.dim()), gen);
    f /= std::max(1.0, op_norm(f));
    base.push_back(fermi_seminorm(g.rep, f));
    obs.push_back(std::move(f));
  }
  for (int i = 0; i < npts; ++i) {
    const double t = (npts == 1) ? t0 : t0 + (t1 - t0) * i / (npts - 1);
    const Mat pt = expm(Mat(g.l_total * t));
    for (int o = 0; o < nobs; ++o) {
      const Mat ft = unvec(Vec(pt * vec_stack(obs[o])), d, d);
      r.add(t, "seminorm obs " + std::to_string(o), fermi_seminorm(g.rep, ft),
            std::exp(-cert.margin * t) * base[o]);
    }
  }
  r.finish(tol);
  return r;
}

CheckResult fermion_convergence(const FermionVolumeGenerator& g, double t0, double t1, int npts,
                                int nobs, unsigned seed, double tol) {
  CheckResult r;
  r.name = "fermion uniform convergence";
  const FermionCertificateReport cert = fermion_certify(g.spec, g.rep);
  require(cert.margin > 0, "convergence bound needs a positive margin");
  const StationaryState ss = stationary_state(fermion_schrodinger(g));
  std::mt19937_64 gen(seed);
  const int m = g.rep.modes();
  // Keep supports one site away from open boundaries so the truncated and
  // covariant certificates describe the same local dynamics.
  std::vector<int> interior;
  for (int x = 0; x < m; ++x) {
    if (g.rep.vol.periodic) {
      interior.push_back(x);
    } else {
      const auto c = g.rep.vol.coords(x);
      bool ok = true;
      for (size_t k = 0; k < c.size(); ++k) {
        if (std::min(c[k], g.rep.vol.shape[k] - 1 - c[k]) < 1) ok = false;
      }
      if (ok) interior.push_back(x);
    }
  }
  if (interior.empty()) interior.push_back(m / 2);
  std::vector<Mat> obs;
  std::vector<double> base;
  const long d = g.rep.dim();
  for (int o = 0; o < nobs; ++o) {
    std::vector<int> sup = random_mode_subset(static_cast<int>(interior.size()), 2, gen);
    std::vector<Mat> letters;
    for (int idx : sup) {
      letters.push_back(g.rep.a[interior[idx]]);
      letters.push_back(g.rep.ad[interior[idx]]);
    }
    Mat f = hermitize(random_word_poly(letters, d, gen));
    f /= std::max(1.0, op_norm(f));
    base.push_back(fermi_seminorm(g.rep, f));
    obs.push_back(std::move(f));
  }
  const Mat id = Mat::Identity(d, d);
  for (int i = 0; i < npts; ++i) {
    const double t = (npts == 1) ? t0 : t0 + (t1 - t0) * i / (npts - 1);
    const Mat pt = expm(Mat(g.l_total * t));
    for (int o = 0; o < nobs; ++o) {
      const Mat ft = unvec(Vec(pt * vec_stack(obs[o])), d, d);
      const cplx mean = (ss.rho * obs[o]).trace();
      r.add(t, "distance obs " + std::to_string(o), op_norm(Mat(ft - mean * id)),
            cert.C0 / cert.margin * std::exp(-cert.margin * t) * base[o]);
    }
  }
  r.finish(tol);
  return r;
}

CheckResult fermion_stationarity(const FermionVolumeGenerator& g, double tol) {
  CheckResult r;
  r.name = "fermion free stationary state";
  const Mat rho = gibbs_state(g.rep);
  const Mat dual = fermi_ou_dual(g.rep);
  r.add(0, "free dynamics fixes the product state",
        Mat(dual * vec_stack(rho)).cwiseAbs().maxCoeff(), 0.0);
  const Mat l0 = fermi_ou_generator(g.rep);
  const Mat gram = kron(rho.transpose(), Mat::Identity(g.rep.dim(), g.rep.dim()));
  r.add(0, "free dynamics symmetric in the product pairing",
        op_norm(Mat(gram * l0 - l0.adjoint() * gram)) / std::max(1.0, op_norm(l0)), 0.0);
  // The hopping interaction conserves particle number, so the same product
  // state stays fixed for the full dynamics.
  bool number_conserving = true;
  for (const auto& t : g.spec.terms) {
    if (t.jump.size() > 0) number_conserving = false;
  }
  if (number_conserving) {
    r.add(0, "full dynamics fixes the product state",
          Mat(fermion_schrodinger(g) * vec_stack(rho)).cwiseAbs().maxCoeff(), 0.0);
  }
  r.finish(tol);
  return r;
}

std::vector<CheckResult> fermion_checks(const FermionModelSpec& spec, const CarRep& rep,
                                        unsigned seed, double tol_scale) {
  const FermionVolumeGenerator g = fermion_assemble(spec, rep);
  std::vector<CheckResult> out;
  out.push_back(fermion_car_suite(rep, 1e-12 * tol_scale));
  out.push_back(fermion_decomposition_check(rep, 10, seed, 1e-10 * tol_scale));
  out.push_back(fermion_intertwining(rep, 1e-9 * tol_scale));
  out.push_back(fermion_commutator_bounds(rep, 10, seed + 1, 1e-9 * tol_scale));
  out.push_back(fermion_generator_commutator(g, 10, seed + 2, 1e-9 * tol_scale));
  out.push_back(fermion_stationarity(g, 1e-10 * tol_scale));
  const FermionCertificateReport cert = fermion_certify(spec, rep);
  if (cert.pass) {
    out.push_back(fermion_contraction(g, 0.0, 2.0, 6, 5, seed + 3, 1e-8 * tol_scale));
    out.push_back(fermion_convergence(g, 0.0, 3.0, 8, 5, seed + 4, 1e-6 * tol_scale));
  }
  return out;
}

} // namespace qlat
