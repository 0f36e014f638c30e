#include "qlat/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Eigenvalues>

#include "qlat/dynamics.hpp"
#include "qlat/locality.hpp"

namespace qlat {

namespace {

std::vector<Mat> xyz_basis_override() {
  const double r2 = std::sqrt(2.0);
  std::vector<Mat> basis;
  basis.push_back(Mat::Identity(2, 2));
  basis.push_back(r2 * matrix_unit(2, 0, 1));
  basis.push_back(r2 * matrix_unit(2, 1, 0));
  basis.push_back(pauli(3));
  return basis;
}

} // namespace

ModelSpec model_xyz(double J1, double J2, double J3, int dims) {
  require(dims >= 1 && dims <= 3, "lattice dimension out of range");
  const double r2 = std::sqrt(2.0);
  ModelSpec spec;
  spec.name = "xyz";
  spec.n = 2;
  spec.dims = dims;
  spec.rho = 0.5 * Mat::Identity(2, 2);
  spec.site_jumps = {pauli(1) / r2, pauli(2) / r2};
  spec.basis_override = xyz_basis_override();
  spec.range = 1;
  const double J[3] = {J1, J2, J3};
  for (int k = 0; k < dims; ++k) {
    Site e(dims, 0);
    e[k] = 1;
    for (int j = 0; j < 3; ++j) {
      InteractionBlock b;
      b.offsets = {Site(dims, 0), e};
      b.k = J[j] * kron(pauli(j + 1), pauli(j + 1));
      spec.blocks.push_back(std::move(b));
    }
  }
  return spec;
}

namespace {

double golden_section(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Coordinate descent with an expanding bracket per coordinate; the objective
// is convex in each coordinate (a norm of an affine family).
RVec coordinate_descent(const std::function<double(const RVec&)>& f, RVec start, double tol) {
  RVec x = std::move(start);
  double fx = f(x);
  for (int sweep = 0; sweep < 200; ++sweep) {
    const double before = fx;
    for (int k = 0; k < x.size(); ++k) {
      double span = 1.0 + std::abs(x(k));
      auto g = [&](double v) {
        RVec y = x;
        y(k) = v;
        return f(y);
      };
      // Grow the bracket until neither endpoint improves on the center.
      for (int grow = 0; grow < 60; ++grow) {
        if (g(x(k) - span) >= fx && g(x(k) + span) >= fx) break;
        span *= 2.0;
      }
      x(k) = golden_section(g, x(k) - span, x(k) + span, tol);
      fx = f(x);
    }
    if (before - fx < tol * 1e-3 && sweep > 2) break;
  }
  return x;
}

struct DiagonalFit {
  RVec g;
  double value = 0;
};

// Minimize sum_j ||A_j diag(g) - B_j|| over real diagonals g, where the
// diag(g) factor is embedded at the center of the block.  Two starts (origin
// and Frobenius least squares) with a minimal-norm tie-break.
DiagonalFit fit_diagonal(const std::vector<Mat>& left, const std::vector<Mat>& targets,
                         const Space& block, int center) {
  auto lift = [&](const RVec& g) {
    Mat d = Mat::Zero(2, 2);
    d(0, 0) = g(0);
    d(1, 1) = g(1);
    return embed(d, {center}, block);
  };
  auto objective = [&](const RVec& g) {
    const Mat gl = lift(g);
    double s = 0;
    for (size_t j = 0; j < targets.size(); ++j) s += op_norm(Mat(left[j] * gl - targets[j]));
    return s;
  };
  // Frobenius least-squares seed via 2x2 normal equations.
  RMat gram = RMat::Zero(2, 2);
  RVec rhs = RVec::Zero(2);
  for (int k = 0; k < 2; ++k) {
    RVec ek = RVec::Zero(2);
    ek(k) = 1;
    const Mat lk = lift(ek);
    for (size_t j = 0; j < targets.size(); ++j) {
      const Mat ak = left[j] * lk;
      for (int l = 0; l <= k; ++l) {
        RVec el = RVec::Zero(2);
        el(l) = 1;
        const Mat al = left[j] * lift(el);
        gram(k, l) += std::real((dagger(ak) * al).trace());
      }
      rhs(k) += std::real((dagger(ak) * targets[j]).trace());
    }
  }
  gram(0, 1) = gram(1, 0);
  RVec seed = RVec::Zero(2);
  if (std::abs(gram.determinant()) > 1e-14) seed = gram.ldlt().solve(rhs);

  DiagonalFit best;
  best.value = std::numeric_limits<double>::infinity();
  for (const RVec& start : {RVec(RVec::Zero(2)), seed}) {
    const RVec g = coordinate_descent(objective, start, 1e-9);
    const double v = objective(g);
    if (v < best.value - 1e-9 ||
        (std::abs(v - best.value) <= 1e-9 && g.norm() < best.g.norm())) {
      best.g = g;
      best.value = v;
    }
  }
  return best;
}

std::vector<Site> centered_cube(int range, int dims) {
  std::vector<Site> offsets;
  const int side = 2 * range + 1;
  long count = 1;
  for (int k = 0; k < dims; ++k) count *= side;
  for (long i = 0; i < count; ++i) {
    Site off(dims);
    long rem = i;
    for (int k = dims - 1; k >= 0; --k) {
      off[k] = static_cast<int>(rem % side) - range;
      rem /= side;
    }
    offsets.push_back(std::move(off));
  }
  return offsets;
}

} // namespace

SpinFitReport model_spin_dissipative(const std::vector<Mat>& jumps, int range, int dims) {
  require(jumps.size() == 3, "expected three jump operators per site class");
  require(range >= 0 && dims >= 1 && dims <= 3, "range or dimension out of range");
  const std::vector<Site> offsets = centered_cube(range, dims);
  const int nsites = static_cast<int>(offsets.size());
  const Space block(Volume({nsites}, false), 2);
  for (const Mat& j : jumps) {
    require(j.rows() == block.dim() && j.cols() == block.dim(),
            "jump dimension does not match the block");
  }
  const int center = (nsites - 1) / 2;

  SpinFitReport rep;
  const Mat s1c = embed(pauli(1), {center}, block);
  const Mat s2c = embed(pauli(2), {center}, block);
  const DiagonalFit fit12 = fit_diagonal({s1c, s2c}, {jumps[0], jumps[1]}, block, center);
  const DiagonalFit fit3 =
      fit_diagonal({Mat(Mat::Identity(block.dim(), block.dim()))}, {jumps[2]}, block, center);
  rep.delta12 = fit12.value;
  rep.delta3 = fit3.value;
  rep.alpha0 = fit12.g(0);
  rep.alpha1 = fit12.g(1);
  rep.beta0 = fit3.g(0);
  rep.beta1 = fit3.g(1);
  rep.s = rep.alpha0 * rep.alpha0 + rep.alpha1 * rep.alpha1;
  require(rep.s > 1e-12, "degenerate diagonal fit: no thermalizing component");
  require(std::min(std::abs(rep.alpha0), std::abs(rep.alpha1)) > 1e-6,
          "fitted diagonal vanishes on one level; reference state would be singular");
  rep.lambda = 4.0 * rep.s;
  const double db = rep.beta0 - rep.beta1;
  rep.mu = 2.0 * rep.s + db * db;

  // Reference single-site channel and its spectral data.
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = rep.alpha0;
  a(1, 1) = rep.alpha1;
  Mat b = Mat::Zero(2, 2);
  b(0, 0) = rep.beta0;
  b(1, 1) = rep.beta1;
  ModelSpec spec;
  spec.name = "spin_dissipative";
  spec.n = 2;
  spec.dims = dims;
  spec.rho = Mat::Zero(2, 2);
  spec.rho(0, 0) = rep.alpha1 * rep.alpha1 / rep.s;
  spec.rho(1, 1) = rep.alpha0 * rep.alpha0 / rep.s;
  spec.site_jumps = {pauli(1) * a, pauli(2) * a, b};
  Mat e_lam = Mat::Zero(2, 2);
  e_lam(0, 0) = rep.alpha0 / rep.alpha1;
  e_lam(1, 1) = -rep.alpha1 / rep.alpha0;
  const Mat e_up = std::sqrt(1.0 + rep.alpha1 * rep.alpha1 / (rep.alpha0 * rep.alpha0)) *
                   matrix_unit(2, 0, 1);
  const Mat e_dn = std::sqrt(1.0 + rep.alpha0 * rep.alpha0 / (rep.alpha1 * rep.alpha1)) *
                   matrix_unit(2, 1, 0);
  std::vector<Mat> basis{Mat::Identity(2, 2)};
  if (rep.lambda <= rep.mu) {
    basis.push_back(e_lam);
    basis.push_back(e_up);
    basis.push_back(e_dn);
  } else {
    basis.push_back(e_up);
    basis.push_back(e_dn);
    basis.push_back(e_lam);
  }
  spec.basis_override = basis;
  spec.range = range;

  InteractionBlock blk;
  blk.offsets = offsets;
  blk.jumps = jumps;
  blk.match_site_jumps = true;
  blk.anchor = center;
  spec.blocks.push_back(std::move(blk));

  const CertificateReport cert = covariant_certificate(spec);
  rep.eta = cert.eta;
  rep.M_exact = cert.M;
  const double amax = std::max(std::abs(rep.alpha0), std::abs(rep.alpha1));
  const double bmax = std::max(std::abs(rep.beta0), std::abs(rep.beta1));
  double cells = 1;
  for (int k = 0; k < dims; ++k) cells *= 2 * range + 1;
  const double e2 = rep.eta * rep.eta;
  rep.M_budget = 72.0 * e2 * (e2 + 1.0) * cells *
                 (2.0 * amax * rep.delta12 + 2.0 * bmax * rep.delta3 +
                  rep.delta12 * rep.delta12 + rep.delta3 * rep.delta3);
  rep.model = std::move(spec);
  return rep;
}

ClassicalRate constant_rate() {
  ClassicalRate r;
  r.offsets = {Site{0}};
  r.values = RVec::Ones(2);
  return r;
}

ClassicalRate glauber_rate(double beta) {
  ClassicalRate r;
  r.offsets = {Site{-1}, Site{0}, Site{1}};
  r.values = RVec::Zero(8);
  for (int idx = 0; idx < 8; ++idx) {
    const int bl = (idx >> 2) & 1, bc = (idx >> 1) & 1, br = idx & 1;
    const double sl = 1 - 2 * bl, sc = 1 - 2 * bc, sr = 1 - 2 * br;
    r.values(idx) = 0.5 * (1.0 - sc * std::tanh(beta * (sl + sr)));
  }
  return r;
}

namespace {

ModelSpec classical_model(const ClassicalRate& rate, int dims) {
  require(!rate.offsets.empty(), "rate needs a dependence window");
  for (const Site& o : rate.offsets) {
    require(static_cast<int>(o.size()) == dims, "offset dimension mismatch");
  }
  for (size_t i = 1; i < rate.offsets.size(); ++i) {
    require(rate.offsets[i - 1] < rate.offsets[i], "offsets must be sorted");
  }
  const long want = 1L << rate.offsets.size();
  require(rate.values.size() == want, "rate table size must be 2^window");
  require(rate.values.minCoeff() >= 0, "negative flip rate");
  int anchor = -1;
  int range = 0;
  for (size_t i = 0; i < rate.offsets.size(); ++i) {
    bool zero = true;
    int norm = 0;
    for (int c : rate.offsets[i]) {
      if (c != 0) zero = false;
      norm = std::max(norm, std::abs(c));
    }
    if (zero) anchor = static_cast<int>(i);
    range = std::max(range, norm);
  }
  require(anchor >= 0, "rate window must contain the flip site");

  const int k = static_cast<int>(rate.offsets.size());
  const Space block(Volume({k}, false), 2);
  Mat droot = Mat::Zero(block.dim(), block.dim());
  for (long i = 0; i < block.dim(); ++i) droot(i, i) = std::sqrt(rate.values(i));

  const double r8 = 2.0 * std::sqrt(2.0);
  ModelSpec spec;
  spec.name = "glauber";
  spec.n = 2;
  spec.dims = dims;
  spec.rho = 0.5 * Mat::Identity(2, 2);
  spec.site_jumps = {pauli(1) / r8, pauli(2) / r8};
  spec.basis_override = xyz_basis_override();
  spec.range = std::max(range, 1);
  InteractionBlock blk;
  blk.offsets = rate.offsets;
  blk.jumps = {Mat(embed(pauli(1), {anchor}, block) * droot * 0.5),
               Mat(embed(pauli(2), {anchor}, block) * droot * 0.5)};
  blk.match_site_jumps = true;
  blk.anchor = anchor;
  spec.blocks.push_back(std::move(blk));
  return spec;
}

} // namespace

ConjugationReport model_classical_conjugation(const ClassicalRate& rate, const Volume& vol) {
  ConjugationReport rep;
  rep.model = classical_model(rate, vol.dim());
  const FiniteVolumeGenerator g = assemble(rep.model, vol);
  const Mat lq = heisenberg_generator(g);
  const Space sp{g.space};
  const int m = vol.num_sites();
  const long d = sp.dim();

  // Dense classical flip generator on spin configurations; bit value 0 at a
  // site means spin +1, positions follow the volume's stride order.
  auto bit_of = [&](long idx, int site) { return (idx / sp.stride(site)) % 2; };
  RMat lcl = RMat::Zero(d, d);
  for (long idx = 0; idx < d; ++idx) {
    for (int x = 0; x < m; ++x) {
      bool ok = true;
      long rate_idx = 0;
      for (const Site& off : rate.offsets) {
        const int y = vol.translate(x, off);
        if (y < 0) {
          ok = false;
          break;
        }
        rate_idx = rate_idx * 2 + bit_of(idx, y);
      }
      if (!ok) continue;
      const double c = rate.values(rate_idx);
      const long flipped = idx + sp.stride(x) * (1 - 2 * bit_of(idx, x));
      lcl(idx, flipped) += c;
      lcl(idx, idx) -= c;
    }
  }

  double worst = 0;
  for (long tau = 0; tau < d; ++tau) {
    Mat f = Mat::Zero(d, d);
    f(tau, tau) = 1.0;
    const Mat qside = unvec(Vec(lq * vec_stack(f)), d, d);
    Mat cside = Mat::Zero(d, d);
    for (long s = 0; s < d; ++s) cside(s, s) = lcl(s, tau);
    worst = std::max(worst, op_norm(Mat(qside - cside)));
  }
  rep.residual = worst;
  return rep;
}

std::vector<std::string> catalog_names() {
  return {"xyz", "spin_dissipative", "glauber", "fermion_hopping"};
}

std::string catalog_summary(const std::string& name) {
  if (name == "xyz") {
    return "spin chain with per-site thermalization and exchange couplings";
  }
  if (name == "spin_dissipative") {
    return "dissipative spin model fitted by a diagonal single-site channel";
  }
  if (name == "glauber") {
    return "diagonal embedding of a classical spin-flip dynamics";
  }
  if (name == "fermion_hopping") {
    return "free-fermion dissipation with nearest-neighbour hopping";
  }
  throw SchemaError("unknown catalog model: " + name);
}

ModelConfig catalog_config(const std::string& name) {
  ModelConfig cfg;
  cfg.name = name;
  cfg.dims = 1;
  if (name == "xyz") {
    cfg.statistics = "qudit";
    cfg.volume = Volume({3}, false);
    cfg.parameters = {{"J1", 0.001}, {"J2", 0.001}, {"J3", 0.001}};
    cfg.qudit = model_xyz(0.001, 0.001, 0.001, 1);
  } else if (name == "spin_dissipative") {
    cfg.statistics = "qudit";
    cfg.volume = Volume({3}, false);
    cfg.parameters = {{"a0", 0.6}, {"a1", 0.8}, {"b0", 0.3}, {"b1", 0.1}};
    Mat a = Mat::Zero(2, 2);
    a(0, 0) = 0.6;
    a(1, 1) = 0.8;
    Mat b = Mat::Zero(2, 2);
    b(0, 0) = 0.3;
    b(1, 1) = 0.1;
    cfg.qudit =
        model_spin_dissipative({Mat(pauli(1) * a), Mat(pauli(2) * a), b}, 0, 1).model;
  } else if (name == "glauber") {
    cfg.statistics = "qudit";
    cfg.volume = Volume({4}, true);
    cfg.parameters = {{"beta", 0.2}};
    cfg.qudit = classical_model(glauber_rate(0.2), 1);
  } else if (name == "fermion_hopping") {
    cfg.statistics = "fermion";
    cfg.volume = Volume({4}, false);
    cfg.h_field = 0.0;
    cfg.hopping = 0.05;
    cfg.parameters = {{"J", 0.05}, {"h", 0.0}};
  } else {
    throw SchemaError("unknown catalog model: " + name);
  }
  return cfg;
}

namespace {

Json mat_to_json(const Mat& m) {
  Json rows = Json::array();
  for (long i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (long j = 0; j < m.cols(); ++j) {
      row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat mat_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw SchemaError("matrix must be a nonempty array of rows");
  const long rows = static_cast<long>(j.size());
  const long cols = static_cast<long>(j.at(0).size());
  Mat m(rows, cols);
  for (long i = 0; i < rows; ++i) {
    const Json& row = j.at(i);
    if (!row.is_array() || static_cast<long>(row.size()) != cols) {
      throw SchemaError("ragged matrix rows");
    }
    for (long c = 0; c < cols; ++c) {
      const Json& cell = row.at(c);
      if (!cell.is_array() || cell.size() != 2) {
        throw SchemaError("matrix entries must be [re, im] pairs");
      }
      m(i, c) = cplx(cell.at(0).get<double>(), cell.at(1).get<double>());
    }
  }
  return m;
}

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.contains(key)) throw SchemaError(std::string("missing field: ") + key);
  try {
    return j.at(key).get<T>();
  } catch (const std::exception&) {
    throw SchemaError(std::string("bad value for field: ") + key);
  }
}

} // namespace

Json config_to_json(const ModelConfig& config) {
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["name"] = config.name;
  j["statistics"] = config.statistics;
  j["dimension"] = config.dims;
  Json vol;
  vol["shape"] = config.volume.shape;
  vol["boundary"] = config.volume.periodic ? "periodic" : "open";
  j["volume"] = vol;
  Json params = Json::object();
  for (const auto& [k, v] : config.parameters) params[k] = v;
  j["parameters"] = params;
  if (config.statistics == "fermion") {
    j["h_field"] = config.h_field;
    j["hopping"] = config.hopping;
    return j;
  }
  const ModelSpec& spec = *config.qudit;
  j["site_dim"] = spec.n;
  j["range"] = spec.range;
  j["covariant"] = true;
  Json ss;
  ss["rho"] = mat_to_json(spec.rho);
  Json jumps = Json::array();
  for (const Mat& l : spec.site_jumps) jumps.push_back(mat_to_json(l));
  ss["jumps"] = jumps;
  if (spec.basis_override) {
    Json basis = Json::array();
    for (const Mat& e : *spec.basis_override) basis.push_back(mat_to_json(e));
    ss["eigenbasis"] = basis;
  }
  j["single_site"] = ss;
  Json inter = Json::array();
  for (const InteractionBlock& b : spec.blocks) {
    Json jb;
    Json offs = Json::array();
    for (const Site& o : b.offsets) offs.push_back(o);
    jb["offsets"] = offs;
    if (b.k.size() > 0) jb["hamiltonian"] = mat_to_json(b.k);
    Json bj = Json::array();
    for (const Mat& l : b.jumps) bj.push_back(mat_to_json(l));
    jb["jumps"] = bj;
    jb["match_site_jumps"] = b.match_site_jumps;
    jb["anchor"] = b.anchor;
    inter.push_back(std::move(jb));
  }
  j["interactions"] = inter;
  return j;
}

ModelConfig config_from_json(const Json& j) {
  ModelConfig cfg;
  cfg.name = field<std::string>(j, "name");
  cfg.statistics = field<std::string>(j, "statistics");
  if (cfg.statistics != "qudit" && cfg.statistics != "fermion") {
    throw SchemaError("statistics must be qudit or fermion");
  }
  cfg.dims = field<int>(j, "dimension");
  if (!j.contains("volume")) throw SchemaError("missing field: volume");
  const Json& vol = j.at("volume");
  const auto shape = field<std::vector<int>>(vol, "shape");
  const std::string boundary = field<std::string>(vol, "boundary");
  if (boundary != "open" && boundary != "periodic") {
    throw SchemaError("boundary must be open or periodic");
  }
  try {
    cfg.volume = Volume(shape, boundary == "periodic");
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
  if (j.contains("parameters")) {
    for (auto it = j.at("parameters").begin(); it != j.at("parameters").end(); ++it) {
      cfg.parameters[it.key()] = it.value().get<double>();
    }
  }
  if (cfg.statistics == "fermion") {
    cfg.h_field = field<double>(j, "h_field");
    cfg.hopping = field<double>(j, "hopping");
    return cfg;
  }

  ModelSpec spec;
  spec.name = cfg.name;
  spec.n = field<int>(j, "site_dim");
  spec.dims = cfg.dims;
  spec.range = field<int>(j, "range");
  if (!j.contains("single_site")) throw SchemaError("missing field: single_site");
  const Json& ss = j.at("single_site");
  if (!ss.contains("rho")) throw SchemaError("missing field: single_site.rho");
  spec.rho = mat_from_json(ss.at("rho"));
  if (!ss.contains("jumps")) throw SchemaError("missing field: single_site.jumps");
  for (const Json& l : ss.at("jumps")) spec.site_jumps.push_back(mat_from_json(l));
  if (ss.contains("eigenbasis")) {
    std::vector<Mat> basis;
    for (const Json& e : ss.at("eigenbasis")) basis.push_back(mat_from_json(e));
    spec.basis_override = std::move(basis);
  }
  if (j.contains("interactions")) {
    for (const Json& jb : j.at("interactions")) {
      InteractionBlock b;
      if (!jb.contains("offsets")) throw SchemaError("interaction needs offsets");
      for (const Json& o : jb.at("offsets")) b.offsets.push_back(o.get<Site>());
      for (const Site& o : b.offsets) {
        if (static_cast<int>(o.size()) != cfg.dims) {
          throw SchemaError("offset dimension mismatch");
        }
      }
      if (jb.contains("hamiltonian")) b.k = mat_from_json(jb.at("hamiltonian"));
      if (jb.contains("jumps")) {
        for (const Json& l : jb.at("jumps")) b.jumps.push_back(mat_from_json(l));
      }
      b.match_site_jumps = jb.value("match_site_jumps", false);
      b.anchor = jb.value("anchor", 0);
      if (b.anchor < 0 || b.anchor >= static_cast<int>(b.offsets.size())) {
        throw SchemaError("anchor outside the offset list");
      }
      spec.blocks.push_back(std::move(b));
    }
  }
  cfg.qudit = std::move(spec);
  return cfg;
}

namespace {

CarRep fermion_rep(const ModelConfig& config) {
  require(config.volume.num_sites() <= 10, "fermion volume too large for a dense run");
  return build_car(config.volume, config.h_field);
}

} // namespace

Json certify_config(const ModelConfig& config) {
  if (config.statistics == "fermion") {
    const CarRep rep = fermion_rep(config);
    return fermion_certificate_json(fermion_certify(fermion_hopping(config.hopping, config.h_field, rep), rep));
  }
  return certificate_json(certify(*config.qudit, config.volume));
}

Json spectrum_config(const ModelConfig& config) {
  if (config.statistics == "fermion") {
    const CarRep rep = build_car(Volume({1}, false), config.h_field);
    const Mat l0 = fermi_ou_generator(rep);
    Eigen::ComplexEigenSolver<Mat> es(-l0);
    std::vector<double> ev;
    for (long i = 0; i < es.eigenvalues().size(); ++i) {
      ev.push_back(es.eigenvalues()(i).real());
    }
    std::sort(ev.begin(), ev.end());
    Json j;
    j["schema_version"] = kReportSchemaVersion;
    j["kind"] = "spectrum";
    j["eigenvalues"] = ev;
    j["gap"] = fermi_gap(config.h_field);
    return j;
  }
  const ModelSpec& spec = *config.qudit;
  const SingleSiteGenerator site =
      make_single_site(spec.n, spec.rho, spec.site_jumps, spec.basis_override);
  return spectral_json(site.spec);
}

std::vector<CheckResult> verify_config(const ModelConfig& config, unsigned seed,
                                       double tol_scale) {
  std::vector<CheckResult> checks;
  const std::vector<double> choi_times{0.1, 1.0};
  if (config.statistics == "fermion") {
    const CarRep rep = fermion_rep(config);
    const FermionModelSpec spec = fermion_hopping(config.hopping, config.h_field, rep);
    checks = fermion_checks(spec, rep, seed, tol_scale);
    const FermionVolumeGenerator g = fermion_assemble(spec, rep);
    const Mat sch = fermion_schrodinger(g);
    CheckResult choi;
    choi.name = "complete positivity";
    for (double t : choi_times) {
      Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(choi_matrix(expm(Mat(sch * t)))));
      choi.add(t, "negative part of the process matrix", -es.eigenvalues().minCoeff(), 0.0);
    }
    choi.finish(1e-8 * tol_scale);
    checks.push_back(std::move(choi));
    return checks;
  }

  const ModelSpec& spec = *config.qudit;
  const FiniteVolumeGenerator g = assemble(spec, config.volume);
  const CertificateReport cert = certify_instance(g);
  checks.push_back(check_intertwining(g, 1e-9 * tol_scale));
  checks.push_back(check_choi(g, choi_times, 1e-8 * tol_scale));
  if (cert.pass) {
    checks.push_back(check_resolvent(g, 1.0, 10, seed, 1e-9 * tol_scale));
    checks.push_back(check_contraction(g, 0.0, 2.0, 6, 6, seed + 1, 1e-8 * tol_scale));
    checks.push_back(check_convergence(g, 0.0, 3.0, 8, 6, seed + 2, 1e-6 * tol_scale));
    checks.push_back(check_propagation(g, 0.5, 0.0, 1.5, 4, seed + 3, 1e-8 * tol_scale));
    int maxdist = 0;
    for (int s = 0; s < config.volume.num_sites(); ++s) {
      maxdist = std::max(maxdist, config.volume.distance(0, s));
    }
    std::vector<int> seps;
    for (int s = 1; s <= std::min(5, maxdist); ++s) seps.push_back(s);
    if (!seps.empty() && config.volume.num_sites() <= 6) {
      checks.push_back(check_correlation_decay(g, seps, seed + 4, 1e-9 * tol_scale));
    }
  }
  return checks;
}

} // namespace qlat
