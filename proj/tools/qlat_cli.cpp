#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qlat/catalog.hpp"
#include "qlat/dynamics.hpp"
#include "qlat/locality.hpp"
#include "qlat/report.hpp"
#include "qlat/wasserstein.hpp"

namespace {

using qlat::Json;

struct Options {
  std::string model;
  std::string config_path;
  std::string volume;
  std::string times = "0:2:6";
  unsigned seed = 1;
  std::string profile = "default";
  std::string out;
  std::string format = "json";
  int jobs = 1;
};

std::vector<int> parse_shape(const std::string& text) {
  std::vector<int> shape;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    try {
      shape.push_back(std::stoi(part));
    } catch (const std::exception&) {
      throw qlat::SchemaError("bad --volume value: " + text);
    }
  }
  if (shape.empty()) throw qlat::SchemaError("bad --volume value: " + text);
  return shape;
}

struct TimeGrid {
  double t0 = 0, t1 = 2;
  int n = 6;
};

TimeGrid parse_times(const std::string& text) {
  TimeGrid g;
  std::stringstream ss(text);
  std::string a, b, c;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c, ':')) {
    throw qlat::SchemaError("bad --times value, expected t0:t1:n");
  }
  try {
    g.t0 = std::stod(a);
    g.t1 = std::stod(b);
    g.n = std::stoi(c);
  } catch (const std::exception&) {
    throw qlat::SchemaError("bad --times value, expected t0:t1:n");
  }
  if (g.n < 1 || g.t1 < g.t0) throw qlat::SchemaError("bad --times range");
  return g;
}

qlat::ModelConfig load_config(const Options& opt) {
  qlat::ModelConfig cfg;
  if (!opt.config_path.empty()) {
    std::ifstream is(opt.config_path);
    if (!is) throw qlat::SchemaError("cannot read config file: " + opt.config_path);
    Json j;
    try {
      is >> j;
    } catch (const std::exception& e) {
      throw qlat::SchemaError(std::string("config is not valid JSON: ") + e.what());
    }
    cfg = qlat::config_from_json(j);
  } else if (!opt.model.empty()) {
    cfg = qlat::catalog_config(opt.model);
  } else {
    throw qlat::SchemaError("need --model NAME or --config FILE");
  }
  if (!opt.volume.empty()) {
    const std::vector<int> shape = parse_shape(opt.volume);
    try {
      cfg.volume = qlat::Volume(shape, cfg.volume.periodic);
    } catch (const std::invalid_argument& e) {
      throw qlat::SchemaError(e.what());
    }
  }
  return cfg;
}

void emit(const Options& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
  } else {
    qlat::write_text_atomic(opt.out, text);
  }
}

void emit_report(const Options& opt, const Json& j, const std::string& csv) {
  if (opt.format == "csv") {
    emit(opt, csv);
  } else {
    emit(opt, j.dump(2) + "\n");
  }
}

int run_catalog(const Options& opt) {
  if (opt.format == "json") {
    Json j = Json::array();
    for (const std::string& name : qlat::catalog_names()) {
      Json row;
      row["name"] = name;
      row["statistics"] = qlat::catalog_config(name).statistics;
      row["summary"] = qlat::catalog_summary(name);
      j.push_back(std::move(row));
    }
    emit(opt, j.dump(2) + "\n");
  } else {
    std::ostringstream os;
    for (const std::string& name : qlat::catalog_names()) {
      os << name << ": " << qlat::catalog_summary(name) << "\n";
    }
    emit(opt, os.str());
  }
  return 0;
}

int run_certify(const Options& opt) {
  const qlat::ModelConfig cfg = load_config(opt);
  const Json cert = qlat::certify_config(cfg);
  emit_report(opt, cert, qlat::certificate_csv(cert));
  return 0;
}

int run_spectrum(const Options& opt) {
  const qlat::ModelConfig cfg = load_config(opt);
  const Json j = qlat::spectrum_config(cfg);
  emit_report(opt, j, qlat::certificate_csv(j));
  return 0;
}

int run_verify(const Options& opt) {
  const qlat::ModelConfig cfg = load_config(opt);
  const double scale = qlat::tolerance_profile(opt.profile).scale;
  const std::vector<qlat::CheckResult> checks = qlat::verify_config(cfg, opt.seed, scale);
  const Json report = qlat::run_report_json(qlat::certify_config(cfg), checks);
  emit_report(opt, report, qlat::checks_csv(checks));
  return report.at("all_pass").get<bool>() ? 0 : 1;
}

int run_evolve(const Options& opt) {
  const qlat::ModelConfig cfg = load_config(opt);
  const TimeGrid grid = parse_times(opt.times);
  std::vector<qlat::CheckResult> series;
  if (cfg.statistics == "fermion") {
    const qlat::CarRep rep = qlat::build_car(cfg.volume, cfg.h_field);
    const qlat::FermionVolumeGenerator g =
        qlat::fermion_assemble(qlat::fermion_hopping(cfg.hopping, cfg.h_field, rep), rep);
    series.push_back(qlat::fermion_contraction(g, grid.t0, grid.t1, grid.n, 3, opt.seed, 1e-8));
    const auto cert = qlat::fermion_certify(g.spec, rep);
    if (cert.pass) {
      series.push_back(
          qlat::fermion_convergence(g, grid.t0, grid.t1, grid.n, 3, opt.seed + 1, 1e-6));
    }
  } else {
    const qlat::FiniteVolumeGenerator g = qlat::assemble(*cfg.qudit, cfg.volume);
    const qlat::CertificateReport cert = qlat::certify_instance(g);
    series.push_back(
        qlat::check_contraction(g, grid.t0, grid.t1, grid.n, 3, opt.seed, 1e-8));
    if (cert.pass) {
      series.push_back(
          qlat::check_convergence(g, grid.t0, grid.t1, grid.n, 3, opt.seed + 1, 1e-6));
    }
  }
  emit_report(opt, qlat::run_report_json(qlat::certify_config(cfg), series),
              qlat::checks_csv(series));
  return 0;
}

int run_correlations(const Options& opt) {
  const qlat::ModelConfig cfg = load_config(opt);
  if (cfg.statistics == "fermion") {
    throw std::invalid_argument("correlation reports cover qudit models only");
  }
  const qlat::FiniteVolumeGenerator g = qlat::assemble(*cfg.qudit, cfg.volume);
  const qlat::CertificateReport cert = qlat::certify_instance(g);
  std::vector<qlat::CheckResult> checks;
  if (cert.pass) {
    int maxdist = 0;
    for (int s = 0; s < cfg.volume.num_sites(); ++s) {
      maxdist = std::max(maxdist, cfg.volume.distance(0, s));
    }
    std::vector<int> seps;
    for (int s = 1; s <= std::min(5, maxdist); ++s) seps.push_back(s);
    checks.push_back(qlat::check_correlation_decay(g, seps, opt.seed, 1e-9));
  }
  emit_report(opt, qlat::run_report_json(qlat::certificate_json(cert), checks),
              qlat::checks_csv(checks));
  return 0;
}

int run_wasserstein(const Options& opt) {
  const qlat::ModelConfig cfg = load_config(opt);
  if (cfg.statistics == "fermion") {
    throw std::invalid_argument("transport reports cover qudit models only");
  }
  const TimeGrid grid = parse_times(opt.times);
  const qlat::FiniteVolumeGenerator g = qlat::assemble(*cfg.qudit, cfg.volume);
  const qlat::CertificateReport cert = qlat::certify_instance(g);
  std::vector<qlat::CheckResult> checks;
  Json extra;
  if (cert.pass) {
    qlat::Mat mu = qlat::Mat::Zero(g.dim(), g.dim());
    mu(0, 0) = 1.0;
    checks.push_back(
        qlat::check_w_decay(g, cert, mu, grid.t0, grid.t1, grid.n, opt.seed, 1e-9));
  }
  // Small bracket demo on a single site of the model.
  const qlat::Space site(qlat::Volume({1}, false), cfg.qudit->n);
  qlat::Mat mu0 = qlat::Mat::Zero(cfg.qudit->n, cfg.qudit->n);
  mu0(0, 0) = 1.0;
  qlat::Mat nu0 = qlat::Mat::Zero(cfg.qudit->n, cfg.qudit->n);
  nu0(cfg.qudit->n - 1, cfg.qudit->n - 1) = 1.0;
  const qlat::WassersteinBracket wb = qlat::w1_bracket(mu0, nu0, site);
  extra["single_site_bracket"] = Json{{"lower", wb.lower}, {"upper", wb.upper}};
  Json report = qlat::run_report_json(qlat::certificate_json(cert), checks);
  report["bracket_demo"] = extra;
  emit_report(opt, report, qlat::checks_csv(checks));
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"ergodicity certificates and dynamics checks for dissipative lattice models"};
  app.fallthrough();
  app.require_subcommand(1);

  Options opt;
  app.add_option("--model", opt.model, "built-in model name (see the catalog command)");
  app.add_option("--config", opt.config_path, "model configuration JSON file");
  app.add_option("--volume", opt.volume, "volume shape override, e.g. 4 or 3x3");
  app.add_option("--times", opt.times, "time grid t0:t1:n");
  app.add_option("--seed", opt.seed, "seed for randomized checks");
  app.add_option("--tolerance-profile", opt.profile, "tolerance profile: default or strict");
  app.add_option("--out", opt.out, "output file (default: stdout)");
  app.add_option("--format", opt.format, "output format: json or csv");
  app.add_option("--jobs", opt.jobs, "worker cap for linear algebra kernels");

  auto* c_catalog = app.add_subcommand("catalog", "list built-in models");
  auto* c_certify = app.add_subcommand("certify", "compute the ergodicity certificate");
  auto* c_spectrum = app.add_subcommand("spectrum", "single-site spectral data");
  auto* c_evolve = app.add_subcommand("evolve", "time series of decay quantities");
  auto* c_verify = app.add_subcommand("verify", "run the full check battery");
  auto* c_corr = app.add_subcommand("correlations", "stationary correlation decay");
  auto* c_wass = app.add_subcommand("wasserstein", "transport decay and brackets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (opt.format != "json" && opt.format != "csv") {
      throw qlat::SchemaError("unknown format: " + opt.format);
    }
    if (opt.jobs < 1) throw qlat::SchemaError("--jobs must be at least 1");
    qlat::tolerance_profile(opt.profile); // validate early

    if (c_catalog->parsed()) return run_catalog(opt);
    if (c_certify->parsed()) return run_certify(opt);
    if (c_spectrum->parsed()) return run_spectrum(opt);
    if (c_evolve->parsed()) return run_evolve(opt);
    if (c_verify->parsed()) return run_verify(opt);
    if (c_corr->parsed()) return run_correlations(opt);
    if (c_wass->parsed()) return run_wasserstein(opt);
    return 2;
  } catch (const qlat::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const qlat::ErgodicityError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  }
}
