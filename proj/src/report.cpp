#include "qlat/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qlat {

namespace {

Json finite_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

} // namespace

Json certificate_json(const CertificateReport& cert) {
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["kind"] = "certificate";
  j["model"] = cert.model;
  j["volume_sites"] = cert.volume_sites;
  j["periodic"] = cert.periodic;
  j["excluded_terms"] = cert.excluded_terms;
  j["N"] = cert.N;
  j["eta"] = cert.eta;
  j["lambda1"] = cert.lambda1;
  j["C0"] = cert.C0;
  j["M"] = cert.M;
  j["margin"] = cert.margin;
  j["pass"] = cert.pass;
  j["xi"] = finite_or_null(cert.xi);
  j["M_xi"] = finite_or_null(cert.M_xi);
  j["Omega_xi"] = finite_or_null(cert.Omega_xi);
  j["zeta"] = finite_or_null(cert.zeta);
  j["C_corr"] = finite_or_null(cert.C_corr);
  j["C"] = finite_or_null(cert.C);
  return j;
}

Json fermion_certificate_json(const FermionCertificateReport& cert) {
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["kind"] = "fermion_certificate";
  j["model"] = cert.model;
  j["volume_sites"] = cert.volume_sites;
  j["periodic"] = cert.periodic;
  j["h"] = cert.h;
  j["gap"] = cert.gap;
  j["C0"] = cert.C0;
  j["M"] = cert.M;
  j["margin"] = cert.margin;
  j["pass"] = cert.pass;
  return j;
}

Json spectral_json(const SpectralData& sd) {
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["kind"] = "spectrum";
  j["eigenvalues"] = std::vector<double>(sd.lambda.data(), sd.lambda.data() + sd.lambda.size());
  j["eta"] = sd.eta;
  std::vector<double> norms;
  for (const Mat& e : sd.basis) norms.push_back(op_norm(e));
  j["basis_norms"] = norms;
  return j;
}

Json check_json(const CheckResult& check) {
  Json j;
  j["name"] = check.name;
  j["pass"] = check.pass;
  j["worst_slack"] = finite_or_null(check.worst_slack);
  j["samples"] = Json::array();
  for (const CheckSample& s : check.samples) {
    Json row;
    row["t"] = s.t;
    row["quantity"] = s.quantity;
    row["value"] = finite_or_null(s.value);
    row["bound"] = finite_or_null(s.bound);
    j["samples"].push_back(row);
  }
  return j;
}

Json run_report_json(const Json& certificate, const std::vector<CheckResult>& checks) {
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["kind"] = "run_report";
  j["certificate"] = certificate;
  j["checks"] = Json::array();
  bool all = true;
  for (const CheckResult& c : checks) {
    j["checks"].push_back(check_json(c));
    all = all && c.pass;
  }
  j["all_pass"] = all;
  return j;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

void csv_number(std::ostringstream& os, double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  os << buf;
}

} // namespace

std::string checks_csv(const std::vector<CheckResult>& checks) {
  std::ostringstream os;
  os << "t,quantity,value,bound\n";
  for (const CheckResult& c : checks) {
    for (const CheckSample& s : c.samples) {
      csv_number(os, s.t);
      os << ',' << csv_escape(c.name + ": " + s.quantity) << ',';
      csv_number(os, s.value);
      os << ',';
      csv_number(os, s.bound);
      os << '\n';
    }
  }
  return os.str();
}

std::string certificate_csv(const Json& certificate) {
  std::ostringstream os;
  os << "t,quantity,value,bound\n";
  for (auto it = certificate.begin(); it != certificate.end(); ++it) {
    if (!it.value().is_number()) continue;
    os << "0," << csv_escape(it.key()) << ',';
    csv_number(os, it.value().get<double>());
    os << ",0\n";
  }
  return os.str();
}

ToleranceProfile tolerance_profile(const std::string& name) {
  if (name == "default") return {"default", 1.0};
  if (name == "strict") return {"strict", 0.1};
  throw std::invalid_argument("unknown tolerance profile: " + name);
}

void write_text_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open for writing: " + tmp);
    os << text;
    if (!os.flush()) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw std::runtime_error("atomic rename failed: " + path);
  }
}

} // namespace qlat
