#ifndef QLAT_REPORT_HPP
#define QLAT_REPORT_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "qlat/dynamics.hpp"
#include "qlat/fermion.hpp"
#include "qlat/locality.hpp"
#include "qlat/single_site.hpp"

namespace qlat {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;

Json certificate_json(const CertificateReport& cert);
Json fermion_certificate_json(const FermionCertificateReport& cert);
Json spectral_json(const SpectralData& sd);
Json check_json(const CheckResult& check);
Json run_report_json(const Json& certificate, const std::vector<CheckResult>& checks);

// CSV with header t,quantity,value,bound; one row per recorded sample.
std::string checks_csv(const std::vector<CheckResult>& checks);
std::string certificate_csv(const Json& certificate);

struct ToleranceProfile {
  std::string name;
  double scale = 1.0; // multiplies every check tolerance
};

// Known profiles: "default" (scale 1) and "strict" (scale 0.1).
ToleranceProfile tolerance_profile(const std::string& name);

// Write via a temporary file in the same directory, then rename.
void write_text_atomic(const std::string& path, const std::string& text);

} // namespace qlat

#endif
