#include "dsphere/certificate.hpp"

#include <cstdio>

#include <json.hpp>

namespace dsphere {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

void put_params(nlohmann::ordered_json& j, const CertParams& p) {
  if (p.d != 0) j["d"] = p.d;
  if (p.lambda2 >= 0) j["lambda2"] = p.lambda2;
  if (!std::isnan(p.p)) j["p"] = p.p;
  if (!std::isnan(p.p2)) j["p2"] = p.p2;
  if (p.cutoff_n >= 0) j["cutoff_n"] = p.cutoff_n;
  if (!std::isnan(p.eta)) j["eta"] = p.eta;
  if (!std::isnan(p.epsilon)) j["epsilon"] = p.epsilon;
  if (!std::isnan(p.threshold_c)) j["threshold_c"] = p.threshold_c;
  if (p.grid >= 0) j["grid"] = p.grid;
  if (p.seed != std::numeric_limits<std::uint64_t>::max()) j["seed"] = p.seed;
}

std::string csv_escape(const std::string& s) {
  bool need = s.find_first_of(",\"\n") != std::string::npos;
  if (!need) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string to_json_string(const NormCertificate& c) {
  nlohmann::ordered_json j;
  j["name"] = c.name;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  put_params(params, c.params);
  j["params"] = params;
  j["left"] = c.left;
  j["right"] = c.right;
  j["ratio"] = c.ratio;
  j["witness"] = c.witness;
  if (!c.extra.empty()) {
    nlohmann::ordered_json e = nlohmann::ordered_json::object();
    for (const auto& [k, v] : c.extra) e[k] = v;
    j["extra"] = e;
  }
  return j.dump();
}

std::string csv_header() {
  return "name,d,lambda2,p,p2,cutoff_n,eta,epsilon,threshold_c,grid,seed,"
         "left,right,ratio,witness,extra";
}

std::string to_csv_row(const NormCertificate& c) {
  const CertParams& p = c.params;
  std::string row = csv_escape(c.name);
  auto cell = [&](const std::string& s) { row += ',', row += s; };
  cell(p.d != 0 ? std::to_string(p.d) : "");
  cell(p.lambda2 >= 0 ? std::to_string(p.lambda2) : "");
  cell(!std::isnan(p.p) ? format_double(p.p) : "");
  cell(!std::isnan(p.p2) ? format_double(p.p2) : "");
  cell(p.cutoff_n >= 0 ? std::to_string(p.cutoff_n) : "");
  cell(!std::isnan(p.eta) ? format_double(p.eta) : "");
  cell(!std::isnan(p.epsilon) ? format_double(p.epsilon) : "");
  cell(!std::isnan(p.threshold_c) ? format_double(p.threshold_c) : "");
  cell(p.grid >= 0 ? std::to_string(p.grid) : "");
  cell(p.seed != std::numeric_limits<std::uint64_t>::max()
           ? std::to_string(p.seed) : "");
  cell(format_double(c.left));
  cell(format_double(c.right));
  cell(format_double(c.ratio));
  cell(csv_escape(c.witness));
  std::string extra;
  for (const auto& [k, v] : c.extra) {
    if (!extra.empty()) extra += ';';
    extra += k + "=" + format_double(v);
  }
  cell(csv_escape(extra));
  return row;
}

}  // namespace dsphere
