#pragma once
// Numeric certificates. Every norm inequality this library tests is reported
// as a NormCertificate: left side as computed, right side as computed, their
// ratio, and enough of the parameter tuple and witness to rerun the exact
// configuration. Certificates never carry a verdict; thresholds are applied
// by the caller (tests, CLI) so that the evidence and the judgement stay
// separate.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dsphere {

struct ResourceCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parameter tuple. Sentinels mark fields that do not apply: d = 0,
// lambda2 = -1, cutoff_n = -1, grid = -1, seed = UINT64_MAX, NaN for reals.
struct CertParams {
  int d = 0;
  std::int64_t lambda2 = -1;
  double p = std::numeric_limits<double>::quiet_NaN();
  double p2 = std::numeric_limits<double>::quiet_NaN();
  std::int64_t cutoff_n = -1;
  double eta = std::numeric_limits<double>::quiet_NaN();
  double epsilon = std::numeric_limits<double>::quiet_NaN();
  double threshold_c = std::numeric_limits<double>::quiet_NaN();
  std::int64_t grid = -1;
  std::uint64_t seed = std::numeric_limits<std::uint64_t>::max();
};

struct NormCertificate {
  std::string name;
  CertParams params;
  double left = 0.0;
  double right = 0.0;
  double ratio = 0.0;  // left / right, 0 if right == 0
  std::string witness;
  std::vector<std::pair<std::string, double>> extra;  // ordered, deterministic

  void set_sides(double l, double r) {
    left = l;
    right = r;
    ratio = (r != 0.0) ? l / r : 0.0;
  }
};

// JSON object (single certificate) with unset parameters omitted.
std::string to_json_string(const NormCertificate& c);

// CSV: one fixed-width schema for all certificates, unset fields empty.
std::string csv_header();
std::string to_csv_row(const NormCertificate& c);

// Round-trippable decimal rendering used by both serializers.
std::string format_double(double x);

}  // namespace dsphere
