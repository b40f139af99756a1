#pragma once
// Counterexample machinery around f = 1_{S_lambda}: the self-average
// A_lambda 1_{S_lambda}, its superlevel sets
//   G_lambda = { x : A_lambda 1_{S_lambda}(x) > c / lambda },
// the axis witnesses showing |G_lambda| >= ~lambda, and the necessity ratio
// probing the improving exponent from below.

#include <cstdint>
#include <string>
#include <vector>

#include "dsphere/certificate.hpp"
#include "dsphere/gridfn.hpp"

namespace dsphere {

struct LevelSetReport {
  int d = 0;
  std::int64_t lambda2 = -1;
  double threshold_c = 0.1;
  std::int64_t g_size = 0;
  // axis points (x1, 0, ..., 0), x1 in 4Z, 0 < x1 < lambda/2, found in G
  std::vector<std::vector<std::int64_t>> witnesses;
  double upper_envelope = 0.0;  // lambda^{(d+3)/2 + epsilon}
  double lower_envelope = 0.0;  // lambda
  std::int64_t verified_samples = 0;
};

// A_lambda 1_{S_lambda} on the centered box of side 4 lambda + 1 (the full
// support), by FFT. Throws ResourceCapError when the grid exceeds the cell
// budget; lower lambda in that case.
GridFunction sphere_self_average(int d, std::int64_t lambda2);

// Enumerates G_lambda, checks each axis witness directly, re-verifies up to
// 100 sampled members against exact intersection counts (throws
// std::runtime_error on any disagreement beyond 1e-6).
LevelSetReport level_set(int d, std::int64_t lambda2, double c = 0.1,
                         double epsilon = 0.25);

// Lower-bound test for || A_lambda f ||_{p'} <= lambda^{d(1-2/p)} || f ||_p
// with f = 1_{S_lambda}, g = 1_{G_lambda}: left is <A_lambda f, g> / |G|^{1/p},
// right the claimed majorant. Raw numbers only, no asymptotic judgement.
NormCertificate necessity_ratio(int d, std::int64_t lambda2, double p,
                                double c = 0.1);

std::string to_json_string(const LevelSetReport& report);

}  // namespace dsphere
