#include "dsphere/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace dsphere::fft {

std::int64_t good_size(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("good_size: n >= 1");
  for (std::int64_t c = n;; ++c) {
    std::int64_t m = c;
    for (int p : {2, 3, 5})
      while (m % p == 0) m /= p;
    if (m == 1) return c;
  }
}

namespace {

struct PlanCache {
  std::mutex mu;
  std::map<std::pair<std::vector<std::int64_t>, bool>, fftw_plan> plans;

  fftw_plan get(std::span<const std::int64_t> dims, bool inverse) {
    std::vector<std::int64_t> key(dims.begin(), dims.end());
    std::lock_guard<std::mutex> lock(mu);
    auto it = plans.find({key, inverse});
    if (it != plans.end()) return it->second;
    std::vector<int> n(dims.begin(), dims.end());
    // plan on a throwaway buffer; FFTW_UNALIGNED lets us execute on any array
    std::size_t total = 1;
    for (int v : n) total *= static_cast<std::size_t>(v);
    std::vector<std::complex<double>> scratch(total);
    auto* ptr = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan p = fftw_plan_dft(static_cast<int>(n.size()), n.data(), ptr, ptr,
                                inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (p == nullptr) throw std::runtime_error("fftw_plan_dft failed");
    plans[{key, inverse}] = p;
    return p;
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

void transform(std::vector<std::complex<double>>& data,
               std::span<const std::int64_t> dims, bool inverse) {
  std::size_t total = 1;
  for (std::int64_t v : dims) {
    if (v < 1) throw std::invalid_argument("transform: dims must be positive");
    total *= static_cast<std::size_t>(v);
  }
  if (data.size() != total)
    throw std::invalid_argument("transform: data size does not match dims");
  fftw_plan plan = cache().get(dims, inverse);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, ptr, ptr);
  if (inverse) {
    double scale = 1.0 / static_cast<double>(total);
    for (auto& z : data) z *= scale;
  }
}

}  // namespace dsphere::fft
