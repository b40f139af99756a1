#pragma once
// Thin FFTW wrapper: in-place n-dimensional c2c transforms on
// std::vector<std::complex<double>> with a process-wide plan cache.
// Planning is FFTW_ESTIMATE (deterministic results, no measurement noise)
// and FFTW_UNALIGNED (plans reusable for any vector's buffer).

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace dsphere::fft {

// Smallest 5-smooth (2^a 3^b 5^c) integer >= n; FFTW handles these sizes at
// full speed and they stay far smaller than the next power of two in d >= 4.
std::int64_t good_size(std::int64_t n);

// In-place transform over dims (row-major); data.size() must equal the
// product of dims. The inverse is scaled by 1/N so forward-then-inverse is
// the identity. Forward sign convention: exp(-2 pi i k.n / L).
void transform(std::vector<std::complex<double>>& data,
               std::span<const std::int64_t> dims, bool inverse);

}  // namespace dsphere::fft
