#ifndef SDW_FFT_HPP
#define SDW_FFT_HPP

// Small self-contained complex FFT: iterative radix-2 for powers of two,
// Bluestein's chirp-z for everything else. The transform sizes here are the
// odd grid dimensions 2L-1 and 2N-1, which are never powers of two.

#include <map>
#include <memory>
#include <mutex>

#include "sdw/core.hpp"

namespace sdw {
namespace detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// In-place radix-2, sign = +1 or -1 in exp(sign * 2*pi*i * nk / N).
inline void fft_pow2(cplx* x, std::size_t n, int sign) {
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * pi / static_cast<double>(len);
    const cplx wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const cplx u = x[i + k];
        const cplx v = x[i + k + len / 2] * w;
        x[i + k] = u + v;
        x[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

struct BluesteinPlan {
  std::size_t n = 0;
  std::size_t m = 0;                // padded power-of-two length
  std::vector<cplx> chirp;          // exp(-i*pi*k^2/n), k < n
  std::vector<cplx> b_fwd;          // FFT of the zero-padded conjugate chirp
};

inline std::shared_ptr<const BluesteinPlan> bluestein_plan(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::shared_ptr<const BluesteinPlan>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  auto plan = std::make_shared<BluesteinPlan>();
  plan->n = n;
  plan->m = next_pow2(2 * n - 1);
  plan->chirp.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    // k^2 mod 2n keeps the phase argument small for big sizes
    const std::size_t r = (k * k) % (2 * n);
    const double ang = -pi * static_cast<double>(r) / static_cast<double>(n);
    plan->chirp[k] = cplx(std::cos(ang), std::sin(ang));
  }
  std::vector<cplx> b(plan->m, cplx(0.0, 0.0));
  b[0] = std::conj(plan->chirp[0]);
  for (std::size_t k = 1; k < n; ++k) {
    b[k] = std::conj(plan->chirp[k]);
    b[plan->m - k] = b[k];
  }
  fft_pow2(b.data(), plan->m, -1);
  plan->b_fwd = std::move(b);
  cache[n] = plan;
  return plan;
}

inline void fft_bluestein(cplx* x, std::size_t n, int sign) {
  const auto plan = bluestein_plan(n);
  std::vector<cplx> a(plan->m, cplx(0.0, 0.0));
  if (sign < 0) {
    for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * plan->chirp[k];
  } else {
    for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * std::conj(plan->chirp[k]);
  }
  fft_pow2(a.data(), plan->m, -1);
  if (sign < 0) {
    for (std::size_t k = 0; k < plan->m; ++k) a[k] *= plan->b_fwd[k];
  } else {
    for (std::size_t k = 0; k < plan->m; ++k) a[k] *= std::conj(plan->b_fwd[k]);
  }
  fft_pow2(a.data(), plan->m, +1);
  const double inv_m = 1.0 / static_cast<double>(plan->m);
  if (sign < 0) {
    for (std::size_t k = 0; k < n; ++k) x[k] = a[k] * plan->chirp[k] * inv_m;
  } else {
    for (std::size_t k = 0; k < n; ++k) x[k] = a[k] * std::conj(plan->chirp[k]) * inv_m;
  }
}

}  // namespace detail

// X_k = sum_n x_n exp(sign * 2*pi*i * n*k / N), unnormalized.
inline void fft(cplx* x, std::size_t n, int sign) {
  if (n <= 1) return;
  if (detail::is_pow2(n)) {
    detail::fft_pow2(x, n, sign);
  } else {
    detail::fft_bluestein(x, n, sign);
  }
}

inline void fft(std::vector<cplx>& x, int sign) { fft(x.data(), x.size(), sign); }

}  // namespace sdw

#endif  // SDW_FFT_HPP
