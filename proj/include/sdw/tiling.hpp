#ifndef SDW_TILING_HPP
#define SDW_TILING_HPP

// Harmonic tiling: the smoothly decreasing window k_lambda built from the
// squared Schwartz bump under logarithmic measure, the generating kernel
// kappa_lambda, the per-scale kernels kappa^(j)(l) and the scaling kernel.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>

#include "sdw/directionality.hpp"
#include "sdw/quadrature.hpp"

namespace sdw {

// exp(-(1 - t^2)^-1) on [-1, 1], zero outside; infinitely differentiable
// with compact support.
inline double schwartz_s(double t) {
  if (t <= -1.0 || t >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - t * t));
}

namespace detail {

inline double schwartz_s_lambda(double t, double lambda) {
  return schwartz_s(2.0 * lambda / (lambda - 1.0) * (t - 1.0 / lambda) - 1.0);
}

constexpr int k_lambda_panels = 1000;

// Denominator of k_lambda, cached per dilation; optionally persisted under
// SDW_CACHE_DIR.
inline double k_lambda_denominator(double lambda) {
  static std::mutex mu;
  static std::map<double, double> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(lambda);
  if (it != cache.end()) return it->second;

  std::string cache_file;
  if (const char* dir = std::getenv("SDW_CACHE_DIR")) {
    char name[64];
    std::snprintf(name, sizeof(name), "klambda_%016llx.txt",
                  static_cast<unsigned long long>(std::bit_cast<std::uint64_t>(lambda)));
    cache_file = std::string(dir) + "/" + name;
    std::ifstream in(cache_file);
    double v = 0.0;
    if (in >> v && v > 0.0) {
      cache[lambda] = v;
      return v;
    }
  }

  const auto integrand = [&](double t) {
    const double s = schwartz_s_lambda(t, lambda);
    return s * s / t;
  };
  const double v = composite_gauss(integrand, 1.0 / lambda, 1.0, k_lambda_panels);
  cache[lambda] = v;
  if (!cache_file.empty()) {
    std::ofstream out(cache_file);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf << "\n";
  }
  return v;
}

}  // namespace detail

// Unity below lambda^-1, zero above 1, smoothly decreasing in between as the
// tail fraction of the logarithmic-measure integral of s_lambda^2.
inline double k_lambda(double t, double lambda) {
  require(lambda > 1.0, "k_lambda: dilation must be > 1");
  if (t <= 1.0 / lambda) return 1.0;
  if (t >= 1.0) return 0.0;
  const auto integrand = [&](double u) {
    const double s = detail::schwartz_s_lambda(u, lambda);
    return s * s / u;
  };
  const double span = 1.0 - 1.0 / lambda;
  const int panels =
      std::max(1, static_cast<int>(std::ceil(detail::k_lambda_panels * (1.0 - t) / span)));
  const double tail = composite_gauss(integrand, t, 1.0, panels);
  const double k = tail / detail::k_lambda_denominator(lambda);
  return std::min(1.0, std::max(0.0, k));
}

// kappa_lambda(t) = sqrt(k(t/lambda) - k(t)): support [lambda^-1, lambda],
// peak of unity at t = 1. The radicand is clamped at zero against rounding.
inline double kappa_lambda(double t, double lambda) {
  require(lambda > 1.0, "kappa_lambda: dilation must be > 1");
  const double r = k_lambda(t / lambda, lambda) - k_lambda(t, lambda);
  return std::sqrt(std::max(0.0, r));
}

struct TilingConfig {
  int band_limit = 0;   // L
  double lambda = 2.0;  // dilation (the harmonic-space geometric step)
  int j_min = 0;
  int j_max = -1;  // -1: use the maximum scale for this (L, lambda)

  // Smallest integer J with lambda^J >= L; wavelets beyond it would have
  // support inside (0, 1).
  static int max_scale(int band_limit, double lambda) {
    require(band_limit >= 1, "TilingConfig: band limit must be >= 1");
    require(lambda > 1.0, "TilingConfig: dilation must be > 1");
    int j = 0;
    double t = 1.0;
    while (t < static_cast<double>(band_limit)) {
      t *= lambda;
      ++j;
    }
    return j;
  }

  TilingConfig resolved() const {
    TilingConfig c = *this;
    const int jmax_allowed = max_scale(c.band_limit, c.lambda);
    if (c.j_max < 0) c.j_max = jmax_allowed;
    require(c.j_max <= jmax_allowed, "TilingConfig: J exceeds the maximum scale for this L");
    require(c.j_min >= 0 && c.j_min <= c.j_max, "TilingConfig: need 0 <= J0 <= J");
    return c;
  }
};

struct KernelSet {
  TilingConfig config;                     // resolved
  std::vector<std::vector<double>> kappa;  // scales j_min..j_max, each length L
  std::vector<double> scaling;             // sqrt(k_lambda(lambda^J l / L)), length L

  int n_scales() const { return config.j_max - config.j_min + 1; }
  const std::vector<double>& kappa_at(int j) const { return kappa[j - config.j_min]; }
};

inline KernelSet build_kernels(const TilingConfig& config) {
  KernelSet ks;
  ks.config = config.resolved();
  const int L = ks.config.band_limit;
  const double lambda = ks.config.lambda;
  ks.kappa.assign(ks.n_scales(), std::vector<double>(L, 0.0));
  for (int j = ks.config.j_min; j <= ks.config.j_max; ++j) {
    const double scale = std::pow(lambda, j) / L;
    for (int ell = 0; ell < L; ++ell)
      ks.kappa[j - ks.config.j_min][ell] = kappa_lambda(scale * ell, lambda);
  }
  ks.scaling.resize(L);
  const double scale_j = std::pow(lambda, ks.config.j_max) / L;
  for (int ell = 0; ell < L; ++ell)
    ks.scaling[ell] = std::sqrt(k_lambda(scale_j * ell, lambda));
  return ks;
}

// Per-l deviation |LHS(l) - 1| of the resolution of the identity, with the
// measure factors of the assembled wavelets cancelled analytically:
// LHS(l) = scaling(l)^2 + sum_j kappa^(j)(l)^2 sum_m |zeta_{lm}|^2.
inline std::vector<double> check_admissibility(const KernelSet& kernels,
                                               const DirectionalityComponent& dir) {
  const int L = kernels.config.band_limit;
  require(dir.band_limit() >= L, "check_admissibility: directionality band limit too small");
  std::vector<double> residual(L, 0.0);
  for (int ell = 0; ell < L; ++ell) {
    double lhs = kernels.scaling[ell] * kernels.scaling[ell];
    const double norm = dir.row_norm(ell);
    for (const auto& row : kernels.kappa) lhs += row[ell] * row[ell] * norm;
    residual[ell] = std::abs(lhs - 1.0);
  }
  return residual;
}

// Gamma^(j) straight from a kernel set; see directionality.hpp.
inline std::vector<double> directional_autocorrelation(const KernelSet& kernels,
                                                       const DirectionalityComponent& dir, int j,
                                                       const std::vector<double>& lags,
                                                       double* max_imag = nullptr) {
  return directional_autocorrelation(kernels.kappa_at(j), dir, lags, max_imag);
}

}  // namespace sdw

#endif  // SDW_TILING_HPP
