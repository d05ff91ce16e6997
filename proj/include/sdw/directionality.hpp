#ifndef SDW_DIRECTIONALITY_HPP
#define SDW_DIRECTIONALITY_HPP

// The directionality component zeta_{lm}: squared moduli follow the Fourier
// coefficients of cos^p, which pins the directional auto-correlation to
// cos^{N-1} and makes the wavelets steerable from N basis rotations.

#include "sdw/sht.hpp"

namespace sdw {

class DirectionalityComponent {
 public:
  DirectionalityComponent() = default;
  DirectionalityComponent(int band_limit, int azimuthal_limit)
      : band_limit_(band_limit), azimuthal_limit_(azimuthal_limit),
        values_(static_cast<std::size_t>(band_limit) * (2 * azimuthal_limit - 1),
                cplx(0.0, 0.0)) {
    require(band_limit >= 1, "DirectionalityComponent: band limit must be >= 1");
    require(azimuthal_limit >= 1 && azimuthal_limit <= band_limit,
            "DirectionalityComponent: need 1 <= N <= L");
  }

  int band_limit() const { return band_limit_; }
  int azimuthal_limit() const { return azimuthal_limit_; }

  cplx& at(int ell, int m) {
    return values_[static_cast<std::size_t>(ell) * (2 * azimuthal_limit_ - 1) +
                   (m + azimuthal_limit_ - 1)];
  }
  const cplx& at(int ell, int m) const {
    return values_[static_cast<std::size_t>(ell) * (2 * azimuthal_limit_ - 1) +
                   (m + azimuthal_limit_ - 1)];
  }

  // sum_m |zeta_{lm}|^2; equals 1 wherever the row is non-zero.
  double row_norm(int ell) const {
    double s = 0.0;
    for (int m = -(azimuthal_limit_ - 1); m < azimuthal_limit_; ++m)
      if (std::abs(m) <= ell) s += std::norm(at(ell, m));
    return s;
  }

 private:
  int band_limit_ = 0;
  int azimuthal_limit_ = 0;
  std::vector<cplx> values_;
};

// zeta_{lm} = eta * upsilon * sqrt(2^-p binom(p, (p-m)/2)) with
// p = min{N-1, l - [1 + (-1)^{N+l}]/2}, the largest directionality the
// azimuthal band limit supports at a given l.
inline DirectionalityComponent build_directionality(int band_limit, int azimuthal_limit) {
  DirectionalityComponent dir(band_limit, azimuthal_limit);
  const int N = azimuthal_limit;
  const cplx eta = ((N - 1) % 2 == 0) ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
  for (int ell = 0; ell < band_limit; ++ell) {
    const int even_shift = ((N + ell) % 2 == 0) ? 1 : 0;
    const int p = std::min(N - 1, ell - even_shift);
    if (p < 0) continue;
    for (int m = -std::min(N - 1, ell); m <= std::min(N - 1, ell); ++m) {
      if ((N + m) % 2 == 0) continue;  // upsilon = 0
      if (std::abs(m) > p || (p - m) % 2 != 0) continue;
      const int k = (p - m) / 2;
      const double lg = 0.5 * (std::lgamma(p + 1.0) - std::lgamma(k + 1.0) -
                               std::lgamma(p - k + 1.0) - p * std::log(2.0));
      dir.at(ell, m) = eta * std::exp(lg);
    }
  }
  return dir;
}

// Gamma^(j)(dgamma) = sum_l kappa(l)^2 sum_m |zeta_{lm}|^2 exp(i m dgamma),
// evaluated on the given lag grid. kappa is the per-l kernel of one scale.
// The complex sum is Hermitian-symmetric; max_imag reports the residual
// imaginary part before it is dropped.
inline std::vector<double> directional_autocorrelation(const std::vector<double>& kappa,
                                                       const DirectionalityComponent& dir,
                                                       const std::vector<double>& lags,
                                                       double* max_imag = nullptr) {
  const int L = std::min<int>(static_cast<int>(kappa.size()), dir.band_limit());
  const int N = dir.azimuthal_limit();
  std::vector<double> cm(2 * N - 1, 0.0);
  for (int ell = 0; ell < L; ++ell) {
    const double k2 = kappa[ell] * kappa[ell];
    if (k2 == 0.0) continue;
    for (int m = -std::min(N - 1, ell); m <= std::min(N - 1, ell); ++m)
      cm[m + N - 1] += k2 * std::norm(dir.at(ell, m));
  }
  std::vector<double> out(lags.size(), 0.0);
  double worst_imag = 0.0;
  for (std::size_t i = 0; i < lags.size(); ++i) {
    cplx acc(0.0, 0.0);
    for (int m = -(N - 1); m < N; ++m)
      acc += cm[m + N - 1] * cplx(std::cos(m * lags[i]), std::sin(m * lags[i]));
    out[i] = acc.real();
    worst_imag = std::max(worst_imag, std::abs(acc.imag()));
  }
  if (max_imag) *max_imag = worst_imag;
  return out;
}

// Interpolation weights z(gamma - gamma_g) at the M = N basis orientations
// gamma_g = g pi / M. The interpolating function has Fourier coefficients
// 1/M exactly on the m-support of the directionality component.
inline std::vector<cplx> steering_weights(int azimuthal_limit, double gamma) {
  require(azimuthal_limit >= 1, "steering_weights: N must be >= 1");
  const int M = azimuthal_limit;
  const auto z = [&](double x) {
    // m runs over the parity-constrained support {-(M-1), -(M-1)+2, ..., M-1},
    // which has exactly M members.
    cplx acc(0.0, 0.0);
    for (int m = -(M - 1); m <= M - 1; m += 2)
      acc += cplx(std::cos(m * x), std::sin(m * x));
    return acc / static_cast<double>(M);
  };
  std::vector<cplx> w(M);
  for (int g = 0; g < M; ++g) w[g] = z(gamma - g * pi / M);
  return w;
}

// Max abs error between the steered sum over basis rotations and the exact
// harmonic gamma-rotation (multiplication by exp(-i m gamma)). Small only
// when the coefficients are azimuthally band-limited at N with the
// directionality parity; violations surface as a large error, not a throw.
inline double steer_check(const HarmonicCoeffs& h, int azimuthal_limit, double gamma) {
  const int M = azimuthal_limit;
  const auto w = steering_weights(M, gamma);
  const int L = h.band_limit();
  double err = 0.0;
  for (int ell = 0; ell < L; ++ell) {
    for (int m = -ell; m <= ell; ++m) {
      const cplx v = h.at(ell, m);
      if (v == cplx(0.0, 0.0)) continue;
      cplx steered(0.0, 0.0);
      for (int g = 0; g < M; ++g) {
        const double gg = g * pi / M;
        steered += w[g] * cplx(std::cos(m * gg), -std::sin(m * gg));
      }
      const cplx exact(std::cos(m * gamma), -std::sin(m * gamma));
      err = std::max(err, std::abs((steered - exact) * v));
    }
  }
  return err;
}

}  // namespace sdw

#endif  // SDW_DIRECTIONALITY_HPP
