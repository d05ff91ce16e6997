#ifndef SDW_TRANSFORM_HPP
#define SDW_TRANSFORM_HPP

// Wavelet assembly and the analysis/synthesis pipeline. Harmonic space is
// the ground truth: analysis multiplies spectra, synthesis reassembles them
// with the SO(3) and sphere measure factors, and spatial maps are renderings
// through the exact transforms.

#include "sdw/so3.hpp"
#include "sdw/tiling.hpp"

namespace sdw {

struct WaveletFamily {
  KernelSet kernels;
  DirectionalityComponent dir;
  int spin = 0;
  std::vector<HarmonicCoeffs> psi_hat;  // per scale j_min..j_max
  HarmonicCoeffs phi_hat;               // axisymmetric, m = 0 only

  int band_limit() const { return kernels.config.band_limit; }
  int azimuthal_limit() const { return dir.azimuthal_limit(); }
  int j_min() const { return kernels.config.j_min; }
  int j_max() const { return kernels.config.j_max; }
  int n_scales() const { return kernels.n_scales(); }
  const HarmonicCoeffs& psi(int j) const { return psi_hat[j - j_min()]; }
};

// psi_hat^(j)_{lm} = sqrt((2l+1)/8pi^2) kappa^(j)(l) zeta_{lm};
// phi_hat_{l0} = sqrt((2l+1)/4pi) sqrt(k_lambda(lambda^J l / L)).
// The coefficients are identical for every spin; the label selects the
// rendering basis only.
inline WaveletFamily build_family(const TilingConfig& config, int azimuthal_limit, int spin = 0) {
  WaveletFamily fam;
  fam.kernels = build_kernels(config);
  const int L = fam.kernels.config.band_limit;
  require(azimuthal_limit >= 1 && azimuthal_limit <= L, "build_family: need 1 <= N <= L");
  require(std::abs(spin) < L, "build_family: |spin| must be < L");
  fam.dir = build_directionality(L, azimuthal_limit);
  fam.spin = spin;
  fam.psi_hat.reserve(fam.n_scales());
  for (int j = fam.j_min(); j <= fam.j_max(); ++j) {
    HarmonicCoeffs psi(L, spin);
    const auto& kappa = fam.kernels.kappa_at(j);
    for (int ell = 0; ell < L; ++ell) {
      if (kappa[ell] == 0.0) continue;
      const double amp = std::sqrt((2.0 * ell + 1.0) / (8.0 * pi * pi)) * kappa[ell];
      const int mm = std::min(azimuthal_limit - 1, ell);
      for (int m = -mm; m <= mm; ++m) psi.at(ell, m) = amp * fam.dir.at(ell, m);
    }
    fam.psi_hat.push_back(std::move(psi));
  }
  fam.phi_hat = HarmonicCoeffs(L, 0);
  for (int ell = 0; ell < L; ++ell)
    fam.phi_hat.at(ell, 0) = std::sqrt((2.0 * ell + 1.0) / (4.0 * pi)) * fam.kernels.scaling[ell];
  return fam;
}

struct WaveletCoefficients {
  int j_min = 0;
  std::vector<WignerCoeffs> wavelet;  // per scale
  HarmonicCoeffs scaling;             // spin-0 expansion of W^Phi

  const WignerCoeffs& at_scale(int j) const { return wavelet[j - j_min]; }
  WignerCoeffs& at_scale(int j) { return wavelet[j - j_min]; }

  // Total wavelet + scaling energy under the SO(3) / sphere measures.
  double energy() const {
    double e = scaling.energy();
    for (const auto& w : wavelet) e += w.energy();
    return e;
  }
};

namespace detail {

inline HarmonicCoeffs embed(const HarmonicCoeffs& f, int L) {
  if (f.band_limit() == L) return f;
  HarmonicCoeffs out(L, f.spin());
  for (int ell = 0; ell < f.band_limit(); ++ell)
    for (int m = -ell; m <= ell; ++m) out.at(ell, m) = f.at(ell, m);
  return out;
}

}  // namespace detail

// W^(j)_{lmn} = f_{lm} psi_hat^(j)*_{ln};
// scaling a_{lm} = sqrt(4pi/(2l+1)) f_{lm} phi_hat*_{l0}.
inline WaveletCoefficients analyze(const HarmonicCoeffs& f_in, const WaveletFamily& fam) {
  require(f_in.band_limit() <= fam.band_limit(), "analyze: band limit exceeds family");
  require(f_in.spin() == fam.spin, "analyze: spin mismatch with family");
  const int L = fam.band_limit();
  const int N = fam.azimuthal_limit();
  const HarmonicCoeffs f = detail::embed(f_in, L);

  WaveletCoefficients out;
  out.j_min = fam.j_min();
  out.wavelet.reserve(fam.n_scales());
  for (int j = fam.j_min(); j <= fam.j_max(); ++j) {
    const HarmonicCoeffs& psi = fam.psi(j);
    WignerCoeffs w(L, N);
    for (int ell = 0; ell < L; ++ell) {
      const int nm = w.n_max(ell);
      for (int n = -nm; n <= nm; ++n) {
        const cplx pc = std::conj(psi.at(ell, n));
        if (pc == cplx(0.0, 0.0)) continue;
        for (int m = -ell; m <= ell; ++m) w.at(ell, m, n) = f.at(ell, m) * pc;
      }
    }
    out.wavelet.push_back(std::move(w));
  }
  out.scaling = HarmonicCoeffs(L, 0);
  for (int ell = 0; ell < L; ++ell) {
    const cplx pc = std::conj(fam.phi_hat.at(ell, 0)) * std::sqrt(4.0 * pi / (2.0 * ell + 1.0));
    for (int m = -ell; m <= ell; ++m) out.scaling.at(ell, m) = f.at(ell, m) * pc;
  }
  return out;
}

// f_{lm} = sqrt(4pi/(2l+1)) a_{lm} phi_hat_{l0}
//        + sum_j 8pi^2/(2l+1) sum_n W^(j)_{lmn} psi_hat^(j)_{ln}.
// Exact inverse of analyze when the family starts at scale zero.
inline HarmonicCoeffs synthesize(const WaveletCoefficients& coeffs, const WaveletFamily& fam) {
  const int L = fam.band_limit();
  require(coeffs.j_min == fam.j_min() &&
              static_cast<int>(coeffs.wavelet.size()) == fam.n_scales(),
          "synthesize: scale range mismatch with family");
  require(coeffs.scaling.band_limit() == L, "synthesize: band limit mismatch");
  HarmonicCoeffs f(L, fam.spin);
  for (int ell = 0; ell < L; ++ell) {
    const cplx pf = fam.phi_hat.at(ell, 0) * std::sqrt(4.0 * pi / (2.0 * ell + 1.0));
    for (int m = -ell; m <= ell; ++m) f.at(ell, m) = coeffs.scaling.at(ell, m) * pf;
  }
  for (int j = fam.j_min(); j <= fam.j_max(); ++j) {
    const HarmonicCoeffs& psi = fam.psi(j);
    const WignerCoeffs& w = coeffs.at_scale(j);
    for (int ell = 0; ell < L; ++ell) {
      const double measure = 8.0 * pi * pi / (2.0 * ell + 1.0);
      const int nm = w.n_max(ell);
      for (int n = -nm; n <= nm; ++n) {
        const cplx pv = psi.at(ell, n) * measure;
        if (pv == cplx(0.0, 0.0)) continue;
        for (int m = -ell; m <= ell; ++m) f.at(ell, m) += w.at(ell, m, n) * pv;
      }
    }
  }
  return f;
}

struct SpatialWaveletCoefficients {
  int j_min = 0;
  std::vector<SO3Map> wavelet;
  SphereMap scaling;
};

// Spatial rendering of the same content: forward transform, harmonic
// analysis, then inverse SO(3)/sphere transforms per scale.
inline SpatialWaveletCoefficients analyze_spatial(const SphereMap& map, const WaveletFamily& fam) {
  require(map.grid.band_limit == fam.band_limit(), "analyze_spatial: grid band limit mismatch");
  const HarmonicCoeffs f = forward_sht(map);
  const WaveletCoefficients wc = analyze(f, fam);
  SpatialWaveletCoefficients out;
  out.j_min = wc.j_min;
  const SO3Grid grid = SO3Grid::make(fam.band_limit(), fam.azimuthal_limit());
  out.wavelet.reserve(wc.wavelet.size());
  for (const auto& w : wc.wavelet) out.wavelet.push_back(inverse_so3(w, grid));
  out.scaling = inverse_sht(wc.scaling, map.grid);
  return out;
}

// Map of one wavelet, rendered in the family's spin basis on the given grid;
// coefficients below l = |spin| are structurally absent from the basis.
inline SphereMap wavelet_map(const WaveletFamily& fam, int j, const SphereGrid& grid) {
  require(j >= fam.j_min() && j <= fam.j_max(), "wavelet_map: scale out of range");
  HarmonicCoeffs psi = fam.psi(j);
  for (int ell = 0; ell < std::abs(fam.spin); ++ell)
    for (int m = -ell; m <= ell; ++m) psi.at(ell, m) = cplx(0.0, 0.0);
  return inverse_sht(psi, grid);
}

// Harmonic z-rotation: a_{lm} -> exp(-i m chi) a_{lm}.
inline HarmonicCoeffs rotate_z(const HarmonicCoeffs& f, double chi) {
  HarmonicCoeffs out = f;
  for (int ell = 0; ell < f.band_limit(); ++ell)
    for (int m = -ell; m <= ell; ++m)
      out.at(ell, m) = f.at(ell, m) * cplx(std::cos(m * chi), -std::sin(m * chi));
  return out;
}

}  // namespace sdw

#endif  // SDW_TRANSFORM_HPP
