#ifndef SDW_STOCHASTIC_HPP
#define SDW_STOCHASTIC_HPP

// Gaussian random fields on the sphere, sky masks, and the wavelet-coefficient
// statistics: analytic and Monte-Carlo covariance/correlation across scales,
// and the masked localisation statistic. Realization r of a seeded experiment
// draws from the counter-based generator keyed by seed XOR r, so results are
// reproducible at any worker count.

#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include "sdw/io.hpp"
#include "sdw/transform.hpp"

namespace sdw {

struct PowerSpectrum {
  std::vector<double> values;  // C_l, starting at l = 0
  std::string model;           // "file:..." or "power-law(g1,alpha)"

  double value(int ell) const {
    if (ell < 0 || ell >= static_cast<int>(values.size()))
      throw data_error("power spectrum shorter than requested degree");
    return values[ell];
  }
  void require_length(int L) const {
    if (static_cast<int>(values.size()) < L)
      throw data_error("power spectrum shorter than band limit " + std::to_string(L));
  }

  // C_0 = 0 (zero-mean field), C_l = g1 l^{-alpha} for l >= 1.
  static PowerSpectrum power_law(int length, double g1, double alpha_spec) {
    require(length >= 1, "power_law: length must be >= 1");
    require(g1 >= 0.0, "power_law: g1 must be >= 0");
    PowerSpectrum s;
    s.values.resize(length, 0.0);
    for (int ell = 1; ell < length; ++ell)
      s.values[ell] = g1 * std::pow(static_cast<double>(ell), -alpha_spec);
    std::ostringstream tag;
    tag << "power-law(" << g1 << "," << alpha_spec << ")";
    s.model = tag.str();
    return s;
  }
};

// ASCII, two columns "l C_l", '#' comments; degrees may start above zero and
// missing entries default to zero.
inline PowerSpectrum load_spectrum(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open spectrum file: " + path);
  PowerSpectrum s;
  s.model = "file:" + path;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    long long ell = 0;
    double cl = 0.0;
    if (!(ls >> ell)) continue;  // blank or comment-only line
    if (!(ls >> cl))
      throw data_error(path + ":" + std::to_string(line_no) + ": expected 'l C_l'");
    std::string extra;
    if (ls >> extra)
      throw data_error(path + ":" + std::to_string(line_no) + ": trailing garbage");
    if (ell < 0 || ell > (1 << 24))
      throw data_error(path + ":" + std::to_string(line_no) + ": implausible degree");
    if (!(cl >= 0.0))
      throw data_error(path + ":" + std::to_string(line_no) + ": C_l must be >= 0");
    if (static_cast<std::size_t>(ell) >= s.values.size()) s.values.resize(ell + 1, 0.0);
    s.values[ell] = cl;
  }
  if (s.values.empty()) throw data_error(path + ": no spectrum entries found");
  return s;
}

struct SkyMask {
  SphereGrid grid;
  std::vector<double> values;  // exactly 0 or 1, theta-major

  double at(int i_theta, int i_phi) const {
    return values[static_cast<std::size_t>(i_theta) * grid.n_phi() + i_phi];
  }

  static SkyMask full(const SphereGrid& grid) {
    SkyMask m{grid, {}};
    m.values.assign(static_cast<std::size_t>(grid.band_limit) * grid.n_phi(), 1.0);
    return m;
  }
  static SkyMask empty(const SphereGrid& grid) {
    SkyMask m{grid, {}};
    m.values.assign(static_cast<std::size_t>(grid.band_limit) * grid.n_phi(), 0.0);
    return m;
  }
  // Zero inside the colatitude band [theta_lo, theta_hi], one elsewhere.
  static SkyMask equatorial_band(const SphereGrid& grid, double theta_lo, double theta_hi) {
    SkyMask m = full(grid);
    for (int i = 0; i < grid.band_limit; ++i) {
      if (grid.theta[i] >= theta_lo && grid.theta[i] <= theta_hi)
        for (int k = 0; k < grid.n_phi(); ++k)
          m.values[static_cast<std::size_t>(i) * grid.n_phi() + k] = 0.0;
    }
    return m;
  }
};

// SDWMAP1 with real 0/1 payload. Strict mode rejects anything not exactly
// binary; otherwise values are thresholded at 0.5.
inline SkyMask load_mask(const std::string& path, bool strict = true) {
  const SphereMap map = read_map(path);
  if (map.spin != 0) throw data_error(path + ": mask must be spin 0");
  SkyMask mask;
  mask.grid = map.grid;
  mask.values.resize(map.values.size());
  for (std::size_t i = 0; i < map.values.size(); ++i) {
    const cplx v = map.values[i];
    if (v.imag() != 0.0)
      throw data_error(path + ": mask sample " + std::to_string(i) + " has nonzero imaginary part");
    if (strict) {
      if (v.real() != 0.0 && v.real() != 1.0)
        throw data_error(path + ": mask sample " + std::to_string(i) +
                         " is not binary in strict mode");
      mask.values[i] = v.real();
    } else {
      mask.values[i] = (v.real() > 0.5) ? 1.0 : 0.0;
    }
  }
  return mask;
}

inline void write_mask(const std::string& path, const SkyMask& mask) {
  SphereMap map;
  map.grid = mask.grid;
  map.spin = 0;
  map.values.resize(mask.values.size());
  for (std::size_t i = 0; i < mask.values.size(); ++i) map.values[i] = cplx(mask.values[i], 0.0);
  write_map(path, map);
}

// Zero-mean isotropic Gaussian realization: E[a_{lm} a*_{l'm'}] =
// C_l delta delta, with the reality condition a_{l,-m} = (-1)^m a*_{lm}.
// A spin label restricts support to l >= |spin|; the draw counters are
// unchanged, so spectra vanishing below |spin| give identical coefficients
// for every spin.
inline HarmonicCoeffs simulate_grf(const PowerSpectrum& spectrum, int band_limit,
                                   std::uint64_t seed, int spin = 0) {
  spectrum.require_length(band_limit);
  HarmonicCoeffs f(band_limit, spin);
  const CounterRng rng(seed);
  for (int ell = std::abs(spin); ell < band_limit; ++ell) {
    const double cl = spectrum.value(ell);
    if (cl == 0.0) continue;
    for (int m = 0; m <= ell; ++m) {
      double z0 = 0.0, z1 = 0.0;
      rng.normal_pair(HarmonicCoeffs::index(ell, m), z0, z1);
      if (m == 0) {
        f.at(ell, 0) = cplx(std::sqrt(cl) * z0, 0.0);
      } else {
        const double amp = std::sqrt(0.5 * cl);
        const cplx a(amp * z0, amp * z1);
        f.at(ell, m) = a;
        f.at(ell, -m) = (m % 2 == 0 ? 1.0 : -1.0) * std::conj(a);
      }
    }
  }
  return f;
}

// Pixel-space masking at the analysis band limit; the induced spectral
// leakage is the object of study, not an error.
inline HarmonicCoeffs mask_field(const HarmonicCoeffs& f, const SkyMask& mask,
                                 const ShtPlan& plan) {
  require(mask.grid.band_limit == plan.grid().band_limit, "mask_field: mask grid mismatch");
  SphereMap map = plan.inverse(f);
  for (std::size_t i = 0; i < map.values.size(); ++i) map.values[i] *= mask.values[i];
  return plan.forward(map);
}

// --- analytic covariance ----------------------------------------------------

// xi^(j j')(rho, rho) = sum_l C_l sum_n psi_hat^(j)*_{ln} psi_hat^(j')_{ln};
// identically zero for |j - j'| >= 2 by kernel support disjointness.
inline double analytic_covariance_coincident(const WaveletFamily& fam,
                                             const PowerSpectrum& spectrum, int j, int jp) {
  spectrum.require_length(fam.band_limit());
  const HarmonicCoeffs& a = fam.psi(j);
  const HarmonicCoeffs& b = fam.psi(jp);
  const int N = fam.azimuthal_limit();
  double acc = 0.0;
  for (int ell = 0; ell < fam.band_limit(); ++ell) {
    const double cl = spectrum.value(ell);
    if (cl == 0.0) continue;
    double row = 0.0;
    const int nm = std::min(N - 1, ell);
    for (int n = -nm; n <= nm; ++n) row += (std::conj(a.at(ell, n)) * b.at(ell, n)).real();
    acc += cl * row;
  }
  return acc;
}

// Covariance at relative rotation rho = R(rho1)^{-1} R(rho2):
// sum_l C_l sum_{n n'} psi^(j)*_{ln} psi^(j')_{ln'} D^l_{nn'}(rho).
inline cplx analytic_covariance_rho(const WaveletFamily& fam, const PowerSpectrum& spectrum,
                                    int j, int jp, const EulerAngles& rho1,
                                    const EulerAngles& rho2) {
  spectrum.require_length(fam.band_limit());
  const EulerAngles rho = relative_rotation(rho1, rho2);
  const HarmonicCoeffs& a = fam.psi(j);
  const HarmonicCoeffs& b = fam.psi(jp);
  const int L = fam.band_limit();
  const int N = fam.azimuthal_limit();
  std::vector<double> run(L);
  cplx acc(0.0, 0.0);
  for (int n = -(N - 1); n < N; ++n) {
    for (int np = -(N - 1); np < N; ++np) {
      wigner_d_run(n, np, rho.beta, L, run.data());
      cplx block(0.0, 0.0);
      for (int ell = std::max(std::abs(n), std::abs(np)); ell < L; ++ell) {
        const double cl = spectrum.value(ell);
        if (cl == 0.0) continue;
        block += cl * run[ell] * std::conj(a.at(ell, n)) * b.at(ell, np);
      }
      const double phase = -(n * rho.alpha + np * rho.gamma);
      acc += block * cplx(std::cos(phase), std::sin(phase));
    }
  }
  return acc;
}

// Same-scale covariance profile along a relative rotation (0, beta, 0).
inline std::vector<double> analytic_covariance_beta(const WaveletFamily& fam,
                                                    const PowerSpectrum& spectrum, int j, int jp,
                                                    const std::vector<double>& betas) {
  spectrum.require_length(fam.band_limit());
  const HarmonicCoeffs& a = fam.psi(j);
  const HarmonicCoeffs& b = fam.psi(jp);
  const int L = fam.band_limit();
  const int N = fam.azimuthal_limit();
  std::vector<double> out(betas.size(), 0.0);
  std::vector<double> run(L);
  for (std::size_t i = 0; i < betas.size(); ++i) {
    double acc = 0.0;
    for (int n = -(N - 1); n < N; ++n) {
      for (int np = -(N - 1); np < N; ++np) {
        wigner_d_run(n, np, betas[i], L, run.data());
        double block = 0.0;
        for (int ell = std::max(std::abs(n), std::abs(np)); ell < L; ++ell) {
          const double cl = spectrum.value(ell);
          if (cl == 0.0) continue;
          block += cl * run[ell] * (std::conj(a.at(ell, n)) * b.at(ell, np)).real();
        }
        acc += block;
      }
    }
    out[i] = acc;
  }
  return out;
}

struct CorrelationMatrix {
  int j_min = 0;
  int j_max = 0;
  std::vector<double> entries;  // (j_max - j_min + 1)^2, row-major
  std::string provenance;       // "analytic" or "empirical"

  int n_scales() const { return j_max - j_min + 1; }
  double at(int j, int jp) const {
    return entries[static_cast<std::size_t>(j - j_min) * n_scales() + (jp - j_min)];
  }
  double& at(int j, int jp) {
    return entries[static_cast<std::size_t>(j - j_min) * n_scales() + (jp - j_min)];
  }
};

inline CorrelationMatrix analytic_correlation(const WaveletFamily& fam,
                                              const PowerSpectrum& spectrum) {
  CorrelationMatrix mat;
  mat.j_min = fam.j_min();
  mat.j_max = fam.j_max();
  mat.provenance = "analytic";
  const int nj = mat.n_scales();
  mat.entries.assign(static_cast<std::size_t>(nj) * nj, 0.0);
  std::vector<double> sd(nj);
  for (int j = fam.j_min(); j <= fam.j_max(); ++j)
    sd[j - fam.j_min()] = std::sqrt(analytic_covariance_coincident(fam, spectrum, j, j));
  for (int j = fam.j_min(); j <= fam.j_max(); ++j) {
    mat.at(j, j) = 1.0;
    for (int jp = j + 1; jp <= fam.j_max(); ++jp) {
      const double xi = analytic_covariance_coincident(fam, spectrum, j, jp);
      const double val = xi / (sd[j - fam.j_min()] * sd[jp - fam.j_min()]);
      mat.at(j, jp) = val;
      mat.at(jp, j) = val;
    }
  }
  return mat;
}

namespace detail {

// W^(j) for one scale only; the full analyze() would build every scale.
inline WignerCoeffs analyze_scale(const HarmonicCoeffs& f, const WaveletFamily& fam, int j) {
  const int L = fam.band_limit();
  const HarmonicCoeffs& psi = fam.psi(j);
  WignerCoeffs w(L, fam.azimuthal_limit());
  for (int ell = 0; ell < L; ++ell) {
    const int nm = w.n_max(ell);
    for (int n = -nm; n <= nm; ++n) {
      const cplx pc = std::conj(psi.at(ell, n));
      if (pc == cplx(0.0, 0.0)) continue;
      for (int m = -ell; m <= ell; ++m) w.at(ell, m, n) = f.at(ell, m) * pc;
    }
  }
  return w;
}

}  // namespace detail

// Monte-Carlo estimate of the scale-scale correlation at coincident rotation,
// averaged (unweighted) over every SO(3) grid sample. With a mask, each
// realization is multiplied by the mask in pixel space and re-analyzed before
// the wavelet transform. Deterministic for any jobs count.
inline CorrelationMatrix empirical_correlation(const WaveletFamily& fam,
                                               const PowerSpectrum& spectrum, int n_sims,
                                               std::uint64_t seed,
                                               const SkyMask* mask = nullptr, int jobs = 1) {
  require(n_sims >= 2, "empirical_correlation: need at least 2 simulations");
  spectrum.require_length(fam.band_limit());
  const int L = fam.band_limit();
  const int N = fam.azimuthal_limit();
  const int nj = fam.n_scales();
  const std::size_t n_pairs = static_cast<std::size_t>(nj) * (nj + 1) / 2;

  const So3Plan so3_plan(SO3Grid::make(L, N));
  std::unique_ptr<ShtPlan> sht_plan;
  if (mask) sht_plan = std::make_unique<ShtPlan>(mask->grid, fam.spin, L);

  std::vector<std::vector<cplx>> partial(n_sims, std::vector<cplx>(n_pairs, cplx(0.0, 0.0)));
  parallel_for(n_sims, jobs, [&](std::size_t r) {
    HarmonicCoeffs f = simulate_grf(spectrum, L, seed ^ static_cast<std::uint64_t>(r), fam.spin);
    if (mask) f = mask_field(f, *mask, *sht_plan);
    std::vector<SO3Map> maps;
    maps.reserve(nj);
    for (int j = fam.j_min(); j <= fam.j_max(); ++j)
      maps.push_back(so3_plan.inverse(detail::analyze_scale(f, fam, j)));
    std::size_t pair = 0;
    for (int a = 0; a < nj; ++a) {
      for (int b = a; b < nj; ++b, ++pair) {
        cplx acc(0.0, 0.0);
        const auto& va = maps[a].values;
        const auto& vb = maps[b].values;
        for (std::size_t i = 0; i < va.size(); ++i) acc += va[i] * std::conj(vb[i]);
        partial[r][pair] = acc;
      }
    }
  });

  std::vector<cplx> sums(n_pairs, cplx(0.0, 0.0));
  for (int r = 0; r < n_sims; ++r)
    for (std::size_t p = 0; p < n_pairs; ++p) sums[p] += partial[r][p];

  CorrelationMatrix mat;
  mat.j_min = fam.j_min();
  mat.j_max = fam.j_max();
  mat.provenance = "empirical";
  mat.entries.assign(static_cast<std::size_t>(nj) * nj, 0.0);
  std::vector<double> sd(nj);
  {
    std::size_t pair = 0;
    for (int a = 0; a < nj; ++a)
      for (int b = a; b < nj; ++b, ++pair)
        if (a == b) sd[a] = std::sqrt(sums[pair].real());
  }
  std::size_t pair = 0;
  for (int a = 0; a < nj; ++a) {
    for (int b = a; b < nj; ++b, ++pair) {
      const double val = sums[pair].real() / (sd[a] * sd[b]);
      mat.entries[static_cast<std::size_t>(a) * nj + b] = val;
      mat.entries[static_cast<std::size_t>(b) * nj + a] = val;
    }
  }
  return mat;
}

struct LocalisationResult {
  SO3Map delta;        // real-valued; undefined samples are NaN
  int undefined_count = 0;
};

// Delta^(j)(rho) = E[|W_masked - W|^2] / E[|W|^2] per SO(3) sample. Samples
// whose denominator falls below 1e-12 of the global mean are reported as
// undefined rather than divided out.
inline LocalisationResult localisation_statistic(const WaveletFamily& fam,
                                                 const PowerSpectrum& spectrum,
                                                 const SkyMask& mask, int j, int n_sims,
                                                 std::uint64_t seed, int jobs = 1) {
  require(n_sims >= 1, "localisation_statistic: need at least 1 simulation");
  require(j >= fam.j_min() && j <= fam.j_max(), "localisation_statistic: scale out of range");
  spectrum.require_length(fam.band_limit());
  const int L = fam.band_limit();
  const So3Plan so3_plan(SO3Grid::make(L, fam.azimuthal_limit()));
  const ShtPlan sht_plan(mask.grid, fam.spin, L);
  const std::size_t n_samp = so3_plan.grid().size();

  std::vector<std::vector<double>> part_num(n_sims), part_den(n_sims);
  parallel_for(n_sims, jobs, [&](std::size_t r) {
    const HarmonicCoeffs f = simulate_grf(spectrum, L, seed ^ static_cast<std::uint64_t>(r), fam.spin);
    const HarmonicCoeffs fm = mask_field(f, mask, sht_plan);
    const SO3Map w = so3_plan.inverse(detail::analyze_scale(f, fam, j));
    const SO3Map wm = so3_plan.inverse(detail::analyze_scale(fm, fam, j));
    auto& num = part_num[r];
    auto& den = part_den[r];
    num.assign(n_samp, 0.0);
    den.assign(n_samp, 0.0);
    for (std::size_t i = 0; i < n_samp; ++i) {
      num[i] = std::norm(wm.values[i] - w.values[i]);
      den[i] = std::norm(w.values[i]);
    }
  });

  std::vector<double> num(n_samp, 0.0), den(n_samp, 0.0);
  for (int r = 0; r < n_sims; ++r)
    for (std::size_t i = 0; i < n_samp; ++i) {
      num[i] += part_num[r][i];
      den[i] += part_den[r][i];
    }

  double den_mean = 0.0;
  for (std::size_t i = 0; i < n_samp; ++i) den_mean += den[i];
  den_mean /= static_cast<double>(n_samp);
  const double guard = 1e-12 * den_mean;

  LocalisationResult res;
  res.delta.grid = so3_plan.grid();
  res.delta.values.assign(n_samp, cplx(0.0, 0.0));
  for (std::size_t i = 0; i < n_samp; ++i) {
    if (den[i] <= guard) {
      res.delta.values[i] = cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
      ++res.undefined_count;
    } else {
      res.delta.values[i] = cplx(num[i] / den[i], 0.0);
    }
  }
  return res;
}

// CSV matrix with scale indices as row/column headers.
inline void write_correlation_csv(std::ostream& out, const CorrelationMatrix& mat) {
  out << "j";
  for (int jp = mat.j_min; jp <= mat.j_max; ++jp) out << ",j" << jp;
  out << '\n';
  for (int j = mat.j_min; j <= mat.j_max; ++j) {
    out << j;
    for (int jp = mat.j_min; jp <= mat.j_max; ++jp) out << ',' << detail::fmt_double(mat.at(j, jp));
    out << '\n';
  }
}

}  // namespace sdw

#endif  // SDW_STOCHASTIC_HPP
