#ifndef SDW_SHT_HPP
#define SDW_SHT_HPP

// Exact scalar and spin spherical harmonic transforms on a Gauss-Legendre x
// equiangular grid. L Gauss-Legendre colatitudes integrate the theta part of
// any band-limited product exactly; 2L-1 longitudes give every order its own
// FFT bin.

#include "sdw/fft.hpp"
#include "sdw/special_functions.hpp"

namespace sdw {

struct SphereGrid {
  int band_limit = 0;           // L
  std::vector<double> theta;    // Gauss-Legendre colatitudes, ascending
  std::vector<double> weight;   // quadrature weights in d(cos theta), sum 2

  int n_phi() const { return 2 * band_limit - 1; }
  double phi(int k) const { return 2.0 * pi * k / n_phi(); }

  static SphereGrid make(int L) {
    require(L >= 1, "SphereGrid: band limit must be >= 1");
    SphereGrid g;
    g.band_limit = L;
    std::vector<double> x, w;
    gauss_legendre(L, x, w);
    g.theta.resize(L);
    g.weight.resize(L);
    for (int i = 0; i < L; ++i) {
      g.theta[i] = std::acos(x[i]);  // x descending -> theta ascending
      g.weight[i] = w[i];
    }
    return g;
  }
};

// Coefficients a_{lm} of a band-limited spin-s function, l-major with m
// ascending. Entries with l < |spin| are structurally zero.
class HarmonicCoeffs {
 public:
  HarmonicCoeffs() = default;
  HarmonicCoeffs(int band_limit, int spin)
      : band_limit_(band_limit), spin_(spin),
        values_(static_cast<std::size_t>(band_limit) * band_limit, cplx(0.0, 0.0)) {
    require(band_limit >= 1, "HarmonicCoeffs: band limit must be >= 1");
    require(std::abs(spin) < band_limit, "HarmonicCoeffs: |spin| must be < band limit");
  }

  int band_limit() const { return band_limit_; }
  int spin() const { return spin_; }

  static std::size_t index(int ell, int m) {
    return static_cast<std::size_t>(ell) * ell + ell + m;
  }
  cplx& at(int ell, int m) { return values_[index(ell, m)]; }
  const cplx& at(int ell, int m) const { return values_[index(ell, m)]; }

  std::vector<cplx>& values() { return values_; }
  const std::vector<cplx>& values() const { return values_; }

  double max_abs_diff(const HarmonicCoeffs& other) const {
    require(band_limit_ == other.band_limit_, "max_abs_diff: band limits differ");
    double m = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i)
      m = std::max(m, std::abs(values_[i] - other.values_[i]));
    return m;
  }

  double energy() const {
    double e = 0.0;
    for (const auto& v : values_) e += std::norm(v);
    return e;
  }

 private:
  int band_limit_ = 0;
  int spin_ = 0;
  std::vector<cplx> values_;
};

struct SphereMap {
  SphereGrid grid;
  int spin = 0;
  std::vector<cplx> values;  // theta-major: i_theta * (2L-1) + i_phi

  cplx& at(int i_theta, int i_phi) {
    return values[static_cast<std::size_t>(i_theta) * grid.n_phi() + i_phi];
  }
  const cplx& at(int i_theta, int i_phi) const {
    return values[static_cast<std::size_t>(i_theta) * grid.n_phi() + i_phi];
  }
};

namespace detail {

// Per-(theta, m) basis column: t[l] = (-1)^s sqrt((2l+1)/4pi) d^l_{m,-s}(theta),
// so that sY_{lm}(theta, phi) = t[l] exp(i m phi).
inline void sht_basis_column(int m, int spin, double theta, int coeff_L, double* t) {
  wigner_d_run(m, -spin, theta, coeff_L, t);
  const double sign = (spin % 2 == 0) ? 1.0 : -1.0;
  for (int l = 0; l < coeff_L; ++l) t[l] *= sign * std::sqrt((2.0 * l + 1.0) / (4.0 * pi));
}

// ColumnFn(i_theta, m) -> const double* basis column of length coeffs.band_limit().
template <typename ColumnFn>
SphereMap sht_inverse_impl(const HarmonicCoeffs& coeffs, const SphereGrid& grid, ColumnFn&& col) {
  const int L = coeffs.band_limit();
  const int n_phi = grid.n_phi();
  SphereMap map;
  map.grid = grid;
  map.spin = coeffs.spin();
  map.values.assign(static_cast<std::size_t>(grid.band_limit) * n_phi, cplx(0.0, 0.0));
  std::vector<cplx> row(n_phi);
  for (int i = 0; i < grid.band_limit; ++i) {
    std::fill(row.begin(), row.end(), cplx(0.0, 0.0));
    for (int m = -(L - 1); m < L; ++m) {
      const double* t = col(i, m);
      cplx g(0.0, 0.0);
      const int l_start = std::max(std::abs(m), std::abs(coeffs.spin()));
      for (int l = l_start; l < L; ++l) g += t[l] * coeffs.at(l, m);
      row[(m + n_phi) % n_phi] = g;
    }
    fft(row.data(), n_phi, +1);
    for (int k = 0; k < n_phi; ++k) map.at(i, k) = row[k];
  }
  return map;
}

template <typename ColumnFn>
HarmonicCoeffs sht_forward_impl(const SphereMap& map, int out_L, ColumnFn&& col) {
  const SphereGrid& grid = map.grid;
  const int n_phi = grid.n_phi();
  const double phi_weight = 2.0 * pi / n_phi;
  HarmonicCoeffs coeffs(out_L, map.spin);
  std::vector<cplx> row(n_phi);
  for (int i = 0; i < grid.band_limit; ++i) {
    for (int k = 0; k < n_phi; ++k) row[k] = map.at(i, k);
    fft(row.data(), n_phi, -1);
    for (int m = -(out_L - 1); m < out_L; ++m) {
      const cplx f = row[(m + n_phi) % n_phi] * (phi_weight * grid.weight[i]);
      const double* t = col(i, m);
      const int l_start = std::max(std::abs(m), std::abs(map.spin));
      for (int l = l_start; l < out_L; ++l) coeffs.at(l, m) += t[l] * f;
    }
  }
  return coeffs;
}

}  // namespace detail

// Precomputed Wigner tables for repeated transforms on one grid; produces
// results bit-identical to the direct entry points below.
class ShtPlan {
 public:
  ShtPlan(SphereGrid grid, int spin, int coeff_L)
      : grid_(std::move(grid)), spin_(spin), coeff_L_(coeff_L) {
    require(coeff_L_ >= 1 && coeff_L_ <= grid_.band_limit,
            "ShtPlan: coefficient band limit must be in [1, grid L]");
    require(std::abs(spin_) < coeff_L_, "ShtPlan: |spin| must be < band limit");
    const int n_m = 2 * coeff_L_ - 1;
    table_.resize(static_cast<std::size_t>(grid_.band_limit) * n_m * coeff_L_);
    for (int i = 0; i < grid_.band_limit; ++i)
      for (int m = -(coeff_L_ - 1); m < coeff_L_; ++m)
        detail::sht_basis_column(m, spin_, grid_.theta[i], coeff_L_, column(i, m));
  }

  const SphereGrid& grid() const { return grid_; }
  int spin() const { return spin_; }
  int coeff_band_limit() const { return coeff_L_; }

  SphereMap inverse(const HarmonicCoeffs& coeffs) const {
    require(coeffs.band_limit() == coeff_L_ && coeffs.spin() == spin_,
            "ShtPlan::inverse: coefficient layout mismatch");
    return detail::sht_inverse_impl(coeffs, grid_, [&](int i, int m) { return column(i, m); });
  }

  HarmonicCoeffs forward(const SphereMap& map) const {
    require(map.grid.band_limit == grid_.band_limit && map.spin == spin_,
            "ShtPlan::forward: map layout mismatch");
    return detail::sht_forward_impl(map, coeff_L_, [&](int i, int m) { return column(i, m); });
  }

 private:
  double* column(int i, int m) {
    return table_.data() +
           (static_cast<std::size_t>(i) * (2 * coeff_L_ - 1) + (m + coeff_L_ - 1)) * coeff_L_;
  }
  const double* column(int i, int m) const {
    return table_.data() +
           (static_cast<std::size_t>(i) * (2 * coeff_L_ - 1) + (m + coeff_L_ - 1)) * coeff_L_;
  }

  SphereGrid grid_;
  int spin_ = 0;
  int coeff_L_ = 0;
  std::vector<double> table_;
};

// Pointwise synthesis of band-limited coefficients on the grid; linear in the
// coefficients. Computes basis columns on the fly, so memory stays O(L).
inline SphereMap inverse_sht(const HarmonicCoeffs& coeffs, const SphereGrid& grid) {
  require(coeffs.band_limit() <= grid.band_limit,
          "inverse_sht: coefficient band limit exceeds grid band limit");
  std::vector<double> scratch(coeffs.band_limit());
  return detail::sht_inverse_impl(coeffs, grid, [&](int i, int m) {
    detail::sht_basis_column(m, coeffs.spin(), grid.theta[i], coeffs.band_limit(), scratch.data());
    return scratch.data();
  });
}

// Exact quadrature of <f, sY_{lm}> for any input band-limited at the grid L.
inline HarmonicCoeffs forward_sht(const SphereMap& map) {
  const int L = map.grid.band_limit;
  std::vector<double> scratch(L);
  return detail::sht_forward_impl(map, L, [&](int i, int m) {
    detail::sht_basis_column(m, map.spin, map.grid.theta[i], L, scratch.data());
    return scratch.data();
  });
}

// Quadrature-weighted ||f||^2 over the grid.
inline double map_energy(const SphereMap& map) {
  const int n_phi = map.grid.n_phi();
  const double phi_weight = 2.0 * pi / n_phi;
  double e = 0.0;
  for (int i = 0; i < map.grid.band_limit; ++i) {
    double row = 0.0;
    for (int k = 0; k < n_phi; ++k) row += std::norm(map.at(i, k));
    e += row * map.grid.weight[i] * phi_weight;
  }
  return e;
}

}  // namespace sdw

#endif  // SDW_SHT_HPP
