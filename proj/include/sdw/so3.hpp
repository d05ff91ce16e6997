#ifndef SDW_SO3_HPP
#define SDW_SO3_HPP

// Transforms between Wigner coefficients W_{lmn} and samples on SO(3), with a
// separate azimuthal band limit N so that wavelet-coefficient storage stays
// O(L^2 N). Sampling: 2L-1 equiangular alpha, L Gauss-Legendre beta, 2N-1
// equiangular gamma.

#include <array>

#include "sdw/fft.hpp"
#include "sdw/special_functions.hpp"

namespace sdw {

struct EulerAngles {
  double alpha = 0.0;  // in [0, 2pi)
  double beta = 0.0;   // in [0, pi]
  double gamma = 0.0;  // in [0, 2pi)
};

using Mat3 = std::array<std::array<double, 3>, 3>;

// zyz convention: R(alpha, beta, gamma) = R_z(alpha) R_y(beta) R_z(gamma).
inline Mat3 rotation_matrix(const EulerAngles& e) {
  const double ca = std::cos(e.alpha), sa = std::sin(e.alpha);
  const double cb = std::cos(e.beta), sb = std::sin(e.beta);
  const double cg = std::cos(e.gamma), sg = std::sin(e.gamma);
  return Mat3{{{ca * cb * cg - sa * sg, -ca * cb * sg - sa * cg, ca * sb},
               {sa * cb * cg + ca * sg, -sa * cb * sg + ca * cg, sa * sb},
               {-sb * cg, sb * sg, cb}}};
}

inline Mat3 matmul(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += a[i][k] * b[k][j];
      c[i][j] = s;
    }
  return c;
}

inline Mat3 transpose(const Mat3& a) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c[i][j] = a[j][i];
  return c;
}

inline EulerAngles euler_from_matrix(const Mat3& r) {
  EulerAngles e;
  const double cb = std::min(1.0, std::max(-1.0, r[2][2]));
  e.beta = std::acos(cb);
  if (std::abs(r[0][2]) + std::abs(r[1][2]) > 1e-14) {
    e.alpha = std::atan2(r[1][2], r[0][2]);
    e.gamma = std::atan2(r[2][1], -r[2][0]);
  } else if (cb > 0.0) {
    // beta = 0: only alpha + gamma is defined; fold it into alpha
    e.gamma = 0.0;
    e.alpha = std::atan2(r[1][0], r[0][0]);
  } else {
    // beta = pi: only alpha - gamma is defined; R00 = -cos, R10 = -sin of it
    e.gamma = 0.0;
    e.alpha = std::atan2(-r[1][0], -r[0][0]);
  }
  if (e.alpha < 0.0) e.alpha += 2.0 * pi;
  if (e.gamma < 0.0) e.gamma += 2.0 * pi;
  return e;
}

// Euler angles of R(a)^{-1} R(b); its beta is the separation angle used in
// the correlation bounds.
inline EulerAngles relative_rotation(const EulerAngles& a, const EulerAngles& b) {
  return euler_from_matrix(matmul(transpose(rotation_matrix(a)), rotation_matrix(b)));
}

// D^l_{mn}(rho) = exp(-i m alpha) d^l_{mn}(beta) exp(-i n gamma).
inline cplx wigner_D(int ell, int m, int n, const EulerAngles& rho) {
  std::vector<double> run(ell + 1);
  wigner_d_run(m, n, rho.beta, ell + 1, run.data());
  const cplx pa(std::cos(m * rho.alpha), -std::sin(m * rho.alpha));
  const cplx pg(std::cos(n * rho.gamma), -std::sin(n * rho.gamma));
  return pa * run[ell] * pg;
}

// Coefficients W_{lmn}, l-major, m ascending, n ascending with
// |n| <= min(l, N-1).
class WignerCoeffs {
 public:
  WignerCoeffs() = default;
  WignerCoeffs(int band_limit, int azimuthal_limit)
      : band_limit_(band_limit), azimuthal_limit_(azimuthal_limit) {
    require(band_limit >= 1, "WignerCoeffs: band limit must be >= 1");
    require(azimuthal_limit >= 1 && azimuthal_limit <= band_limit,
            "WignerCoeffs: need 1 <= N <= L");
    offsets_.resize(band_limit + 1);
    std::size_t off = 0;
    for (int l = 0; l < band_limit; ++l) {
      offsets_[l] = off;
      off += static_cast<std::size_t>(2 * l + 1) * (2 * n_max(l) + 1);
    }
    offsets_[band_limit] = off;
    values_.assign(off, cplx(0.0, 0.0));
  }

  int band_limit() const { return band_limit_; }
  int azimuthal_limit() const { return azimuthal_limit_; }
  int n_max(int ell) const { return std::min(ell, azimuthal_limit_ - 1); }

  std::size_t index(int ell, int m, int n) const {
    const int nm = n_max(ell);
    return offsets_[ell] + static_cast<std::size_t>(m + ell) * (2 * nm + 1) + (n + nm);
  }
  cplx& at(int ell, int m, int n) { return values_[index(ell, m, n)]; }
  const cplx& at(int ell, int m, int n) const { return values_[index(ell, m, n)]; }

  std::vector<cplx>& values() { return values_; }
  const std::vector<cplx>& values() const { return values_; }

  double max_abs_diff(const WignerCoeffs& other) const {
    require(band_limit_ == other.band_limit_ && azimuthal_limit_ == other.azimuthal_limit_,
            "max_abs_diff: layout mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i)
      m = std::max(m, std::abs(values_[i] - other.values_[i]));
    return m;
  }

  // sum over lmn of 8pi^2/(2l+1) |W_{lmn}|^2: the SO(3) Parseval energy.
  double energy() const {
    double e = 0.0;
    for (int l = 0; l < band_limit_; ++l) {
      double block = 0.0;
      for (std::size_t i = offsets_[l]; i < offsets_[l + 1]; ++i) block += std::norm(values_[i]);
      e += block * 8.0 * pi * pi / (2.0 * l + 1.0);
    }
    return e;
  }

 private:
  int band_limit_ = 0;
  int azimuthal_limit_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<cplx> values_;
};

struct SO3Grid {
  int band_limit = 0;      // L
  int azimuthal_limit = 0; // N
  std::vector<double> beta;    // L Gauss-Legendre nodes, ascending
  std::vector<double> weight;  // in d(cos beta), sum 2

  int n_alpha() const { return 2 * band_limit - 1; }
  int n_gamma() const { return 2 * azimuthal_limit - 1; }
  double alpha(int a) const { return 2.0 * pi * a / n_alpha(); }
  double gamma(int c) const { return 2.0 * pi * c / n_gamma(); }
  std::size_t size() const {
    return static_cast<std::size_t>(n_alpha()) * band_limit * n_gamma();
  }

  static SO3Grid make(int L, int N) {
    require(L >= 1 && N >= 1 && N <= L, "SO3Grid: need 1 <= N <= L");
    SO3Grid g;
    g.band_limit = L;
    g.azimuthal_limit = N;
    std::vector<double> x, w;
    gauss_legendre(L, x, w);
    g.beta.resize(L);
    g.weight.resize(L);
    for (int i = 0; i < L; ++i) {
      g.beta[i] = std::acos(x[i]);
      g.weight[i] = w[i];
    }
    return g;
  }
};

struct SO3Map {
  SO3Grid grid;
  std::vector<cplx> values;  // alpha-major -> beta -> gamma

  std::size_t index(int ia, int ib, int ic) const {
    return (static_cast<std::size_t>(ia) * grid.band_limit + ib) * grid.n_gamma() + ic;
  }
  cplx& at(int ia, int ib, int ic) { return values[index(ia, ib, ic)]; }
  const cplx& at(int ia, int ib, int ic) const { return values[index(ia, ib, ic)]; }
};

namespace detail {

template <typename ColumnFn>
SO3Map so3_inverse_impl(const WignerCoeffs& w, const SO3Grid& grid, ColumnFn&& col) {
  const int L = w.band_limit();
  const int N = w.azimuthal_limit();
  const int na = grid.n_alpha();
  const int ng = grid.n_gamma();
  SO3Map map;
  map.grid = grid;
  map.values.assign(grid.size(), cplx(0.0, 0.0));
  std::vector<cplx> slab(static_cast<std::size_t>(na) * ng);
  std::vector<cplx> line(na);
  for (int ib = 0; ib < grid.band_limit; ++ib) {
    std::fill(slab.begin(), slab.end(), cplx(0.0, 0.0));
    for (int n = -(N - 1); n < N; ++n) {
      for (int m = -(L - 1); m < L; ++m) {
        const double* t = col(ib, m, n);
        cplx h(0.0, 0.0);
        for (int l = std::max(std::abs(m), std::abs(n)); l < L; ++l) h += t[l] * w.at(l, m, n);
        slab[static_cast<std::size_t>((m + na) % na) * ng + ((n + ng) % ng)] = h;
      }
    }
    // alpha transform down the columns, gamma transform along the rows
    for (int c = 0; c < ng; ++c) {
      for (int a = 0; a < na; ++a) line[a] = slab[static_cast<std::size_t>(a) * ng + c];
      fft(line.data(), na, +1);
      for (int a = 0; a < na; ++a) slab[static_cast<std::size_t>(a) * ng + c] = line[a];
    }
    for (int a = 0; a < na; ++a) fft(slab.data() + static_cast<std::size_t>(a) * ng, ng, +1);
    for (int a = 0; a < na; ++a)
      for (int c = 0; c < ng; ++c) map.at(a, ib, c) = slab[static_cast<std::size_t>(a) * ng + c];
  }
  return map;
}

template <typename ColumnFn>
WignerCoeffs so3_forward_impl(const SO3Map& map, ColumnFn&& col) {
  const SO3Grid& grid = map.grid;
  const int L = grid.band_limit;
  const int N = grid.azimuthal_limit;
  const int na = grid.n_alpha();
  const int ng = grid.n_gamma();
  const double ang_weight = (2.0 * pi / na) * (2.0 * pi / ng);
  WignerCoeffs w(L, N);
  std::vector<cplx> slab(static_cast<std::size_t>(na) * ng);
  std::vector<cplx> line(na);
  for (int ib = 0; ib < L; ++ib) {
    for (int a = 0; a < na; ++a)
      for (int c = 0; c < ng; ++c) slab[static_cast<std::size_t>(a) * ng + c] = map.at(a, ib, c);
    for (int c = 0; c < ng; ++c) {
      for (int a = 0; a < na; ++a) line[a] = slab[static_cast<std::size_t>(a) * ng + c];
      fft(line.data(), na, -1);
      for (int a = 0; a < na; ++a) slab[static_cast<std::size_t>(a) * ng + c] = line[a];
    }
    for (int a = 0; a < na; ++a) fft(slab.data() + static_cast<std::size_t>(a) * ng, ng, -1);
    const double bw = ang_weight * grid.weight[ib];
    for (int n = -(N - 1); n < N; ++n) {
      for (int m = -(L - 1); m < L; ++m) {
        const cplx f = slab[static_cast<std::size_t>((m + na) % na) * ng + ((n + ng) % ng)] * bw;
        const double* t = col(ib, m, n);
        for (int l = std::max(std::abs(m), std::abs(n)); l < L; ++l) w.at(l, m, n) += t[l] * f;
      }
    }
  }
  return w;
}

// t[l] = d^l_{mn}(beta) for the inverse; the forward applies the
// (2l+1)/(8pi^2) orthogonality factor on top.
inline void so3_basis_column(int m, int n, double beta, int L, double* t) {
  wigner_d_run(m, n, beta, L, t);
}

inline void so3_forward_column(int m, int n, double beta, int L, double* t) {
  wigner_d_run(m, n, beta, L, t);
  for (int l = 0; l < L; ++l) t[l] *= (2.0 * l + 1.0) / (8.0 * pi * pi);
}

}  // namespace detail

// Precomputed d^l_{mn}(beta_i) tables for repeated transforms on one grid.
class So3Plan {
 public:
  explicit So3Plan(SO3Grid grid) : grid_(std::move(grid)) {
    const int L = grid_.band_limit;
    const int N = grid_.azimuthal_limit;
    const std::size_t n_cols =
        static_cast<std::size_t>(L) * (2 * N - 1) * (2 * L - 1);
    table_.resize(n_cols * L);
    for (int ib = 0; ib < L; ++ib)
      for (int n = -(N - 1); n < N; ++n)
        for (int m = -(L - 1); m < L; ++m)
          detail::so3_basis_column(m, n, grid_.beta[ib], L, column(ib, m, n));
  }

  const SO3Grid& grid() const { return grid_; }

  SO3Map inverse(const WignerCoeffs& w) const {
    require(w.band_limit() == grid_.band_limit && w.azimuthal_limit() == grid_.azimuthal_limit,
            "So3Plan::inverse: layout mismatch");
    return detail::so3_inverse_impl(w, grid_, [&](int ib, int m, int n) { return column(ib, m, n); });
  }

  WignerCoeffs forward(const SO3Map& map) const {
    require(map.grid.band_limit == grid_.band_limit &&
                map.grid.azimuthal_limit == grid_.azimuthal_limit,
            "So3Plan::forward: layout mismatch");
    std::vector<double> scratch(grid_.band_limit);
    return detail::so3_forward_impl(map, [&](int ib, int m, int n) {
      const double* t = column(ib, m, n);
      for (int l = 0; l < grid_.band_limit; ++l)
        scratch[l] = t[l] * ((2.0 * l + 1.0) / (8.0 * pi * pi));
      return scratch.data();
    });
  }

 private:
  const double* column(int ib, int m, int n) const {
    const int L = grid_.band_limit;
    const int N = grid_.azimuthal_limit;
    return table_.data() +
           ((static_cast<std::size_t>(ib) * (2 * N - 1) + (n + N - 1)) * (2 * L - 1) +
            (m + L - 1)) *
               L;
  }
  double* column(int ib, int m, int n) {
    return const_cast<double*>(static_cast<const So3Plan*>(this)->column(ib, m, n));
  }

  SO3Grid grid_;
  std::vector<double> table_;
};

// f(rho) = sum_{lmn} W_{lmn} D^{l*}_{mn}(rho), FFT-separated in alpha and
// gamma with per-beta Wigner-d columns.
inline SO3Map inverse_so3(const WignerCoeffs& w, const SO3Grid& grid) {
  require(w.band_limit() == grid.band_limit && w.azimuthal_limit() == grid.azimuthal_limit,
          "inverse_so3: layout mismatch");
  std::vector<double> scratch(grid.band_limit);
  return detail::so3_inverse_impl(w, grid, [&](int ib, int m, int n) {
    detail::so3_basis_column(m, n, grid.beta[ib], grid.band_limit, scratch.data());
    return scratch.data();
  });
}

inline SO3Map inverse_so3(const WignerCoeffs& w) {
  return inverse_so3(w, SO3Grid::make(w.band_limit(), w.azimuthal_limit()));
}

// W_{lmn} = (2l+1)/(8pi^2) <f, D^{l*}_{mn}>; exact for band-limited inputs
// because d^l d^{l'} is a polynomial of degree l+l' <= 2L-2 in cos(beta).
inline WignerCoeffs forward_so3(const SO3Map& map) {
  std::vector<double> scratch(map.grid.band_limit);
  return detail::so3_forward_impl(map, [&](int ib, int m, int n) {
    detail::so3_forward_column(m, n, map.grid.beta[ib], map.grid.band_limit, scratch.data());
    return scratch.data();
  });
}

// Quadrature-weighted sum of |f|^2 over the SO(3) grid.
inline double so3_map_energy(const SO3Map& map) {
  const SO3Grid& g = map.grid;
  const double ang_weight = (2.0 * pi / g.n_alpha()) * (2.0 * pi / g.n_gamma());
  double e = 0.0;
  for (int ib = 0; ib < g.band_limit; ++ib) {
    double acc = 0.0;
    for (int a = 0; a < g.n_alpha(); ++a)
      for (int c = 0; c < g.n_gamma(); ++c) acc += std::norm(map.at(a, ib, c));
    e += acc * g.weight[ib] * ang_weight;
  }
  return e;
}

}  // namespace sdw

#endif  // SDW_SO3_HPP
