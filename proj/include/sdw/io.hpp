#ifndef SDW_IO_HPP
#define SDW_IO_HPP

// File formats. Binary containers use a 7-byte ASCII magic followed by
// little-endian u32/i32 header fields and raw complex float64 payloads:
//   SDWMAP1: magic, u32 L, i32 spin, u32 grid_kind (1 = Gauss-Legendre),
//            then L x (2L-1) complex samples, theta-major.
//   SDWALM1: magic, u32 L, i32 spin, then l-major m-ascending coefficients.
//   SDWSO31: magic, u32 L, u32 N, then l-major, m-ascending, n-ascending
//            coefficients with |n| <= min(l, N-1).
// CSV exports carry figure data; all floats print as %.17g so identical
// configurations produce identical bytes.

#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

#include "sdw/so3.hpp"
#include "sdw/transform.hpp"

namespace sdw {
namespace detail {

inline void write_bytes(std::ostream& out, const void* p, std::size_t n) {
  out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

inline void read_bytes(std::istream& in, void* p, std::size_t n, const std::string& what) {
  in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n)
    throw data_error("truncated file while reading " + what);
}

inline void write_u32(std::ostream& out, std::uint32_t v) { write_bytes(out, &v, 4); }
inline void write_i32(std::ostream& out, std::int32_t v) { write_bytes(out, &v, 4); }

inline std::uint32_t read_u32(std::istream& in, const std::string& what) {
  std::uint32_t v = 0;
  read_bytes(in, &v, 4, what);
  return v;
}
inline std::int32_t read_i32(std::istream& in, const std::string& what) {
  std::int32_t v = 0;
  read_bytes(in, &v, 4, what);
  return v;
}

inline void expect_magic(std::istream& in, const char* magic) {
  char buf[8] = {};
  read_bytes(in, buf, 7, "magic");
  if (std::memcmp(buf, magic, 7) != 0)
    throw data_error(std::string("bad magic; expected ") + magic);
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot open for writing: " + path);
  return out;
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open for reading: " + path);
  return in;
}

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

inline void write_map(const std::string& path, const SphereMap& map) {
  auto out = detail::open_out(path);
  detail::write_bytes(out, "SDWMAP1", 7);
  detail::write_u32(out, static_cast<std::uint32_t>(map.grid.band_limit));
  detail::write_i32(out, static_cast<std::int32_t>(map.spin));
  detail::write_u32(out, 1u);  // grid kind: Gauss-Legendre
  detail::write_bytes(out, map.values.data(), map.values.size() * sizeof(cplx));
  if (!out) throw data_error("write failed: " + path);
}

inline SphereMap read_map(const std::string& path) {
  auto in = detail::open_in(path);
  detail::expect_magic(in, "SDWMAP1");
  const auto L = detail::read_u32(in, "band limit");
  const auto spin = detail::read_i32(in, "spin");
  const auto kind = detail::read_u32(in, "grid kind");
  if (L < 1 || L > (1u << 20)) throw data_error("implausible band limit in " + path);
  if (kind != 1) throw data_error("unsupported grid kind in " + path);
  SphereMap map;
  map.grid = SphereGrid::make(static_cast<int>(L));
  map.spin = static_cast<int>(spin);
  map.values.resize(static_cast<std::size_t>(L) * (2 * L - 1));
  detail::read_bytes(in, map.values.data(), map.values.size() * sizeof(cplx), "map samples");
  return map;
}

inline void write_alm(const std::string& path, const HarmonicCoeffs& coeffs) {
  auto out = detail::open_out(path);
  detail::write_bytes(out, "SDWALM1", 7);
  detail::write_u32(out, static_cast<std::uint32_t>(coeffs.band_limit()));
  detail::write_i32(out, static_cast<std::int32_t>(coeffs.spin()));
  detail::write_bytes(out, coeffs.values().data(), coeffs.values().size() * sizeof(cplx));
  if (!out) throw data_error("write failed: " + path);
}

inline HarmonicCoeffs read_alm(const std::string& path) {
  auto in = detail::open_in(path);
  detail::expect_magic(in, "SDWALM1");
  const auto L = detail::read_u32(in, "band limit");
  const auto spin = detail::read_i32(in, "spin");
  if (L < 1 || L > (1u << 20)) throw data_error("implausible band limit in " + path);
  HarmonicCoeffs coeffs(static_cast<int>(L), static_cast<int>(spin));
  detail::read_bytes(in, coeffs.values().data(), coeffs.values().size() * sizeof(cplx),
                     "coefficients");
  return coeffs;
}

inline void write_wigner(const std::string& path, const WignerCoeffs& w) {
  auto out = detail::open_out(path);
  detail::write_bytes(out, "SDWSO31", 7);
  detail::write_u32(out, static_cast<std::uint32_t>(w.band_limit()));
  detail::write_u32(out, static_cast<std::uint32_t>(w.azimuthal_limit()));
  detail::write_bytes(out, w.values().data(), w.values().size() * sizeof(cplx));
  if (!out) throw data_error("write failed: " + path);
}

inline WignerCoeffs read_wigner(const std::string& path) {
  auto in = detail::open_in(path);
  detail::expect_magic(in, "SDWSO31");
  const auto L = detail::read_u32(in, "band limit");
  const auto N = detail::read_u32(in, "azimuthal limit");
  if (L < 1 || L > (1u << 20) || N < 1 || N > L)
    throw data_error("implausible header in " + path);
  WignerCoeffs w(static_cast<int>(L), static_cast<int>(N));
  detail::read_bytes(in, w.values().data(), w.values().size() * sizeof(cplx), "coefficients");
  return w;
}

// Columns: ell, scaling^2, kappa^2 per scale, and their sum (the tiling plot).
inline void write_tiling_csv(std::ostream& out, const KernelSet& kernels,
                             const DirectionalityComponent* dir = nullptr) {
  out << "ell,scaling_sq";
  for (int j = kernels.config.j_min; j <= kernels.config.j_max; ++j) out << ",kappa" << j << "_sq";
  out << ",sum\n";
  for (int ell = 0; ell < kernels.config.band_limit; ++ell) {
    const double norm = dir ? dir->row_norm(ell) : 1.0;
    double total = kernels.scaling[ell] * kernels.scaling[ell];
    out << ell << ',' << detail::fmt_double(total);
    for (const auto& row : kernels.kappa) {
      const double v = row[ell] * row[ell];
      total += v * norm;
      out << ',' << detail::fmt_double(v);
    }
    out << ',' << detail::fmt_double(total) << '\n';
  }
}

// Columns: lag, normalized autocorrelation, cos^{N-1} reference.
inline void write_autocorrelation_csv(std::ostream& out, const std::vector<double>& lags,
                                      const std::vector<double>& gamma, int azimuthal_limit) {
  out << "dgamma,gamma_normalized,cos_power_reference\n";
  const double g0 = gamma.empty() ? 1.0 : gamma[0];
  for (std::size_t i = 0; i < lags.size(); ++i) {
    const double ref = std::pow(std::cos(lags[i]), azimuthal_limit - 1);
    out << detail::fmt_double(lags[i]) << ',' << detail::fmt_double(gamma[i] / g0) << ','
        << detail::fmt_double(ref) << '\n';
  }
}

// Columns: theta, phi, re, im. One row per grid sample.
inline void write_map_slice_csv(std::ostream& out, const SphereMap& map) {
  out << "theta,phi,re,im\n";
  for (int i = 0; i < map.grid.band_limit; ++i)
    for (int k = 0; k < map.grid.n_phi(); ++k) {
      const cplx v = map.at(i, k);
      out << detail::fmt_double(map.grid.theta[i]) << ',' << detail::fmt_double(map.grid.phi(k))
          << ',' << detail::fmt_double(v.real()) << ',' << detail::fmt_double(v.imag()) << '\n';
    }
}

// One gamma-orientation slice of an SO(3) map; beta plays colatitude and
// alpha longitude.
inline void write_so3_slice_csv(std::ostream& out, const SO3Map& map, int i_gamma) {
  out << "theta,phi,re,im\n";
  for (int ib = 0; ib < map.grid.band_limit; ++ib)
    for (int ia = 0; ia < map.grid.n_alpha(); ++ia) {
      const cplx v = map.at(ia, ib, i_gamma);
      out << detail::fmt_double(map.grid.beta[ib]) << ',' << detail::fmt_double(map.grid.alpha(ia))
          << ',' << detail::fmt_double(v.real()) << ',' << detail::fmt_double(v.imag()) << '\n';
    }
}

}  // namespace sdw

#endif  // SDW_IO_HPP
