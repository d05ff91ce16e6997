#ifndef SDW_SPECIAL_FUNCTIONS_HPP
#define SDW_SPECIAL_FUNCTIONS_HPP

// Legendre polynomials, associated Legendre functions, Wigner d-functions and
// spin spherical harmonics. Everything rests on one primitive: a degree
// recursion for d^l_{mn}(beta) run in scaled arithmetic, seeded at
// l = max(|m|,|n|) with the half-angle closed form.

#include "sdw/core.hpp"
#include "sdw/quadrature.hpp"

namespace sdw {

inline double legendre_poly(int ell, double x) {
  require(ell >= 0, "legendre_poly: ell must be >= 0");
  if (std::abs(x) > 1.0) throw config_error("legendre_poly: |x| > 1");
  if (ell == 0) return 1.0;
  double p0 = 1.0, p1 = x;
  for (int k = 1; k < ell; ++k) {
    const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

namespace detail {

// Mantissa-exponent pair; keeps the degree recursion alive where the
// half-angle seed dips far below the double underflow threshold.
struct Scaled {
  double mant = 0.0;
  int exp2 = 0;

  double value() const { return (mant == 0.0) ? 0.0 : std::ldexp(mant, exp2); }

  void renorm() {
    if (mant == 0.0) {
      exp2 = 0;
      return;
    }
    int e = 0;
    mant = std::frexp(mant, &e);  // mant in [0.5, 1)
    exp2 += e;
  }
};

// d^{l0}_{mn}(beta) at the boundary degree l0 = max(|m|,|n|), computed in
// log space.
inline Scaled wigner_seed(int m, int n, double beta) {
  const int j = std::max(std::abs(m), std::abs(n));
  int p_cos = 0, q_sin = 0, a = 0;
  double sign = 1.0;
  if (std::abs(m) >= std::abs(n)) {
    a = n;
    if (m >= 0) {  // d^j_{j n}
      p_cos = j + n;
      q_sin = j - n;
      sign = ((j - n) % 2 == 0) ? 1.0 : -1.0;
    } else {  // d^j_{-j n}
      p_cos = j - n;
      q_sin = j + n;
    }
  } else {
    a = m;
    if (n >= 0) {  // d^j_{m j}
      p_cos = j + m;
      q_sin = j - m;
    } else {  // d^j_{m -j}
      p_cos = j - m;
      q_sin = j + m;
      sign = ((j + m) % 2 == 0) ? 1.0 : -1.0;
    }
  }
  const double ch = std::cos(0.5 * beta);
  const double sh = std::sin(0.5 * beta);
  Scaled out;
  if ((ch == 0.0 && p_cos > 0) || (sh == 0.0 && q_sin > 0)) return out;  // exact zero
  double lg = 0.5 * (std::lgamma(2.0 * j + 1.0) - std::lgamma(j + a + 1.0) -
                     std::lgamma(j - a + 1.0));
  if (p_cos > 0) lg += p_cos * std::log(ch);
  if (q_sin > 0) lg += q_sin * std::log(sh);
  const double lg2 = lg / std::log(2.0);
  const double e = std::floor(lg2);
  out.mant = sign * std::exp2(lg2 - e);
  out.exp2 = static_cast<int>(e);
  return out;
}

}  // namespace detail

// Fills out[l] = d^l_{mn}(beta) for l in [0, ell_count); entries below
// max(|m|,|n|) are zero. Stable to degrees of a few thousand.
inline void wigner_d_run(int m, int n, double beta, int ell_count, double* out) {
  for (int l = 0; l < ell_count; ++l) out[l] = 0.0;
  const int l0 = std::max(std::abs(m), std::abs(n));
  if (l0 >= ell_count) return;
  if (beta == 0.0) {  // d^l_{mn}(0) = delta_{mn}, exactly
    if (m == n)
      for (int l = l0; l < ell_count; ++l) out[l] = 1.0;
    return;
  }

  detail::Scaled curr = detail::wigner_seed(m, n, beta);
  detail::Scaled prev;  // d^{l0-1}, multiplied by zero on the first step
  prev.exp2 = curr.exp2;
  out[l0] = curr.value();
  // An exactly zero seed happens only at beta = 0 with m != n, where the
  // whole run is the structural zero d^l_{mn}(0) = delta_{mn}.
  if (curr.mant == 0.0) return;

  const double x = std::cos(beta);
  for (int l = l0; l + 1 < ell_count; ++l) {
    double next_mant;
    if (l == 0) {
      next_mant = x * curr.mant;  // d^1_{00} = cos(beta)
    } else {
      const double dl = static_cast<double>(l);
      const double den =
          dl * std::sqrt(((dl + 1.0) * (dl + 1.0) - m * m) * ((dl + 1.0) * (dl + 1.0) - n * n));
      const double c1 = (2.0 * dl + 1.0) * (dl * (dl + 1.0) * x - m * n) / den;
      const double c2 = (dl + 1.0) * std::sqrt((dl * dl - m * m) * (dl * dl - n * n)) / den;
      next_mant = c1 * curr.mant - c2 * prev.mant;
    }
    prev.mant = curr.mant;
    curr.mant = next_mant;
    const double am = std::abs(curr.mant);
    if (am > 0x1p500 || (am > 0.0 && am < 0x1p-500)) {
      int e = 0;
      const double f = std::frexp(curr.mant, &e);
      curr.mant = f;
      prev.mant = std::ldexp(prev.mant, -e);
      curr.exp2 += e;
    }
    out[l + 1] = curr.value();
  }
}

inline std::vector<double> wigner_d_run(int m, int n, double beta, int ell_count) {
  std::vector<double> out(ell_count, 0.0);
  wigner_d_run(m, n, beta, ell_count, out.data());
  return out;
}

// Full (2l+1) x (2l+1) table of d^l_{mn}(beta).
struct WignerDSlice {
  int ell = 0;
  double beta = 0.0;
  std::vector<double> values;  // (m+l)*(2l+1) + (n+l)

  double at(int m, int n) const {
    return values[static_cast<std::size_t>(m + ell) * (2 * ell + 1) + (n + ell)];
  }
};

inline WignerDSlice wigner_d_slice(int ell, double beta) {
  require(ell >= 0, "wigner_d_slice: ell must be >= 0");
  require(beta >= 0.0 && beta <= pi, "wigner_d_slice: beta must lie in [0, pi]");
  WignerDSlice s;
  s.ell = ell;
  s.beta = beta;
  s.values.assign(static_cast<std::size_t>(2 * ell + 1) * (2 * ell + 1), 0.0);
  std::vector<double> run(ell + 1);
  for (int m = -ell; m <= ell; ++m) {
    for (int n = -ell; n <= ell; ++n) {
      wigner_d_run(m, n, beta, ell + 1, run.data());
      s.values[static_cast<std::size_t>(m + ell) * (2 * ell + 1) + (n + ell)] = run[ell];
    }
  }
  return s;
}

// sqrt((2l+1)/(4pi) * (l-m)!/(l+m)!) * P_l^m(cos theta); the fully
// normalized form that stays bounded at any degree.
inline double normalized_assoc_legendre(int ell, int m, double theta) {
  require(ell >= 0 && m >= 0 && m <= ell, "normalized_assoc_legendre: need 0 <= m <= ell");
  std::vector<double> run(ell + 1);
  wigner_d_run(m, 0, theta, ell + 1, run.data());
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  return sign * std::sqrt((2.0 * ell + 1.0) / (4.0 * pi)) * run[ell];
}

// P_l^m(cos theta) = sin^m(theta) d^m/d(cos theta)^m P_l(cos theta).
// Denormalized from the stable recursion; the value itself overflows double
// range once l and m are both large, which is inherent to this convention.
inline double assoc_legendre(int ell, int m, double theta) {
  require(ell >= 0, "assoc_legendre: ell must be >= 0");
  if (m < 0 || m > ell) throw config_error("assoc_legendre: need 0 <= m <= ell");
  const double norm = normalized_assoc_legendre(ell, m, theta);
  const double lg =
      0.5 * (std::lgamma(ell + m + 1.0) - std::lgamma(ell - m + 1.0)) +
      0.5 * std::log(4.0 * pi / (2.0 * ell + 1.0));
  return norm * std::exp(lg);
}

// sY_{lm}(theta, phi) = (-1)^s sqrt((2l+1)/4pi) D^{l*}_{m,-s}(phi, theta, 0),
// reducing to the scalar harmonic with the Condon-Shortley phase at s = 0.
inline cplx spin_sph_harm(int ell, int m, int s, double theta, double phi) {
  require(ell >= 0, "spin_sph_harm: ell must be >= 0");
  if (std::abs(m) > ell) throw config_error("spin_sph_harm: |m| > ell");
  if (std::abs(s) > ell) throw config_error("spin_sph_harm: |s| > ell");
  std::vector<double> run(ell + 1);
  wigner_d_run(m, -s, theta, ell + 1, run.data());
  const double sign = (s % 2 == 0) ? 1.0 : -1.0;
  const double amp = sign * std::sqrt((2.0 * ell + 1.0) / (4.0 * pi)) * run[ell];
  return amp * cplx(std::cos(m * phi), std::sin(m * phi));
}

// --- Mehler-Dirichlet integral representation ------------------------------

enum class MehlerDirichletKernel {
  classical,   // sin((l + 1/2) phi)
  as_printed,  // sin(l (phi + 1/2))
};

// (sqrt(2)/pi) Integral_theta^pi K(phi) / sqrt(cos theta - cos phi) dphi.
// The inverse-square-root endpoint singularity at phi = theta is removed by
// the substitution cos phi = cos theta - u^2; the remainder of the range is
// integrated directly. Adaptive Simpson at 1e-8 on both pieces.
inline double mehler_dirichlet_legendre(int ell, double theta,
                                        MehlerDirichletKernel kind) {
  require(ell >= 0, "mehler_dirichlet_legendre: ell must be >= 0");
  require(theta > 0.0 && theta < pi, "mehler_dirichlet_legendre: theta must lie in (0, pi)");
  const auto kernel = [&](double phi) {
    return (kind == MehlerDirichletKernel::classical)
               ? std::sin((ell + 0.5) * phi)
               : std::sin(ell * (phi + 0.5));
  };
  const double ct = std::cos(theta);
  const double phi_mid = 0.5 * (theta + pi);
  const double u_mid = std::sqrt(ct - std::cos(phi_mid));

  const auto lower = [&](double u) {
    double c = ct - u * u;
    c = std::min(1.0, std::max(-1.0, c));
    const double phi = std::acos(c);
    return 2.0 * kernel(phi) / std::sin(phi);
  };
  const auto upper = [&](double phi) { return kernel(phi) / std::sqrt(ct - std::cos(phi)); };

  const double part1 = adaptive_simpson(lower, 0.0, u_mid, 1e-8);
  const double part2 = adaptive_simpson(upper, phi_mid, pi, 1e-8);
  return std::sqrt(2.0) / pi * (part1 + part2);
}

}  // namespace sdw

#endif  // SDW_SPECIAL_FUNCTIONS_HPP
