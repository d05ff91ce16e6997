#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sdw/sht.hpp"
#include "test_helpers.hpp"

using sdw::cplx;
using sdw::pi;
using sdw_test::random_coeffs;

TEST_CASE("grid quadrature is exact for band-limited integrands") {
  const auto grid = sdw::SphereGrid::make(24);
  double sum = 0.0;
  for (const double w : grid.weight) sum += w;
  CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
  // integral of P_l(cos theta) over the sphere vanishes for l >= 1
  for (const int ell : {1, 5, 23}) {
    double acc = 0.0;
    for (int i = 0; i < grid.band_limit; ++i)
      acc += grid.weight[i] * sdw::legendre_poly(ell, std::cos(grid.theta[i]));
    CHECK(std::abs(acc) < 1e-13);
  }
}

TEST_CASE("inverse of the constant coefficient gives the unit map") {
  const auto grid = sdw::SphereGrid::make(8);
  sdw::HarmonicCoeffs f(8, 0);
  f.at(0, 0) = std::sqrt(4.0 * pi);
  const auto map = sdw::inverse_sht(f, grid);
  for (const auto& v : map.values) {
    CHECK(v.real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(v.imag()) < 1e-15);
  }
}

TEST_CASE("inverse of zeros is the zero map") {
  const auto grid = sdw::SphereGrid::make(6);
  const auto map = sdw::inverse_sht(sdw::HarmonicCoeffs(6, 0), grid);
  for (const auto& v : map.values) CHECK(v == cplx(0.0, 0.0));
}

TEST_CASE("round trip is the identity at 1e-12 for several L and spins") {
  for (const int L : {16, 64, 128}) {
    for (const int s : {0, 2, -2}) {
      const auto f = random_coeffs(L, s, 1000 + L + s);
      const auto grid = sdw::SphereGrid::make(L);
      const auto back = sdw::forward_sht(sdw::inverse_sht(f, grid));
      CAPTURE(L);
      CAPTURE(s);
      CHECK(back.max_abs_diff(f) < 1e-12);
    }
  }
}

TEST_CASE("forward of a pointwise-evaluated harmonic picks out its coefficient") {
  const int L = 8;
  const auto grid = sdw::SphereGrid::make(L);
  for (const int s : {0, 1}) {
    sdw::SphereMap map;
    map.grid = grid;
    map.spin = s;
    map.values.resize(static_cast<std::size_t>(L) * grid.n_phi());
    for (int i = 0; i < L; ++i)
      for (int k = 0; k < grid.n_phi(); ++k)
        map.at(i, k) = sdw::spin_sph_harm(3, 2, s, grid.theta[i], grid.phi(k));
    const auto coeffs = sdw::forward_sht(map);
    for (int ell = std::abs(s); ell < L; ++ell)
      for (int m = -ell; m <= ell; ++m) {
        const double expect = (ell == 3 && m == 2) ? 1.0 : 0.0;
        CAPTURE(ell);
        CAPTURE(m);
        CHECK(std::abs(coeffs.at(ell, m) - cplx(expect, 0.0)) < 1e-13);
      }
  }
}

TEST_CASE("forward-inverse identity on every basis vector below L = 16") {
  const int L = 16;
  const auto grid = sdw::SphereGrid::make(L);
  for (int ell = 0; ell < L; ell += 3) {
    for (int m = -ell; m <= ell; m += std::max(1, ell)) {
      sdw::HarmonicCoeffs e(L, 0);
      e.at(ell, m) = cplx(1.0, 0.0);
      const auto back = sdw::forward_sht(sdw::inverse_sht(e, grid));
      CHECK(back.max_abs_diff(e) < 1e-13);
    }
  }
}

TEST_CASE("Parseval on the sphere") {
  for (const int s : {0, 2}) {
    const int L = 48;
    const auto f = random_coeffs(L, s, 77 + s);
    const auto map = sdw::inverse_sht(f, sdw::SphereGrid::make(L));
    const double map_e = sdw::map_energy(map);
    const double coeff_e = f.energy();
    CHECK(std::abs(map_e - coeff_e) / coeff_e < 1e-10);
  }
}

TEST_CASE("transform is linear") {
  const int L = 20;
  const auto grid = sdw::SphereGrid::make(L);
  const auto f = random_coeffs(L, 0, 5);
  const auto g = random_coeffs(L, 0, 6);
  const cplx a(1.3, -0.4), b(-0.2, 2.1);
  sdw::HarmonicCoeffs combo(L, 0);
  for (int ell = 0; ell < L; ++ell)
    for (int m = -ell; m <= ell; ++m) combo.at(ell, m) = a * f.at(ell, m) + b * g.at(ell, m);
  const auto mc = sdw::inverse_sht(combo, grid);
  const auto mf = sdw::inverse_sht(f, grid);
  const auto mg = sdw::inverse_sht(g, grid);
  double err = 0.0;
  for (std::size_t i = 0; i < mc.values.size(); ++i)
    err = std::max(err, std::abs(mc.values[i] - (a * mf.values[i] + b * mg.values[i])));
  CHECK(err < 1e-12);
}

TEST_CASE("plan and direct paths agree bitwise") {
  const int L = 32;
  const auto f = random_coeffs(L, 2, 11);
  const auto grid = sdw::SphereGrid::make(L);
  const sdw::ShtPlan plan(grid, 2, L);
  const auto direct = sdw::inverse_sht(f, grid);
  const auto planned = plan.inverse(f);
  for (std::size_t i = 0; i < direct.values.size(); ++i)
    CHECK(direct.values[i] == planned.values[i]);
  const auto fwd_direct = sdw::forward_sht(direct);
  const auto fwd_planned = plan.forward(direct);
  for (std::size_t i = 0; i < fwd_direct.values().size(); ++i)
    CHECK(fwd_direct.values()[i] == fwd_planned.values()[i]);
}

TEST_CASE("synthesis on an oversampled grid reproduces pointwise evaluation") {
  const int L = 6;
  const auto f = random_coeffs(L, 0, 21);
  const auto grid = sdw::SphereGrid::make(3 * L);
  const auto map = sdw::inverse_sht(f, grid);
  for (const int i : {0, 7, 17}) {
    for (const int k : {0, 5, 30}) {
      cplx direct(0.0, 0.0);
      for (int ell = 0; ell < L; ++ell)
        for (int m = -ell; m <= ell; ++m)
          direct += f.at(ell, m) * sdw::spin_sph_harm(ell, m, 0, grid.theta[i], grid.phi(k));
      CHECK(std::abs(map.at(i, k) - direct) < 1e-12);
    }
  }
}

TEST_CASE("band limit mismatch is rejected") {
  const auto f = random_coeffs(16, 0, 3);
  CHECK_THROWS_AS(sdw::inverse_sht(f, sdw::SphereGrid::make(8)), sdw::config_error);
}
