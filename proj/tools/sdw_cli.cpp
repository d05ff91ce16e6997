// sdw: directional scale-discretised wavelets on the sphere.
//
// Subcommands reproduce the library's experiments end to end: harmonic
// tiling export, wavelet map rendering, analysis/synthesis between the
// binary coefficient formats, steering, Gaussian random field simulation,
// the masked localisation statistic, scale-scale correlation matrices, and
// the numerical verification suite.
//
// Exit codes: 0 success, 2 usage/configuration error, 3 data error,
// 4 verification or steering check failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "sdw/io.hpp"
#include "sdw/stochastic.hpp"
#include "sdw/verify.hpp"

namespace {

struct CommonOpts {
  int L = 64;
  double lambda = 2.0;
  int N = 3;
  int j_min = 0;
  int j_max = -1;
  int spin = 0;
  int jobs = 0;  // 0 = hardware concurrency
};

void add_family_options(CLI::App* cmd, CommonOpts& o, bool with_spin = true) {
  cmd->add_option("--L", o.L, "band limit")->required();
  cmd->add_option("--lambda", o.lambda, "dilation between scales (> 1)");
  cmd->add_option("--N", o.N, "azimuthal band limit (steering basis size)");
  cmd->add_option("--J0", o.j_min, "minimum wavelet scale");
  cmd->add_option("--J", o.j_max, "maximum wavelet scale (-1 = full range)");
  if (with_spin) cmd->add_option("--spin", o.spin, "spin of the analyzed field");
}

sdw::TilingConfig config_of(const CommonOpts& o) {
  return sdw::TilingConfig{o.L, o.lambda, o.j_min, o.j_max}.resolved();
}

std::ofstream open_text(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw sdw::data_error("cannot open for writing: " + path);
  return out;
}

struct SpectrumOpts {
  std::string file;
  double g1 = 1.0;
  double alpha_spec = 2.0;
};

void add_spectrum_options(CLI::App* cmd, SpectrumOpts& s) {
  cmd->add_option("--spectrum-file", s.file, "two-column ASCII power spectrum (l C_l)");
  cmd->add_option("--g1", s.g1, "power-law amplitude C_l = g1 l^-alpha");
  cmd->add_option("--alpha-spec", s.alpha_spec, "power-law spectral index");
}

sdw::PowerSpectrum spectrum_of(const SpectrumOpts& s, int L) {
  if (!s.file.empty()) {
    auto spec = sdw::load_spectrum(s.file);
    spec.require_length(L);
    return spec;
  }
  return sdw::PowerSpectrum::power_law(L, s.g1, s.alpha_spec);
}

struct MaskOpts {
  std::string file;
  std::vector<double> band_deg;  // two colatitudes in degrees
  bool lenient = false;
};

void add_mask_options(CLI::App* cmd, MaskOpts& m) {
  cmd->add_option("--mask-file", m.file, "SDWMAP1 mask with binary samples");
  cmd->add_option("--mask-band", m.band_deg,
                  "equatorial band mask: two colatitudes in degrees, masked between")
      ->expected(2)
      ->delimiter(',');
  cmd->add_flag("--mask-lenient", m.lenient, "threshold non-binary mask values at 0.5");
}

bool has_mask(const MaskOpts& m) { return !m.file.empty() || !m.band_deg.empty(); }

sdw::SkyMask mask_of(const MaskOpts& m, const sdw::SphereGrid& grid) {
  if (!m.file.empty()) {
    auto mask = sdw::load_mask(m.file, !m.lenient);
    if (mask.grid.band_limit != grid.band_limit)
      throw sdw::data_error("mask band limit does not match analysis band limit");
    return mask;
  }
  const double lo = m.band_deg.at(0) * sdw::pi / 180.0;
  const double hi = m.band_deg.at(1) * sdw::pi / 180.0;
  if (!(lo < hi)) throw sdw::config_error("--mask-band expects lo < hi");
  return sdw::SkyMask::equatorial_band(grid, lo, hi);
}

// --- subcommand bodies -------------------------------------------------------

int cmd_tile(const CommonOpts& o, const std::string& output) {
  const auto kernels = sdw::build_kernels(config_of(o));
  const auto dir = sdw::build_directionality(o.L, o.N);
  auto out = open_text(output);
  sdw::write_tiling_csv(out, kernels, &dir);
  std::cout << "tiling written to " << output << " (J = " << kernels.config.j_max << ")\n";
  return 0;
}

int cmd_wavelet(const CommonOpts& o, int j, double gamma_deg, const std::string& output,
                const std::string& alm_out, const std::string& autocorr_out) {
  const auto fam = sdw::build_family(config_of(o), o.N, o.spin);
  if (!autocorr_out.empty()) {
    std::vector<double> lags(128);
    for (std::size_t i = 0; i < lags.size(); ++i) lags[i] = 2.0 * sdw::pi * i / lags.size();
    const auto gamma_fn = sdw::directional_autocorrelation(fam.kernels, fam.dir, j, lags);
    auto out = open_text(autocorr_out);
    sdw::write_autocorrelation_csv(out, lags, gamma_fn, o.N);
  }
  const double gamma = gamma_deg * sdw::pi / 180.0;
  sdw::HarmonicCoeffs psi = fam.psi(j);
  if (gamma != 0.0) psi = sdw::rotate_z(psi, gamma);
  if (!alm_out.empty()) sdw::write_alm(alm_out, psi);
  for (int ell = 0; ell < std::abs(o.spin); ++ell)
    for (int m = -ell; m <= ell; ++m) psi.at(ell, m) = sdw::cplx(0.0, 0.0);
  const auto map = sdw::inverse_sht(psi, sdw::SphereGrid::make(o.L));
  auto out = open_text(output);
  sdw::write_map_slice_csv(out, map);
  std::cout << "wavelet j=" << j << " at gamma=" << gamma_deg << " deg written to " << output
            << "\n";
  return 0;
}

int cmd_analyze(const CommonOpts& o, const std::string& input, const std::string& outdir) {
  sdw::HarmonicCoeffs f;
  if (input.size() > 7 && input.substr(input.size() - 7) == ".sdwmap") {
    f = sdw::forward_sht(sdw::read_map(input));
  } else {
    f = sdw::read_alm(input);
  }
  CommonOpts local = o;
  local.L = f.band_limit();
  local.spin = f.spin();
  const auto fam = sdw::build_family(config_of(local), o.N, f.spin());
  const auto wc = sdw::analyze(f, fam);
  std::filesystem::create_directories(outdir);
  for (int j = fam.j_min(); j <= fam.j_max(); ++j)
    sdw::write_wigner(outdir + "/wav_j" + std::to_string(j) + ".sdwso3", wc.at_scale(j));
  sdw::write_alm(outdir + "/scaling.sdwalm", wc.scaling);
  std::cout << "wavelet coefficients for scales [" << fam.j_min() << ", " << fam.j_max()
            << "] written under " << outdir << "\n";
  return 0;
}

int cmd_synthesize(const CommonOpts& o, const std::string& indir, const std::string& output) {
  const auto fam = sdw::build_family(config_of(o), o.N, o.spin);
  sdw::WaveletCoefficients wc;
  wc.j_min = fam.j_min();
  for (int j = fam.j_min(); j <= fam.j_max(); ++j)
    wc.wavelet.push_back(sdw::read_wigner(indir + "/wav_j" + std::to_string(j) + ".sdwso3"));
  wc.scaling = sdw::read_alm(indir + "/scaling.sdwalm");
  const auto f = sdw::synthesize(wc, fam);
  sdw::write_alm(output, f);
  std::cout << "synthesized coefficients written to " << output << "\n";
  return 0;
}

int cmd_steer(const CommonOpts& o, int j, double gamma_deg, const std::string& output,
              bool check_only) {
  const auto fam = sdw::build_family(config_of(o), o.N, o.spin);
  const double gamma = gamma_deg * sdw::pi / 180.0;
  const auto weights = sdw::steering_weights(o.N, gamma);
  std::cout << "steering weights at gamma=" << gamma_deg << " deg:";
  for (const auto& w : weights) std::cout << " " << w.real();
  std::cout << "\n";
  const double err = sdw::steer_check(fam.psi(j), o.N, gamma);
  std::cout << "steered-vs-rotated max abs error: " << err << "\n";
  if (!check_only && !output.empty()) {
    // steered wavelet from the weighted sum of basis rotations
    sdw::HarmonicCoeffs steered(o.L, o.spin);
    for (int g = 0; g < o.N; ++g) {
      const auto basis = sdw::rotate_z(fam.psi(j), g * sdw::pi / o.N);
      for (std::size_t i = 0; i < steered.values().size(); ++i)
        steered.values()[i] += weights[g] * basis.values()[i];
    }
    for (int ell = 0; ell < std::abs(o.spin); ++ell)
      for (int m = -ell; m <= ell; ++m) steered.at(ell, m) = sdw::cplx(0.0, 0.0);
    const auto map = sdw::inverse_sht(steered, sdw::SphereGrid::make(o.L));
    auto out = open_text(output);
    sdw::write_map_slice_csv(out, map);
    std::cout << "steered wavelet map written to " << output << "\n";
  }
  return err < 1e-10 ? 0 : 4;
}

int cmd_simulate(const CommonOpts& o, const SpectrumOpts& s, std::uint64_t seed,
                 const std::string& output, const std::string& map_out) {
  const auto spec = spectrum_of(s, o.L);
  const auto f = sdw::simulate_grf(spec, o.L, seed, o.spin);
  sdw::write_alm(output, f);
  if (!map_out.empty()) sdw::write_map(map_out, sdw::inverse_sht(f, sdw::SphereGrid::make(o.L)));
  std::cout << "realization (seed " << seed << ", model " << spec.model << ") written to "
            << output << "\n";
  return 0;
}

int cmd_localisation(const CommonOpts& o, const SpectrumOpts& s, const MaskOpts& m, int j,
                     int n_sims, std::uint64_t seed, const std::string& prefix) {
  const auto fam = sdw::build_family(config_of(o), o.N, o.spin);
  const auto spec = spectrum_of(s, o.L);
  const auto grid = sdw::SphereGrid::make(o.L);
  if (!has_mask(m)) throw sdw::config_error("localisation requires --mask-file or --mask-band");
  const auto mask = mask_of(m, grid);
  const auto res = sdw::localisation_statistic(fam, spec, mask, j, n_sims, seed, o.jobs);

  // Undefined samples (guarded denominators) are zero-filled for the
  // band-limited coefficient rendering; the CSV slices keep them as nan.
  sdw::SO3Map filled = res.delta;
  for (auto& v : filled.values)
    if (std::isnan(v.real())) v = sdw::cplx(0.0, 0.0);
  sdw::write_wigner(prefix + "_delta.sdwso3", sdw::forward_so3(filled));
  for (int c = 0; c < res.delta.grid.n_gamma(); ++c) {
    auto out = open_text(prefix + "_delta_gamma" + std::to_string(c) + ".csv");
    sdw::write_so3_slice_csv(out, res.delta, c);
  }
  std::cout << "localisation statistic written with prefix " << prefix << " ("
            << res.undefined_count << " undefined samples)\n";
  return 0;
}

int cmd_correlation(const CommonOpts& o, const SpectrumOpts& s, const MaskOpts& m, int n_sims,
                    std::uint64_t seed, const std::string& prefix) {
  const auto fam = sdw::build_family(config_of(o), o.N, o.spin);
  const auto spec = spectrum_of(s, o.L);
  const auto ana = sdw::analytic_correlation(fam, spec);
  const auto emp = sdw::empirical_correlation(fam, spec, n_sims, seed, nullptr, o.jobs);
  {
    auto out = open_text(prefix + "_analytic.csv");
    sdw::write_correlation_csv(out, ana);
  }
  {
    auto out = open_text(prefix + "_empirical.csv");
    sdw::write_correlation_csv(out, emp);
  }
  auto diff = ana;
  for (std::size_t i = 0; i < diff.entries.size(); ++i)
    diff.entries[i] = emp.entries[i] - ana.entries[i];
  diff.provenance = "empirical-minus-analytic";
  {
    auto out = open_text(prefix + "_diff_empirical_analytic.csv");
    sdw::write_correlation_csv(out, diff);
  }
  if (has_mask(m)) {
    const auto mask = mask_of(m, sdw::SphereGrid::make(o.L));
    const auto masked = sdw::empirical_correlation(fam, spec, n_sims, seed, &mask, o.jobs);
    auto out = open_text(prefix + "_empirical_masked.csv");
    sdw::write_correlation_csv(out, masked);
    auto mdiff = masked;
    for (std::size_t i = 0; i < mdiff.entries.size(); ++i)
      mdiff.entries[i] = masked.entries[i] - emp.entries[i];
    mdiff.provenance = "masked-minus-unmasked";
    auto out2 = open_text(prefix + "_diff_masked_unmasked.csv");
    sdw::write_correlation_csv(out2, mdiff);
  }
  std::cout << "correlation matrices written with prefix " << prefix << "\n";
  return 0;
}

int cmd_verify(int L, std::uint64_t seed, const std::string& report) {
  const auto checks = sdw::run_verify_suite(L, seed);
  if (!report.empty()) {
    auto out = open_text(report);
    sdw::write_checks_jsonl(out, checks);
  }
  int failures = 0;
  for (const auto& c : checks) {
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << " (" << c.params
              << ") margin=" << c.margin << "\n";
    if (!c.pass) ++failures;
  }
  std::cout << (failures == 0 ? "all checks passed\n"
                              : std::to_string(failures) + " checks failed\n");
  return failures == 0 ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"directional scale-discretised wavelets on the sphere"};
  app.require_subcommand(1);

  CommonOpts opt;
  SpectrumOpts spec_opt;
  MaskOpts mask_opt;
  std::string input, output, outdir, prefix, alm_out, map_out, report, autocorr_out;
  int j = 2, n_sims = 30;
  std::uint64_t seed = 0;
  double gamma_deg = 0.0;
  bool check_only = false;

  auto* tile = app.add_subcommand("tile", "export the harmonic tiling as CSV");
  add_family_options(tile, opt, false);
  tile->add_option("--output", output, "CSV path")->required();

  auto* wavelet = app.add_subcommand("wavelet", "render one wavelet map slice as CSV");
  add_family_options(wavelet, opt);
  wavelet->add_option("--j", j, "wavelet scale")->required();
  wavelet->add_option("--gamma-deg", gamma_deg, "orientation slice in degrees");
  wavelet->add_option("--output", output, "CSV path")->required();
  wavelet->add_option("--alm-output", alm_out, "also write the wavelet coefficients (SDWALM1)");
  wavelet->add_option("--autocorr-output", autocorr_out,
                      "also write the directional auto-correlation CSV for this scale");

  auto* analyze = app.add_subcommand("analyze", "wavelet-analyze a map or coefficient file");
  analyze->add_option("--input", input, "SDWALM1 or SDWMAP1 input")->required();
  analyze->add_option("--lambda", opt.lambda, "dilation between scales (> 1)");
  analyze->add_option("--N", opt.N, "azimuthal band limit");
  analyze->add_option("--J0", opt.j_min, "minimum wavelet scale");
  analyze->add_option("--J", opt.j_max, "maximum wavelet scale (-1 = full range)");
  analyze->add_option("--output-dir", outdir, "directory for per-scale SDWSO31 files")
      ->required();

  auto* synth = app.add_subcommand("synthesize", "synthesize coefficients from wavelet files");
  add_family_options(synth, opt);
  synth->add_option("--input-dir", outdir, "directory produced by analyze")->required();
  synth->add_option("--output", output, "SDWALM1 output path")->required();

  auto* steer = app.add_subcommand("steer", "steer a wavelet and check the rotation identity");
  add_family_options(steer, opt);
  steer->add_option("--j", j, "wavelet scale")->required();
  steer->add_option("--gamma-deg", gamma_deg, "target orientation in degrees")->required();
  steer->add_option("--output", output, "CSV path for the steered map");
  steer->add_flag("--check-only", check_only, "only run the steering identity check");

  auto* simulate = app.add_subcommand("simulate", "draw a Gaussian random field realization");
  simulate->add_option("--L", opt.L, "band limit")->required();
  simulate->add_option("--spin", opt.spin, "spin of the simulated field");
  add_spectrum_options(simulate, spec_opt);
  simulate->add_option("--seed", seed, "realization seed");
  simulate->add_option("--output", output, "SDWALM1 output path")->required();
  simulate->add_option("--map-output", map_out, "optional SDWMAP1 rendering");

  auto* loc = app.add_subcommand("localisation", "masked localisation statistic (Monte Carlo)");
  add_family_options(loc, opt);
  add_spectrum_options(loc, spec_opt);
  add_mask_options(loc, mask_opt);
  loc->add_option("--j", j, "wavelet scale")->required();
  loc->add_option("--n-sims", n_sims, "number of Monte Carlo realizations");
  loc->add_option("--seed", seed, "base seed");
  loc->add_option("--jobs", opt.jobs, "worker threads (0 = all cores)");
  loc->add_option("--output-prefix", prefix, "prefix for output files")->required();

  auto* corr = app.add_subcommand("correlation", "scale-scale correlation matrices");
  add_family_options(corr, opt);
  add_spectrum_options(corr, spec_opt);
  add_mask_options(corr, mask_opt);
  corr->add_option("--n-sims", n_sims, "number of Monte Carlo realizations");
  corr->add_option("--seed", seed, "base seed");
  corr->add_option("--jobs", opt.jobs, "worker threads (0 = all cores)");
  corr->add_option("--output-prefix", prefix, "prefix for output files")->required();

  auto* verify = app.add_subcommand("verify", "run the numerical verification suite");
  verify->add_option("--L", opt.L, "band limit for the suite");
  verify->add_option("--seed", seed, "seed for the randomized checks");
  verify->add_option("--report", report, "JSON-lines report path");
  std::string suite = "all";
  verify->add_option("--suite", suite, "suite selector (only 'all' is defined)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (tile->parsed()) return cmd_tile(opt, output);
    if (wavelet->parsed()) return cmd_wavelet(opt, j, gamma_deg, output, alm_out, autocorr_out);
    if (analyze->parsed()) return cmd_analyze(opt, input, outdir);
    if (synth->parsed()) return cmd_synthesize(opt, outdir, output);
    if (steer->parsed()) return cmd_steer(opt, j, gamma_deg, output, check_only);
    if (simulate->parsed()) return cmd_simulate(opt, spec_opt, seed, output, map_out);
    if (loc->parsed()) return cmd_localisation(opt, spec_opt, mask_opt, j, n_sims, seed, prefix);
    if (corr->parsed()) return cmd_correlation(opt, spec_opt, mask_opt, n_sims, seed, prefix);
    if (verify->parsed()) {
      if (suite != "all") throw sdw::config_error("unknown suite: " + suite);
      return cmd_verify(opt.L, seed, report);
    }
  } catch (const sdw::config_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const sdw::data_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
