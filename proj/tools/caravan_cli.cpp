// caravan: wavelet de-noising with the caravan prior.
//
//   caravan denoise data.txt --method caravan-median --levels 4 --out result/
//   caravan simulate --function doppler --n 512 --snr 7 --seed 1 --out doppler.csv
//   caravan bench --preset table1 --out table1/
//   caravan transform data.txt --transform modwt --levels 4 --mra --out coeffs/

#include "caravan/bench.hpp"
#include "caravan/bench_config.hpp"
#include "caravan/denoise.hpp"
#include "caravan/io.hpp"
#include "caravan/parallel.hpp"
#include "caravan/wavelet.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace caravan;

namespace {

constexpr std::uint64_t kDefaultSeed = 1;

struct TransformFlags {
  std::string transform = "dwt";
  std::string filter = "la8";
  int levels = 6;
  bool aligned = false;
};

void add_transform_flags(CLI::App* cmd, TransformFlags& f, bool aligned_by_default) {
  f.aligned = aligned_by_default;
  cmd->add_option("--transform", f.transform, "dwt or modwt")->capture_default_str();
  cmd->add_option("--filter", f.filter, "haar, d4 or la8")->capture_default_str();
  cmd->add_option("--levels", f.levels, "decomposition depth J0")->capture_default_str();
  cmd->add_flag("--aligned,!--no-aligned", f.aligned,
                aligned_by_default ? "apply zero-phase alignment (default on)" : "apply zero-phase alignment")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

fs::path prepare_dir(const std::string& out) {
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

std::string index_label(const DataFile& data, Eigen::Index i) {
  return data.index ? format_real((*data.index)(i)) : std::to_string(i + 1);
}

// ---------------------------------------------------------------- denoise

struct DenoiseFlags {
  std::string input;
  std::string column = "value";
  TransformFlags tf;
  std::string method = "caravan-mean";
  int iterations = 30000;
  std::optional<int> burn_in;
  std::uint64_t seed = kDefaultSeed;
  std::optional<std::string> sigma_mode;
  std::optional<double> sigma;
  std::string preset;
  std::string out = ".";
  bool no_diagnostics = false;
};

int cmd_denoise(const DenoiseFlags& f, const CLI::App& cmd) {
  DenoiseConfig config;
  auto given = [&](const char* name) { return cmd.get_option(name)->count() > 0; };

  if (!f.preset.empty()) {
    if (f.preset != "nmr") throw std::invalid_argument("unknown denoise preset '" + f.preset + "' (expected nmr)");
    config.transform = TransformKind::DWT;
    config.filter = FilterName::LA8;
    config.levels = 4;
    config.method = Method::CaravanMedian;
    config.chain = ChainConfig::with_iterations(120000);
  }
  if (f.preset.empty() || given("--transform")) config.transform = parse_transform_kind(f.tf.transform);
  if (f.preset.empty() || given("--filter")) config.filter = parse_filter_name(f.tf.filter);
  if (f.preset.empty() || given("--levels")) config.levels = f.tf.levels;
  if (f.preset.empty() || given("--method")) config.method = parse_method(f.method);
  if (f.preset.empty() || given("--iterations")) config.chain = ChainConfig::with_iterations(f.iterations);
  if (f.burn_in) config.chain.burn_in = *f.burn_in;
  config.chain.seed = f.seed;
  config.sigma_mode = f.sigma_mode ? parse_sigma_mode(*f.sigma_mode) : DenoiseConfig::default_sigma_mode(config.transform);
  config.sigma_override = f.sigma;
  config.align = f.tf.aligned;
  config.threads = default_thread_count();

  const auto data = read_data_file(f.input, f.column);
  const auto result = denoise(data.values, config);

  const auto dir = prepare_dir(f.out);
  OutputTransaction tx;
  const bool caravan = is_caravan(config.method);

  std::string est = caravan ? "index,estimate,posterior_mean,posterior_median\n" : "index,estimate\n";
  for (Eigen::Index i = 0; i < result.estimate.size(); ++i) {
    est += index_label(data, i) + "," + format_real(result.estimate(i));
    if (caravan) est += "," + format_real((*result.mean_estimate)(i)) + "," + format_real((*result.median_estimate)(i));
    est += "\n";
  }
  tx.write(dir / "estimate.csv", est);

  std::string sig = caravan ? "level,sigma,acceptance_a,acceptance_tau_gl\n" : "level,sigma\n";
  for (std::size_t j = 0; j < result.sigma_estimates.size(); ++j) {
    sig += fmt::format("{},{}", j + 1, format_real(result.sigma_estimates[j]));
    if (caravan) {
      sig += "," + format_real(result.level_summaries[j].acceptance_rate_a) + "," +
             format_real(result.level_summaries[j].acceptance_rate_tau_gl);
    }
    sig += "\n";
  }
  tx.write(dir / "sigma.csv", sig);

  if (caravan && !f.no_diagnostics) {
    for (std::size_t j = 0; j < result.level_diagnostics.size(); ++j) {
      const auto csv = diagnostics_csv(result.level_diagnostics[j]);
      const auto prefix = fmt::format("level{}", j + 1);
      tx.write(dir / (prefix + "_trace.csv"), csv.trace);
      tx.write(dir / (prefix + "_acf.csv"), csv.acf);
      tx.write(dir / (prefix + "_running_mean.csv"), csv.running_mean);
    }
  }
  tx.commit();

  fmt::print("observations   {}\n", data.values.size());
  fmt::print("transform      {} {} J0={}{}\n", to_string(config.transform), to_string(config.filter), config.levels,
             config.align ? " aligned" : "");
  fmt::print("method         {}\n", to_string(config.method));
  if (caravan) {
    fmt::print("iterations     {} (burn-in {}, seed {})\n", config.chain.iterations, config.chain.burn_in,
               config.chain.seed);
  }
  fmt::print("sigma level 1  {:.6g}\n", result.sigma_estimates.front());
  fmt::print("input peak     {}\n", format_real(peak_height(data.values)));
  fmt::print("peak height    {:.4f}\n", peak_height(result.estimate));
  fmt::print("wrote {} files to {}\n", tx.targets().size(), dir.string());
  return 0;
}

// --------------------------------------------------------------- simulate

struct SimulateFlags {
  std::string function = "bumps";
  long n = 512;
  double snr = 7.0;
  std::uint64_t seed = kDefaultSeed;
  std::string out = "simulated.csv";
};

int cmd_simulate(const SimulateFlags& f) {
  if (!(f.snr > 0.0)) throw std::invalid_argument("--snr must be positive");
  if (f.n < 2) throw std::invalid_argument("--n must be at least 2");
  const auto fn = parse_test_function(f.function);
  const auto truth = gen_test_function(fn, f.n);
  Rng rng(f.seed);
  const auto noisy = add_noise(truth, f.snr, rng);

  std::string csv = fmt::format("# function={} n={} snr={} seed={}\n# sigma={}\nt,f,value\n", fn.label(), f.n,
                                format_real(f.snr), f.seed, format_real(noisy.sigma));
  for (long i = 0; i < f.n; ++i) {
    csv += format_real(static_cast<double>(i + 1) / static_cast<double>(f.n)) + "," + format_real(truth(i)) + "," +
           format_real(noisy.values(i)) + "\n";
  }
  const fs::path out(f.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  OutputTransaction tx;
  tx.write(out, csv);
  tx.commit();
  fmt::print("wrote {} ({} samples, sigma {})\n", out.string(), f.n, format_real(noisy.sigma));
  return 0;
}

// ------------------------------------------------------------------ bench

struct BenchFlags {
  std::string spec_file;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::string out = "bench";
};

int cmd_bench(const BenchFlags& f) {
  if (f.spec_file.empty() == f.preset.empty()) {
    throw std::invalid_argument("bench needs exactly one of a spec file or --preset");
  }
  BenchSpec spec;
  if (!f.preset.empty()) {
    spec = preset_bench_spec(f.preset);
  } else {
    std::ifstream in(f.spec_file);
    if (!in) throw std::runtime_error("cannot read benchmark spec '" + f.spec_file + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    spec = parse_bench_spec(ss.str());
  }
  if (f.seed) {
    spec.seed = *f.seed;
    for (auto& c : spec.configs) c.chain.seed = *f.seed;
  }

  const auto result = run_benchmark(spec);
  const auto table = render_table(result, spec.n);
  const auto dir = prepare_dir(f.out);
  OutputTransaction tx;
  tx.write(dir / "results.csv", results_csv(result));
  tx.write(dir / "replicates.csv", replicates_csv(result));
  tx.write(dir / "table.txt", table);
  tx.commit();
  fmt::print("{}", table);
  fmt::print("wrote results.csv, replicates.csv and table.txt to {}\n", dir.string());
  return 0;
}

// -------------------------------------------------------------- transform

struct TransformCmdFlags {
  std::string input;
  std::string column = "value";
  TransformFlags tf;
  bool mra = false;
  std::string out = ".";
};

int cmd_transform(const TransformCmdFlags& f) {
  const auto data = read_data_file(f.input, f.column);
  const auto kind = parse_transform_kind(f.tf.transform);
  const auto filter = make_filter<double>(parse_filter_name(f.tf.filter));
  auto d = forward(kind, data.values, filter, f.tf.levels);
  if (f.tf.aligned) d = align(d);

  std::string coeffs = "band,level,index,value\n";
  for (int j = 0; j < d.levels(); ++j) {
    for (Eigen::Index i = 0; i < d.wavelet[j].size(); ++i) {
      coeffs += fmt::format("W,{},{},{}\n", j + 1, i, format_real(d.wavelet[j](i)));
    }
  }
  for (Eigen::Index i = 0; i < d.scaling.size(); ++i) {
    coeffs += fmt::format("V,{},{},{}\n", d.levels(), i, format_real(d.scaling(i)));
  }

  const auto dir = prepare_dir(f.out);
  OutputTransaction tx;
  tx.write(dir / "coefficients.csv", coeffs);
  if (f.mra) {
    const auto m = mra(d);
    std::string csv = "index";
    for (int j = 1; j <= d.levels(); ++j) csv += fmt::format(",D{}", j);
    csv += fmt::format(",S{}\n", d.levels());
    for (Eigen::Index i = 0; i < data.values.size(); ++i) {
      csv += index_label(data, i);
      for (const auto& dj : m.details) csv += "," + format_real(dj(i));
      csv += "," + format_real(m.smooth(i)) + "\n";
    }
    tx.write(dir / "mra.csv", csv);
  }
  tx.commit();
  fmt::print("{} {} J0={}{}: {} coefficients, wrote {} files to {}\n", to_string(kind), to_string(filter.name),
             d.levels(), d.aligned ? " (aligned)" : "", d.coefficient_count(), tx.targets().size(), dir.string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian wavelet de-noising with the caravan prior"};
  app.require_subcommand(1);

  DenoiseFlags dn;
  auto* denoise_cmd = app.add_subcommand("denoise", "de-noise a data file");
  denoise_cmd->add_option("input", dn.input, "data file (one value per line or CSV with a value column)")
      ->required();
  denoise_cmd->add_option("--column", dn.column, "CSV column holding the observations")->capture_default_str();
  add_transform_flags(denoise_cmd, dn.tf, false);
  denoise_cmd->add_option("--method", dn.method, "caravan-mean, caravan-median, hard or soft")
      ->capture_default_str();
  denoise_cmd->add_option("--iterations", dn.iterations, "Gibbs sweeps")->capture_default_str();
  denoise_cmd->add_option("--burn-in", dn.burn_in, "discarded sweeps (default: first third)");
  denoise_cmd->add_option("--seed", dn.seed, "master seed")->capture_default_str();
  denoise_cmd->add_option("--sigma-mode", dn.sigma_mode, "mad-level1 (DWT), mad-each or mad-scaled (MODWT)");
  denoise_cmd->add_option("--sigma", dn.sigma, "known noise standard deviation (skips the MAD estimate)");
  denoise_cmd->add_option("--preset", dn.preset, "nmr: LA8, DWT, J0=4, posterior median, 120000 sweeps");
  denoise_cmd->add_flag("--no-diagnostics", dn.no_diagnostics, "skip trace/acf/running-mean exports");
  denoise_cmd->add_option("--out", dn.out, "output directory")->capture_default_str();

  SimulateFlags sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "write a noisy test-function dataset");
  simulate_cmd->add_option("--function", sim.function, "bumps, blocks, doppler, heavisine, heavisine-canonical")
      ->capture_default_str();
  simulate_cmd->add_option("--n", sim.n, "sample size")->capture_default_str();
  simulate_cmd->add_option("--snr", sim.snr, "SD(signal) / sigma")->capture_default_str();
  simulate_cmd->add_option("--seed", sim.seed, "noise seed")->capture_default_str();
  simulate_cmd->add_option("--out", sim.out, "output CSV")->capture_default_str();

  BenchFlags bf;
  auto* bench_cmd = app.add_subcommand("bench", "run a replicate benchmark");
  bench_cmd->add_option("spec", bf.spec_file, "key = value benchmark spec");
  bench_cmd->add_option("--preset", bf.preset, "table1, table2, table3 or table4");
  bench_cmd->add_option("--seed", bf.seed, "override the spec's master seed");
  bench_cmd->add_option("--out", bf.out, "output directory")->capture_default_str();

  TransformCmdFlags tc;
  auto* transform_cmd = app.add_subcommand("transform", "dump wavelet coefficients and MRA components");
  transform_cmd->add_option("input", tc.input, "data file")->required();
  transform_cmd->add_option("--column", tc.column, "CSV column holding the observations")->capture_default_str();
  add_transform_flags(transform_cmd, tc.tf, true);
  transform_cmd->add_flag("--mra", tc.mra, "also write details and smooth");
  transform_cmd->add_option("--out", tc.out, "output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*denoise_cmd) return cmd_denoise(dn, *denoise_cmd);
    if (*simulate_cmd) return cmd_simulate(sim);
    if (*bench_cmd) return cmd_bench(bf);
    if (*transform_cmd) return cmd_transform(tc);
  } catch (const std::exception& e) {
    std::fflush(stdout);
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 1;
}
