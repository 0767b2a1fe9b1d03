#include "caravan/io.hpp"
#include "caravan/sampler.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <stdexcept>

namespace caravan {

std::vector<double> autocorrelation(const std::vector<double>& x, int max_lag) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  const std::size_t lags = static_cast<std::size_t>(std::clamp(max_lag, 0, static_cast<int>(n) - 1));
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double denom = 0.0;
  for (double v : x) denom += (v - mean) * (v - mean);

  std::vector<double> acf(lags + 1, 0.0);
  acf[0] = 1.0;
  if (denom <= 0.0) return acf;
  for (std::size_t k = 1; k <= lags; ++k) {
    double s = 0.0;
    for (std::size_t t = 0; t + k < n; ++t) s += (x[t] - mean) * (x[t + k] - mean);
    acf[k] = s / denom;
  }
  return acf;
}

std::vector<double> running_mean(const std::vector<double>& x) {
  std::vector<double> out(x.size());
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += x[i];
    out[i] = s / static_cast<double>(i + 1);
  }
  return out;
}

DiagnosticsCsv diagnostics_csv(const Diagnostics& diag) {
  DiagnosticsCsv out;
  out.trace = "iteration,parameter,value\n";
  out.acf = "lag,parameter,acf\n";
  out.running_mean = "iteration,parameter,running_mean\n";
  for (const auto& p : diag.parameters) {
    for (std::size_t i = 0; i < p.trace.size(); ++i) {
      out.trace += fmt::format("{},{},{}\n", p.iteration[i], p.name, format_real(p.trace[i]));
      out.running_mean += fmt::format("{},{},{}\n", p.iteration[i], p.name, format_real(p.running_mean[i]));
    }
    for (std::size_t k = 0; k < p.autocorrelation.size(); ++k) {
      out.acf += fmt::format("{},{},{}\n", k, p.name, format_real(p.autocorrelation[k]));
    }
  }
  return out;
}

std::vector<std::filesystem::path> export_diagnostics(const Diagnostics& diag, const std::filesystem::path& prefix) {
  const auto base = prefix.string();
  const std::filesystem::path trace_path = base + "_trace.csv";
  const std::filesystem::path acf_path = base + "_acf.csv";
  const std::filesystem::path mean_path = base + "_running_mean.csv";
  const auto csv = diagnostics_csv(diag);
  write_text_file(trace_path, csv.trace);
  write_text_file(acf_path, csv.acf);
  write_text_file(mean_path, csv.running_mean);
  return {trace_path, acf_path, mean_path};
}

}  // namespace caravan
