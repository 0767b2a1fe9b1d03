#include "caravan/bench.hpp"

#include "caravan/io.hpp"
#include "caravan/parallel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <set>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace caravan {

int default_thread_count() {
  if (const char* env = std::getenv("CARAVAN_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

bool CellKey::operator<(const CellKey& o) const {
  return std::tie(function, snr, transform, filter, levels, method) <
         std::tie(o.function, o.snr, o.transform, o.filter, o.levels, o.method);
}

void BenchSpec::validate() const {
  if (functions.empty()) throw std::invalid_argument("benchmark needs at least one test function");
  if (snr_values.empty()) throw std::invalid_argument("benchmark needs at least one SNR value");
  for (double s : snr_values)
    if (!(s > 0.0)) throw std::invalid_argument("SNR values must be positive");
  if (replicates < 1) throw std::invalid_argument("replicates must be at least 1");
  if (configs.empty()) throw std::invalid_argument("benchmark needs at least one method configuration");
  if (threads < 1) throw std::invalid_argument("threads must be positive");
  for (const auto& [fn, it] : iterations_override)
    if (it < 1) throw std::invalid_argument("iteration overrides must be positive");
  for (const auto& c : configs) c.validate();
}

namespace {

std::uint64_t function_id(const TestFunction& f) {
  return static_cast<std::uint64_t>(f.name) * 2 + (f.canonical_heavisine ? 1 : 0);
}

// Two caravan configs that differ only in the point estimate share one chain.
bool same_chain(const DenoiseConfig& a, const DenoiseConfig& b) {
  return is_caravan(a.method) && is_caravan(b.method) && a.transform == b.transform && a.filter == b.filter &&
         a.levels == b.levels && a.sigma_mode == b.sigma_mode && a.align == b.align &&
         a.sigma_override == b.sigma_override && a.chain.iterations == b.chain.iterations &&
         a.chain.burn_in == b.chain.burn_in && a.chain.thinning == b.chain.thinning &&
         a.chain.seed == b.chain.seed && a.hyper.a0 == b.hyper.a0 && a.hyper.b0 == b.hyper.b0 &&
         a.hyper.a_a == b.hyper.a_a && a.hyper.b_a == b.hyper.b_a && a.hyper.a_gl == b.hyper.a_gl &&
         a.hyper.b_gl == b.hyper.b_gl && a.hyper.c_a == b.hyper.c_a && a.hyper.c_gl == b.hyper.c_gl;
}

BenchResult run_impl(const BenchSpec& spec, const MethodRunner* runner) {
  spec.validate();
  const int n_fn = static_cast<int>(spec.functions.size());
  const int n_snr = static_cast<int>(spec.snr_values.size());
  const int jobs = n_fn * n_snr * spec.replicates;
  std::vector<std::vector<ReplicateRecord>> per_job(jobs);

  parallel_for(jobs, spec.threads, [&](int job) {
    const int r = job % spec.replicates;
    const int s = (job / spec.replicates) % n_snr;
    const int f = job / (spec.replicates * n_snr);
    const auto& fn = spec.functions[f];
    const double snr = spec.snr_values[s];

    const Eigen::VectorXd truth = gen_test_function(fn, spec.n);
    // Printed and canonical HeaviSine share a noise stream; noise never depends on the method.
    Rng noise_rng(derive_seed(spec.seed, static_cast<std::uint64_t>(fn.name), static_cast<std::uint64_t>(s),
                              static_cast<std::uint64_t>(r) + 0x5eed));
    const Eigen::VectorXd noisy = add_noise(truth, snr, noise_rng).values;

    std::vector<std::pair<DenoiseConfig, DenoiseResult>> cache;
    for (DenoiseConfig cfg : spec.configs) {
      if (auto it = spec.iterations_override.find(fn.name); it != spec.iterations_override.end()) {
        cfg.chain.iterations = it->second;
        cfg.chain.burn_in = it->second / 3;
      }
      cfg.chain.seed = derive_seed(cfg.chain.seed, function_id(fn), static_cast<std::uint64_t>(s));
      cfg.replicate = static_cast<std::uint64_t>(r);
      cfg.threads = 1;

      Eigen::VectorXd estimate;
      if (runner) {
        estimate = (*runner)(noisy, truth, cfg);
      } else {
        auto hit = std::find_if(cache.begin(), cache.end(), [&](const auto& e) { return same_chain(e.first, cfg); });
        if (hit == cache.end()) {
          cache.emplace_back(cfg, denoise(noisy, cfg));
          hit = std::prev(cache.end());
        }
        const auto& res = hit->second;
        if (cfg.method == Method::CaravanMean) {
          estimate = *res.mean_estimate;
        } else if (cfg.method == Method::CaravanMedian) {
          estimate = *res.median_estimate;
        } else {
          estimate = res.estimate;
        }
      }
      CellKey key{fn.label(), snr, cfg.transform, cfg.filter, cfg.levels, cfg.method};
      per_job[job].push_back({key, r, squared_error(estimate, truth)});
    }
  });

  BenchResult result;
  for (auto& v : per_job)
    for (auto& rec : v) result.records.push_back(std::move(rec));
  std::stable_sort(result.records.begin(), result.records.end(), [](const auto& a, const auto& b) {
    if (a.key < b.key) return true;
    if (b.key < a.key) return false;
    return a.replicate < b.replicate;
  });
  result.cells = aggregate(result.records);
  return result;
}

}  // namespace

BenchResult run_benchmark(const BenchSpec& spec) { return run_impl(spec, nullptr); }

BenchResult run_benchmark(const BenchSpec& spec, const MethodRunner& runner) { return run_impl(spec, &runner); }

std::map<CellKey, CellStats> aggregate(const std::vector<ReplicateRecord>& records) {
  std::map<CellKey, std::vector<double>> grouped;
  for (const auto& r : records) grouped[r.key].push_back(r.sq_error);
  std::map<CellKey, CellStats> cells;
  for (const auto& [key, errs] : grouped) {
    CellStats st;
    st.replicates = static_cast<int>(errs.size());
    double sum = 0.0;
    for (double e : errs) sum += e;
    st.mean_sq_error = sum / st.replicates;
    if (st.replicates > 1) {
      double ss = 0.0;
      for (double e : errs) ss += (e - st.mean_sq_error) * (e - st.mean_sq_error);
      st.sd_sq_error = std::sqrt(ss / (st.replicates - 1));
    }
    cells[key] = st;
  }
  return cells;
}

std::string results_csv(const BenchResult& result) {
  std::string out = "function,snr,transform,filter,levels,method,replicates,mean_sq_error,sd_sq_error\n";
  for (const auto& [k, st] : result.cells) {
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", k.function, format_real(k.snr), to_string(k.transform),
                       to_string(k.filter), k.levels, to_string(k.method), st.replicates, format_real(st.mean_sq_error),
                       format_real(st.sd_sq_error));
  }
  return out;
}

std::string replicates_csv(const BenchResult& result) {
  std::string out = "function,snr,transform,filter,levels,method,replicate,sq_error\n";
  for (const auto& r : result.records) {
    const auto& k = r.key;
    out += fmt::format("{},{},{},{},{},{},{},{}\n", k.function, format_real(k.snr), to_string(k.transform),
                       to_string(k.filter), k.levels, to_string(k.method), r.replicate, format_real(r.sq_error));
  }
  return out;
}

std::optional<PublishedTable> published_table(TransformKind kind, Eigen::Index n, int levels) {
  using Row = std::map<std::string, double>;
  auto row = [](std::array<double, 8> v) {
    static const char* cols[] = {"bmp-low", "blk-low", "dpl-low", "hvs-low", "bmp-high", "blk-high", "dpl-high", "hvs-high"};
    Row r;
    for (int i = 0; i < 8; ++i) r[cols[i]] = v[i];
    return r;
  };
  PublishedTable t;
  if (kind == TransformKind::DWT && n == 512 && levels == 6) {
    t.title = "DWT, LA8, N=512, J0=6";
    t.rows["Caravan (mean)"] = row({3.9, 3.5, 1.8, 1.2, 21.0, 19.4, 8.4, 4.0});
    t.rows["Caravan (median)"] = row({3.9, 3.6, 1.8, 1.3, 21.3, 20.3, 8.7, 4.2});
    t.rows["EBayes (mean)"] = row({4.9, 3.8, 2.9, 1.2, 22.8, 18.8, 12.0, 4.3});
    t.rows["EBayes (median)"] = row({5.6, 4.3, 3.3, 1.2, 25.9, 20.6, 13.0, 4.0});
  } else if (kind == TransformKind::MODWT && n == 512 && levels == 4) {
    t.title = "MODWT, LA8, N=512, J0=4";
    t.rows["Caravan (mean)"] = row({3.2, 2.9, 1.5, 1.2, 15.6, 16.2, 7.5, 5.1});
    t.rows["Caravan (median)"] = row({3.2, 2.9, 1.5, 1.1, 15.3, 16.9, 7.3, 4.9});
    t.rows["EBayes (mean)"] = row({3.6, 3.0, 2.0, 1.2, 17.3, 17.7, 9.3, 4.5});
    t.rows["EBayes (median)"] = row({3.9, 3.2, 2.1, 1.2, 18.5, 19.4, 9.5, 4.4});
  } else if (kind == TransformKind::DWT && n == 256 && levels == 4) {
    t.title = "DWT, LA8, N=256, J0=4";
    t.rows["Caravan (mean)"] = row({2.8, 2.7, 1.5, 1.1, 16.2, 15.3, 6.9, 3.1});
    t.rows["Caravan (median)"] = row({2.8, 2.8, 1.5, 1.1, 18.0, 16.4, 7.2, 3.1});
    t.rows["EBayes (mean)"] = row({3.4, 2.8, 2.2, 1.0, 17.4, 13.8, 9.3, 3.3});
    t.rows["EBayes (median)"] = row({4.2, 3.1, 2.4, 1.0, 21.5, 15.4, 10.3, 3.1});
  } else if (kind == TransformKind::MODWT && n == 256 && levels == 3) {
    t.title = "MODWT, LA8, N=256, J0=3";
    t.rows["Caravan (mean)"] = row({2.3, 2.3, 1.3, 1.0, 12.2, 13.8, 6.3, 4.2});
    t.rows["Caravan (median)"] = row({2.3, 2.3, 1.3, 1.0, 12.7, 14.6, 6.2, 4.0});
    t.rows["EBayes (mean)"] = row({2.6, 2.4, 1.6, 1.0, 13.0, 14.2, 8.8, 3.9});
    t.rows["EBayes (median)"] = row({3.0, 2.6, 1.6, 1.1, 14.5, 16.1, 9.3, 3.8});
  } else {
    return std::nullopt;
  }
  return t;
}

std::string render_table(const BenchResult& result, Eigen::Index n) {
  struct Group {
    TransformKind transform;
    FilterName filter;
    int levels;
    bool operator<(const Group& o) const {
      return std::tie(transform, filter, levels) < std::tie(o.transform, o.filter, o.levels);
    }
  };
  std::map<Group, std::map<CellKey, CellStats>> groups;
  for (const auto& [k, st] : result.cells) groups[{k.transform, k.filter, k.levels}][k] = st;

  std::string out;
  for (const auto& [g, cells] : groups) {
    std::set<double, std::greater<>> snrs;
    std::vector<std::string> functions;
    std::set<Method> methods;
    for (const auto& [k, st] : cells) {
      snrs.insert(k.snr);
      methods.insert(k.method);
      if (std::find(functions.begin(), functions.end(), k.function) == functions.end()) functions.push_back(k.function);
    }
    std::sort(functions.begin(), functions.end(), [](const std::string& a, const std::string& b) {
      return parse_test_function(a) < parse_test_function(b);
    });

    out += fmt::format("Average squared errors: {} {}, N={}, J0={}\n", to_string(g.transform), to_string(g.filter), n,
                       g.levels);
    std::string header = fmt::format("{:<22}", "method");
    for (double snr : snrs)
      for (const auto& f : functions)
        header += fmt::format("{:>10}", fmt::format("{}@{}", parse_test_function(f).short_label(), format_real(snr)));
    out += header + "\n";

    auto cell_text = [](double v) { return fmt::format("{:>10.2f}", v); };
    for (Method m : methods) {
      std::string line = fmt::format("{:<22}", to_string(m));
      for (double snr : snrs)
        for (const auto& f : functions) {
          auto it = cells.find(CellKey{f, snr, g.transform, g.filter, g.levels, m});
          line += it == cells.end() ? fmt::format("{:>10}", "-") : cell_text(it->second.mean_sq_error);
        }
      out += line + "\n";
    }

    if (g.filter == FilterName::LA8) {
      if (auto ref = published_table(g.transform, n, g.levels)) {
        out += fmt::format("published reference: {}\n", ref->title);
        for (const auto& [label, row] : ref->rows) {
          std::string line = fmt::format("{:<22}", label + " *");
          for (double snr : snrs)
            for (const auto& f : functions) {
              const auto tf = parse_test_function(f);
              const char* noise = snr == 7.0 ? "low" : (snr == 3.0 ? "high" : nullptr);
              const std::string tag = tf.name == TestFunctionName::HeaviSine ? "hvs" : std::string(tf.short_label());
              auto it = noise ? row.find(tag + "-" + noise) : row.end();
              line += it == row.end() ? fmt::format("{:>10}", "-") : cell_text(it->second);
            }
          out += line + "\n";
        }
        out += "(* published values, reproduced for comparison only)\n";
      }
    }
    out += "\n";
  }
  return out;
}

}  // namespace caravan
