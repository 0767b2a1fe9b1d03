#include "caravan/bench_config.hpp"

#include "caravan/parallel.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace caravan {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    auto pos = value.find(',', start);
    if (pos == std::string::npos) pos = value.size();
    auto item = trim(std::string_view(value).substr(start, pos - start));
    if (!item.empty()) out.push_back(item);
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& why) {
  throw std::invalid_argument("benchmark spec key '" + key + "': invalid value '" + value + "' (" + why + ")");
}

long long to_integer(const std::string& key, const std::string& value) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) bad_value(key, value, "expected an integer");
  return v;
}

double to_real(const std::string& key, const std::string& value) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) bad_value(key, value, "expected a number");
  return v;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "yes" || value == "1") return true;
  if (value == "false" || value == "no" || value == "0") return false;
  bad_value(key, value, "expected true or false");
}

// Mutable description that is expanded into a BenchSpec at the end, so keys
// may appear in any order.
struct Draft {
  BenchSpec spec;
  std::vector<TransformKind> transforms = {TransformKind::DWT};
  std::map<TransformKind, int> levels = {{TransformKind::DWT, 6}, {TransformKind::MODWT, 4}};
  std::vector<Method> methods = {Method::CaravanMean, Method::CaravanMedian};
  FilterName filter = FilterName::LA8;
  int iterations = 30000;
  int burn_in = -1;
  int thinning = 1;
  std::optional<SigmaMode> sigma_mode;
  bool align = false;
  CaravanHyper hyper;

  BenchSpec build() const {
    BenchSpec out = spec;
    out.configs.clear();
    for (TransformKind t : transforms) {
      for (Method m : methods) {
        DenoiseConfig c;
        c.transform = t;
        c.filter = filter;
        c.levels = levels.at(t);
        c.method = m;
        c.chain.iterations = iterations;
        c.chain.burn_in = burn_in < 0 ? iterations / 3 : burn_in;
        c.chain.thinning = thinning;
        c.chain.seed = spec.seed;
        c.hyper = hyper;
        c.sigma_mode = sigma_mode.value_or(DenoiseConfig::default_sigma_mode(t));
        if (t == TransformKind::DWT) c.sigma_mode = SigmaMode::MadLevel1;
        c.align = align;
        out.configs.push_back(c);
      }
    }
    return out;
  }
};

Draft preset_draft(std::string_view name) {
  Draft d;
  d.spec.functions = {{TestFunctionName::Bumps}, {TestFunctionName::Blocks}, {TestFunctionName::Doppler},
                      {TestFunctionName::HeaviSine}};
  d.spec.snr_values = {7.0, 3.0};
  d.spec.replicates = 20;
  d.spec.seed = 20180628;
  d.spec.threads = default_thread_count();
  if (name == "table1") {
    d.spec.n = 512;
    d.transforms = {TransformKind::DWT};
    d.levels[TransformKind::DWT] = 6;
    d.spec.iterations_override = {{TestFunctionName::Blocks, 100000}, {TestFunctionName::HeaviSine, 100000}};
  } else if (name == "table2") {
    d.spec.n = 512;
    d.transforms = {TransformKind::MODWT};
    d.levels[TransformKind::MODWT] = 4;
    d.spec.iterations_override = {{TestFunctionName::Blocks, 100000}, {TestFunctionName::HeaviSine, 100000}};
  } else if (name == "table3") {
    d.spec.n = 256;
    d.transforms = {TransformKind::DWT};
    d.levels[TransformKind::DWT] = 4;
    d.spec.iterations_override = {{TestFunctionName::HeaviSine, 100000}};
  } else if (name == "table4") {
    d.spec.n = 256;
    d.transforms = {TransformKind::MODWT};
    d.levels[TransformKind::MODWT] = 3;
    d.spec.iterations_override = {{TestFunctionName::HeaviSine, 100000}};
  } else {
    throw std::invalid_argument("unknown benchmark preset '" + std::string(name) +
                                "' (expected table1, table2, table3 or table4)");
  }
  return d;
}

void apply(Draft& d, const std::string& key, const std::string& value) {
  if (key == "functions") {
    d.spec.functions.clear();
    for (const auto& f : split_list(value)) {
      try {
        d.spec.functions.push_back(parse_test_function(f));
      } catch (const std::invalid_argument& e) {
        bad_value(key, value, e.what());
      }
    }
  } else if (key == "n") {
    d.spec.n = to_integer(key, value);
    if (d.spec.n < 2) bad_value(key, value, "N must be at least 2");
  } else if (key == "snr") {
    d.spec.snr_values.clear();
    for (const auto& s : split_list(value)) d.spec.snr_values.push_back(to_real(key, s));
  } else if (key == "replicates") {
    d.spec.replicates = static_cast<int>(to_integer(key, value));
  } else if (key == "seed") {
    d.spec.seed = static_cast<std::uint64_t>(to_integer(key, value));
  } else if (key == "threads") {
    d.spec.threads = static_cast<int>(to_integer(key, value));
  } else if (key == "transform" || key == "transforms") {
    d.transforms.clear();
    for (const auto& t : split_list(value)) {
      try {
        d.transforms.push_back(parse_transform_kind(t));
      } catch (const std::invalid_argument& e) {
        bad_value(key, value, e.what());
      }
    }
  } else if (key == "filter") {
    try {
      d.filter = parse_filter_name(value);
    } catch (const std::invalid_argument& e) {
      bad_value(key, value, e.what());
    }
  } else if (key == "levels") {
    const int l = static_cast<int>(to_integer(key, value));
    d.levels[TransformKind::DWT] = l;
    d.levels[TransformKind::MODWT] = l;
  } else if (key == "levels.dwt") {
    d.levels[TransformKind::DWT] = static_cast<int>(to_integer(key, value));
  } else if (key == "levels.modwt") {
    d.levels[TransformKind::MODWT] = static_cast<int>(to_integer(key, value));
  } else if (key == "methods" || key == "method") {
    d.methods.clear();
    for (const auto& m : split_list(value)) {
      try {
        d.methods.push_back(parse_method(m));
      } catch (const std::invalid_argument& e) {
        bad_value(key, value, e.what());
      }
    }
  } else if (key == "iterations") {
    d.iterations = static_cast<int>(to_integer(key, value));
    d.spec.iterations_override.clear();
  } else if (key.rfind("iterations.", 0) == 0) {
    TestFunction f;
    try {
      f = parse_test_function(key.substr(11));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("unknown benchmark spec key '" + key + "'");
    }
    d.spec.iterations_override[f.name] = static_cast<int>(to_integer(key, value));
  } else if (key == "burn_in") {
    d.burn_in = static_cast<int>(to_integer(key, value));
  } else if (key == "thinning") {
    d.thinning = static_cast<int>(to_integer(key, value));
  } else if (key == "sigma_mode") {
    try {
      d.sigma_mode = parse_sigma_mode(value);
    } catch (const std::invalid_argument& e) {
      bad_value(key, value, e.what());
    }
  } else if (key == "align") {
    d.align = to_bool(key, value);
  } else if (key == "a0") {
    d.hyper.a0 = to_real(key, value);
  } else if (key == "b0") {
    d.hyper.b0 = to_real(key, value);
  } else if (key == "a_a") {
    d.hyper.a_a = to_real(key, value);
  } else if (key == "b_a") {
    d.hyper.b_a = to_real(key, value);
  } else if (key == "a_gl") {
    d.hyper.a_gl = to_real(key, value);
  } else if (key == "b_gl") {
    d.hyper.b_gl = to_real(key, value);
  } else if (key == "c_a") {
    d.hyper.c_a = to_real(key, value);
  } else if (key == "c_gl") {
    d.hyper.c_gl = to_real(key, value);
  } else {
    throw std::invalid_argument("unknown benchmark spec key '" + key + "'");
  }
}

}  // namespace

BenchSpec preset_bench_spec(std::string_view name) { return preset_draft(name).build(); }

BenchSpec parse_bench_spec(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("benchmark spec line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    auto key = trim(std::string_view(line).substr(0, eq));
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
    entries.emplace_back(key, trim(std::string_view(line).substr(eq + 1)));
  }

  Draft draft;
  draft.spec.functions = {{TestFunctionName::Bumps}};
  draft.spec.replicates = 1;
  draft.spec.threads = default_thread_count();
  for (const auto& [key, value] : entries) {
    if (key == "preset") draft = preset_draft(value);
  }
  // A plain `iterations` resets per-function overrides, so it goes first.
  for (const auto& [key, value] : entries) {
    if (key == "iterations") apply(draft, key, value);
  }
  for (const auto& [key, value] : entries) {
    if (key != "preset" && key != "iterations") apply(draft, key, value);
  }
  BenchSpec spec = draft.build();
  spec.validate();
  return spec;
}

}  // namespace caravan
