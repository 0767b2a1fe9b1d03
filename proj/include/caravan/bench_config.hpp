#pragma once

#include "caravan/bench.hpp"

#include <string_view>

namespace caravan {

/// Parses a `key = value` benchmark description ('#' starts a comment,
/// lists are comma separated). A `preset` key seeds the spec from one of
/// the built-in presets; later keys override it. Throws on unknown keys or
/// malformed values, naming the offending key.
BenchSpec parse_bench_spec(std::string_view text);

/// table1 / table2 (N=512, DWT J0=6 / MODWT J0=4) and table3 / table4
/// (N=256, DWT J0=4 / MODWT J0=3): the four test functions, SNR 7 and 3,
/// caravan mean and median, 20 replicates, 30000 iterations (100000 for
/// Blocks and HeaviSine where the published runs used them).
BenchSpec preset_bench_spec(std::string_view name);

}  // namespace caravan
