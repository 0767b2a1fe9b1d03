#include "caravan/wavelet.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace caravan {

namespace {

std::string lower(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

std::string_view to_string(FilterName name) {
  switch (name) {
    case FilterName::Haar: return "haar";
    case FilterName::D4: return "d4";
    case FilterName::LA8: return "la8";
  }
  throw std::invalid_argument("unsupported filter name");
}

std::string_view to_string(TransformKind kind) {
  return kind == TransformKind::DWT ? "dwt" : "modwt";
}

FilterName parse_filter_name(std::string_view text) {
  const auto s = lower(text);
  if (s == "haar") return FilterName::Haar;
  if (s == "d4") return FilterName::D4;
  if (s == "la8") return FilterName::LA8;
  throw std::invalid_argument("unsupported filter '" + std::string(text) + "' (expected haar, d4 or la8)");
}

TransformKind parse_transform_kind(std::string_view text) {
  const auto s = lower(text);
  if (s == "dwt") return TransformKind::DWT;
  if (s == "modwt") return TransformKind::MODWT;
  throw std::invalid_argument("unsupported transform '" + std::string(text) + "' (expected dwt or modwt)");
}

}  // namespace caravan
