#include "caravan/io.hpp"

#include <fmt/format.h>

#include <cerrno>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace caravan {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  if (line.find(',') != std::string_view::npos) {
    std::size_t start = 0;
    while (true) {
      const auto pos = line.find(',', start);
      out.push_back(trim(line.substr(start, pos - start)));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
    return out;
  }
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<double> to_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

std::string format_real(double value) { return fmt::format("{}", value); }

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

DataFile parse_data(std::string_view text, const std::string& column) {
  std::vector<double> values, index;
  int value_col = -1, index_col = -1;
  bool header_seen = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    const auto fields = split_fields(line);
    if (!header_seen && values.empty()) {
      header_seen = true;
      bool numeric = true;
      for (auto f : fields) numeric = numeric && to_number(f).has_value();
      if (!numeric) {
        for (std::size_t c = 0; c < fields.size(); ++c) {
          if (fields[c] == column) value_col = static_cast<int>(c);
          if (fields[c] == "index" || fields[c] == "t") index_col = static_cast<int>(c);
        }
        if (value_col < 0 && fields.size() == 1) value_col = 0;
        if (value_col < 0) {
          throw std::runtime_error("line " + std::to_string(line_no) + ": header has no '" + column + "' column");
        }
        continue;
      }
      if (fields.size() == 1) {
        value_col = 0;
      } else if (fields.size() == 2) {
        index_col = 0;
        value_col = 1;
      } else {
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": headerless input must have one value (or index,value) per line");
      }
    }
    if (static_cast<int>(fields.size()) <= std::max(value_col, index_col)) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": missing column");
    }
    const auto v = to_number(fields[value_col]);
    if (!v || !std::isfinite(*v)) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": non-numeric value '" +
                               std::string(fields[value_col]) + "'");
    }
    values.push_back(*v);
    if (index_col >= 0) {
      const auto t = to_number(fields[index_col]);
      if (!t) throw std::runtime_error("line " + std::to_string(line_no) + ": non-numeric index");
      index.push_back(*t);
    }
  }
  if (values.size() < 2) throw std::runtime_error("input must contain at least 2 values");
  DataFile out;
  out.values = Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  if (!index.empty()) out.index = Eigen::Map<Eigen::VectorXd>(index.data(), static_cast<Eigen::Index>(index.size()));
  return out;
}

DataFile read_data_file(const std::filesystem::path& path, const std::string& column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_data(ss.str(), column);
}

OutputTransaction::~OutputTransaction() {
  if (committed_) return;
  std::error_code ec;
  for (const auto& p : staged_) std::filesystem::remove(p, ec);
}

std::filesystem::path OutputTransaction::stage(const std::filesystem::path& target) {
  auto tmp = target;
  tmp += ".partial";
  targets_.push_back(target);
  staged_.push_back(tmp);
  return tmp;
}

void OutputTransaction::write(const std::filesystem::path& target, std::string_view contents) {
  write_text_file(stage(target), contents);
}

void OutputTransaction::commit() {
  std::size_t done = 0;
  try {
    for (; done < staged_.size(); ++done) std::filesystem::rename(staged_[done], targets_[done]);
  } catch (...) {
    // Roll back so a failed commit leaves no half-written artifact set.
    std::error_code ec;
    for (std::size_t i = 0; i < done; ++i) std::filesystem::remove(targets_[i], ec);
    throw;
  }
  committed_ = true;
}

}  // namespace caravan
