#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace caravan {

/// Shortest round-trip decimal form; identical bytes for identical doubles.
std::string format_real(double value);

/// Writes the whole file or throws std::runtime_error.
void write_text_file(const std::filesystem::path& path, std::string_view contents);

/// Numeric series read from a user file: one value per line, or CSV with a
/// header naming a `value` column. Lines starting with '#' are comments.
struct DataFile {
  Eigen::VectorXd values;
  std::optional<Eigen::VectorXd> index;
};

DataFile parse_data(std::string_view text, const std::string& column = "value");
DataFile read_data_file(const std::filesystem::path& path, const std::string& column = "value");

/// Collects output files under temporary names and renames them into place
/// on commit(). Anything not committed is deleted on destruction.
class OutputTransaction {
 public:
  OutputTransaction() = default;
  OutputTransaction(const OutputTransaction&) = delete;
  OutputTransaction& operator=(const OutputTransaction&) = delete;
  ~OutputTransaction();

  /// Temporary path to write instead of `target`.
  std::filesystem::path stage(const std::filesystem::path& target);
  void write(const std::filesystem::path& target, std::string_view contents);
  void commit();
  const std::vector<std::filesystem::path>& targets() const { return targets_; }

 private:
  std::vector<std::filesystem::path> targets_;
  std::vector<std::filesystem::path> staged_;
  bool committed_ = false;
};

}  // namespace caravan
