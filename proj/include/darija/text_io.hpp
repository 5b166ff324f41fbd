#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace darija::text_io {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view s);
std::size_t parse_size(std::string_view s);

/// Splits on ASCII spaces and tabs.
std::vector<std::string_view> split_fields(std::string_view line);

/// Line-oriented reader for the versioned text envelopes used by model and
/// parameter files. Errors name the line number.
class LineReader {
 public:
  explicit LineReader(std::istream& is) : is_(is) {}

  /// Next line; throws DataError at end of input.
  std::string next();
  /// Next line, which must start with `key` followed by a space or end of
  /// line. Returns the remainder.
  std::string expect(std::string_view key);
  std::size_t line_number() const { return line_; }
  [[noreturn]] void fail(const std::string& what) const;

 private:
  std::istream& is_;
  std::size_t line_ = 0;
};

/// `tensor <name> <rank> <dims...>` followed by the values in row-major
/// order, one row per line. Column vectors are written with rank 1.
void write_tensor(std::ostream& os, std::string_view name, const Eigen::MatrixXd& m);
/// Reads a tensor written by write_tensor; the name must match.
Eigen::MatrixXd read_tensor(LineReader& in, std::string_view name);

}  // namespace darija::text_io
