#include "darija/text_io.hpp"

#include "darija/error.hpp"

#include <charconv>
#include <istream>
#include <ostream>

namespace darija::text_io {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw DataError("invalid number '" + std::string(s) + "'");
  }
  return v;
}

std::size_t parse_size(std::string_view s) {
  std::size_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw DataError("invalid count '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
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

std::string LineReader::next() {
  std::string line;
  if (!std::getline(is_, line)) fail("unexpected end of input");
  ++line_;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::string LineReader::expect(std::string_view key) {
  auto line = next();
  const bool ok = line.compare(0, key.size(), key) == 0 && (line.size() == key.size() || line[key.size()] == ' ');
  if (!ok) fail("expected '" + std::string(key) + "', found '" + line + "'");
  return line.size() == key.size() ? std::string{} : line.substr(key.size() + 1);
}

void LineReader::fail(const std::string& what) const {
  throw DataError("line " + std::to_string(line_) + ": " + what);
}

void write_tensor(std::ostream& os, std::string_view name, const Eigen::MatrixXd& m) {
  os << "tensor " << name;
  if (m.cols() == 1) {
    os << " 1 " << m.rows() << '\n';
  } else {
    os << " 2 " << m.rows() << ' ' << m.cols() << '\n';
  }
  const Eigen::Index rows = m.cols() == 1 ? 1 : m.rows();
  const Eigen::Index cols = m.cols() == 1 ? m.rows() : m.cols();
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (c > 0) os << ' ';
      os << format_double(m.cols() == 1 ? m(c, 0) : m(r, c));
    }
    os << '\n';
  }
}

Eigen::MatrixXd read_tensor(LineReader& in, std::string_view name) {
  const auto header = in.expect("tensor");
  const auto f = split_fields(header);
  if (f.size() < 3 || f[0] != name) in.fail("expected tensor '" + std::string(name) + "'");
  const auto rank = parse_size(f[1]);
  if ((rank != 1 && rank != 2) || f.size() != 2 + rank) in.fail("bad tensor shape for '" + std::string(name) + "'");
  const auto d0 = static_cast<Eigen::Index>(parse_size(f[2]));
  const Eigen::Index rows = rank == 1 ? 1 : d0;
  const Eigen::Index cols = rank == 1 ? d0 : static_cast<Eigen::Index>(parse_size(f[3]));
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto line = in.next();
    const auto vals = split_fields(line);
    if (static_cast<Eigen::Index>(vals.size()) != cols) in.fail("tensor '" + std::string(name) + "': wrong row width");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = parse_double(vals[static_cast<std::size_t>(c)]);
  }
  if (rank == 1) return m.transpose();
  return m;
}

}  // namespace darija::text_io
