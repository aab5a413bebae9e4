#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <type_traits>
#include <vector>

namespace btq {

/// Shortest round-trip text for a double ("%.17g"); -inf and nan are
/// written as "-inf" / "nan".
std::string format_number(double v);

class CsvWriter {
public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void header(const std::vector<std::string>& cols);

  template <class... Ts>
  void row(const Ts&... vals) {
    bool first = true;
    ((os_ << (first ? "" : ",") << cell(vals), first = false), ...);
    os_ << '\n';
  }

private:
  template <class T>
  static std::string cell(const T& v) {
    if constexpr (std::is_floating_point_v<T>)
      return format_number(static_cast<double>(v));
    else if constexpr (std::is_integral_v<T>)
      return std::to_string(v);
    else
      return std::string(v);
  }

  std::ostream& os_;
};

/// Minimal CSV reader for the files this project writes (no quoting).
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};
CsvTable read_csv(const std::string& path);

/// Writes via `<path>.tmp` and renames into place.
void write_file_atomic(const std::string& path, const std::function<void(std::ostream&)>& body);

/// FNV-1a 64-bit over the file bytes, as 16 hex digits.
std::string file_checksum(const std::string& path);
std::string checksum_bytes(const std::string& bytes);

} // namespace btq
