#include "btq/quantize.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace btq {

namespace {

constexpr const char* kMagic = "btq-matrix 1";

std::string hexfloat(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_hex(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw std::runtime_error("matrix file: bad number '" + s + "'");
  return v;
}

std::string expect_field(std::istream& is, const std::string& key) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("matrix file: missing '" + key + "'");
  const auto sp = line.find(' ');
  if (line.substr(0, sp) != key) throw std::runtime_error("matrix file: expected '" + key + "', got '" + line + "'");
  return sp == std::string::npos ? std::string{} : line.substr(sp + 1);
}

} // namespace

void write_matrix(std::ostream& os, const ToeplitzMatrix& t) {
  os << kMagic << '\n';
  os << "kind " << to_string(t.space.kind) << '\n';
  os << "N " << t.N << '\n';
  os << "dim " << t.dim << '\n';
  os << "symbol " << to_record(t.symbol) << '\n';
  os << "data\n";
  for (Eigen::Index i = 0; i < t.entries.rows(); ++i) {
    for (Eigen::Index j = 0; j < t.entries.cols(); ++j) {
      const cplx v = t.entries(i, j);
      os << (j ? " " : "") << hexfloat(v.real()) << ' ' << hexfloat(v.imag());
    }
    os << '\n';
  }
}

ToeplitzMatrix read_matrix(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kMagic) throw std::runtime_error("matrix file: bad magic line");
  ToeplitzMatrix t;
  t.space = make_phase_space(parse_space_kind(expect_field(is, "kind")));
  t.N = std::stoi(expect_field(is, "N"));
  t.dim = std::stoi(expect_field(is, "dim"));
  t.symbol = from_record(expect_field(is, "symbol"));
  expect_field(is, "data");
  if (t.dim != bergman_dimension(t.space, t.N)) throw std::runtime_error("matrix file: dim does not match N");
  t.entries.resize(t.dim, t.dim);
  for (int i = 0; i < t.dim; ++i) {
    if (!std::getline(is, line)) throw std::runtime_error("matrix file: truncated data");
    std::istringstream row(line);
    for (int j = 0; j < t.dim; ++j) {
      std::string re, im;
      if (!(row >> re >> im)) throw std::runtime_error("matrix file: short row " + std::to_string(i));
      t.entries(i, j) = cplx(parse_hex(re), parse_hex(im));
    }
  }
  return t;
}

void save_matrix(const std::string& path, const ToeplitzMatrix& t) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_matrix(os, t);
}

ToeplitzMatrix load_matrix(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  return read_matrix(is);
}

} // namespace btq
