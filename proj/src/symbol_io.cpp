#include "btq/geometry.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace btq {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("symbol record: bad number '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("symbol record: bad number '" + s + "'");
  return v;
}

int parse_int(const std::string& s) {
  int v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw std::invalid_argument("symbol record: bad integer '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

} // namespace

std::string to_record(const SymbolSpec& f) {
  std::ostringstream os;
  os << to_string(f.kind());
  const int arity = f.kind() == SpaceKind::Torus2 ? 2 : 3;
  for (std::size_t j = 0; j < f.orders().size(); ++j) {
    for (const auto& [e, c] : f.orders()[j]) {
      os << ' ';
      if (j > 0) os << j << ':';
      for (int i = 0; i < arity; ++i) os << (i ? "," : "") << e[static_cast<std::size_t>(i)];
      os << '=' << format_double(c.real()) << ',' << format_double(c.imag());
    }
  }
  return os.str();
}

SymbolSpec from_record(const std::string& record) {
  std::istringstream is(record);
  std::string tag;
  if (!(is >> tag)) throw std::invalid_argument("symbol record: empty");
  const SpaceKind kind = parse_space_kind(tag);
  const int arity = kind == SpaceKind::Torus2 ? 2 : 3;
  SymbolSpec f(kind, {});
  std::string entry;
  while (is >> entry) {
    int order = 0;
    std::string body = entry;
    if (const auto colon = entry.find(':'); colon != std::string::npos) {
      order = parse_int(entry.substr(0, colon));
      body = entry.substr(colon + 1);
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("symbol record: entry '" + entry + "' lacks '='");
    const auto exps = split(body.substr(0, eq), ',');
    const auto val = split(body.substr(eq + 1), ',');
    if (static_cast<int>(exps.size()) != arity)
      throw std::invalid_argument("symbol record: entry '" + entry + "' has wrong exponent count");
    if (val.size() != 2) throw std::invalid_argument("symbol record: entry '" + entry + "' needs re,im");
    Exponents e{0, 0, 0};
    for (int i = 0; i < arity; ++i) e[static_cast<std::size_t>(i)] = parse_int(exps[static_cast<std::size_t>(i)]);
    f.add_term(e, cplx(parse_double(val[0]), parse_double(val[1])), order);
  }
  return f;
}

} // namespace btq
