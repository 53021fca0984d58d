#pragma once

#include <boost/rational.hpp>

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ngonlift {

/// Exact rational scalar used for all symbolic matrix data.
/// Denominators stay tiny here (products of cosine/sine basis functions
/// only ever introduce factors of 1/2), so 64-bit components are ample.
using Rat = boost::rational<std::int64_t>;

inline double to_double(const Rat& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

/// "3", "-1/2", ... (no "/1" suffix for integers).
inline std::string rat_to_string(const Rat& r) {
  std::string s = std::to_string(r.numerator());
  if (r.denominator() != 1) {
    s += '/';
    s += std::to_string(r.denominator());
  }
  return s;
}

inline Rat rat_from_string(const std::string& s) {
  const auto slash = s.find('/');
  auto parse = [&](std::size_t b, std::size_t e) {
    std::int64_t v = 0;
    auto res = std::from_chars(s.data() + b, s.data() + e, v);
    if (res.ec != std::errc{} || res.ptr != s.data() + e)
      throw std::invalid_argument("rat_from_string: bad rational '" + s + "'");
    return v;
  };
  if (slash == std::string::npos) return Rat(parse(0, s.size()));
  return Rat(parse(0, slash), parse(slash + 1, s.size()));
}

/// Shortest decimal string that parses back to exactly the same double.
inline std::string double_to_string(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace ngonlift
