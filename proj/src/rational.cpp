#include "recbound/rational.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace recbound {

std::optional<Rat> parse_rat(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) return std::nullopt;
  bool neg = false;
  std::size_t i = 0;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  auto read_int = [&](Int& out) -> bool {
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
      return false;
    Int v = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      v = v * 10 + (s[i] - '0');
      ++i;
    }
    out = v;
    return true;
  };
  Int num;
  if (!read_int(num)) return std::nullopt;
  Int den = 1;
  if (i < s.size() && s[i] == '/') {
    ++i;
    if (!read_int(den) || den == 0) return std::nullopt;
  }
  if (i != s.size()) return std::nullopt;
  Rat r(num, den);
  if (neg) r = -r;
  return r;
}

std::string rat_to_string(const Rat& r) {
  std::string num = numerator(r).str();
  if (denominator(r) == 1) return num;
  return num + "/" + denominator(r).str();
}

Int rat_floor(const Rat& r) {
  Int q = numerator(r) / denominator(r);
  if (r < 0 && q * denominator(r) != numerator(r)) q -= 1;
  return q;
}

}  // namespace recbound
