#include "bv/rational.hpp"

namespace bv {

std::string rat_to_decimal(const Rat& x, int digits) {
  Rat a = rat_abs(x);
  Int scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  Rat scaled = a * Rat(scale);
  Int whole = rat_floor(scaled);
  std::string s = whole.get_str();
  if (static_cast<int>(s.size()) <= digits) s.insert(0, digits + 1 - s.size(), '0');
  s.insert(s.size() - digits, ".");
  bool truncated = (Rat(whole) != scaled);
  if (x < 0) s.insert(0, "-");
  if (truncated) s += "~";
  return s;
}

}  // namespace bv
