#include "bv/angle.hpp"

#include <sstream>
#include <stdexcept>

namespace bv {

namespace {

Rat finite_cf_value(const std::vector<Int>& coeffs) {
  Rat x(0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    x = make_rat(Int(1), Int(1)) / (Rat(*it) + x);
  }
  return x;
}

void check_coeffs(const std::vector<Int>& coeffs) {
  for (const auto& a : coeffs) {
    if (a < 1) throw std::invalid_argument("continued fraction coefficients must be >= 1");
  }
}

}  // namespace

AngleSpec AngleSpec::rational(const Rat& value) {
  AngleSpec s;
  s.kind_ = Kind::Rational;
  s.rational_ = rat_mod1(value);
  return s;
}

AngleSpec AngleSpec::continued_fraction(std::vector<Int> prefix, std::vector<Int> cycle) {
  check_coeffs(prefix);
  check_coeffs(cycle);
  if (cycle.empty()) return rational(finite_cf_value(prefix));  // finite CF is rational
  AngleSpec s;
  s.kind_ = Kind::ContinuedFraction;
  s.cf_prefix_ = std::move(prefix);
  s.cf_cycle_ = std::move(cycle);
  return s;
}

AngleSpec AngleSpec::affine(const Int& m, const AngleSpec& base, const Int& n) {
  if (base.is_rational()) return rational(Rat(m) * base.rational_value() + Rat(n));
  if (m == 0) return rational(Rat(n));
  AngleSpec s;
  s.kind_ = Kind::Affine;
  s.m_ = m;
  s.n_ = n;
  s.base_ = std::make_shared<AngleSpec>(base);
  return s;
}

const Rat& AngleSpec::rational_value() const {
  if (kind_ != Kind::Rational) throw std::logic_error("AngleSpec: not rational");
  return rational_;
}

Int AngleSpec::cf_coefficient(std::size_t k) const {
  if (kind_ != Kind::ContinuedFraction) throw std::logic_error("AngleSpec: not a continued fraction");
  if (k == 0) throw std::invalid_argument("cf coefficients are indexed from 1");
  if (k <= cf_prefix_.size()) return cf_prefix_[k - 1];
  return cf_cycle_[(k - 1 - cf_prefix_.size()) % cf_cycle_.size()];
}

std::vector<std::pair<Int, Int>> cf_convergents(const std::vector<Int>& coeffs, std::size_t n) {
  check_coeffs(coeffs);
  if (n > coeffs.size()) throw std::invalid_argument("cf_convergents: not enough coefficients");
  std::vector<std::pair<Int, Int>> out;
  out.reserve(n + 1);
  Int p_prev = 1, p = 0;  // p_{-1} = 1, p_0 = 0
  Int q_prev = 0, q = 1;  // q_{-1} = 0, q_0 = 1
  out.emplace_back(p, q);
  for (std::size_t k = 1; k <= n; ++k) {
    Int pk = coeffs[k - 1] * p + p_prev;
    Int qk = coeffs[k - 1] * q + q_prev;
    p_prev = p; p = pk;
    q_prev = q; q = qk;
    out.emplace_back(p, q);
  }
  return out;
}

namespace {

// Enclosure of a non-rational continued fraction value using the convergent sandwich
// p_{2k}/q_{2k} < alpha < p_{2k+1}/q_{2k+1}.
Interval cf_value(const AngleSpec& spec, const Rat& precision) {
  Int p_prev = 1, p = 0, q_prev = 0, q = 1;
  Rat even_side, odd_side;
  std::size_t k = 0;
  while (true) {
    ++k;
    Int a = spec.cf_coefficient(k);
    Int pk = a * p + p_prev;
    Int qk = a * q + q_prev;
    p_prev = p; p = pk;
    q_prev = q; q = qk;
    if (k >= 2 && make_rat(Int(1), q * q_prev) <= precision) {
      Rat last = make_rat(p, q);
      Rat before = make_rat(p_prev, q_prev);
      return k % 2 == 1 ? Interval(before, last) : Interval(last, before);
    }
    if (k > 100000) throw std::runtime_error("cf_value: did not reach requested precision");
  }
}

// shift an interval so its lower endpoint lies in [0,1)
Interval shift_mod1(const Interval& v) {
  Rat shift(rat_floor(v.lo));
  return Interval(v.lo - shift, v.hi - shift);
}

}  // namespace

Interval angle_value(const AngleSpec& spec, const Rat& precision) {
  if (precision <= 0) throw std::invalid_argument("angle_value: precision must be > 0");
  switch (spec.kind()) {
    case AngleSpec::Kind::Rational:
      return Interval(spec.rational_value());
    case AngleSpec::Kind::ContinuedFraction:
      return cf_value(spec, precision);
    case AngleSpec::Kind::Affine: {
      Rat scale = rat_abs(Rat(spec.affine_m())) + 1;
      Interval base = angle_value(spec.affine_base(), precision / scale);
      Interval v = Rat(spec.affine_m()) * base + Interval(Rat(spec.affine_n()));
      return shift_mod1(v);
    }
  }
  throw std::logic_error("angle_value: unknown kind");
}

Interval angle_times(const AngleSpec& spec, const Int& x, const Rat& precision) {
  if (spec.is_rational()) return Interval(rat_mod1(spec.rational_value() * Rat(x)));
  if (x == 0) return Interval(Rat(0));
  Rat scale = rat_abs(Rat(x)) + 1;
  Interval v = angle_value(spec, precision / scale) * Interval(Rat(x));
  return shift_mod1(v);
}

// --- textual form -----------------------------------------------------------

namespace {

std::vector<Int> parse_int_list(const std::string& text) {
  std::vector<Int> out;
  std::string cur;
  for (char c : text + ",") {
    if (c == ',') {
      if (!cur.empty()) out.emplace_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

}  // namespace

AngleSpec AngleSpec::parse(const std::string& text) {
  if (text.rfind("rat:", 0) == 0) {
    std::string body = text.substr(4);
    auto slash = body.find('/');
    if (slash == std::string::npos) return rational(Rat(Int(body)));
    Int num(body.substr(0, slash)), den(body.substr(slash + 1));
    if (den <= 0) throw std::invalid_argument("rat: denominator must be positive");
    return rational(make_rat(num, den));
  }
  if (text.rfind("cf:", 0) == 0) {
    std::string body = text.substr(3);
    auto tilde = body.find('~');
    std::string prefix_part = tilde == std::string::npos ? body : body.substr(0, tilde);
    std::string cycle_part = tilde == std::string::npos ? "" : body.substr(tilde + 1);
    return continued_fraction(parse_int_list(prefix_part), parse_int_list(cycle_part));
  }
  if (text.rfind("affine:", 0) == 0) {
    // affine:<m>*<base>+(<n>)
    std::string body = text.substr(7);
    auto star = body.find('*');
    auto plus = body.rfind("+(");
    if (star == std::string::npos || plus == std::string::npos || body.back() != ')')
      throw std::invalid_argument("affine: expected affine:<m>*<base>+(<n>)");
    Int m(body.substr(0, star));
    Int n(body.substr(plus + 2, body.size() - plus - 3));
    AngleSpec base = parse(body.substr(star + 1, plus - star - 1));
    return affine(m, base, n);
  }
  throw std::invalid_argument("unrecognized angle spec: " + text);
}

std::string AngleSpec::to_string() const {
  switch (kind_) {
    case Kind::Rational:
      return "rat:" + rat_to_string(rational_);
    case Kind::ContinuedFraction: {
      std::ostringstream os;
      os << "cf:";
      for (std::size_t i = 0; i < cf_prefix_.size(); ++i) {
        if (i) os << ",";
        os << cf_prefix_[i].get_str();
      }
      os << "~";
      for (std::size_t i = 0; i < cf_cycle_.size(); ++i) {
        if (i) os << ",";
        os << cf_cycle_[i].get_str();
      }
      return os.str();
    }
    case Kind::Affine:
      return "affine:" + m_.get_str() + "*" + base_->to_string() + "+(" + n_.get_str() + ")";
  }
  return "";
}

}  // namespace bv
