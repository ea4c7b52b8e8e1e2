#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bv/interval.hpp"

namespace bv {

// Exact representation of an angle alpha used as exp(2*pi*i*alpha).
//
// Three kinds:
//   Rational        -- alpha = p/q exactly
//   ContinuedFraction -- alpha = [0; a_1, a_2, ...] with positive integer coefficients,
//                        stored as a finite prefix plus an eventually repeating cycle
//   Affine          -- alpha = m*base + n with integers m, n and a non-rational base
//
// A finite continued fraction is a rational number and is normalized to Rational;
// an Affine over a Rational base likewise collapses to Rational.
class AngleSpec {
 public:
  enum class Kind { Rational, ContinuedFraction, Affine };

  static AngleSpec rational(const Rat& value);
  // prefix then infinitely repeated cycle; empty cycle means a finite (rational) CF
  static AngleSpec continued_fraction(std::vector<Int> prefix, std::vector<Int> cycle);
  static AngleSpec affine(const Int& m, const AngleSpec& base, const Int& n);

  Kind kind() const { return kind_; }
  const Rat& rational_value() const;                // Kind::Rational only
  bool is_rational() const { return kind_ == Kind::Rational; }

  // k-th continued fraction coefficient a_k (k >= 1); Kind::ContinuedFraction only.
  Int cf_coefficient(std::size_t k) const;
  const std::vector<Int>& cf_prefix() const { return cf_prefix_; }
  const std::vector<Int>& cf_cycle() const { return cf_cycle_; }

  const Int& affine_m() const { return m_; }
  const Int& affine_n() const { return n_; }
  const AngleSpec& affine_base() const { return *base_; }

  // Textual forms: rat:3/8 | cf:1,2,~3,4 (prefix 1,2 then cycle 3,4) | affine:2*cf:~1+(-1)
  static AngleSpec parse(const std::string& text);
  std::string to_string() const;

  bool operator==(const AngleSpec& other) const { return to_string() == other.to_string(); }

 private:
  AngleSpec() = default;

  Kind kind_ = Kind::Rational;
  Rat rational_;
  std::vector<Int> cf_prefix_;
  std::vector<Int> cf_cycle_;
  Int m_, n_;
  std::shared_ptr<const AngleSpec> base_;
};

// Convergents (p_k, q_k) for k = 0..n of a positive-integer coefficient sequence:
// p_0=0, p_1=1, p_k = a_k p_{k-1} + p_{k-2}; q_0=1, q_1=a_1, q_k = a_k q_{k-1} + q_{k-2}.
// Rejects nonpositive coefficients.
std::vector<std::pair<Int, Int>> cf_convergents(const std::vector<Int>& coeffs, std::size_t n);

// Enclosure of the angle reduced mod 1 into [0,1), width <= precision.
Interval angle_value(const AngleSpec& spec, const Rat& precision);

// Enclosure of alpha * x for integer x, reduced mod 1 (phase of lambda^x).
Interval angle_times(const AngleSpec& spec, const Int& x, const Rat& precision);

}  // namespace bv
