#pragma once

// Exact coefficient fields.
//
// Three field policies share one duck-typed interface (value_type, zero, one,
// add, sub, mul, neg, inv, is_zero, from_integer, sample_nonzero, format):
//
//   Gf2            the two-element field; matrices over it are bit-packed
//   PrimeField     F_p for a prime p < 2^31, residues in uint32
//   RationalField  Q with arbitrary-precision reduced fractions
//
// FieldElement is the dynamically typed counterpart used at API boundaries,
// where operands of different fields must be rejected.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include <boost/multiprecision/cpp_int.hpp>

#include "frozenrank/errors.hpp"
#include "frozenrank/random.hpp"

namespace frozenrank {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

constexpr bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0 || n % 3 == 0) return false;
  for (std::uint64_t k = 5; k * k <= n; k += 6) {
    if (n % k == 0 || n % (k + 2) == 0) return false;
  }
  return true;
}

enum class FieldKind { prime, rational };

class FieldSpec {
 public:
  static constexpr std::uint64_t max_prime = (std::uint64_t{1} << 31) - 1;

  static FieldSpec prime(std::uint64_t p) {
    if (p > max_prime) {
      throw usage_error("prime field characteristic must be below 2^31, got " +
                        std::to_string(p));
    }
    if (!is_prime(p)) throw usage_error(std::to_string(p) + " is not prime");
    return FieldSpec(FieldKind::prime, static_cast<std::uint32_t>(p));
  }
  static FieldSpec gf2() { return FieldSpec(FieldKind::prime, 2); }
  static FieldSpec rationals() { return FieldSpec(FieldKind::rational, 0); }

  // Accepts "F2", "Fp:<p>", "F<p>" and "Q".
  static FieldSpec parse(std::string_view text) {
    if (text == "Q") return rationals();
    std::string_view digits;
    if (text.starts_with("Fp:")) {
      digits = text.substr(3);
    } else if (text.starts_with("F")) {
      digits = text.substr(1);
    } else {
      throw usage_error("unknown field '" + std::string(text) + "'");
    }
    if (digits.empty() || digits.size() > 12 ||
        digits.find_first_not_of("0123456789") != std::string_view::npos) {
      throw usage_error("unknown field '" + std::string(text) + "'");
    }
    return prime(std::stoull(std::string(digits)));
  }

  FieldKind kind() const noexcept { return kind_; }
  std::uint32_t characteristic() const noexcept { return p_; }
  bool is_gf2() const noexcept { return kind_ == FieldKind::prime && p_ == 2; }

  std::string label() const {
    if (kind_ == FieldKind::rational) return "Q";
    if (p_ == 2) return "F2";
    return "Fp:" + std::to_string(p_);
  }

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;

 private:
  FieldSpec(FieldKind kind, std::uint32_t p) : kind_(kind), p_(p) {}

  FieldKind kind_;
  std::uint32_t p_;
};

[[noreturn]] inline void throw_zero_inverse() {
  throw std::domain_error("zero has no inverse");
}

class Gf2 {
 public:
  using value_type = std::uint8_t;

  FieldSpec spec() const { return FieldSpec::gf2(); }

  static constexpr value_type zero() noexcept { return 0; }
  static constexpr value_type one() noexcept { return 1; }
  static constexpr bool is_zero(value_type a) noexcept { return a == 0; }
  static constexpr value_type add(value_type a, value_type b) noexcept { return a ^ b; }
  static constexpr value_type sub(value_type a, value_type b) noexcept { return a ^ b; }
  static constexpr value_type mul(value_type a, value_type b) noexcept { return a & b; }
  static constexpr value_type neg(value_type a) noexcept { return a; }
  static value_type inv(value_type a) {
    if (a == 0) throw_zero_inverse();
    return 1;
  }
  static constexpr value_type from_integer(std::int64_t v) noexcept {
    return static_cast<value_type>(v & 1);
  }
  template <class Rng>
  static value_type sample_nonzero(Rng&) noexcept {
    return 1;
  }
  static std::string format(value_type a) { return a ? "1" : "0"; }

  friend bool operator==(const Gf2&, const Gf2&) = default;
};

class PrimeField {
 public:
  using value_type = std::uint32_t;

  explicit PrimeField(std::uint32_t p) : p_(FieldSpec::prime(p).characteristic()) {}
  explicit PrimeField(const FieldSpec& spec) : p_(spec.characteristic()) {
    if (spec.kind() != FieldKind::prime) throw usage_error("not a prime field");
  }

  FieldSpec spec() const { return FieldSpec::prime(p_); }
  std::uint32_t characteristic() const noexcept { return p_; }

  static constexpr value_type zero() noexcept { return 0; }
  static constexpr value_type one() noexcept { return 1; }
  static constexpr bool is_zero(value_type a) noexcept { return a == 0; }

  value_type add(value_type a, value_type b) const noexcept {
    const std::uint32_t s = a + b;  // < 2^32 since both < 2^31
    return s >= p_ ? s - p_ : s;
  }
  value_type sub(value_type a, value_type b) const noexcept {
    return a >= b ? a - b : a + (p_ - b);
  }
  value_type mul(value_type a, value_type b) const noexcept {
    return static_cast<value_type>(std::uint64_t{a} * b % p_);
  }
  value_type neg(value_type a) const noexcept { return a == 0 ? 0 : p_ - a; }

  value_type inv(value_type a) const {
    if (a == 0) throw_zero_inverse();
    // extended Euclid on (a, p)
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = p_, new_r = a;
    while (new_r != 0) {
      const std::int64_t q = r / new_r;
      t = std::exchange(new_t, t - q * new_t);
      r = std::exchange(new_r, r - q * new_r);
    }
    if (t < 0) t += p_;
    return static_cast<value_type>(t);
  }

  value_type from_integer(std::int64_t v) const noexcept {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return static_cast<value_type>(r);
  }

  template <class Rng>
  value_type sample_nonzero(Rng& rng) const {
    return static_cast<value_type>(1 + rng.below(p_ - 1));
  }

  static std::string format(value_type a) { return std::to_string(a); }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  std::uint32_t p_;
};

class RationalField {
 public:
  using value_type = Rational;
  static constexpr std::size_t default_max_dimension = 64;

  RationalField() = default;
  // Elimination refuses matrices with more rows or columns than this.
  explicit RationalField(std::size_t max_dimension) : max_dimension_(max_dimension) {}
  std::size_t max_dimension() const noexcept { return max_dimension_; }

  // Weights drawn for random templates over Q.
  static const std::array<Rational, 10>& sample_pool() {
    static const std::array<Rational, 10> pool = {
        Rational(1),     Rational(-1),    Rational(2),     Rational(-2),
        Rational(1, 2),  Rational(-1, 2), Rational(3),     Rational(-3),
        Rational(1, 3),  Rational(-1, 3)};
    return pool;
  }

  FieldSpec spec() const { return FieldSpec::rationals(); }

  static value_type zero() { return Rational(0); }
  static value_type one() { return Rational(1); }
  static bool is_zero(const value_type& a) { return a == 0; }
  static value_type add(const value_type& a, const value_type& b) { return a + b; }
  static value_type sub(const value_type& a, const value_type& b) { return a - b; }
  static value_type mul(const value_type& a, const value_type& b) { return a * b; }
  static value_type neg(const value_type& a) { return -a; }
  static value_type inv(const value_type& a) {
    if (a == 0) throw_zero_inverse();
    return 1 / a;
  }
  static value_type from_integer(std::int64_t v) { return Rational(v); }
  template <class Rng>
  static value_type sample_nonzero(Rng& rng) {
    return sample_pool()[rng.below(sample_pool().size())];
  }
  static std::string format(const value_type& a) {
    const BigInt& den = boost::multiprecision::denominator(a);
    if (den == 1) return boost::multiprecision::numerator(a).str();
    return boost::multiprecision::numerator(a).str() + "/" + den.str();
  }

  // There is only one Q; the dimension cap is a resource policy.
  friend bool operator==(const RationalField&, const RationalField&) { return true; }

 private:
  std::size_t max_dimension_ = default_max_dimension;
};

// Parses "num" or "num/den".
inline Rational parse_rational(std::string_view text) {
  try {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(BigInt(std::string(text)));
    BigInt num(std::string(text.substr(0, slash)));
    BigInt den(std::string(text.substr(slash + 1)));
    if (den == 0) throw usage_error("zero denominator in '" + std::string(text) + "'");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw usage_error("malformed rational '" + std::string(text) + "'");
  }
}

class FieldElement {
 public:
  FieldElement(const FieldSpec& spec, std::int64_t value) : spec_(spec) {
    if (spec.kind() == FieldKind::prime) {
      value_ = PrimeField(spec).from_integer(value);
    } else {
      value_ = Rational(value);
    }
  }
  FieldElement(const FieldSpec& spec, std::int64_t num, std::int64_t den) : spec_(spec) {
    if (den == 0) throw usage_error("zero denominator");
    if (spec.kind() == FieldKind::prime) {
      const PrimeField f(spec);
      value_ = f.mul(f.from_integer(num), f.inv(f.from_integer(den)));
    } else {
      value_ = den < 0 ? Rational(-num, -den) : Rational(num, den);
    }
  }
  FieldElement(const FieldSpec& spec, Rational value) : spec_(spec) {
    if (spec.kind() != FieldKind::rational) throw usage_error("rational value in prime field");
    value_ = std::move(value);
  }

  static FieldElement zero(const FieldSpec& spec) { return {spec, 0}; }
  static FieldElement one(const FieldSpec& spec) { return {spec, 1}; }

  const FieldSpec& spec() const noexcept { return spec_; }
  bool is_zero() const {
    return std::visit([](const auto& v) { return v == 0; }, value_);
  }

  std::uint32_t residue() const { return std::get<std::uint32_t>(value_); }
  const Rational& rational() const { return std::get<Rational>(value_); }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    return combine(a, b, [](const auto& f, const auto& x, const auto& y) { return f.add(x, y); });
  }
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    return combine(a, b, [](const auto& f, const auto& x, const auto& y) { return f.sub(x, y); });
  }
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    return combine(a, b, [](const auto& f, const auto& x, const auto& y) { return f.mul(x, y); });
  }
  FieldElement operator-() const { return zero(spec_) - *this; }

  FieldElement inv() const {
    if (is_zero()) throw_zero_inverse();
    FieldElement r = *this;
    if (spec_.kind() == FieldKind::prime) {
      r.value_ = PrimeField(spec_).inv(residue());
    } else {
      r.value_ = RationalField::inv(rational());
    }
    return r;
  }

  // Canonical forms are unique, so value equality is representation equality.
  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.spec_ == b.spec_ && a.value_ == b.value_;
  }

  std::string to_string() const {
    if (spec_.kind() == FieldKind::prime) return std::to_string(residue());
    return RationalField::format(rational());
  }

 private:
  FieldElement() : spec_(FieldSpec::gf2()) {}

  template <class Op>
  static FieldElement combine(const FieldElement& a, const FieldElement& b, Op op) {
    if (!(a.spec_ == b.spec_)) {
      throw usage_error("mixed-field operands: " + a.spec_.label() + " and " +
                        b.spec_.label());
    }
    FieldElement r;
    r.spec_ = a.spec_;
    if (a.spec_.kind() == FieldKind::prime) {
      r.value_ = op(PrimeField(a.spec_), a.residue(), b.residue());
    } else {
      r.value_ = op(RationalField{}, a.rational(), b.rational());
    }
    return r;
  }

  FieldSpec spec_;
  std::variant<std::uint32_t, Rational> value_;
};

inline FieldElement sample_nonzero(SeededStream& rng, const FieldSpec& spec) {
  if (spec.kind() == FieldKind::rational) {
    return FieldElement(spec, RationalField::sample_nonzero(rng));
  }
  return FieldElement(spec, PrimeField(spec).sample_nonzero(rng));
}

}  // namespace frozenrank
