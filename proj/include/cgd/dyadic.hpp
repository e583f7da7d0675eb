#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace cgd {

using BigInt = boost::multiprecision::cpp_int;

// Exact dyadic rational numerator / 2^exponent, always kept in lowest terms
// (exponent is 0 or the numerator is odd).
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(std::int64_t n) : num_(n) {}  // NOLINT(google-explicit-constructor)
  Dyadic(BigInt numerator, std::uint32_t exponent);

  static Dyadic pow2(std::int64_t k);  // 2^k, k may be negative

  const BigInt& numerator() const { return num_; }
  std::uint32_t exponent() const { return exp_; }

  bool is_integer() const { return exp_ == 0; }
  bool is_zero() const { return num_ == 0; }
  int sign() const { return num_.sign(); }

  // Requires is_integer(); throws std::overflow_error when out of range.
  std::int64_t to_int64() const;
  BigInt floor() const;
  BigInt ceil() const;
  double to_double() const;

  Dyadic operator-() const;
  Dyadic& operator+=(const Dyadic& o);
  Dyadic& operator-=(const Dyadic& o);
  Dyadic& operator*=(const Dyadic& o);
  friend Dyadic operator+(Dyadic a, const Dyadic& b) { return a += b; }
  friend Dyadic operator-(Dyadic a, const Dyadic& b) { return a -= b; }
  friend Dyadic operator*(Dyadic a, const Dyadic& b) { return a *= b; }

  Dyadic half() const;
  Dyadic abs() const { return num_.sign() < 0 ? -*this : *this; }

  friend bool operator==(const Dyadic& a, const Dyadic& b) = default;
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

  // "p/2^e" (or "p" when integral); the wire format used in JSON and CSV.
  std::string to_wire() const;
  // "p/q" with q written out (or "p"); human-facing.
  std::string to_string() const;

  // Accepts "p", "p/q" with q a power of two, and "p/2^e".
  static Dyadic parse(std::string_view text);

  // Simplest dyadic strictly between lo and hi (lo < hi); either bound may
  // be absent, meaning unbounded on that side.
  static Dyadic simplest_between(const Dyadic* lo, const Dyadic* hi);

 private:
  void normalize();

  BigInt num_ = 0;
  std::uint32_t exp_ = 0;
};

}  // namespace cgd
