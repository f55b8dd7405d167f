#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mwsharp {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational p/q with q > 0 and gcd(|p|, q) = 1 (0 is stored as 0/1).
/// All arithmetic is exact; comparisons are done by cross-multiplication,
/// never through floating point.
class Rat {
 public:
  Rat() : num_(0), den_(1) {}
  Rat(long long n) : num_(n), den_(1) {}  // NOLINT: implicit by design
  Rat(BigInt n) : num_(std::move(n)), den_(1) {}
  Rat(BigInt n, BigInt d);

  /// Accepts "p", "p/q" and the dyadic form "m/2^e".
  static Rat parse(std::string_view s);

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }
  bool is_positive() const { return num_ > 0; }
  bool is_integer() const { return den_ == 1; }

  Rat operator-() const;
  Rat operator+(const Rat& o) const;
  Rat operator-(const Rat& o) const;
  Rat operator*(const Rat& o) const;
  Rat operator/(const Rat& o) const;  // throws std::domain_error on /0

  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }
  Rat& operator/=(const Rat& o) { return *this = *this / o; }

  Rat reciprocal() const;

  bool operator==(const Rat& o) const { return num_ == o.num_ && den_ == o.den_; }
  std::strong_ordering operator<=>(const Rat& o) const;

  /// Nearest double, ties to even; overflows to +-infinity, values below
  /// the subnormal range flush to (signed) zero.
  double to_double() const;

  /// "p" when q == 1, otherwise "p/q".
  std::string str() const;

 private:
  BigInt num_;
  BigInt den_;
  void reduce();
};

inline Rat abs(const Rat& a) { return a.is_negative() ? -a : a; }
inline const Rat& min(const Rat& a, const Rat& b) { return b < a ? b : a; }
inline const Rat& max(const Rat& a, const Rat& b) { return a < b ? b : a; }

/// 2^e as an exact rational (e may be negative).
Rat pow2_rat(long e);

}  // namespace mwsharp
