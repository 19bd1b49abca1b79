#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace magicpol {

/// Angular-momentum quantum number stored as twice its value so that
/// half-integers are exact. Projections may be negative.
class HalfInt {
 public:
  constexpr HalfInt() = default;
  /// HalfInt(3) == 3, HalfInt(3, 2) == 3/2. Throws for denominators other
  /// than 1 or 2.
  constexpr HalfInt(int numerator, int denominator = 1)
      : twice_(denominator == 1 ? 2 * numerator : numerator) {
    if (denominator != 1 && denominator != 2) throw_bad_denominator();
  }

  static constexpr HalfInt from_twice(int twice) {
    HalfInt h;
    h.twice_ = twice;
    return h;
  }
  /// Parses "3", "-1/2", "2.5".
  static HalfInt parse(std::string_view text);

  constexpr int twice() const { return twice_; }
  constexpr double value() const { return 0.5 * twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  constexpr int dimension() const { return twice_ + 1; }  // 2j+1

  constexpr HalfInt operator-() const { return from_twice(-twice_); }
  constexpr HalfInt operator+(HalfInt o) const { return from_twice(twice_ + o.twice_); }
  constexpr HalfInt operator-(HalfInt o) const { return from_twice(twice_ - o.twice_); }
  constexpr HalfInt& operator+=(HalfInt o) { twice_ += o.twice_; return *this; }
  constexpr auto operator<=>(const HalfInt&) const = default;

  std::string str() const;

 private:
  [[noreturn]] static void throw_bad_denominator();
  int twice_ = 0;
};

/// True when |2m| <= 2j and 2m has the parity of 2j.
constexpr bool valid_projection(HalfInt j, HalfInt m) {
  const int d = j.twice() - m.twice();
  return j.twice() >= 0 && m.twice() <= j.twice() && -m.twice() <= j.twice() &&
         d % 2 == 0;
}

constexpr bool triangle(HalfInt a, HalfInt b, HalfInt c) {
  const int s = a.twice() + b.twice() + c.twice();
  return a.twice() >= 0 && b.twice() >= 0 && c.twice() >= 0 && s % 2 == 0 &&
         c.twice() <= a.twice() + b.twice() && a.twice() <= b.twice() + c.twice() &&
         b.twice() <= a.twice() + c.twice();
}

/// Wigner 3j symbol (j1 j2 j3; m1 m2 m3). Zero when a selection rule fails.
/// Exact rational arithmetic; cached and thread safe.
double wigner3j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2, HalfInt m3);

/// Wigner 6j symbol {j1 j2 j3; j4 j5 j6}. Zero on any violated triad.
double wigner6j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4, HalfInt j5, HalfInt j6);

/// Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M>, Condon-Shortley phase.
double clebsch(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M);

/// (-1)^x for an integer-valued HalfInt.
int parity_sign(HalfInt x);

}  // namespace magicpol
