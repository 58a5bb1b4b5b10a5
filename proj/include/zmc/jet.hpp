#pragma once

namespace zmc {

// A point in a two-variable domain. For the timelike equations a = t and
// b = x (or r); for the spacelike equation a = x and b = y; in similarity
// frames a = tau and b = rho.
struct Point {
  double a = 0.0;
  double b = 0.0;
};

// Value with all first and second partials of a scalar field of two variables.
// Index 0 refers to the first variable of Point, index 1 to the second. The
// mixed partial is stored once.
template <typename Real>
struct BasicJet2 {
  Real value{};
  Real d0{};
  Real d1{};
  Real d00{};
  Real d01{};
  Real d11{};

  template <typename Other>
  BasicJet2<Other> cast() const {
    return {static_cast<Other>(value), static_cast<Other>(d0),  static_cast<Other>(d1),
            static_cast<Other>(d00),   static_cast<Other>(d01), static_cast<Other>(d11)};
  }

  BasicJet2 operator-() const { return {-value, -d0, -d1, -d00, -d01, -d11}; }

  friend BasicJet2 operator+(const BasicJet2& x, const BasicJet2& y) {
    return {x.value + y.value, x.d0 + y.d0,   x.d1 + y.d1,
            x.d00 + y.d00,     x.d01 + y.d01, x.d11 + y.d11};
  }

  friend BasicJet2 operator-(const BasicJet2& x, const BasicJet2& y) { return x + (-y); }

  friend BasicJet2 operator*(Real s, const BasicJet2& x) {
    return {s * x.value, s * x.d0, s * x.d1, s * x.d00, s * x.d01, s * x.d11};
  }
};

using Jet2 = BasicJet2<double>;
using Jet2Ext = BasicJet2<long double>;

}  // namespace zmc
