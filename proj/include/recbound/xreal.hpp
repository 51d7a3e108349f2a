#pragma once

#include <cassert>
#include <compare>
#include <string>

#include "recbound/rational.hpp"

namespace recbound {

// Extended nonnegative rational: an exact value >= 0, or +infinity.
// Conventions: +inf absorbs addition; 0 * (+inf) = 0; truncated subtraction
// (monus) with inf - x = inf for finite x, x - inf = 0, and inf - inf = 0.
class XReal {
 public:
  XReal() : inf_(false), v_(0) {}
  XReal(const Rat& v) : inf_(false), v_(v) { assert(v >= 0); }
  XReal(long v) : XReal(Rat(v)) {}
  XReal(int v) : XReal(Rat(v)) {}

  static XReal infinity() {
    XReal x;
    x.inf_ = true;
    return x;
  }

  bool is_inf() const { return inf_; }
  // Precondition: !is_inf().
  const Rat& value() const {
    assert(!inf_);
    return v_;
  }

  bool is_zero() const { return !inf_ && v_ == 0; }

  friend XReal operator+(const XReal& a, const XReal& b) {
    if (a.inf_ || b.inf_) return infinity();
    return XReal(Rat(a.v_ + b.v_));
  }

  friend XReal operator*(const XReal& a, const XReal& b) {
    if (a.is_zero() || b.is_zero()) return XReal();
    if (a.inf_ || b.inf_) return infinity();
    return XReal(Rat(a.v_ * b.v_));
  }

  // Monus: max(a - b, 0), with the inf conventions above.
  XReal monus(const XReal& b) const {
    if (inf_) return b.inf_ ? XReal() : infinity();
    if (b.inf_) return XReal();
    return v_ > b.v_ ? XReal(Rat(v_ - b.v_)) : XReal();
  }

  // Division by a positive finite rational.
  XReal div(const Rat& d) const {
    assert(d > 0);
    if (inf_) return infinity();
    return XReal(Rat(v_ / d));
  }

  friend bool operator==(const XReal& a, const XReal& b) {
    if (a.inf_ != b.inf_) return false;
    return a.inf_ || a.v_ == b.v_;
  }
  friend bool operator!=(const XReal& a, const XReal& b) { return !(a == b); }
  friend bool operator<(const XReal& a, const XReal& b) {
    if (a.inf_) return false;
    if (b.inf_) return true;
    return a.v_ < b.v_;
  }
  friend bool operator<=(const XReal& a, const XReal& b) { return !(b < a); }
  friend bool operator>(const XReal& a, const XReal& b) { return b < a; }
  friend bool operator>=(const XReal& a, const XReal& b) { return !(a < b); }

  friend XReal monus(const XReal& a, const XReal& b) { return a.monus(b); }

  friend XReal xmin(const XReal& a, const XReal& b) { return a < b ? a : b; }
  friend XReal xmax(const XReal& a, const XReal& b) { return a < b ? b : a; }

  std::string str() const { return inf_ ? "inf" : rat_to_string(v_); }

 private:
  bool inf_;
  Rat v_;
};

}  // namespace recbound
