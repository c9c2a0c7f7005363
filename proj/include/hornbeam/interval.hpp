/*******************************************************************************
 *
 * Integer intervals with +/-oo bounds. Also serves as the shared numeric
 * backbone for other non-relational domains: property literals and builtin
 * refinement are expressed on intervals once and adapted per domain.
 *
 ******************************************************************************/

#pragma once

#include <algorithm>
#include <cstdint>
#include <string>

namespace hornbeam {

// A bound is -oo, a finite integer, or +oo. Finite magnitudes are clamped to
// kLimit; anything that overflows it is widened to the matching infinity,
// which only ever grows the interval.
class Bound {
 public:
  static constexpr std::int64_t kLimit = std::int64_t{1} << 62;

  constexpr Bound() : inf_(0), v_(0) {}
  constexpr Bound(std::int64_t v) : inf_(0), v_(v) {}
  static constexpr Bound neg_inf() { return Bound(-1, 0); }
  static constexpr Bound pos_inf() { return Bound(+1, 0); }

  bool is_finite() const { return inf_ == 0; }
  bool is_neg_inf() const { return inf_ < 0; }
  bool is_pos_inf() const { return inf_ > 0; }
  std::int64_t value() const { return v_; }

  friend bool operator==(const Bound& a, const Bound& b) {
    return a.inf_ == b.inf_ && (a.inf_ != 0 || a.v_ == b.v_);
  }
  friend bool operator<(const Bound& a, const Bound& b) {
    if (a.inf_ != b.inf_) return a.inf_ < b.inf_;
    return a.inf_ == 0 && a.v_ < b.v_;
  }
  friend bool operator<=(const Bound& a, const Bound& b) { return !(b < a); }

  friend Bound min(const Bound& a, const Bound& b) { return a < b ? a : b; }
  friend Bound max(const Bound& a, const Bound& b) { return a < b ? b : a; }

  friend Bound operator-(const Bound& a) {
    if (!a.is_finite()) return Bound(-a.inf_, 0);
    return Bound(-a.v_);
  }

  std::string str() const {
    if (is_neg_inf()) return "-oo";
    if (is_pos_inf()) return "+oo";
    return std::to_string(v_);
  }

 private:
  constexpr Bound(int inf, std::int64_t v) : inf_(inf), v_(v) {}

  friend struct BoundArith;

  int inf_;  // -1, 0, +1
  std::int64_t v_;
};

// Endpoint arithmetic with direction-aware overflow rounding: a lower bound
// may only be rounded down, an upper bound only up. This keeps every
// computed interval a sound superset and rules out empty-concretization
// values like [+oo,+oo].
struct BoundArith {
  struct Ext {
    int inf;      // -1, 0, +1
    __int128 v;   // meaningful when inf == 0
  };

  static Ext ext(const Bound& b) { return {b.inf_, b.v_}; }

  // -oo + +oo never occurs: sums combine two lower or two upper endpoints.
  static Ext add(const Ext& a, const Ext& b) {
    if (a.inf != 0) return a;
    if (b.inf != 0) return b;
    return {0, a.v + b.v};
  }

  static Ext mul(const Ext& a, const Ext& b) {
    // 0 * oo = 0 (endpoint arithmetic convention).
    if (a.inf == 0 && a.v == 0) return a;
    if (b.inf == 0 && b.v == 0) return b;
    int sa = a.inf != 0 ? a.inf : (a.v > 0 ? 1 : -1);
    int sb = b.inf != 0 ? b.inf : (b.v > 0 ? 1 : -1);
    if (a.inf != 0 || b.inf != 0) return {sa * sb, 0};
    return {0, a.v * b.v};
  }

  static Ext min(const Ext& a, const Ext& b) { return less(a, b) ? a : b; }
  static Ext max(const Ext& a, const Ext& b) { return less(a, b) ? b : a; }

  static Bound as_lb(const Ext& e) {
    if (e.inf != 0) return e.inf < 0 ? Bound::neg_inf() : Bound::pos_inf();
    if (e.v > Bound::kLimit) return Bound(Bound::kLimit);
    if (e.v < -static_cast<__int128>(Bound::kLimit)) return Bound::neg_inf();
    return Bound(static_cast<std::int64_t>(e.v));
  }

  static Bound as_ub(const Ext& e) {
    if (e.inf != 0) return e.inf < 0 ? Bound::neg_inf() : Bound::pos_inf();
    if (e.v > Bound::kLimit) return Bound::pos_inf();
    if (e.v < -static_cast<__int128>(Bound::kLimit)) return Bound(-Bound::kLimit);
    return Bound(static_cast<std::int64_t>(e.v));
  }

 private:
  static bool less(const Ext& a, const Ext& b) {
    if (a.inf != b.inf) return a.inf < b.inf;
    return a.inf == 0 && a.v < b.v;
  }
};

// lb + c rounded down, ub + c rounded up (for refinement offsets).
inline Bound lb_plus(const Bound& b, std::int64_t c) {
  return BoundArith::as_lb(
      BoundArith::add(BoundArith::ext(b), BoundArith::Ext{0, c}));
}
inline Bound ub_plus(const Bound& b, std::int64_t c) {
  return BoundArith::as_ub(
      BoundArith::add(BoundArith::ext(b), BoundArith::Ext{0, c}));
}

class Interval {
 public:
  // Default is top.
  Interval() : lb_(Bound::neg_inf()), ub_(Bound::pos_inf()) {}
  Interval(Bound lb, Bound ub) : lb_(lb), ub_(ub) { canonicalize(); }
  explicit Interval(std::int64_t v) : lb_(v), ub_(v) {}

  static Interval top() { return Interval(); }
  static Interval bottom() { return Interval(Bound(1), Bound(0)); }
  static Interval at_least(Bound lb) { return Interval(lb, Bound::pos_inf()); }
  static Interval at_most(Bound ub) { return Interval(Bound::neg_inf(), ub); }

  bool is_bottom() const { return ub_ < lb_; }
  bool is_top() const { return lb_.is_neg_inf() && ub_.is_pos_inf(); }
  Bound lb() const { return lb_; }
  Bound ub() const { return ub_; }

  bool contains(std::int64_t v) const {
    return !is_bottom() && lb_ <= Bound(v) && Bound(v) <= ub_;
  }

  friend bool operator==(const Interval& a, const Interval& b) {
    return a.lb_ == b.lb_ && a.ub_ == b.ub_;
  }

  // Lattice order (inclusion), not a total order.
  bool leq(const Interval& o) const {
    if (is_bottom()) return true;
    if (o.is_bottom()) return false;
    return o.lb_ <= lb_ && ub_ <= o.ub_;
  }

  Interval meet(const Interval& o) const {
    if (is_bottom() || o.is_bottom()) return bottom();
    return Interval(max(lb_, o.lb_), min(ub_, o.ub_));
  }

  Interval join(const Interval& o) const {
    if (is_bottom()) return o;
    if (o.is_bottom()) return *this;
    return Interval(min(lb_, o.lb_), max(ub_, o.ub_));
  }

  // Standard interval widening: unstable bounds jump to infinity.
  Interval widen(const Interval& next) const {
    if (is_bottom()) return next;
    if (next.is_bottom()) return *this;
    Bound lb = next.lb_ < lb_ ? Bound::neg_inf() : lb_;
    Bound ub = ub_ < next.ub_ ? Bound::pos_inf() : ub_;
    return Interval(lb, ub);
  }

  Interval negate() const {
    if (is_bottom()) return bottom();
    return Interval(-ub_, -lb_);
  }

  Interval add(const Interval& o) const {
    if (is_bottom() || o.is_bottom()) return bottom();
    using BA = BoundArith;
    return Interval(BA::as_lb(BA::add(BA::ext(lb_), BA::ext(o.lb_))),
                    BA::as_ub(BA::add(BA::ext(ub_), BA::ext(o.ub_))));
  }

  Interval sub(const Interval& o) const { return add(o.negate()); }

  Interval mul(const Interval& o) const {
    if (is_bottom() || o.is_bottom()) return bottom();
    using BA = BoundArith;
    BA::Ext c1 = BA::mul(BA::ext(lb_), BA::ext(o.lb_));
    BA::Ext c2 = BA::mul(BA::ext(lb_), BA::ext(o.ub_));
    BA::Ext c3 = BA::mul(BA::ext(ub_), BA::ext(o.lb_));
    BA::Ext c4 = BA::mul(BA::ext(ub_), BA::ext(o.ub_));
    return Interval(BA::as_lb(BA::min(BA::min(c1, c2), BA::min(c3, c4))),
                    BA::as_ub(BA::max(BA::max(c1, c2), BA::max(c3, c4))));
  }

  // Representation order for use as a container key.
  static int cmp(const Interval& a, const Interval& b) {
    auto cb = [](const Bound& x, const Bound& y) {
      if (x < y) return -1;
      return y < x ? 1 : 0;
    };
    if (int c = cb(a.lb_, b.lb_)) return c;
    return cb(a.ub_, b.ub_);
  }

  std::string str() const {
    if (is_bottom()) return "bot";
    return "[" + lb_.str() + "," + ub_.str() + "]";
  }

 private:
  void canonicalize() {
    if (ub_ < lb_) {
      lb_ = Bound(1);
      ub_ = Bound(0);
    }
  }

  Bound lb_, ub_;
};

// Sound refinement of (a, b) under "a op b": returns the sub-boxes that can
// satisfy the relation. Either side empty means the test cannot succeed.
struct CmpRefinement {
  Interval left, right;
};

inline CmpRefinement refine_compare(const std::string& op, const Interval& a,
                                    const Interval& b) {
  if (a.is_bottom() || b.is_bottom())
    return {Interval::bottom(), Interval::bottom()};
  if (op == ">")
    return {a.meet(Interval::at_least(lb_plus(b.lb(), 1))),
            b.meet(Interval::at_most(ub_plus(a.ub(), -1)))};
  if (op == ">=")
    return {a.meet(Interval::at_least(b.lb())), b.meet(Interval::at_most(a.ub()))};
  if (op == "<")
    return {a.meet(Interval::at_most(ub_plus(b.ub(), -1))),
            b.meet(Interval::at_least(lb_plus(a.lb(), 1)))};
  if (op == "=<")
    return {a.meet(Interval::at_most(b.ub())), b.meet(Interval::at_least(a.lb()))};
  if (op == "=" || op == "=:=") {
    Interval m = a.meet(b);
    return {m, m};
  }
  return {a, b};
}

}  // namespace hornbeam
