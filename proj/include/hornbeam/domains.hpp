/*******************************************************************************
 *
 * The two shipped value lattices. Each domain exposes the same static
 * interface: lattice operations, abstract integer arithmetic, and exact
 * conversions to/from intervals, which carry the shared property and
 * refinement logic.
 *
 ******************************************************************************/

#pragma once

#include <cstdint>
#include <string>

#include "hornbeam/interval.hpp"

namespace hornbeam {

// Sign lattice: bot < {-, 0, +} < int < top. top and int have the same
// concretization on integer-only programs but are distinct lattice points.
enum class Sign : std::uint8_t { Bot = 0, Neg, Zero, Pos, Int, Top };

struct SignDomain {
  using Elem = Sign;
  static constexpr const char* kName = "sign";
  static constexpr bool kFiniteLattice = true;

  static Elem top() { return Sign::Top; }
  static Elem bot() { return Sign::Bot; }
  static bool is_bot(Elem e) { return e == Sign::Bot; }

  static bool leq(Elem a, Elem b) {
    if (a == Sign::Bot || a == b || b == Sign::Top) return true;
    if (b == Sign::Int) return a != Sign::Top;
    return false;
  }

  static Elem meet(Elem a, Elem b) {
    if (leq(a, b)) return a;
    if (leq(b, a)) return b;
    return Sign::Bot;  // distinct elements of {-, 0, +}
  }

  static Elem join(Elem a, Elem b) {
    if (leq(a, b)) return b;
    if (leq(b, a)) return a;
    return Sign::Int;
  }

  static Elem widen(Elem old_e, Elem new_e) { return join(old_e, new_e); }

  static Elem from_const(std::int64_t v) {
    if (v < 0) return Sign::Neg;
    if (v == 0) return Sign::Zero;
    return Sign::Pos;
  }

  static Elem any_int() { return Sign::Int; }

  static Interval to_interval(Elem e) {
    switch (e) {
      case Sign::Bot: return Interval::bottom();
      case Sign::Neg: return Interval::at_most(Bound(-1));
      case Sign::Zero: return Interval(0);
      case Sign::Pos: return Interval::at_least(Bound(1));
      default: return Interval::top();
    }
  }

  // Least element whose concretization contains the interval. Never top:
  // int already covers all integers.
  static Elem from_interval_over(const Interval& i) {
    if (i.is_bottom()) return Sign::Bot;
    if (i.leq(to_interval(Sign::Neg))) return Sign::Neg;
    if (i.leq(to_interval(Sign::Zero))) return Sign::Zero;
    if (i.leq(to_interval(Sign::Pos))) return Sign::Pos;
    return Sign::Int;
  }

  // Greatest element whose concretization is inside the interval.
  static Elem from_interval_under(const Interval& i) {
    if (i.is_top()) return Sign::Int;
    if (to_interval(Sign::Pos).leq(i)) return Sign::Pos;
    if (to_interval(Sign::Neg).leq(i)) return Sign::Neg;
    if (to_interval(Sign::Zero).leq(i)) return Sign::Zero;
    return Sign::Bot;
  }

  static Elem neg(Elem a) {
    if (a == Sign::Neg) return Sign::Pos;
    if (a == Sign::Pos) return Sign::Neg;
    if (a == Sign::Top) return Sign::Int;
    return a;
  }

  static Elem add(Elem a, Elem b) {
    if (a == Sign::Bot || b == Sign::Bot) return Sign::Bot;
    if (a == Sign::Zero) return norm_arith(b);
    if (b == Sign::Zero) return norm_arith(a);
    if (a == b && (a == Sign::Neg || a == Sign::Pos)) return a;
    return Sign::Int;
  }

  static Elem sub(Elem a, Elem b) { return add(a, neg(b)); }

  static Elem mul(Elem a, Elem b) {
    if (a == Sign::Bot || b == Sign::Bot) return Sign::Bot;
    if (a == Sign::Zero || b == Sign::Zero) return Sign::Zero;
    if (a == Sign::Int || a == Sign::Top || b == Sign::Int || b == Sign::Top)
      return Sign::Int;
    return a == b ? Sign::Pos : Sign::Neg;
  }

  static bool contains(Elem e, std::int64_t v) { return to_interval(e).contains(v); }

  static int cmp(Elem a, Elem b) {
    return static_cast<int>(a) - static_cast<int>(b);
  }

  static std::string str(Elem e) {
    switch (e) {
      case Sign::Bot: return "bot";
      case Sign::Neg: return "-";
      case Sign::Zero: return "0";
      case Sign::Pos: return "+";
      case Sign::Int: return "int";
      case Sign::Top: return "top";
    }
    return "?";
  }

 private:
  // Arithmetic results range over integers; top degrades to int.
  static Elem norm_arith(Elem e) { return e == Sign::Top ? Sign::Int : e; }
};

struct IntervalDomain {
  using Elem = Interval;
  static constexpr const char* kName = "intervals";
  static constexpr bool kFiniteLattice = false;

  static Elem top() { return Interval::top(); }
  static Elem bot() { return Interval::bottom(); }
  static bool is_bot(const Elem& e) { return e.is_bottom(); }

  static bool leq(const Elem& a, const Elem& b) { return a.leq(b); }
  static Elem meet(const Elem& a, const Elem& b) { return a.meet(b); }
  static Elem join(const Elem& a, const Elem& b) { return a.join(b); }
  static Elem widen(const Elem& old_e, const Elem& new_e) {
    return old_e.widen(new_e);
  }

  static Elem from_const(std::int64_t v) { return Interval(v); }
  static Elem any_int() { return Interval::top(); }

  static Interval to_interval(const Elem& e) { return e; }
  static Elem from_interval_over(const Interval& i) { return i; }
  static Elem from_interval_under(const Interval& i) { return i; }

  static Elem neg(const Elem& a) { return a.negate(); }
  static Elem add(const Elem& a, const Elem& b) { return a.add(b); }
  static Elem sub(const Elem& a, const Elem& b) { return a.sub(b); }
  static Elem mul(const Elem& a, const Elem& b) { return a.mul(b); }

  static bool contains(const Elem& e, std::int64_t v) { return e.contains(v); }
  static int cmp(const Elem& a, const Elem& b) { return Interval::cmp(a, b); }
  static std::string str(const Elem& e) { return e.str(); }
};

}  // namespace hornbeam
