// SPDX-License-Identifier: Apache-2.0
//
// Trigonometric argument reduction. All paths produce a quadrant
// q ~ round(2x/pi) mod 4 and a DD residual r with x = q*(pi/2) + r and
// |r| <= pi/4 (+ a couple of ulp of slack); q is recovered consistently
// with r rather than canonically, which is all reconstruction needs.
//
// Three methods, selected by |x|:
//   level 1 Cody-Waite   |x| <= 15      (49-bit limb, exact q*P0)
//   level 2 Cody-Waite   |x| <= 1e14    (split quotient, 26-bit limbs)
//   Payne-Hanek          any finite x   (quad-double table of 2/pi parts)
//
// The Payne-Hanek kernel is written so its FP-operator census in the FMA
// configuration is exactly 36 add/sub, 5 mul, 11 FMA, 8 round; the op
// counting tests pin this shape.

#pragma once

#include "vem/constants.hpp"
#include "vem/ddarith.hpp"
#include "vem/ph_table.hpp"

namespace vem {

template <class B>
struct Reduced {
  Dd<B> r;   // reduced argument, radians, |r| <= pi/4 + slack
  Vl<B> q;   // quadrant, consistent with r modulo 4
};

/// rfrac(a) = a - round(a), lane-wise on a DD value; the subtraction from
/// the hi limb is exact. Returns the residual; adds the removed integer
/// into q.
template <class B>
inline Dd<B> rfrac(Dd<B> a, Vl<B>& q) {
  Vd<B> rh = round_nearest(a.hi);
  a.hi = a.hi - rh;
  q = q + to_int(rh);
  Vd<B> rl = round_nearest(a.lo);
  a.lo = a.lo - rl;
  q = q + to_int(rl);
  return a;
}

/// rfrac without quadrant tracking (public single-value form).
template <class B>
inline Dd<B> rfrac(Dd<B> a) {
  Vl<B> q = isplat<B>(0);
  return rfrac(a, q);
}

namespace detail {

// (P0..P3) * u for the quad-double pi/2, one multiply plus a linear
// correction chain; result is an unnormalized DD.
template <class B>
inline Dd<B> mul_pio2_qd(Dd<B> u) {
  const Vd<B> p0 = splat<B>(k::kPio2Qd0), p1 = splat<B>(k::kPio2Qd1);
  const Vd<B> p2 = splat<B>(k::kPio2Qd2), p3 = splat<B>(k::kPio2Qd3);
  Vd<B> p = u.hi * p0;
  if constexpr (B::has_fma) {
    Vd<B> e = fma(u.hi, p0, -p);
    e = fma(u.hi, p1, e);
    e = fma(u.lo, p0, e);
    e = fma(u.hi, p2, e);
    e = fma(u.lo, p1, e);
    e = fma(u.hi, p3, e);
    e = fma(u.lo, p2, e);
    return {p, e};
  } else {
    Dd<B> t = two_prod<B>(u.hi, p0);
    Vd<B> e = t.lo;
    e = mla(u.hi, p1, e);
    e = mla(u.lo, p0, e);
    e = mla(u.hi, p2, e);
    e = mla(u.lo, p1, e);
    return {t.hi, e};
  }
}

}  // namespace detail

/// Payne-Hanek reduction, valid for every finite x (typically engaged for
/// |x| > 1e14). Decomposes |x| = M * 2^E with integer M in [2^52, 2^53),
/// gathers the quad-double fractional parts F0..F3 of 2^E * 2/pi and
/// evaluates rfrac(rfrac(rfrac(rfrac(M F0) + M F1) + M F2) + M F3) in DD,
/// then multiplies by pi/2. Non-finite lanes yield a NaN residual.
template <class B>
inline Reduced<B> payne_hanek_reduce(Vd<B> x, const PayneHanekTable& tab) {
  Vd<B> a = abs(x);

  // Integer-domain setup: table index and integer mantissa-as-double.
  Vl<B> er = exponent_raw(a);
  Vl<B> zero = isplat<B>(0), kmax = isplat<B>(1023);
  Vl<B> idx = er - kmax;
  idx = select(zero > idx, zero, idx);
  idx = select(idx > kmax, kmax, idx);      // non-finite lanes clamp; fixed below
  Vd<B> m = ldexp2(a, isplat<B>(52) - idx); // exact; index-0 lanes get a*2^52

  Vl<B> base = (idx << 2);
  Vd<B> f0 = gather<B>(tab.data(), base);
  Vd<B> f1 = gather<B>(tab.data(), base | isplat<B>(1));
  Vd<B> f2 = gather<B>(tab.data(), base | isplat<B>(2));
  Vd<B> f3 = gather<B>(tab.data(), base | isplat<B>(3));

  Vl<B> q = isplat<B>(0);
  Dd<B> u = two_prod<B>(m, f0);
  u = rfrac(u, q);
  u = dd_add2(u, two_prod<B>(m, f1));
  u = rfrac(u, q);
  u = dd_add2(u, two_prod<B>(m, f2));
  u = rfrac(u, q);
  u = dd_add2(u, two_prod<B>(m, f3));
  // final pass rounds the semantic value, then sweeps what is left in lo
  Vd<B> qv = round_nearest(u.hi + u.lo);
  u.hi = u.hi - qv;
  q = q + to_int(qv);
  Vd<B> ql = round_nearest(u.lo);
  u.lo = u.lo - ql;
  q = q + to_int(ql);
  u = dd_normalize(u);
  Dd<B> r = detail::mul_pio2_qd(u);

  // Sign of x: rfrac(-v) = -rfrac(v), quadrant negates with it.
  Vm<B> neg = x < splat<B>(0.0);
  r.hi = mulsign(r.hi, x);
  r.lo = mulsign(r.lo, x);
  q = select(neg, zero - q, q);

  // Non-finite arguments propagate as NaN residuals.
  Vm<B> bad = !isfinite(x);
  Vd<B> nan = splat<B>(__builtin_nan(""));
  r.hi = select(bad, nan, r.hi);
  r.lo = select(bad, nan, r.lo);
  q = select(bad, zero, q);
  return {r, q & isplat<B>(3)};
}

template <class B>
inline Reduced<B> payne_hanek_reduce(Vd<B> x) {
  return payne_hanek_reduce(x, ph_table());
}

/// Cody-Waite reduction. Level 1 is valid for |x| <= 15, level 2 for
/// |x| <= 1e14. The identity x = q*(pi/2) + r holds to better than 2^-80
/// relative accuracy of the residual on the stated domains.
template <class B>
inline Reduced<B> cody_waite_reduce(Vd<B> x, int level) {
  if (level == 1) {
    // q = round(2x/pi), |q| <= 10, so q * P0(49 bits) is exact and the
    // first subtraction cancels exactly (Sterbenz); the tail goes through
    // an exact product into a DD accumulation.
    Vd<B> qd = round_nearest(x * splat<B>(k::kTwoOverPi));
    Vd<B> r0 = mla(qd, splat<B>(-k::kCw1P0), x);
    Dd<B> tail = two_prod<B>(qd, splat<B>(-k::kCw1T1));
    tail.lo = mla(qd, splat<B>(-k::kCw1T2), tail.lo);
    Dd<B> r = dd_add2(dd_from<B>(r0), tail);
    return {dd_normalize(r), to_int(qd) & isplat<B>(3)};
  }
  // Level 2: split quotient q = qh + ql at 2^24 so that all limb products
  // against the 26-bit pieces A, B, C are exact; qh is a multiple of four,
  // so the quadrant is carried by ql alone.
  Vd<B> t = x * splat<B>(k::kTwoOverPi);
  Vd<B> qh = trunc(t * splat<B>(0x1p-24));
  qh = qh * splat<B>(0x1p24);
  Vd<B> ql = round_nearest(t - qh);
  Vd<B> r = x;
  r = mla(qh, splat<B>(-k::kCw2A), r);
  r = mla(ql, splat<B>(-k::kCw2A), r);
  r = mla(qh, splat<B>(-k::kCw2B), r);
  r = mla(ql, splat<B>(-k::kCw2B), r);
  Dd<B> acc = dd_add2(dd_from<B>(r), two_prod<B>(qh, splat<B>(-k::kCw2C)));
  acc = dd_add2(acc, two_prod<B>(ql, splat<B>(-k::kCw2C)));
  Vd<B> qs = qh + ql;
  Dd<B> dtail = two_prod<B>(qs, splat<B>(-k::kCw2D1));
  dtail.lo = mla(qs, splat<B>(-k::kCw2D2), dtail.lo);
  acc = dd_add2(acc, dtail);
  return {dd_normalize(acc), to_int(ql) & isplat<B>(3)};
}

/// Full reduction with the method selector. This is the only place the
/// trigonometric kernels branch on data.
///
/// Non-deterministic policy: one method for the whole vector, keyed on
/// reduce_all(|x| <= threshold). Deterministic policy: each method is
/// applied to the lanes it covers and merged per lane, so every lane's
/// result is independent of its neighbors; the reduce_all checks then only
/// skip work that a full-width merge would discard anyway.
template <class B>
inline Reduced<B> trig_reduce(Vd<B> x) {
  Vd<B> ax = abs(x);
  Vm<B> small = ax <= splat<B>(k::kCw1Max);
  if constexpr (B::deterministic) {
    Reduced<B> out = cody_waite_reduce(x, 1);
    if (!all(small)) {
      Vm<B> mid = ax <= splat<B>(k::kCw2Max);
      Reduced<B> m2 = cody_waite_reduce(x, 2);
      out.r = dd_select(small, out.r, m2.r);
      out.q = select(small, out.q, m2.q);
      if (!all(mid)) {
        Reduced<B> m3 = payne_hanek_reduce<B>(x);
        out.r = dd_select(mid, out.r, m3.r);
        out.q = select(mid, out.q, m3.q);
      }
    }
    return out;
  } else {
    if (all(small)) return cody_waite_reduce(x, 1);
    if (all(ax <= splat<B>(k::kCw2Max))) return cody_waite_reduce(x, 2);
    return payne_hanek_reduce<B>(x);
  }
}

}  // namespace vem
