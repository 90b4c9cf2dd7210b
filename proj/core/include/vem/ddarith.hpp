// SPDX-License-Identifier: Apache-2.0
//
// Double-double arithmetic on lane vectors. A value is carried as an
// unevaluated sum hi + lo of two binary64 lanes. Operators are the
// simplified branch-free kind: re-normalization is omitted by default and
// the two limbs are allowed to overlap between operations; callers
// re-normalize only where the tight |lo| <= ulp(hi)/2 form is needed.
//
// Error bounds (tested against an arbitrary-precision oracle):
//   add2            relative error <= 2^-102
//   mul / div / squ relative error <= 2^-100
// Both the FMA and the non-FMA (Dekker split) product paths meet the bound.

#pragma once

#include "vem/backend.hpp"

namespace vem {

template <class B>
struct Dd {
  Vd<B> hi, lo;
};

// --- error-free transforms ---------------------------------------------

/// Knuth two-sum: s + e == a + b exactly, s = fl(a+b). No precondition.
template <class B>
inline Dd<B> two_sum(Vd<B> a, Vd<B> b) {
  B::note_dd();
  Vd<B> s = a + b;
  Vd<B> v = s - a;
  Vd<B> e = (a - (s - v)) + (b - v);
  return {s, e};
}

/// Fast two-sum: requires |a| >= |b| (or either zero).
template <class B>
inline Dd<B> two_sum_fast(Vd<B> a, Vd<B> b) {
  B::note_dd();
  Vd<B> s = a + b;
  Vd<B> e = b - (s - a);
  return {s, e};
}

/// Exact product: p + e == a * b for all finite inputs below the overflow
/// scale (|a|,|b| < 2^996; kernels that can exceed this pre-scale first).
/// FMA path uses the fused negative-product residual; the non-FMA path is a
/// Dekker split with the 2^27+1 multiplier.
template <class B>
inline Dd<B> two_prod(Vd<B> a, Vd<B> b) {
  B::note_dd();
  Vd<B> p = a * b;
  if constexpr (B::has_fma) {
    Vd<B> e = fma(a, b, -p);
    return {p, e};
  } else {
    const Vd<B> split = splat<B>(134217729.0);  // 2^27 + 1
    Vd<B> ta = split * a;
    Vd<B> ahi = ta - (ta - a);
    Vd<B> alo = a - ahi;
    Vd<B> tb = split * b;
    Vd<B> bhi = tb - (tb - b);
    Vd<B> blo = b - bhi;
    Vd<B> e = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo;
    return {p, e};
  }
}

// --- construction -------------------------------------------------------

template <class B>
inline Dd<B> dd_from(Vd<B> x, Vd<B> y) {
  return {x, y};
}
template <class B>
inline Dd<B> dd_from(Vd<B> x) {
  return {x, splat<B>(0.0)};
}
template <class B>
inline Dd<B> dd_const(double hi, double lo) {
  return {splat<B>(hi), splat<B>(lo)};
}

template <class B>
inline Dd<B> operator-(Dd<B> x) {
  return {-x.hi, -x.lo};
}

template <class B>
inline Dd<B> dd_select(Vm<B> m, Dd<B> t, Dd<B> f) {
  return {select(m, t.hi, f.hi), select(m, t.lo, f.lo)};
}

/// Collapse to a single double: fl(hi + lo).
template <class B>
inline Vd<B> dd_value(Dd<B> x) {
  return x.hi + x.lo;
}

/// Restore the tight form: hi = fl(hi+lo), |lo| <= ulp(hi)/2.
template <class B>
inline Dd<B> dd_normalize(Dd<B> x) {
  return two_sum_fast(x.hi, x.lo);
}

// --- addition -----------------------------------------------------------

/// Sum of two DD numbers, no magnitude precondition.
template <class B>
inline Dd<B> dd_add2(Dd<B> x, Dd<B> y) {
  B::note_dd();
  Vd<B> s = x.hi + y.hi;
  Vd<B> v = s - x.hi;
  Vd<B> e = (x.hi - (s - v)) + (y.hi - v);
  return {s, e + (x.lo + y.lo)};
}

template <class B>
inline Dd<B> dd_add2(Dd<B> x, Vd<B> y) {
  B::note_dd();
  Vd<B> s = x.hi + y;
  Vd<B> v = s - x.hi;
  Vd<B> e = (x.hi - (s - v)) + (y - v);
  return {s, e + x.lo};
}

template <class B>
inline Dd<B> dd_add2(Vd<B> x, Vd<B> y) {
  return two_sum<B>(x, y);
}

/// Fast additions: per lane |value(x)| >= |value(y)| or one of them zero.
template <class B>
inline Dd<B> dd_add_fast(Dd<B> x, Dd<B> y) {
  B::note_dd();
  Vd<B> s = x.hi + y.hi;
  return {s, ((x.hi - s) + y.hi) + x.lo + y.lo};
}

template <class B>
inline Dd<B> dd_add_fast(Dd<B> x, Vd<B> y) {
  B::note_dd();
  Vd<B> s = x.hi + y;
  return {s, ((x.hi - s) + y) + x.lo};
}

template <class B>
inline Dd<B> dd_add_fast(Vd<B> x, Dd<B> y) {
  B::note_dd();
  Vd<B> s = x + y.hi;
  return {s, ((x - s) + y.hi) + y.lo};
}

template <class B>
inline Dd<B> dd_add_fast(Vd<B> x, Vd<B> y) {
  return two_sum_fast<B>(x, y);
}

// --- multiplication -----------------------------------------------------

template <class B>
inline Dd<B> dd_mul(Dd<B> x, Dd<B> y) {
  B::note_dd();
  if constexpr (B::has_fma) {
    Vd<B> p = x.hi * y.hi;
    Vd<B> e = fma(x.hi, y.hi, -p);
    e = fma(x.hi, y.lo, e);
    e = fma(x.lo, y.hi, e);
    return {p, e};
  } else {
    Dd<B> p = two_prod<B>(x.hi, y.hi);
    return {p.hi, p.lo + (x.hi * y.lo + x.lo * y.hi)};
  }
}

template <class B>
inline Dd<B> dd_mul(Dd<B> x, Vd<B> y) {
  B::note_dd();
  if constexpr (B::has_fma) {
    Vd<B> p = x.hi * y;
    Vd<B> e = fma(x.hi, y, -p);
    e = fma(x.lo, y, e);
    return {p, e};
  } else {
    Dd<B> p = two_prod<B>(x.hi, y);
    return {p.hi, p.lo + x.lo * y};
  }
}

template <class B>
inline Dd<B> dd_mul(Vd<B> x, Vd<B> y) {
  return two_prod<B>(x, y);
}

template <class B>
inline Dd<B> dd_squ(Dd<B> x) {
  B::note_dd();
  if constexpr (B::has_fma) {
    Vd<B> p = x.hi * x.hi;
    Vd<B> e = fma(x.hi, x.hi, -p);
    e = fma(x.hi + x.hi, x.lo, e);
    return {p, e};
  } else {
    Dd<B> p = two_prod<B>(x.hi, x.hi);
    return {p.hi, p.lo + (x.hi + x.hi) * x.lo};
  }
}

/// Exact scaling by a power of two (both limbs scale exactly).
template <class B>
inline Dd<B> dd_scale(Dd<B> x, Vd<B> p2) {
  B::note_dd();
  return {x.hi * p2, x.lo * p2};
}

// --- division and friends ------------------------------------------------

template <class B>
inline Dd<B> dd_div(Dd<B> x, Dd<B> y) {
  B::note_dd();
  Vd<B> t = splat<B>(1.0) / y.hi;
  Vd<B> q = x.hi * t;
  if constexpr (B::has_fma) {
    Vd<B> u = fma(t, x.hi, -q);                              // exact product residual
    Vd<B> v = fma(y.lo, -t, fma(y.hi, -t, splat<B>(1.0)));   // 1 - y*t
    return {q, fma(q, v, fma(x.lo, t, u))};
  } else {
    Dd<B> p = two_prod<B>(q, y.hi);
    Vd<B> u = x.hi - p.hi;  // exact: q*y.hi within a factor of 2 of x.hi
    Vd<B> lo = (u - p.lo + (x.lo - q * y.lo)) * t;
    return {q, lo};
  }
}

template <class B>
inline Dd<B> dd_div(Vd<B> x, Vd<B> y) {
  return dd_div(dd_from<B>(x), dd_from<B>(y));
}

/// DD reciprocal of a plain double.
template <class B>
inline Dd<B> dd_recip(Vd<B> y) {
  B::note_dd();
  Vd<B> q = splat<B>(1.0) / y;
  if constexpr (B::has_fma) {
    Vd<B> e = fma(q, -y, splat<B>(1.0));
    return {q, q * e};
  } else {
    Dd<B> p = two_prod<B>(q, y);
    Vd<B> e = (splat<B>(1.0) - p.hi) - p.lo;
    return {q, q * e};
  }
}

/// DD square root of a non-negative plain double.
template <class B>
inline Dd<B> dd_sqrt(Vd<B> d) {
  B::note_dd();
  Vd<B> t = sqrt(d);
  Vd<B> e;
  if constexpr (B::has_fma) {
    e = fma(t, -t, d);
  } else {
    Dd<B> p = two_prod<B>(t, t);
    e = (d - p.hi) - p.lo;
  }
  Vd<B> half_rt = splat<B>(0.5) / t;
  Dd<B> r = {t, e * half_rt};
  // keep sqrt(+0) = +0 with a clean zero lo
  r.lo = select(d == splat<B>(0.0), splat<B>(0.0), r.lo);
  return r;
}

/// DD square root of a DD value (used by asin/acos folding).
template <class B>
inline Dd<B> dd_sqrt(Dd<B> d) {
  B::note_dd();
  Vd<B> t = sqrt(d.hi + d.lo);
  // r = (d + t^2) / (2t) refines t to full DD precision
  Dd<B> t2 = two_prod<B>(t, t);
  Dd<B> num = dd_add2(d, t2);
  Dd<B> r = dd_mul(num, dd_recip<B>(t));
  r = dd_scale(r, splat<B>(0.5));
  Vm<B> z = d.hi == splat<B>(0.0);
  return dd_select(z, dd_from<B>(sqrt(d.hi)), r);
}

}  // namespace vem
