// SPDX-License-Identifier: Apache-2.0
//
// Lane-parallel primitive layer. Every math kernel in this library is written
// once against this interface and instantiated per backend. A backend is a
// compile-time configuration of lane width W, FMA availability, and the
// deterministic reduction policy. W=1 is the scalar backend; W in {2,4,8}
// are packed backends built on GCC/Clang vector extensions.
//
// All operations are lane-wise, total and pure. No primitive touches global
// state, errno, or the FP environment. The whole library assumes
// round-to-nearest-even mode and builds with FP contraction disabled.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>

namespace vem {

static_assert(sizeof(double) == 8 && sizeof(long long) == 8);

/// Runtime description of a backend instantiation.
struct BackendDescriptor {
  std::string name;
  int lane_width = 1;
  bool has_fma = false;
  bool deterministic_mode = false;
};

namespace detail {

inline int64_t bits_of(double x) {
  int64_t b;
  std::memcpy(&b, &x, 8);
  return b;
}
inline double double_of(int64_t b) {
  double x;
  std::memcpy(&x, &b, 8);
  return x;
}

// Nearest integer, ties away from zero. This is the tie rule for
// round_nearest across all backends; see round_nearest below.
inline double round_ta(double x) {
  double t = std::trunc(x);
  double f = x - t;  // exact
  double up = t + (x < 0 ? -1.0 : 1.0);
  return (f >= 0.5 || f <= -0.5) ? up : t;
}

}  // namespace detail

template <int W, bool Fma, bool Det = false>
struct Backend;

// ---------------------------------------------------------------------------
// Scalar backend (W = 1)
// ---------------------------------------------------------------------------
template <bool Fma, bool Det>
struct Backend<1, Fma, Det> {
  static constexpr int width = 1;
  static constexpr bool has_fma = Fma;
  static constexpr bool deterministic = Det;

  using D = double;     // lane vector of binary64
  using L = long long;  // lane vector of 64-bit two's complement integers
  using M = bool;       // opmask

  static BackendDescriptor descriptor() {
    return {std::string("scalar") + (Fma ? "+fma" : "-fma") + (Det ? "+det" : ""),
            1, Fma, Det};
  }

  static D splat(double x) { return x; }
  static L isplat(int64_t x) { return x; }

  static D add(D a, D b) { return a + b; }
  static D sub(D a, D b) { return a - b; }
  static D mul(D a, D b) { return a * b; }
  static D div(D a, D b) { return a / b; }
  static D sqrt(D a) { return std::sqrt(a); }
  static D fma(D a, D b, D c) {
    static_assert(Fma, "fma is unavailable on non-FMA backends");
    return std::fma(a, b, c);
  }
  static D neg(D a) { return from_bits(to_bits(a) ^ INT64_C(0x8000000000000000)); }
  static D abs(D a) { return from_bits(to_bits(a) & INT64_C(0x7fffffffffffffff)); }

  static D round_nearest(D a) { return detail::round_ta(a); }
  static D trunc(D a) { return std::trunc(a); }

  static M eq(D a, D b) { return a == b; }
  static M ne(D a, D b) { return a != b; }
  static M lt(D a, D b) { return a < b; }
  static M le(D a, D b) { return a <= b; }
  static M gt(D a, D b) { return a > b; }
  static M ge(D a, D b) { return a >= b; }

  static D select(M m, D t, D f) { return m ? t : f; }
  static L iselect(M m, L t, L f) { return m ? t : f; }

  static M mask_and(M a, M b) { return a && b; }
  static M mask_or(M a, M b) { return a || b; }
  static M mask_not(M a) { return !a; }

  static bool any(M m) { return m; }
  static bool all(M m) { return m; }
  static int count(M m) { return m ? 1 : 0; }

  static L to_bits(D a) { return detail::bits_of(a); }
  static D from_bits(L b) { return detail::double_of(b); }
  static L to_int(D a) { return static_cast<L>(a); }  // truncating convert
  static D from_int(L a) { return static_cast<D>(a); }

  static L iadd(L a, L b) { return a + b; }
  static L isub(L a, L b) { return a - b; }
  static L iand(L a, L b) { return a & b; }
  static L ior(L a, L b) { return a | b; }
  static L ixor(L a, L b) { return a ^ b; }
  static L ishl(L a, int s) { return static_cast<L>(static_cast<uint64_t>(a) << s); }
  static L ishr(L a, int s) { return a >> s; }  // arithmetic
  static M ieq(L a, L b) { return a == b; }
  static M igt(L a, L b) { return a > b; }

  static D gather(const double* base, L idx) { return base[idx]; }

  /// x * 2^e with full IEEE overflow/underflow semantics; e clamped so the
  /// two half-step power-of-two factors stay representable. Counted as a
  /// single exponent-manipulation op, not as FP multiplies.
  static D ldexp2(D x, L e) {
    e = e > 2046 ? 2046 : (e < -2044 ? -2044 : e);
    L h = e >> 1;
    return (x * detail::double_of((h + 1023) << 52)) *
           detail::double_of((e - h + 1023) << 52);
  }

  static double lane(D a, int) { return a; }
  static int64_t ilane(L a, int) { return a; }

  static void note_dd() {}  // hook for dd-operation census; no-op here
};

// ---------------------------------------------------------------------------
// Packed backends (W in {2, 4, 8}), GCC/Clang vector extensions
// ---------------------------------------------------------------------------
template <int W, bool Fma, bool Det>
struct Backend {
  static_assert(W == 2 || W == 4 || W == 8, "supported lane widths: 1,2,4,8");
  static constexpr int width = W;
  static constexpr bool has_fma = Fma;
  static constexpr bool deterministic = Det;

  using D = double __attribute__((vector_size(W * 8)));
  using L = long long __attribute__((vector_size(W * 8)));
  using M = L;  // per-lane all-ones / all-zeros

  static BackendDescriptor descriptor() {
    return {"v" + std::to_string(W) + (Fma ? "+fma" : "-fma") + (Det ? "+det" : ""),
            W, Fma, Det};
  }

  static D splat(double x) {
    D r;
    for (int i = 0; i < W; i++) r[i] = x;
    return r;
  }
  static L isplat(int64_t x) {
    L r;
    for (int i = 0; i < W; i++) r[i] = x;
    return r;
  }

  static D add(D a, D b) { return a + b; }
  static D sub(D a, D b) { return a - b; }
  static D mul(D a, D b) { return a * b; }
  static D div(D a, D b) { return a / b; }
  static D sqrt(D a) {
    D r;
    for (int i = 0; i < W; i++) r[i] = __builtin_sqrt(a[i]);
    return r;
  }
  static D fma(D a, D b, D c) {
    static_assert(Fma, "fma is unavailable on non-FMA backends");
    D r;
    for (int i = 0; i < W; i++) r[i] = __builtin_fma(a[i], b[i], c[i]);
    return r;
  }
  static D neg(D a) { return from_bits(to_bits(a) ^ isplat(INT64_C(0x8000000000000000))); }
  static D abs(D a) { return from_bits(to_bits(a) & isplat(INT64_C(0x7fffffffffffffff))); }

  static D round_nearest(D a) {
    D r;
    for (int i = 0; i < W; i++) r[i] = detail::round_ta(a[i]);
    return r;
  }
  static D trunc(D a) {
    D r;
    for (int i = 0; i < W; i++) r[i] = __builtin_trunc(a[i]);
    return r;
  }

  static M eq(D a, D b) { return a == b; }
  static M ne(D a, D b) { return a != b; }
  static M lt(D a, D b) { return a < b; }
  static M le(D a, D b) { return a <= b; }
  static M gt(D a, D b) { return a > b; }
  static M ge(D a, D b) { return a >= b; }

  static D select(M m, D t, D f) {
    return from_bits((m & to_bits(t)) | (~m & to_bits(f)));
  }
  static L iselect(M m, L t, L f) { return (m & t) | (~m & f); }

  static M mask_and(M a, M b) { return a & b; }
  static M mask_or(M a, M b) { return a | b; }
  static M mask_not(M a) { return ~a; }

  static bool any(M m) {
    long long r = 0;
    for (int i = 0; i < W; i++) r |= m[i];
    return r != 0;
  }
  static bool all(M m) {
    long long r = -1;
    for (int i = 0; i < W; i++) r &= m[i];
    return r != 0;
  }
  static int count(M m) {
    int n = 0;
    for (int i = 0; i < W; i++) n += m[i] != 0;
    return n;
  }

  static L to_bits(D a) {
    L b;
    std::memcpy(&b, &a, W * 8);
    return b;
  }
  static D from_bits(L b) {
    D a;
    std::memcpy(&a, &b, W * 8);
    return a;
  }
  static L to_int(D a) { return __builtin_convertvector(a, L); }
  static D from_int(L a) { return __builtin_convertvector(a, D); }

  static L iadd(L a, L b) { return a + b; }
  static L isub(L a, L b) { return a - b; }
  static L iand(L a, L b) { return a & b; }
  static L ior(L a, L b) { return a | b; }
  static L ixor(L a, L b) { return a ^ b; }
  static L ishl(L a, int s) {
    using U = unsigned long long __attribute__((vector_size(W * 8)));
    return (L)((U)a << s);
  }
  static L ishr(L a, int s) { return a >> s; }
  static M ieq(L a, L b) { return a == b; }
  static M igt(L a, L b) { return a > b; }

  static D gather(const double* base, L idx) {
    D r;
    for (int i = 0; i < W; i++) r[i] = base[idx[i]];
    return r;
  }

  static L iclamp(L e, long long lo, long long hi) {
    L el = isplat(lo), eh = isplat(hi);
    e = iselect(e > eh, eh, e);
    return iselect(el > e, el, e);
  }

  static D ldexp2(D x, L e) {
    e = iclamp(e, -2044, 2046);
    L h = e >> 1;
    D p1 = from_bits((h + isplat(1023)) << 52);
    D p2 = from_bits((e - h + isplat(1023)) << 52);
    return (x * p1) * p2;
  }

  static double lane(D a, int i) { return a[i]; }
  static int64_t ilane(L a, int i) { return a[i]; }

  static void note_dd() {}
};

// ---------------------------------------------------------------------------
// Thin value wrappers. Kernels are written against these so that every FP
// operation routes through a named backend primitive (required both for the
// op-census instrumentation and so FP contraction stays under our control).
// ---------------------------------------------------------------------------
template <class B>
struct Vd {
  typename B::D raw;
};
template <class B>
struct Vl {
  typename B::L raw;
};
template <class B>
struct Vm {
  typename B::M raw;
};

template <class B> Vd<B> splat(double x) { return {B::splat(x)}; }
template <class B> Vl<B> isplat(int64_t x) { return {B::isplat(x)}; }

template <class B> Vd<B> operator+(Vd<B> a, Vd<B> b) { return {B::add(a.raw, b.raw)}; }
template <class B> Vd<B> operator-(Vd<B> a, Vd<B> b) { return {B::sub(a.raw, b.raw)}; }
template <class B> Vd<B> operator*(Vd<B> a, Vd<B> b) { return {B::mul(a.raw, b.raw)}; }
template <class B> Vd<B> operator/(Vd<B> a, Vd<B> b) { return {B::div(a.raw, b.raw)}; }
template <class B> Vd<B> operator-(Vd<B> a) { return {B::neg(a.raw)}; }

template <class B> Vd<B> sqrt(Vd<B> a) { return {B::sqrt(a.raw)}; }
template <class B> Vd<B> abs(Vd<B> a) { return {B::abs(a.raw)}; }
template <class B> Vd<B> round_nearest(Vd<B> a) { return {B::round_nearest(a.raw)}; }
template <class B> Vd<B> trunc(Vd<B> a) { return {B::trunc(a.raw)}; }

/// Fused a*b+c. Only valid on has_fma backends.
template <class B> Vd<B> fma(Vd<B> a, Vd<B> b, Vd<B> c) { return {B::fma(a.raw, b.raw, c.raw)}; }

/// a*b+c with whatever the backend offers: fused when has_fma, otherwise an
/// explicit multiply-add pair (never contracted by the compiler).
template <class B>
Vd<B> mla(Vd<B> a, Vd<B> b, Vd<B> c) {
  if constexpr (B::has_fma)
    return {B::fma(a.raw, b.raw, c.raw)};
  else
    return {B::add(B::mul(a.raw, b.raw), c.raw)};
}

template <class B> Vm<B> operator==(Vd<B> a, Vd<B> b) { return {B::eq(a.raw, b.raw)}; }
template <class B> Vm<B> operator!=(Vd<B> a, Vd<B> b) { return {B::ne(a.raw, b.raw)}; }
template <class B> Vm<B> operator<(Vd<B> a, Vd<B> b) { return {B::lt(a.raw, b.raw)}; }
template <class B> Vm<B> operator<=(Vd<B> a, Vd<B> b) { return {B::le(a.raw, b.raw)}; }
template <class B> Vm<B> operator>(Vd<B> a, Vd<B> b) { return {B::gt(a.raw, b.raw)}; }
template <class B> Vm<B> operator>=(Vd<B> a, Vd<B> b) { return {B::ge(a.raw, b.raw)}; }

template <class B> Vd<B> select(Vm<B> m, Vd<B> t, Vd<B> f) { return {B::select(m.raw, t.raw, f.raw)}; }
template <class B> Vl<B> select(Vm<B> m, Vl<B> t, Vl<B> f) { return {B::iselect(m.raw, t.raw, f.raw)}; }

template <class B> Vm<B> operator&&(Vm<B> a, Vm<B> b) { return {B::mask_and(a.raw, b.raw)}; }
template <class B> Vm<B> operator||(Vm<B> a, Vm<B> b) { return {B::mask_or(a.raw, b.raw)}; }
template <class B> Vm<B> operator!(Vm<B> a) { return {B::mask_not(a.raw)}; }

template <class B> bool any(Vm<B> m) { return B::any(m.raw); }
template <class B> bool all(Vm<B> m) { return B::all(m.raw); }
template <class B> int count(Vm<B> m) { return B::count(m.raw); }

template <class B> Vl<B> to_bits(Vd<B> a) { return {B::to_bits(a.raw)}; }
template <class B> Vd<B> from_bits(Vl<B> b) { return {B::from_bits(b.raw)}; }
template <class B> Vl<B> to_int(Vd<B> a) { return {B::to_int(a.raw)}; }
template <class B> Vd<B> from_int(Vl<B> a) { return {B::from_int(a.raw)}; }

template <class B> Vl<B> operator+(Vl<B> a, Vl<B> b) { return {B::iadd(a.raw, b.raw)}; }
template <class B> Vl<B> operator-(Vl<B> a, Vl<B> b) { return {B::isub(a.raw, b.raw)}; }
template <class B> Vl<B> operator&(Vl<B> a, Vl<B> b) { return {B::iand(a.raw, b.raw)}; }
template <class B> Vl<B> operator|(Vl<B> a, Vl<B> b) { return {B::ior(a.raw, b.raw)}; }
template <class B> Vl<B> operator^(Vl<B> a, Vl<B> b) { return {B::ixor(a.raw, b.raw)}; }
template <class B> Vl<B> operator<<(Vl<B> a, int s) { return {B::ishl(a.raw, s)}; }
template <class B> Vl<B> operator>>(Vl<B> a, int s) { return {B::ishr(a.raw, s)}; }
template <class B> Vm<B> operator==(Vl<B> a, Vl<B> b) { return {B::ieq(a.raw, b.raw)}; }
template <class B> Vm<B> operator>(Vl<B> a, Vl<B> b) { return {B::igt(a.raw, b.raw)}; }

template <class B> Vd<B> gather(const double* base, Vl<B> idx) { return {B::gather(base, idx.raw)}; }

template <class B> double lane(Vd<B> a, int i) { return B::lane(a.raw, i); }
template <class B> int64_t ilane(Vl<B> a, int i) { return B::ilane(a.raw, i); }

// Sign-bit utilities (pure bit manipulation, not FP arithmetic).
template <class B>
Vd<B> copysign(Vd<B> mag, Vd<B> sgn) {
  auto m = isplat<B>(INT64_C(0x7fffffffffffffff));
  auto s = isplat<B>(INT64_C(0x8000000000000000));
  return from_bits((to_bits(mag) & m) | (to_bits(sgn) & s));
}
/// x with its sign flipped where sgn is negative: x * sign(sgn) for sgn != 0.
template <class B>
Vd<B> mulsign(Vd<B> x, Vd<B> sgn) {
  auto s = isplat<B>(INT64_C(0x8000000000000000));
  return from_bits(to_bits(x) ^ (to_bits(sgn) & s));
}

template <class B> Vm<B> isnan(Vd<B> a) { return a != a; }
template <class B> Vm<B> isinf(Vd<B> a) { return abs(a) == splat<B>(HUGE_VAL); }
template <class B>
Vm<B> isfinite(Vd<B> a) { return abs(a) < splat<B>(HUGE_VAL); }

/// Raw biased exponent field, as integer lanes in [0, 2047].
template <class B>
Vl<B> exponent_raw(Vd<B> a) {
  return (to_bits(a) >> 52) & isplat<B>(INT64_C(0x7ff));
}

/// 2^e as a double, e per-lane. Caller guarantees e in [-1022, 1023].
template <class B>
Vd<B> pow2i(Vl<B> e) {
  return from_bits((e + isplat<B>(1023)) << 52);
}

/// x * 2^e with IEEE overflow/underflow semantics (Inf / denormal / zero),
/// valid for the full exponent range. Implemented as two half-step
/// power-of-two multiplies, so gradual underflow rounds exactly once.
template <class B>
Vd<B> ldexp2(Vd<B> x, Vl<B> e) {
  return {B::ldexp2(x.raw, e.raw)};
}

/// x * 2^e by direct exponent-field addition. Valid only when x is normal
/// and the result stays normal.
template <class B>
Vd<B> ldexp_fast(Vd<B> x, Vl<B> e) {
  return from_bits(to_bits(x) + (e << 52));
}

/// One representable step toward zero; +-0 maps to itself.
template <class B>
Vd<B> toward_zero(Vd<B> x) {
  auto stepped = from_bits(to_bits(x) - isplat<B>(1));
  return select(x == splat<B>(0.0), x, stepped);
}

// Canonical backend configurations. The library instantiates kernels over
// the cross product of width x FMA, and the deterministic reduction policy
// on top of the FMA ones.
using ScalarFma = Backend<1, true>;
using ScalarNoFma = Backend<1, false>;
using ScalarFmaDet = Backend<1, true, true>;
using ScalarNoFmaDet = Backend<1, false, true>;
using V2Fma = Backend<2, true>;
using V2NoFma = Backend<2, false>;
using V2FmaDet = Backend<2, true, true>;
using V2NoFmaDet = Backend<2, false, true>;
using V4Fma = Backend<4, true>;
using V4NoFma = Backend<4, false>;
using V4FmaDet = Backend<4, true, true>;
using V4NoFmaDet = Backend<4, false, true>;
using V8Fma = Backend<8, true>;
using V8NoFma = Backend<8, false>;
using V8FmaDet = Backend<8, true, true>;
using V8NoFmaDet = Backend<8, false, true>;

}  // namespace vem
