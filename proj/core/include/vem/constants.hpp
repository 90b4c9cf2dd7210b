// SPDX-License-Identifier: Apache-2.0
//
// Frozen numeric constants. Multi-limb splits of pi/2 and ln 2 are chosen so
// that the limb products appearing in the reduction kernels stay exact; see
// reduction.hpp for the per-kernel constraints. Values are bit-exact hex
// floats regenerated by `gencoeff --constants` and checked by tests against
// a 512-bit recomputation.

#pragma once

namespace vem::k {

// pi/2 as a quad-double (successive nearest-double remainders).
inline constexpr double kPio2Qd0 = 0x1.921fb54442d18p+0;
inline constexpr double kPio2Qd1 = 0x1.1a62633145c07p-54;
inline constexpr double kPio2Qd2 = -0x1.f1976b7ed8fbcp-110;
inline constexpr double kPio2Qd3 = 0x1.4cf98e804177dp-164;

inline constexpr double kPio2Hi = kPio2Qd0;
inline constexpr double kPio2Lo = kPio2Qd1;
inline constexpr double kPiHi = 0x1.921fb54442d18p+1;
inline constexpr double kPiLo = 0x1.1a62633145c07p-53;
inline constexpr double kPio4Hi = 0x1.921fb54442d18p-1;
inline constexpr double kPio4Lo = 0x1.1a62633145c07p-55;

inline constexpr double kTwoOverPi = 0x1.45f306dc9c883p-1;

// Cody-Waite level 1 (|x| <= 15, quotient |q| <= 10):
// pi/2 = P0 + tail, P0 carries 49 significant bits so q*P0 is exact.
inline constexpr double kCw1P0 = 0x1.921fb54442d20p+0;
inline constexpr double kCw1T1 = -0x1.ee59d9cceba40p-50;
inline constexpr double kCw1T2 = 0x1.b839a252049c1p-104;

// Cody-Waite level 2 (|x| <= 1e14, quotient split q = qh + ql at 2^24):
// A, B, C carry 26 significant bits each, so qh*limb and ql*limb are exact.
inline constexpr double kCw2A = 0x1.921fb58000000p+0;
inline constexpr double kCw2B = -0x1.dde9740000000p-27;
inline constexpr double kCw2C = 0x1.1a62630000000p-54;
inline constexpr double kCw2D1 = 0x1.8a2e03707344ap-81;
inline constexpr double kCw2D2 = 0x1.024e088a67cc7p-135;

// exp reduction x = k*ln2 + r: L1 carries 42 bits so k*L1 is exact
// for |k| <= 2^11.
inline constexpr double kInvLn2 = 0x1.71547652b82fep+0;
inline constexpr double kExpL1 = 0x1.62e42fefa3800p-1;
inline constexpr double kExpL2 = 0x1.ef35793c76730p-45;

// ln 2 as a DD (log reconstruction e*ln2 + log m).
inline constexpr double kLn2Hi = 0x1.62e42fefa39efp-1;
inline constexpr double kLn2Lo = 0x1.abc9e3b39803fp-56;

// exp saturation: largest x with RN(e^x) finite, smallest x with RN(e^x) > 0.
inline constexpr double kExpOverflowX = 0x1.62e42fefa39efp+9;    // 709.78271289338397
inline constexpr double kExpUnderflowX = -0x1.74910d52d3051p+9;  // -745.13321910194111

// Reduction method thresholds (comparisons use <=).
inline constexpr double kCw1Max = 15.0;
inline constexpr double kCw2Max = 1e14;

}  // namespace vem::k
