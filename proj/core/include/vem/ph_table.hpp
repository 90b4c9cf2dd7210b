// SPDX-License-Identifier: Apache-2.0
//
// Precomputed table for the Payne-Hanek reduction: for each exponent E the
// fractional part F(E) of 2^E * 2/pi, stored as four cascaded
// nearest-double limbs F0..F3 with |F0| >= |F1| >= |F2| >= |F3| and
// F0+F1+F2+F3 accurate to at least 4*53 bits of frac(2^E * 2/pi).
//
// Entries cover E in [-52, 971]; the kernel indexes by
// clamp(unbiased exponent of |x|, 0, 1023) which equals E + 52 for the
// mantissa decomposition |x| = M * 2^E with M an integer in [2^52, 2^53).
//
// Construction is pure integer arithmetic over an embedded 2560-bit window
// of 2/pi, so rebuilding the table is bit-exact across builds and platforms.
// Serialized form: 1024 entries * 4 doubles, little-endian, 32768 bytes;
// the entry for exponent E starts at byte offset (E + 52) * 32.

#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace vem {

struct PayneHanekTable {
  static constexpr int kEntries = 1024;
  static constexpr int kExpBias = 52;  // table index = E + kExpBias

  std::array<double, kEntries * 4> limbs{};

  const double* data() const { return limbs.data(); }

  /// Limbs for mathematical exponent E in [-52, 971].
  const double* entry_for_exponent(int e) const { return &limbs[(e + kExpBias) * 4]; }

  /// Little-endian serialization, exactly 32768 bytes.
  std::vector<unsigned char> serialize() const;
  static PayneHanekTable deserialize(const std::vector<unsigned char>& bytes);
};

/// Deterministically builds the table from the embedded bits of 2/pi.
PayneHanekTable build_ph_table();

/// Process-wide immutable instance.
const PayneHanekTable& ph_table();

}  // namespace vem
