// SPDX-License-Identifier: Apache-2.0

#include "vem/ph_table.hpp"

#include <cstring>
#include <stdexcept>

namespace vem {
namespace {

// Fractional bits of 2/pi, 64-bit words, most significant first. Word 0 bit
// 63 has weight 2^-1. 2560 bits total; entry construction reads at most
// exponent 971 + window 1344 = 2315 bits.
constexpr int kSrcWords = 40;
constexpr uint64_t kTwoOverPiBits[kSrcWords] = {
    0xa2f9836e4e441529ull, 0xfc2757d1f534ddc0ull, 0xdb6295993c439041ull, 0xfe5163abdebbc561ull,
    0xb7246e3a424dd2e0ull, 0x06492eea09d1921cull, 0xfe1deb1cb129a73eull, 0xe88235f52ebb4484ull,
    0xe99c7026b45f7e41ull, 0x3991d639835339f4ull, 0x9c845f8bbdf9283bull, 0x1ff897ffde05980full,
    0xef2f118b5a0a6d1full, 0x6d367ecf27cb09b7ull, 0x4f463f669e5fea2dull, 0x7527bac7ebe5f17bull,
    0x3d0739f78a5292eaull, 0x6bfb5fb11f8d5d08ull, 0x56033046fc7b6babull, 0xf0cfbc209af4361dull,
    0xa9e391615ee61b08ull, 0x6599855f14a06840ull, 0x8dffd8804d732731ull, 0x06061556ca73a8c9ull,
    0x60e27bc08c6b47c4ull, 0x19c367cddce8092aull, 0x8359c4768b961ca6ull, 0xddaf44d15719053eull,
    0xa5ff07053f7e33e8ull, 0x32c2de4f98327dbbull, 0xc33d26ef6b1e5ef8ull, 0x9f3a1f35caf27f1dull,
    0x87f121907c7c246aull, 0xfa6ed5772d30433bull, 0x15c614b59d19c3c2ull, 0xc4ad414d2c5d000cull,
    0x467d862d71e39ac6ull, 0x9b0062337cd2b497ull, 0xa7b4d55537f63ed7ull, 0x1810a3fc764d2a9dull,
};

// Fixed-point window: a signed big integer N of kWinWords*64 bits holding
// the running value v = N * 2^-1344 plus an implicit strictly positive tail
// below the last bit (2/pi is irrational, and limb subtraction cancels
// window bits exactly, so the tail never changes). The tail strictness is
// what makes nearest-rounding decidable from guard and sticky bits alone.
constexpr int kWinWords = 21;
constexpr int kWinBits = kWinWords * 64;

struct Window {
  uint64_t w[kWinWords];

  bool negative() const { return (w[0] >> 63) != 0; }

  void negate() {
    uint64_t carry = 1;
    for (int i = kWinWords - 1; i >= 0; i--) {
      uint64_t t = ~w[i] + carry;
      carry = (carry != 0 && t == 0) ? 1 : 0;
      w[i] = t;
    }
  }

  // Global fractional bit g (weight 2^-g) of 2/pi; zero for g < 1.
  static int src_bit(int64_t g) {
    if (g < 1 || g > kSrcWords * 64) return 0;
    int64_t idx = g - 1;
    return (kTwoOverPiBits[idx >> 6] >> (63 - (idx & 63))) & 1;
  }

  // Load frac(2^e * 2/pi): window bit j (weight 2^-j) = bit (j + e) of 2/pi.
  static Window load(int e) {
    Window win{};
    for (int i = 0; i < kWinWords; i++) {
      uint64_t word = 0;
      for (int b = 0; b < 64; b++) {
        int64_t j = int64_t(i) * 64 + b + 1;
        word = (word << 1) | uint64_t(src_bit(j + e));
      }
      win.w[i] = word;
    }
    return win;
  }

  bool is_zero() const {
    for (int i = 0; i < kWinWords; i++)
      if (w[i]) return false;
    return true;
  }

  int msb_position() const {  // weight 2^-pos of the leading magnitude bit
    for (int i = 0; i < kWinWords; i++) {
      if (w[i]) {
        int lead = 63 - __builtin_clzll(w[i]);
        return i * 64 + (63 - lead) + 1;
      }
    }
    return kWinBits + 1;
  }

  int bit(int pos) const {  // window bit at weight 2^-pos, pos in [1, kWinBits]
    int idx = pos - 1;
    return (w[idx >> 6] >> (63 - (idx & 63))) & 1;
  }

  bool any_below(int pos) const {  // any set bit strictly below weight 2^-pos
    for (int p = pos + 1; p <= kWinBits; p++) {
      if (bit(p)) return true;
      if ((p & 63) == 1) {  // aligned: test whole remaining words at once
        int from_word = (p - 1) >> 6;
        for (int i = from_word; i < kWinWords; i++)
          if (w[i]) return true;
        return false;
      }
    }
    return false;
  }

  // Subtract the exact double d (|d| < 1, expressible within the window).
  void subtract(double d) {
    if (d == 0) return;
    uint64_t b;
    std::memcpy(&b, &d, 8);
    bool neg = (b >> 63) != 0;
    int64_t biased = (b >> 52) & 0x7ff;
    uint64_t mant = (b & 0xfffffffffffffull) | (1ull << 52);
    // d = mant * 2^(biased-1023-52); mantissa MSB has weight 2^-(1023-biased).
    int top = int(1023 - biased) + 1;  // window position of mantissa bit 52
    if (top < 1 || top + 52 > kWinBits) throw std::logic_error("ph_table: limb out of window");
    // Build the subtrahend as a window-aligned big integer, then add/sub.
    Window m{};
    for (int k = 0; k <= 52; k++) {
      if ((mant >> (52 - k)) & 1) {
        int pos = top + k, idx = pos - 1;
        m.w[idx >> 6] |= 1ull << (63 - (idx & 63));
      }
    }
    if (!neg) m.negate();  // subtracting positive d == adding -d
    uint64_t carry = 0;
    for (int i = kWinWords - 1; i >= 0; i--) {
      unsigned __int128 s = (unsigned __int128)w[i] + m.w[i] + carry;
      w[i] = uint64_t(s);
      carry = uint64_t(s >> 64);
    }
  }

  // Nearest double to the window value (with its strictly positive tail).
  double round_to_double() const {
    if (is_zero()) return 0.0;
    Window mag = *this;
    bool neg = negative();
    if (neg) mag.negate();
    if (mag.is_zero()) return 0.0;  // value is -tail, below resolution
    int msb = mag.msb_position();
    if (msb + 53 > kWinBits) throw std::logic_error("ph_table: window exhausted");
    uint64_t mant = 0;
    for (int k = 0; k < 53; k++) mant = (mant << 1) | uint64_t(mag.bit(msb + k));
    int guard = mag.bit(msb + 53);
    bool sticky = mag.any_below(msb + 53);
    // true value = window + tail (tail > 0): for positive values the tail
    // breaks a would-be tie upward, for negative ones it shrinks the
    // magnitude, so a bare guard bit with no sticky rounds down.
    bool round_up = neg ? (guard && sticky) : (guard != 0);
    if (round_up) mant++;
    int exp_of_msb = -msb;  // leading bit has weight 2^exp_of_msb
    if (mant == (1ull << 53)) {
      mant >>= 1;
      exp_of_msb++;
    }
    // assemble mant * 2^(exp_of_msb - 52)
    int64_t biased = exp_of_msb + 1023;
    uint64_t bits = (uint64_t(biased) << 52) | (mant & 0xfffffffffffffull);
    if (neg) bits |= 1ull << 63;
    double r;
    std::memcpy(&r, &bits, 8);
    return r;
  }
};

}  // namespace

PayneHanekTable build_ph_table() {
  PayneHanekTable t;
  for (int i = 0; i < PayneHanekTable::kEntries; i++) {
    int e = i - PayneHanekTable::kExpBias;
    Window win = Window::load(e);
    for (int limb = 0; limb < 4; limb++) {
      double f = win.round_to_double();
      t.limbs[i * 4 + limb] = f;
      win.subtract(f);
    }
  }
  return t;
}

const PayneHanekTable& ph_table() {
  static const PayneHanekTable t = build_ph_table();
  return t;
}

std::vector<unsigned char> PayneHanekTable::serialize() const {
  std::vector<unsigned char> out(kEntries * 4 * 8);
  for (size_t i = 0; i < limbs.size(); i++) {
    uint64_t b;
    std::memcpy(&b, &limbs[i], 8);
    for (int k = 0; k < 8; k++) out[i * 8 + k] = (b >> (8 * k)) & 0xff;
  }
  return out;
}

PayneHanekTable PayneHanekTable::deserialize(const std::vector<unsigned char>& bytes) {
  if (bytes.size() != size_t(kEntries) * 4 * 8)
    throw std::invalid_argument("PayneHanekTable: expected 32768 bytes");
  PayneHanekTable t;
  for (size_t i = 0; i < t.limbs.size(); i++) {
    uint64_t b = 0;
    for (int k = 7; k >= 0; k--) b = (b << 8) | bytes[i * 8 + k];
    std::memcpy(&t.limbs[i], &b, 8);
  }
  return t;
}

}  // namespace vem
