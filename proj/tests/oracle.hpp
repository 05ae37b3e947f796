#pragma once

// Test-only brute-force oracles, kept independent of the library's
// implementation paths. Everything here is a plain loop over cpp_int.

#include <cstdint>

#include "collatz/types.hpp"

namespace oracle {

struct Outcome {
  std::uint64_t k = 0;
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  collatz::BigInt peak;
};

// Pure arbitrary-precision walk of g; no fast path, no overflow handling.
inline Outcome run(collatz::BigInt v) {
  Outcome o;
  o.peak = v;
  while (v != 1) {
    if ((v & 1) != 0) {
      ++o.x;
      v = 3 * v + 1;
      if (v > o.peak) o.peak = v;
    } else {
      ++o.y;
      v >>= 1;
    }
    ++o.k;
  }
  return o;
}

}  // namespace oracle
