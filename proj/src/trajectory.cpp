#include "collatz/trajectory.hpp"

#include <limits>

namespace collatz {
namespace {

// 3v+1 fits in 64 bits iff v <= this.
constexpr std::uint64_t kOddStepLimit =
    (std::numeric_limits<std::uint64_t>::max() - 1) / 3;

constexpr std::uint64_t kU64Max = std::numeric_limits<std::uint64_t>::max();

}  // namespace

BudgetExceeded::BudgetExceeded(BigInt last_value, std::uint64_t steps)
    : std::runtime_error("budget exceeded after " + std::to_string(steps) +
                         " steps at value " + last_value.str()),
      last_value_(std::move(last_value)),
      steps_(steps) {}

BigInt collatz_step(const BigInt& v) {
  if (v < 1) throw std::invalid_argument("collatz_step: v must be positive");
  if ((v & 1) == 0) return v >> 1;
  return 3 * v + 1;
}

namespace {

struct Walk {
  std::uint64_t k = 0;
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  BigInt peak;
  bool completed = false;
  BigInt last;  // value at budget exhaustion
  std::vector<BigInt>* tuple = nullptr;
};

// Iterates g from `small` (which must fit in 64 bits). Once a 3v+1 would
// overflow, the rest of the trajectory stays in arbitrary precision.
void walk(std::uint64_t small, std::uint64_t budget, Walk& w) {
  std::uint64_t peak64 = small;
  while (small != 1) {
    if (w.k == budget) {
      w.peak = peak64;
      w.last = small;
      return;
    }
    if (w.tuple) w.tuple->emplace_back(small);
    if (small & 1) {
      ++w.x;
      ++w.k;
      if (small > kOddStepLimit) {
        // Promote; finish the trajectory in bignum arithmetic.
        BigInt big = 3 * BigInt(small) + 1;
        BigInt peak = peak64;
        if (big > peak) peak = big;
        while (big != 1) {
          if (w.k == budget) {
            w.peak = std::move(peak);
            w.last = std::move(big);
            return;
          }
          if (w.tuple) w.tuple->push_back(big);
          if ((big & 1) != 0) {
            ++w.x;
            big = 3 * big + 1;
            if (big > peak) peak = big;
          } else {
            ++w.y;
            big >>= 1;
          }
          ++w.k;
        }
        w.peak = std::move(peak);
        w.completed = true;
        return;
      }
      small = 3 * small + 1;
      if (small > peak64) peak64 = small;
    } else {
      ++w.y;
      ++w.k;
      small >>= 1;
    }
  }
  w.peak = peak64;
  w.completed = true;
}

}  // namespace

TrajectoryRecord compute_trajectory(const BigInt& n, std::uint64_t budget,
                                    bool keep_tuple) {
  if (n < 1) throw std::invalid_argument("compute_trajectory: n must be positive");

  TrajectoryRecord rec;
  rec.n = n;
  if (keep_tuple) rec.tuple.emplace();

  Walk w;
  if (keep_tuple) w.tuple = &*rec.tuple;

  if (n <= kU64Max) {
    walk(n.convert_to<std::uint64_t>(), budget, w);
  } else {
    // Seed already beyond the fast path; pure bignum from the start.
    BigInt big = n;
    BigInt peak = n;
    while (big != 1) {
      if (w.k == budget) break;
      if (w.tuple) w.tuple->push_back(big);
      if ((big & 1) != 0) {
        ++w.x;
        big = 3 * big + 1;
        if (big > peak) peak = big;
      } else {
        ++w.y;
        big >>= 1;
      }
      ++w.k;
    }
    w.peak = std::move(peak);
    if (big == 1) {
      w.completed = true;
    } else {
      w.last = std::move(big);
    }
  }

  if (!w.completed) throw BudgetExceeded(w.last, w.k);

  rec.k = w.k;
  rec.x_count = w.x;
  rec.y_count = w.y;
  rec.peak = std::move(w.peak);
  return rec;
}

TrajectoryStats trajectory_stats(std::uint64_t n, std::uint64_t budget) {
  if (n < 1) throw std::invalid_argument("trajectory_stats: n must be positive");
  Walk w;
  walk(n, budget, w);
  TrajectoryStats s;
  s.k = w.k;
  s.x_count = w.x;
  s.y_count = w.y;
  s.peak = std::move(w.peak);
  s.completed = w.completed;
  if (!w.completed) s.last_value = std::move(w.last);
  return s;
}

}  // namespace collatz
