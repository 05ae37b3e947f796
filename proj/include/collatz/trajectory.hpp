#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "collatz/types.hpp"

namespace collatz {

// Step budget for trajectory iteration. Max stopping time for n <= 1e8 is
// under 1000; the budget only makes nontermination observable.
inline constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 20;

// One number's full outcome: k = total stopping time, (X, Y) = odd/even
// counts over the k-tuple (C_0, ..., C_{k-1}), peak over C_0..C_k.
// Convention: the trajectory of 1 has k = 0, empty tuple, X = Y = 0.
struct TrajectoryRecord {
  BigInt n;
  std::uint64_t k = 0;
  std::uint64_t x_count = 0;
  std::uint64_t y_count = 0;
  BigInt peak;
  std::optional<std::vector<BigInt>> tuple;
};

// Thrown when a trajectory fails to reach 1 within the step budget. Either
// the budget is too small or the input is a Collatz counterexample.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(BigInt last_value, std::uint64_t steps);

  const BigInt& last_value() const { return last_value_; }
  std::uint64_t steps() const { return steps_; }

 private:
  BigInt last_value_;
  std::uint64_t steps_;
};

// g(v): v/2 for even v, 3v+1 for odd v. Exact at any magnitude.
BigInt collatz_step(const BigInt& v);

// Iterates g from n until 1. Runs in 64-bit arithmetic while the value fits;
// a checked 3v+1 promotes the remainder of the trajectory to arbitrary
// precision. Throws BudgetExceeded if 1 is not reached within `budget` steps.
TrajectoryRecord compute_trajectory(const BigInt& n,
                                    std::uint64_t budget = kDefaultBudget,
                                    bool keep_tuple = false);

// Sweep-facing variant: no tuple, no exceptions. `completed == false` means
// the budget ran out at `last_value`.
struct TrajectoryStats {
  std::uint64_t k = 0;
  std::uint64_t x_count = 0;
  std::uint64_t y_count = 0;
  BigInt peak;
  bool completed = false;
  BigInt last_value;
};

TrajectoryStats trajectory_stats(std::uint64_t n,
                                 std::uint64_t budget = kDefaultBudget);

}  // namespace collatz
