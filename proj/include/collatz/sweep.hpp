#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "collatz/claims.hpp"
#include "collatz/types.hpp"

namespace collatz::sweep {

inline constexpr std::uint32_t kCheckpointVersion = 1;
inline constexpr std::size_t kMaxHistogramKeys = std::size_t{1} << 16;

struct SweepConfig {
  std::uint64_t lo = 1;
  std::uint64_t hi = 1;
  std::uint64_t chunk_size = std::uint64_t{1} << 16;
  unsigned workers = 0;  // 0: machine parallelism
  std::uint64_t budget = kDefaultBudget;
  std::vector<std::string> claims = {"C1", "C2", "C4", "C5"};  // per-number only
  std::optional<std::string> checkpoint_path;
};

struct ClaimTally {
  std::uint64_t verified = 0;
  std::uint64_t falsified = 0;
  std::uint64_t indeterminate = 0;
  std::optional<claims::Witness> minimal_counterexample;
  std::optional<std::uint64_t> minimal_indeterminate_n;
};

// Per-chunk result. Merging is associative and commutative, so totals do not
// depend on chunk boundaries or completion order.
struct Aggregate {
  std::uint64_t count = 0;
  std::uint64_t max_k = 0;
  std::uint64_t argmax_n = 0;  // smallest n attaining max_k
  BigInt max_peak;
  std::uint64_t argmax_peak_n = 0;
  std::uint64_t budget_exceeded = 0;
  std::optional<std::uint64_t> first_budget_exceeded_n;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> xy_histogram;
  std::map<std::string, ClaimTally> claim_tallies;

  void merge(const Aggregate& other);
  nlohmann::ordered_json to_json() const;
  static Aggregate from_json(const nlohmann::json& j);
};

struct SweepSummary {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  Aggregate totals;
  std::uint64_t xy_histogram_overflow = 0;  // counts beyond the key cap
  std::uint64_t chunks_processed = 0;       // this invocation (resume skips done ones)
  double wall_time_seconds = 0;
  std::string note;

  // Stable key order; timing only on request so identical runs serialize
  // byte-identically.
  nlohmann::ordered_json to_json(bool include_timing = false) const;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class CorruptCheckpoint : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class ConfigMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Processes every n in [lo, hi] exactly once across a worker pool. Inline
// claim checks use integer-only reformulations; the exact module is consulted
// only to build witnesses. Results are independent of chunk_size and workers.
SweepSummary sweep_range(const SweepConfig& config);

// Completes the missing chunks of a checkpointed sweep. The final summary is
// field-for-field identical to an uninterrupted run of the same config.
SweepSummary resume(const SweepConfig& config, const std::string& checkpoint_path);

// Convenience overload: takes the config from the checkpoint header.
SweepSummary resume(const std::string& checkpoint_path);

}  // namespace collatz::sweep
