#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "collatz/trajectory.hpp"
#include "collatz/types.hpp"

namespace collatz::claims {

enum class ClaimKind { PerNumber, Pairwise, Closure };
enum class Verdict { VerifiedOnRange, Falsified };

const char* to_string(Verdict v);
const char* to_string(ClaimKind k);

struct Claim {
  std::string id;
  std::string statement;  // one-line statement with its citation
  ClaimKind kind;
};

// One offending instance. `subjects` is [n] or [a, b]; `detail` carries the
// exact quantities proving the violation, rationals rendered "p/q".
struct Witness {
  std::vector<BigInt> subjects;
  nlohmann::ordered_json detail;
};

struct ClaimResult {
  std::string claim_id;
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  Verdict verdict = Verdict::VerifiedOnRange;
  std::vector<Witness> counterexamples;  // minimal-first, capped
  std::uint64_t counterexample_total = 0;
  std::vector<Witness> indeterminate;  // budget-exhausted instances, capped
  std::uint64_t indeterminate_total = 0;
  std::uint64_t checked_count = 0;
  nlohmann::ordered_json extra;  // claim-specific findings

  nlohmann::ordered_json to_json() const;
};

class UnknownClaim : public std::runtime_error {
 public:
  explicit UnknownClaim(const std::string& id)
      : std::runtime_error("unknown claim id: " + id) {}
};

// Witness lists are capped; totals report the full violation count.
inline constexpr std::size_t kMaxReportedWitnesses = 16;

// The fixed registry C1..C8, in id order.
const std::vector<Claim>& list_claims();
const Claim& find_claim(const std::string& id);  // throws UnknownClaim

// Evaluates one claim over [lo, hi] with exact arithmetic. Per-number claims
// visit every n; pairwise claims (C6, C7) compare all same-(X,Y) pairs;
// C8 covers all (a, b) with a <= b, a+b <= hi when hi <= 10^4, else a
// fixed-seed random sample. Deterministic, minimal witness first.
ClaimResult check_claim(const std::string& id, std::uint64_t lo,
                        std::uint64_t hi,
                        std::uint64_t budget = kDefaultBudget);

struct XyGroups {
  // (X, Y) -> members in ascending order
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::vector<std::uint64_t>>
      buckets;
  std::vector<std::uint64_t> indeterminate;  // budget-exhausted n
};

XyGroups group_by_xy(std::uint64_t lo, std::uint64_t hi,
                     std::uint64_t budget = kDefaultBudget);

}  // namespace collatz::claims
