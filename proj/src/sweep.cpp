#include "collatz/sweep.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <thread>

#include "collatz/exact.hpp"
#include "collatz/trajectory.hpp"

namespace collatz::sweep {
namespace {

using nlohmann::ordered_json;

nlohmann::ordered_json config_echo(const SweepConfig& cfg) {
  // `workers` is deliberately absent: results are worker-count independent,
  // so a resume may use different parallelism.
  return {{"lo", cfg.lo},
          {"hi", cfg.hi},
          {"chunk_size", cfg.chunk_size},
          {"budget", cfg.budget},
          {"claims", cfg.claims}};
}

void validate_config(const SweepConfig& cfg) {
  if (cfg.lo < 1 || cfg.lo > cfg.hi)
    throw std::invalid_argument("sweep: need 1 <= lo <= hi");
  if (cfg.chunk_size < 1)
    throw std::invalid_argument("sweep: chunk_size must be >= 1");
  for (const std::string& id : cfg.claims) {
    const claims::Claim& c = claims::find_claim(id);  // throws UnknownClaim
    if (c.kind != claims::ClaimKind::PerNumber)
      throw std::invalid_argument("sweep: claim " + id +
                                  " is not a per-number predicate and cannot "
                                  "run inline");
  }
}

ordered_json witness_to_json(const claims::Witness& w) {
  ordered_json subjects = ordered_json::array();
  for (const BigInt& s : w.subjects) subjects.push_back(s.str());
  return {{"subjects", subjects}, {"detail", w.detail}};
}

claims::Witness witness_from_json(const nlohmann::json& j) {
  claims::Witness w;
  for (const auto& s : j.at("subjects"))
    w.subjects.emplace_back(s.get<std::string>());
  w.detail = j.at("detail");
  return w;
}

// Removes the lock file on destruction; creation is exclusive so two sweeps
// cannot drive the same checkpoint path at once.
class LockFile {
 public:
  explicit LockFile(const std::string& checkpoint_path)
      : path_(checkpoint_path + ".lock") {
    int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0) {
      throw IoError("cannot acquire lock file " + path_ +
                    " (another sweep may be using this checkpoint)");
    }
    ::close(fd);
  }
  ~LockFile() { ::unlink(path_.c_str()); }
  LockFile(const LockFile&) = delete;
  LockFile& operator=(const LockFile&) = delete;

 private:
  std::string path_;
};

struct IntegerChecks {
  // Integer reformulations of the inline claims; `A = 3^X(2n+1) - 1` and
  // `D = 2^(Y+1)` so that Z = A/D. eps in [0, 1/3) iff A <= D and 3(D-A) < D.
  bool c1 = true, c2 = true, c3 = true, c4 = true, c5 = true;
};

class ChunkWorkerState {
 public:
  const BigInt& pow3(std::uint64_t x) {
    while (cache_.size() <= x) {
      cache_.push_back(cache_.empty() ? BigInt(1) : cache_.back() * 3);
    }
    return cache_[x];
  }

 private:
  std::vector<BigInt> cache_;
};

claims::Witness falsifying_witness(const std::string& claim_id,
                                   std::uint64_t n, std::uint64_t x,
                                   std::uint64_t y) {
  exact::ExactWitness e = exact::make_witness(BigInt(n), x, y);
  claims::Witness w;
  w.subjects = {BigInt(n)};
  w.detail = {{"claim_id", claim_id},
              {"n", std::to_string(n)},
              {"x", x},
              {"y", y},
              {"z", to_string(e.z)},
              {"epsilon", to_string(e.epsilon)},
              {"epsilon_n", to_string(e.epsilon_n)},
              {"n_prime", to_string(e.n_prime)},
              {"frac_n_prime", to_string(e.frac_n_prime)}};
  return w;
}

Aggregate process_chunk(std::uint64_t lo, std::uint64_t hi,
                        const SweepConfig& cfg, ChunkWorkerState& state) {
  Aggregate agg;
  for (const std::string& id : cfg.claims) agg.claim_tallies[id];

  for (std::uint64_t n = lo; n <= hi; ++n) {
    TrajectoryStats s = trajectory_stats(n, cfg.budget);
    ++agg.count;
    if (!s.completed) {
      ++agg.budget_exceeded;
      if (!agg.first_budget_exceeded_n) agg.first_budget_exceeded_n = n;
      for (auto& [id, tally] : agg.claim_tallies) {
        ++tally.indeterminate;
        if (!tally.minimal_indeterminate_n) tally.minimal_indeterminate_n = n;
      }
      continue;
    }
    if (s.k > agg.max_k || agg.argmax_n == 0) {
      agg.max_k = s.k;
      agg.argmax_n = n;
    }
    if (s.peak > agg.max_peak || agg.argmax_peak_n == 0) {
      agg.max_peak = s.peak;
      agg.argmax_peak_n = n;
    }
    ++agg.xy_histogram[{static_cast<std::uint32_t>(s.x_count),
                        static_cast<std::uint32_t>(s.y_count)}];

    if (!cfg.claims.empty()) {
      const BigInt& p3 = state.pow3(s.x_count);
      BigInt a = p3 * (2 * BigInt(n) + 1) - 1;
      BigInt d = BigInt(1) << (s.y_count + 1);

      IntegerChecks ck;
      const bool eps_in_bounds = a <= d && 3 * (d - a) < d;
      ck.c1 = eps_in_bounds;
      ck.c2 = a <= d;  // ceil(A/D) == 1, A >= 2 always
      ck.c3 = s.k == 0 || s.x_count >= 1;
      // n' = A / (2*3^X): floor must be n, remainder must be 3^X - 1.
      BigInt den = 2 * p3;
      ck.c4 = (a / den == n) && (a % den == p3 - 1);
      ck.c5 = eps_in_bounds;  // the 3^-X factor cancels from both sides

      for (auto& [id, tally] : agg.claim_tallies) {
        bool ok = true;
        if (id == "C1") ok = ck.c1;
        else if (id == "C2") ok = ck.c2;
        else if (id == "C3") ok = ck.c3;
        else if (id == "C4") ok = ck.c4;
        else if (id == "C5") ok = ck.c5;
        if (ok) {
          ++tally.verified;
        } else {
          ++tally.falsified;
          if (!tally.minimal_counterexample) {
            tally.minimal_counterexample =
                falsifying_witness(id, n, s.x_count, s.y_count);
          }
        }
      }
    }
  }
  return agg;
}

std::uint64_t chunk_count(const SweepConfig& cfg) {
  const std::uint64_t span = cfg.hi - cfg.lo + 1;
  return (span + cfg.chunk_size - 1) / cfg.chunk_size;
}

std::pair<std::uint64_t, std::uint64_t> chunk_bounds(const SweepConfig& cfg,
                                                     std::uint64_t index) {
  std::uint64_t lo = cfg.lo + index * cfg.chunk_size;
  std::uint64_t hi = std::min(cfg.hi, lo + cfg.chunk_size - 1);
  return {lo, hi};
}

std::string scale_note(const SweepSummary& s) {
  std::string note;
  if (s.totals.budget_exceeded == 0) {
    note = "Every n in [" + std::to_string(s.lo) + ", " + std::to_string(s.hi) +
           "] reached 1 within the step budget, so the set of convergent "
           "numbers contains this entire interval. ";
  } else {
    note = std::to_string(s.totals.budget_exceeded) +
           " number(s) did not reach 1 within the step budget and are "
           "reported as indeterminate, not divergent. ";
  }
  note +=
      "Distributed searches elsewhere have confirmed convergence for all "
      "n < 20*2^58 (~5.76e18); this desk-scale sweep does not approach that "
      "bound and substitutes exhaustive exact property checks on the swept "
      "range instead.";
  return note;
}

struct ParsedCheckpoint {
  SweepConfig config;  // from the header echo (workers/path unset)
  std::map<std::uint64_t, Aggregate> done;  // chunk index -> aggregate
};

ParsedCheckpoint parse_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open checkpoint " + path);

  std::string line;
  if (!std::getline(in, line))
    throw CorruptCheckpoint("checkpoint is empty: " + path);

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw CorruptCheckpoint(std::string("bad checkpoint header: ") + e.what());
  }
  if (!header.contains("version") ||
      header["version"].get<std::uint32_t>() != kCheckpointVersion)
    throw CorruptCheckpoint("checkpoint version mismatch");
  if (!header.contains("config"))
    throw CorruptCheckpoint("checkpoint header has no config echo");

  ParsedCheckpoint parsed;
  try {
    const auto& c = header["config"];
    parsed.config.lo = c.at("lo").get<std::uint64_t>();
    parsed.config.hi = c.at("hi").get<std::uint64_t>();
    parsed.config.chunk_size = c.at("chunk_size").get<std::uint64_t>();
    parsed.config.budget = c.at("budget").get<std::uint64_t>();
    parsed.config.claims = c.at("claims").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw CorruptCheckpoint(std::string("bad config echo: ") + e.what());
  }

  const std::uint64_t nchunks = chunk_count(parsed.config);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      const std::uint64_t clo = j.at("chunk_lo").get<std::uint64_t>();
      const std::uint64_t chi = j.at("chunk_hi").get<std::uint64_t>();
      if (clo < parsed.config.lo || chi > parsed.config.hi || clo > chi ||
          (clo - parsed.config.lo) % parsed.config.chunk_size != 0)
        throw CorruptCheckpoint("chunk [" + std::to_string(clo) + ", " +
                                std::to_string(chi) +
                                "] is not on the chunk grid");
      const std::uint64_t index =
          (clo - parsed.config.lo) / parsed.config.chunk_size;
      const auto expected = chunk_bounds(parsed.config, index);
      if (index >= nchunks || chi != expected.second)
        throw CorruptCheckpoint("chunk bounds do not match the grid at line " +
                                std::to_string(lineno));
      if (parsed.done.count(index))
        throw CorruptCheckpoint("overlapping chunk at line " +
                                std::to_string(lineno));
      parsed.done.emplace(index, Aggregate::from_json(j.at("partial_aggregate")));
    } catch (const nlohmann::json::exception& e) {
      throw CorruptCheckpoint("bad chunk record at line " +
                              std::to_string(lineno) + ": " + e.what());
    }
  }
  return parsed;
}

// Runs the not-yet-done chunks across a worker pool and merges everything in
// chunk-index order. Checkpoint appends are serialized by the merge mutex.
SweepSummary run_sweep(const SweepConfig& cfg,
                       std::map<std::uint64_t, Aggregate> done,
                       std::ofstream* checkpoint) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t nchunks = chunk_count(cfg);

  std::vector<std::optional<Aggregate>> slots(nchunks);
  std::vector<std::uint64_t> pending;
  for (std::uint64_t i = 0; i < nchunks; ++i) {
    auto it = done.find(i);
    if (it != done.end()) {
      slots[i] = std::move(it->second);
    } else {
      pending.push_back(i);
    }
  }

  unsigned workers = cfg.workers != 0 ? cfg.workers
                                      : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(
      std::min<std::uint64_t>(workers, std::max<std::uint64_t>(1, pending.size())));

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex mu;  // guards slots writes, checkpoint appends, first_error
  std::exception_ptr first_error;

  auto work = [&]() {
    ChunkWorkerState state;
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= pending.size()) return;
      const std::uint64_t index = pending[i];
      try {
        const auto [clo, chi] = chunk_bounds(cfg, index);
        Aggregate agg = process_chunk(clo, chi, cfg, state);
        std::lock_guard<std::mutex> lk(mu);
        if (checkpoint) {
          ordered_json rec = {{"version", kCheckpointVersion},
                              {"chunk_lo", clo},
                              {"chunk_hi", chi},
                              {"partial_aggregate", agg.to_json()}};
          *checkpoint << rec.dump() << "\n";
          checkpoint->flush();
          if (!*checkpoint) throw IoError("checkpoint write failed");
        }
        slots[index] = std::move(agg);
      } catch (...) {
        std::lock_guard<std::mutex> lk(mu);
        if (!first_error) first_error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  if (pending.empty()) {
    // nothing to compute (fully complete checkpoint)
  } else if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  SweepSummary summary;
  summary.lo = cfg.lo;
  summary.hi = cfg.hi;
  summary.chunks_processed = pending.size();
  for (std::uint64_t i = 0; i < nchunks; ++i) summary.totals.merge(*slots[i]);

  // Histogram key cap: keep the lexicographically smallest keys, fold the
  // rest into the overflow counter.
  if (summary.totals.xy_histogram.size() > kMaxHistogramKeys) {
    auto it = summary.totals.xy_histogram.begin();
    std::advance(it, kMaxHistogramKeys);
    for (auto drop = it; drop != summary.totals.xy_histogram.end(); ++drop)
      summary.xy_histogram_overflow += drop->second;
    summary.totals.xy_histogram.erase(it, summary.totals.xy_histogram.end());
  }

  summary.note = scale_note(summary);
  summary.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return summary;
}

}  // namespace

void Aggregate::merge(const Aggregate& other) {
  if (count == 0) {
    *this = other;
    return;
  }
  if (other.count == 0) return;
  count += other.count;
  if (other.max_k > max_k ||
      (other.max_k == max_k && other.argmax_n != 0 &&
       (argmax_n == 0 || other.argmax_n < argmax_n))) {
    max_k = other.max_k;
    argmax_n = other.argmax_n;
  }
  if (other.max_peak > max_peak ||
      (other.max_peak == max_peak && other.argmax_peak_n != 0 &&
       (argmax_peak_n == 0 || other.argmax_peak_n < argmax_peak_n))) {
    max_peak = other.max_peak;
    argmax_peak_n = other.argmax_peak_n;
  }
  budget_exceeded += other.budget_exceeded;
  if (other.first_budget_exceeded_n &&
      (!first_budget_exceeded_n ||
       *other.first_budget_exceeded_n < *first_budget_exceeded_n))
    first_budget_exceeded_n = other.first_budget_exceeded_n;
  for (const auto& [key, c] : other.xy_histogram) xy_histogram[key] += c;
  for (const auto& [id, t] : other.claim_tallies) {
    ClaimTally& mine = claim_tallies[id];
    mine.verified += t.verified;
    mine.falsified += t.falsified;
    mine.indeterminate += t.indeterminate;
    if (t.minimal_counterexample &&
        (!mine.minimal_counterexample ||
         t.minimal_counterexample->subjects[0] <
             mine.minimal_counterexample->subjects[0]))
      mine.minimal_counterexample = t.minimal_counterexample;
    if (t.minimal_indeterminate_n &&
        (!mine.minimal_indeterminate_n ||
         *t.minimal_indeterminate_n < *mine.minimal_indeterminate_n))
      mine.minimal_indeterminate_n = t.minimal_indeterminate_n;
  }
}

nlohmann::ordered_json Aggregate::to_json() const {
  ordered_json j;
  j["count"] = count;
  j["max_k"] = max_k;
  j["argmax_n"] = argmax_n;
  j["max_peak"] = max_peak.str();
  j["argmax_peak_n"] = argmax_peak_n;
  j["budget_exceeded"] = budget_exceeded;
  j["first_budget_exceeded_n"] =
      first_budget_exceeded_n ? ordered_json(*first_budget_exceeded_n)
                              : ordered_json(nullptr);
  ordered_json hist = ordered_json::array();
  for (const auto& [key, c] : xy_histogram)
    hist.push_back({key.first, key.second, c});
  j["xy_histogram"] = std::move(hist);
  ordered_json tallies = ordered_json::object();
  for (const auto& [id, t] : claim_tallies) {
    ordered_json tj;
    tj["verified"] = t.verified;
    tj["falsified"] = t.falsified;
    tj["indeterminate"] = t.indeterminate;
    tj["minimal_counterexample"] =
        t.minimal_counterexample ? witness_to_json(*t.minimal_counterexample)
                                 : ordered_json(nullptr);
    tj["minimal_indeterminate_n"] =
        t.minimal_indeterminate_n ? ordered_json(*t.minimal_indeterminate_n)
                                  : ordered_json(nullptr);
    tallies[id] = std::move(tj);
  }
  j["claim_tallies"] = std::move(tallies);
  return j;
}

Aggregate Aggregate::from_json(const nlohmann::json& j) {
  Aggregate a;
  a.count = j.at("count").get<std::uint64_t>();
  a.max_k = j.at("max_k").get<std::uint64_t>();
  a.argmax_n = j.at("argmax_n").get<std::uint64_t>();
  a.max_peak = BigInt(j.at("max_peak").get<std::string>());
  a.argmax_peak_n = j.at("argmax_peak_n").get<std::uint64_t>();
  a.budget_exceeded = j.at("budget_exceeded").get<std::uint64_t>();
  if (!j.at("first_budget_exceeded_n").is_null())
    a.first_budget_exceeded_n =
        j.at("first_budget_exceeded_n").get<std::uint64_t>();
  for (const auto& entry : j.at("xy_histogram")) {
    a.xy_histogram[{entry.at(0).get<std::uint32_t>(),
                    entry.at(1).get<std::uint32_t>()}] =
        entry.at(2).get<std::uint64_t>();
  }
  for (const auto& [id, tj] : j.at("claim_tallies").items()) {
    ClaimTally t;
    t.verified = tj.at("verified").get<std::uint64_t>();
    t.falsified = tj.at("falsified").get<std::uint64_t>();
    t.indeterminate = tj.at("indeterminate").get<std::uint64_t>();
    if (!tj.at("minimal_counterexample").is_null())
      t.minimal_counterexample = witness_from_json(tj.at("minimal_counterexample"));
    if (!tj.at("minimal_indeterminate_n").is_null())
      t.minimal_indeterminate_n =
          tj.at("minimal_indeterminate_n").get<std::uint64_t>();
    a.claim_tallies[id] = std::move(t);
  }
  return a;
}

nlohmann::ordered_json SweepSummary::to_json(bool include_timing) const {
  ordered_json j;
  j["range"] = {{"lo", lo}, {"hi", hi}};
  ordered_json body = totals.to_json();
  for (auto& [key, value] : body.items()) j[key] = value;
  j["xy_histogram_overflow"] = xy_histogram_overflow;
  j["note"] = note;
  if (include_timing) {
    j["wall_time_seconds"] = wall_time_seconds;
    j["chunks_processed"] = chunks_processed;
  }
  return j;
}

SweepSummary sweep_range(const SweepConfig& cfg) {
  validate_config(cfg);
  if (!cfg.checkpoint_path) {
    return run_sweep(cfg, {}, nullptr);
  }
  LockFile lock(*cfg.checkpoint_path);
  std::ofstream out(*cfg.checkpoint_path, std::ios::trunc);
  if (!out) throw IoError("cannot open checkpoint " + *cfg.checkpoint_path);
  ordered_json header = {{"version", kCheckpointVersion},
                         {"config", config_echo(cfg)}};
  out << header.dump() << "\n";
  out.flush();
  if (!out) throw IoError("checkpoint header write failed");
  return run_sweep(cfg, {}, &out);
}

SweepSummary resume(const SweepConfig& cfg, const std::string& checkpoint_path) {
  validate_config(cfg);
  LockFile lock(checkpoint_path);
  ParsedCheckpoint parsed = parse_checkpoint(checkpoint_path);
  if (config_echo(parsed.config) != config_echo(cfg))
    throw ConfigMismatch("checkpoint config echo differs from this invocation");

  std::ofstream out(checkpoint_path, std::ios::app);
  if (!out) throw IoError("cannot reopen checkpoint " + checkpoint_path);
  return run_sweep(cfg, std::move(parsed.done), &out);
}

SweepSummary resume(const std::string& checkpoint_path) {
  // Peek the config first; parse_checkpoint validates everything again under
  // the lock taken by the other overload.
  SweepConfig cfg = parse_checkpoint(checkpoint_path).config;
  cfg.checkpoint_path = checkpoint_path;
  return resume(cfg, checkpoint_path);
}

}  // namespace collatz::sweep
