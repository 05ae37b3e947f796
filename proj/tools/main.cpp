#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "collatz/claims.hpp"
#include "collatz/exact.hpp"
#include "collatz/sweep.hpp"
#include "collatz/trajectory.hpp"

namespace {

using collatz::BigInt;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitFalsified = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

// ---- rendering (all formats render from the json document, so `report`
// ---- reuses the exact same code paths) ----

std::string render_trajectory_text(const ordered_json& d) {
  std::ostringstream os;
  os << "n = " << d["n"].get<std::string>() << "\n";
  os << "k = " << d["k"] << " (X = " << d["x"] << ", Y = " << d["y"] << ")\n";
  os << "peak = " << d["peak"].get<std::string>() << "\n";
  if (d.contains("tuple")) {
    os << "tuple = (";
    bool first = true;
    for (const auto& v : d["tuple"]) {
      if (!first) os << ", ";
      os << v.get<std::string>();
      first = false;
    }
    os << ")\n";
  }
  if (d.contains("exact")) {
    const auto& e = d["exact"];
    os << "Z = " << e["z"].get<std::string>() << "\n";
    os << "epsilon = " << e["epsilon"].get<std::string>() << "\n";
    os << "epsilon_n = " << e["epsilon_n"].get<std::string>() << "\n";
    os << "n' = " << e["n_prime"].get<std::string>() << "\n";
    os << "{n'} = " << e["frac_n_prime"].get<std::string>() << "\n";
    os << "f_{X,Y}(n) = " << e["f"].get<std::string>() << "\n";
  }
  return os.str();
}

std::string render_trajectory_csv(const ordered_json& d) {
  std::ostringstream os;
  os << "n,k,x,y,peak";
  if (d.contains("exact"))
    os << ",z,epsilon,epsilon_n,n_prime,frac_n_prime,f";
  os << "\n";
  os << d["n"].get<std::string>() << "," << d["k"] << "," << d["x"] << ","
     << d["y"] << "," << d["peak"].get<std::string>();
  if (d.contains("exact")) {
    const auto& e = d["exact"];
    os << "," << e["z"].get<std::string>() << "," << e["epsilon"].get<std::string>()
       << "," << e["epsilon_n"].get<std::string>() << ","
       << e["n_prime"].get<std::string>() << ","
       << e["frac_n_prime"].get<std::string>() << "," << e["f"].get<std::string>();
  }
  os << "\n";
  return os.str();
}

std::string render_claims_text(const ordered_json& d) {
  std::ostringstream os;
  for (const auto& r : d["results"]) {
    os << r["claim_id"].get<std::string>() << ": "
       << r["verdict"].get<std::string>() << " on [" << r["range"]["lo"] << ", "
       << r["range"]["hi"] << "]\n";
    os << "  checked: " << r["checked_count"] << " instance(s)\n";
    const auto total = r["counterexample_total"].get<std::uint64_t>();
    if (total > 0) {
      os << "  counterexamples: " << total << " total, showing "
         << r["counterexamples"].size() << " (minimal first)\n";
      for (const auto& w : r["counterexamples"]) os << "    " << w.dump() << "\n";
    }
    const auto ind = r["indeterminate_total"].get<std::uint64_t>();
    if (ind > 0) {
      os << "  indeterminate (budget): " << ind << " total, showing "
         << r["indeterminate"].size() << "\n";
      for (const auto& w : r["indeterminate"]) os << "    " << w.dump() << "\n";
    }
    if (r.contains("extra")) os << "  extra: " << r["extra"].dump() << "\n";
  }
  return os.str();
}

std::string render_claims_csv(const ordered_json& d) {
  std::ostringstream os;
  os << "claim_id,lo,hi,verdict,checked_count,counterexample_total,"
        "indeterminate_total,first_counterexample\n";
  for (const auto& r : d["results"]) {
    std::string first =
        r["counterexamples"].empty() ? "" : r["counterexamples"][0].dump();
    os << r["claim_id"].get<std::string>() << "," << r["range"]["lo"] << ","
       << r["range"]["hi"] << "," << r["verdict"].get<std::string>() << ","
       << r["checked_count"] << "," << r["counterexample_total"] << ","
       << r["indeterminate_total"] << "," << csv_quote(first) << "\n";
  }
  return os.str();
}

std::string render_sweep_text(const ordered_json& d) {
  std::ostringstream os;
  os << "range: [" << d["range"]["lo"] << ", " << d["range"]["hi"] << "]\n";
  os << "count: " << d["count"] << "\n";
  os << "max stopping time: " << d["max_k"] << " at n = " << d["argmax_n"] << "\n";
  os << "max peak: " << d["max_peak"].get<std::string>() << " at n = "
     << d["argmax_peak_n"] << "\n";
  os << "budget exceeded: " << d["budget_exceeded"] << "\n";
  os << "distinct (X,Y) couples: " << d["xy_histogram"].size()
     << " (overflow " << d["xy_histogram_overflow"] << ")\n";
  if (!d["claim_tallies"].empty()) os << "claims:\n";
  for (const auto& [id, t] : d["claim_tallies"].items()) {
    const bool falsified = t["falsified"].get<std::uint64_t>() > 0;
    os << "  " << id << ": " << (falsified ? "FALSIFIED" : "VERIFIED_ON_RANGE")
       << " (verified " << t["verified"] << ", falsified " << t["falsified"]
       << ", indeterminate " << t["indeterminate"] << ")\n";
    if (falsified && !t["minimal_counterexample"].is_null())
      os << "    minimal counterexample: "
         << t["minimal_counterexample"]["detail"].dump() << "\n";
  }
  os << "note: " << d["note"].get<std::string>() << "\n";
  if (d.contains("wall_time_seconds"))
    os << "wall time: " << d["wall_time_seconds"] << " s\n";
  return os.str();
}

std::string render_sweep_csv(const ordered_json& d) {
  std::ostringstream os;
  os << "key,value\n";
  os << "lo," << d["range"]["lo"] << "\n";
  os << "hi," << d["range"]["hi"] << "\n";
  os << "count," << d["count"] << "\n";
  os << "max_k," << d["max_k"] << "\n";
  os << "argmax_n," << d["argmax_n"] << "\n";
  os << "max_peak," << d["max_peak"].get<std::string>() << "\n";
  os << "argmax_peak_n," << d["argmax_peak_n"] << "\n";
  os << "budget_exceeded," << d["budget_exceeded"] << "\n";
  os << "xy_distinct," << d["xy_histogram"].size() << "\n";
  os << "xy_histogram_overflow," << d["xy_histogram_overflow"] << "\n";
  for (const auto& [id, t] : d["claim_tallies"].items()) {
    os << id << ".verified," << t["verified"] << "\n";
    os << id << ".falsified," << t["falsified"] << "\n";
    os << id << ".indeterminate," << t["indeterminate"] << "\n";
  }
  os << "note," << csv_quote(d["note"].get<std::string>()) << "\n";
  return os.str();
}

std::string render(const ordered_json& doc, const std::string& format) {
  if (format == "json") return doc.dump(2) + "\n";
  const std::string type = doc.value("type", "");
  if (type == "trajectory")
    return format == "csv" ? render_trajectory_csv(doc)
                           : render_trajectory_text(doc);
  if (type == "claims")
    return format == "csv" ? render_claims_csv(doc) : render_claims_text(doc);
  if (type == "sweep")
    return format == "csv" ? render_sweep_csv(doc) : render_sweep_text(doc);
  throw std::runtime_error("unrecognized document type: " + type);
}

int emit(const ordered_json& doc, const std::string& format,
         const std::string& out_path) {
  const std::string body = render(doc, format);
  if (out_path.empty()) {
    std::cout << body;
  } else {
    std::ofstream out(out_path);
    out << body;
    if (!out) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return kExitRuntime;
    }
  }
  return kExitOk;
}

BigInt parse_bigint(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw CLI::ValidationError("n", "expected a positive decimal integer");
  return BigInt(s);
}

std::string claims_footer() {
  std::ostringstream os;
  os << "Claims:\n";
  for (const auto& c : collatz::claims::list_claims())
    os << "  " << c.id << "  " << c.statement << "\n";
  return os.str();
}

struct CommonOpts {
  std::string format = "text";
  std::string out;
  bool timing = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"text", "json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--out", o.out, "Write output to a file instead of stdout");
  cmd->add_flag("--timing", o.timing, "Include wall-clock timing in output");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"collatz: exact Collatz trajectory analysis, claim "
               "verification, and parallel range sweeps"};
  app.require_subcommand(1);
  app.footer(claims_footer());

  // trajectory
  auto* traj = app.add_subcommand("trajectory",
                                  "Compute one trajectory: k, X, Y, peak");
  std::string n_str;
  bool want_tuple = false, want_exact = false;
  std::uint64_t traj_budget = collatz::kDefaultBudget;
  CommonOpts traj_opts;
  traj->add_option("n", n_str, "Starting value (positive integer)")->required();
  traj->add_flag("--tuple", want_tuple, "Include the k-tuple");
  traj->add_flag("--exact", want_exact,
                 "Include the exact quantities Z, eps, eps_n, n', {n'}, f");
  traj->add_option("--budget", traj_budget, "Per-trajectory step budget");
  add_common(traj, traj_opts);

  // claims
  auto* claims_cmd = app.add_subcommand("claims",
                                        "Verify or falsify claims on a range");
  std::uint64_t cl_from = 1, cl_to = 1, cl_budget = collatz::kDefaultBudget;
  std::vector<std::string> cl_ids;
  CommonOpts cl_opts;
  claims_cmd->add_option("--from", cl_from, "Range start (inclusive)")->required();
  claims_cmd->add_option("--to", cl_to, "Range end (inclusive)")->required();
  claims_cmd->add_option("--claim", cl_ids,
                         "Claim id to check (repeatable; default: all)");
  claims_cmd->add_option("--budget", cl_budget, "Per-trajectory step budget");
  add_common(claims_cmd, cl_opts);

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep",
                                       "Parallel range sweep with statistics");
  collatz::sweep::SweepConfig cfg;
  std::string checkpoint_path;
  bool do_resume = false;
  bool sweep_range_given = false;
  CommonOpts sw_opts;
  sweep_cmd->add_option("--from", cfg.lo, "Range start (inclusive)");
  sweep_cmd->add_option("--to", cfg.hi, "Range end (inclusive)");
  sweep_cmd->add_option("--chunk", cfg.chunk_size, "Numbers per work unit")
      ->capture_default_str();
  sweep_cmd->add_option("--workers", cfg.workers,
                        "Worker threads (0 = machine parallelism)");
  sweep_cmd->add_option("--budget", cfg.budget, "Per-trajectory step budget");
  sweep_cmd->add_option("--claim", cfg.claims,
                        "Per-number claim to check inline (repeatable; "
                        "default: C1 C2 C4 C5)");
  sweep_cmd->add_option("--checkpoint", checkpoint_path, "Checkpoint file path");
  sweep_cmd->add_flag("--resume", do_resume,
                      "Resume from the checkpoint instead of starting over");
  add_common(sweep_cmd, sw_opts);

  // report
  auto* report_cmd = app.add_subcommand("report",
                                        "Re-render a saved json result");
  std::string in_path;
  CommonOpts rp_opts;
  report_cmd->add_option("--in", in_path, "Input json file")->required();
  add_common(report_cmd, rp_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << "\n";
    return kExitUsage;
  }

  try {
    if (*traj) {
      BigInt n;
      try {
        n = parse_bigint(n_str);
        if (n < 1) throw CLI::ValidationError("n", "must be >= 1");
      } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
      }
      collatz::TrajectoryRecord rec =
          collatz::compute_trajectory(n, traj_budget, want_tuple);
      ordered_json doc;
      doc["type"] = "trajectory";
      doc["n"] = rec.n.str();
      doc["k"] = rec.k;
      doc["x"] = rec.x_count;
      doc["y"] = rec.y_count;
      doc["peak"] = rec.peak.str();
      if (want_tuple) {
        ordered_json tuple = ordered_json::array();
        for (const BigInt& v : *rec.tuple) tuple.push_back(v.str());
        doc["tuple"] = std::move(tuple);
      }
      if (want_exact) {
        auto w = collatz::exact::make_witness(rec.n, rec.x_count, rec.y_count);
        doc["exact"] = {
            {"z", collatz::to_string(w.z)},
            {"epsilon", collatz::to_string(w.epsilon)},
            {"epsilon_n", collatz::to_string(w.epsilon_n)},
            {"n_prime", collatz::to_string(w.n_prime)},
            {"frac_n_prime", collatz::to_string(w.frac_n_prime)},
            {"f", collatz::exact::f_xy(rec.n, rec.x_count, rec.y_count).str()}};
      }
      return emit(doc, traj_opts.format, traj_opts.out);
    }

    if (*claims_cmd) {
      std::vector<std::string> ids = cl_ids;
      if (ids.empty())
        for (const auto& c : collatz::claims::list_claims()) ids.push_back(c.id);
      try {
        for (const auto& id : ids) collatz::claims::find_claim(id);
        if (cl_from < 1 || cl_from > cl_to)
          throw CLI::ValidationError("--from/--to", "need 1 <= from <= to");
      } catch (const collatz::claims::UnknownClaim& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
      } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
      }
      ordered_json doc;
      doc["type"] = "claims";
      doc["range"] = {{"lo", cl_from}, {"hi", cl_to}};
      doc["budget"] = cl_budget;
      doc["results"] = ordered_json::array();
      bool any_falsified = false;
      for (const auto& id : ids) {
        auto result = collatz::claims::check_claim(id, cl_from, cl_to, cl_budget);
        any_falsified |= result.verdict == collatz::claims::Verdict::Falsified;
        doc["results"].push_back(result.to_json());
      }
      int rc = emit(doc, cl_opts.format, cl_opts.out);
      if (rc != kExitOk) return rc;
      return any_falsified ? kExitFalsified : kExitOk;
    }

    if (*sweep_cmd) {
      if (!checkpoint_path.empty()) cfg.checkpoint_path = checkpoint_path;
      sweep_range_given = sweep_cmd->count("--from") || sweep_cmd->count("--to");
      collatz::sweep::SweepSummary summary;
      if (do_resume) {
        if (checkpoint_path.empty()) {
          std::cerr << "error: --resume requires --checkpoint\n";
          return kExitUsage;
        }
        summary = sweep_range_given
                      ? collatz::sweep::resume(cfg, checkpoint_path)
                      : collatz::sweep::resume(checkpoint_path);
      } else {
        if (!sweep_range_given) {
          std::cerr << "error: sweep requires --from and --to\n";
          return kExitUsage;
        }
        summary = collatz::sweep::sweep_range(cfg);
      }
      ordered_json doc = summary.to_json(sw_opts.timing);
      ordered_json wrapped;
      wrapped["type"] = "sweep";
      for (auto& [k, v] : doc.items()) wrapped[k] = v;
      int rc = emit(wrapped, sw_opts.format, sw_opts.out);
      if (rc != kExitOk) return rc;
      for (const auto& [id, t] : summary.totals.claim_tallies)
        if (t.falsified > 0) return kExitFalsified;
      return kExitOk;
    }

    if (*report_cmd) {
      std::ifstream in(in_path);
      if (!in) {
        std::cerr << "error: cannot open " << in_path << "\n";
        return kExitRuntime;
      }
      ordered_json doc;
      try {
        in >> doc;
      } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << in_path << " is not valid json: " << e.what()
                  << "\n";
        return kExitRuntime;
      }
      return emit(doc, rp_opts.format, rp_opts.out);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const collatz::claims::UnknownClaim& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const collatz::BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
