#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "greenfn/convergence.hpp"

namespace greenfn {

/// A named, fully deterministic experiment.  Every knob that affects output
/// bytes is in this struct; defaults reproduce the shipped study.
struct ReproductionSpec {
  std::string name;             // one of reproduction_names()
  std::vector<long> n_values;   // empty = family default
  std::uint64_t seed = 1;
  long walks = 0;               // Monte Carlo budget override (0 = family default)
  int threads = 0;              // 0 = hardware concurrency
  std::string out_dir;          // empty = no files written
};

struct ReproductionResult {
  std::string name;
  bool pass = false;            // the family's acceptance predicate
  ConvergenceReport report;     // per-n rows (sequence families; empty otherwise)
  std::string summary;          // human-readable account, one finding per line
  std::vector<std::pair<std::string, double>> metrics;  // named headline numbers
  std::vector<std::string> written;                     // file paths emitted
};

const std::vector<std::string>& reproduction_names();

/// Runs one named experiment.  Deterministic byte-for-byte given the request.
/// Throws std::invalid_argument for unknown names and std::runtime_error when
/// a search cannot reach its target (with diagnostics).
ReproductionResult run_reproduction(const ReproductionSpec& spec);

}  // namespace greenfn
