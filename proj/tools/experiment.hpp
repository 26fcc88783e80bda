#pragma once

#include <string>

#include "mbg/serialize.hpp"

namespace mbg::cli {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitSolverError = 3;

/// Runs the configured experiment and writes trace.csv, snapshots.jsonl,
/// constraints.csv and summary.json into cfg.out_dir. Returns an exit code;
/// error text (naming the offending field where applicable) goes to stderr
/// unless quiet.
int run_experiment(const ExperimentConfig& cfg, bool quiet);

/// Derives fig1.csv / fig2.csv / fig3_<delta>.csv from a completed run
/// directory. Idempotent. Returns an exit code.
int emit_report(const std::string& run_dir, bool quiet);

}  // namespace mbg::cli
