#pragma once

// Front-door commands: train, eval, inspect. Each returns a process exit
// status (0 iff no error record was emitted) and never throws.
//
// Files written by `train` into the output directory:
//   config.txt         effective configuration, written before anything else
//   rewards.csv        episode,return_0..return_{N-1}
//   diagnostics.jsonl  one JSON object per agent update
//   train_eval.csv     episode,mean_return_0..,green_percent_ge_1,green_percent_ge_3
//   similarity.csv     windowed mean ally cosine similarity
//   checkpoint.bin     latest checkpoint (periodic and final)
//   run.log            log lines
// `eval` writes eval.csv, eval_summary.csv and optionally trace.jsonl.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "f2ddpg/config.hpp"
#include "f2ddpg/marl.hpp"

namespace f2ddpg::harness {

struct TrainOptions {
  std::string config_path;            // empty: all defaults
  std::optional<std::uint64_t> seed;  // overrides the config's seed
  std::string out_dir;
  std::string resume_path;            // continue from this checkpoint
  std::optional<std::int64_t> episodes;  // overrides the episode budget
};

struct EvalOptions {
  std::string checkpoint_path;
  int episodes = 100;
  std::uint64_t seed = 12345;
  std::string out_dir;
  bool trace = false;
};

int CmdTrain(const TrainOptions& options, std::ostream& log);
int CmdEval(const EvalOptions& options, std::ostream& log);
int CmdInspect(const std::string& checkpoint_path, std::ostream& out,
               std::ostream& err);

// Scenario, team partition and per-agent variants for a run configuration.
marl::Trainer MakeTrainer(const RunConfig& config);

}  // namespace f2ddpg::harness
