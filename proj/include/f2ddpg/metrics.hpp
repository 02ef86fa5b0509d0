#pragma once

// Evaluation rollouts and training diagnostics.

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "f2ddpg/marl.hpp"
#include "f2ddpg/particle_env.hpp"

namespace f2ddpg::metrics {

// <u, v> / (|u| |v|); std::nullopt when either norm is zero. Throws
// ContractError on a length mismatch.
std::optional<double> CosineSimilarity(std::span<const double> u,
                                       std::span<const double> v);

struct CaptureFraction {
  int threshold = 0;
  std::int64_t episodes = 0;  // episodes with count >= threshold
  double percent = 0.0;
};

// Share of episodes whose capture count reaches each threshold. Throws
// ContractError on empty input.
std::vector<CaptureFraction> CaptureStats(std::span<const int> counts,
                                          std::span<const int> thresholds);
std::vector<CaptureFraction> CaptureStats(std::span<const int> counts);  // {1, 3}

struct EvalReport {
  std::uint64_t seed = 0;
  int episodes = 0;
  // returns[agent][episode]
  std::vector<std::vector<double>> returns;
  std::vector<double> mean_return;
  std::vector<double> std_return;
  std::vector<int> green_captures;  // per episode
  std::vector<int> blue_captures;   // per episode

  // Mean over all agents of mean_return.
  double MeanTeamReturn(std::span<const int> agents) const;
};

struct EvalStep {
  int episode = 0;
  const std::vector<std::vector<double>>* observations = nullptr;  // before the step
  const std::vector<std::vector<double>>* actions = nullptr;       // flat, squashed
  const std::vector<env::EnvAction>* env_actions = nullptr;
  const env::StepResult* result = nullptr;
};

using EvalObserver = std::function<void(const EvalStep&)>;

// Noise-free rollouts. Episode e resets from MakeRng(seed, e), so the report
// is a pure function of (actors, scenario, episodes, seed). Throws
// ContractError for episodes < 1.
EvalReport Evaluate(std::span<const marl::AgentLearner> learners,
                    const env::Scenario& scenario, int episodes,
                    std::uint64_t seed, const EvalObserver& observer = {});

struct SimilaritySample {
  std::int64_t step = 0;
  std::optional<double> cosine;

  static SimilaritySample FromBlocks(std::span<const double> action,
                                     std::span<const double> gradient,
                                     std::int64_t step);
};

struct SimilarityWindow {
  std::int64_t begin = 0;  // inclusive
  std::int64_t end = 0;    // exclusive
  std::int64_t samples = 0;
  std::optional<double> mean;  // empty when no defined sample fell inside
};

// Partitions [0, total_steps) into windows of max(1, total_steps / 100)
// steps (the last one takes the remainder) and averages the defined
// cosines in each.
std::vector<SimilarityWindow> BiasAlignmentSeries(
    std::span<const SimilaritySample> samples, std::int64_t total_steps);

// Mean defined cosine over samples with step in [begin, end).
std::optional<double> MeanCosine(std::span<const SimilaritySample> samples,
                                 std::int64_t begin, std::int64_t end);

// CSV schemas:
//   eval.csv:          episode,return_0..return_{N-1},green_captures,blue_captures
//   eval_summary.csv:  metric,value
//   similarity.csv:    window,begin,end,samples,mean_cosine
void WriteEvalCsv(std::ostream& out, const EvalReport& report);
void WriteEvalSummaryCsv(std::ostream& out, const EvalReport& report);
void WriteSimilarityCsv(std::ostream& out,
                        std::span<const SimilarityWindow> windows);

}  // namespace f2ddpg::metrics
