#pragma once

// Experiment configuration: a flat UTF-8 `key = value` document.
//
//   # comment lines start with '#'
//   scenario = predator_prey
//   predators = 5
//   actor_hidden = 64,64
//
// Every key is optional; omitted keys take the defaults below, which mirror
// the published hyper-parameters. Unknown or repeated keys are rejected.
// SerializeConfig writes every key in a fixed order, and parsing that text
// yields an equal RunConfig.

#include <cstdint>
#include <string>
#include <vector>

#include "f2ddpg/marl.hpp"
#include "f2ddpg/particle_env.hpp"

namespace f2ddpg::harness {

struct RunConfig {
  env::ScenarioConfig scenario;
  marl::BiasVariant variant = marl::BiasVariant::kF2ddpg;            // team 0
  marl::BiasVariant opponent_variant = marl::BiasVariant::kMaddpg;   // team 1
  marl::BiasConfig bias;
  marl::TrainConfig train;
  std::int64_t eval_every = 1000;
  int eval_episodes = 100;
  std::uint64_t eval_seed = 12345;
  std::int64_t checkpoint_every = 1000;
  bool write_diagnostics = true;

  bool operator==(const RunConfig& other) const;
};

// Throws ConfigError whose message names the offending key.
RunConfig ParseConfig(const std::string& text);
std::string SerializeConfig(const RunConfig& config);

// Checks cross-field constraints (scenario physics, train ranges, step
// sizes). Called by ParseConfig.
void ValidateConfig(const RunConfig& config);

// Per-agent variant list: team 0 agents use `variant`, team 1 agents use
// `opponent_variant`.
std::vector<marl::BiasVariant> AgentVariants(const RunConfig& config,
                                             const env::Scenario& scenario);

}  // namespace f2ddpg::harness
