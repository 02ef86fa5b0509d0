// Command-line front end: train, eval, inspect.

#include <iostream>

#include <CLI11.hpp>

#include "f2ddpg/commands.hpp"

int main(int argc, char** argv) {
  using namespace f2ddpg::harness;

  CLI::App app{"Multi-agent DDPG with critic-guided action biasing"};
  app.require_subcommand(1);

  TrainOptions train;
  std::uint64_t seed = 0;
  std::int64_t episodes = 0;
  auto* train_cmd = app.add_subcommand("train", "Train all agents and write run outputs");
  train_cmd->add_option("--config", train.config_path, "key = value config file");
  auto* seed_opt = train_cmd->add_option("--seed", seed, "Override the config seed");
  train_cmd->add_option("--out", train.out_dir, "Output directory")->required();
  train_cmd->add_option("--resume", train.resume_path, "Continue from a checkpoint")
      ->check(CLI::ExistingFile)
      ->excludes("--config");
  auto* episodes_opt =
      train_cmd->add_option("--episodes", episodes, "Override the total episode count")
          ->check(CLI::PositiveNumber);

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint without noise");
  eval_cmd->add_option("--checkpoint", eval.checkpoint_path)->required();
  eval_cmd->add_option("--episodes", eval.episodes)->check(CLI::PositiveNumber);
  eval_cmd->add_option("--seed", eval.seed);
  eval_cmd->add_option("--out", eval.out_dir)->required();
  eval_cmd->add_flag("--trace", eval.trace, "Also write trace.jsonl");

  std::string inspect_path;
  auto* inspect_cmd = app.add_subcommand("inspect", "Print a checkpoint summary");
  inspect_cmd->add_option("--checkpoint", inspect_path)->required();

  CLI11_PARSE(app, argc, argv);

  if (*train_cmd) {
    if (*seed_opt) train.seed = seed;
    if (*episodes_opt) train.episodes = episodes;
    return CmdTrain(train, std::cerr);
  }
  if (*eval_cmd) return CmdEval(eval, std::cerr);
  return CmdInspect(inspect_path, std::cout, std::cerr);
}
