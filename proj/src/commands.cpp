#include "f2ddpg/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <sstream>

#include <nlohmann/json.hpp>

#include "f2ddpg/checkpoint.hpp"
#include "f2ddpg/errors.hpp"
#include "f2ddpg/metrics.hpp"

namespace f2ddpg::harness {

namespace fs = std::filesystem;

namespace {

// Mirrors every line to the caller's stream and to run.log.
class RunLog {
 public:
  RunLog(std::ostream& sink, const fs::path& file) : sink_(sink) {
    if (!file.empty()) file_.open(file, std::ios::app);
  }

  void Info(const std::string& msg) { Emit("info", msg); }
  void Error(const std::string& msg) {
    errors_ = true;
    Emit("error", msg);
  }
  bool had_error() const { return errors_; }
  int ExitStatus() const { return errors_ ? 1 : 0; }

 private:
  void Emit(const char* level, const std::string& msg) {
    sink_ << '[' << level << "] " << msg << '\n';
    if (file_.is_open()) file_ << '[' << level << "] " << msg << '\n' << std::flush;
  }

  std::ostream& sink_;
  std::ofstream file_;
  bool errors_ = false;
};

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read '" + path.string() + "'");
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

std::ofstream OpenOut(const fs::path& path, bool append = false) {
  std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
  if (!out) throw FormatError("cannot write '" + path.string() + "'");
  out << std::setprecision(17);
  return out;
}

nlohmann::json UpdateJson(const marl::UpdateRecord& r) {
  nlohmann::json j;
  j["update"] = r.update;
  j["step"] = r.step;
  j["episode"] = r.episode;
  j["agent"] = r.agent;
  j["variant"] = marl::VariantName(r.variant);
  j["critic_loss"] = r.critic_loss;
  j["policy_gradient_norm"] = r.policy_gradient_norm;
  j["ally_cosine"] = r.ally_cosine ? nlohmann::json(*r.ally_cosine) : nlohmann::json();
  j["ally_cosine_samples"] = r.ally_cosine_samples;
  return j;
}

std::vector<int> TeamAgents(const env::Scenario& scenario, int team) {
  std::vector<int> agents;
  const auto teams = scenario.team_of();
  for (size_t a = 0; a < teams.size(); ++a) {
    if (teams[a] == team) agents.push_back(static_cast<int>(a));
  }
  return agents;
}

std::string DimsString(const nn::MlpParams& p) {
  std::string out;
  for (int d : p.dims()) {
    if (!out.empty()) out += '-';
    out += std::to_string(d);
  }
  return out;
}

int TrainImpl(const TrainOptions& options, RunLog& log) {
  const fs::path out_dir(options.out_dir);

  RunConfig config;
  std::optional<Checkpoint> resume;
  if (!options.resume_path.empty()) {
    resume = LoadCheckpoint(options.resume_path);
    config = ParseConfig(resume->config_text);
  } else if (!options.config_path.empty()) {
    config = ParseConfig(ReadFile(options.config_path));
  }
  if (options.seed && !resume) config.train.seed = *options.seed;
  if (options.episodes) config.train.episodes = *options.episodes;
  ValidateConfig(config);
  const std::string config_text = SerializeConfig(config);

  {
    auto echo = OpenOut(out_dir / "config.txt");
    echo << config_text;
  }
  log.Info("scenario " + env::ScenarioName(config.scenario.kind) + ", variant " +
           marl::VariantName(config.variant) + ", opponents " +
           marl::VariantName(config.opponent_variant) + ", seed " +
           std::to_string(config.train.seed));

  marl::Trainer trainer = MakeTrainer(config);
  if (resume) {
    trainer.Restore(resume->state);
    log.Info("resumed at episode " + std::to_string(trainer.episode()) +
             " with an empty replay buffer");
  }
  const int n = trainer.scenario().num_agents();

  const bool appending = resume.has_value() && fs::exists(out_dir / "rewards.csv");
  auto rewards = OpenOut(out_dir / "rewards.csv", appending);
  if (!appending) {
    rewards << "episode";
    for (int a = 0; a < n; ++a) rewards << ",return_" << a;
    rewards << '\n';
  }
  std::ofstream diagnostics;
  if (config.write_diagnostics) {
    diagnostics = OpenOut(out_dir / "diagnostics.jsonl", resume.has_value());
  }
  const bool eval_appending = resume.has_value() && fs::exists(out_dir / "train_eval.csv");
  auto train_eval = OpenOut(out_dir / "train_eval.csv", eval_appending);
  if (!eval_appending) {
    train_eval << "episode";
    for (int a = 0; a < n; ++a) train_eval << ",mean_return_" << a;
    train_eval << ",green_percent_ge_1,green_percent_ge_3\n";
  }

  // One similarity sample per environment step: the mean over that step's
  // agent updates.
  std::vector<metrics::SimilaritySample> similarity;
  std::int64_t current_step = -1;
  double step_sum = 0.0;
  int step_count = 0;
  auto flush_step = [&] {
    if (current_step >= 0) {
      metrics::SimilaritySample s{current_step, std::nullopt};
      if (step_count > 0) s.cosine = step_sum / step_count;
      similarity.push_back(s);
    }
    step_sum = 0.0;
    step_count = 0;
  };
  trainer.set_update_sink([&](const marl::UpdateRecord& r) {
    if (diagnostics.is_open()) diagnostics << UpdateJson(r).dump() << '\n';
    if (r.step != current_step) {
      flush_step();
      current_step = r.step;
    }
    if (r.ally_cosine) {
      step_sum += *r.ally_cosine;
      ++step_count;
    }
  });

  auto save = [&] {
    SaveCheckpoint((out_dir / "checkpoint.bin").string(),
                   Checkpoint{config_text, trainer.state()});
  };
  auto evaluate = [&](std::int64_t episode) {
    const auto report = metrics::Evaluate(trainer.learners(), trainer.scenario(),
                                          config.eval_episodes, config.eval_seed);
    train_eval << episode;
    for (double m : report.mean_return) train_eval << ',' << m;
    for (const auto& f : metrics::CaptureStats(report.green_captures)) {
      train_eval << ',' << f.percent;
    }
    train_eval << '\n';
    log.Info("episode " + std::to_string(episode) + ": team mean eval return " +
             std::to_string(report.MeanTeamReturn(TeamAgents(trainer.scenario(), 0))));
  };

  const std::int64_t first_step = trainer.global_step();
  trainer.Run([&](const marl::EpisodeSummary& s) {
    rewards << s.episode;
    for (double r : s.returns) rewards << ',' << r;
    rewards << '\n';
    const std::int64_t done = s.episode + 1;
    if (config.eval_every > 0 && done % config.eval_every == 0) evaluate(done);
    if (config.checkpoint_every > 0 && done % config.checkpoint_every == 0) save();
  });
  flush_step();
  save();

  auto sim_out = OpenOut(out_dir / "similarity.csv");
  for (auto& s : similarity) s.step -= first_step;
  const auto windows = metrics::BiasAlignmentSeries(
      similarity, trainer.global_step() - first_step);
  metrics::WriteSimilarityCsv(sim_out, windows);
  if (!rewards || !train_eval || (diagnostics.is_open() && !diagnostics) || !sim_out) {
    log.Error("failed writing run outputs to " + out_dir.string());
  }
  log.Info("finished at episode " + std::to_string(trainer.episode()));
  return log.ExitStatus();
}

// For every agent i, the displacement its variant applies to each other
// agent's action block at the current step.
std::vector<std::vector<std::vector<double>>> StepBiases(
    const marl::Trainer& trainer, const metrics::EvalStep& step, Rng& rng) {
  const auto& layout = trainer.layout();
  const int n = layout.num_agents();
  std::vector<Eigen::MatrixXd> obs, act;
  for (int a = 0; a < n; ++a) {
    const auto& o = (*step.observations)[a];
    const auto& x = (*step.actions)[a];
    obs.push_back(Eigen::Map<const Eigen::VectorXd>(o.data(), static_cast<Eigen::Index>(o.size())));
    act.push_back(Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())));
  }
  const Eigen::MatrixXd joint_obs = marl::StackBlocks(obs, layout.observation_dims());
  const Eigen::MatrixXd joint_act = marl::StackBlocks(act, layout.action_dims());
  std::vector<std::vector<std::vector<double>>> biases(n);
  for (int i = 0; i < n; ++i) {
    const marl::BiasRequest request{&trainer.learners()[i].critic, &layout,
                                    &trainer.team(), trainer.variants()[i],
                                    trainer.steps()};
    const Eigen::MatrixXd biased =
        marl::BiasJointActions(request, joint_obs, joint_act, i, rng);
    biases[i].resize(n);
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      const Eigen::MatrixXd block = (biased - joint_act).middleRows(
          layout.action_offset(k), layout.action_dim(k));
      biases[i][k].assign(block.data(), block.data() + block.size());
    }
  }
  return biases;
}

int EvalImpl(const EvalOptions& options, RunLog& log) {
  const fs::path out_dir(options.out_dir);
  const Checkpoint ck = LoadCheckpoint(options.checkpoint_path);
  const RunConfig config = ParseConfig(ck.config_text);
  marl::Trainer trainer = MakeTrainer(config);
  trainer.Restore(ck.state);

  std::ofstream trace;
  Rng bias_rng = MakeRng(options.seed, 0xb1a5);
  metrics::EvalObserver observer;
  if (options.trace) {
    trace = OpenOut(out_dir / "trace.jsonl");
    observer = [&](const metrics::EvalStep& step) {
      const auto biases = StepBiases(trainer, step, bias_rng);
      nlohmann::json rec = env::TraceRecord(step.result->world, *step.env_actions,
                                            step.result->rewards, &biases);
      rec["episode"] = step.episode;
      trace << rec.dump() << '\n';
    };
  }
  const auto report = metrics::Evaluate(trainer.learners(), trainer.scenario(),
                                        options.episodes, options.seed, observer);
  auto eval_csv = OpenOut(out_dir / "eval.csv");
  metrics::WriteEvalCsv(eval_csv, report);
  auto summary_csv = OpenOut(out_dir / "eval_summary.csv");
  metrics::WriteEvalSummaryCsv(summary_csv, report);
  if (!eval_csv || !summary_csv || (trace.is_open() && !trace)) {
    log.Error("failed writing evaluation outputs to " + out_dir.string());
  }
  log.Info("evaluated " + std::to_string(options.episodes) + " episodes from episode " +
           std::to_string(ck.state.episode) + " checkpoint; team mean return " +
           std::to_string(report.MeanTeamReturn(TeamAgents(trainer.scenario(), 0))));
  return log.ExitStatus();
}

template <typename Fn>
int Guarded(RunLog& log, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    log.Error(e.what());
    return 1;
  }
}

}  // namespace

marl::Trainer MakeTrainer(const RunConfig& config) {
  env::Scenario scenario(config.scenario);
  marl::TeamSpec team = marl::TeamSpec::FromTeams(scenario.team_of());
  auto variants = AgentVariants(config, scenario);
  return marl::Trainer(std::move(scenario), std::move(team), std::move(variants),
                       config.bias, config.train);
}

int CmdTrain(const TrainOptions& options, std::ostream& log_sink) {
  std::error_code ec;
  if (options.out_dir.empty()) {
    RunLog log(log_sink, {});
    log.Error("an output directory is required");
    return 1;
  }
  fs::create_directories(options.out_dir, ec);
  if (ec) {
    RunLog log(log_sink, {});
    log.Error("cannot create '" + options.out_dir + "': " + ec.message());
    return 1;
  }
  RunLog log(log_sink, fs::path(options.out_dir) / "run.log");
  return Guarded(log, [&] { return TrainImpl(options, log); });
}

int CmdEval(const EvalOptions& options, std::ostream& log_sink) {
  std::error_code ec;
  if (options.out_dir.empty()) {
    RunLog log(log_sink, {});
    log.Error("an output directory is required");
    return 1;
  }
  fs::create_directories(options.out_dir, ec);
  if (ec) {
    RunLog log(log_sink, {});
    log.Error("cannot create '" + options.out_dir + "': " + ec.message());
    return 1;
  }
  RunLog log(log_sink, {});
  return Guarded(log, [&] { return EvalImpl(options, log); });
}

int CmdInspect(const std::string& checkpoint_path, std::ostream& out,
               std::ostream& err) {
  RunLog log(err, {});
  return Guarded(log, [&] {
    const Checkpoint ck = LoadCheckpoint(checkpoint_path);
    const auto& s = ck.state;
    std::ostringstream text;
    text << "checkpoint: " << checkpoint_path << '\n'
         << "format_version: " << kCheckpointVersion << '\n'
         << "episode: " << s.episode << '\n'
         << "global_step: " << s.global_step << '\n'
         << "updates: " << s.updates << '\n'
         << "agents: " << s.learners.size() << '\n';
    std::int64_t total = 0;
    for (size_t a = 0; a < s.learners.size(); ++a) {
      const auto& l = s.learners[a];
      text << "agent " << a << ": actor " << DimsString(l.actor) << " ("
           << l.actor.parameter_count() << " params, " << l.actor_optimizer.step
           << " Adam steps), critic " << DimsString(l.critic) << " ("
           << l.critic.parameter_count() << " params, " << l.critic_optimizer.step
           << " Adam steps), noise " << l.noise_scale << '\n';
      total += 2 * (l.actor.parameter_count() + l.critic.parameter_count());
    }
    text << "total_parameters_with_targets: " << total << '\n'
         << "config:\n" << ck.config_text;
    out << text.str();
    return 0;
  });
}

}  // namespace f2ddpg::harness
