#include "f2ddpg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>

#include "f2ddpg/errors.hpp"

namespace f2ddpg::metrics {

std::optional<double> CosineSimilarity(std::span<const double> u,
                                       std::span<const double> v) {
  if (u.size() != v.size()) {
    throw ContractError("cosine similarity of vectors with different lengths");
  }
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (size_t k = 0; k < u.size(); ++k) {
    dot += u[k] * v[k];
    uu += u[k] * u[k];
    vv += v[k] * v[k];
  }
  if (uu == 0.0 || vv == 0.0) return std::nullopt;
  return std::clamp(dot / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

std::vector<CaptureFraction> CaptureStats(std::span<const int> counts,
                                          std::span<const int> thresholds) {
  if (counts.empty()) throw ContractError("capture stats need at least one episode");
  std::vector<CaptureFraction> out;
  for (int threshold : thresholds) {
    CaptureFraction f;
    f.threshold = threshold;
    f.episodes = std::count_if(counts.begin(), counts.end(),
                               [&](int c) { return c >= threshold; });
    f.percent = 100.0 * static_cast<double>(f.episodes) /
                static_cast<double>(counts.size());
    out.push_back(f);
  }
  return out;
}

std::vector<CaptureFraction> CaptureStats(std::span<const int> counts) {
  static constexpr int kThresholds[] = {1, 3};
  return CaptureStats(counts, kThresholds);
}

double EvalReport::MeanTeamReturn(std::span<const int> agents) const {
  if (agents.empty()) return 0.0;
  double sum = 0.0;
  for (int a : agents) sum += mean_return.at(a);
  return sum / static_cast<double>(agents.size());
}

EvalReport Evaluate(std::span<const marl::AgentLearner> learners,
                    const env::Scenario& scenario, int episodes,
                    std::uint64_t seed, const EvalObserver& observer) {
  if (episodes < 1) throw ContractError("evaluation needs at least one episode");
  const int n = scenario.num_agents();
  if (static_cast<int>(learners.size()) != n) {
    throw ContractError("one learner per agent required for evaluation");
  }
  EvalReport report;
  report.seed = seed;
  report.episodes = episodes;
  report.returns.assign(n, std::vector<double>(episodes, 0.0));

  Rng unused_noise;  // greedy actions never draw
  for (int e = 0; e < episodes; ++e) {
    Rng env_rng = MakeRng(seed, static_cast<std::uint64_t>(e));
    env::WorldState world = scenario.Reset(env_rng);
    std::vector<std::vector<double>> obs = scenario.ObserveAll(world);
    env::CaptureCount captures;
    for (bool terminal = false; !terminal;) {
      std::vector<std::vector<double>> actions;
      std::vector<env::EnvAction> env_actions;
      for (int a = 0; a < n; ++a) {
        actions.push_back(marl::SelectAction(learners[a], obs[a], unused_noise, false));
        env_actions.push_back(scenario.ToEnvAction(a, actions.back()));
      }
      env::StepResult step = scenario.Step(world, env_actions);
      if (observer) observer({e, &obs, &actions, &env_actions, &step});
      for (int a = 0; a < n; ++a) report.returns[a][e] += step.rewards[a];
      const env::CaptureCount c = env::CountCaptures(step.world, step.collisions);
      captures.green += c.green;
      captures.blue += c.blue;
      world = std::move(step.world);
      obs = std::move(step.observations);
      terminal = step.terminal;
    }
    report.green_captures.push_back(captures.green);
    report.blue_captures.push_back(captures.blue);
  }
  for (int a = 0; a < n; ++a) {
    const auto& r = report.returns[a];
    const double mean = std::accumulate(r.begin(), r.end(), 0.0) / episodes;
    double var = 0.0;
    for (double x : r) var += (x - mean) * (x - mean);
    report.mean_return.push_back(mean);
    report.std_return.push_back(std::sqrt(var / episodes));
  }
  return report;
}

SimilaritySample SimilaritySample::FromBlocks(std::span<const double> action,
                                              std::span<const double> gradient,
                                              std::int64_t step) {
  return {step, CosineSimilarity(action, gradient)};
}

std::optional<double> MeanCosine(std::span<const SimilaritySample> samples,
                                 std::int64_t begin, std::int64_t end) {
  double sum = 0.0;
  std::int64_t count = 0;
  for (const auto& s : samples) {
    if (s.step >= begin && s.step < end && s.cosine) {
      sum += *s.cosine;
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

std::vector<SimilarityWindow> BiasAlignmentSeries(
    std::span<const SimilaritySample> samples, std::int64_t total_steps) {
  std::vector<SimilarityWindow> windows;
  if (total_steps <= 0) return windows;
  const std::int64_t width = std::max<std::int64_t>(1, total_steps / 100);
  const std::int64_t count = std::min<std::int64_t>(100, total_steps);
  for (std::int64_t w = 0; w < count; ++w) {
    SimilarityWindow window;
    window.begin = w * width;
    window.end = w + 1 == count ? total_steps : (w + 1) * width;
    windows.push_back(window);
  }
  std::vector<double> sums(windows.size(), 0.0);
  for (const auto& s : samples) {
    if (s.step < 0 || s.step >= total_steps) continue;
    const auto idx = static_cast<size_t>(
        std::min<std::int64_t>(s.step / width, static_cast<std::int64_t>(windows.size()) - 1));
    if (!s.cosine) continue;
    sums[idx] += *s.cosine;
    ++windows[idx].samples;
  }
  for (size_t w = 0; w < windows.size(); ++w) {
    if (windows[w].samples > 0) {
      windows[w].mean = sums[w] / static_cast<double>(windows[w].samples);
    }
  }
  return windows;
}

void WriteEvalCsv(std::ostream& out, const EvalReport& report) {
  out << std::setprecision(17);
  out << "episode";
  for (size_t a = 0; a < report.returns.size(); ++a) out << ",return_" << a;
  out << ",green_captures,blue_captures\n";
  for (int e = 0; e < report.episodes; ++e) {
    out << e;
    for (const auto& r : report.returns) out << ',' << r[e];
    out << ',' << report.green_captures[e] << ',' << report.blue_captures[e] << '\n';
  }
}

void WriteEvalSummaryCsv(std::ostream& out, const EvalReport& report) {
  out << std::setprecision(17);
  out << "metric,value\n";
  out << "episodes," << report.episodes << '\n';
  out << "seed," << report.seed << '\n';
  for (size_t a = 0; a < report.mean_return.size(); ++a) {
    out << "mean_return_" << a << ',' << report.mean_return[a] << '\n';
    out << "std_return_" << a << ',' << report.std_return[a] << '\n';
  }
  auto emit = [&](const char* name, const std::vector<int>& counts) {
    out << name << "_total," << std::accumulate(counts.begin(), counts.end(), 0) << '\n';
    for (const auto& f : CaptureStats(counts)) {
      out << name << "_episodes_ge_" << f.threshold << ',' << f.episodes << '\n';
      out << name << "_percent_ge_" << f.threshold << ',' << f.percent << '\n';
    }
  };
  emit("green_captures", report.green_captures);
  emit("blue_captures", report.blue_captures);
}

void WriteSimilarityCsv(std::ostream& out,
                        std::span<const SimilarityWindow> windows) {
  out << std::setprecision(17);
  out << "window,begin,end,samples,mean_cosine\n";
  for (size_t w = 0; w < windows.size(); ++w) {
    out << w << ',' << windows[w].begin << ',' << windows[w].end << ','
        << windows[w].samples << ',';
    if (windows[w].mean) out << *windows[w].mean;
    out << '\n';
  }
}

}  // namespace f2ddpg::metrics
