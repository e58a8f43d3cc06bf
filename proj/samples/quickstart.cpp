// Runs TD(1) and GTD(0) on one Collision run and prints their error every 2000 steps.

#include <cstdio>

#include "offpolicy/offpolicy.hpp"

int main() {
  using namespace offpolicy;

  ExperimentSetup setup;
  setup.steps = 20000;
  const RunData run = prepare_run(setup, 0);

  LearnerConfig td;
  td.algorithm = Algorithm::kOffPolicyTd;
  td.alpha = 1.0 / 256;
  td.lambda = 1.0;

  LearnerConfig gtd;
  gtd.algorithm = Algorithm::kGtd;
  gtd.alpha = 1.0 / 64;
  gtd.lambda = 0.0;
  gtd.eta = 0.25;

  const RunResult a = execute_run(td, run, 0, setup.steps);
  const RunResult b = execute_run(gtd, run, 0, setup.steps);

  std::printf("%8s %10s %10s\n", "step", "td(1)", "gtd(0)");
  for (std::size_t i = 0; i <= setup.steps; i += 2000) {
    std::printf("%8zu %10.4f %10.4f\n", i, a.rve[i], b.rve[i]);
  }
  const Vector wstar = solve_wstar(run.features, run.mu, run.values);
  std::printf("best achievable RVE for this feature map: %.4f\n", rve(wstar, run.features, run.mu, run.values));
  return 0;
}
