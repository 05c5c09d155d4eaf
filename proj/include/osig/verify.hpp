#pragma once

#include <string>
#include <vector>

namespace osig {
namespace verify {

struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double bound = 0.0;
  std::string detail;
};

// Acceptance checks, grouped per criterion. Each runner is deterministic.
std::vector<CheckResult> beer_quiche_primal();
std::vector<CheckResult> beer_quiche_dual();
std::vector<CheckResult> hexner_critical_time();
std::vector<CheckResult> hexner_convergence();
std::vector<CheckResult> brute_force_equivalence(int n_games = 20);
std::vector<CheckResult> hull_refinement(int n_funcs = 50);
std::vector<CheckResult> martingale_payoff(int runs = 10000);
std::vector<CheckResult> reach_oracle(int n_instances = 10);
std::vector<CheckResult> property_suites();

std::vector<CheckResult> run_suite(const std::string& name);
std::vector<CheckResult> run_all();

}  // namespace verify
}  // namespace osig
