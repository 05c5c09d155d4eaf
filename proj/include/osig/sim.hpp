#pragma once

#include <cstdint>
#include <optional>

#include "osig/strategy.hpp"

namespace osig {
namespace sim {

// One recorded step. `p` and `phat` are the information states carried out
// of the step (posterior after P1's action; updated dual vector).
struct StepRecord {
  int k = 0;
  double t = 0;
  std::vector<double> x, u, v, p, phat;
  bool clip = false, pursuit = false, resign = false;
};

struct TrajectoryRecord {
  std::uint64_t seed = 0;
  int type = 0;
  std::vector<double> p0, phat0;
  std::vector<StepRecord> steps;
  std::vector<double> x_final;
  bool resigned = false;
  double payoff = 0.0;  // terminal payoff plus accumulated stage payoffs; cap on resignation
};

enum class TypeSource { kSampled, kFixed };

TrajectoryRecord rollout(const GameSpec& spec, const primal::ValueTable& table,
                         const dual::ConjugateTable& conj, const reach::FeasibilitySet& masks,
                         const Vec& x0, const Belief& p0, TypeSource source, int fixed_type,
                         std::uint64_t seed);

// Mean over records of the first step index whose posterior is pure
// (tolerance 1e-9); records that never reveal count as L.
double reveal_delay(const std::vector<TrajectoryRecord>& records, int steps);

// Gap between the un-convexified stage value and the stored (convexified)
// value at a belief node; nonnegative up to arithmetic noise.
double advantage(const GameSpec& spec, const reach::FeasibilitySet& masks,
                 const primal::ValueTable& table, int k, const Vec& x, int belief_node);

struct McSummary {
  int runs = 0;
  double payoff_mean = 0, payoff_std = 0;
  double delay_mean = 0;
  long violations = 0;
  long resignations = 0;
};

McSummary monte_carlo(const GameSpec& spec, const primal::ValueTable& table,
                      const dual::ConjugateTable& conj, const reach::FeasibilitySet& masks,
                      const Vec& x0, const Belief& p0, int runs, std::uint64_t base_seed,
                      TypeSource source = TypeSource::kSampled, int fixed_type = 0,
                      std::vector<TrajectoryRecord>* keep = nullptr);

}  // namespace sim
}  // namespace osig
