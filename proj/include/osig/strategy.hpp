#pragma once

#include <random>

#include "osig/dual.hpp"
#include "osig/primal.hpp"

namespace osig {
namespace strategy {

using Rng = std::mt19937_64;

// Informed player's stage decision: either resign (state infeasible) or a
// distribution over (action, posterior) pairs from the hull split.
struct P1Decision {
  bool resign = false;
  SplitPlan plan;  // actions hold P1 action ids

  // Probability of each split point conditioned on the true type.
  std::vector<double> conditional(const Belief& p, int type) const;
};

struct P1Sample {
  bool resign = false;
  int point = -1;
  int action = -1;
  Belief posterior = Belief::uniform(2);
};

P1Decision p1_decide(const GameSpec& spec, const reach::FeasibilitySet& masks,
                     const primal::ValueTable& table, int k, const Vec& x, const Belief& p);

P1Sample p1_act(const GameSpec& spec, const reach::FeasibilitySet& masks,
                const primal::ValueTable& table, int k, const Vec& x, const Belief& p, int type,
                Rng& rng);

// Uninformed player's stage decision: pursuit when the state is infeasible,
// otherwise a distribution over (action, next dual vector) pairs.
struct P2Decision {
  bool pursuit = false;
  int pursuit_action = -1;
  SplitPlan plan;               // actions hold P2 action ids
  std::vector<int> u_reply;     // P1 best reply in the dual stage game, per point
  std::vector<DualVector> next; // p^j - tau l(u^j, v^j)

  // Total probability per distinct P2 action.
  std::vector<std::pair<int, double>> action_distribution() const;
};

struct P2Sample {
  bool pursuit = false;
  int point = -1;
  int action = -1;
  DualVector next;
};

P2Decision p2_decide(const GameSpec& spec, const reach::FeasibilitySet& masks,
                     const dual::ConjugateTable& table, int k, const Vec& x, const DualVector& phat);

P2Sample p2_act(const GameSpec& spec, const reach::FeasibilitySet& masks,
                const dual::ConjugateTable& table, int k, const Vec& x, const DualVector& phat,
                Rng& rng);

// Bayes update of the common belief from the announced split after
// observing P1's action. Equals the split vertex when actions are distinct.
Belief bayes_posterior(const P1Decision& decision, const Belief& p, int observed_action);

}  // namespace strategy
}  // namespace osig
