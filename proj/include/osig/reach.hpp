#pragma once

#include <cstdint>
#include <vector>

#include "osig/game.hpp"

namespace osig {
namespace reach {

// Successor feasibility lookup rule. kNearest snaps the successor to the
// closest node; kConservative marks a successor infeasible when any corner
// of its surrounding cell is infeasible.
enum class Lookup { kNearest, kConservative };

// Per-timestep boolean feasibility over state nodes (true = feasible).
struct FeasibilitySet {
  std::vector<std::vector<std::uint8_t>> mask;  // mask[k][state]

  bool at(int k, long state) const { return mask[static_cast<size_t>(k)][static_cast<size_t>(state)] != 0; }
};

std::vector<std::uint8_t> terminal_mask(const GameSpec& spec);

std::vector<std::uint8_t> backup_mask(const GameSpec& spec, const std::vector<std::uint8_t>& next,
                                      Lookup rule = Lookup::kNearest);

FeasibilitySet compute(const GameSpec& spec, Lookup rule = Lookup::kNearest);

// Nearest-node lookup of the mask at an off-lattice state.
bool is_feasible(const GameSpec& spec, const FeasibilitySet& fs, int k, const Vec& x);

}  // namespace reach
}  // namespace osig
