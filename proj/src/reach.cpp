#include "osig/reach.hpp"

#include "osig/parallel.hpp"

namespace osig {
namespace reach {

namespace {

bool successor_feasible(const GameSpec& spec, const std::vector<std::uint8_t>& next, const Vec& x,
                        Lookup rule) {
  if (rule == Lookup::kNearest) return next[static_cast<size_t>(spec.lattice.nearest(x))] != 0;
  InterpStencil st = spec.lattice.stencil(x);
  for (int c = 0; c < st.m; ++c)
    if (st.w[static_cast<size_t>(c)] > 1e-12 && !next[static_cast<size_t>(st.idx[static_cast<size_t>(c)])]) return false;
  return true;
}

}  // namespace

std::vector<std::uint8_t> terminal_mask(const GameSpec& spec) {
  std::vector<std::uint8_t> m(static_cast<size_t>(spec.lattice.size()));
  for (long s = 0; s < spec.lattice.size(); ++s)
    m[static_cast<size_t>(s)] = spec.c(spec.lattice.coord(s)) <= 0.0 ? 1 : 0;
  return m;
}

std::vector<std::uint8_t> backup_mask(const GameSpec& spec, const std::vector<std::uint8_t>& next,
                                      Lookup rule) {
  std::vector<std::uint8_t> m(static_cast<size_t>(spec.lattice.size()));
  double tau = spec.time.tau();
  parallel_for(spec.lattice.size(), [&](long s) {
    Vec x = spec.lattice.coord(s);
    if (spec.c(x) > 0.0) {
      m[static_cast<size_t>(s)] = 0;
      return;
    }
    // feasible iff some u keeps every v-response feasible at the next step
    for (const Vec& u : spec.actions.u) {
      bool safe = true;
      for (const Vec& v : spec.actions.v) {
        Vec xn = dynamics_step(spec, x, u, v, tau).x;
        if (!successor_feasible(spec, next, xn, rule)) {
          safe = false;
          break;
        }
      }
      if (safe) {
        m[static_cast<size_t>(s)] = 1;
        return;
      }
    }
    m[static_cast<size_t>(s)] = 0;
  });
  return m;
}

FeasibilitySet compute(const GameSpec& spec, Lookup rule) {
  FeasibilitySet fs;
  fs.mask.resize(static_cast<size_t>(spec.time.steps) + 1);
  fs.mask[static_cast<size_t>(spec.time.steps)] = terminal_mask(spec);
  for (int k = spec.time.steps - 1; k >= 0; --k)
    fs.mask[static_cast<size_t>(k)] = backup_mask(spec, fs.mask[static_cast<size_t>(k) + 1], rule);
  return fs;
}

bool is_feasible(const GameSpec& spec, const FeasibilitySet& fs, int k, const Vec& x) {
  if (!spec.lattice.in_bounds(x)) throw std::invalid_argument("state outside lattice bounds");
  return fs.at(k, spec.lattice.nearest(x));
}

}  // namespace reach
}  // namespace osig
