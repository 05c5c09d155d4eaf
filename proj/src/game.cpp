#include "osig/game.hpp"

#include <algorithm>
#include <cmath>

namespace osig {

void ActionSet::validate() const {
  if (u.empty() || v.empty()) throw std::invalid_argument("action sets must be nonempty");
  auto check = [](const std::vector<Vec>& acts, const std::vector<double>& lo,
                  const std::vector<double>& hi, const char* who) {
    for (const Vec& a : acts) {
      if (!all_finite(a)) throw std::invalid_argument("actions must be finite");
      if (lo.empty()) continue;
      for (Eigen::Index d = 0; d < a.size(); ++d) {
        if (a[d] < lo[static_cast<size_t>(d)] - 1e-12 || a[d] > hi[static_cast<size_t>(d)] + 1e-12)
          throw std::invalid_argument(std::string(who) + " action outside admissible bounds");
      }
    }
  };
  check(u, u_lo, u_hi, "P1");
  check(v, v_lo, v_hi, "P2");
}

double StageCost::d_at(const std::vector<double>& d, double t) const {
  if (d.empty()) return 0.0;
  double rel = t / sample_dt;
  long i = std::clamp(static_cast<long>(std::floor(rel)), 0L, static_cast<long>(d.size()) - 2);
  double f = std::clamp(rel - i, 0.0, 1.0);
  return d[static_cast<size_t>(i)] * (1 - f) + d[static_cast<size_t>(i) + 1] * f;
}

double GameSpec::g(const Vec& x, int type) const {
  switch (terminal.kind) {
    case TerminalKind::kZero:
      return 0.0;
    case TerminalKind::kCorridor:
    case TerminalKind::kHexnerTargets: {
      // type 0 chases -target, type 1 chases +target; P1 owns the first
      // u_dims coordinates and P2 the rest.
      double z = (type == 0 ? -terminal.target : terminal.target);
      double own = 0.0, opp = 0.0;
      for (int d = 0; d < u_dims; ++d) own += (x[d] - z) * (x[d] - z);
      for (int d = u_dims; d < state_dim; ++d) opp += (x[d] - z) * (x[d] - z);
      return terminal.weight_own * own - terminal.weight_opp * opp;
    }
    case TerminalKind::kBeerQuiche: {
      long node = std::lround(x[0]);
      return terminal.table[static_cast<size_t>(type)][static_cast<size_t>(node)];
    }
    case TerminalKind::kCustom:
      return terminal.custom(x, type);
  }
  return 0.0;
}

double GameSpec::c(const Vec& x) const {
  switch (constraint.kind) {
    case ConstraintKind::kNone:
      return -1.0;
    case ConstraintKind::kGapAbs:
      return constraint.radius - std::abs(x[0] - x[1]);
    case ConstraintKind::kPairDistance: {
      double s = 0.0;
      for (size_t i = 0; i < constraint.dims_a.size(); ++i) {
        double d = x[constraint.dims_a[i]] - x[constraint.dims_b[i]];
        s += d * d;
      }
      return constraint.radius - std::sqrt(s);
    }
    case ConstraintKind::kHalfplane: {
      double s = -constraint.offset;
      for (size_t i = 0; i < constraint.normal.size(); ++i) s += constraint.normal[i] * x[static_cast<Eigen::Index>(i)];
      return s;
    }
  }
  return -1.0;
}

double GameSpec::stage_cost(const Vec& u, const Vec& v, double t, double p1) const {
  switch (stage.kind) {
    case StageCostKind::kNone:
      return 0.0;
    case StageCostKind::kQuadratic: {
      double s = 0.0;
      for (Eigen::Index d = 0; d < u.size(); ++d) s += stage.au[static_cast<size_t>(d)] * u[d] * u[d];
      for (Eigen::Index d = 0; d < v.size(); ++d) s -= stage.bv[static_cast<size_t>(d)] * v[d] * v[d];
      return s;
    }
    case StageCostKind::kHexner: {
      // E_theta[(u - theta)^2 d1 - (v - theta)^2 d2] with theta in {-1, +1}
      // and p1 = P(theta = -1), so E[theta] = 1 - 2 p1 and E[theta^2] = 1.
      double m = 1.0 - 2.0 * p1;
      double d1 = stage.d_at(stage.d1, t), d2 = stage.d_at(stage.d2, t);
      return (u[0] * u[0] - 2.0 * u[0] * m + 1.0) * d1 - (v[0] * v[0] - 2.0 * v[0] * m + 1.0) * d2;
    }
  }
  return 0.0;
}

double GameSpec::realized_stage_cost(const Vec& u, const Vec& v, double t, int type) const {
  if (stage.kind != StageCostKind::kHexner) return stage_cost(u, v, t, 0.0);
  double theta = (type == 0 ? -1.0 : 1.0);
  double d1 = stage.d_at(stage.d1, t), d2 = stage.d_at(stage.d2, t);
  return (u[0] - theta) * (u[0] - theta) * d1 - (v[0] - theta) * (v[0] - theta) * d2;
}

double GameSpec::payoff_bound() const {
  double gmax = 0.0;
  for (long s = 0; s < lattice.size(); ++s) {
    Vec x = lattice.coord(s);
    for (int i = 0; i < num_types; ++i) gmax = std::max(gmax, std::abs(g(x, i)));
  }
  double lmax = 0.0;
  for (const Vec& u : actions.u)
    for (const Vec& v : actions.v) {
      for (double t : {0.0, 0.5 * time.horizon, time.horizon}) {
        lmax = std::max(lmax, std::abs(stage_cost(u, v, t, 0.0)));
        lmax = std::max(lmax, std::abs(stage_cost(u, v, t, 0.5)));
        lmax = std::max(lmax, std::abs(stage_cost(u, v, t, 1.0)));
      }
    }
  return gmax + time.horizon * lmax;
}

void GameSpec::validate() const {
  actions.validate();
  if (num_types != prior.size()) throw std::invalid_argument("prior size must match type count");
  if (lattice.dims() != state_dim) throw std::invalid_argument("lattice dimension mismatch");
  if (belief_count < 2) throw std::invalid_argument("belief lattice needs >= 2 nodes");
  double bound = payoff_bound();
  if (!(cap > bound))
    throw std::invalid_argument("cap K must strictly dominate payoff bound " + std::to_string(bound));
}

StepResult dynamics_step(const GameSpec& spec, const Vec& x, const Vec& u, const Vec& v, double tau) {
  if (!all_finite(x) || !all_finite(u) || !all_finite(v))
    throw std::invalid_argument("dynamics_step requires finite inputs");
  if (!(tau > 0)) throw std::invalid_argument("dynamics_step requires tau > 0");
  Vec f(spec.state_dim);
  f.setZero();
  switch (spec.family) {
    case DynamicsFamily::kSingleIntegrator: {
      for (int d = 0; d < spec.u_dims; ++d) f[d] = u[d];
      for (int d = 0; d < spec.v_dims; ++d) f[spec.u_dims + d] = v[d];
      break;
    }
    case DynamicsFamily::kDoubleIntegrator: {
      // layout: [p1 pos, p1 vel, p2 pos, p2 vel], one entry per axis
      int a = spec.u_dims, b = spec.v_dims;
      for (int d = 0; d < a; ++d) {
        f[d] = x[a + d];
        f[a + d] = u[d];
      }
      int off = 2 * a;
      for (int d = 0; d < b; ++d) {
        f[off + d] = x[off + b + d];
        f[off + b + d] = v[d];
      }
      break;
    }
    case DynamicsFamily::kAffine: {
      const auto& ad = *spec.affine;
      Eigen::VectorXd xe = x, ue = u, ve = v;
      Eigen::VectorXd fe = ad.A * xe + ad.Bu * ue + ad.Bv * ve;
      for (int d = 0; d < spec.state_dim; ++d) f[d] = fe[d];
      break;
    }
    case DynamicsFamily::kTree: {
      long node = std::lround(x[0]);
      int ui = static_cast<int>(std::lround(u[0]));
      int vi = static_cast<int>(std::lround(v[0]));
      long nxt = spec.tree->next[static_cast<size_t>(node)][static_cast<size_t>(ui)][static_cast<size_t>(vi)];
      f[0] = (nxt - node) / tau;
      break;
    }
  }
  StepResult r;
  r.x = spec.lattice.clamp(x + tau * f, &r.clipped);
  return r;
}

double dynamics_lipschitz(const GameSpec& spec) {
  switch (spec.family) {
    case DynamicsFamily::kSingleIntegrator:
      return 0.0;
    case DynamicsFamily::kDoubleIntegrator:
      return 1.0;
    case DynamicsFamily::kAffine: {
      return spec.affine->A.cwiseAbs().rowwise().sum().maxCoeff();
    }
    case DynamicsFamily::kTree:
      throw std::invalid_argument("tree dynamics have no Lipschitz constant");
  }
  return 0.0;
}

GameSpec make_corridor(const CorridorParams& p) {
  GameSpec s;
  s.name = "corridor";
  s.state_dim = 2;
  s.family = DynamicsFamily::kSingleIntegrator;
  s.u_dims = 1;
  s.v_dims = 1;
  for (double a : {-p.speed, 0.0, p.speed}) {
    s.actions.u.push_back(make_vec({a}));
    s.actions.v.push_back(make_vec({a}));
  }
  s.actions.u_lo = {-p.speed};
  s.actions.u_hi = {p.speed};
  s.actions.v_lo = {-p.speed};
  s.actions.v_hi = {p.speed};
  s.num_types = 2;
  s.terminal.kind = TerminalKind::kCorridor;
  s.terminal.target = p.target;
  s.terminal.weight_own = p.weight_own;
  s.terminal.weight_opp = p.weight_opp;
  if (p.effort_u != 0.0 || p.effort_v != 0.0) {
    s.stage.kind = StageCostKind::kQuadratic;
    s.stage.au = {p.effort_u};
    s.stage.bv = {p.effort_v};
  }
  if (p.radius > 0.0) {
    s.constraint.kind = ConstraintKind::kGapAbs;
    s.constraint.radius = p.radius;
  }
  s.time = TimeGrid(p.horizon, p.steps);
  s.lattice = StateLattice({-1.0, -1.0}, {1.0, 1.0}, {p.nodes, p.nodes});
  s.belief_count = p.belief_count;
  s.prior = Belief({p.prior1, 1.0 - p.prior1});
  s.cap = p.cap;
  s.validate();
  return s;
}

GameSpec make_beer_quiche() {
  // Nodes on a line: 0 root, 1 after B, 2 after Q, 3 (B,b), 4 (B,d),
  // 5 (Q,b), 6 (Q,d). P1 moves at step 0, P2 at step 1.
  GameSpec s;
  s.name = "beer_quiche";
  s.state_dim = 1;
  s.family = DynamicsFamily::kTree;
  auto tree = std::make_shared<TreeDynamics>();
  tree->next.assign(7, std::vector<std::vector<int>>(2, std::vector<int>(2, 0)));
  for (int u = 0; u < 2; ++u)
    for (int v = 0; v < 2; ++v) {
      tree->next[0][static_cast<size_t>(u)][static_cast<size_t>(v)] = u == 0 ? 1 : 2;  // u: 0=B, 1=Q
      tree->next[1][static_cast<size_t>(u)][static_cast<size_t>(v)] = v == 0 ? 3 : 4;  // v: 0=b, 1=d
      tree->next[2][static_cast<size_t>(u)][static_cast<size_t>(v)] = v == 0 ? 5 : 6;
      for (int leaf = 3; leaf < 7; ++leaf) tree->next[static_cast<size_t>(leaf)][static_cast<size_t>(u)][static_cast<size_t>(v)] = leaf;
    }
  s.tree = tree;
  s.actions.u = {make_vec({0.0}), make_vec({1.0})};
  s.actions.v = {make_vec({0.0}), make_vec({1.0})};
  s.num_types = 2;
  s.terminal.kind = TerminalKind::kBeerQuiche;
  // classic maximizer payoffs, negated: type 0 = tough, type 1 = weak
  // leaves:              3:(B,b) 4:(B,d) 5:(Q,b) 6:(Q,d)
  s.terminal.table = {
      {0, 0, 0, -2, -1, -1, 0},  // tough
      {0, 0, 0, 2, 0, 1, -2},    // weak
  };
  s.time = TimeGrid(2.0, 2);
  s.lattice = StateLattice({0.0}, {6.0}, {7});
  s.belief_count = 7;  // contains 1/3 and 2/3 exactly
  s.prior = Belief({1.0 / 3.0, 2.0 / 3.0});
  s.cap = 100.0;
  s.dual_lo = {-5.0, -5.0};
  s.dual_hi = {5.0, 5.0};
  s.dual_counts = {21, 21};
  s.validate();
  return s;
}

GameSpec make_hexner_stateless(int steps, std::vector<double> d1, std::vector<double> d2,
                               double horizon, int belief_count, int action_count) {
  GameSpec s;
  s.name = "hexner_stateless";
  s.state_dim = 1;
  s.family = DynamicsFamily::kSingleIntegrator;
  s.u_dims = 0;
  s.v_dims = 0;
  // both controls are 1-D tracking signals; the state never moves
  for (int i = 0; i < action_count; ++i) {
    double a = -1.0 + 2.0 * i / (action_count - 1);
    s.actions.u.push_back(make_vec({a}));
    s.actions.v.push_back(make_vec({a}));
  }
  s.actions.u_lo = {-1.0};
  s.actions.u_hi = {1.0};
  s.actions.v_lo = {-1.0};
  s.actions.v_hi = {1.0};
  s.num_types = 2;
  s.terminal.kind = TerminalKind::kZero;
  s.stage.kind = StageCostKind::kHexner;
  if (d1.size() != d2.size() || d1.size() < 2) throw std::invalid_argument("d1/d2 samples required");
  s.stage.d1 = std::move(d1);
  s.stage.d2 = std::move(d2);
  s.stage.sample_dt = horizon / (static_cast<double>(s.stage.d1.size()) - 1);
  s.time = TimeGrid(horizon, steps);
  s.lattice = StateLattice({0.0}, {1.0}, {2});
  s.belief_count = belief_count;
  s.prior = Belief({0.5, 0.5});
  s.cap = 50.0;
  s.validate();
  return s;
}

}  // namespace osig
