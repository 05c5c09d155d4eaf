#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "osig/io.hpp"
#include "osig/oracles.hpp"
#include "osig/verify.hpp"

namespace py = pybind11;
using namespace osig;

namespace {

// Everything a solved game needs for synthesis and simulation.
struct Solved {
  GameSpec spec;
  reach::FeasibilitySet masks;
  primal::ValueTable table;
  dual::ConjugateTable conj;
  bool has_dual = false;
};

Solved solve_spec(const GameSpec& spec, bool with_dual) {
  Solved s;
  s.spec = spec;
  s.masks = reach::compute(spec);
  s.table = primal::solve(spec, s.masks);
  if (with_dual) {
    s.conj = dual::dual_solve(spec, s.masks);
    s.has_dual = true;
  }
  return s;
}

py::array_t<double> value_slice(const Solved& s, int k) {
  const int nP = s.table.pgrid.size();
  const long ns = s.spec.lattice.size();
  py::array_t<double> out({ns, static_cast<long>(nP)});
  auto buf = out.mutable_unchecked<2>();
  for (long i = 0; i < ns; ++i)
    for (int j = 0; j < nP; ++j) buf(i, j) = s.table.at(k, i, j);
  return out;
}

py::array_t<double> conjugate_slice(const Solved& s, int k) {
  if (!s.has_dual) throw std::runtime_error("game was solved without the dual table");
  const long nH = s.conj.grid.size();
  const long ns = s.spec.lattice.size();
  py::array_t<double> out({ns, nH});
  auto buf = out.mutable_unchecked<2>();
  for (long i = 0; i < ns; ++i)
    for (long h = 0; h < nH; ++h) buf(i, h) = s.conj.at(k, i, h);
  return out;
}

py::dict record_to_dict(const sim::TrajectoryRecord& r) {
  py::dict d;
  d["seed"] = r.seed;
  d["type"] = r.type;
  d["p0"] = r.p0;
  d["phat0"] = r.phat0;
  d["resigned"] = r.resigned;
  d["payoff"] = r.payoff;
  d["x_final"] = r.x_final;
  py::list steps;
  for (const auto& s : r.steps) {
    py::dict e;
    e["k"] = s.k;
    e["t"] = s.t;
    e["x"] = s.x;
    e["u"] = s.u;
    e["v"] = s.v;
    e["p"] = s.p;
    e["phat"] = s.phat;
    e["clip"] = s.clip;
    e["pursuit"] = s.pursuit;
    e["resign"] = s.resign;
    steps.append(e);
  }
  d["steps"] = steps;
  return d;
}

}  // namespace

PYBIND11_MODULE(osig, m) {
  m.doc() = "Belief-lattice solver for zero-sum games with one-sided information "
            "and state constraints";

  py::class_<GameSpec>(m, "GameSpec")
      .def_property_readonly("steps", [](const GameSpec& s) { return s.time.steps; })
      .def_property_readonly("tau", [](const GameSpec& s) { return s.time.tau(); })
      .def_property_readonly("belief_count", [](const GameSpec& s) { return s.belief_count; })
      .def_property_readonly("state_nodes", [](const GameSpec& s) { return s.lattice.size(); })
      .def_property_readonly("cap", [](const GameSpec& s) { return s.cap; })
      .def_property_readonly("name", [](const GameSpec& s) { return s.name; });

  py::class_<Solved>(m, "SolvedGame")
      .def_property_readonly("spec", [](const Solved& s) { return s.spec; })
      .def("value", &value_slice, py::arg("k"),
           "primal values at timestep k, shape (state_nodes, belief_count)")
      .def("conjugate", &conjugate_slice, py::arg("k"),
           "conjugate values at timestep k, shape (state_nodes, dual_nodes)")
      .def("belief_grid",
           [](const Solved& s) {
             std::vector<double> g;
             for (int j = 0; j < s.table.pgrid.size(); ++j) g.push_back(s.table.pgrid.p1(j));
             return g;
           })
      .def("value_at",
           [](const Solved& s, int k, const std::vector<double>& x, double p1) {
             long node = s.spec.lattice.nearest(to_vec(x));
             return s.table.at(k, node, s.table.pgrid.nearest(p1));
           })
      .def("feasible",
           [](const Solved& s, int k, const std::vector<double>& x) {
             return reach::is_feasible(s.spec, s.masks, k, to_vec(x));
           })
      .def("init_dual",
           [](const Solved& s, const std::vector<double>& x, const std::vector<double>& p) {
             return dual::init_dual(s.table, s.spec, to_vec(x), Belief(p)).e;
           })
      .def("advantage",
           [](const Solved& s, int k, const std::vector<double>& x, double p1) {
             return sim::advantage(s.spec, s.masks, s.table, k, to_vec(x),
                                   s.table.pgrid.nearest(p1));
           })
      .def("rollout",
           [](const Solved& s, const std::vector<double>& x0, const std::vector<double>& p0,
              std::uint64_t seed, int fixed_type) {
             if (!s.has_dual) throw std::runtime_error("rollouts need the dual table");
             auto source = fixed_type < 0 ? sim::TypeSource::kSampled : sim::TypeSource::kFixed;
             return record_to_dict(sim::rollout(s.spec, s.table, s.conj, s.masks, to_vec(x0),
                                                Belief(p0), source, std::max(fixed_type, 0), seed));
           },
           py::arg("x0"), py::arg("p0"), py::arg("seed") = 1, py::arg("fixed_type") = -1)
      .def("monte_carlo", [](const Solved& s, const std::vector<double>& x0,
                             const std::vector<double>& p0, int runs, std::uint64_t seed) {
        if (!s.has_dual) throw std::runtime_error("rollouts need the dual table");
        auto mc = sim::monte_carlo(s.spec, s.table, s.conj, s.masks, to_vec(x0), Belief(p0), runs,
                                   seed);
        py::dict d;
        d["runs"] = mc.runs;
        d["payoff_mean"] = mc.payoff_mean;
        d["payoff_std"] = mc.payoff_std;
        d["delay_mean"] = mc.delay_mean;
        d["violations"] = mc.violations;
        d["resignations"] = mc.resignations;
        return d;
      });

  m.def("load_spec", &io::load_spec, py::arg("path"), "load a JSON game configuration");
  m.def("parse_spec", &io::parse_spec, py::arg("text"));
  m.def("beer_quiche", &make_beer_quiche);
  m.def(
      "corridor",
      [](int nodes, int steps, double horizon, double radius, double target, double effort_u,
         double effort_v, int belief_count) {
        CorridorParams p;
        p.nodes = nodes;
        p.steps = steps;
        p.horizon = horizon;
        p.radius = radius;
        p.target = target;
        p.effort_u = effort_u;
        p.effort_v = effort_v;
        p.belief_count = belief_count;
        return make_corridor(p);
      },
      py::arg("nodes") = 11, py::arg("steps") = 3, py::arg("horizon") = 0.6,
      py::arg("radius") = 0.05, py::arg("target") = 0.6, py::arg("effort_u") = 0.0,
      py::arg("effort_v") = 0.0, py::arg("belief_count") = 21);
  m.def(
      "hexner_stateless",
      [](int steps, int riccati_steps) {
        auto fp = oracles::football_params();
        auto c1 = oracles::riccati_integrate(fp.A, fp.B, fp.R1, fp.KT, fp.z, fp.horizon, riccati_steps);
        auto c2 = oracles::riccati_integrate(fp.A, fp.B, fp.R2, fp.KT, fp.z, fp.horizon, riccati_steps);
        oracles::HexnerStateless hx(c1.t, c1.d, c2.d);
        return oracles::hexner_stateless_spec(hx, steps);
      },
      py::arg("steps") = 10, py::arg("riccati_steps") = 2000);
  m.def("solve", &solve_spec, py::arg("spec"), py::arg("with_dual") = true,
        "backward induction over the belief lattice; returns a SolvedGame");
  m.def("critical_time", [](int grid_steps) {
    auto fp = oracles::football_params();
    auto c1 = oracles::riccati_integrate(fp.A, fp.B, fp.R1, fp.KT, fp.z, fp.horizon, grid_steps);
    auto c2 = oracles::riccati_integrate(fp.A, fp.B, fp.R2, fp.KT, fp.z, fp.horizon, grid_steps);
    return oracles::critical_time(c1.d, c2.d, c1.t);
  }, py::arg("grid_steps") = 1000);
  m.def("verify", [](const std::string& suite) {
    auto results = suite == "all" ? verify::run_all() : verify::run_suite(suite);
    py::list out;
    for (const auto& r : results) {
      py::dict d;
      d["name"] = r.name;
      d["pass"] = r.pass;
      d["measured"] = r.measured;
      d["bound"] = r.bound;
      out.append(d);
    }
    return out;
  }, py::arg("suite") = "all");
}
