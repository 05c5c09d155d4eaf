#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "osig/io.hpp"
#include "osig/oracles.hpp"
#include "osig/verify.hpp"

using namespace osig;

namespace {

Vec parse_point(const std::string& csv) {
  std::vector<double> vals;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
  return to_vec(vals);
}

int run_verify(const std::string& suite) {
  auto results = suite == "all" ? verify::run_all() : verify::run_suite(suite);
  bool ok = true;
  for (const auto& r : results) {
    std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  (measured "
              << io::format_float(r.measured) << ", bound " << io::format_float(r.bound) << ")";
    if (!r.detail.empty()) std::cout << "  [" << r.detail << "]";
    std::cout << "\n";
    ok = ok && r.pass;
  }
  std::cout << (ok ? "verification passed" : "verification FAILED") << "\n";
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solver for fixed-horizon zero-sum games with one-sided information and state constraints"};
  app.require_subcommand(1);

  std::string config, out, value_path, conj_path, masks_path, suite = "all", x0_csv, infile;
  int runs = 10, k_slice = 0, fixed_type = -1;
  std::uint64_t seed = 1;
  double belief = 0.5, x2_fixed = 0.0;

  auto* solve = app.add_subcommand("solve", "compute the primal value table");
  solve->add_option("--config", config)->required();
  solve->add_option("--out", out)->required();
  solve->add_option("--masks", masks_path, "also write the feasibility masks");

  auto* dsolve = app.add_subcommand("dual-solve", "compute the conjugate value table");
  dsolve->add_option("--config", config)->required();
  dsolve->add_option("--out", out)->required();

  auto* rch = app.add_subcommand("reach", "compute per-timestep feasibility masks");
  rch->add_option("--config", config)->required();
  rch->add_option("--out", out)->required();

  auto* simc = app.add_subcommand("simulate", "roll out equilibrium play");
  simc->add_option("--config", config)->required();
  simc->add_option("--value", value_path)->required();
  simc->add_option("--conjugate", conj_path)->required();
  simc->add_option("--out", out)->required();
  simc->add_option("--x0", x0_csv, "initial state, comma separated")->required();
  simc->add_option("--runs", runs);
  simc->add_option("--seed", seed);
  simc->add_option("--type", fixed_type, "fix the informed player's type (-1 samples from the prior)");

  auto* ver = app.add_subcommand("verify", "run the oracle comparison suites");
  ver->add_option("--suite", suite,
                  "all|beer-quiche|hexner|brute-force|prop1|martingale|reach|properties");

  auto* exp = app.add_subcommand("export", "emit CSV plot data");
  exp->require_subcommand(1);
  auto* slice = exp->add_subcommand("value-slice", "value over belief at a fixed time and state");
  slice->add_option("--config", config)->required();
  slice->add_option("--value", value_path)->required();
  slice->add_option("--k", k_slice);
  slice->add_option("--state", x0_csv)->required();
  slice->add_option("--out", out)->required();
  auto* delay = exp->add_subcommand("delay-map", "mean reveal delay over initial positions");
  delay->add_option("--config", config)->required();
  delay->add_option("--value", value_path)->required();
  delay->add_option("--conjugate", conj_path)->required();
  delay->add_option("--x2", x2_fixed, "fixed opponent coordinate");
  delay->add_option("--runs", runs);
  delay->add_option("--seed", seed);
  delay->add_option("--out", out)->required();
  auto* adv = exp->add_subcommand("advantage-map", "stage-vs-hull gap over states");
  adv->add_option("--config", config)->required();
  adv->add_option("--value", value_path)->required();
  adv->add_option("--k", k_slice);
  adv->add_option("--belief", belief);
  adv->add_option("--out", out)->required();
  auto* tcsv = exp->add_subcommand("trajectories", "flatten rollout records to CSV");
  tcsv->add_option("--in", infile)->required();
  tcsv->add_option("--out", out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*solve) {
      GameSpec spec = io::load_spec(config);
      auto masks = reach::compute(spec);
      primal::SolveStats stats;
      auto table = primal::solve(spec, masks, {}, &stats);
      io::write_value_table(out, table);
      if (!masks_path.empty()) io::write_masks(masks_path, masks, spec);
      std::cout << "wrote " << out << " (clipped successor lookups: " << stats.clipped_successors
                << ")\n";
    } else if (*dsolve) {
      GameSpec spec = io::load_spec(config);
      auto masks = reach::compute(spec);
      dual::DualSolveStats stats;
      auto table = dual::dual_solve(spec, masks, &stats);
      io::write_conjugate_table(out, table);
      std::cout << "wrote " << out << " (max interpolation spread on shifted reads: "
                << io::format_float(stats.max_shift_cell_osc) << ")\n";
    } else if (*rch) {
      GameSpec spec = io::load_spec(config);
      auto masks = reach::compute(spec);
      io::write_masks(out, masks, spec);
      long infeasible = 0;
      for (long s = 0; s < spec.lattice.size(); ++s)
        if (!masks.at(0, s)) ++infeasible;
      std::cout << "wrote " << out << " (" << infeasible << "/" << spec.lattice.size()
                << " nodes trapped at t=0)\n";
    } else if (*simc) {
      GameSpec spec = io::load_spec(config);
      auto table = io::read_value_table(value_path);
      auto conj = io::read_conjugate_table(conj_path);
      const auto& masks = table.masks;
      Vec x0 = parse_point(x0_csv);
      std::vector<sim::TrajectoryRecord> recs;
      auto source = fixed_type < 0 ? sim::TypeSource::kSampled : sim::TypeSource::kFixed;
      auto summary = sim::monte_carlo(spec, table, conj, masks, x0, spec.prior, runs, seed, source,
                                      std::max(fixed_type, 0), &recs);
      io::write_trajectories(out, recs);
      std::cout << "wrote " << out << "  payoff " << io::format_float(summary.payoff_mean) << " +- "
                << io::format_float(summary.payoff_std) << "  delay "
                << io::format_float(summary.delay_mean) << "  violations " << summary.violations
                << "\n";
    } else if (*ver) {
      return run_verify(suite);
    } else if (*slice) {
      GameSpec spec = io::load_spec(config);
      auto table = io::read_value_table(value_path);
      long s = spec.lattice.nearest(parse_point(x0_csv));
      std::vector<std::vector<double>> rows;
      for (int j = 0; j < table.pgrid.size(); ++j)
        rows.push_back({table.pgrid.p1(j), table.at(k_slice, s, j)});
      io::write_csv(out, {"p1", "value"}, rows);
      std::cout << "wrote " << out << "\n";
    } else if (*delay) {
      GameSpec spec = io::load_spec(config);
      auto table = io::read_value_table(value_path);
      auto conj = io::read_conjugate_table(conj_path);
      const auto& masks = table.masks;
      std::vector<std::vector<double>> rows;
      for (int i = 0; i < spec.lattice.count(0); ++i) {
        double x1 = spec.lattice.lower(0) + i * spec.lattice.spacing(0);
        Vec x0 = make_vec({x1, x2_fixed});
        if (!spec.lattice.in_bounds(x0)) continue;
        if (!reach::is_feasible(spec, masks, 0, x0)) {
          rows.push_back({x1, x2_fixed, static_cast<double>(spec.time.steps), 1.0});
          continue;
        }
        auto summary = sim::monte_carlo(spec, table, conj, masks, x0, spec.prior, runs,
                                        seed + static_cast<std::uint64_t>(i) * 1000003ULL);
        rows.push_back({x1, x2_fixed, summary.delay_mean, 0.0});
      }
      io::write_csv(out, {"x1", "x2", "mean_delay", "trapped"}, rows);
      std::cout << "wrote " << out << "\n";
    } else if (*adv) {
      GameSpec spec = io::load_spec(config);
      auto table = io::read_value_table(value_path);
      const auto& masks = table.masks;
      int j = table.pgrid.nearest(belief);
      std::vector<std::vector<double>> rows;
      for (long s = 0; s < spec.lattice.size(); ++s) {
        if (!masks.at(k_slice, s)) continue;
        Vec x = spec.lattice.coord(s);
        double a = sim::advantage(spec, masks, table, k_slice, x, j);
        std::vector<double> row(x.data(), x.data() + x.size());
        row.push_back(a);
        rows.push_back(std::move(row));
      }
      std::vector<std::string> header;
      for (int d = 0; d < spec.state_dim; ++d) header.push_back("x" + std::to_string(d));
      header.push_back("advantage");
      io::write_csv(out, header, rows);
      std::cout << "wrote " << out << "\n";
    } else if (*tcsv) {
      std::ifstream in(infile);
      if (!in) throw std::invalid_argument("cannot open " + infile);
      std::vector<std::vector<double>> rows;
      std::string line;
      while (std::getline(in, line)) {
        auto j = nlohmann::json::parse(line);
        for (const auto& st : j.at("steps")) {
          std::vector<double> row{static_cast<double>(j.at("seed").get<std::uint64_t>()),
                                  static_cast<double>(j.at("type").get<int>()),
                                  static_cast<double>(st.at("k").get<int>()), st.at("t").get<double>()};
          for (const char* arr : {"x", "u", "v", "p", "phat"})
            for (const auto& v : st.at(arr)) row.push_back(v.get<double>());
          rows.push_back(std::move(row));
        }
      }
      std::vector<std::string> header{"seed", "type", "k", "t"};
      if (!rows.empty())
        for (size_t c = header.size(); c < rows[0].size(); ++c) header.push_back("c" + std::to_string(c));
      io::write_csv(out, header, rows);
      std::cout << "wrote " << out << "\n";
    }
  } catch (const NumericGuardError& e) {
    std::cerr << "numeric guard: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
