#include "osig/io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "osig/oracles.hpp"

namespace osig {
namespace io {

using nlohmann::json;

namespace {

[[noreturn]] void bad_field(const std::string& where, const std::string& what) {
  throw std::invalid_argument("config field '" + where + "': " + what);
}

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) bad_field(where, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) bad_field(where + "." + it.key(), "unknown key");
}

std::vector<double> as_doubles(const json& j, const std::string& where) {
  if (!j.is_array()) bad_field(where, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : j) {
    if (!e.is_number()) bad_field(where, "expected numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

Eigen::MatrixXd as_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) bad_field(where, "expected a matrix (array of rows)");
  size_t cols = 0;
  std::vector<std::vector<double>> rows;
  for (const auto& r : j) {
    rows.push_back(as_doubles(r, where));
    if (cols == 0) cols = rows.back().size();
    if (rows.back().size() != cols) bad_field(where, "ragged matrix");
  }
  Eigen::MatrixXd m(rows.size(), cols);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
  return m;
}

std::vector<Vec> parse_actions(const json& j, const std::string& where) {
  check_keys(j, where, {"list", "range", "count"});
  std::vector<Vec> out;
  if (j.contains("list")) {
    for (const auto& a : j.at("list")) out.push_back(to_vec(as_doubles(a, where + ".list")));
  } else if (j.contains("range")) {
    auto r = as_doubles(j.at("range"), where + ".range");
    if (r.size() != 2) bad_field(where + ".range", "expected [lo, hi]");
    if (!j.contains("count")) bad_field(where + ".count", "required with range");
    int n = j.at("count").get<int>();
    if (n < 1) bad_field(where + ".count", "must be >= 1");
    for (int i = 0; i < n; ++i) {
      double a = n == 1 ? 0.5 * (r[0] + r[1]) : r[0] + (r[1] - r[0]) * i / (n - 1);
      out.push_back(make_vec({a}));
    }
  } else {
    bad_field(where, "needs 'list' or 'range'+'count'");
  }
  return out;
}

}  // namespace

GameSpec parse_spec(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, "", {"comments", "name", "dynamics", "actions", "types", "payoffs", "constraint",
                     "time", "lattice", "caps", "dual_lattice"});
  GameSpec s;
  if (j.contains("name")) s.name = j.at("name").get<std::string>();

  // dynamics
  const json& dyn = j.at("dynamics");
  check_keys(dyn, "dynamics", {"family", "params"});
  std::string fam = dyn.at("family").get<std::string>();
  json params = dyn.value("params", json::object());
  if (fam == "single_integrator") {
    s.family = DynamicsFamily::kSingleIntegrator;
    check_keys(params, "dynamics.params", {"u_dims", "v_dims"});
    s.u_dims = params.value("u_dims", 1);
    s.v_dims = params.value("v_dims", 1);
  } else if (fam == "double_integrator") {
    s.family = DynamicsFamily::kDoubleIntegrator;
    check_keys(params, "dynamics.params", {"u_axes", "v_axes"});
    s.u_dims = params.value("u_axes", 1);
    s.v_dims = params.value("v_axes", 1);
  } else if (fam == "affine") {
    s.family = DynamicsFamily::kAffine;
    check_keys(params, "dynamics.params", {"A", "Bu", "Bv"});
    AffineDynamics ad;
    ad.A = as_matrix(params.at("A"), "dynamics.params.A");
    ad.Bu = as_matrix(params.at("Bu"), "dynamics.params.Bu");
    ad.Bv = as_matrix(params.at("Bv"), "dynamics.params.Bv");
    s.affine = std::move(ad);
  } else if (fam == "beer_quiche") {
    GameSpec bq = make_beer_quiche();
    s.family = bq.family;
    s.tree = bq.tree;
  } else {
    bad_field("dynamics.family", "unknown family '" + fam + "'");
  }

  // actions
  const json& act = j.at("actions");
  check_keys(act, "actions", {"u", "v", "u_bounds", "v_bounds"});
  s.actions.u = parse_actions(act.at("u"), "actions.u");
  s.actions.v = parse_actions(act.at("v"), "actions.v");
  if (act.contains("u_bounds")) {
    auto b = as_matrix(act.at("u_bounds"), "actions.u_bounds");
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
      s.actions.u_lo.push_back(b(i, 0));
      s.actions.u_hi.push_back(b(i, 1));
    }
  }
  if (act.contains("v_bounds")) {
    auto b = as_matrix(act.at("v_bounds"), "actions.v_bounds");
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
      s.actions.v_lo.push_back(b(i, 0));
      s.actions.v_hi.push_back(b(i, 1));
    }
  }

  // types
  const json& ty = j.at("types");
  check_keys(ty, "types", {"count", "prior"});
  s.num_types = ty.at("count").get<int>();
  if (s.num_types != 2) bad_field("types.count", "the solver supports exactly two types");
  s.prior = Belief(as_doubles(ty.at("prior"), "types.prior"));

  // payoffs
  const json& pay = j.at("payoffs");
  check_keys(pay, "payoffs", {"terminal", "instantaneous"});
  const json& term = pay.at("terminal");
  check_keys(term, "payoffs.terminal", {"name", "params"});
  std::string tname = term.at("name").get<std::string>();
  json tparams = term.value("params", json::object());
  if (tname == "corridor" || tname == "hexner_targets") {
    check_keys(tparams, "payoffs.terminal.params", {"target", "weight_own", "weight_opp"});
    s.terminal.kind = tname == "corridor" ? TerminalKind::kCorridor : TerminalKind::kHexnerTargets;
    s.terminal.target = tparams.value("target", 0.5);
    s.terminal.weight_own = tparams.value("weight_own", 1.0);
    s.terminal.weight_opp = tparams.value("weight_opp", 1.0);
  } else if (tname == "beer_quiche") {
    GameSpec bq = make_beer_quiche();
    s.terminal = bq.terminal;
  } else if (tname == "zero") {
    s.terminal.kind = TerminalKind::kZero;
  } else {
    bad_field("payoffs.terminal.name", "unknown builtin '" + tname + "'");
  }
  if (pay.contains("instantaneous")) {
    const json& inst = pay.at("instantaneous");
    check_keys(inst, "payoffs.instantaneous", {"kind", "au", "bv", "d1", "d2", "football"});
    std::string kind = inst.at("kind").get<std::string>();
    if (kind == "none") {
      s.stage.kind = StageCostKind::kNone;
    } else if (kind == "quadratic") {
      s.stage.kind = StageCostKind::kQuadratic;
      s.stage.au = as_doubles(inst.at("au"), "payoffs.instantaneous.au");
      s.stage.bv = as_doubles(inst.at("bv"), "payoffs.instantaneous.bv");
    } else if (kind == "hexner") {
      s.stage.kind = StageCostKind::kHexner;
      if (inst.value("football", false)) {
        auto fp = oracles::football_params();
        auto c1 = oracles::riccati_integrate(fp.A, fp.B, fp.R1, fp.KT, fp.z, fp.horizon, 2000);
        auto c2 = oracles::riccati_integrate(fp.A, fp.B, fp.R2, fp.KT, fp.z, fp.horizon, 2000);
        s.stage.d1 = c1.d;
        s.stage.d2 = c2.d;
        s.stage.sample_dt = fp.horizon / 2000;
      } else {
        s.stage.d1 = as_doubles(inst.at("d1"), "payoffs.instantaneous.d1");
        s.stage.d2 = as_doubles(inst.at("d2"), "payoffs.instantaneous.d2");
      }
    } else {
      bad_field("payoffs.instantaneous.kind", "unknown kind '" + kind + "'");
    }
  }

  // constraint
  if (j.contains("constraint")) {
    const json& con = j.at("constraint");
    check_keys(con, "constraint", {"kind", "radius", "dims_a", "dims_b", "normal", "offset"});
    std::string kind = con.at("kind").get<std::string>();
    if (kind == "none") {
      s.constraint.kind = ConstraintKind::kNone;
    } else if (kind == "gap_abs") {
      s.constraint.kind = ConstraintKind::kGapAbs;
      s.constraint.radius = con.at("radius").get<double>();
    } else if (kind == "pair_distance") {
      s.constraint.kind = ConstraintKind::kPairDistance;
      s.constraint.radius = con.at("radius").get<double>();
      for (double d : as_doubles(con.at("dims_a"), "constraint.dims_a"))
        s.constraint.dims_a.push_back(static_cast<int>(d));
      for (double d : as_doubles(con.at("dims_b"), "constraint.dims_b"))
        s.constraint.dims_b.push_back(static_cast<int>(d));
    } else if (kind == "halfplane") {
      s.constraint.kind = ConstraintKind::kHalfplane;
      s.constraint.normal = as_doubles(con.at("normal"), "constraint.normal");
      s.constraint.offset = con.at("offset").get<double>();
    } else {
      bad_field("constraint.kind", "unknown kind '" + kind + "'");
    }
  }

  // time, lattice, caps, dual lattice
  const json& tm = j.at("time");
  check_keys(tm, "time", {"horizon", "steps"});
  s.time = TimeGrid(tm.at("horizon").get<double>(), tm.at("steps").get<int>());
  if (s.stage.kind == StageCostKind::kHexner && s.stage.sample_dt == 0.0)
    s.stage.sample_dt = s.time.horizon / (static_cast<double>(s.stage.d1.size()) - 1);

  const json& lat = j.at("lattice");
  check_keys(lat, "lattice", {"bounds", "counts"});
  auto bounds = as_matrix(lat.at("bounds"), "lattice.bounds");
  std::vector<double> lo, hi;
  for (Eigen::Index i = 0; i < bounds.rows(); ++i) {
    lo.push_back(bounds(i, 0));
    hi.push_back(bounds(i, 1));
  }
  std::vector<int> counts;
  for (double c : as_doubles(lat.at("counts"), "lattice.counts")) counts.push_back(static_cast<int>(c));
  s.lattice = StateLattice(lo, hi, counts);
  s.state_dim = s.lattice.dims();

  const json& caps = j.at("caps");
  check_keys(caps, "caps", {"K", "belief_count"});
  s.cap = caps.at("K").get<double>();
  s.belief_count = caps.value("belief_count", 101);

  if (j.contains("dual_lattice")) {
    const json& dl = j.at("dual_lattice");
    check_keys(dl, "dual_lattice", {"bounds", "counts"});
    auto b = as_matrix(dl.at("bounds"), "dual_lattice.bounds");
    if (b.rows() != 2) bad_field("dual_lattice.bounds", "expected two axes");
    s.dual_lo = {b(0, 0), b(1, 0)};
    s.dual_hi = {b(0, 1), b(1, 1)};
    auto c = as_doubles(dl.at("counts"), "dual_lattice.counts");
    if (c.size() != 2) bad_field("dual_lattice.counts", "expected two axes");
    s.dual_counts = {static_cast<int>(c[0]), static_cast<int>(c[1])};
  }

  try {
    s.validate();
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config rejected: ") + e.what());
  }
  return s;
}

GameSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

// --- binary tables -------------------------------------------------------

namespace {

constexpr const char* kVersion = "osig-table-v1";

void write_blob(std::ostream& out, const json& header, const void* payload, size_t bytes) {
  std::string h = header.dump();
  std::uint64_t len = h.size();
  out.write(reinterpret_cast<const char*>(&len), sizeof(len));
  out.write(h.data(), static_cast<std::streamsize>(h.size()));
  out.write(static_cast<const char*>(payload), static_cast<std::streamsize>(bytes));
}

json read_header(std::istream& in) {
  std::uint64_t len = 0;
  in.read(reinterpret_cast<char*>(&len), sizeof(len));
  if (!in) throw std::invalid_argument("truncated table file");
  std::string h(len, '\0');
  in.read(h.data(), static_cast<std::streamsize>(len));
  if (!in) throw std::invalid_argument("truncated table header");
  json j = json::parse(h);
  if (j.at("version").get<std::string>() != kVersion)
    throw std::invalid_argument("unsupported table version");
  return j;
}

json lattice_header(const StateLattice& lat) {
  json j;
  std::vector<double> lo, hi;
  std::vector<int> counts;
  for (int d = 0; d < lat.dims(); ++d) {
    lo.push_back(lat.lower(d));
    hi.push_back(lat.upper(d));
    counts.push_back(lat.count(d));
  }
  j["lo"] = lo;
  j["hi"] = hi;
  j["counts"] = counts;
  return j;
}

StateLattice lattice_from_header(const json& j) {
  return StateLattice(j.at("lo").get<std::vector<double>>(), j.at("hi").get<std::vector<double>>(),
                      j.at("counts").get<std::vector<int>>());
}

std::vector<std::uint8_t> pack_bits(const std::vector<std::uint8_t>& mask) {
  std::vector<std::uint8_t> out((mask.size() + 7) / 8, 0);
  for (size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) out[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  return out;
}

std::vector<std::uint8_t> unpack_bits(const std::vector<std::uint8_t>& packed, size_t n) {
  std::vector<std::uint8_t> out(n, 0);
  for (size_t i = 0; i < n; ++i) out[i] = (packed[i / 8] >> (i % 8)) & 1u;
  return out;
}

json masks_header(const reach::FeasibilitySet& masks) {
  json j;
  j["kind"] = "mask";
  j["version"] = kVersion;
  j["timesteps"] = masks.mask.size();
  j["nodes"] = masks.mask.empty() ? 0 : masks.mask[0].size();
  return j;
}

void append_masks(std::ostream& out, const reach::FeasibilitySet& masks) {
  json h = masks_header(masks);
  std::string payload;
  for (const auto& m : masks.mask) {
    auto packed = pack_bits(m);
    payload.append(reinterpret_cast<const char*>(packed.data()), packed.size());
  }
  write_blob(out, h, payload.data(), payload.size());
}

reach::FeasibilitySet parse_masks(std::istream& in) {
  json h = read_header(in);
  if (h.at("kind").get<std::string>() != "mask") throw std::invalid_argument("expected a mask blob");
  size_t steps = h.at("timesteps").get<size_t>();
  size_t nodes = h.at("nodes").get<size_t>();
  size_t per = (nodes + 7) / 8;
  reach::FeasibilitySet fs;
  fs.mask.resize(steps);
  for (size_t k = 0; k < steps; ++k) {
    std::vector<std::uint8_t> packed(per);
    in.read(reinterpret_cast<char*>(packed.data()), static_cast<std::streamsize>(per));
    if (!in) throw std::invalid_argument("truncated mask payload");
    fs.mask[k] = unpack_bits(packed, nodes);
  }
  return fs;
}

}  // namespace

void write_value_table(const std::string& path, const primal::ValueTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write " + path);
  json h;
  h["version"] = kVersion;
  h["kind"] = "value";
  h["timesteps"] = table.steps;
  h["tau"] = table.tau;
  h["K"] = table.cap;
  h["state_lattice"] = lattice_header(table.lattice);
  h["belief_count"] = table.pgrid.size();
  std::string payload;
  for (const auto& slice : table.vals)
    payload.append(reinterpret_cast<const char*>(slice.data()), slice.size() * sizeof(double));
  write_blob(out, h, payload.data(), payload.size());
  append_masks(out, table.masks);
}

primal::ValueTable read_value_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  json h = read_header(in);
  if (h.at("kind").get<std::string>() != "value") throw std::invalid_argument("not a value table");
  primal::ValueTable t;
  t.steps = h.at("timesteps").get<int>();
  t.tau = h.at("tau").get<double>();
  t.cap = h.at("K").get<double>();
  t.lattice = lattice_from_header(h.at("state_lattice"));
  t.pgrid = BeliefGrid(h.at("belief_count").get<int>());
  size_t per = static_cast<size_t>(t.lattice.size()) * static_cast<size_t>(t.pgrid.size());
  t.vals.resize(static_cast<size_t>(t.steps) + 1);
  for (auto& slice : t.vals) {
    slice.resize(per);
    in.read(reinterpret_cast<char*>(slice.data()), static_cast<std::streamsize>(per * sizeof(double)));
    if (!in) throw std::invalid_argument("truncated value payload");
  }
  t.masks = parse_masks(in);
  return t;
}

void write_conjugate_table(const std::string& path, const dual::ConjugateTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write " + path);
  json h;
  h["version"] = kVersion;
  h["kind"] = "conjugate";
  h["timesteps"] = table.steps;
  h["tau"] = table.tau;
  h["K"] = table.cap;
  h["state_lattice"] = lattice_header(table.lattice);
  h["dual_lattice"] = {{"lo", {table.grid.lower(0), table.grid.lower(1)}},
                       {"hi", {table.grid.upper(0), table.grid.upper(1)}},
                       {"counts", {table.grid.count(0), table.grid.count(1)}}};
  std::string payload;
  for (const auto& slice : table.vals)
    payload.append(reinterpret_cast<const char*>(slice.data()), slice.size() * sizeof(double));
  write_blob(out, h, payload.data(), payload.size());
  append_masks(out, table.masks);
}

dual::ConjugateTable read_conjugate_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  json h = read_header(in);
  if (h.at("kind").get<std::string>() != "conjugate") throw std::invalid_argument("not a conjugate table");
  dual::ConjugateTable t;
  t.steps = h.at("timesteps").get<int>();
  t.tau = h.at("tau").get<double>();
  t.cap = h.at("K").get<double>();
  t.lattice = lattice_from_header(h.at("state_lattice"));
  const json& dl = h.at("dual_lattice");
  t.grid = DualGrid({dl.at("lo")[0].get<double>(), dl.at("lo")[1].get<double>()},
                    {dl.at("hi")[0].get<double>(), dl.at("hi")[1].get<double>()},
                    {dl.at("counts")[0].get<int>(), dl.at("counts")[1].get<int>()});
  size_t per = static_cast<size_t>(t.lattice.size()) * static_cast<size_t>(t.grid.size());
  t.vals.resize(static_cast<size_t>(t.steps) + 1);
  for (auto& slice : t.vals) {
    slice.resize(per);
    in.read(reinterpret_cast<char*>(slice.data()), static_cast<std::streamsize>(per * sizeof(double)));
    if (!in) throw std::invalid_argument("truncated conjugate payload");
  }
  t.masks = parse_masks(in);
  return t;
}

void write_masks(const std::string& path, const reach::FeasibilitySet& masks, const GameSpec& spec) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write " + path);
  (void)spec;
  append_masks(out, masks);
}

reach::FeasibilitySet read_masks(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return parse_masks(in);
}

// --- trajectories and CSV -------------------------------------------------

void write_trajectories(const std::string& path, const std::vector<sim::TrajectoryRecord>& recs) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  for (const auto& r : recs) {
    json j;
    j["seed"] = r.seed;
    j["type"] = r.type;
    j["p0"] = r.p0;
    j["phat0"] = r.phat0;
    j["resigned"] = r.resigned;
    j["payoff"] = r.payoff;
    j["x_final"] = r.x_final;
    json steps = json::array();
    for (const auto& s : r.steps) {
      json e;
      e["k"] = s.k;
      e["t"] = s.t;
      e["x"] = s.x;
      e["u"] = s.u;
      e["v"] = s.v;
      e["p"] = s.p;
      e["phat"] = s.phat;
      e["flags"] = {{"clip", s.clip}, {"pursuit", s.pursuit}, {"resign", s.resign}};
      steps.push_back(std::move(e));
    }
    j["steps"] = std::move(steps);
    out << j.dump() << "\n";
  }
}

std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_float(row[i]);
    out << "\n";
  }
}

}  // namespace io
}  // namespace osig
