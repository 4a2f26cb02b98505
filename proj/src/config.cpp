#include "entwine/config.hpp"

#include <set>
#include <json.hpp>

#include "entwine/errors.hpp"

namespace entwine {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError("config: " + path + ": " + what);
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void reject_unknown(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) fail(path + "." + key, "unknown field");
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::int64_t get_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<std::int64_t>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

PotentialSpec parse_potential(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, path, {"kind", "v0", "periods"});
  PotentialSpec p;
  const std::string kind = j.contains("kind") ? get_string(j["kind"], path + ".kind") : "zero";
  if (kind == "zero")
    p.kind = PotentialSpec::Kind::Zero;
  else if (kind == "cosine")
    p.kind = PotentialSpec::Kind::Cosine;
  else if (kind == "barrier")
    p.kind = PotentialSpec::Kind::Barrier;
  else if (kind == "well")
    p.kind = PotentialSpec::Kind::Well;
  else
    fail(path + ".kind", "unknown potential kind '" + kind + "'");
  if (j.contains("v0")) p.v0 = get_number(j["v0"], path + ".v0");
  if (j.contains("periods")) p.periods = static_cast<int>(get_integer(j["periods"], path + ".periods"));
  return p;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: malformed JSON: ") + e.what());
  }
  require_object(root, "config");
  reject_unknown(root, "config",
                 {"schema", "scaling", "lattice", "potential", "walker", "solver", "evolve",
                  "dispersion", "convergence", "compare", "output"});

  ExperimentConfig cfg;

  if (!root.contains("schema")) fail("schema", "required field missing");
  cfg.schema = static_cast<int>(get_integer(root["schema"], "schema"));
  if (cfg.schema != 1)
    fail("schema", "unsupported version " + std::to_string(cfg.schema) + " (supported: 1)");

  if (!root.contains("scaling")) fail("scaling", "required field missing");
  const json& sc = root["scaling"];
  require_object(sc, "scaling");
  if (!sc.contains("mode")) fail("scaling.mode", "required field missing");
  const std::string mode = get_string(sc["mode"], "scaling.mode");
  bool diffusive;
  if (mode == "diffusive") {
    diffusive = true;
    if (sc.contains("c") || sc.contains("a"))
      fail("scaling", "diffusive mode conflicts with fixed-velocity fields c/a");
    reject_unknown(sc, "scaling", {"mode", "D"});
    if (!sc.contains("D")) fail("scaling.D", "required for diffusive mode");
  } else if (mode == "fixed_velocity") {
    diffusive = false;
    if (sc.contains("D")) fail("scaling", "fixed-velocity mode conflicts with diffusive field D");
    reject_unknown(sc, "scaling", {"mode", "c", "a"});
    if (!sc.contains("c")) fail("scaling.c", "required for fixed_velocity mode");
    if (!sc.contains("a")) fail("scaling.a", "required for fixed_velocity mode");
  } else {
    fail("scaling.mode", "must be 'diffusive' or 'fixed_velocity'");
  }

  if (!root.contains("lattice")) fail("lattice", "required field missing");
  const json& lat = root["lattice"];
  require_object(lat, "lattice");
  reject_unknown(lat, "lattice", {"delta", "epsilon", "n_sites"});
  if (!lat.contains("n_sites")) fail("lattice.n_sites", "required field missing");
  const int n_sites = static_cast<int>(get_integer(lat["n_sites"], "lattice.n_sites"));

  try {
    if (diffusive) {
      if (!lat.contains("delta")) fail("lattice.delta", "required for diffusive scaling");
      if (lat.contains("epsilon"))
        fail("lattice.epsilon", "derived from delta and D under diffusive scaling; remove it");
      auto [spec, scaling] = make_diffusive_spec(get_number(lat["delta"], "lattice.delta"),
                                                 get_number(sc["D"], "scaling.D"), n_sites);
      cfg.lattice = spec;
      cfg.scaling = scaling;
    } else {
      if (!lat.contains("epsilon")) fail("lattice.epsilon", "required for fixed-velocity scaling");
      if (lat.contains("delta"))
        fail("lattice.delta", "derived from c and epsilon under fixed-velocity scaling; remove it");
      auto [spec, scaling] =
          make_fixed_velocity_spec(get_number(lat["epsilon"], "lattice.epsilon"),
                                   get_number(sc["c"], "scaling.c"),
                                   get_number(sc["a"], "scaling.a"), n_sites);
      cfg.lattice = spec;
      cfg.scaling = scaling;
    }
  } catch (const ValidationError&) {
    throw;
  }

  if (root.contains("potential")) cfg.potential = parse_potential(root["potential"], "potential");

  if (root.contains("walker")) {
    const json& w = root["walker"];
    require_object(w, "walker");
    reject_unknown(w, "walker",
                   {"master_seed", "n_walkers", "t_r_steps", "max_steps", "turnaround",
                    "trace_paths"});
    if (w.contains("master_seed"))
      cfg.walker.master_seed = static_cast<std::uint64_t>(get_integer(w["master_seed"], "walker.master_seed"));
    if (w.contains("n_walkers"))
      cfg.walker.n_walkers = static_cast<long>(get_integer(w["n_walkers"], "walker.n_walkers"));
    if (w.contains("t_r_steps")) cfg.walker.t_r_steps = get_integer(w["t_r_steps"], "walker.t_r_steps");
    if (w.contains("max_steps")) cfg.walker.max_steps = get_integer(w["max_steps"], "walker.max_steps");
    if (w.contains("turnaround")) {
      const std::string t = get_string(w["turnaround"], "walker.turnaround");
      if (t == "geq")
        cfg.walker.turnaround_strictly_after = false;
      else if (t == "gt")
        cfg.walker.turnaround_strictly_after = true;
      else
        fail("walker.turnaround", "must be 'geq' or 'gt'");
    }
    if (w.contains("trace_paths"))
      cfg.walker.trace_paths = static_cast<int>(get_integer(w["trace_paths"], "walker.trace_paths"));
    if (cfg.walker.n_walkers < 1) fail("walker.n_walkers", "must be >= 1");
    if (cfg.walker.t_r_steps < 2) fail("walker.t_r_steps", "must be >= 2");
  }

  if (root.contains("solver")) {
    const json& s = root["solver"];
    require_object(s, "solver");
    reject_unknown(s, "solver", {"dt", "n_steps", "sigma0", "k0"});
    if (s.contains("dt")) cfg.solver.dt = get_number(s["dt"], "solver.dt");
    if (s.contains("n_steps")) cfg.solver.n_steps = static_cast<long>(get_integer(s["n_steps"], "solver.n_steps"));
    if (s.contains("sigma0")) cfg.solver.sigma0 = get_number(s["sigma0"], "solver.sigma0");
    if (s.contains("k0")) cfg.solver.k0 = get_number(s["k0"], "solver.k0");
    if (!(cfg.solver.dt > 0.0)) fail("solver.dt", "must be > 0");
    if (!(cfg.solver.sigma0 > 0.0)) fail("solver.sigma0", "must be > 0");
  }

  if (root.contains("evolve")) {
    const json& e = root["evolve"];
    require_object(e, "evolve");
    reject_unknown(e, "evolve", {"n_macro", "n_steps", "emit_every", "initial", "alpha_site"});
    if (e.contains("alpha_site")) {
      const std::string site = get_string(e["alpha_site"], "evolve.alpha_site");
      if (site == "departure")
        cfg.evolve.alpha_at_arrival = false;
      else if (site == "arrival")
        cfg.evolve.alpha_at_arrival = true;
      else
        fail("evolve.alpha_site", "must be 'departure' or 'arrival'");
    }
    if (e.contains("n_macro")) cfg.evolve.n_macro = static_cast<long>(get_integer(e["n_macro"], "evolve.n_macro"));
    if (e.contains("n_steps")) cfg.evolve.n_steps = static_cast<long>(get_integer(e["n_steps"], "evolve.n_steps"));
    if (e.contains("emit_every"))
      cfg.evolve.emit_every = static_cast<long>(get_integer(e["emit_every"], "evolve.emit_every"));
    if (e.contains("initial")) {
      const std::string ini = get_string(e["initial"], "evolve.initial");
      if (ini == "gaussian")
        cfg.evolve.initial = EvolveConfig::Initial::Gaussian;
      else if (ini == "constant")
        cfg.evolve.initial = EvolveConfig::Initial::Constant;
      else if (ini == "point_source")
        cfg.evolve.initial = EvolveConfig::Initial::PointSource;
      else
        fail("evolve.initial", "must be 'gaussian', 'constant' or 'point_source'");
    }
  }

  if (root.contains("dispersion")) {
    const json& d = root["dispersion"];
    require_object(d, "dispersion");
    reject_unknown(d, "dispersion", {"k_values", "c_values"});
    auto read_list = [&](const json& a, const std::string& path) {
      if (!a.is_array() || a.empty()) fail(path, "expected a non-empty array of numbers");
      std::vector<double> out;
      for (std::size_t i = 0; i < a.size(); ++i)
        out.push_back(get_number(a[i], path + "[" + std::to_string(i) + "]"));
      return out;
    };
    if (d.contains("k_values")) cfg.dispersion.k_values = read_list(d["k_values"], "dispersion.k_values");
    if (d.contains("c_values")) cfg.dispersion.c_values = read_list(d["c_values"], "dispersion.c_values");
  }

  if (root.contains("convergence")) {
    const json& c = root["convergence"];
    require_object(c, "convergence");
    reject_unknown(c, "convergence", {"deltas", "t_final", "domain_length"});
    if (c.contains("deltas")) {
      if (!c["deltas"].is_array() || c["deltas"].size() < 2)
        fail("convergence.deltas", "expected an array of >= 2 spacings");
      cfg.convergence.deltas.clear();
      for (std::size_t i = 0; i < c["deltas"].size(); ++i)
        cfg.convergence.deltas.push_back(
            get_number(c["deltas"][i], "convergence.deltas[" + std::to_string(i) + "]"));
    }
    if (c.contains("t_final")) cfg.convergence.t_final = get_number(c["t_final"], "convergence.t_final");
    if (c.contains("domain_length"))
      cfg.convergence.domain_length = get_number(c["domain_length"], "convergence.domain_length");
  }

  if (root.contains("compare")) {
    const json& c = root["compare"];
    require_object(c, "compare");
    reject_unknown(c, "compare", {"mode"});
    if (c.contains("mode")) {
      const std::string m = get_string(c["mode"], "compare.mode");
      if (m == "walk_vs_evolve")
        cfg.compare.mode = CompareConfig::Mode::WalkVsEvolve;
      else if (m == "evolve_vs_pde")
        cfg.compare.mode = CompareConfig::Mode::EvolveVsPde;
      else
        fail("compare.mode", "must be 'walk_vs_evolve' or 'evolve_vs_pde'");
    }
  }

  if (root.contains("output")) {
    const json& o = root["output"];
    require_object(o, "output");
    reject_unknown(o, "output", {"dir", "format"});
    if (o.contains("dir")) cfg.output.dir = get_string(o["dir"], "output.dir");
    if (o.contains("format")) cfg.output.format = get_string(o["format"], "output.format");
    if (cfg.output.format != "csv" && cfg.output.format != "ndjson")
      fail("output.format", "must be 'csv' or 'ndjson'");
  }

  return cfg;
}

std::string echo_config(const ExperimentConfig& cfg) {
  json j;
  j["schema"] = cfg.schema;
  if (const auto* d = std::get_if<Diffusive>(&cfg.scaling)) {
    j["scaling"] = {{"mode", "diffusive"}, {"D", d->D}};
    j["lattice"] = {{"delta", cfg.lattice.delta},
                    {"epsilon", cfg.lattice.epsilon},
                    {"n_sites", cfg.lattice.n_sites}};
  } else {
    const auto& fv = std::get<FixedVelocity>(cfg.scaling);
    j["scaling"] = {{"mode", "fixed_velocity"}, {"c", fv.c}, {"a", fv.a}};
    j["lattice"] = {{"delta", cfg.lattice.delta},
                    {"epsilon", cfg.lattice.epsilon},
                    {"n_sites", cfg.lattice.n_sites}};
  }
  const char* kinds[] = {"zero", "cosine", "barrier", "well"};
  j["potential"] = {{"kind", kinds[static_cast<int>(cfg.potential.kind)]},
                    {"v0", cfg.potential.v0},
                    {"periods", cfg.potential.periods}};
  j["walker"] = {{"master_seed", cfg.walker.master_seed},
                 {"n_walkers", cfg.walker.n_walkers},
                 {"t_r_steps", cfg.walker.t_r_steps},
                 {"max_steps", cfg.walker.max_steps},
                 {"turnaround", cfg.walker.turnaround_strictly_after ? "gt" : "geq"},
                 {"trace_paths", cfg.walker.trace_paths}};
  j["solver"] = {{"dt", cfg.solver.dt},
                 {"n_steps", cfg.solver.n_steps},
                 {"sigma0", cfg.solver.sigma0},
                 {"k0", cfg.solver.k0}};
  const char* initials[] = {"gaussian", "constant", "point_source"};
  nlohmann::json evolve{{"n_macro", cfg.evolve.n_macro},
                        {"n_steps", cfg.evolve.n_steps},
                        {"emit_every", cfg.evolve.emit_every},
                        {"alpha_site", cfg.evolve.alpha_at_arrival ? "arrival" : "departure"}};
  if (cfg.evolve.initial)
    evolve["initial"] = initials[static_cast<int>(*cfg.evolve.initial)];
  j["evolve"] = evolve;
  j["compare"] = {{"mode", cfg.compare.mode == CompareConfig::Mode::WalkVsEvolve
                              ? "walk_vs_evolve"
                              : "evolve_vs_pde"}};
  j["dispersion"] = {{"k_values", cfg.dispersion.k_values}, {"c_values", cfg.dispersion.c_values}};
  j["convergence"] = {{"deltas", cfg.convergence.deltas},
                      {"t_final", cfg.convergence.t_final},
                      {"domain_length", cfg.convergence.domain_length}};
  j["output"] = {{"dir", cfg.output.dir}, {"format", cfg.output.format}};
  return j.dump(2) + "\n";
}

}  // namespace entwine
