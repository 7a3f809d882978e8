// twoflux: front-tracking / vanishing-viscosity harness.
//
// Subcommands:
//   run         evolve one scenario, write profiles + diagnostics + events
//   compare     front tracking vs. the (eps, delta) viscous ladder
//   properties  randomized invariant trials (contraction, comparison, ...)
//   converge    nu-refinement ladder with rate table
//
// Exit codes: 0 pass, 1 invariant violation, 2 config error, 3 numerical abort.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "twoflux/diagnostics.hpp"
#include "twoflux/io.hpp"
#include "twoflux/scenarios.hpp"
#include "twoflux/semigroup.hpp"
#include "twoflux/viscous.hpp"

namespace tf = twoflux;
using nlohmann::json;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

tf::Topology parse_topology(const json& cfg) {
  std::string t = cfg.value("topology", "periodic");
  if (t == "periodic") return tf::Topology::periodic;
  if (t == "line") return tf::Topology::line;
  throw ConfigError("unknown topology: " + t);
}

tf::SmoothFluxPair parse_flux(const json& cfg) {
  if (!cfg.contains("flux")) throw ConfigError("config needs a \"flux\" object");
  const json& fj = cfg.at("flux");
  std::string name = fj.value("name", "");
  std::map<std::string, double> params;
  if (fj.contains("params"))
    for (auto it = fj.at("params").begin(); it != fj.at("params").end(); ++it)
      params[it.key()] = it.value().get<double>();
  std::vector<double> fc, gc;
  if (fj.contains("f_coeffs")) fc = fj.at("f_coeffs").get<std::vector<double>>();
  if (fj.contains("g_coeffs")) gc = fj.at("g_coeffs").get<std::vector<double>>();
  try {
    return tf::make_flux_pair(name, params, fc, gc);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("flux: ") + e.what());
  }
}

tf::Profile parse_initial(const json& cfg, std::uint64_t seed) {
  if (!cfg.contains("initial")) throw ConfigError("config needs an \"initial\" object");
  const json& ij = cfg.at("initial");
  std::string kind = ij.value("kind", "");
  tf::Topology topo = parse_topology(cfg);
  try {
    if (kind == "square_wave")
      return tf::scenarios::square_wave(topo, ij.at("x_lo").get<double>(),
                                        ij.at("x_hi").get<double>(),
                                        ij.at("height").get<double>(), ij.value("base", 0.0));
    if (kind == "staircase")
      return tf::scenarios::staircase(topo, ij.at("n_steps").get<int>(),
                                      ij.at("x_lo").get<double>(), ij.at("x_hi").get<double>(),
                                      ij.at("v_lo").get<double>(), ij.at("v_hi").get<double>());
    if (kind == "random_piecewise") {
      if (!ij.contains("seed") && seed == 0)
        throw ConfigError("random_piecewise requires a seed (config or --seed)");
      std::uint64_t s = ij.value("seed", seed);
      return tf::scenarios::random_piecewise(s, ij.at("n_jumps").get<int>(),
                                             ij.at("amplitude").get<double>(), topo);
    }
    if (kind == "example31")
      return tf::scenarios::example_exponential(ij.value("x_max", 5.0),
                                                ij.value("n_cells_per_side", 200));
    if (kind == "custom") {
      tf::Profile p;
      p.topology = topo;
      p.breakpoints = ij.at("breakpoints").get<std::vector<double>>();
      p.values = ij.at("values").get<std::vector<double>>();
      p.validate();
      return p;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("initial: ") + e.what());
  }
  throw ConfigError("unknown initial kind: " + kind);
}

json load_config(const std::string& path, const std::vector<std::string>& overrides,
                 std::uint64_t seed_flag) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config: " + path);
  json cfg;
  try {
    cfg = json::parse(is);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  for (const std::string& kv : overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects K=V, got: " + kv);
    std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
    std::string ptr = "/" + key;
    for (char& c : ptr)
      if (c == '.') c = '/';
    json parsed;
    try {
      parsed = json::parse(val);
    } catch (...) {
      parsed = val;  // not valid JSON: treat as a string
    }
    cfg[json::json_pointer(ptr)] = parsed;
  }
  if (seed_flag != 0) cfg["seed"] = seed_flag;
  return cfg;
}

void ensure_out_dir(const std::string& out) {
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw ConfigError("cannot create output directory " + out + ": " + ec.message());
}

void write_report(const std::string& out, const std::string& name, const json& body,
                  const std::string& hash) {
  json j = body;
  j["config_hash"] = hash;
  tf::io::write_text_file(out + "/" + name, j.dump(2) + "\n");
}

// ---- run ------------------------------------------------------------

int cmd_run(const json& cfg, const std::string& out) {
  std::string hash = tf::io::config_hash(cfg);
  tf::SmoothFluxPair pair = parse_flux(cfg);
  tf::Profile p = parse_initial(cfg, cfg.value("seed", 0ull));
  int nu = cfg.value("nu", 0);
  if (nu < 1) throw ConfigError("run: nu >= 1 required");
  double T = cfg.value("T", -1.0);
  if (T < 0.0) throw ConfigError("run: T >= 0 required");
  std::vector<double> times = cfg.value("sample_times", std::vector<double>{});

  tf::SemigroupRun r = tf::run(nu, p, pair, T, times);
  tf::DiagnosticsReport rep = tf::check_run(r);

  ensure_out_dir(out);
  tf::io::write_text_file(out + "/initial.csv", tf::io::profile_csv(r.initial, hash));
  tf::io::write_text_file(out + "/final.csv", tf::io::profile_csv(r.final_profile(), hash));
  tf::io::write_text_file(out + "/diagnostics.csv", tf::io::diagnostics_csv(r.diagnostics, hash));
  tf::io::write_text_file(out + "/events.jsonl", tf::io::event_log_jsonl(r.stats));
  json samples = json::array();
  for (std::size_t i = 0; i < r.samples.size(); ++i)
    samples.push_back({{"time", r.sample_times[i]}, {"profile", tf::io::profile_json(r.samples[i])}});
  json verdicts = json::array();
  bool pass = true;
  for (const auto& v : rep.verdicts) {
    verdicts.push_back({{"name", v.name}, {"pass", v.pass}, {"margin", v.margin}});
    pass = pass && v.pass;
  }
  write_report(out, "report.json",
               {{"nu", r.nu},
                {"horizon", r.horizon},
                {"lambda_dagger", r.lambda_dagger},
                {"restarts", r.stats.total_restarts()},
                {"max_front_count", r.stats.max_front_count},
                {"samples", samples},
                {"verdicts", verdicts},
                {"pass", pass}},
               hash);
  std::printf("run: %zu samples, %ld restarts, verdicts %s\n", r.samples.size(),
              r.stats.total_restarts(), pass ? "pass" : "FAIL");
  return pass ? 0 : 1;
}

// ---- compare --------------------------------------------------------

int cmd_compare(const json& cfg, const std::string& out) {
  std::string hash = tf::io::config_hash(cfg);
  tf::SmoothFluxPair pair = parse_flux(cfg);
  tf::Profile p = parse_initial(cfg, cfg.value("seed", 0ull));
  if (p.topology != tf::Topology::periodic)
    throw ConfigError("compare: periodic topology required");
  int nu = cfg.value("nu", 0);
  if (nu < 1) throw ConfigError("compare: nu >= 1 required");
  double T = cfg.value("T", -1.0);
  if (T < 0.0) throw ConfigError("compare: T >= 0 required");
  if (!cfg.contains("viscous")) throw ConfigError("compare: needs a \"viscous\" object");
  const json& vj = cfg.at("viscous");
  int n_cells = vj.value("n_cells", 0);
  if (n_cells < 4) throw ConfigError("compare: viscous.n_cells >= 4 required");
  auto ladder = vj.value("ladder", std::vector<std::vector<double>>{});
  if (ladder.empty()) throw ConfigError("compare: viscous.ladder must be non-empty");

  tf::SemigroupRun r = tf::run(nu, p, pair, T, {});
  const tf::Profile& target = r.final_profile();

  ensure_out_dir(out);
  json rungs = json::array();
  std::vector<double> dists;
  std::string csv = tf::io::csv_header(hash, "eps,delta,n_cells,l1_distance");
  for (const auto& rung : ladder) {
    if (rung.size() != 2) throw ConfigError("compare: each ladder rung is [eps, delta]");
    double eps = rung[0], delta = rung[1];
    tf::ViscousField fld(n_cells, r.initial, pair, eps, delta);
    fld.solve_to(T, {});
    double d = tf::l1_distance(fld, target);
    dists.push_back(d);
    rungs.push_back({{"eps", eps}, {"delta", delta}, {"n_cells", n_cells}, {"distance", d}});
    csv += tf::io::format_double(eps) + "," + tf::io::format_double(delta) + "," +
           std::to_string(n_cells) + "," + tf::io::format_double(d) + "\n";
    char fname[64];
    std::snprintf(fname, sizeof(fname), "field_%g_%g.csv", eps, delta);
    tf::io::write_text_file(out + "/" + fname, tf::io::field_csv(fld, hash));
  }
  tf::io::write_text_file(out + "/compare.csv", csv);

  bool monotone = true;
  for (std::size_t k = 0; k + 1 < dists.size(); ++k) monotone = monotone && dists[k + 1] < dists[k];
  std::string verdict =
      dists.size() < 2 ? "single_rung" : (monotone ? "converging" : "not_converged");
  write_report(out, "compare.json",
               {{"nu", nu}, {"rungs", rungs}, {"verdict", verdict}}, hash);
  std::printf("compare: %zu rungs, verdict %s\n", dists.size(), verdict.c_str());
  return 0;  // "not converged" is a finding, not an error
}

// ---- properties -------------------------------------------------------

int cmd_properties(const json& cfg, const std::string& out) {
  std::string hash = tf::io::config_hash(cfg);
  tf::SmoothFluxPair pair = parse_flux(cfg);
  int nu = cfg.value("nu", 6);
  double T = cfg.value("T", 0.5);
  int trials = cfg.value("trials", 0);
  std::uint64_t seed = cfg.value("seed", 0ull);
  int n_jumps = cfg.value("n_jumps", 10);
  double amplitude = cfg.value("amplitude", 1.0);
  tf::TrackerOptions opt;
  opt.debug_flip_first_speed = cfg.value("debug_flip_first_speed", false);

  ensure_out_dir(out);
  if (trials == 0) {
    write_report(out, "properties.json", {{"trials", 0}, {"pass", true}}, hash);
    std::printf("properties: 0 trials, vacuous pass (warning)\n");
    return 0;
  }
  if (seed == 0) throw ConfigError("properties: a nonzero seed is required");

  std::vector<double> times;
  for (int k = 1; k <= 8; ++k) times.push_back(T * double(k) / 8.0);

  double worst_contraction = std::numeric_limits<double>::infinity();
  double worst_tv = std::numeric_limits<double>::infinity();
  double worst_linf = std::numeric_limits<double>::infinity();
  double worst_mass = std::numeric_limits<double>::infinity();
  bool comparison_ok = true, pass = true;
  json failures = json::array();

  for (int t = 0; t < trials; ++t) {
    std::uint64_t s = seed + 2 * std::uint64_t(t);
    tf::Profile u0 = tf::scenarios::random_piecewise(s, n_jumps, amplitude);
    tf::Profile v0 = tf::scenarios::random_piecewise(s + 1, n_jumps, amplitude);
    try {
      tf::SemigroupRun ru = tf::run(nu, u0, pair, T, times, opt);
      tf::SemigroupRun rv = tf::run(nu, v0, pair, T, times, opt);
      double d0 = tf::l1_distance(ru.initial, rv.initial);
      for (std::size_t i = 0; i < ru.samples.size(); ++i) {
        double m = d0 + 1e-8 - tf::l1_distance(ru.samples[i], rv.samples[i]);
        worst_contraction = std::min(worst_contraction, m);
        if (m < 0.0) pass = false;
      }
      // comparison principle on an ordered pair: v0 = u0 + nonnegative bump
      tf::Profile w0 = ru.initial;
      for (double& v : w0.values) v += std::ldexp(1.0, -nu);  // stays on the grid
      tf::SemigroupRun rw = tf::run(nu, w0, pair, T, times, opt);
      for (std::size_t i = 0; i < ru.samples.size(); ++i)
        if (!tf::profile_le(ru.samples[i], rw.samples[i], 1e-10, 1e-12)) {
          comparison_ok = false;
          pass = false;
        }
      // TV / Linf monotonicity and conservation along ru
      double m0 = ru.initial.mass();
      for (const auto& d : ru.diagnostics) {
        worst_tv = std::min(worst_tv, ru.initial.total_variation() - d.tv + 1e-10);
        worst_linf = std::min(worst_linf, ru.initial.linf() - d.linf + 1e-10);
      }
      for (const auto& snap : ru.samples)
        worst_mass = std::min(worst_mass, 1e-10 - std::abs(snap.mass() - m0));
      if (worst_tv < 0.0 || worst_linf < 0.0 || worst_mass < 0.0) pass = false;
    } catch (const std::exception& e) {
      pass = false;
      failures.push_back({{"trial", t}, {"error", e.what()}});
    }
  }

  write_report(out, "properties.json",
               {{"trials", trials},
                {"worst_contraction_margin", worst_contraction},
                {"worst_tv_margin", worst_tv},
                {"worst_linf_margin", worst_linf},
                {"worst_mass_margin", worst_mass},
                {"comparison_ok", comparison_ok},
                {"failures", failures},
                {"pass", pass}},
               hash);
  std::printf("properties: %d trials, contraction margin %.3e, %s\n", trials, worst_contraction,
              pass ? "pass" : "FAIL");
  return pass ? 0 : 1;
}

// ---- converge ---------------------------------------------------------

int cmd_converge(const json& cfg, const std::string& out) {
  std::string hash = tf::io::config_hash(cfg);
  tf::SmoothFluxPair pair = parse_flux(cfg);
  tf::Profile p = parse_initial(cfg, cfg.value("seed", 0ull));
  double T = cfg.value("T", -1.0);
  if (T < 0.0) throw ConfigError("converge: T >= 0 required");
  std::vector<int> nus = cfg.value("nus", std::vector<int>{});
  if (nus.empty()) throw ConfigError("converge: needs a \"nus\" array");

  ensure_out_dir(out);
  if (nus.size() == 1) {
    tf::SemigroupRun r = tf::run(nus[0], p, pair, T, {});
    std::string csv = tf::io::csv_header(hash, "nu,distance,ratio,apriori_bound,flux_gap_estimate");
    csv += std::to_string(nus[0]) + ",0,,0,0\n";
    tf::io::write_text_file(out + "/ladder.csv", csv);
    write_report(out, "converge.json", {{"nus", nus}, {"single", true}}, hash);
    std::printf("converge: single nu=%d, nothing to compare\n", nus[0]);
    return 0;
  }
  tf::LadderReport rep = tf::nu_ladder(p, pair, T, nus);
  tf::io::write_text_file(out + "/ladder.csv", tf::io::ladder_csv(rep, hash));
  json entries = json::array();
  for (const auto& e : rep.entries)
    entries.push_back({{"nu", e.nu},
                       {"distance", e.distance},
                       {"apriori_bound", e.apriori_bound},
                       {"flux_gap_estimate", e.flux_gap_estimate}});
  write_report(out, "converge.json",
               {{"nu_max", rep.nu_max}, {"entries", entries}, {"ratios", rep.ratios}}, hash);
  for (const auto& e : rep.entries)
    std::printf("converge: nu=%2d  d=%.6e  bound=%.3e\n", e.nu, e.distance, e.apriori_bound);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-flux front tracking / vanishing viscosity harness"};
  app.require_subcommand(1);
  app.fallthrough();  // allow global flags after the subcommand name

  std::string config_path, out_dir = "out";
  std::uint64_t seed = 0;
  int jobs = 1;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "scenario config (JSON)")->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "seed override (nonzero)");
  app.add_option("--set", overrides, "config override K=V (dots select nested keys)");
  app.add_option("--jobs", jobs, "worker count (currently advisory)");

  auto* c_run = app.add_subcommand("run", "evolve one scenario");
  auto* c_cmp = app.add_subcommand("compare", "front tracking vs viscous ladder");
  auto* c_prp = app.add_subcommand("properties", "randomized invariant trials");
  auto* c_cnv = app.add_subcommand("converge", "nu-refinement study");

  CLI11_PARSE(app, argc, argv);

  try {
    json cfg = load_config(config_path, overrides, seed);
    if (c_run->parsed()) return cmd_run(cfg, out_dir);
    if (c_cmp->parsed()) return cmd_compare(cfg, out_dir);
    if (c_prp->parsed()) return cmd_properties(cfg, out_dir);
    if (c_cnv->parsed()) return cmd_converge(cfg, out_dir);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical abort: %s\n", e.what());
    return 3;
  }
  return 2;
}
