/*******************************************************************************
 * Copyright (c) 2026 The jmeas Authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
// jmeas command-line front end: group, estimate, variance, vqe.
//
// Exit codes: 0 success, 1 unexpected failure, 2 parse error in an input
// file, 3 configuration error (bad flags, unreadable input), 4 runtime limit.

#include "jmeas/experiments.hpp"
#include "jmeas/jmeas.hpp"
#include "jmeas/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using namespace jmeas;

enum ExitCode { Ok = 0, Failure = 1, ParseFailure = 2, ConfigFailure = 3, LimitReached = 4 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Observable load_observable(const std::string &path, const std::string &format) {
  const auto text = read_file(path);
  if (format == "legacy")
    return parse_observable_legacy(text);
  return parse_observable(text);
}

std::vector<Method> parse_methods(const std::vector<std::string> &names) {
  std::vector<Method> out;
  for (const auto &raw : names) {
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item == "all-methods" || item == "all_methods") {
        out.insert(out.end(), all_methods.begin(), all_methods.end());
        continue;
      }
      const auto m = method_from_name(item);
      if (!m)
        throw ConfigError("unknown method '" + item + "'");
      out.push_back(*m);
    }
  }
  return out;
}

std::vector<double> parse_list(const std::string &s, const char *what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    if (!detail::parse_double(detail::trim(item), v))
      throw ConfigError(std::string("malformed ") + what + " '" + s + "'");
    out.push_back(v);
  }
  return out;
}

// --noise p1,p2,p01,p10 where p01 = p(0|1) and p10 = p(1|0).
std::optional<NoiseModel> parse_noise(const std::string &s) {
  if (s.empty())
    return std::nullopt;
  const auto v = parse_list(s, "noise");
  if (v.size() != 4)
    throw ConfigError("--noise expects p1,p2,p01,p10");
  NoiseModel n;
  n.p1 = v[0];
  n.p2 = v[1];
  n.readout.p0_given_1 = v[2];
  n.readout.p1_given_0 = v[3];
  try {
    n.validate();
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
  return n;
}

json noise_json(const std::optional<NoiseModel> &n) {
  if (!n)
    return nullptr;
  return json{{"p1", n->p1},
              {"p2", n->p2},
              {"p01", n->readout.p0_given_1},
              {"p10", n->readout.p1_given_0}};
}

// Named preparation, or a file of `re [im]` amplitude lines.
QuantumState load_state(const std::string &spec, std::size_t width,
                        const std::optional<NoiseModel> &noise,
                        Circuit *prep_out) {
  if (spec == "zeros")
    return StateVector(width);
  if (spec == "singlet") {
    if (width != 2)
      throw ConfigError("the singlet state needs a 2-qubit observable");
    if (prep_out)
      *prep_out = singlet_circuit();
    return apply_circuit(StateVector(2), singlet_circuit(), noise);
  }
  const auto text = read_file(spec);
  std::vector<amplitude> amps;
  detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    std::istringstream ls{std::string(line)};
    double re = 0.0, im = 0.0;
    if (!(ls >> re))
      throw ParseError(line_no, "expected '<re> [<im>]'");
    ls >> im;
    amps.emplace_back(re, im);
  });
  if (amps.size() != (std::size_t{1} << width))
    throw ParseError(0, "state file has " + std::to_string(amps.size()) +
                            " amplitudes, expected " +
                            std::to_string(std::size_t{1} << width));
  StateVector psi(width, std::move(amps));
  psi.normalize();
  return psi;
}

std::uint64_t default_seed() {
  if (const char *env = std::getenv("JMEAS_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception &) {
      throw ConfigError("JMEAS_SEED must be an unsigned integer");
    }
  }
  return 2019;
}

struct Common {
  std::string input;
  std::string format = "native";
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  bool json_out = false;
  bool csv_out = false;
};

void add_common(CLI::App *sub, Common &c, bool needs_input = true) {
  if (needs_input)
    sub->add_option("input", c.input, "Hamiltonian file")->required();
  else
    sub->add_option("input", c.input, "Hamiltonian file (default: Heisenberg)");
  sub->add_option("--format", c.format, "input format")
      ->check(CLI::IsMember({"native", "legacy"}));
  sub->add_option("--seed", c.seed, "random seed (default $JMEAS_SEED or 2019)");
  sub->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
  auto *j = sub->add_flag("--json", c.json_out, "JSON report");
  auto *k = sub->add_flag("--csv", c.csv_out, "CSV output");
  j->excludes(k);
}

json common_json(const Common &c, const char *cmd) {
  return json{{"command", cmd},
              {"input", c.input},
              {"format", c.format},
              {"seed", c.seed},
              {"threads", c.threads}};
}

// ---------------------------------------------------------------------------

struct GroupArgs {
  Common c;
  std::vector<std::string> methods{"all-methods"};
  bool clique = false;
  double time_limit = 3600.0;
  bool verbose = false;
  bool dump_circuits = false;
};

int cmd_group(const GroupArgs &a) {
  const auto obs = load_observable(a.c.input, a.c.format);
  const auto methods = parse_methods(a.methods);
  json cfg = common_json(a.c, "group");
  json names = json::array();
  for (auto m : methods)
    names.push_back(to_string(m));
  cfg["methods"] = names;
  cfg["clique"] = a.clique;
  cfg["time_limit"] = a.time_limit;

  std::vector<GroupingResult> results;
  for (auto m : methods)
    results.push_back(group_observable(obs, m, a.c.threads));
  std::optional<CliqueResult> clique;
  if (a.clique)
    clique = max_clique(build_pauli_graph(obs, GraphMode::TPB, a.c.threads),
                        std::chrono::duration<double>(a.time_limit));

  if (a.c.json_out) {
    json out = report_header(cfg);
    out["qubits"] = obs.num_qubits();
    out["terms"] = obs.size();
    json rs = json::array();
    for (const auto &r : results) {
      auto jr = to_json(r, obs.num_qubits(), a.dump_circuits);
      if (!a.verbose && !a.dump_circuits)
        jr.erase("detail");
      rs.push_back(std::move(jr));
    }
    out["results"] = std::move(rs);
    if (clique)
      out["clique"] = json{{"size", clique->size}, {"exact", clique->exact}};
    std::cout << out.dump(2) << "\n";
  } else if (a.c.csv_out) {
    std::cout << "method,groups\n";
    for (const auto &r : results)
      std::cout << to_string(r.method) << "," << r.size() << "\n";
    if (clique)
      std::cout << "clique" << (clique->exact ? "" : "(bound)") << ","
                << clique->size << "\n";
  } else {
    std::printf("# %zu terms on %zu qubits\n", obs.size(), obs.num_qubits());
    for (const auto &r : results) {
      std::printf("%-12s %zu\n", to_string(r.method).c_str(), r.size());
      if (!a.verbose && !a.dump_circuits)
        continue;
      for (std::size_t k = 0; k < r.groups.size(); ++k) {
        const auto &g = r.groups[k];
        std::printf("  group %zu:", k);
        for (auto i : g.members)
          std::printf(" %s", obs[i].pauli.str().c_str());
        if (g.assignment) {
          std::printf("  [");
          bool first = true;
          for (const auto &p : g.assignment->placements()) {
            if (kind(p.kind).is_tpb() && !a.verbose)
              continue;
            std::printf("%s%s@", first ? "" : " ", kind(p.kind).name.c_str());
            for (std::size_t i = 0; i < p.positions.size(); ++i)
              std::printf("%s%zu", i ? "," : "", p.positions[i]);
            first = false;
          }
          std::printf("]");
        }
        std::printf("\n");
        if (a.dump_circuits && g.assignment) {
          std::istringstream lines(dump(circuit_for(*g.assignment, obs.num_qubits())));
          std::string line;
          while (std::getline(lines, line))
            std::printf("    %s\n", line.c_str());
        }
      }
    }
    if (clique)
      std::printf("%-12s %zu%s\n", "clique", clique->size,
                  clique->exact ? "" : " (time limit reached, lower bound)");
  }
  if (clique && !clique->exact) {
    std::cerr << "jmeas: clique search hit the time limit\n";
    return LimitReached;
  }
  return Ok;
}

// ---------------------------------------------------------------------------

struct EstimateArgs {
  Common c;
  std::string state = "singlet";
  std::vector<std::string> methods;
  std::uint64_t shots = 2000;
  bool uniform = false;
  bool mitigate = false;
  std::string noise;
  std::string sweep;
  std::uint64_t calibration_shots = 8192;
};

int cmd_estimate(const EstimateArgs &a) {
  const auto obs = load_observable(a.c.input, a.c.format);
  auto methods = parse_methods(a.methods);
  const auto noise = parse_noise(a.noise);
  const auto mode = a.uniform ? ShotMode::Uniform : ShotMode::Proportional;
  json cfg = common_json(a.c, "estimate");
  cfg["state"] = a.state;
  cfg["shots"] = a.shots;
  cfg["allocation"] = a.uniform ? "uniform" : "proportional";
  cfg["mitigate"] = a.mitigate;
  cfg["noise"] = noise_json(noise);
  cfg["calibration_shots"] = a.calibration_shots;

  if (!a.sweep.empty()) {
    if (methods.empty())
      methods = {Method::NoGrouping, Method::TPBBell};
    const auto p2s = parse_list(a.sweep, "--sweep-p2");
    Circuit prep(obs.num_qubits());
    if (a.state != "singlet" && a.state != "zeros")
      throw ConfigError("--sweep-p2 needs a named state (singlet or zeros)");
    load_state(a.state, obs.num_qubits(), std::nullopt, &prep);
    cfg["sweep_p2"] = p2s;
    json names = json::array();
    for (auto m : methods)
      names.push_back(to_string(m));
    cfg["methods"] = names;
    const auto rows = noise_sweep(obs, prep, methods, p2s,
                                  noise.value_or(NoiseModel{}), a.shots, a.c.seed,
                                  a.calibration_shots, a.c.threads);
    if (a.c.json_out) {
      json out = report_header(cfg);
      json rs = json::array();
      for (const auto &r : rows)
        rs.push_back(json{{"method", to_string(r.method)},
                          {"p2", r.p2},
                          {"mitigated", r.mitigated},
                          {"value", r.value},
                          {"standard_error", r.standard_error}});
      out["rows"] = std::move(rs);
      std::cout << out.dump(2) << "\n";
    } else if (a.c.csv_out) {
      std::cout << "method,p2,mitigated,value,standard_error\n";
      for (const auto &r : rows)
        std::cout << to_string(r.method) << "," << format_double(r.p2) << ","
                  << (r.mitigated ? 1 : 0) << "," << format_double(r.value)
                  << "," << format_double(r.standard_error) << "\n";
    } else {
      std::printf("%-12s %-7s %-5s %10s %8s\n", "method", "p2", "mit", "value", "se");
      for (const auto &r : rows)
        std::printf("%-12s %-7.4g %-5s %10.4f %8.4f\n", to_string(r.method).c_str(),
                    r.p2, r.mitigated ? "yes" : "no", r.value, r.standard_error);
    }
    return Ok;
  }

  if (methods.empty())
    methods = {Method::TPBBell};
  const auto state = load_state(a.state, obs.num_qubits(), noise, nullptr);
  const double exact = expectation_exact(state, obs);
  json out = report_header(cfg);
  json rs = json::array();
  if (a.c.csv_out)
    std::cout << "method,groups,value,standard_error,exact\n";
  for (auto m : methods) {
    const auto g = group_observable(obs, m, a.c.threads);
    const auto plan = allocate_shots(g, a.shots, mode);
    EstimateOptions opts;
    opts.noise = noise;
    opts.mitigate = a.mitigate;
    opts.calibration_shots = a.calibration_shots;
    opts.seed = a.c.seed;
    opts.threads = a.c.threads;
    const auto rep = estimate(state, obs, g, plan, opts);
    if (a.c.json_out) {
      auto jr = to_json(rep);
      jr["method"] = to_string(m);
      jr["groups"] = g.size();
      jr["exact"] = exact;
      rs.push_back(std::move(jr));
    } else if (a.c.csv_out) {
      std::cout << to_string(m) << "," << g.size() << "," << format_double(rep.value)
                << "," << format_double(rep.standard_error) << ","
                << format_double(exact) << "\n";
    } else {
      std::printf("%-12s groups %-4zu value %10.6f  se %9.6f  (exact %.6f)\n",
                  to_string(m).c_str(), g.size(), rep.value, rep.standard_error, exact);
    }
  }
  if (a.c.json_out) {
    out["results"] = std::move(rs);
    std::cout << out.dump(2) << "\n";
  }
  return Ok;
}

// ---------------------------------------------------------------------------

struct VarianceArgs {
  Common c;
  std::string method = "TPB+Bell";
  std::size_t states = 10000;
  std::uint64_t shots_per_pauli = 500;
  std::size_t bins = 40;
};

int cmd_variance(const VarianceArgs &a) {
  const auto obs = a.c.input.empty() ? parse_observable("1 XX\n1 YY\n1 ZZ")
                                     : load_observable(a.c.input, a.c.format);
  const auto methods = parse_methods({a.method});
  if (methods.size() != 1)
    throw ConfigError("variance takes a single --method");
  if (obs.num_qubits() > 10)
    throw ConfigError("variance experiment limited to 10 qubits");
  const auto g = group_observable(obs, methods[0], a.c.threads);
  const auto exp = variance_experiment(obs, g, a.states, a.shots_per_pauli,
                                       a.c.seed, a.c.threads);
  std::size_t violations = 0;
  double hi = 0.0;
  for (const auto &s : exp.samples) {
    violations += s.grouped > s.ungrouped + 1e-12;
    hi = std::max({hi, s.ungrouped, s.grouped});
  }
  const std::size_t bins = std::max<std::size_t>(1, a.bins);
  const double width = hi > 0 ? hi / static_cast<double>(bins) : 1.0;
  std::vector<std::size_t> h_ng(bins, 0), h_g(bins, 0);
  for (const auto &s : exp.samples) {
    h_ng[std::min(bins - 1, static_cast<std::size_t>(s.ungrouped / width))]++;
    h_g[std::min(bins - 1, static_cast<std::size_t>(s.grouped / width))]++;
  }

  json cfg = common_json(a.c, "variance");
  cfg["method"] = to_string(methods[0]);
  cfg["states"] = a.states;
  cfg["shots_per_pauli"] = a.shots_per_pauli;
  cfg["bins"] = bins;
  if (a.c.json_out) {
    json out = report_header(cfg);
    out["mean_squared_se_ungrouped"] = exp.mean_ungrouped;
    out["mean_squared_se_grouped"] = exp.mean_grouped;
    out["violations"] = violations;
    out["bin_width"] = width;
    out["histogram_ungrouped"] = h_ng;
    out["histogram_grouped"] = h_g;
    std::cout << out.dump(2) << "\n";
  } else if (a.c.csv_out) {
    std::cout << "# mean_squared_se_ungrouped=" << format_double(exp.mean_ungrouped)
              << "\n# mean_squared_se_grouped=" << format_double(exp.mean_grouped)
              << "\nbin_lo,bin_hi,ungrouped,grouped\n";
    for (std::size_t b = 0; b < bins; ++b)
      std::cout << format_double(b * width) << "," << format_double((b + 1) * width)
                << "," << h_ng[b] << "," << h_g[b] << "\n";
  } else {
    std::printf("states                      %zu\n", a.states);
    std::printf("mean squared SE, ungrouped  %.6g\n", exp.mean_ungrouped);
    std::printf("mean squared SE, %-10s %.6g\n", to_string(methods[0]).c_str(),
                exp.mean_grouped);
    std::printf("states with grouped > ungrouped  %zu\n", violations);
  }
  return Ok;
}

// ---------------------------------------------------------------------------

struct VqeArgs {
  Common c;
  std::string method = "TPB+Bell";
  std::size_t iterations = 40;
  std::uint64_t shots = 8192;
  bool proportional = false;
  bool mitigate = false;
  std::string noise;
  double a = 0.0;
  double gain_c = SpsaConfig{}.c;
  std::size_t depth = 1;
  std::size_t recalibration = 10;
};

int cmd_vqe(const VqeArgs &a) {
  const auto obs = load_observable(a.c.input, a.c.format);
  const auto methods = parse_methods({a.method});
  if (methods.size() != 1)
    throw ConfigError("vqe takes a single --method");
  VqeConfig cfg;
  cfg.method = methods[0];
  cfg.ansatz = {obs.num_qubits(), a.depth};
  cfg.shots = a.shots;
  cfg.shot_mode = a.proportional ? ShotMode::Proportional : ShotMode::Uniform;
  cfg.spsa.iterations = a.iterations;
  if (a.a > 0)
    cfg.spsa.a = a.a;
  cfg.spsa.c = a.gain_c;
  cfg.spsa.seed = a.c.seed;
  cfg.spsa.recalibration_interval = a.recalibration;
  cfg.noise = parse_noise(a.noise);
  cfg.mitigate = a.mitigate;
  cfg.threads = a.c.threads;
  if (obs.num_qubits() > (cfg.noise ? max_density_qubits : max_statevector_qubits))
    throw ConfigError("observable too wide for the simulator");
  const auto traj = run_vqe(obs, cfg);

  json jc = common_json(a.c, "vqe");
  jc["method"] = to_string(cfg.method);
  jc["iterations"] = a.iterations;
  jc["shots"] = a.shots;
  jc["allocation"] = a.proportional ? "proportional" : "uniform";
  jc["depth"] = a.depth;
  jc["noise"] = noise_json(cfg.noise);
  jc["mitigate"] = a.mitigate;
  jc["c"] = a.gain_c;
  jc["recalibration_interval"] = a.recalibration;

  if (a.c.json_out) {
    json out = report_header(jc);
    out["groups"] = traj.groups;
    out["gain_a"] = traj.gain_a;
    out["gain_calibration_circuits"] = traj.gain_calibration_circuits;
    json its = json::array();
    for (const auto &it : traj.iterations)
      its.push_back(json{{"iteration", it.iteration},
                         {"circuits", it.circuits},
                         {"energy_plus", it.energy_plus},
                         {"energy_minus", it.energy_minus},
                         {"params", it.params}});
    out["trajectory"] = std::move(its);
    out["final_params"] = traj.final_params;
    out["final_energy"] = traj.final_energy;
    std::cout << out.dump(2) << "\n";
    return Ok;
  }
  // CSV is the default format for trajectories.
  std::cout << "# " << report_header(jc).dump() << "\n";
  std::cout << "iteration,circuits,E+,E-,mean\n";
  for (const auto &it : traj.iterations)
    std::cout << it.iteration << "," << it.circuits << ","
              << format_double(it.energy_plus) << "," << format_double(it.energy_minus)
              << "," << format_double(0.5 * (it.energy_plus + it.energy_minus)) << "\n";
  std::cout << "# final_energy=" << format_double(traj.final_energy) << "\n";
  return Ok;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Joint-measurement planning for Pauli-string observables"};
  app.set_version_flag("--version", std::string(jmeas::version));
  app.require_subcommand(1);

  GroupArgs g;
  auto *group = app.add_subcommand("group", "count and list measurement groups");
  add_common(group, g.c);
  group->add_option("--method", g.methods,
                    "No-grouping, TPB, TPB+Bell, TPB+2Q, ALL or all-methods");
  group->add_flag("--clique", g.clique, "also compute the max-clique bound");
  group->add_option("--time-limit", g.time_limit, "clique search limit (s)")
      ->check(CLI::PositiveNumber);
  group->add_flag("--verbose", g.verbose, "print group members and placements");
  group->add_flag("--dump-circuits", g.dump_circuits, "print measurement circuits");

  EstimateArgs e;
  auto *est = app.add_subcommand("estimate", "sampled expectation value");
  add_common(est, e.c);
  est->add_option("--state", e.state, "singlet, zeros, or amplitude file");
  est->add_option("--method", e.methods, "grouping method(s)");
  est->add_option("--shots", e.shots, "base shots S")->check(CLI::PositiveNumber);
  auto *prop = est->add_flag("--proportional", "S_k = |s_k| S (default)");
  auto *unif = est->add_flag("--uniform", e.uniform, "S_k = S");
  prop->excludes(unif);
  est->add_flag("--mitigate", e.mitigate, "readout error mitigation");
  est->add_option("--noise", e.noise, "p1,p2,p01,p10 with p01=p(0|1), p10=p(1|0)");
  est->add_option("--sweep-p2", e.sweep, "comma list of p2 values");
  est->add_option("--calibration-shots", e.calibration_shots, "shots per basis state")
      ->check(CLI::PositiveNumber);

  VarianceArgs v;
  auto *var = app.add_subcommand("variance", "Haar-ensemble standard errors");
  add_common(var, v.c, false);
  var->add_option("--method", v.method, "grouping method");
  var->add_option("--states", v.states, "number of random states");
  var->add_option("--shots-per-pauli", v.shots_per_pauli, "shots per term")
      ->check(CLI::PositiveNumber);
  var->add_option("--bins", v.bins, "histogram bins")->check(CLI::PositiveNumber);

  VqeArgs q;
  auto *vqe = app.add_subcommand("vqe", "SPSA VQE trajectory as CSV");
  add_common(vqe, q.c);
  vqe->add_option("--method", q.method, "grouping method");
  vqe->add_option("--iterations", q.iterations, "SPSA iterations")
      ->check(CLI::PositiveNumber);
  vqe->add_option("--shots", q.shots, "shots per circuit")->check(CLI::PositiveNumber);
  vqe->add_flag("--proportional", q.proportional, "scale shots by group size");
  vqe->add_flag("--mitigate", q.mitigate, "readout error mitigation");
  vqe->add_option("--noise", q.noise, "p1,p2,p01,p10");
  vqe->add_option("--a", q.a, "SPSA gain a (default: calibrated)");
  vqe->add_option("--c", q.gain_c, "SPSA perturbation c")->check(CLI::PositiveNumber);
  vqe->add_option("--depth", q.depth, "ansatz depth");
  vqe->add_option("--recalibration-interval", q.recalibration,
                  "iterations between readout calibrations")
      ->check(CLI::PositiveNumber);

  try {
    const auto seed = default_seed();
    g.c.seed = e.c.seed = v.c.seed = q.c.seed = seed;
  } catch (const ConfigError &err) {
    std::cerr << "jmeas: " << err.what() << "\n";
    return ConfigFailure;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &err) {
    return app.exit(err);
  } catch (const CLI::CallForVersion &err) {
    return app.exit(err);
  } catch (const CLI::ParseError &err) {
    app.exit(err);
    return ConfigFailure;
  }

  try {
    if (*group)
      return cmd_group(g);
    if (*est)
      return cmd_estimate(e);
    if (*var)
      return cmd_variance(v);
    if (*vqe)
      return cmd_vqe(q);
  } catch (const jmeas::ParseError &err) {
    std::cerr << "jmeas: parse error: " << err.what() << "\n";
    return ParseFailure;
  } catch (const ConfigError &err) {
    std::cerr << "jmeas: " << err.what() << "\n";
    return ConfigFailure;
  } catch (const std::invalid_argument &err) {
    std::cerr << "jmeas: " << err.what() << "\n";
    return ConfigFailure;
  } catch (const std::exception &err) {
    std::cerr << "jmeas: " << err.what() << "\n";
    return Failure;
  }
  return Failure;
}
