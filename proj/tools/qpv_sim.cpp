// qpv_sim: simulations, parameter sweeps, estimator chain and attack
// evaluation for the loss-tolerant SWAP position-verification protocol.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qpv/adversary.hpp"
#include "qpv/counts.hpp"
#include "qpv/kernels.hpp"
#include "qpv/protocol.hpp"
#include "qpv/report_io.hpp"
#include "qpv/setup.hpp"
#include "qpv/source.hpp"
#include "qpv/sweep.hpp"

namespace fs = std::filesystem;
using namespace qpv;

namespace {

/// Round counts are given like "1e7" or "250000".
std::uint64_t parse_count(const std::string& text) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !(v >= 1) || v != std::floor(v) || v > 1e15) {
    throw ConfigError("n", "expected a positive whole number of rounds, got '" + text + "'");
  }
  return static_cast<std::uint64_t>(v);
}

std::vector<Basis> parse_bases(const std::string& text) {
  if (text == "1" || text == "2" || text == "3") {
    const auto k = static_cast<std::size_t>(text[0] - '0');
    return {kAllBases.begin(), kAllBases.begin() + static_cast<std::ptrdiff_t>(k)};
  }
  std::vector<Basis> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(basis_from_string(item));
  if (out.empty()) throw ConfigError("bases", "enabled basis set is empty");
  return out;
}

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  return f;
}

void print_row(const char* label, double theory, double model, std::optional<Estimate> sim) {
  std::printf("  %-20s %10.4f %10.4f", label, theory, model);
  if (sim) std::printf("   %8.4f +/- %.4f", sim->value, binomial_sigma(sim->value, sim->trials));
  std::printf("\n");
}

double conditional(const AnswerDistribution& d, ProverAnswer a) {
  const double c = d[0] + d[1];
  return c > 0 ? d[static_cast<std::size_t>(a)] / c : 0.0;
}

// ------------------------------------------------------------ simulate

struct SimulateArgs {
  std::string config = "paper_setup";
  std::string n = "1e6";
  std::optional<std::uint64_t> seed;
  bool ideal_source = false;
  bool ideal_setup = false;
  bool exact = false;
  std::string bases = "1";
  std::string output;
  bool no_transcript = false;
  std::string pair_model;
  int threads = 0;
  bool serial = false;
};

int cmd_simulate(const SimulateArgs& a) {
  SetupConfig setup = a.ideal_setup ? SetupConfig::ideal() : load_config_file(a.config);
  if (!a.pair_model.empty()) setup.source.pair_model = pair_overlap_model_from_string(a.pair_model);
  SourceParams source = setup.source;
  if (a.ideal_source) source = SourceParams{0.0, 1.0, 1.0, source.pair_model};
  source.validate();
  setup.validate();

  const auto th_par = theoretical_distribution(Parity::kParallel);
  const auto th_perp = theoretical_distribution(Parity::kOrthogonal);
  const auto md_par = honest_answer_distribution(source, setup, Parity::kParallel);
  const auto md_perp = honest_answer_distribution(source, setup, Parity::kOrthogonal);

  std::optional<VerificationReport> sim;
  std::optional<Verdict> verdict;
  if (!a.exact) {
    if (!a.seed) throw ConfigError("seed", "--seed is required for Monte Carlo runs (or pass --exact)");
    const auto n = parse_count(a.n);
    set_threads(a.threads);
    ProtocolOptions opt;
    opt.enabled_bases = parse_bases(a.bases);
    opt.execution = a.serial ? Execution::kSerial : Execution::kParallel;

    std::ofstream transcript;
    if (!a.output.empty() && !a.no_transcript) {
      transcript = open_out(fs::path(a.output) / "transcript.csv");
      write_transcript_header(transcript);
      opt.sink = [&](std::span<const TranscriptEntry> block) { write_transcript_rows(transcript, block); };
    }
    const auto run = run_protocol(n, source, setup, *a.seed, opt);
    sim = run.report;
    verdict = verify(*sim, VerifyPolicy::calibrated(source, setup));
  }

  std::printf("source: g2=%.4f M=%.4f (%s pair model)%s\n", source.g2, source.indistinguishability,
              std::string(to_string(source.pair_model)).c_str(), a.ideal_setup ? ", ideal setup" : "");
  std::printf("  %-20s %10s %10s%s\n", "probability", "Theory", "Model", sim ? "   Simulated" : "");
  auto est = [&](auto member) -> std::optional<Estimate> {
    if (!sim) return std::nullopt;
    return (*sim).*member;
  };
  print_row("P(inc|orth)", th_perp[2], md_perp[2], est(&VerificationReport::inconclusive_perp));
  print_row("P(inc|par)", th_par[2], md_par[2], est(&VerificationReport::inconclusive_parallel));
  std::optional<Estimate> p0perp;
  if (sim) {
    const auto k = sim->counts.count(Parity::kOrthogonal, ProverAnswer::kZero);
    p0perp = wilson_interval(k, sim->counts.conclusive(Parity::kOrthogonal));
  }
  print_row("P(0|orth,concl.)", conditional(th_perp, ProverAnswer::kZero),
            conditional(md_perp, ProverAnswer::kZero), p0perp);
  print_row("P(1|orth,concl.)", conditional(th_perp, ProverAnswer::kOne),
            conditional(md_perp, ProverAnswer::kOne), est(&VerificationReport::p1_perp_conclusive));
  print_row("P(0|par,concl.)", conditional(th_par, ProverAnswer::kZero),
            conditional(md_par, ProverAnswer::kZero), est(&VerificationReport::p0_parallel_conclusive));
  if (sim) {
    std::printf("rounds: %llu  pooled correctness: %.4f  secure against LOCC: %s  verdict: %s\n",
                static_cast<unsigned long long>(sim->rounds), sim->pooled_correctness.value,
                sim->secure_against_locc ? "yes" : "no", std::string(to_string(verdict->outcome)).c_str());
    for (const auto& r : verdict->reasons) std::printf("  - %s\n", r.c_str());
  }

  if (!a.output.empty()) {
    const fs::path dir(a.output);
    Json j;
    j["source"] = Json{{"g2", source.g2}, {"indistinguishability", source.indistinguishability},
                       {"pair_overlap_model", std::string(to_string(source.pair_model))}};
    j["model"] = Json{{"parallel", md_par}, {"orthogonal", md_perp}};
    if (sim) {
      j["simulation"] = to_json(*sim, &*verdict);
      for (auto [name, table] : {std::pair{"parallel", &sim->coincidences_parallel},
                                 std::pair{"orthogonal", &sim->coincidences_perp}}) {
        auto cc = open_out(dir / (std::string("coincidences_") + name + ".csv"));
        write_coincidences_csv(cc, *table);
        auto sc = open_out(dir / (std::string("singles_") + name + ".csv"));
        write_singles_csv(sc, *table);
      }
    }
    open_out(dir / "report.json") << j.dump(2) << '\n';
  }
  return 0;
}

// ------------------------------------------------------------ sweep

struct SweepArgs {
  std::string config = "paper_setup";
  SweepSpec spec;
  std::optional<std::string> mc_rounds;
  std::optional<std::uint64_t> seed;
  std::string output = "sweep.csv";
  std::string contour_output;
  int threads = 0;
  bool serial = false;
};

int cmd_sweep(SweepArgs a) {
  const SetupConfig setup = load_config_file(a.config);
  if (a.mc_rounds) a.spec.rounds_per_cell = parse_count(*a.mc_rounds);
  a.spec.seed = a.seed;
  set_threads(a.threads);
  const auto grid = run_sweep(a.spec, setup, a.serial ? Execution::kSerial : Execution::kParallel);
  const auto line = contour(grid);

  const fs::path out(a.output);
  fs::path contour_path = a.contour_output;
  if (contour_path.empty()) {
    contour_path = out.parent_path() / (out.stem().string() + "_contour.csv");
  }
  auto csv = open_out(out);
  write_sweep_csv(csv, grid);
  auto ccsv = open_out(contour_path);
  write_contour_csv(ccsv, line);

  std::printf("%zu x %zu cells (%s) -> %s, %s\n", a.spec.purity.steps, a.spec.indistinguishability.steps,
              a.spec.exact() ? "exact" : "Monte Carlo", out.string().c_str(), contour_path.string().c_str());
  std::printf("  %8s %12s\n", "purity", "M at 2/3");
  for (std::size_t i = 0; i < line.size(); i += std::max<std::size_t>(1, line.size() / 10)) {
    if (line[i].threshold) {
      std::printf("  %8.4f %12.4f\n", line[i].purity, *line[i].threshold);
    } else {
      std::printf("  %8.4f %12s\n", line[i].purity, "none");
    }
  }
  return 0;
}

// ------------------------------------------------------------ estimate

struct EstimateArgs {
  double g_par = 0, g_perp = 0, g2 = 0;
  double s_par = 0, s_perp = 0, s_g2 = 0;
};

int cmd_estimate(const EstimateArgs& a) {
  const HomMeasurement m{{a.g_par, a.s_par}, {a.g_perp, a.s_perp}};
  if (a.g2 < 0 || a.g2 > 0.5) throw DomainError("g2 must lie in [0, 1/2]");
  const Measured v = hom_visibility(m);
  const Measured ind = indistinguishability_from_visibility(v, {a.g2, a.s_g2});
  std::printf("V_HOM = %.4f +/- %.4f\n", v.value, v.sigma);
  std::printf("M     = %.4f +/- %.4f\n", ind.value, ind.sigma);
  return 0;
}

// ------------------------------------------------------------ attack

struct AttackArgs {
  std::string strategy = "intercept3";
  std::string config = "ideal_setup";
  std::string bases = "3";
  std::string n = "1e6";
  std::optional<std::uint64_t> seed;
  std::string output;
  int threads = 0;
  bool serial = false;
  bool list = false;
};

int cmd_attack(const AttackArgs& a) {
  if (a.list) {
    for (const auto& s : strategy_library()) std::printf("%-18s %s\n", s.name.c_str(), s.summary.c_str());
    return 0;
  }
  const auto& strategy = find_strategy(a.strategy);
  if (!a.seed) throw ConfigError("seed", "--seed is required for attack simulations");
  AttackConfig cfg;
  cfg.setup = load_config_file(a.config);
  cfg.source = cfg.setup.source;
  cfg.enabled_bases = parse_bases(a.bases);
  cfg.master_seed = *a.seed;
  cfg.execution = a.serial ? Execution::kSerial : Execution::kParallel;
  set_threads(a.threads);
  const auto rep = evaluate_attack(strategy, parse_count(a.n), cfg);

  std::printf("strategy %s, %zu basis/bases, %llu rounds\n", rep.strategy.c_str(), rep.enabled_bases,
              static_cast<unsigned long long>(rep.rounds));
  std::printf("  success               %.4f  [%.4f, %.4f]  (LOCC bound %.4f)\n", rep.success.value,
              rep.success.lower, rep.success.upper, rep.analytic_bound);
  std::printf("  conclusive success    %.4f\n", rep.conclusive_success.value);
  std::printf("  P(0|par,concl.)       %.4f\n", rep.observed.p0_parallel_conclusive.value);
  std::printf("  P(1|orth,concl.)      %.4f\n", rep.observed.p1_perp_conclusive.value);
  std::printf("  P(inc|par), P(inc|orth) %.4f, %.4f\n", rep.observed.inconclusive_parallel.value,
              rep.observed.inconclusive_perp.value);
  std::printf("  timing feasible       %s\n", rep.timing_feasible ? "yes" : "no");
  std::printf("verdict: %s\n", std::string(to_string(rep.verdict.outcome)).c_str());
  for (const auto& r : rep.verdict.reasons) std::printf("  - %s\n", r.c_str());
  if (!a.output.empty()) open_out(a.output) << to_json(rep).dump(2) << '\n';
  return 0;
}

// ------------------------------------------------------------ validate-config

int cmd_validate(const std::string& path, bool canonical) {
  const SetupConfig c = load_config_file(path);
  if (canonical) {
    std::cout << serialize(c);
  } else {
    std::printf("ok: composed arm transmissions V0=%.4f V1=%.4f\n", c.arm_transmission(Arm::kV0),
                c.arm_transmission(Arm::kV1));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for loss-tolerant SWAP quantum position verification"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Honest-prover simulation with exact model values");
  s->add_option("--config", sim.config, "Config file or bundled name")->capture_default_str();
  s->add_option("--n", sim.n, "Rounds, e.g. 1e7")->capture_default_str();
  s->add_option("--seed", sim.seed, "Master seed (required unless --exact)");
  s->add_flag("--ideal-source", sim.ideal_source, "Replace the source by an ideal one");
  s->add_flag("--ideal-setup", sim.ideal_setup, "Use a lossless balanced network");
  s->add_flag("--exact", sim.exact, "Exact model only, no sampling");
  s->add_option("--bases", sim.bases, "1, 2, 3 or a list like HV,DA")->capture_default_str();
  s->add_option("--output", sim.output, "Output directory");
  s->add_flag("--no-transcript", sim.no_transcript, "Skip transcript.csv");
  s->add_option("--pair-model", sim.pair_model, "visibility or wavefunction");
  s->add_option("--threads", sim.threads, "OpenMP threads (0: runtime default)");
  s->add_flag("--serial", sim.serial, "Use the serial reference kernel");

  SweepArgs sw;
  auto* w = app.add_subcommand("sweep", "P(0|par,concl.) over purity x indistinguishability");
  w->add_option("--config", sw.config)->capture_default_str();
  w->add_option("--purity-min", sw.spec.purity.min)->capture_default_str();
  w->add_option("--purity-max", sw.spec.purity.max)->capture_default_str();
  w->add_option("--purity-steps", sw.spec.purity.steps)->capture_default_str();
  w->add_option("--m-min", sw.spec.indistinguishability.min)->capture_default_str();
  w->add_option("--m-max", sw.spec.indistinguishability.max)->capture_default_str();
  w->add_option("--m-steps", sw.spec.indistinguishability.steps)->capture_default_str();
  w->add_option("--monte-carlo", sw.mc_rounds, "Rounds per cell (default: exact cells)");
  w->add_option("--seed", sw.seed, "Master seed (required with --monte-carlo)");
  w->add_option("--output", sw.output, "Grid CSV")->capture_default_str();
  w->add_option("--contour", sw.contour_output, "Contour CSV (default: <output>_contour.csv)");
  w->add_option("--threads", sw.threads);
  w->add_flag("--serial", sw.serial);

  EstimateArgs est;
  auto* e = app.add_subcommand("estimate", "HOM visibility and indistinguishability from g2 values");
  e->add_option("g2_parallel", est.g_par)->required();
  e->add_option("g2_perp", est.g_perp)->required();
  e->add_option("g2_hbt", est.g2)->required();
  e->add_option("--sigma-parallel", est.s_par);
  e->add_option("--sigma-perp", est.s_perp);
  e->add_option("--sigma-hbt", est.s_g2);

  AttackArgs att;
  auto* t = app.add_subcommand("attack", "Evaluate an LOCC intercept strategy");
  t->add_option("--strategy", att.strategy)->capture_default_str();
  t->add_option("--config", att.config)->capture_default_str();
  t->add_option("--bases", att.bases)->capture_default_str();
  t->add_option("--n", att.n)->capture_default_str();
  t->add_option("--seed", att.seed, "Master seed (required)");
  t->add_option("--output", att.output, "Attack report JSON");
  t->add_option("--threads", att.threads);
  t->add_flag("--serial", att.serial);
  t->add_flag("--list-strategies", att.list);

  std::string vpath;
  bool canonical = false;
  auto* v = app.add_subcommand("validate-config", "Check a configuration");
  v->add_option("config", vpath, "File or bundled name")->required();
  v->add_flag("--canonical", canonical, "Print the canonical document");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err);
  }

  try {
    if (*s) return cmd_simulate(sim);
    if (*w) return cmd_sweep(sw);
    if (*e) return cmd_estimate(est);
    if (*t) return cmd_attack(att);
    if (*v) return cmd_validate(vpath, canonical);
  } catch (const std::exception& ex) {
    std::fflush(stdout);
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}
