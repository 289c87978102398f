// Serial reference vs OpenMP kernels: protocol rounds and sweep cells.
// Results of both paths must agree bit for bit; only wall time differs.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "qpv/kernels.hpp"
#include "qpv/protocol.hpp"
#include "qpv/setup.hpp"
#include "qpv/sweep.hpp"

using namespace qpv;

namespace {

double seconds(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const char* name, double serial, double parallel, bool identical) {
  std::printf("%-32s serial %8.3f s   openmp %8.3f s   speedup %5.2fx   identical %s\n", name, serial, parallel,
              serial / parallel, identical ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv) {
  const std::uint64_t rounds = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 2'000'000;
  const SetupConfig paper = load_config_file("paper_setup");
  const SourceParams source{0.224, 0.542};
  std::printf("threads: %d, protocol rounds: %llu\n", max_threads(), static_cast<unsigned long long>(rounds));

  ProtocolOptions serial_opts, parallel_opts;
  serial_opts.execution = Execution::kSerial;
  parallel_opts.execution = Execution::kParallel;
  VerificationReport a, b;
  const double ts = seconds([&] { a = run_protocol(rounds, source, paper, 1, serial_opts).report; });
  const double tp = seconds([&] { b = run_protocol(rounds, source, paper, 1, parallel_opts).report; });
  row("protocol rounds", ts, tp, a.counts.n == b.counts.n && a.coincidences_perp == b.coincidences_perp);

  SweepSpec exact;
  exact.purity.steps = exact.indistinguishability.steps = 200;
  SweepGrid ge, gp;
  const double es = seconds([&] { ge = run_sweep(exact, paper, Execution::kSerial); });
  const double ep = seconds([&] { gp = run_sweep(exact, paper, Execution::kParallel); });
  row("exact sweep 200x200", es, ep, ge.values == gp.values);

  SweepSpec mc;
  mc.purity.steps = mc.indistinguishability.steps = 20;
  mc.rounds_per_cell = 20'000;
  mc.seed = 5;
  const double ms = seconds([&] { ge = run_sweep(mc, paper, Execution::kSerial); });
  const double mp = seconds([&] { gp = run_sweep(mc, paper, Execution::kParallel); });
  row("Monte Carlo sweep 20x20x2e4", ms, mp, ge.values == gp.values);
  return 0;
}
