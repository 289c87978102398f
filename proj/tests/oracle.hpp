#pragma once

// Independent reference implementations used only by tests: bisection for
// the multi-photon probability, a two-mode Fock-space creation-operator
// calculation for the first beamsplitter, and a brute-force enumeration of
// every photon fate through the network.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "qpv/optics.hpp"

namespace oracle {

/// Root of 2p/(1+p)^2 = g2 on [0, 1] by bisection.
inline double p2_bisection(double g2) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f = 2.0 * mid / ((1.0 + mid) * (1.0 + mid)) - g2;
    (f < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Two-mode Fock state {(n_upper, n_lower) -> amplitude}.
using Fock = std::map<std::pair<int, int>, std::complex<double>>;

/// Applies the creation operator of input `in` (0 or 1) through the
/// beamsplitter b_in^dag = sum_out U[out][in] a_out^dag.
inline Fock create(const Fock& s, int in, double t) {
  const double r = 1.0 - t;
  const double u[2][2] = {{std::sqrt(t), std::sqrt(r)}, {std::sqrt(r), -std::sqrt(t)}};
  Fock out;
  for (const auto& [n, amp] : s) {
    out[{n.first + 1, n.second}] += amp * u[0][in] * std::sqrt(n.first + 1.0);
    out[{n.first, n.second + 1}] += amp * u[1][in] * std::sqrt(n.second + 1.0);
  }
  return out;
}

/// {both upper, both lower, split} for one photon in each input with mode
/// overlap `w` (mixture of identical and orthogonal internal modes).
inline std::array<double, 3> fock_two_photon(double t, double w) {
  const Fock vac{{{0, 0}, 1.0}};
  const Fock same = create(create(vac, 0, t), 1, t);
  std::array<double, 3> ident{std::norm(same.at({2, 0})), std::norm(same.at({0, 2})),
                              std::norm(same.at({1, 1}))};
  // Orthogonal internal modes: each photon evolves in its own Fock space.
  const Fock a = create(vac, 0, t);
  const Fock b = create(vac, 1, t);
  const double au = std::norm(a.at({1, 0})), al = std::norm(a.at({0, 1}));
  const double bu = std::norm(b.at({1, 0})), bl = std::norm(b.at({0, 1}));
  const std::array<double, 3> dist{au * bu, al * bl, au * bl + al * bu};
  return {w * ident[0] + (1 - w) * dist[0], w * ident[1] + (1 - w) * dist[1],
          w * ident[2] + (1 - w) * dist[2]};
}

using Dist = std::array<double, 16>;

/// Brute-force pattern distribution for the engine's physical model.
inline Dist enumerate(const qpv::SourceParams& src, const qpv::NetworkModel& net, double pol_overlap) {
  const double p2 = p2_bisection(src.g2);
  const double w = (src.pair_model == qpv::PairOverlapModel::kVisibility
                        ? src.indistinguishability / (1.0 + 2.0 * src.g2)
                        : src.indistinguishability) *
                   pol_overlap;
  const double t1 = net.bs1.split_ratio_upper;

  // Where a photon leaving BS1 through `port` ends up: detector bit or -1 (lost).
  auto fates = [&](int port) {
    const auto& bs = port == 0 ? net.bs2 : net.bs3;
    const int d0 = port == 0 ? 0 : 2;
    const int d1 = d0 + 1;
    const double a = net.bs1.excess_transmission * bs.excess_transmission;
    const double p0 = bs.split_ratio_upper * a * net.detectors[d0].efficiency;
    const double p1 = (1 - bs.split_ratio_upper) * a * net.detectors[d1].efficiency;
    return std::vector<std::pair<int, double>>{{d0, p0}, {d1, p1}, {-1, 1 - p0 - p1}};
  };

  Dist out{};
  // Ports occupied after BS1 (0 upper, 1 lower) with the world's probability.
  std::function<void(std::vector<int>, double)> downstream = [&](std::vector<int> ports, double pw) {
    // Enumerate each photon's fate, then dark clicks.
    std::function<void(std::size_t, int, double)> rec = [&](std::size_t i, int bits, double p) {
      if (p == 0) return;
      if (i == ports.size()) {
        for (int dark = 0; dark < 16; ++dark) {
          double q = 1;
          for (int d = 0; d < 4; ++d) {
            const double pd = net.detectors[d].dark_click_probability;
            q *= (dark >> d & 1) ? pd : 1 - pd;
          }
          out[static_cast<std::size_t>(bits | dark)] += p * q;
        }
        return;
      }
      for (auto [det, pf] : fates(ports[i])) rec(i + 1, det < 0 ? bits : bits | (1 << det), p * pf);
    };
    rec(0, 0, pw);
  };

  const double arm[2] = {net.arm_transmission[0], net.arm_transmission[1]};
  const double up[2] = {t1, 1 - t1};
  for (int n0 = 0; n0 < 2; ++n0) {
    for (int n1 = 0; n1 < 2; ++n1) {
      const double pm = (n0 ? p2 : 1 - p2) * (n1 ? p2 : 1 - p2);
      // Survival of signal0, signal1, noise0, noise1.
      for (int mask = 0; mask < 16; ++mask) {
        const bool present[4] = {true, true, n0 == 1, n1 == 1};
        const int origin[4] = {0, 1, 0, 1};
        double ps = pm;
        bool skip = false;
        for (int k = 0; k < 4; ++k) {
          const bool alive = mask >> k & 1;
          if (!present[k]) {
            if (alive) skip = true;
            continue;
          }
          ps *= alive ? arm[origin[k]] : 1 - arm[origin[k]];
        }
        if (skip || ps == 0) continue;
        // Port assignments: signal pair jointly, everything else singly.
        std::vector<std::pair<std::vector<int>, double>> worlds{{{}, ps}};
        if ((mask & 3) == 3) {
          const auto f = fock_two_photon(t1, w);
          worlds = {{{0, 0}, ps * f[0]}, {{1, 1}, ps * f[1]}, {{0, 1}, ps * f[2]}};
        }
        for (int k = 0; k < 4; ++k) {
          if (!(mask >> k & 1) || ((mask & 3) == 3 && k < 2)) continue;
          std::vector<std::pair<std::vector<int>, double>> next;
          for (auto& [ports, p] : worlds) {
            for (int port = 0; port < 2; ++port) {
              auto q = ports;
              q.push_back(port);
              next.push_back({q, p * (port == 0 ? up[origin[k]] : 1 - up[origin[k]])});
            }
          }
          worlds = std::move(next);
        }
        for (auto& [ports, p] : worlds) downstream(ports, p);
      }
    }
  }
  return out;
}

}  // namespace oracle
