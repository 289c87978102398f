#include "qpv/counts.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace qpv {

std::size_t pair_index(Detector i, Detector j) {
  if (i == j) throw PreconditionError("a coincidence pair needs two distinct detectors");
  if (index_of(i) > index_of(j)) std::swap(i, j);
  for (std::size_t k = 0; k < kDetectorPairs.size(); ++k) {
    if (kDetectorPairs[k].first == i && kDetectorPairs[k].second == j) return k;
  }
  return 0;  // unreachable
}

void CountsTable::add(ClickPattern pattern) noexcept {
  for (auto d : kDetectors) {
    if (pattern.contains(d)) ++singles[index_of(d)];
  }
  for (std::size_t k = 0; k < kDetectorPairs.size(); ++k) {
    const auto& p = kDetectorPairs[k];
    if (pattern.contains(p.first) && pattern.contains(p.second)) ++coincidences[k];
  }
}

void CountsTable::merge(const CountsTable& other) noexcept {
  for (std::size_t k = 0; k < coincidences.size(); ++k) coincidences[k] += other.coincidences[k];
  for (std::size_t k = 0; k < singles.size(); ++k) singles[k] += other.singles[k];
  duration_s += other.duration_s;
}

double normalized_coincidence(const CountsTable& counts, Detector i, Detector j) {
  for (auto d : {i, j}) {
    if (counts.sc(d) == 0) {
      throw DomainError(std::string("singles count of detector ") + label(d) + " is zero");
    }
  }
  return static_cast<double>(counts.cc(i, j)) /
         (static_cast<double>(counts.sc(i)) * static_cast<double>(counts.sc(j)));
}

std::array<double, 6> normalized_coincidences(const CountsTable& counts) {
  std::array<double, 6> out{};
  for (std::size_t k = 0; k < kDetectorPairs.size(); ++k) {
    out[k] = normalized_coincidence(counts, kDetectorPairs[k].first, kDetectorPairs[k].second);
  }
  return out;
}

void write_coincidences_csv(std::ostream& out, const CountsTable& counts) {
  out << "pair,count\n";
  for (std::size_t k = 0; k < kDetectorPairs.size(); ++k) {
    out << kDetectorPairs[k].label() << ',' << counts.coincidences[k] << '\n';
  }
}

void write_singles_csv(std::ostream& out, const CountsTable& counts) {
  out << "detector,count\n";
  for (auto d : kDetectors) out << label(d) << ',' << counts.sc(d) << '\n';
}

namespace {

template <class OnRow>
void read_csv(std::istream& in, const std::string& header, OnRow on_row) {
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw ConfigError("csv", "expected header '" + header + "'");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ConfigError("csv", "malformed row '" + line + "'");
    const std::string key = line.substr(0, comma);
    const std::string value = line.substr(comma + 1);
    std::size_t used = 0;
    unsigned long long count = 0;
    try {
      count = std::stoull(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || value.empty() || value[0] == '-') {
      throw ConfigError("csv." + key, "malformed count '" + value + "'");
    }
    on_row(key, static_cast<std::uint64_t>(count));
  }
}

}  // namespace

CountsTable read_counts_csv(std::istream& coincidences, std::istream& singles) {
  CountsTable t;
  read_csv(coincidences, "pair,count", [&](const std::string& key, std::uint64_t n) {
    if (key.size() != 2) throw ConfigError("csv." + key, "unknown detector pair");
    const auto a = ClickPattern::parse(key.substr(0, 1));
    const auto b = ClickPattern::parse(key.substr(1, 1));
    Detector da{}, db{};
    for (auto d : kDetectors) {
      if (a.contains(d)) da = d;
      if (b.contains(d)) db = d;
    }
    t.coincidences[pair_index(da, db)] = n;
  });
  read_csv(singles, "detector,count", [&](const std::string& key, std::uint64_t n) {
    if (key.size() != 1 || key[0] < 'A' || key[0] > 'D') {
      throw ConfigError("csv." + key, "unknown detector");
    }
    t.singles[static_cast<std::size_t>(key[0] - 'A')] = n;
  });
  return t;
}

}  // namespace qpv
