#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "trngsbox/sbox.hpp"

namespace trngsbox::evolver {

struct Individual {
  SBox sbox;
  int fitness = 0;  // metrics::nonlinearity(sbox)
  SBoxDigest digest;
};

Individual make_individual(const SBox& s);

struct GAConfig {
  std::size_t islands = 4;
  std::size_t population_per_island = 100;
  std::size_t generations = 50;
  std::size_t migration_interval = 10;
  std::size_t migration_count = 2;
  int min_nl = 100;
  int max_nl = 106;
  std::size_t crossover_point = 128;
  std::uint64_t rng_seed = 0x5eed;

  void validate() const;  // throws InvalidConfig
};

/// Islands are kept sorted best-first (fitness descending, then digest
/// ascending) and are digest-unique.
struct Population {
  std::vector<std::vector<Individual>> islands;
  std::size_t generation = 0;

  std::size_t size() const;
  /// Every island merged, digest-deduplicated, best-first.
  std::vector<Individual> merged() const;
};

struct GenerationRecord {
  std::size_t generation = 0;
  std::size_t island = 0;
  int best = 0;
  double mean = 0.0;
  std::size_t population_size = 0;
};

using GenerationLog = std::vector<GenerationRecord>;

/// Keeps candidates with fitness in [min_nl, max_nl], drops digest duplicates,
/// then deals the survivors round-robin across islands. Throws EmptyAfterFilter.
Population seed_population(std::span<const SBox> candidates, const GAConfig& cfg);

/// One-point crossover: a[0..point) ++ b[point..), b[0..point) ++ a[point..).
std::pair<SBoxTable, SBoxTable> crossover(const SBox& a, const SBox& b, std::size_t point = 128);

/// Restores bijectivity. Scanning left to right, a repeated value is replaced
/// by the first single-bit flip of the original value (bit 0 upward) that is
/// still unused, falling back to repeated +1 (mod 256) from the original.
SBox repair(std::span<const std::uint8_t> raw);

struct EvolveResult {
  Population population;
  GenerationLog log;
};

/// (mu + lambda) island GA: size-2 tournament parents, crossover + repair
/// children, merge, dedup, truncate; ring migration every migration_interval.
EvolveResult evolve(Population pop, const GAConfig& cfg);

inline constexpr std::size_t kHistogramBins = 5;
using Histogram = std::array<std::size_t, kHistogramBins>;

/// Bins: <=99, 100-102, 103-104, 105-106, >=107.
Histogram nl_histogram(std::span<const int> fitness);
Histogram nl_histogram(const Population& pop);
const std::array<const char*, kHistogramBins>& histogram_labels();

std::string log_csv(const GenerationLog& log);
std::string histogram_csv(const Histogram& h);

}  // namespace trngsbox::evolver
