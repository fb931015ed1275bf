#include "trngsbox/evolver.hpp"

#include <algorithm>
#include <bitset>
#include <iomanip>
#include <sstream>
#include <unordered_set>

#include "trngsbox/error.hpp"
#include "trngsbox/metrics.hpp"
#include "trngsbox/rng.hpp"

namespace trngsbox::evolver {

namespace {

bool better(const Individual& a, const Individual& b) {
  if (a.fitness != b.fitness) return a.fitness > b.fitness;
  return a.digest < b.digest;
}

// Sort best-first, keep the first copy of each digest, truncate.
void settle(std::vector<Individual>& island, std::size_t capacity) {
  std::stable_sort(island.begin(), island.end(), better);
  std::unordered_set<SBoxDigest, SBoxDigestHash> seen;
  std::vector<Individual> kept;
  kept.reserve(std::min(island.size(), capacity));
  for (auto& ind : island) {
    if (kept.size() == capacity) break;
    if (seen.insert(ind.digest).second) kept.push_back(std::move(ind));
  }
  island = std::move(kept);
}

const Individual& tournament(const std::vector<Individual>& island, SplitMix64& rng) {
  const auto i = rng.below(island.size());
  const auto j = rng.below(island.size());
  // Islands are sorted best-first, so the smaller index wins.
  return island[std::min(i, j)];
}

GenerationRecord summarize(std::size_t generation, std::size_t island_index,
                           const std::vector<Individual>& island) {
  GenerationRecord r;
  r.generation = generation;
  r.island = island_index;
  r.population_size = island.size();
  if (!island.empty()) {
    r.best = island.front().fitness;
    double sum = 0.0;
    for (const auto& ind : island) sum += ind.fitness;
    r.mean = sum / static_cast<double>(island.size());
  }
  return r;
}

}  // namespace

Individual make_individual(const SBox& s) {
  return Individual{s, metrics::nonlinearity(s), canonical_digest(s)};
}

void GAConfig::validate() const {
  if (islands == 0 || population_per_island == 0 || migration_interval == 0) {
    throw Error(ErrorCode::InvalidConfig, "islands, population and migration interval must be positive");
  }
  if (min_nl > max_nl) throw Error(ErrorCode::InvalidConfig, "min_nl exceeds max_nl");
  if (crossover_point == 0 || crossover_point >= kSBoxSize) {
    throw Error(ErrorCode::InvalidConfig, "crossover point must lie in (0, 256)");
  }
}

std::size_t Population::size() const {
  std::size_t n = 0;
  for (const auto& isl : islands) n += isl.size();
  return n;
}

std::vector<Individual> Population::merged() const {
  std::vector<Individual> all;
  for (const auto& isl : islands) all.insert(all.end(), isl.begin(), isl.end());
  settle(all, all.size());
  return all;
}

Population seed_population(std::span<const SBox> candidates, const GAConfig& cfg) {
  cfg.validate();
  std::unordered_set<SBoxDigest, SBoxDigestHash> seen;
  std::vector<Individual> kept;
  for (const auto& s : candidates) {
    auto ind = make_individual(s);
    if (ind.fitness < cfg.min_nl || ind.fitness > cfg.max_nl) continue;
    if (seen.insert(ind.digest).second) kept.push_back(std::move(ind));
  }
  if (kept.empty()) {
    throw Error(ErrorCode::EmptyAfterFilter,
                "no candidate has nonlinearity in [" + std::to_string(cfg.min_nl) + ", " +
                    std::to_string(cfg.max_nl) + "]");
  }
  Population pop;
  pop.islands.resize(cfg.islands);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    pop.islands[i % cfg.islands].push_back(std::move(kept[i]));
  }
  for (auto& isl : pop.islands) settle(isl, isl.size());
  return pop;
}

std::pair<SBoxTable, SBoxTable> crossover(const SBox& a, const SBox& b, std::size_t point) {
  if (point == 0 || point >= kSBoxSize) {
    throw Error(ErrorCode::InvalidConfig, "crossover point must lie in (0, 256)");
  }
  SBoxTable ra{}, rb{};
  for (std::size_t i = 0; i < kSBoxSize; ++i) {
    ra[i] = i < point ? a[i] : b[i];
    rb[i] = i < point ? b[i] : a[i];
  }
  return {ra, rb};
}

SBox repair(std::span<const std::uint8_t> raw) {
  if (raw.size() != kSBoxSize) {
    throw Error(ErrorCode::WrongLength, "repair needs 256 bytes, got " + std::to_string(raw.size()));
  }
  std::bitset<256> seen;
  SBoxTable out{};
  for (std::size_t i = 0; i < kSBoxSize; ++i) {
    const std::uint8_t original = raw[i];
    std::uint8_t v = original;
    if (seen.test(v)) {
      bool placed = false;
      for (int bit = 0; bit < 8 && !placed; ++bit) {
        const auto flipped = static_cast<std::uint8_t>(original ^ (1U << bit));
        if (!seen.test(flipped)) {
          v = flipped;
          placed = true;
        }
      }
      while (!placed) {
        v = static_cast<std::uint8_t>(v + 1);
        placed = !seen.test(v);
      }
    }
    seen.set(v);
    out[i] = v;
  }
  return SBox::from_bytes(out);
}

EvolveResult evolve(Population pop, const GAConfig& cfg) {
  cfg.validate();
  EvolveResult result;
  SplitMix64 rng(cfg.rng_seed);
  const std::size_t first = pop.generation;
  for (std::size_t g = 0; g < cfg.generations; ++g) {
    const std::size_t generation = first + g + 1;
    for (std::size_t i = 0; i < pop.islands.size(); ++i) {
      auto& island = pop.islands[i];
      if (island.size() >= 2) {
        std::vector<Individual> children;
        children.reserve(cfg.population_per_island + 1);
        while (children.size() < cfg.population_per_island) {
          const auto& pa = tournament(island, rng);
          const auto& pb = tournament(island, rng);
          auto [ra, rb] = crossover(pa.sbox, pb.sbox, cfg.crossover_point);
          children.push_back(make_individual(repair(ra)));
          children.push_back(make_individual(repair(rb)));
        }
        island.insert(island.end(), std::make_move_iterator(children.begin()),
                      std::make_move_iterator(children.end()));
      }
      settle(island, cfg.population_per_island);
    }
    if (pop.islands.size() > 1 && cfg.migration_count > 0 && generation % cfg.migration_interval == 0) {
      std::vector<std::vector<Individual>> emigrants(pop.islands.size());
      for (std::size_t i = 0; i < pop.islands.size(); ++i) {
        const auto& isl = pop.islands[i];
        const auto n = std::min(cfg.migration_count, isl.size());
        emigrants[i].assign(isl.begin(), isl.begin() + static_cast<std::ptrdiff_t>(n));
      }
      for (std::size_t i = 0; i < pop.islands.size(); ++i) {
        auto& dest = pop.islands[(i + 1) % pop.islands.size()];
        dest.insert(dest.end(), emigrants[i].begin(), emigrants[i].end());
      }
      for (auto& isl : pop.islands) settle(isl, cfg.population_per_island);
    }
    for (std::size_t i = 0; i < pop.islands.size(); ++i) {
      result.log.push_back(summarize(generation, i, pop.islands[i]));
    }
    pop.generation = generation;
  }
  result.population = std::move(pop);
  return result;
}

Histogram nl_histogram(std::span<const int> fitness) {
  Histogram h{};
  for (int f : fitness) {
    if (f <= 99) ++h[0];
    else if (f <= 102) ++h[1];
    else if (f <= 104) ++h[2];
    else if (f <= 106) ++h[3];
    else ++h[4];
  }
  return h;
}

Histogram nl_histogram(const Population& pop) {
  std::vector<int> f;
  for (const auto& isl : pop.islands) {
    for (const auto& ind : isl) f.push_back(ind.fitness);
  }
  return nl_histogram(f);
}

const std::array<const char*, kHistogramBins>& histogram_labels() {
  static const std::array<const char*, kHistogramBins> labels = {"<=99", "100-102", "103-104",
                                                                 "105-106", ">=107"};
  return labels;
}

std::string log_csv(const GenerationLog& log) {
  std::ostringstream out;
  out << "generation,island,best,mean,population_size\n" << std::fixed << std::setprecision(4);
  for (const auto& r : log) {
    out << r.generation << ',' << r.island << ',' << r.best << ',' << r.mean << ','
        << r.population_size << '\n';
  }
  return out.str();
}

std::string histogram_csv(const Histogram& h) {
  std::ostringstream out;
  out << "bin,count\n";
  for (std::size_t i = 0; i < kHistogramBins; ++i) out << histogram_labels()[i] << ',' << h[i] << '\n';
  return out.str();
}

}  // namespace trngsbox::evolver
