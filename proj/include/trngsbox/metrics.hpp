#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "trngsbox/sbox.hpp"

namespace trngsbox::metrics {

/// An n-bit to n-bit lookup table (1 <= n <= 8). The public surface works on
/// 8-bit S-boxes; smaller widths exist so exhaustive oracles can check the
/// same code paths.
class LookupTable {
 public:
  explicit LookupTable(std::span<const std::uint8_t> values);
  LookupTable(const SBox& s) : LookupTable(s.bytes()) {}  // NOLINT(implicit)

  unsigned bits() const noexcept { return bits_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::uint8_t operator[](std::size_t x) const noexcept { return values_[x]; }

 private:
  std::vector<std::uint8_t> values_;
  unsigned bits_ = 0;
};

/// Truth table of x -> parity(S(x) & mask).
struct BooleanComponent {
  std::vector<std::uint8_t> truth_table;
  std::uint8_t mask = 1;
};

BooleanComponent component(const LookupTable& s, std::uint8_t mask);

struct WalshSpectrum {
  std::vector<int> coefficients;  // indexed by input mask
};

/// Fast Walsh-Hadamard transform of (-1)^f.
WalshSpectrum walsh_spectrum(const BooleanComponent& f);
WalshSpectrum walsh_spectrum(std::span<const std::uint8_t> truth_table);

/// 2^(n-1) - max|W|/2 for a single Boolean function.
int boolean_nonlinearity(std::span<const std::uint8_t> truth_table);
int component_nonlinearity(const LookupTable& s, std::uint8_t mask);

/// Per-output-bit nonlinearities (masks 1, 2, 4, ...).
std::vector<int> coordinate_nonlinearities(const LookupTable& s);
double nonlinearity_mean(const LookupTable& s);

/// S-box nonlinearity score: floor of the mean coordinate-function
/// nonlinearity. This is the figure used for fitness and histograms.
int nonlinearity(const LookupTable& s);

/// Minimum nonlinearity over all 2^n - 1 nonzero output masks.
int min_component_nonlinearity(const LookupTable& s);

struct SacMatrix {
  unsigned n = 0;
  std::vector<int> flips;  // flips[r * n + w] = #{x : bit w of S(x) ^ S(x ^ e_r) set}
  std::vector<double> q;   // flips / 2^n
  double offset = 0.0;     // mean |0.5 - q|
  double mean = 0.0;

  double at(unsigned r, unsigned w) const { return q[r * n + w]; }
};

SacMatrix sac(const LookupTable& s);

struct BicResult {
  unsigned n = 0;
  // Indexed [j * n + k], j != k; diagonal entries unused.
  std::vector<int> pair_nonlinearity;
  std::vector<int> pair_flips;  // summed over the n input flip bits
  std::vector<double> pair_correlation;  // max over flip bits of |corr|
  int bic_nl = 0;
  double bic_sac = 0.0;
  double correlation_max = 0.0;
};

BicResult bic(const LookupTable& s);

/// max over nonzero output masks and all input masks of |W| / 2^(n+1).
double lp(const LookupTable& s);

struct DifferentialTable {
  unsigned n = 0;
  std::vector<int> counts;  // counts[dx * 2^n + dy]
  int max_count = 0;        // over dx != 0
  double dp_max = 0.0;

  int at(std::size_t dx, std::size_t dy) const { return counts[(dx << n) + dy]; }
  /// max over dy of counts[dx][dy], for every dx (0 for dx = 0).
  std::vector<int> row_maxima() const;
};

DifferentialTable dp(const LookupTable& s);

struct MetricReport {
  int nonlinearity = 0;
  double nonlinearity_mean = 0.0;
  int nonlinearity_min = 0;
  double sac_mean = 0.0;
  double sac_offset = 0.0;
  double bic_sac = 0.0;
  int bic_nl = 0;
  double bic_correlation = 0.0;
  double lp = 0.0;
  double dp_max = 0.0;
};

MetricReport evaluate(const LookupTable& s);

std::string to_key_value(const MetricReport& r);
std::string csv_header();
std::string to_csv_row(const MetricReport& r);
std::string dp_csv(const DifferentialTable& t);

}  // namespace trngsbox::metrics
