#include "trngsbox/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "trngsbox/error.hpp"

namespace trngsbox::metrics {

namespace {

int parity(unsigned x) { return std::popcount(x) & 1; }

std::uint8_t pair_mask(unsigned j, unsigned k) {
  return static_cast<std::uint8_t>((1U << j) | (1U << k));
}

int max_abs(const std::vector<int>& w, std::size_t from = 0) {
  int m = 0;
  for (std::size_t i = from; i < w.size(); ++i) m = std::max(m, std::abs(w[i]));
  return m;
}

}  // namespace

LookupTable::LookupTable(std::span<const std::uint8_t> values)
    : values_(values.begin(), values.end()) {
  const auto n = values_.size();
  if (n < 2 || n > 256 || !std::has_single_bit(n)) {
    throw Error(ErrorCode::WrongLength, "lookup table size must be a power of two in [2, 256]");
  }
  bits_ = static_cast<unsigned>(std::countr_zero(n));
  for (auto v : values_) {
    if (v >= n) throw Error(ErrorCode::WrongLength, "lookup table value out of range");
  }
}

BooleanComponent component(const LookupTable& s, std::uint8_t mask) {
  BooleanComponent f;
  f.mask = mask;
  f.truth_table.resize(s.size());
  for (std::size_t x = 0; x < s.size(); ++x) {
    f.truth_table[x] = static_cast<std::uint8_t>(parity(s[x] & mask));
  }
  return f;
}

WalshSpectrum walsh_spectrum(std::span<const std::uint8_t> truth_table) {
  WalshSpectrum w;
  w.coefficients.resize(truth_table.size());
  for (std::size_t x = 0; x < truth_table.size(); ++x) {
    w.coefficients[x] = truth_table[x] ? -1 : 1;
  }
  auto& a = w.coefficients;
  for (std::size_t h = 1; h < a.size(); h <<= 1) {
    for (std::size_t i = 0; i < a.size(); i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const int u = a[j];
        const int v = a[j + h];
        a[j] = u + v;
        a[j + h] = u - v;
      }
    }
  }
  return w;
}

WalshSpectrum walsh_spectrum(const BooleanComponent& f) { return walsh_spectrum(f.truth_table); }

int boolean_nonlinearity(std::span<const std::uint8_t> truth_table) {
  auto w = walsh_spectrum(truth_table);
  return static_cast<int>(truth_table.size() / 2) - max_abs(w.coefficients) / 2;
}

int component_nonlinearity(const LookupTable& s, std::uint8_t mask) {
  return boolean_nonlinearity(component(s, mask).truth_table);
}

std::vector<int> coordinate_nonlinearities(const LookupTable& s) {
  std::vector<int> out;
  for (unsigned b = 0; b < s.bits(); ++b) {
    out.push_back(component_nonlinearity(s, static_cast<std::uint8_t>(1U << b)));
  }
  return out;
}

double nonlinearity_mean(const LookupTable& s) {
  auto nl = coordinate_nonlinearities(s);
  return static_cast<double>(std::accumulate(nl.begin(), nl.end(), 0)) / static_cast<double>(nl.size());
}

int nonlinearity(const LookupTable& s) {
  auto nl = coordinate_nonlinearities(s);
  return std::accumulate(nl.begin(), nl.end(), 0) / static_cast<int>(nl.size());
}

int min_component_nonlinearity(const LookupTable& s) {
  int best = static_cast<int>(s.size());
  for (std::size_t m = 1; m < s.size(); ++m) {
    best = std::min(best, component_nonlinearity(s, static_cast<std::uint8_t>(m)));
  }
  return best;
}

SacMatrix sac(const LookupTable& s) {
  SacMatrix m;
  m.n = s.bits();
  m.flips.assign(m.n * m.n, 0);
  m.q.assign(m.n * m.n, 0.0);
  const double size = static_cast<double>(s.size());
  for (unsigned r = 0; r < m.n; ++r) {
    for (std::size_t x = 0; x < s.size(); ++x) {
      const unsigned diff = s[x] ^ s[x ^ (std::size_t{1} << r)];
      for (unsigned w = 0; w < m.n; ++w) m.flips[r * m.n + w] += (diff >> w) & 1U;
    }
  }
  double total = 0.0, off = 0.0;
  for (std::size_t i = 0; i < m.q.size(); ++i) {
    m.q[i] = m.flips[i] / size;
    total += m.q[i];
    off += std::abs(0.5 - m.q[i]);
  }
  m.mean = total / static_cast<double>(m.q.size());
  m.offset = off / static_cast<double>(m.q.size());
  return m;
}

BicResult bic(const LookupTable& s) {
  BicResult b;
  const unsigned n = s.bits();
  b.n = n;
  b.pair_nonlinearity.assign(n * n, 0);
  b.pair_flips.assign(n * n, 0);
  b.pair_correlation.assign(n * n, 0.0);
  if (n < 2) return b;
  b.bic_nl = static_cast<int>(s.size());
  const double size = static_cast<double>(s.size());
  long long flips_total = 0;
  for (unsigned j = 0; j < n; ++j) {
    for (unsigned k = 0; k < n; ++k) {
      if (j == k) continue;
      const auto idx = j * n + k;
      const auto mask = pair_mask(j, k);
      b.pair_nonlinearity[idx] = component_nonlinearity(s, mask);
      b.bic_nl = std::min(b.bic_nl, b.pair_nonlinearity[idx]);

      double corr_max = 0.0;
      for (unsigned r = 0; r < n; ++r) {
        const std::size_t e = std::size_t{1} << r;
        double sj = 0, sk = 0, sjj = 0, skk = 0, sjk = 0;
        for (std::size_t x = 0; x < s.size(); ++x) {
          const unsigned d = s[x] ^ s[x ^ e];
          const int bj = (d >> j) & 1U;
          const int bk = (d >> k) & 1U;
          b.pair_flips[idx] += bj ^ bk;
          sj += bj;
          sk += bk;
          sjj += bj * bj;
          skk += bk * bk;
          sjk += bj * bk;
        }
        const double cov = sjk / size - (sj / size) * (sk / size);
        const double vj = sjj / size - (sj / size) * (sj / size);
        const double vk = skk / size - (sk / size) * (sk / size);
        // A constant avalanche bit carries no dependence; count it as 0.
        if (vj > 1e-12 && vk > 1e-12) {
          corr_max = std::max(corr_max, std::abs(cov / std::sqrt(vj * vk)));
        }
      }
      b.pair_correlation[idx] = corr_max;
      b.correlation_max = std::max(b.correlation_max, corr_max);
      flips_total += b.pair_flips[idx];
    }
  }
  b.bic_sac = static_cast<double>(flips_total) / (size * n * n * (n - 1));
  return b;
}

double lp(const LookupTable& s) {
  int best = 0;
  for (std::size_t m = 1; m < s.size(); ++m) {
    auto w = walsh_spectrum(component(s, static_cast<std::uint8_t>(m)));
    best = std::max(best, max_abs(w.coefficients));
  }
  return static_cast<double>(best) / static_cast<double>(2 * s.size());
}

std::vector<int> DifferentialTable::row_maxima() const {
  const std::size_t size = std::size_t{1} << n;
  std::vector<int> out(size, 0);
  for (std::size_t dx = 1; dx < size; ++dx) {
    out[dx] = *std::max_element(counts.begin() + static_cast<std::ptrdiff_t>(dx * size),
                                counts.begin() + static_cast<std::ptrdiff_t>((dx + 1) * size));
  }
  return out;
}

DifferentialTable dp(const LookupTable& s) {
  DifferentialTable t;
  t.n = s.bits();
  const std::size_t size = s.size();
  t.counts.assign(size * size, 0);
  for (std::size_t dx = 0; dx < size; ++dx) {
    for (std::size_t x = 0; x < size; ++x) ++t.counts[dx * size + (s[x] ^ s[x ^ dx])];
  }
  auto rows = t.row_maxima();
  t.max_count = *std::max_element(rows.begin(), rows.end());
  t.dp_max = static_cast<double>(t.max_count) / static_cast<double>(size);
  return t;
}

MetricReport evaluate(const LookupTable& s) {
  MetricReport r;
  auto coords = coordinate_nonlinearities(s);
  const int sum = std::accumulate(coords.begin(), coords.end(), 0);
  r.nonlinearity = sum / static_cast<int>(coords.size());
  r.nonlinearity_mean = static_cast<double>(sum) / static_cast<double>(coords.size());
  r.nonlinearity_min = min_component_nonlinearity(s);
  auto q = sac(s);
  r.sac_mean = q.mean;
  r.sac_offset = q.offset;
  auto b = bic(s);
  r.bic_sac = b.bic_sac;
  r.bic_nl = b.bic_nl;
  r.bic_correlation = b.correlation_max;
  r.lp = lp(s);
  r.dp_max = dp(s).dp_max;
  return r;
}

std::string to_key_value(const MetricReport& r) {
  std::ostringstream out;
  out << std::setprecision(6) << std::fixed;
  out << "nonlinearity = " << r.nonlinearity << '\n'
      << "nonlinearity_mean = " << r.nonlinearity_mean << '\n'
      << "nonlinearity_min = " << r.nonlinearity_min << '\n'
      << "sac_mean = " << r.sac_mean << '\n'
      << "sac_offset = " << r.sac_offset << '\n'
      << "bic_sac = " << r.bic_sac << '\n'
      << "bic_nl = " << r.bic_nl << '\n'
      << "bic_correlation = " << r.bic_correlation << '\n'
      << "lp = " << r.lp << '\n'
      << "dp_max = " << r.dp_max << '\n';
  return out.str();
}

std::string csv_header() {
  return "nonlinearity,nonlinearity_mean,nonlinearity_min,sac_mean,sac_offset,bic_sac,bic_nl,"
         "bic_correlation,lp,dp_max";
}

std::string to_csv_row(const MetricReport& r) {
  std::ostringstream out;
  out << std::setprecision(6) << std::fixed;
  out << r.nonlinearity << ',' << r.nonlinearity_mean << ',' << r.nonlinearity_min << ','
      << r.sac_mean << ',' << r.sac_offset << ',' << r.bic_sac << ',' << r.bic_nl << ','
      << r.bic_correlation << ',' << r.lp << ',' << r.dp_max;
  return out.str();
}

std::string dp_csv(const DifferentialTable& t) {
  const std::size_t size = std::size_t{1} << t.n;
  std::ostringstream out;
  out << "dx";
  for (std::size_t dy = 0; dy < size; ++dy) out << ',' << dy;
  out << '\n';
  for (std::size_t dx = 0; dx < size; ++dx) {
    out << dx;
    for (std::size_t dy = 0; dy < size; ++dy) out << ',' << t.at(dx, dy);
    out << '\n';
  }
  return out.str();
}

}  // namespace trngsbox::metrics
