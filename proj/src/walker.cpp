#include "trngsbox/walker.hpp"

#include <algorithm>
#include <bitset>
#include <cmath>
#include <sstream>

namespace trngsbox::walker {

namespace {

struct Offset {
  int drow;
  int dcol;
};

constexpr Offset kOffsets[8] = {
    {0, -1},   // left
    {-1, -1},  // left-up
    {-1, 0},   // up
    {-1, 1},   // right-up
    {0, 1},    // right
    {1, 1},    // right-down
    {1, 0},    // down
    {1, -1},   // left-down
};

std::size_t isqrt(std::size_t n) {
  auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

unsigned ceil_log2(std::size_t n) {
  unsigned r = 0;
  while ((std::size_t{1} << r) < n) ++r;
  return r;
}

bool covers_all_bytes(const EntropyGrid& grid) {
  std::bitset<256> seen;
  for (auto v : grid.cells) seen.set(v);
  return seen.all();
}

}  // namespace

Position step(Position p, Direction d, std::size_t k) noexcept {
  const auto o = kOffsets[static_cast<int>(d)];
  const auto kk = static_cast<long long>(k);
  auto r = (static_cast<long long>(p.row) + o.drow + kk) % kk;
  auto c = (static_cast<long long>(p.col) + o.dcol + kk) % kk;
  return {static_cast<std::size_t>(r), static_cast<std::size_t>(c)};
}

EntropyGrid build_grid(const BitStream& bits, std::size_t max_bytes) {
  constexpr std::size_t kMinBits = 16 * 16 * 8;
  if (bits.size() < kMinBits) {
    throw Error(ErrorCode::InsufficientBits, "grid needs at least 2048 bits, got " +
                                                 std::to_string(bits.size()));
  }
  std::size_t bytes = bits.size() / 8;
  if (max_bytes != 0 && max_bytes < bytes) bytes = max_bytes;
  EntropyGrid grid;
  grid.k = isqrt(bytes);
  if (grid.k < 16) {
    throw Error(ErrorCode::InsufficientBits, "grid side would be " + std::to_string(grid.k) +
                                                 " (< 16)");
  }
  grid.cells.resize(grid.k * grid.k);
  for (std::size_t i = 0; i < grid.cells.size(); ++i) {
    grid.cells[i] = static_cast<std::uint8_t>(bits.read_uint(8 * i, 8));
  }
  return grid;
}

DirectionReader::DirectionReader(const BitStream& bits, std::size_t offset, bool cyclic)
    : bits_(&bits),
      cursor_(bits.empty() ? 0 : (cyclic ? offset % bits.size() : std::min(offset, bits.size()))),
      cyclic_(cyclic) {}

std::optional<std::uint64_t> DirectionReader::next_uint(unsigned width) {
  const auto n = bits_->size();
  if (n == 0) return std::nullopt;
  if (!cyclic_ && cursor_ + width > n) return std::nullopt;
  std::uint64_t v = 0;
  for (unsigned i = 0; i < width; ++i) {
    v = (v << 1) | bits_->bits[cursor_];
    if (++cursor_ == n) cursor_ = 0;
  }
  if (!cyclic_ && cursor_ == 0) cursor_ = n;  // pin at end
  consumed_ += width;
  return v;
}

std::optional<Direction> DirectionReader::next_direction() {
  auto v = next_uint(3);
  if (!v) return std::nullopt;
  return static_cast<Direction>(*v);
}

WalkResult random_walk(const EntropyGrid& grid, DirectionReader& directions, Position start,
                       std::size_t step_budget) {
  if (grid.k == 0 || start.row >= grid.k || start.col >= grid.k) {
    throw Error(ErrorCode::InvalidConfig, "walk start lies outside the grid");
  }
  WalkTrace trace;
  trace.start = start;
  std::bitset<256> seen;
  auto collect = [&](Position p) {
    auto v = grid.at(p.row, p.col);
    if (!seen.test(v)) {
      seen.set(v);
      trace.visited_values.push_back(v);
    }
  };
  collect(start);
  // Pigeonhole: no walk can gather 256 distinct values from this grid.
  if (!covers_all_bytes(grid)) {
    throw WalkError(ErrorCode::StepBudgetExceeded, "grid holds fewer than 256 distinct values",
                    std::move(trace));
  }
  Position pos = start;
  while (trace.visited_values.size() < kSBoxSize) {
    if (trace.steps.size() >= step_budget) {
      throw WalkError(ErrorCode::StepBudgetExceeded,
                      "collected " + std::to_string(trace.visited_values.size()) +
                          " distinct values in " + std::to_string(step_budget) + " steps",
                      std::move(trace));
    }
    auto d = directions.next_direction();
    if (!d) {
      throw WalkError(ErrorCode::ExhaustedDirections,
                      "direction stream ended after " + std::to_string(trace.steps.size()) +
                          " steps with " + std::to_string(trace.visited_values.size()) +
                          " distinct values",
                      std::move(trace));
    }
    trace.steps.push_back(*d);
    pos = step(pos, *d, grid.k);
    collect(pos);
  }
  auto sbox = SBox::from_bytes(trace.visited_values);
  return {sbox, std::move(trace)};
}

WalkResult random_walk(const EntropyGrid& grid, const BitStream& directions, Position start,
                       std::size_t step_budget) {
  DirectionReader reader(directions);
  return random_walk(grid, reader, start, step_budget);
}

ConstructionResult construct_sboxes(const BitStream& bits, std::size_t total,
                                    const ConstructionConfig& config) {
  if (total == 0) throw Error(ErrorCode::InvalidTotal, "total must be at least 1");
  ConstructionResult result;
  result.grid = build_grid(bits, config.grid_bytes);
  if (!covers_all_bytes(result.grid)) {
    throw Error(ErrorCode::InsufficientBits,
                "entropy grid does not contain all 256 byte values; supply more bits");
  }
  const auto& grid = result.grid;
  const unsigned coord_bits = ceil_log2(grid.k);
  const std::size_t retry_budget = config.retry_budget ? config.retry_budget : 16 * total + 64;
  DirectionReader reader(bits, grid.cells.size() * 8, /*cyclic=*/true);

  result.sboxes.reserve(total);
  while (result.sboxes.size() < total) {
    Position start{static_cast<std::size_t>(*reader.next_uint(coord_bits) % grid.k),
                   static_cast<std::size_t>(*reader.next_uint(coord_bits) % grid.k)};
    try {
      auto walk = random_walk(grid, reader, start, config.step_budget);
      result.sboxes.push_back(walk.sbox);
      if (config.keep_traces) result.traces.push_back(std::move(walk.trace));
    } catch (const WalkError&) {
      if (++result.failed_walks > retry_budget) {
        throw Error(ErrorCode::InsufficientBits,
                    "retry budget exhausted after " + std::to_string(result.sboxes.size()) +
                        " of " + std::to_string(total) + " S-boxes");
      }
    }
  }
  return result;
}

std::vector<TraceRow> replay(const EntropyGrid& grid, const WalkTrace& trace) {
  std::vector<TraceRow> rows;
  rows.reserve(trace.steps.size() + 1);
  std::bitset<256> seen;
  Position pos = trace.start;
  auto visit = [&](std::size_t i) {
    auto v = grid.at(pos.row, pos.col);
    bool fresh = !seen.test(v);
    seen.set(v);
    rows.push_back({i, pos, v, fresh});
  };
  visit(0);
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    pos = step(pos, trace.steps[i], grid.k);
    visit(i + 1);
  }
  return rows;
}

std::string trace_csv(const EntropyGrid& grid, const WalkTrace& trace) {
  std::ostringstream out;
  out << "step,row,col,value,collected\n";
  for (const auto& r : replay(grid, trace)) {
    out << r.step << ',' << r.pos.row << ',' << r.pos.col << ',' << static_cast<int>(r.value)
        << ',' << (r.collected ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace trngsbox::walker
