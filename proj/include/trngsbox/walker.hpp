#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trngsbox/bitstream.hpp"
#include "trngsbox/error.hpp"
#include "trngsbox/sbox.hpp"

namespace trngsbox::walker {

/// k x k byte grid, row-major.
struct EntropyGrid {
  std::size_t k = 0;
  std::vector<std::uint8_t> cells;

  std::uint8_t at(std::size_t row, std::size_t col) const { return cells[row * k + col]; }
};

enum class Direction : std::uint8_t {
  left = 0,
  left_up = 1,
  up = 2,
  right_up = 3,
  right = 4,
  right_down = 5,
  down = 6,
  left_down = 7,
};

struct Position {
  std::size_t row = 0;
  std::size_t col = 0;
  friend bool operator==(const Position&, const Position&) = default;
};

/// One toroidal step. Rows grow downward, columns grow to the right.
Position step(Position p, Direction d, std::size_t k) noexcept;

struct WalkTrace {
  Position start;
  std::vector<Direction> steps;
  std::vector<std::uint8_t> visited_values;  // collection order
};

inline constexpr std::size_t kDefaultStepBudget = 65536;

struct WalkResult {
  SBox sbox;
  WalkTrace trace;
};

/// Raised by random_walk; carries the partial trace up to the failure.
class WalkError : public Error {
 public:
  WalkError(ErrorCode code, const std::string& message, WalkTrace trace)
      : Error(code, message), trace_(std::move(trace)) {}
  const WalkTrace& trace() const noexcept { return trace_; }

 private:
  WalkTrace trace_;
};

/// Consumes consecutive bytes, k = floor(sqrt(bytes)), truncates to k^2 and
/// reshapes row-major. Needs at least 2048 bits. `max_bytes` = 0 uses all.
EntropyGrid build_grid(const BitStream& bits, std::size_t max_bytes = 0);

/// Reads 3-bit direction codes (MSB first) and start coordinates from a bit
/// stream. A cyclic reader wraps to the beginning when it reaches the end.
class DirectionReader {
 public:
  DirectionReader(const BitStream& bits, std::size_t offset = 0, bool cyclic = false);

  std::optional<Direction> next_direction();
  std::optional<std::uint64_t> next_uint(unsigned width);
  std::size_t consumed() const noexcept { return consumed_; }

 private:
  const BitStream* bits_;
  std::size_t cursor_;
  bool cyclic_;
  std::size_t consumed_ = 0;
};

/// Collects distinct cell values along an 8-neighbour toroidal walk until all
/// 256 byte values are seen; the collection order is the S-box.
/// Throws WalkError with ExhaustedDirections or StepBudgetExceeded.
WalkResult random_walk(const EntropyGrid& grid, DirectionReader& directions, Position start,
                       std::size_t step_budget = kDefaultStepBudget);
WalkResult random_walk(const EntropyGrid& grid, const BitStream& directions, Position start,
                       std::size_t step_budget = kDefaultStepBudget);

struct ConstructionConfig {
  std::size_t step_budget = kDefaultStepBudget;
  std::size_t grid_bytes = 0;  // 0 = every whole byte of the stream
  std::size_t retry_budget = 0;  // failed walks tolerated; 0 = 16 * total + 64
  bool keep_traces = true;
};

struct ConstructionResult {
  EntropyGrid grid;
  std::vector<SBox> sboxes;
  std::vector<WalkTrace> traces;
  std::size_t failed_walks = 0;
};

/// Builds one grid, then runs walks until `total` S-boxes exist. Directions and
/// start cells are read from the same stream starting right after the grid
/// bytes and wrapping around cyclically.
ConstructionResult construct_sboxes(const BitStream& bits, std::size_t total,
                                    const ConstructionConfig& config = {});

struct TraceRow {
  std::size_t step = 0;
  Position pos;
  std::uint8_t value = 0;
  bool collected = false;
};

/// Replays a trace over its grid, one row per visited cell (step 0 = start).
std::vector<TraceRow> replay(const EntropyGrid& grid, const WalkTrace& trace);
std::string trace_csv(const EntropyGrid& grid, const WalkTrace& trace);

}  // namespace trngsbox::walker
