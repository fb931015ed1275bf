#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trngsbox/bitstream.hpp"

namespace trngsbox::entropy {

/// One LDAR lightning event: timestamp fields plus east/north/altitude in meters.
struct StrikeRecord {
  int day = 1;
  int hour = 0;
  int minute = 0;
  int second = 0;
  int microsecond = 0;
  std::int64_t east_m = 0;
  std::int64_t north_m = 0;
  std::int64_t alt_m = 0;

  friend bool operator==(const StrikeRecord&, const StrikeRecord&) = default;
};

struct LineError {
  std::size_t line = 0;  // 1-based
  std::string message;
};

struct ParseResult {
  std::vector<StrikeRecord> records;
  std::vector<LineError> errors;
};

/// Parses "dd hh mm ss ll xx yy zz" rows separated by whitespace and/or commas.
/// Blank lines and lines starting with '#' are ignored. Real-valued fields are
/// truncated toward zero. In strict mode the first malformed line throws
/// MalformedLine; otherwise it is recorded in ParseResult::errors and skipped.
ParseResult parse_ldar(std::string_view text, bool strict = false);
ParseResult read_ldar_file(const std::string& path, bool strict = false);

std::string serialize_ldar(std::span<const StrikeRecord> records);

/// Anchor-to-first differencing: for every record after the first, appends the
/// low 8 bits (MSB first) of |dx|, |dy|, |dz| measured against record 0.
BitStream strike_diff_bits(std::span<const StrikeRecord> records);

/// Von Neumann debiasing over non-overlapping pairs: 01 -> 0, 10 -> 1.
BitStream von_neumann(const BitStream& input);

}  // namespace trngsbox::entropy
