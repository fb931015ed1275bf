#include "trngsbox/entropy.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>

#include "trngsbox/error.hpp"

namespace trngsbox::entropy {

namespace {

bool parse_number(std::string_view token, std::int64_t& out) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value)) {
    return false;
  }
  out = static_cast<std::int64_t>(std::trunc(value));
  return true;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == ',' || line[i] == '\r')) ++i;
    std::size_t start = i;
    while (i < line.size() && !(line[i] == ' ' || line[i] == '\t' || line[i] == ',' || line[i] == '\r')) ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

// Returns an empty string on success, otherwise the reason the row is invalid.
std::string parse_row(std::string_view line, StrikeRecord& rec) {
  auto fields = split_fields(line);
  if (fields.size() != 8) {
    return "expected 8 fields, found " + std::to_string(fields.size());
  }
  std::int64_t v[8];
  for (std::size_t f = 0; f < 8; ++f) {
    if (!parse_number(fields[f], v[f])) {
      return "field " + std::to_string(f + 1) + " is not numeric: '" + std::string(fields[f]) + "'";
    }
  }
  if (v[0] < 1 || v[0] > 31) return "day out of range";
  if (v[1] < 0 || v[1] >= 24) return "hour out of range";
  if (v[2] < 0 || v[2] >= 60) return "minute out of range";
  if (v[3] < 0 || v[3] >= 60) return "second out of range";
  if (v[4] < 0 || v[4] >= 1'000'000) return "microsecond out of range";
  rec = StrikeRecord{static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2]),
                     static_cast<int>(v[3]), static_cast<int>(v[4]), v[5], v[6], v[7]};
  return {};
}

}  // namespace

ParseResult parse_ldar(std::string_view text, bool strict) {
  ParseResult result;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;

    auto first = line.find_first_not_of(" \t\r,");
    if (first == std::string_view::npos || line[first] == '#') {
      if (end == text.size()) break;
      continue;
    }
    StrikeRecord rec;
    auto problem = parse_row(line, rec);
    if (problem.empty()) {
      result.records.push_back(rec);
    } else if (strict) {
      throw Error(ErrorCode::MalformedLine, "line " + std::to_string(line_no) + ": " + problem);
    } else {
      result.errors.push_back({line_no, problem});
    }
    if (end == text.size()) break;
  }
  return result;
}

ParseResult read_ldar_file(const std::string& path, bool strict) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_ldar(text, strict);
}

std::string serialize_ldar(std::span<const StrikeRecord> records) {
  std::ostringstream out;
  for (const auto& r : records) {
    out << r.day << ' ' << r.hour << ' ' << r.minute << ' ' << r.second << ' ' << r.microsecond
        << ' ' << r.east_m << ' ' << r.north_m << ' ' << r.alt_m << '\n';
  }
  return out.str();
}

BitStream strike_diff_bits(std::span<const StrikeRecord> records) {
  if (records.size() < 2) {
    throw Error(ErrorCode::InsufficientRecords,
                "need at least 2 strike records, got " + std::to_string(records.size()));
  }
  BitStream out;
  out.origin = BitOrigin::raw;
  out.bits.reserve(24 * (records.size() - 1));
  const auto& anchor = records.front();
  auto low_byte = [](std::int64_t a, std::int64_t b) {
    auto d = a >= b ? static_cast<std::uint64_t>(a - b) : static_cast<std::uint64_t>(b - a);
    return static_cast<std::uint8_t>(d & 0xFF);
  };
  for (std::size_t i = 1; i < records.size(); ++i) {
    out.append_byte_msb_first(low_byte(records[i].east_m, anchor.east_m));
    out.append_byte_msb_first(low_byte(records[i].north_m, anchor.north_m));
    out.append_byte_msb_first(low_byte(records[i].alt_m, anchor.alt_m));
  }
  return out;
}

BitStream von_neumann(const BitStream& input) {
  BitStream out;
  out.origin = BitOrigin::whitened;
  out.bits.reserve(input.size() / 4);
  for (std::size_t i = 0; i + 1 < input.size(); i += 2) {
    auto a = input.bits[i];
    auto b = input.bits[i + 1];
    if (a != b) out.bits.push_back(a);
  }
  return out;
}

}  // namespace trngsbox::entropy
