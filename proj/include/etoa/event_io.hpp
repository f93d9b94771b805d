#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "etoa/config.hpp"
#include "etoa/events.hpp"

namespace etoa {

/// Binary layout, all integers little-endian:
///   header  "ETOA" | u8 version (1) | u64 record count        13 bytes
///   record  u64 trigger_id | u8 channel | f64 time (IEEE-754) 17 bytes
/// Text layout: the line `trigger_id,channel,time`, then one record per line
/// with times printed to 17 significant digits. Both round-trip bit-exactly.
inline constexpr char kEventMagic[4] = {'E', 'T', 'O', 'A'};
inline constexpr std::uint8_t kEventFormatVersion = 1;
inline constexpr std::size_t kEventHeaderBytes = 13;
inline constexpr std::size_t kEventRecordBytes = 17;

void write_events(const EventBatch& batch, std::ostream& out, EventFormat format);

/// Malformed input: FormatError (bad header, corrupt record, truncation,
/// record-count mismatch, or an unparsable text line).
EventBatch read_events(std::istream& in, EventFormat format);

void write_events_file(const EventBatch& batch, const std::string& path, EventFormat format);

/// `format` unset: binary if the file starts with the magic, text otherwise.
EventBatch read_events_file(const std::string& path,
                            std::optional<EventFormat> format = std::nullopt);

}  // namespace etoa
