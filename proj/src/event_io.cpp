#include "etoa/event_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

#include "etoa/errors.hpp"

namespace etoa {
namespace {

void put_u64(char* out, std::uint64_t v) {
  for (int k = 0; k < 8; ++k) out[k] = static_cast<char>((v >> (8 * k)) & 0xffu);
}

std::uint64_t get_u64(const unsigned char* in) {
  std::uint64_t v = 0;
  for (int k = 7; k >= 0; --k) v = (v << 8) | in[k];
  return v;
}

void write_binary(const EventBatch& batch, std::ostream& out) {
  std::array<char, kEventHeaderBytes> header{};
  std::memcpy(header.data(), kEventMagic, 4);
  header[4] = static_cast<char>(kEventFormatVersion);
  put_u64(header.data() + 5, batch.size());
  out.write(header.data(), header.size());

  std::vector<char> buffer;
  buffer.reserve(kEventRecordBytes * 4096);
  std::array<char, kEventRecordBytes> rec{};
  for (const auto& r : batch.records()) {
    put_u64(rec.data(), r.trigger_id);
    rec[8] = static_cast<char>(r.channel);
    put_u64(rec.data() + 9, std::bit_cast<std::uint64_t>(r.time));
    buffer.insert(buffer.end(), rec.begin(), rec.end());
    if (buffer.size() >= kEventRecordBytes * 4096) {
      out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
      buffer.clear();
    }
  }
  out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
}

void write_text(const EventBatch& batch, std::ostream& out) {
  out << "trigger_id,channel,time\n";
  char line[96];
  for (const auto& r : batch.records()) {
    const int len = std::snprintf(line, sizeof line, "%llu,%u,%.17g\n",
                                  static_cast<unsigned long long>(r.trigger_id),
                                  static_cast<unsigned>(r.channel), r.time);
    out.write(line, len);
  }
}

EventBatch read_binary(std::istream& in) {
  std::vector<unsigned char> data((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (data.size() < kEventHeaderBytes) {
    if (data.size() >= 4 && std::memcmp(data.data(), kEventMagic, 4) != 0) {
      throw FormatError(FormatError::Kind::bad_header, "event file: bad magic", 0);
    }
    throw FormatError(FormatError::Kind::truncated,
                      "event file: truncated header (" + std::to_string(data.size()) + " bytes)",
                      data.size());
  }
  if (std::memcmp(data.data(), kEventMagic, 4) != 0) {
    throw FormatError(FormatError::Kind::bad_header, "event file: bad magic", 0);
  }
  if (data[4] != kEventFormatVersion) {
    throw FormatError(FormatError::Kind::bad_header,
                      "event file: unsupported version " + std::to_string(data[4]), 4);
  }
  const std::uint64_t count = get_u64(data.data() + 5);
  const std::size_t body = data.size() - kEventHeaderBytes;
  if (body % kEventRecordBytes != 0) {
    const std::uint64_t offset = kEventHeaderBytes + body / kEventRecordBytes * kEventRecordBytes;
    throw FormatError(FormatError::Kind::truncated,
                      "event file: truncated record at byte offset " + std::to_string(offset),
                      offset);
  }
  if (body / kEventRecordBytes != count) {
    throw FormatError(FormatError::Kind::count_mismatch,
                      "event file: header declares " + std::to_string(count) +
                          " records but the file holds " +
                          std::to_string(body / kEventRecordBytes),
                      5);
  }

  EventBatch batch;
  batch.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    const std::uint64_t offset = kEventHeaderBytes + k * kEventRecordBytes;
    const unsigned char* rec = data.data() + offset;
    const std::uint8_t channel = rec[8];
    if (channel > 2) {
      throw FormatError(FormatError::Kind::corrupt_record,
                        "event file: invalid channel " + std::to_string(channel) +
                            " at byte offset " + std::to_string(offset + 8),
                        offset + 8);
    }
    const EventRecord record{get_u64(rec), static_cast<Channel>(channel),
                             std::bit_cast<double>(get_u64(rec + 9))};
    try {
      batch.push_back(record);
    } catch (const InvalidArgument& e) {
      throw FormatError(FormatError::Kind::corrupt_record,
                        std::string("event file: record at byte offset ") +
                            std::to_string(offset) + ": " + e.what(),
                        offset);
    }
  }
  return batch;
}

template <class T>
bool parse_field(std::string_view field, T& value) {
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  return ec == std::errc() && ptr == field.data() + field.size();
}

EventBatch read_text(std::istream& in) {
  const auto bad = [](std::uint64_t line_no, const std::string& what) {
    return FormatError(FormatError::Kind::bad_text,
                       "event file line " + std::to_string(line_no) + ": " + what, std::nullopt,
                       line_no);
  };
  std::string line;
  std::uint64_t line_no = 0;
  if (!std::getline(in, line)) throw bad(1, "missing header 'trigger_id,channel,time'");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "trigger_id,channel,time") {
    throw bad(1, "expected header 'trigger_id,channel,time'");
  }
  EventBatch batch;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string_view view(line);
    const auto c1 = view.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : view.find(',', c1 + 1);
    if (c2 == std::string_view::npos || view.find(',', c2 + 1) != std::string_view::npos) {
      throw bad(line_no, "expected 3 comma-separated fields");
    }
    std::uint64_t id = 0;
    unsigned channel = 0;
    double time = 0.0;
    if (!parse_field(view.substr(0, c1), id)) throw bad(line_no, "invalid trigger_id");
    if (!parse_field(view.substr(c1 + 1, c2 - c1 - 1), channel)) {
      throw bad(line_no, "invalid channel");
    }
    if (!parse_field(view.substr(c2 + 1), time)) throw bad(line_no, "invalid time");
    if (channel > 2) {
      throw FormatError(FormatError::Kind::corrupt_record,
                        "event file line " + std::to_string(line_no) + ": invalid channel " +
                            std::to_string(channel),
                        std::nullopt, line_no);
    }
    try {
      batch.push_back({id, static_cast<Channel>(channel), time});
    } catch (const InvalidArgument& e) {
      throw FormatError(FormatError::Kind::corrupt_record,
                        "event file line " + std::to_string(line_no) + ": " + e.what(),
                        std::nullopt, line_no);
    }
  }
  return batch;
}

}  // namespace

void write_events(const EventBatch& batch, std::ostream& out, EventFormat format) {
  if (format == EventFormat::binary) {
    write_binary(batch, out);
  } else {
    write_text(batch, out);
  }
}

EventBatch read_events(std::istream& in, EventFormat format) {
  return format == EventFormat::binary ? read_binary(in) : read_text(in);
}

void write_events_file(const EventBatch& batch, const std::string& path, EventFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_events(batch, out, format);
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

EventBatch read_events_file(const std::string& path, std::optional<EventFormat> format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  if (!format) {
    char head[4] = {};
    in.read(head, 4);
    const bool binary = in.gcount() == 4 && std::memcmp(head, kEventMagic, 4) == 0;
    format = binary ? EventFormat::binary : EventFormat::text;
    in.clear();
    in.seekg(0);
  }
  return read_events(in, *format);
}

}  // namespace etoa
