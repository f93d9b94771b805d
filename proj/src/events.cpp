#include "etoa/events.hpp"

#include <bit>
#include <string>

#include "etoa/errors.hpp"

namespace etoa {

bool operator==(const EventRecord& a, const EventRecord& b) noexcept {
  return a.trigger_id == b.trigger_id && a.channel == b.channel &&
         std::bit_cast<std::uint64_t>(a.time) == std::bit_cast<std::uint64_t>(b.time);
}

EventBatch::EventBatch(std::vector<EventRecord> records) {
  records_.reserve(records.size());
  for (const auto& r : records) push_back(r);
}

void EventBatch::push_back(const EventRecord& record) {
  const auto channel = static_cast<std::uint8_t>(record.channel);
  if (channel > 2) {
    throw InvalidArgument("EventBatch: channel " + std::to_string(channel) + " out of range");
  }
  const std::uint8_t bit = static_cast<std::uint8_t>(1u << channel);
  if (!records_.empty()) {
    const auto previous = records_.back().trigger_id;
    if (record.trigger_id < previous) {
      throw InvalidArgument("EventBatch: trigger ids must be nondecreasing (" +
                            std::to_string(record.trigger_id) + " after " +
                            std::to_string(previous) + ")");
    }
    if (record.trigger_id == previous) {
      if (seen_channels_ & bit) {
        throw InvalidArgument("EventBatch: duplicate channel " + std::to_string(channel) +
                              " for trigger " + std::to_string(record.trigger_id));
      }
      seen_channels_ |= bit;
      records_.push_back(record);
      return;
    }
  }
  seen_channels_ = bit;
  records_.push_back(record);
}

Coincidences match_coincidences(const EventBatch& batch) {
  Coincidences out;
  const auto records = batch.records();
  std::size_t k = 0;
  while (k < records.size()) {
    const auto id = records[k].trigger_id;
    bool has1 = false;
    bool has2 = false;
    double t1 = 0.0;
    double t2 = 0.0;
    bool has_trigger = false;
    for (; k < records.size() && records[k].trigger_id == id; ++k) {
      switch (records[k].channel) {
        case Channel::trigger: has_trigger = true; break;
        case Channel::detector1: has1 = true; t1 = records[k].time; break;
        case Channel::detector2: has2 = true; t2 = records[k].time; break;
      }
    }
    if (has_trigger) ++out.triggers;
    if (has1 && has2) {
      out.t1.push_back(t1);
      out.t2.push_back(t2);
      out.difference.push_back(t1 - t2);
    }
  }
  return out;
}

}  // namespace etoa
