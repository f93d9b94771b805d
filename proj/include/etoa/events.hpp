#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace etoa {

enum class Channel : std::uint8_t { trigger = 0, detector1 = 1, detector2 = 2 };

/// One time tag. `time` is in units of tau_s relative to the trigger.
struct EventRecord {
  std::uint64_t trigger_id = 0;
  Channel channel = Channel::trigger;
  double time = 0.0;
};

/// Bitwise equality (times compared by their IEEE-754 bits).
bool operator==(const EventRecord& a, const EventRecord& b) noexcept;

/// Ordered detection records. Trigger ids are nondecreasing and each
/// (trigger_id, channel) pair occurs at most once; push_back rejects records
/// that would break this with InvalidArgument.
class EventBatch {
 public:
  EventBatch() = default;
  explicit EventBatch(std::vector<EventRecord> records);

  void push_back(const EventRecord& record);
  void reserve(std::size_t n) { records_.reserve(n); }

  std::span<const EventRecord> records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }

  friend bool operator==(const EventBatch& a, const EventBatch& b) noexcept {
    return a.records_ == b.records_;
  }

 private:
  std::vector<EventRecord> records_;
  std::uint8_t seen_channels_ = 0;  // channel mask of the current trigger id
};

/// Arrival times of triggers with both detectors firing, matched by trigger id.
struct Coincidences {
  std::vector<double> t1;
  std::vector<double> t2;
  std::vector<double> difference;  // t1 - t2
  std::uint64_t triggers = 0;
};

Coincidences match_coincidences(const EventBatch& batch);

}  // namespace etoa
