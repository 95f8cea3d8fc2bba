#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rpr/blob_store.hpp"
#include "rpr/call.hpp"

namespace rpr {

// Ordered call records plus the blob store they reference. Appended by a
// single writer; snapshots/copies are handed to prune workers and codecs.
struct TraceLog {
  std::vector<CallRecord> records;
  BlobStore blobs;

  friend bool operator==(const TraceLog& a, const TraceLog& b) {
    return a.records == b.records && a.blobs == b.blobs;
  }

  // seq strictly increasing, frame_index non-decreasing, blob refs resolvable
  void validate() const {
    bool first = true;
    std::uint64_t prev_seq = 0, prev_frame = 0;
    for (const CallRecord& r : records) {
      if (!first && r.seq <= prev_seq)
        throw Error(Errc::InvalidCall, "seq not strictly increasing", r.seq);
      if (!first && r.frame_index < prev_frame)
        throw Error(Errc::InvalidCall, "frame_index decreasing", r.seq);
      prev_seq = r.seq;
      prev_frame = r.frame_index;
      first = false;
      validate_against_signature(r);
      for (const ArgValue& a : r.args)
        if (a.type == ArgValue::Type::Blob && !blobs.contains(a.blob.digest))
          throw Error(Errc::MissingBlob, to_hex(a.blob.digest));
    }
  }

  // Virtual-id counters are derived: ids are assigned 1,2,3,... per kind,
  // so the next free id is one past the largest ever returned.
  std::array<std::uint64_t, kResourceKindCount> derived_next_virtual() const {
    std::array<std::uint64_t, kResourceKindCount> next{};
    next.fill(1);
    for (const CallRecord& r : records)
      for (const ReturnedId& ri : r.returned_ids) {
        auto k = static_cast<std::size_t>(ri.kind);
        if (ri.vid + 1 > next[k]) next[k] = ri.vid + 1;
      }
    return next;
  }
};

// Drops blob entries no record references (used by prune and checkpointing).
inline BlobStore restrict_blobs(const TraceLog& log) {
  BlobStore out;
  for (const CallRecord& r : log.records)
    for (const ArgValue& a : r.args)
      if (a.type == ArgValue::Type::Blob) {
        auto bytes = log.blobs.get(a.blob.digest);
        out.put(bytes);
      }
  return out;
}

}  // namespace rpr
