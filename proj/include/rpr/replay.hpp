#pragma once

#include <cstdint>

#include "rpr/driver.hpp"
#include "rpr/trace_log.hpp"
#include "rpr/translation_table.hpp"

namespace rpr {

// Applies every record in order. Records carrying returned ids rebind those
// virtual ids to the real ids this driver hands out, so the same log replays
// identically no matter how the session allocates reals.
inline void replay_into(DriverState& driver, TranslationTable& table, const TraceLog& log) {
  for (const CallRecord& rec : log.records) apply(driver, rec, table);
}

struct ReplayOutcome {
  DriverState driver;
  TranslationTable table;
  Digest state{};
  Digest frame{};
};

inline ReplayOutcome replay(const TraceLog& log, std::uint64_t real_id_seed = 1) {
  ReplayOutcome out;
  out.driver = DriverState::fresh(real_id_seed);
  auto next = log.derived_next_virtual();
  for (int k = 0; k < kResourceKindCount; ++k)
    out.table.set_next_virtual(static_cast<ResourceKind>(k), next[k]);
  replay_into(out.driver, out.table, log);
  out.state = state_digest(out.driver, out.table);
  out.frame = out.driver.last_frame_digest;
  return out;
}

}  // namespace rpr
