#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "rpr/binary_codec.hpp"
#include "rpr/pruner.hpp"
#include "rpr/replay.hpp"
#include "rpr/workload.hpp"

namespace rpr {

// Log-growth harness: runs the synthetic workload, and at each sample point
// measures raw/pruned encoded sizes, prune and replay time, and checkpoint
// size. The CSV column set is the report schema.

struct BenchRow {
  std::uint32_t frames = 0;
  std::uint64_t raw_log_bytes = 0;
  std::uint64_t pruned_log_bytes = 0;
  double prune_millis = 0.0;
  double replay_millis = 0.0;
  std::uint64_t ckpt_bytes = 0;
};

struct BenchReport {
  std::vector<BenchRow> rows;

  std::string to_csv() const {
    std::string out = "frames,rawLogBytes,prunedLogBytes,pruneMillis,replayMillis,ckptBytes\n";
    for (const BenchRow& r : rows) {
      out += std::to_string(r.frames) + "," + std::to_string(r.raw_log_bytes) + "," +
             std::to_string(r.pruned_log_bytes) + "," + format_ms(r.prune_millis) + "," +
             format_ms(r.replay_millis) + "," + std::to_string(r.ckpt_bytes) + "\n";
    }
    return out;
  }

  std::string to_table() const {
    std::string out;
    out += "frames | raw bytes  | pruned bytes | prune ms | replay ms | ckpt bytes\n";
    out += "-------+------------+--------------+----------+-----------+-----------\n";
    char buf[160];
    for (const BenchRow& r : rows) {
      std::snprintf(buf, sizeof buf, "%6u | %10llu | %12llu | %8.3f | %9.3f | %10llu\n",
                    r.frames, static_cast<unsigned long long>(r.raw_log_bytes),
                    static_cast<unsigned long long>(r.pruned_log_bytes), r.prune_millis,
                    r.replay_millis, static_cast<unsigned long long>(r.ckpt_bytes));
      out += buf;
    }
    return out;
  }

 private:
  static std::string format_ms(double ms) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", ms);
    return buf;
  }
};

inline BenchReport run_bench(const WorkloadProfile& profile,
                             const std::vector<std::uint32_t>& sample_points,
                             bool verify_equivalence = true) {
  BenchReport report;
  Session session;
  Workload workload(profile);
  auto sink = [&](const GeneratedCall& c) { feed(session, c); };
  workload.emit_context(sink);

  std::uint32_t max_frame = 0;
  for (std::uint32_t f : sample_points) max_frame = f > max_frame ? f : max_frame;

  auto now = [] { return std::chrono::steady_clock::now(); };
  auto ms = [](auto d) {
    return std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(d).count();
  };

  std::uint32_t frame = 0;
  auto next_sample = sample_points.begin();
  while (frame < max_frame) {
    workload.emit_frame(sink);
    ++frame;
    if (next_sample != sample_points.end() && frame == *next_sample) {
      ++next_sample;
      BenchRow row;
      row.frames = frame;
      row.raw_log_bytes = encode_binary(session.log()).size();
      auto t0 = now();
      TraceLog pruned = prune(session.log());
      row.prune_millis = ms(now() - t0);
      row.pruned_log_bytes = encode_binary(pruned).size();
      auto t1 = now();
      ReplayOutcome pruned_out = replay(pruned);
      row.replay_millis = ms(now() - t1);
      if (verify_equivalence) {
        ReplayOutcome full_out = replay(session.log());
        if (full_out.state != pruned_out.state || full_out.frame != pruned_out.frame)
          throw Error(Errc::VerifyMismatch,
                      "pruned replay diverged at frame " + std::to_string(frame));
      }
      row.ckpt_bytes = encode_checkpoint(session.make_image(0)).size();
      report.rows.push_back(row);
    }
  }
  return report;
}

}  // namespace rpr
