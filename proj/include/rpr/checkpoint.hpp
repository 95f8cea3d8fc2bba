#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rpr/binary_codec.hpp"
#include "rpr/driver.hpp"
#include "rpr/pruner.hpp"
#include "rpr/replay.hpp"
#include "rpr/trace_log.hpp"
#include "rpr/translation_table.hpp"

namespace rpr {

// Checkpoint container (.rpck): pruned log + restricted blob store +
// translation tables + per-kind virtual-id counters + digests of the state
// the image must reproduce.

inline constexpr std::uint8_t kCheckpointMagic[4] = {'R', 'P', 'C', 'K'};
inline constexpr std::uint16_t kCheckpointVersion = 1;

struct CheckpointImage {
  TraceLog pruned_log;
  TranslationTable tables;
  std::uint64_t frame_count_at_ckpt = 0;
  std::uint64_t wall_clock_ms = 0;
  Digest state{};
  Digest frame{};

  friend bool operator==(const CheckpointImage& a, const CheckpointImage& b) {
    return a.pruned_log == b.pruned_log && a.tables == b.tables &&
           a.frame_count_at_ckpt == b.frame_count_at_ckpt &&
           a.wall_clock_ms == b.wall_clock_ms && a.state == b.state && a.frame == b.frame;
  }
};

inline std::vector<std::uint8_t> encode_checkpoint(const CheckpointImage& img) {
  std::vector<std::uint8_t> out;
  out.insert(out.end(), std::begin(kCheckpointMagic), std::end(kCheckpointMagic));
  wire::put_u16(out, kCheckpointVersion);
  wire::put_u16(out, 0);
  wire::put_bytes(out, std::span<const std::uint8_t>(img.state.data(), img.state.size()));
  wire::put_bytes(out, std::span<const std::uint8_t>(img.frame.data(), img.frame.size()));
  wire::put_varint(out, img.frame_count_at_ckpt);
  wire::put_u64_fixed(out, img.wall_clock_ms);
  wire::put_u8(out, kResourceKindCount);
  for (int k = 0; k < kResourceKindCount; ++k) {
    auto kind = static_cast<ResourceKind>(k);
    wire::put_u8(out, static_cast<std::uint8_t>(kind));
    wire::put_varint(out, img.tables.next_virtual(kind));
    auto pairs = img.tables.mappings(kind);
    wire::put_varint(out, pairs.size());
    for (const auto& [vid, real] : pairs) {
      wire::put_varint(out, vid);
      wire::put_varint(out, real);
    }
  }
  wire::put_varint(out, img.pruned_log.records.size());
  for (const CallRecord& rec : img.pruned_log.records) binary_detail::put_record(out, rec);
  wire::put_varint(out, img.pruned_log.blobs.size());
  img.pruned_log.blobs.for_each([&](const Digest& d, const std::vector<std::uint8_t>& bytes) {
    wire::put_bytes(out, std::span<const std::uint8_t>(d.data(), d.size()));
    wire::put_varint(out, bytes.size());
    wire::put_bytes(out, bytes);
  });
  return out;
}

inline CheckpointImage parse_checkpoint(std::span<const std::uint8_t> data) {
  wire::Reader r(data);
  try {
    if (r.remaining() < 8) throw Error(Errc::BadImage, "image too short");
    auto magic = r.bytes(4);
    if (!std::equal(magic.begin(), magic.end(), std::begin(kCheckpointMagic)))
      throw Error(Errc::BadImage, "not a checkpoint image");
    std::uint16_t version = r.u16();
    if (version != kCheckpointVersion)
      throw Error(Errc::BadImage, "checkpoint version " + std::to_string(version));
    r.u16();
    CheckpointImage img;
    auto sd = r.bytes(32);
    std::copy(sd.begin(), sd.end(), img.state.begin());
    auto fd = r.bytes(32);
    std::copy(fd.begin(), fd.end(), img.frame.begin());
    img.frame_count_at_ckpt = r.varint();
    img.wall_clock_ms = r.u64_fixed();
    std::uint8_t kinds = r.u8();
    if (kinds != kResourceKindCount) throw Error(Errc::BadImage, "bad kind count");
    for (int k = 0; k < kinds; ++k) {
      std::uint8_t kind_byte = r.u8();
      if (kind_byte >= kResourceKindCount) throw Error(Errc::BadImage, "bad kind");
      auto kind = static_cast<ResourceKind>(kind_byte);
      std::uint64_t next = r.varint();
      std::uint64_t n = r.varint();
      std::uint64_t prev_vid = 0;
      for (std::uint64_t i = 0; i < n; ++i) {
        std::uint64_t vid = r.varint();
        std::uint64_t real = r.varint();
        if (vid == 0 || vid <= prev_vid || vid >= next)
          throw Error(Errc::BadImage, "malformed table pair");
        prev_vid = vid;
        img.tables.load_pair(kind, vid, real);
      }
      img.tables.set_next_virtual(kind, next);
    }
    std::uint64_t record_count = r.varint();
    for (std::uint64_t i = 0; i < record_count; ++i) {
      CallRecord rec = binary_detail::read_record(r);
      validate_against_signature(rec);
      img.pruned_log.records.push_back(std::move(rec));
    }
    std::uint64_t blob_count = r.varint();
    for (std::uint64_t i = 0; i < blob_count; ++i) {
      Digest d{};
      auto db = r.bytes(32);
      std::copy(db.begin(), db.end(), d.begin());
      std::uint64_t len = r.varint();
      auto payload = r.bytes(len);
      BlobRef ref = img.pruned_log.blobs.put(payload);
      if (ref.digest != d) throw Error(Errc::BadImage, "blob digest mismatch " + to_hex(d));
    }
    if (!r.done()) throw Error(Errc::BadImage, "trailing bytes");
    img.pruned_log.validate();
    // every virtual id the log mentions must be covered by the tables
    for (const CallRecord& rec : img.pruned_log.records) {
      auto check = [&](ResourceKind kind, std::uint64_t vid) {
        if (vid != 0 && vid >= img.tables.next_virtual(kind))
          throw Error(Errc::BadImage, "log references unassigned virtual id");
      };
      for (const ArgValue& a : rec.args)
        if (a.type == ArgValue::Type::Id) check(a.id.kind, a.id.vid);
      for (const ReturnedId& ri : rec.returned_ids) check(ri.kind, ri.vid);
    }
    return img;
  } catch (const Error& e) {
    if (e.code() == Errc::BadImage) throw;
    throw Error(Errc::BadImage, e.what());
  }
}

inline void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(Errc::Io, "cannot open " + path.string() + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error(Errc::Io, "write failed: " + path.string());
}

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::Io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
  return bytes;
}

struct SessionOptions {
  std::uint64_t real_id_seed = 1;
  bool background_prune = false;
  // counted in frame-root calls (Draw/Finish/SwapBuffers)
  std::uint32_t prune_every_n_frames = 64;
};

struct SessionStats {
  std::uint64_t prune_runs = 0;   // live-set computations on behalf of this session
  std::uint64_t prune_swaps = 0;  // background results swapped into the live log
};

// One recording session: owns the live log, the translation table and the
// driver. All mutation happens on the caller's thread; background prune
// workers only ever see immutable snapshots and hand back keep-sets that the
// recording thread swaps in at its convenience.
class Session {
 public:
  // raw bytes in an argument position are captured into the blob store
  using Arg = CallArg;

  explicit Session(SessionOptions opts = {})
      : opts_(opts), driver_(DriverState::fresh(opts.real_id_seed)) {}

  static Session restore(const std::filesystem::path& path, SessionOptions opts = {}) {
    auto bytes = read_file(path);
    return restore_image(parse_checkpoint(bytes), opts);
  }

  // Rebuilds a live session from a plain log by replaying it.
  static Session from_log(TraceLog log, SessionOptions opts = {}) {
    Session s(opts);
    auto next = log.derived_next_virtual();
    for (int k = 0; k < kResourceKindCount; ++k)
      s.table_.set_next_virtual(static_cast<ResourceKind>(k), next[k]);
    replay_into(s.driver_, s.table_, log);
    s.log_ = std::move(log);
    s.next_seq_ = s.log_.records.empty() ? 0 : s.log_.records.back().seq + 1;
    s.logical_frame_ = s.driver_.frame_count;
    return s;
  }

  static Session restore_image(CheckpointImage img, SessionOptions opts = {}) {
    Session s(opts);
    s.table_ = std::move(img.tables);
    s.table_.reset_reals();
    replay_into(s.driver_, s.table_, img.pruned_log);
    Digest state = state_digest(s.driver_, s.table_);
    if (state != img.state)
      throw Error(Errc::VerifyMismatch, "restored state digest does not match image");
    if (s.driver_.last_frame_digest != img.frame)
      throw Error(Errc::VerifyMismatch, "restored frame digest does not match image");
    s.log_ = std::move(img.pruned_log);
    s.next_seq_ = s.log_.records.empty() ? 0 : s.log_.records.back().seq + 1;
    s.logical_frame_ = img.frame_count_at_ckpt;
    s.pruned_boundary_ = find_last_root(s.log_);
    return s;
  }

  Session(Session&&) = default;
  Session& operator=(Session&&) = default;
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  ~Session() { drain_worker(); }

  std::vector<ReturnedId> record(FunctionId fn, std::vector<Arg> args) {
    if (!open_) throw Error(Errc::SessionClosed, "record after close");
    CallRecord rec;
    rec.seq = next_seq_;
    rec.fn = fn;
    rec.frame_index = logical_frame_;
    rec.args.reserve(args.size());
    for (Arg& a : args) {
      if (auto* bytes = std::get_if<std::vector<std::uint8_t>>(&a))
        rec.args.push_back(ArgValue::blob_ref(log_.blobs.put(*bytes)));
      else
        rec.args.push_back(std::get<ArgValue>(a));
    }
    ApplyResult applied = apply(driver_, rec, table_);
    rec.returned_ids = applied.returned_ids;
    log_.records.push_back(std::move(rec));
    next_seq_ += 1;
    if (classify(fn) == RoleTag::FrameRoot) {
      logical_frame_ += 1;
      maybe_swap_in_prune_result();
      if (opts_.background_prune && frames_since_prune() >= opts_.prune_every_n_frames)
        schedule_prune();
    } else {
      maybe_swap_in_prune_result();
    }
    return applied.returned_ids;
  }

  // Hands an immutable snapshot of the log up to the last frame boundary to
  // a background worker. Skipped when a prune is already pending or there is
  // no boundary to anchor on.
  void schedule_prune() {
    if (!open_ || pending_.valid()) return;
    auto boundary = find_last_root(log_);
    if (!boundary || (pruned_boundary_ && *pruned_boundary_ == *boundary)) return;
    std::vector<CallRecord> snapshot(log_.records.begin(), log_.records.end());
    std::uint64_t up_to = *boundary;
    stats_.prune_runs += 1;
    last_scheduled_boundary_ = up_to;
    frames_at_schedule_ = logical_frame_;
    pending_ = std::async(std::launch::async, [snapshot = std::move(snapshot), up_to]() {
      TraceLog view;
      view.records = std::move(snapshot);
      LiveSet live = compute_live_set(view, up_to);
      return PruneResult{up_to, std::move(live.keep)};
    });
  }

  // Freezes the log at the current frame boundary and writes the image.
  // Reuses a fresh pruned prefix when background pruning already produced
  // one for this boundary. The live session continues unchanged.
  CheckpointImage checkpoint(const std::filesystem::path& path,
                             std::optional<std::uint64_t> wall_clock_ms = std::nullopt) {
    CheckpointImage img = make_image(wall_clock_ms);
    auto bytes = encode_checkpoint(img);
    write_file(path, bytes);
    return img;
  }

  CheckpointImage make_image(std::optional<std::uint64_t> wall_clock_ms = std::nullopt) {
    if (!open_) throw Error(Errc::SessionClosed, "checkpoint after close");
    finish_pending_prune();
    TraceLog pruned;
    if (pruned_boundary_ && find_last_root(log_) == pruned_boundary_) {
      pruned.records = log_.records;
      for (const CallRecord& rec : pruned.records)
        for (const ArgValue& a : rec.args)
          if (a.type == ArgValue::Type::Blob) pruned.blobs.put(log_.blobs.get(a.blob.digest));
    } else {
      stats_.prune_runs += 1;
      pruned = prune(log_);
    }
    CheckpointImage img;
    img.pruned_log = std::move(pruned);
    img.tables = table_;
    img.frame_count_at_ckpt = logical_frame_;
    img.wall_clock_ms = wall_clock_ms.value_or(0);
    img.state = state_digest(driver_, table_);
    img.frame = driver_.last_frame_digest;
    return img;
  }

  // Resume-path cost model: reset the driver the way a window teardown
  // would, then rebuild it by replaying the live log with id rebinding.
  // Returns the replay duration. State must digest-match the pre-reset state.
  std::chrono::microseconds simulate_resume() {
    if (!open_) throw Error(Errc::SessionClosed, "resume after close");
    finish_pending_prune();
    Digest before = state_digest(driver_, table_);
    auto counters = driver_.next_real_id;
    auto t0 = std::chrono::steady_clock::now();
    driver_ = DriverState::fresh();
    driver_.next_real_id = counters;
    table_.reset_reals();
    replay_into(driver_, table_, log_);
    auto t1 = std::chrono::steady_clock::now();
    if (state_digest(driver_, table_) != before)
      throw Error(Errc::VerifyMismatch, "resume replay diverged");
    return std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0);
  }

  void close() {
    drain_worker();
    open_ = false;
  }

  bool is_open() const { return open_; }
  const TraceLog& log() const { return log_; }
  const DriverState& driver() const { return driver_; }
  const TranslationTable& table() const { return table_; }
  const SessionStats& stats() const { return stats_; }
  std::uint64_t frame_count() const { return logical_frame_; }

  Digest current_state_digest() const { return state_digest(driver_, table_); }
  Digest current_frame_digest() const { return driver_.last_frame_digest; }

  // Blocks until a pending background prune has been folded in (tests and
  // checkpointing use this; recording never waits).
  void finish_pending_prune() {
    if (pending_.valid()) {
      PruneResult res = pending_.get();
      swap_in(res);
    }
  }

 private:
  struct PruneResult {
    std::uint64_t up_to = 0;
    std::set<std::uint64_t> keep;
  };

  std::uint32_t frames_since_prune() const {
    return static_cast<std::uint32_t>(logical_frame_ - frames_at_schedule_);
  }

  void maybe_swap_in_prune_result() {
    if (!pending_.valid()) return;
    if (pending_.wait_for(std::chrono::seconds(0)) != std::future_status::ready) return;
    PruneResult res = pending_.get();
    swap_in(res);
  }

  void swap_in(const PruneResult& res) {
    std::vector<CallRecord> next;
    next.reserve(log_.records.size());
    for (CallRecord& rec : log_.records)
      if (rec.seq > res.up_to || res.keep.count(rec.seq)) next.push_back(std::move(rec));
    log_.records = std::move(next);
    BlobStore restricted;
    for (const CallRecord& rec : log_.records)
      for (const ArgValue& a : rec.args)
        if (a.type == ArgValue::Type::Blob) restricted.put(log_.blobs.get(a.blob.digest));
    log_.blobs = std::move(restricted);
    pruned_boundary_ = res.up_to;
    stats_.prune_swaps += 1;
  }

  void drain_worker() {
    if (pending_.valid()) pending_.get();
  }

  SessionOptions opts_;
  TraceLog log_;
  TranslationTable table_;
  DriverState driver_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t logical_frame_ = 0;
  bool open_ = true;
  std::future<PruneResult> pending_;
  std::optional<std::uint64_t> pruned_boundary_;
  std::optional<std::uint64_t> last_scheduled_boundary_;
  std::uint64_t frames_at_schedule_ = 0;
  SessionStats stats_;
};

}  // namespace rpr
