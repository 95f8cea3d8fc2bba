#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rpr/catalog.hpp"
#include "rpr/errors.hpp"

namespace rpr {

// Per-kind bijection between application-visible virtual ids and
// driver-session real ids. Virtual ids are handed out by a monotone counter
// starting at 1 and are never reused, even after deletion; "previously
// assigned" is therefore exactly vid < next_virtual.
class TranslationTable {
 public:
  std::uint64_t assign_virtual(ResourceKind kind, std::uint64_t real_id) {
    KindTable& t = kinds_[idx(kind)];
    if (t.real_to_virtual.count(real_id))
      throw Error(Errc::DuplicateReal, key(kind, real_id));
    std::uint64_t vid = t.next_virtual++;
    t.virtual_to_real[vid] = real_id;
    t.real_to_virtual[real_id] = vid;
    return vid;
  }

  std::uint64_t to_real(ResourceKind kind, std::uint64_t vid) const {
    if (vid == 0) return 0;  // reserved unbind
    const KindTable& t = kinds_[idx(kind)];
    auto it = t.virtual_to_real.find(vid);
    if (it == t.virtual_to_real.end()) throw Error(Errc::UnknownVirtualId, key(kind, vid));
    return it->second;
  }

  std::uint64_t to_virtual(ResourceKind kind, std::uint64_t real_id) const {
    if (real_id == 0) return 0;
    const KindTable& t = kinds_[idx(kind)];
    auto it = t.real_to_virtual.find(real_id);
    if (it == t.real_to_virtual.end())
      throw Error(Errc::UntranslatableRealId, key(kind, real_id));
    return it->second;
  }

  bool has_virtual(ResourceKind kind, std::uint64_t vid) const {
    return kinds_[idx(kind)].virtual_to_real.count(vid) != 0;
  }

  // Replay/restart path: point an already-assigned virtual id at the real id
  // the new driver session handed back.
  void rebind(ResourceKind kind, std::uint64_t vid, std::uint64_t new_real_id) {
    KindTable& t = kinds_[idx(kind)];
    if (vid == 0 || vid >= t.next_virtual) throw Error(Errc::UnknownVirtualId, key(kind, vid));
    if (t.real_to_virtual.count(new_real_id))
      throw Error(Errc::DuplicateReal, key(kind, new_real_id));
    auto it = t.virtual_to_real.find(vid);
    if (it != t.virtual_to_real.end()) {
      t.real_to_virtual.erase(it->second);
      it->second = new_real_id;
    } else {
      t.virtual_to_real[vid] = new_real_id;
    }
    t.real_to_virtual[new_real_id] = vid;
  }

  // Drops all real-id pairings but keeps the counters. Used when a restart
  // replays against a fresh driver: every surviving object is rebound as its
  // creation call replays, and stale pre-restart reals must not collide.
  void reset_reals() {
    for (KindTable& t : kinds_) {
      t.virtual_to_real.clear();
      t.real_to_virtual.clear();
    }
  }

  // Deserialization path: install a (virtual, real) pair as-is.
  void load_pair(ResourceKind kind, std::uint64_t vid, std::uint64_t real_id) {
    KindTable& t = kinds_[idx(kind)];
    if (vid == 0 || t.virtual_to_real.count(vid))
      throw Error(Errc::BadImage, "duplicate or zero virtual id " + key(kind, vid));
    if (t.real_to_virtual.count(real_id))
      throw Error(Errc::DuplicateReal, key(kind, real_id));
    t.virtual_to_real[vid] = real_id;
    t.real_to_virtual[real_id] = vid;
    if (vid >= t.next_virtual) t.next_virtual = vid + 1;
  }

  std::uint64_t next_virtual(ResourceKind kind) const { return kinds_[idx(kind)].next_virtual; }

  void set_next_virtual(ResourceKind kind, std::uint64_t v) {
    if (v < 1) throw Error(Errc::BadImage, "next_virtual below 1");
    kinds_[idx(kind)].next_virtual = v;
  }

  // Sorted (virtual, real) pairs; the checkpoint container serializes these.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> mappings(ResourceKind kind) const {
    const KindTable& t = kinds_[idx(kind)];
    return {t.virtual_to_real.begin(), t.virtual_to_real.end()};
  }

  bool bijection_ok() const {
    for (const KindTable& t : kinds_) {
      if (t.virtual_to_real.size() != t.real_to_virtual.size()) return false;
      for (const auto& [v, r] : t.virtual_to_real) {
        auto it = t.real_to_virtual.find(r);
        if (it == t.real_to_virtual.end() || it->second != v) return false;
        if (v >= t.next_virtual) return false;
      }
    }
    return true;
  }

  friend bool operator==(const TranslationTable& a, const TranslationTable& b) {
    for (int k = 0; k < kResourceKindCount; ++k) {
      if (a.kinds_[k].virtual_to_real != b.kinds_[k].virtual_to_real) return false;
      if (a.kinds_[k].next_virtual != b.kinds_[k].next_virtual) return false;
    }
    return true;
  }

 private:
  struct KindTable {
    std::map<std::uint64_t, std::uint64_t> virtual_to_real;
    std::map<std::uint64_t, std::uint64_t> real_to_virtual;
    std::uint64_t next_virtual = 1;
  };

  static std::size_t idx(ResourceKind k) { return static_cast<std::size_t>(k); }

  static std::string key(ResourceKind kind, std::uint64_t id) {
    return std::string(kind_name(kind)) + "#" + std::to_string(id);
  }

  std::array<KindTable, kResourceKindCount> kinds_;
};

}  // namespace rpr
