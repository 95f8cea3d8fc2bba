#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <vector>

#include "rpr/call.hpp"
#include "rpr/digest.hpp"
#include "rpr/errors.hpp"

namespace rpr {

// Content-addressed byte store. Identical payloads collapse to one entry.
// Concurrent reads are allowed; writes are exclusive (single-writer recorder).
class BlobStore {
 public:
  BlobStore() = default;

  BlobStore(const BlobStore& other) {
    std::shared_lock lk(other.mutex_);
    entries_ = other.entries_;
    total_bytes_ = other.total_bytes_;
  }

  BlobStore& operator=(const BlobStore& other) {
    if (this == &other) return *this;
    std::map<Digest, std::vector<std::uint8_t>> copy;
    std::uint64_t bytes;
    {
      std::shared_lock lk(other.mutex_);
      copy = other.entries_;
      bytes = other.total_bytes_;
    }
    std::unique_lock lk(mutex_);
    entries_ = std::move(copy);
    total_bytes_ = bytes;
    return *this;
  }

  BlobStore(BlobStore&& other) noexcept {
    std::unique_lock lk(other.mutex_);
    entries_ = std::move(other.entries_);
    total_bytes_ = other.total_bytes_;
    other.total_bytes_ = 0;
  }

  BlobStore& operator=(BlobStore&& other) noexcept {
    if (this == &other) return *this;
    std::map<Digest, std::vector<std::uint8_t>> stolen;
    std::uint64_t bytes;
    {
      std::unique_lock lk(other.mutex_);
      stolen = std::move(other.entries_);
      bytes = other.total_bytes_;
      other.total_bytes_ = 0;
    }
    std::unique_lock lk(mutex_);
    entries_ = std::move(stolen);
    total_bytes_ = bytes;
    return *this;
  }

  BlobRef put(std::span<const std::uint8_t> bytes) {
    Digest d = sha256(bytes);
    std::unique_lock lk(mutex_);
    auto [it, inserted] = entries_.try_emplace(d, bytes.begin(), bytes.end());
    if (inserted) total_bytes_ += bytes.size();
    return BlobRef{d, bytes.size()};
  }

  std::vector<std::uint8_t> get(const Digest& d) const {
    std::shared_lock lk(mutex_);
    auto it = entries_.find(d);
    if (it == entries_.end()) throw Error(Errc::MissingBlob, to_hex(d));
    return it->second;
  }

  bool contains(const Digest& d) const {
    std::shared_lock lk(mutex_);
    return entries_.count(d) != 0;
  }

  std::size_t size() const {
    std::shared_lock lk(mutex_);
    return entries_.size();
  }

  std::uint64_t total_bytes() const {
    std::shared_lock lk(mutex_);
    return total_bytes_;
  }

  // Entries in digest order (the canonical encode order for both codecs).
  template <typename Fn>
  void for_each(Fn&& fn) const {
    std::shared_lock lk(mutex_);
    for (const auto& [d, bytes] : entries_) fn(d, bytes);
  }

  friend bool operator==(const BlobStore& a, const BlobStore& b) {
    std::shared_lock la(a.mutex_, std::defer_lock);
    std::shared_lock lb(b.mutex_, std::defer_lock);
    std::lock(la, lb);
    return a.entries_ == b.entries_;
  }

 private:
  mutable std::shared_mutex mutex_;
  std::map<Digest, std::vector<std::uint8_t>> entries_;
  std::uint64_t total_bytes_ = 0;
};

}  // namespace rpr
