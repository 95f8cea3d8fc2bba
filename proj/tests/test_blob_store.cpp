#include <catch2/catch_amalgamated.hpp>

#include "rpr/blob_store.hpp"
#include "rpr/workload.hpp"

using namespace rpr;

TEST_CASE("identical payloads dedup to one entry") {
  BlobStore store;
  std::vector<std::uint8_t> mib(1 << 20, 0x5a);
  BlobRef first = store.put(mib);
  for (int i = 0; i < 7; ++i) {
    BlobRef again = store.put(mib);
    CHECK(again == first);
  }
  CHECK(store.size() == 1);
  CHECK(store.total_bytes() == (1u << 20));
}

TEST_CASE("get returns exactly the stored bytes") {
  BlobStore store;
  Rng rng(42);
  auto bytes = rng.bytes(513);
  BlobRef ref = store.put(bytes);
  CHECK(ref.length == 513);
  CHECK(store.get(ref.digest) == bytes);
}

TEST_CASE("missing digests raise MissingBlob") {
  BlobStore store;
  Digest d{};
  d[0] = 1;
  CHECK_THROWS_MATCHES(store.get(d), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::MissingBlob;
                       }));
}

TEST_CASE("distinct payloads get distinct digests (randomized sanity)") {
  Rng rng(7);
  for (int i = 0; i < 100000; ++i) {
    auto a = rng.bytes(8 + rng.below(24));
    auto b = rng.bytes(8 + rng.below(24));
    if (a == b) continue;
    REQUIRE(sha256(a) != sha256(b));
  }
}

TEST_CASE("empty payloads are storable") {
  BlobStore store;
  BlobRef ref = store.put(std::vector<std::uint8_t>{});
  CHECK(ref.length == 0);
  CHECK(store.get(ref.digest).empty());
}
