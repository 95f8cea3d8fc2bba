#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "rpr/translation_table.hpp"
#include "rpr/workload.hpp"

using namespace rpr;

TEST_CASE("virtual ids start at 1 and count up per kind") {
  TranslationTable t;
  CHECK(t.assign_virtual(ResourceKind::Texture, 100) == 1);
  CHECK(t.assign_virtual(ResourceKind::Texture, 101) == 2);
  CHECK(t.assign_virtual(ResourceKind::Buffer, 100) == 1);  // kinds are independent
  CHECK(t.assign_virtual(ResourceKind::Texture, 102) == 3);
  CHECK(t.assign_virtual(ResourceKind::Texture, 103) == 4);
}

TEST_CASE("virtual ids are never reused, even after deletion") {
  // deletion never touches the table, so the counter alone decides
  TranslationTable t;
  for (std::uint64_t r = 1; r <= 4; ++r) t.assign_virtual(ResourceKind::Texture, r);
  // "#2 deleted" happens at the driver; the next assignment still yields 5
  CHECK(t.assign_virtual(ResourceKind::Texture, 50) == 5);
}

TEST_CASE("to_real maps 0 to 0 and rejects unknown ids") {
  TranslationTable t;
  CHECK(t.to_real(ResourceKind::Texture, 0) == 0);
  std::uint64_t vid = t.assign_virtual(ResourceKind::Texture, 42);
  CHECK(t.to_real(ResourceKind::Texture, vid) == 42);
  CHECK_THROWS_MATCHES(t.to_real(ResourceKind::Texture, 9), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::UnknownVirtualId; }));
}

TEST_CASE("duplicate reals are rejected") {
  TranslationTable t;
  t.assign_virtual(ResourceKind::Shader, 7);
  CHECK_THROWS_MATCHES(t.assign_virtual(ResourceKind::Shader, 7), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::DuplicateReal; }));
}

TEST_CASE("rebind points an existing virtual id at a new real id") {
  TranslationTable t;
  std::uint64_t vid = t.assign_virtual(ResourceKind::Texture, 5);
  t.rebind(ResourceKind::Texture, vid, 42);
  CHECK(t.to_real(ResourceKind::Texture, vid) == 42);
  CHECK(t.to_virtual(ResourceKind::Texture, 42) == vid);
  // the old real is gone
  CHECK_THROWS_AS(t.to_virtual(ResourceKind::Texture, 5), Error);
  CHECK(t.bijection_ok());

  CHECK_THROWS_MATCHES(t.rebind(ResourceKind::Texture, 7, 50), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::UnknownVirtualId; }));
  t.assign_virtual(ResourceKind::Texture, 60);
  CHECK_THROWS_MATCHES(t.rebind(ResourceKind::Texture, vid, 60), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::DuplicateReal; }));
}

TEST_CASE("rebinding every live id preserves the bijection (exhaustive small tables)") {
  for (int n = 1; n <= 4; ++n) {
    std::vector<std::uint64_t> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = 100 + static_cast<std::uint64_t>(i);
    std::sort(perm.begin(), perm.end());
    do {
      TranslationTable t;
      for (int i = 1; i <= n; ++i)
        t.assign_virtual(ResourceKind::Buffer, static_cast<std::uint64_t>(i));
      for (int i = 0; i < n; ++i)
        t.rebind(ResourceKind::Buffer, static_cast<std::uint64_t>(i + 1), perm[static_cast<std::size_t>(i)]);
      REQUIRE(t.bijection_ok());
      for (int i = 0; i < n; ++i)
        REQUIRE(t.to_real(ResourceKind::Buffer, static_cast<std::uint64_t>(i + 1)) ==
                perm[static_cast<std::size_t>(i)]);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}

TEST_CASE("bijection holds under random operation sequences") {
  Rng rng(2024);
  for (int round = 0; round < 200; ++round) {
    TranslationTable t;
    std::vector<std::uint64_t> vids;
    std::uint64_t next_real = 1;
    for (int step = 0; step < 60; ++step) {
      switch (rng.below(3)) {
        case 0:
          vids.push_back(t.assign_virtual(ResourceKind::Texture, next_real++));
          break;
        case 1:
          if (!vids.empty())
            t.rebind(ResourceKind::Texture, vids[rng.below(vids.size())], next_real++);
          break;
        default:
          if (!vids.empty()) {
            std::uint64_t vid = vids[rng.below(vids.size())];
            CHECK(t.to_virtual(ResourceKind::Texture, t.to_real(ResourceKind::Texture, vid)) == vid);
          }
          break;
      }
      REQUIRE(t.bijection_ok());
    }
  }
}

TEST_CASE("reset_reals keeps counters but drops pairings") {
  TranslationTable t;
  t.assign_virtual(ResourceKind::Program, 9);
  t.assign_virtual(ResourceKind::Program, 10);
  t.reset_reals();
  CHECK(t.next_virtual(ResourceKind::Program) == 3);
  CHECK_THROWS_AS(t.to_real(ResourceKind::Program, 1), Error);
  // previously assigned ids can be rebound onto fresh reals
  t.rebind(ResourceKind::Program, 1, 1);
  t.rebind(ResourceKind::Program, 2, 2);
  CHECK(t.bijection_ok());
}
