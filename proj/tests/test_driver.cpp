#include <catch2/catch_amalgamated.hpp>

#include "rpr/driver.hpp"
#include "rpr/workload.hpp"

using namespace rpr;

namespace {

struct Rig {
  DriverState state = DriverState::fresh();
  TranslationTable table;
  std::uint64_t seq = 0;

  explicit Rig(std::uint64_t real_seed = 1) : state(DriverState::fresh(real_seed)) {}

  std::vector<ReturnedId> call(FunctionId fn, std::vector<ArgValue> args = {}) {
    CallRecord rec;
    rec.seq = seq++;
    rec.fn = fn;
    rec.args = std::move(args);
    rec.frame_index = state.frame_count;
    return apply(state, rec, table).returned_ids;
  }

  Digest digest() const { return state_digest(state, table); }
};

Errc code_of_call(Rig& rig, FunctionId fn, std::vector<ArgValue> args) {
  try {
    rig.call(fn, std::move(args));
    return Errc::Io;
  } catch (const Error& e) {
    return e.code();
  }
}

// Pinned constant for canonical-serialization v1 (also in docs/format.md).
constexpr const char* kFreshStateDigestHex =
    "9762dc6d697783a3771c3d9d9fc9657d37816a7ee3a4d0e2e1273c1f3a73184f";

}  // namespace

TEST_CASE("fresh state: everything off, empty, identity") {
  DriverState s = DriverState::fresh();
  CHECK_FALSE(s.context_alive);
  CHECK(s.frame_count == 0);
  CHECK(s.capabilities.empty());  // all capabilities initially disabled
  CHECK(s.clear_color == std::array<double, 4>{0, 0, 0, 0});
  CHECK(s.matrix_mode == gl::MODELVIEW);
  CHECK(s.matrices.at(gl::MODELVIEW) == DriverState::identity_matrix());
  CHECK(state_digest(s, TranslationTable{}) == state_digest(DriverState::fresh(), TranslationTable{}));
}

TEST_CASE("fresh state digest is the published constant") {
  CHECK(to_hex(state_digest(DriverState::fresh(), TranslationTable{})) == kFreshStateDigestHex);
}

TEST_CASE("calls before CreateContext are rejected") {
  Rig rig;
  CHECK(code_of_call(rig, FunctionId::Draw,
                     {ArgValue::token(gl::TRIANGLES), ArgValue::integer(0), ArgValue::integer(3)}) ==
        Errc::NoContext);
  rig.call(FunctionId::CreateContext);
  CHECK(rig.state.context_alive);
}

TEST_CASE("capability state is decided by the last Enable/Disable") {
  Rig rig;
  rig.call(FunctionId::CreateContext);
  rig.call(FunctionId::Enable, {ArgValue::token(gl::BLEND)});
  CHECK(rig.state.capabilities.at(gl::BLEND));
  rig.call(FunctionId::Disable, {ArgValue::token(gl::BLEND)});
  CHECK_FALSE(rig.state.capabilities.at(gl::BLEND));

  // property: final value equals the last call, for random sequences
  Rng rng(11);
  for (int round = 0; round < 50; ++round) {
    Rig r2;
    r2.call(FunctionId::CreateContext);
    std::map<std::uint32_t, bool> want;
    for (int i = 0; i < 40; ++i) {
      std::uint32_t cap = rng.chance(0.5) ? gl::BLEND : gl::CULL_FACE;
      bool on = rng.chance(0.5);
      r2.call(on ? FunctionId::Enable : FunctionId::Disable, {ArgValue::token(cap)});
      want[cap] = on;
    }
    for (auto [cap, on] : want) REQUIRE(r2.state.capabilities.at(cap) == on);
  }
}

TEST_CASE("explicitly-disabled and never-touched capabilities digest equally") {
  Rig touched;
  touched.call(FunctionId::CreateContext);
  touched.call(FunctionId::Enable, {ArgValue::token(gl::BLEND)});
  touched.call(FunctionId::Disable, {ArgValue::token(gl::BLEND)});
  Rig untouched;
  untouched.call(FunctionId::CreateContext);
  CHECK(touched.digest() == untouched.digest());
}

TEST_CASE("target writes land on the bound object (aliasing)") {
  Rig rig;
  rig.call(FunctionId::CreateContext);
  auto ids = rig.call(FunctionId::GenTextures, {ArgValue::integer(2)});
  auto bind = [&](std::uint64_t vid) {
    rig.call(FunctionId::BindTexture,
             {ArgValue::token(gl::TEXTURE_2D), ArgValue::id_ref(ResourceKind::Texture, vid)});
  };
  auto set_min_filter = [&](std::uint32_t v) {
    rig.call(FunctionId::TexParameter, {ArgValue::token(gl::TEXTURE_2D),
                                        ArgValue::token(gl::TEXTURE_MIN_FILTER), ArgValue::token(v)});
  };
  bind(ids[0].vid);
  set_min_filter(gl::NEAREST);
  bind(ids[1].vid);
  set_min_filter(gl::LINEAR);
  std::uint64_t r1 = rig.table.to_real(ResourceKind::Texture, ids[0].vid);
  std::uint64_t r2 = rig.table.to_real(ResourceKind::Texture, ids[1].vid);
  CHECK(rig.state.textures.at(r1).params.at({gl::TEXTURE_2D, gl::TEXTURE_MIN_FILTER}).enum_value ==
        gl::NEAREST);
  CHECK(rig.state.textures.at(r2).params.at({gl::TEXTURE_2D, gl::TEXTURE_MIN_FILTER}).enum_value ==
        gl::LINEAR);
}

TEST_CASE("deletion clears bindings; later target writes land in the id-0 sink") {
  Rig rig;
  rig.call(FunctionId::CreateContext);
  auto ids = rig.call(FunctionId::GenTextures, {ArgValue::integer(1)});
  rig.call(FunctionId::BindTexture,
           {ArgValue::token(gl::TEXTURE_2D), ArgValue::id_ref(ResourceKind::Texture, ids[0].vid)});
  rig.call(FunctionId::DeleteTextures, {ArgValue::id_ref(ResourceKind::Texture, ids[0].vid)});
  CHECK(rig.state.texture_bindings.count(gl::TEXTURE_2D) == 0);
  BlobRef blob{sha256(std::string_view("img")), 3};
  rig.call(FunctionId::TexImage,
           {ArgValue::token(gl::TEXTURE_2D), ArgValue::integer(0), ArgValue::blob_ref(blob)});
  REQUIRE(rig.state.textures.count(0) == 1);
  CHECK(rig.state.textures.at(0).images.at({gl::TEXTURE_2D, 0}) == blob);
}

TEST_CASE("use-after-delete and unknown ids are driver errors") {
  Rig rig;
  rig.call(FunctionId::CreateContext);
  auto ids = rig.call(FunctionId::GenTextures, {ArgValue::integer(1)});
  rig.call(FunctionId::DeleteTextures, {ArgValue::id_ref(ResourceKind::Texture, ids[0].vid)});
  CHECK(code_of_call(rig, FunctionId::BindTexture,
                     {ArgValue::token(gl::TEXTURE_2D),
                      ArgValue::id_ref(ResourceKind::Texture, ids[0].vid)}) == Errc::UseAfterDelete);
  CHECK(code_of_call(rig, FunctionId::BindTexture,
                     {ArgValue::token(gl::TEXTURE_2D), ArgValue::id_ref(ResourceKind::Texture, 99)}) ==
        Errc::UnknownVirtualId);
}

TEST_CASE("attaching a deleted shader is an error") {
  Rig rig;
  rig.call(FunctionId::CreateContext);
  auto sh = rig.call(FunctionId::CreateShader, {ArgValue::token(gl::VERTEX_SHADER)});
  auto prog = rig.call(FunctionId::CreateProgram);
  rig.call(FunctionId::DeleteShader, {ArgValue::id_ref(ResourceKind::Shader, sh[0].vid)});
  CHECK(code_of_call(rig, FunctionId::AttachShader,
                     {ArgValue::id_ref(ResourceKind::Program, prog[0].vid),
                      ArgValue::id_ref(ResourceKind::Shader, sh[0].vid)}) == Errc::UseAfterDelete);
}

TEST_CASE("link snapshots survive shader deletion; attachments do not") {
  Rig rig;
  rig.call(FunctionId::CreateContext);
  auto sh = rig.call(FunctionId::CreateShader, {ArgValue::token(gl::VERTEX_SHADER)});
  auto prog = rig.call(FunctionId::CreateProgram);
  rig.call(FunctionId::CompileShader, {ArgValue::id_ref(ResourceKind::Shader, sh[0].vid)});
  rig.call(FunctionId::AttachShader, {ArgValue::id_ref(ResourceKind::Program, prog[0].vid),
                                      ArgValue::id_ref(ResourceKind::Shader, sh[0].vid)});
  rig.call(FunctionId::LinkProgram, {ArgValue::id_ref(ResourceKind::Program, prog[0].vid)});
  rig.call(FunctionId::DeleteShader, {ArgValue::id_ref(ResourceKind::Shader, sh[0].vid)});
  std::uint64_t preal = rig.table.to_real(ResourceKind::Program, prog[0].vid);
  const ProgramObject& p = rig.state.programs.at(preal);
  CHECK(p.attached.empty());
  CHECK(p.linked);
  CHECK(p.linked_snapshot.size() == 1);
  CHECK(p.linked_snapshot.begin()->second.generation == 1);
}

TEST_CASE("state digest is invariant under real-id renaming") {
  auto run = [](std::uint64_t seed) {
    Rig rig(seed);
    rig.call(FunctionId::CreateContext);
    auto ids = rig.call(FunctionId::GenTextures, {ArgValue::integer(3)});
    rig.call(FunctionId::BindTexture,
             {ArgValue::token(gl::TEXTURE_2D), ArgValue::id_ref(ResourceKind::Texture, ids[1].vid)});
    rig.call(FunctionId::TexParameter,
             {ArgValue::token(gl::TEXTURE_2D), ArgValue::token(gl::TEXTURE_MIN_FILTER),
              ArgValue::token(gl::LINEAR)});
    rig.call(FunctionId::Enable, {ArgValue::token(gl::BLEND)});
    return rig;
  };
  Rig a = run(1), b = run(5000);
  std::uint64_t real_a = a.table.to_real(ResourceKind::Texture, 2);
  std::uint64_t real_b = b.table.to_real(ResourceKind::Texture, 2);
  CHECK(real_a != real_b);  // the sessions really did allocate differently
  CHECK(a.digest() == b.digest());
  CHECK(render(a.state) == render(b.state));
}

TEST_CASE("digests react to observable changes") {
  Rig rig;
  rig.call(FunctionId::CreateContext);
  Digest before = rig.digest();
  rig.call(FunctionId::Enable, {ArgValue::token(gl::BLEND)});
  CHECK(rig.digest() != before);

  Digest frame_before = render(rig.state);
  rig.call(FunctionId::ClearColor,
           {ArgValue::real(0.1), ArgValue::real(0.2), ArgValue::real(0.3), ArgValue::real(1.0)});
  CHECK(render(rig.state) != frame_before);
  CHECK(render(rig.state) == render(rig.state));
}

TEST_CASE("frame roots bump the counter and stamp the frame digest") {
  Rig rig;
  rig.call(FunctionId::CreateContext);
  CHECK(rig.state.last_frame_digest == Digest{});
  rig.call(FunctionId::Draw, {ArgValue::token(gl::TRIANGLES), ArgValue::integer(0), ArgValue::integer(3)});
  CHECK(rig.state.frame_count == 1);
  CHECK(rig.state.last_frame_digest == render(rig.state));
  rig.call(FunctionId::Finish);
  rig.call(FunctionId::SwapBuffers);
  CHECK(rig.state.frame_count == 3);
}

TEST_CASE("ResetContext wipes state but keeps allocating fresh real ids") {
  Rig rig;
  rig.call(FunctionId::CreateContext);
  auto first = rig.call(FunctionId::GenTextures, {ArgValue::integer(1)});
  std::uint64_t first_real = rig.table.to_real(ResourceKind::Texture, first[0].vid);
  rig.call(FunctionId::Enable, {ArgValue::token(gl::BLEND)});
  rig.call(FunctionId::ResetContext);
  CHECK_FALSE(rig.state.context_alive);
  CHECK(rig.state.textures.empty());
  CHECK(rig.state.capabilities.empty());
  rig.call(FunctionId::CreateContext);
  auto second = rig.call(FunctionId::GenTextures, {ArgValue::integer(1)});
  std::uint64_t second_real = rig.table.to_real(ResourceKind::Texture, second[0].vid);
  CHECK(second_real > first_real);  // counters survive the wipe
  CHECK(second[0].vid > first[0].vid);
}

TEST_CASE("a failing call leaves the state untouched") {
  Rig rig;
  rig.call(FunctionId::CreateContext);
  rig.call(FunctionId::Enable, {ArgValue::token(gl::BLEND)});
  Digest before = rig.digest();
  CHECK(code_of_call(rig, FunctionId::BindTexture,
                     {ArgValue::token(gl::TEXTURE_2D), ArgValue::id_ref(ResourceKind::Texture, 42)}) ==
        Errc::UnknownVirtualId);
  CHECK(code_of_call(rig, FunctionId::Enable, {ArgValue::token(0xDEAD)}) == Errc::InvalidCall);
  CHECK(rig.digest() == before);
}

TEST_CASE("render requires a context") {
  CHECK_THROWS_MATCHES(render(DriverState::fresh()), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::NoContext; }));
}
