#include <catch2/catch_amalgamated.hpp>

#include "rpr/category.hpp"

using namespace rpr;

namespace {

CallRecord rec(std::uint64_t seq, FunctionId fn, std::vector<ArgValue> args) {
  CallRecord r;
  r.seq = seq;
  r.fn = fn;
  r.args = std::move(args);
  return r;
}

}  // namespace

TEST_CASE("capability categories discriminate by capability, not by function") {
  SelectorContext ctx;
  auto en = category_key(rec(0, FunctionId::Enable, {ArgValue::token(gl::BLEND)}), ctx);
  auto dis = category_key(rec(1, FunctionId::Disable, {ArgValue::token(gl::BLEND)}), ctx);
  CHECK(en == dis);
  CHECK(en.family == CategoryKey::Family::Capability);
  CHECK(en.disc[0] == gl::BLEND);
  auto other = category_key(rec(2, FunctionId::Enable, {ArgValue::token(gl::DEPTH_TEST)}), ctx);
  CHECK(en != other);
  CHECK(en.to_string() == "(capability," + std::to_string(gl::BLEND) + ")");
}

TEST_CASE("client capability categories are separate from server capabilities") {
  SelectorContext ctx;
  auto server = category_key(rec(0, FunctionId::Enable, {ArgValue::token(gl::BLEND)}), ctx);
  auto client =
      category_key(rec(1, FunctionId::EnableClientState, {ArgValue::token(gl::VERTEX_ARRAY)}), ctx);
  CHECK(server.family != client.family);
}

TEST_CASE("texture parameter writes key on the resolved owner triple") {
  SelectorContext ctx;
  ctx.observe(rec(1, FunctionId::BindTexture,
                  {ArgValue::token(gl::TEXTURE_2D), ArgValue::id_ref(ResourceKind::Texture, 5)}));
  auto key = category_key(rec(2, FunctionId::TexParameter,
                              {ArgValue::token(gl::TEXTURE_2D),
                               ArgValue::token(gl::TEXTURE_MIN_FILTER), ArgValue::token(gl::LINEAR)}),
                          ctx);
  CHECK(key.family == CategoryKey::Family::TexParam);
  CHECK(key.disc[0] == 5);
  CHECK(key.disc[1] == gl::TEXTURE_2D);
  CHECK(key.disc[2] == gl::TEXTURE_MIN_FILTER);

  // identical triple, later in the log, unrelated calls in between
  ctx.observe(rec(3, FunctionId::ClearColor,
                  {ArgValue::real(0), ArgValue::real(0), ArgValue::real(0), ArgValue::real(1)}));
  auto again = category_key(rec(4, FunctionId::TexParameter,
                                {ArgValue::token(gl::TEXTURE_2D),
                                 ArgValue::token(gl::TEXTURE_MIN_FILTER), ArgValue::token(gl::NEAREST)}),
                            ctx);
  CHECK(key == again);
}

TEST_CASE("unbound target writes resolve to owner 0 and are flagged") {
  SelectorContext ctx;
  bool unresolved = false;
  auto key = category_key(rec(0, FunctionId::TexParameter,
                              {ArgValue::token(gl::TEXTURE_2D),
                               ArgValue::token(gl::TEXTURE_MIN_FILTER), ArgValue::token(gl::LINEAR)}),
                          ctx, &unresolved);
  CHECK(unresolved);
  CHECK(key.disc[0] == 0);
}

TEST_CASE("deleting the bound object clears the selector slot") {
  SelectorContext ctx;
  ctx.observe(rec(1, FunctionId::BindTexture,
                  {ArgValue::token(gl::TEXTURE_2D), ArgValue::id_ref(ResourceKind::Texture, 7)}));
  ctx.observe(rec(2, FunctionId::DeleteTextures, {ArgValue::id_ref(ResourceKind::Texture, 7)}));
  auto b = ctx.texture_binding(gl::TEXTURE_2D);
  CHECK(b.vid == 0);
  CHECK_FALSE(b.bind_seq.has_value());
  REQUIRE(b.zero_chain.has_value());
  CHECK(b.zero_chain->first == 1);
  CHECK(b.zero_chain->second == 2);
}

TEST_CASE("zero-argument families and selector-bind keys") {
  SelectorContext ctx;
  auto cc = category_key(rec(0, FunctionId::ClearColor,
                             {ArgValue::real(0), ArgValue::real(0), ArgValue::real(0),
                              ArgValue::real(0)}),
                         ctx);
  CHECK(cc.disc_count == 0);
  CHECK(cc.to_string() == "(ClearColor)");
  auto bind = category_key(rec(1, FunctionId::BindTexture,
                               {ArgValue::token(gl::TEXTURE_2D),
                                ArgValue::id_ref(ResourceKind::Texture, 1)}),
                           ctx);
  CHECK(bind.family == CategoryKey::Family::BindTexture);
  CHECK(bind.disc[0] == gl::TEXTURE_2D);
  auto clear = category_key(rec(2, FunctionId::Clear, {ArgValue::integer(0x4100)}), ctx);
  CHECK(clear.family == CategoryKey::Family::Clear);
  CHECK(clear.disc_count == 0);
}

TEST_CASE("LoadMatrix keys on the current matrix mode") {
  SelectorContext ctx;
  std::vector<ArgValue> m(16, ArgValue::real(0.0));
  auto mv = category_key(rec(0, FunctionId::LoadMatrix, m), ctx);
  CHECK(mv.disc[0] == gl::MODELVIEW);  // the initial mode
  ctx.observe(rec(1, FunctionId::MatrixMode, {ArgValue::token(gl::PROJECTION)}));
  auto proj = category_key(rec(2, FunctionId::LoadMatrix, m), ctx);
  CHECK(proj.disc[0] == gl::PROJECTION);
  CHECK(mv != proj);
}

TEST_CASE("alternating binds over two targets resolve independently") {
  SelectorContext ctx;
  ctx.observe(rec(1, FunctionId::BindTexture,
                  {ArgValue::token(gl::TEXTURE_2D), ArgValue::id_ref(ResourceKind::Texture, 1)}));
  ctx.observe(rec(2, FunctionId::BindTexture,
                  {ArgValue::token(gl::TEXTURE_3D), ArgValue::id_ref(ResourceKind::Texture, 2)}));
  CHECK(ctx.texture_binding(gl::TEXTURE_2D).vid == 1);
  CHECK(ctx.texture_binding(gl::TEXTURE_3D).vid == 2);
  ctx.observe(rec(3, FunctionId::BindTexture,
                  {ArgValue::token(gl::TEXTURE_2D), ArgValue::id_ref(ResourceKind::Texture, 3)}));
  CHECK(ctx.texture_binding(gl::TEXTURE_2D).vid == 3);
  CHECK(ctx.texture_binding(gl::TEXTURE_3D).vid == 2);
}
