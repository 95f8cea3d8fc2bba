#pragma once

// Shared test machinery: an adversarial random-log generator that only emits
// valid call sequences but deliberately hits the awkward corners (deletes
// clearing bindings, writes through stale targets, shader deletion after
// link, partial deletion of multi-id gens, context resets), plus a
// brute-force search for the shortest replay-equivalent subsequence used as
// the pruner's independence oracle.

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "rpr/rpr.hpp"

namespace rprtest {

using namespace rpr;

struct RandomLogOptions {
  std::size_t max_calls = 40;
  bool allow_context_churn = true;  // ResetContext / DestroyContext+CreateContext
};

class RandomLogBuilder {
 public:
  RandomLogBuilder(std::uint64_t seed, RandomLogOptions opts = {})
      : rng_(seed), opts_(opts) {}

  TraceLog build() {
    Session session;
    std::size_t budget = 1 + rng_.below(opts_.max_calls);
    for (std::size_t i = 0; i < budget; ++i) step(session);
    return session.log();
  }

 private:
  static constexpr std::uint32_t kCaps[2] = {gl::BLEND, gl::DEPTH_TEST};
  static constexpr std::uint32_t kClientCaps[2] = {gl::VERTEX_ARRAY, gl::COLOR_ARRAY};
  static constexpr std::uint32_t kTexTargets[2] = {gl::TEXTURE_2D, gl::TEXTURE_3D};
  static constexpr std::uint32_t kBufTargets[2] = {gl::ARRAY_BUFFER, gl::ELEMENT_ARRAY_BUFFER};
  static constexpr std::uint32_t kPnames[2] = {gl::TEXTURE_MIN_FILTER, gl::TEXTURE_WRAP_S};
  static constexpr std::uint32_t kModes[2] = {gl::MODELVIEW, gl::PROJECTION};

  std::vector<std::uint8_t> pool_blob() {
    static const std::vector<std::vector<std::uint8_t>> pool = [] {
      std::vector<std::vector<std::uint8_t>> p;
      Rng r(0xB10B);
      for (int i = 0; i < 6; ++i) p.push_back(r.bytes(4 + 7 * i));
      return p;
    }();
    return pool[rng_.below(pool.size())];
  }

  template <typename T>
  T pick(const std::vector<T>& v) {
    return v[rng_.below(v.size())];
  }

  void step(Session& s) {
    if (!context_) {
      auto ids = s.record(FunctionId::CreateContext, {});
      context_ = ids[0].vid;
      return;
    }
    switch (rng_.below(24)) {
      case 0:
        s.record(FunctionId::ClearColor,
                 {ArgValue::real(rng_.unit()), ArgValue::real(rng_.unit()),
                  ArgValue::real(rng_.unit()), ArgValue::real(rng_.unit())});
        break;
      case 1:
        s.record(FunctionId::Clear, {ArgValue::integer(static_cast<std::int64_t>(rng_.below(3)) << 8)});
        break;
      case 2:
        s.record(FunctionId::Viewport,
                 {ArgValue::integer(0), ArgValue::integer(0),
                  ArgValue::integer(static_cast<std::int64_t>(rng_.below(2048))),
                  ArgValue::integer(static_cast<std::int64_t>(rng_.below(2048)))});
        break;
      case 3:
        s.record(rng_.chance(0.5) ? FunctionId::Enable : FunctionId::Disable,
                 {ArgValue::token(kCaps[rng_.below(2)])});
        break;
      case 4:
        s.record(rng_.chance(0.5) ? FunctionId::EnableClientState : FunctionId::DisableClientState,
                 {ArgValue::token(kClientCaps[rng_.below(2)])});
        break;
      case 5:
        s.record(FunctionId::MatrixMode, {ArgValue::token(kModes[rng_.below(2)])});
        break;
      case 6: {
        std::vector<Session::Arg> m;
        for (int i = 0; i < 16; ++i) m.push_back(ArgValue::real(rng_.unit()));
        s.record(FunctionId::LoadMatrix, std::move(m));
        break;
      }
      case 7: {
        std::int64_t n = 1 + static_cast<std::int64_t>(rng_.below(2));
        auto ids = s.record(FunctionId::GenTextures, {ArgValue::integer(n)});
        for (auto& id : ids) textures_.push_back(id.vid);
        break;
      }
      case 8:
        if (!textures_.empty()) {
          std::vector<Session::Arg> args;
          std::size_t n = 1 + rng_.below(2);
          for (std::size_t i = 0; i < n && !textures_.empty(); ++i) {
            std::size_t at = rng_.below(textures_.size());
            args.push_back(ArgValue::id_ref(ResourceKind::Texture, textures_[at]));
            textures_.erase(textures_.begin() + static_cast<std::ptrdiff_t>(at));
          }
          s.record(FunctionId::DeleteTextures, std::move(args));
        }
        break;
      case 9: {
        std::uint64_t vid =
            textures_.empty() || rng_.chance(0.2) ? 0 : pick(textures_);
        s.record(FunctionId::BindTexture,
                 {ArgValue::token(kTexTargets[rng_.below(2)]),
                  ArgValue::id_ref(ResourceKind::Texture, vid)});
        break;
      }
      case 10:
        // may land in the id-0 sink when the target has no live binding
        s.record(FunctionId::TexParameter,
                 {ArgValue::token(kTexTargets[rng_.below(2)]),
                  ArgValue::token(kPnames[rng_.below(2)]),
                  ArgValue::token(rng_.chance(0.5) ? gl::LINEAR : gl::NEAREST)});
        break;
      case 11:
        s.record(FunctionId::TexImage,
                 {ArgValue::token(kTexTargets[rng_.below(2)]),
                  ArgValue::integer(static_cast<std::int64_t>(rng_.below(2))), pool_blob()});
        break;
      case 12: {
        auto ids = s.record(FunctionId::GenBuffers, {ArgValue::integer(1)});
        buffers_.push_back(ids[0].vid);
        break;
      }
      case 13:
        if (!buffers_.empty()) {
          std::size_t at = rng_.below(buffers_.size());
          s.record(FunctionId::DeleteBuffers,
                   {ArgValue::id_ref(ResourceKind::Buffer, buffers_[at])});
          buffers_.erase(buffers_.begin() + static_cast<std::ptrdiff_t>(at));
        }
        break;
      case 14: {
        std::uint64_t vid = buffers_.empty() || rng_.chance(0.2) ? 0 : pick(buffers_);
        s.record(FunctionId::BindBuffer,
                 {ArgValue::token(kBufTargets[rng_.below(2)]),
                  ArgValue::id_ref(ResourceKind::Buffer, vid)});
        break;
      }
      case 15:
        s.record(FunctionId::BufferData,
                 {ArgValue::token(kBufTargets[rng_.below(2)]), pool_blob(),
                  ArgValue::token(gl::STREAM_DRAW)});
        break;
      case 16:
        s.record(rng_.chance(0.5) ? FunctionId::VertexPointer : FunctionId::ColorPointer,
                 {pool_blob()});
        break;
      case 17: {
        auto ids = s.record(FunctionId::CreateShader,
                            {ArgValue::token(rng_.chance(0.5) ? gl::VERTEX_SHADER
                                                              : gl::FRAGMENT_SHADER)});
        shaders_.push_back(ids[0].vid);
        if (rng_.chance(0.8)) {
          s.record(FunctionId::ShaderSource,
                   {ArgValue::id_ref(ResourceKind::Shader, ids[0].vid), pool_blob()});
          s.record(FunctionId::CompileShader,
                   {ArgValue::id_ref(ResourceKind::Shader, ids[0].vid)});
        }
        break;
      }
      case 18:
        if (!shaders_.empty()) {
          std::uint64_t vid = pick(shaders_);
          if (rng_.chance(0.5))
            s.record(FunctionId::CompileShader, {ArgValue::id_ref(ResourceKind::Shader, vid)});
          else
            s.record(FunctionId::ShaderSource,
                     {ArgValue::id_ref(ResourceKind::Shader, vid), pool_blob()});
        }
        break;
      case 19: {
        auto ids = s.record(FunctionId::CreateProgram, {});
        programs_.push_back(ids[0].vid);
        break;
      }
      case 20:
        if (!programs_.empty() && !shaders_.empty())
          s.record(FunctionId::AttachShader, {ArgValue::id_ref(ResourceKind::Program, pick(programs_)),
                                              ArgValue::id_ref(ResourceKind::Shader, pick(shaders_))});
        else if (!programs_.empty())
          s.record(FunctionId::LinkProgram,
                   {ArgValue::id_ref(ResourceKind::Program, pick(programs_))});
        break;
      case 21:
        if (!programs_.empty()) {
          std::uint64_t vid = pick(programs_);
          switch (rng_.below(3)) {
            case 0:
              s.record(FunctionId::LinkProgram, {ArgValue::id_ref(ResourceKind::Program, vid)});
              break;
            case 1:
              s.record(FunctionId::UseProgram,
                       {ArgValue::id_ref(ResourceKind::Program, rng_.chance(0.15) ? 0 : vid)});
              break;
            default:
              s.record(FunctionId::DeleteProgram, {ArgValue::id_ref(ResourceKind::Program, vid)});
              std::erase(programs_, vid);
              break;
          }
        }
        break;
      case 22:
        // deleting a shader after it was attached/linked exercises the
        // snapshot-retention path in the pruner
        if (!shaders_.empty() && rng_.chance(0.6)) {
          std::uint64_t vid = pick(shaders_);
          s.record(FunctionId::DeleteShader, {ArgValue::id_ref(ResourceKind::Shader, vid)});
          std::erase(shaders_, vid);
        }
        break;
      default:
        if (opts_.allow_context_churn && rng_.chance(0.06)) {
          s.record(rng_.chance(0.5) ? FunctionId::ResetContext : FunctionId::DestroyContext, {});
          context_.reset();
          textures_.clear();
          buffers_.clear();
          shaders_.clear();
          programs_.clear();
        } else {
          switch (rng_.below(3)) {
            case 0:
              s.record(FunctionId::Draw, {ArgValue::token(gl::TRIANGLES), ArgValue::integer(0),
                                          ArgValue::integer(3)});
              break;
            case 1:
              s.record(FunctionId::Finish, {});
              break;
            default:
              s.record(FunctionId::SwapBuffers, {});
              break;
          }
        }
        break;
    }
  }

  Rng rng_;
  RandomLogOptions opts_;
  std::optional<std::uint64_t> context_;
  std::vector<std::uint64_t> textures_;
  std::vector<std::uint64_t> buffers_;
  std::vector<std::uint64_t> shaders_;
  std::vector<std::uint64_t> programs_;
};

inline TraceLog random_log(std::uint64_t seed, std::size_t max_calls = 40,
                           bool allow_context_churn = true) {
  return RandomLogBuilder(seed, {max_calls, allow_context_churn}).build();
}

inline std::optional<ReplayOutcome> try_replay(const TraceLog& log, std::uint64_t seed = 1) {
  try {
    return replay(log, seed);
  } catch (const Error&) {
    return std::nullopt;
  }
}

// Exhaustive shortest replay-equivalent subsequence, for logs of <= ~16
// calls. Dependency pre-filtering (a call needs its ids' creations and its
// epoch's context) skips most structurally invalid candidates cheaply; the
// stragglers are rejected by replay errors.
inline std::size_t brute_force_min_equivalent(const TraceLog& log, const Digest& want_state,
                                              const Digest& want_frame) {
  const std::size_t n = log.records.size();
  std::vector<std::uint32_t> deps(n, 0);
  {
    std::map<std::pair<ResourceKind, std::uint64_t>, std::size_t> gen_at;
    std::optional<std::size_t> context_at;
    for (std::size_t i = 0; i < n; ++i) {
      const CallRecord& rec = log.records[i];
      if (rec.fn == FunctionId::CreateContext) context_at = i;
      if (rec.fn != FunctionId::CreateContext && context_at)
        deps[i] |= 1u << *context_at;
      for (const ArgValue& a : rec.args)
        if (a.type == ArgValue::Type::Id && a.id.vid != 0) {
          auto it = gen_at.find({a.id.kind, a.id.vid});
          if (it != gen_at.end()) deps[i] |= 1u << it->second;
        }
      for (const ReturnedId& r : rec.returned_ids) gen_at[{r.kind, r.vid}] = i;
    }
  }

  std::size_t best = n;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::size_t size = static_cast<std::size_t>(__builtin_popcount(mask));
    if (size >= best) continue;
    bool plausible = true;
    for (std::size_t i = 0; i < n && plausible; ++i)
      if ((mask >> i) & 1u)
        if ((deps[i] & ~mask) != 0) plausible = false;
    if (!plausible) continue;
    TraceLog candidate;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1u) candidate.records.push_back(log.records[i]);
    auto out = try_replay(candidate);
    if (out && out->state == want_state && out->frame == want_frame) best = size;
  }
  return best;
}

}  // namespace rprtest
