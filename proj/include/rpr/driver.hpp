#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rpr/call.hpp"
#include "rpr/catalog.hpp"
#include "rpr/digest.hpp"
#include "rpr/translation_table.hpp"
#include "rpr/wire.hpp"

namespace rpr {

// Simulated driver for the catalog: the ground-truth state machine replay
// correctness is judged against, and the "fresh driver" a restart replays
// into. Objects are keyed by session-local real ids; digests canonicalize
// to virtual-id space so sessions with different real-id allocation compare
// equal.

struct TextureObject {
  std::map<std::pair<std::uint32_t, std::uint32_t>, ArgValue> params;  // (target,pname)
  std::map<std::pair<std::uint32_t, std::int64_t>, BlobRef> images;    // (target,level)

  friend bool operator==(const TextureObject&, const TextureObject&) = default;
};

struct BufferObject {
  std::optional<BlobRef> data;
  std::uint32_t usage = 0;

  friend bool operator==(const BufferObject&, const BufferObject&) = default;
};

struct ShaderObject {
  std::uint32_t type = 0;
  std::optional<BlobRef> source;
  // Bumped per compile; link snapshots record it, which captures the
  // source/compile/link ordering dependencies without a GLSL compiler.
  std::uint64_t compiled_generation = 0;

  friend bool operator==(const ShaderObject&, const ShaderObject&) = default;
};

// What a link captured about one attached shader. Stores content, not just
// the id: frame digests must not depend on session-local real ids.
struct LinkedShaderInfo {
  std::uint64_t generation = 0;
  std::uint32_t type = 0;
  std::optional<BlobRef> source;

  friend bool operator==(const LinkedShaderInfo&, const LinkedShaderInfo&) = default;
};

struct ProgramObject {
  std::set<std::uint64_t> attached;  // live wiring: deletes scrub entries
  std::map<std::uint64_t, LinkedShaderInfo> linked_snapshot;  // frozen at link
  bool linked = false;

  friend bool operator==(const ProgramObject&, const ProgramObject&) = default;
};

struct DriverState {
  bool context_alive = false;
  std::uint64_t context_real = 0;

  std::map<std::uint32_t, bool> capabilities;
  std::map<std::uint32_t, bool> client_capabilities;
  std::array<double, 4> clear_color{0, 0, 0, 0};
  std::int64_t clear_mask = 0;
  std::array<std::int64_t, 4> viewport{0, 0, 0, 0};
  std::uint32_t matrix_mode = gl::MODELVIEW;
  std::map<std::uint32_t, std::array<double, 16>> matrices;

  std::map<std::uint64_t, TextureObject> textures;
  std::map<std::uint32_t, std::uint64_t> texture_bindings;  // target -> real (absent = 0)
  std::map<std::uint64_t, BufferObject> buffers;
  std::map<std::uint32_t, std::uint64_t> buffer_bindings;
  std::map<std::uint32_t, BlobRef> client_arrays;  // pointer kind -> payload
  std::map<std::uint64_t, ShaderObject> shaders;
  std::map<std::uint64_t, ProgramObject> programs;
  std::uint64_t current_program = 0;

  std::uint64_t frame_count = 0;
  Digest last_frame_digest{};

  std::array<std::uint64_t, kResourceKindCount> next_real_id{1, 1, 1, 1, 1};

  static std::array<double, 16> identity_matrix() {
    std::array<double, 16> m{};
    m[0] = m[5] = m[10] = m[15] = 1.0;
    return m;
  }

  static DriverState fresh(std::uint64_t real_id_seed = 1) {
    DriverState s;
    s.matrices[gl::MODELVIEW] = identity_matrix();
    s.matrices[gl::PROJECTION] = identity_matrix();
    s.matrices[gl::TEXTURE] = identity_matrix();
    s.next_real_id.fill(real_id_seed < 1 ? 1 : real_id_seed);
    return s;
  }
};

struct ApplyResult {
  std::vector<ReturnedId> returned_ids;
};

namespace detail {

inline std::uint64_t resolve_live(const DriverState& s, const TranslationTable& t,
                                  ResourceKind kind, std::uint64_t vid) {
  std::uint64_t real = t.to_real(kind, vid);  // throws UnknownVirtualId
  if (real == 0) return 0;
  bool alive = false;
  switch (kind) {
    case ResourceKind::Texture: alive = s.textures.count(real) != 0; break;
    case ResourceKind::Buffer: alive = s.buffers.count(real) != 0; break;
    case ResourceKind::Shader: alive = s.shaders.count(real) != 0; break;
    case ResourceKind::Program: alive = s.programs.count(real) != 0; break;
    case ResourceKind::Context: alive = s.context_alive && s.context_real == real; break;
  }
  if (!alive)
    throw Error(Errc::UseAfterDelete,
                std::string(kind_name(kind)) + "#" + std::to_string(vid));
  return real;
}

inline std::uint64_t binding_of(const std::map<std::uint32_t, std::uint64_t>& bindings,
                                std::uint32_t target) {
  auto it = bindings.find(target);
  return it == bindings.end() ? 0 : it->second;
}

inline void clear_bindings_to(std::map<std::uint32_t, std::uint64_t>& bindings,
                              std::uint64_t real) {
  for (auto it = bindings.begin(); it != bindings.end();) {
    if (it->second == real)
      it = bindings.erase(it);
    else
      ++it;
  }
}

// Wipe to initial state, keeping the real-id counters so a re-created
// session never hands out ids that collide with pre-reset ones.
inline void wipe(DriverState& s) {
  auto counters = s.next_real_id;
  s = DriverState::fresh();
  s.next_real_id = counters;
}

}  // namespace detail

Digest render(const DriverState& s);

// Applies one call. Validates and resolves ids before any mutation, so a
// throwing call leaves state untouched. Gen*/Create* allocate fresh real ids:
// when the record carries returned ids (replay/restart) they are rebound to
// those virtual ids, otherwise fresh virtual ids are assigned.
inline ApplyResult apply(DriverState& s, const CallRecord& rec, TranslationTable& table) {
  validate_against_signature(rec);
  if (!s.context_alive && rec.fn != FunctionId::CreateContext)
    throw Error(Errc::NoContext, std::string(function_name(rec.fn)));

  ApplyResult result;
  auto allocate = [&](ResourceKind kind, std::size_t count) {
    std::vector<std::uint64_t> reals(count);
    if (!rec.returned_ids.empty() && rec.returned_ids.size() != count)
      throw Error(Errc::InvalidCall, "returned-id count mismatch", rec.seq);
    for (std::size_t i = 0; i < count; ++i) {
      std::uint64_t real = s.next_real_id[static_cast<std::size_t>(kind)]++;
      reals[i] = real;
      if (rec.returned_ids.empty()) {
        std::uint64_t vid = table.assign_virtual(kind, real);
        result.returned_ids.push_back({kind, vid});
      } else {
        table.rebind(kind, rec.returned_ids[i].vid, real);
        result.returned_ids.push_back(rec.returned_ids[i]);
      }
    }
    return reals;
  };
  auto enum_arg = [&](std::size_t i) { return rec.args[i].enum_value; };
  auto int_arg = [&](std::size_t i) { return rec.args[i].int_value; };
  auto require_token = [&](std::size_t i, std::initializer_list<std::uint32_t> allowed) {
    for (std::uint32_t v : allowed)
      if (enum_arg(i) == v) return enum_arg(i);
    throw Error(Errc::InvalidCall,
                std::string(function_name(rec.fn)) + ": unexpected enum value " +
                    std::to_string(enum_arg(i)));
  };
  auto tex_target = [&](std::size_t i) {
    return require_token(i, {gl::TEXTURE_1D, gl::TEXTURE_2D, gl::TEXTURE_3D});
  };
  auto buf_target = [&](std::size_t i) {
    return require_token(i, {gl::ARRAY_BUFFER, gl::ELEMENT_ARRAY_BUFFER});
  };

  switch (rec.fn) {
    case FunctionId::CreateContext: {
      if (s.context_alive) throw Error(Errc::InvalidCall, "context already alive", rec.seq);
      std::uint64_t real = allocate(ResourceKind::Context, 1)[0];
      s.context_alive = true;
      s.context_real = real;
      break;
    }
    case FunctionId::ResetContext:
    case FunctionId::DestroyContext:
      detail::wipe(s);
      break;
    case FunctionId::ClearColor:
      for (int i = 0; i < 4; ++i) s.clear_color[i] = rec.args[i].float_value;
      break;
    case FunctionId::Clear:
      s.clear_mask = int_arg(0);
      break;
    case FunctionId::Viewport:
      for (int i = 0; i < 4; ++i) s.viewport[i] = rec.args[i].int_value;
      break;
    case FunctionId::Enable:
    case FunctionId::Disable:
      require_token(0, {gl::BLEND, gl::DEPTH_TEST, gl::CULL_FACE, gl::LIGHTING,
                        gl::SCISSOR_TEST, gl::STENCIL_TEST, gl::FOG});
      s.capabilities[enum_arg(0)] = (rec.fn == FunctionId::Enable);
      break;
    case FunctionId::EnableClientState:
    case FunctionId::DisableClientState:
      require_token(0, {gl::VERTEX_ARRAY, gl::NORMAL_ARRAY, gl::COLOR_ARRAY,
                        gl::TEXTURE_COORD_ARRAY});
      s.client_capabilities[enum_arg(0)] = (rec.fn == FunctionId::EnableClientState);
      break;
    case FunctionId::MatrixMode:
      s.matrix_mode = require_token(0, {gl::MODELVIEW, gl::PROJECTION, gl::TEXTURE});
      break;
    case FunctionId::LoadMatrix: {
      std::array<double, 16> m{};
      for (int i = 0; i < 16; ++i) m[i] = rec.args[i].float_value;
      s.matrices[s.matrix_mode] = m;
      break;
    }
    case FunctionId::GenTextures: {
      std::int64_t n = int_arg(0);
      if (n < 1 || n > 4096) throw Error(Errc::InvalidCall, "bad gen count", rec.seq);
      for (std::uint64_t real : allocate(ResourceKind::Texture, static_cast<std::size_t>(n)))
        s.textures.emplace(real, TextureObject{});
      break;
    }
    case FunctionId::DeleteTextures: {
      std::vector<std::uint64_t> reals;
      for (const ArgValue& a : rec.args)
        reals.push_back(detail::resolve_live(s, table, ResourceKind::Texture, a.id.vid));
      for (std::uint64_t real : reals) {
        s.textures.erase(real);
        detail::clear_bindings_to(s.texture_bindings, real);
      }
      break;
    }
    case FunctionId::BindTexture: {
      std::uint32_t target = tex_target(0);
      std::uint64_t real = detail::resolve_live(s, table, ResourceKind::Texture, rec.args[1].id.vid);
      if (real == 0)
        s.texture_bindings.erase(target);
      else
        s.texture_bindings[target] = real;
      break;
    }
    case FunctionId::TexParameter: {
      std::uint32_t target = tex_target(0);
      require_token(1, {gl::TEXTURE_MIN_FILTER, gl::TEXTURE_MAG_FILTER, gl::TEXTURE_WRAP_S,
                        gl::TEXTURE_WRAP_T});
      std::uint64_t real = detail::binding_of(s.texture_bindings, target);
      s.textures[real].params[{target, enum_arg(1)}] = rec.args[2];
      break;
    }
    case FunctionId::TexImage: {
      std::uint32_t target = tex_target(0);
      if (int_arg(1) < 0 || int_arg(1) > 15)
        throw Error(Errc::InvalidCall, "bad mip level", rec.seq);
      std::uint64_t real = detail::binding_of(s.texture_bindings, target);
      s.textures[real].images[{target, int_arg(1)}] = rec.args[2].blob;
      break;
    }
    case FunctionId::GenBuffers: {
      std::int64_t n = int_arg(0);
      if (n < 1 || n > 4096) throw Error(Errc::InvalidCall, "bad gen count", rec.seq);
      for (std::uint64_t real : allocate(ResourceKind::Buffer, static_cast<std::size_t>(n)))
        s.buffers.emplace(real, BufferObject{});
      break;
    }
    case FunctionId::DeleteBuffers: {
      std::vector<std::uint64_t> reals;
      for (const ArgValue& a : rec.args)
        reals.push_back(detail::resolve_live(s, table, ResourceKind::Buffer, a.id.vid));
      for (std::uint64_t real : reals) {
        s.buffers.erase(real);
        detail::clear_bindings_to(s.buffer_bindings, real);
      }
      break;
    }
    case FunctionId::BindBuffer: {
      std::uint32_t target = buf_target(0);
      std::uint64_t real = detail::resolve_live(s, table, ResourceKind::Buffer, rec.args[1].id.vid);
      if (real == 0)
        s.buffer_bindings.erase(target);
      else
        s.buffer_bindings[target] = real;
      break;
    }
    case FunctionId::BufferData: {
      std::uint32_t target = buf_target(0);
      require_token(2, {gl::STREAM_DRAW, gl::STATIC_DRAW, gl::DYNAMIC_DRAW});
      std::uint64_t real = detail::binding_of(s.buffer_bindings, target);
      BufferObject& b = s.buffers[real];
      b.data = rec.args[1].blob;
      b.usage = enum_arg(2);
      break;
    }
    case FunctionId::VertexPointer:
      s.client_arrays[gl::VERTEX_ARRAY] = rec.args[0].blob;
      break;
    case FunctionId::ColorPointer:
      s.client_arrays[gl::COLOR_ARRAY] = rec.args[0].blob;
      break;
    case FunctionId::TexCoordPointer:
      s.client_arrays[gl::TEXTURE_COORD_ARRAY] = rec.args[0].blob;
      break;
    case FunctionId::CreateShader: {
      std::uint32_t type = require_token(0, {gl::VERTEX_SHADER, gl::FRAGMENT_SHADER});
      std::uint64_t real = allocate(ResourceKind::Shader, 1)[0];
      ShaderObject sh;
      sh.type = type;
      s.shaders.emplace(real, sh);
      break;
    }
    case FunctionId::ShaderSource: {
      std::uint64_t real = detail::resolve_live(s, table, ResourceKind::Shader, rec.args[0].id.vid);
      if (real == 0) throw Error(Errc::InvalidCall, "ShaderSource on id 0", rec.seq);
      s.shaders[real].source = rec.args[1].blob;
      break;
    }
    case FunctionId::CompileShader: {
      std::uint64_t real = detail::resolve_live(s, table, ResourceKind::Shader, rec.args[0].id.vid);
      if (real == 0) throw Error(Errc::InvalidCall, "CompileShader on id 0", rec.seq);
      s.shaders[real].compiled_generation += 1;
      break;
    }
    case FunctionId::DeleteShader: {
      std::uint64_t real = detail::resolve_live(s, table, ResourceKind::Shader, rec.args[0].id.vid);
      if (real == 0) throw Error(Errc::InvalidCall, "DeleteShader on id 0", rec.seq);
      s.shaders.erase(real);
      // linked snapshots are frozen history and keep the dead id
      for (auto& [preal, prog] : s.programs) prog.attached.erase(real);
      break;
    }
    case FunctionId::CreateProgram: {
      std::uint64_t real = allocate(ResourceKind::Program, 1)[0];
      s.programs.emplace(real, ProgramObject{});
      break;
    }
    case FunctionId::AttachShader: {
      std::uint64_t preal = detail::resolve_live(s, table, ResourceKind::Program, rec.args[0].id.vid);
      std::uint64_t sreal = detail::resolve_live(s, table, ResourceKind::Shader, rec.args[1].id.vid);
      if (preal == 0 || sreal == 0) throw Error(Errc::InvalidCall, "AttachShader on id 0", rec.seq);
      s.programs[preal].attached.insert(sreal);
      break;
    }
    case FunctionId::LinkProgram: {
      std::uint64_t preal = detail::resolve_live(s, table, ResourceKind::Program, rec.args[0].id.vid);
      if (preal == 0) throw Error(Errc::InvalidCall, "LinkProgram on id 0", rec.seq);
      ProgramObject& prog = s.programs[preal];
      prog.linked_snapshot.clear();
      for (std::uint64_t sreal : prog.attached) {
        const ShaderObject& sh = s.shaders.at(sreal);
        prog.linked_snapshot[sreal] = LinkedShaderInfo{sh.compiled_generation, sh.type, sh.source};
      }
      prog.linked = !prog.attached.empty();
      break;
    }
    case FunctionId::UseProgram: {
      std::uint64_t real = detail::resolve_live(s, table, ResourceKind::Program, rec.args[0].id.vid);
      s.current_program = real;
      break;
    }
    case FunctionId::DeleteProgram: {
      std::uint64_t real = detail::resolve_live(s, table, ResourceKind::Program, rec.args[0].id.vid);
      if (real == 0) throw Error(Errc::InvalidCall, "DeleteProgram on id 0", rec.seq);
      s.programs.erase(real);
      if (s.current_program == real) s.current_program = 0;
      break;
    }
    case FunctionId::Draw:
      require_token(0, {gl::POINTS, gl::LINES, gl::TRIANGLES, gl::TRIANGLE_STRIP});
      [[fallthrough]];
    case FunctionId::Finish:
    case FunctionId::SwapBuffers:
      s.last_frame_digest = render(s);
      s.frame_count += 1;
      break;
  }
  return result;
}

namespace detail {

inline void put_blob_ref(std::vector<std::uint8_t>& out, const BlobRef& b) {
  wire::put_bytes(out, std::span<const std::uint8_t>(b.digest.data(), b.digest.size()));
  wire::put_varint(out, b.length);
}

inline void put_arg_value(std::vector<std::uint8_t>& out, const ArgValue& a) {
  wire::put_u8(out, static_cast<std::uint8_t>(a.type));
  switch (a.type) {
    case ArgValue::Type::Int: wire::put_varint(out, wire::zigzag(a.int_value)); break;
    case ArgValue::Type::Float: wire::put_f64(out, a.float_value); break;
    case ArgValue::Type::Enum: wire::put_varint(out, a.enum_value); break;
    case ArgValue::Type::Id:
      wire::put_u8(out, static_cast<std::uint8_t>(a.id.kind));
      wire::put_varint(out, a.id.vid);
      break;
    case ArgValue::Type::Blob: put_blob_ref(out, a.blob); break;
  }
}

inline void put_texture_object(std::vector<std::uint8_t>& out, const TextureObject& t) {
  wire::put_varint(out, t.params.size());
  for (const auto& [key, value] : t.params) {
    wire::put_varint(out, key.first);
    wire::put_varint(out, key.second);
    put_arg_value(out, value);
  }
  wire::put_varint(out, t.images.size());
  for (const auto& [key, blob] : t.images) {
    wire::put_varint(out, key.first);
    wire::put_varint(out, wire::zigzag(key.second));
    put_blob_ref(out, blob);
  }
}

// Canonical serialization shared by state_digest and render; byte-for-byte
// layout documented in docs/format.md. All object references are translated
// to virtual-id space and all maps walk in sorted key order.
inline void put_observable_state(std::vector<std::uint8_t>& out, const DriverState& s,
                                 const TranslationTable& table) {
  auto vid_of = [&](ResourceKind k, std::uint64_t real) { return table.to_virtual(k, real); };

  wire::put_u8(out, s.context_alive ? 1 : 0);
  wire::put_varint(out, s.context_alive ? vid_of(ResourceKind::Context, s.context_real) : 0);

  auto put_true_caps = [&](const std::map<std::uint32_t, bool>& caps) {
    std::vector<std::uint32_t> on;
    for (const auto& [cap, enabled] : caps)
      if (enabled) on.push_back(cap);
    wire::put_varint(out, on.size());
    for (std::uint32_t cap : on) wire::put_varint(out, cap);
  };
  put_true_caps(s.capabilities);
  put_true_caps(s.client_capabilities);

  for (double c : s.clear_color) wire::put_f64(out, c);
  wire::put_varint(out, wire::zigzag(s.clear_mask));
  for (std::int64_t v : s.viewport) wire::put_varint(out, wire::zigzag(v));

  wire::put_varint(out, s.matrix_mode);
  wire::put_varint(out, s.matrices.size());
  for (const auto& [mode, m] : s.matrices) {
    wire::put_varint(out, mode);
    for (double v : m) wire::put_f64(out, v);
  }

  auto put_bindings = [&](const std::map<std::uint32_t, std::uint64_t>& bindings,
                          ResourceKind kind) {
    wire::put_varint(out, bindings.size());
    for (const auto& [target, real] : bindings) {
      wire::put_varint(out, target);
      wire::put_varint(out, vid_of(kind, real));
    }
  };
  put_bindings(s.texture_bindings, ResourceKind::Texture);
  put_bindings(s.buffer_bindings, ResourceKind::Buffer);

  wire::put_varint(out, s.client_arrays.size());
  for (const auto& [kind, blob] : s.client_arrays) {
    wire::put_varint(out, kind);
    put_blob_ref(out, blob);
  }

  {
    // textures keyed by vid so the walk order itself is canonical
    std::map<std::uint64_t, const TextureObject*> by_vid;
    for (const auto& [real, t] : s.textures)
      by_vid[vid_of(ResourceKind::Texture, real)] = &t;
    wire::put_varint(out, by_vid.size());
    for (const auto& [vid, t] : by_vid) {
      wire::put_varint(out, vid);
      put_texture_object(out, *t);
    }
  }
  {
    std::map<std::uint64_t, const BufferObject*> by_vid;
    for (const auto& [real, b] : s.buffers) by_vid[vid_of(ResourceKind::Buffer, real)] = &b;
    wire::put_varint(out, by_vid.size());
    for (const auto& [vid, b] : by_vid) {
      wire::put_varint(out, vid);
      wire::put_u8(out, b->data ? 1 : 0);
      if (b->data) put_blob_ref(out, *b->data);
      wire::put_varint(out, b->usage);
    }
  }
  {
    std::map<std::uint64_t, const ShaderObject*> by_vid;
    for (const auto& [real, sh] : s.shaders) by_vid[vid_of(ResourceKind::Shader, real)] = &sh;
    wire::put_varint(out, by_vid.size());
    for (const auto& [vid, sh] : by_vid) {
      wire::put_varint(out, vid);
      wire::put_varint(out, sh->type);
      wire::put_u8(out, sh->source ? 1 : 0);
      if (sh->source) put_blob_ref(out, *sh->source);
      wire::put_varint(out, sh->compiled_generation);
    }
  }
  {
    std::map<std::uint64_t, const ProgramObject*> by_vid;
    for (const auto& [real, p] : s.programs) by_vid[vid_of(ResourceKind::Program, real)] = &p;
    wire::put_varint(out, by_vid.size());
    for (const auto& [vid, p] : by_vid) {
      wire::put_varint(out, vid);
      std::set<std::uint64_t> attached_vids;
      for (std::uint64_t sreal : p->attached)
        attached_vids.insert(vid_of(ResourceKind::Shader, sreal));
      wire::put_varint(out, attached_vids.size());
      for (std::uint64_t v : attached_vids) wire::put_varint(out, v);
      wire::put_u8(out, p->linked ? 1 : 0);
      std::map<std::uint64_t, const LinkedShaderInfo*> snapshot_vids;
      for (const auto& [sreal, info] : p->linked_snapshot)
        snapshot_vids[vid_of(ResourceKind::Shader, sreal)] = &info;
      wire::put_varint(out, snapshot_vids.size());
      for (const auto& [v, info] : snapshot_vids) {
        wire::put_varint(out, v);
        wire::put_varint(out, info->generation);
        wire::put_varint(out, info->type);
        wire::put_u8(out, info->source ? 1 : 0);
        if (info->source) put_blob_ref(out, *info->source);
      }
    }
  }
  wire::put_varint(out, vid_of(ResourceKind::Program, s.current_program));
}

}  // namespace detail

// Digest over the full observable state in virtual-id space. Deliberately
// excludes frame_count, last_frame_digest and the real-id counters: none of
// them are reproducible from a pruned log, and none of them are observable
// state in the replay-equivalence sense.
inline Digest state_digest(const DriverState& s, const TranslationTable& table) {
  std::vector<std::uint8_t> buf;
  buf.reserve(1024);
  buf.insert(buf.end(), {'R', 'P', 'R', 'S'});
  wire::put_u16(buf, 1);  // canonical-serialization version
  detail::put_observable_state(buf, s, table);
  return sha256(buf);
}

// Digest over the draw-relevant subset: what the next frame would look like.
// Bindings are resolved to the bound objects' contents; unbound stays empty.
inline Digest render(const DriverState& s) {
  if (!s.context_alive) throw Error(Errc::NoContext, "render");
  std::vector<std::uint8_t> buf;
  buf.reserve(512);
  buf.insert(buf.end(), {'R', 'P', 'R', 'F'});
  wire::put_u16(buf, 1);

  auto put_true_caps = [&](const std::map<std::uint32_t, bool>& caps) {
    std::vector<std::uint32_t> on;
    for (const auto& [cap, enabled] : caps)
      if (enabled) on.push_back(cap);
    wire::put_varint(buf, on.size());
    for (std::uint32_t cap : on) wire::put_varint(buf, cap);
  };
  put_true_caps(s.capabilities);
  put_true_caps(s.client_capabilities);
  for (double c : s.clear_color) wire::put_f64(buf, c);
  wire::put_varint(buf, wire::zigzag(s.clear_mask));
  for (std::int64_t v : s.viewport) wire::put_varint(buf, wire::zigzag(v));
  wire::put_varint(buf, s.matrices.size());
  for (const auto& [mode, m] : s.matrices) {
    wire::put_varint(buf, mode);
    for (double v : m) wire::put_f64(buf, v);
  }

  wire::put_varint(buf, s.texture_bindings.size());
  for (const auto& [target, real] : s.texture_bindings) {
    wire::put_varint(buf, target);
    auto it = s.textures.find(real);
    wire::put_u8(buf, it != s.textures.end() ? 1 : 0);
    if (it != s.textures.end()) detail::put_texture_object(buf, it->second);
  }
  wire::put_varint(buf, s.buffer_bindings.size());
  for (const auto& [target, real] : s.buffer_bindings) {
    wire::put_varint(buf, target);
    auto it = s.buffers.find(real);
    wire::put_u8(buf, it != s.buffers.end() && it->second.data ? 1 : 0);
    if (it != s.buffers.end() && it->second.data) {
      detail::put_blob_ref(buf, *it->second.data);
      wire::put_varint(buf, it->second.usage);
    }
  }

  wire::put_varint(buf, s.client_arrays.size());
  for (const auto& [kind, blob] : s.client_arrays) {
    wire::put_varint(buf, kind);
    detail::put_blob_ref(buf, blob);
  }

  // current program contributes its linked snapshot (content-stamped, never
  // by real id: real ids are session noise), not its live attachments
  auto it = s.programs.find(s.current_program);
  wire::put_u8(buf, it != s.programs.end() ? 1 : 0);
  if (it != s.programs.end()) {
    wire::put_u8(buf, it->second.linked ? 1 : 0);
    std::vector<std::vector<std::uint8_t>> entries;
    for (const auto& [sreal, info] : it->second.linked_snapshot) {
      std::vector<std::uint8_t> e;
      wire::put_varint(e, info.generation);
      wire::put_varint(e, info.type);
      wire::put_u8(e, info.source ? 1 : 0);
      if (info.source) detail::put_blob_ref(e, *info.source);
      entries.push_back(std::move(e));
    }
    std::sort(entries.begin(), entries.end());
    wire::put_varint(buf, entries.size());
    for (const auto& e : entries) wire::put_bytes(buf, e);
  }
  return sha256(buf);
}

}  // namespace rpr
