#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "rpr/call.hpp"
#include "rpr/catalog.hpp"

namespace rpr {

// Identity under which "only the last call matters": a function family plus
// the arguments that discriminate independent state slots.
struct CategoryKey {
  enum class Family : std::uint8_t {
    ClearColor,
    Clear,
    Capability,
    ClientCapability,
    Viewport,
    Matrix,
    TexParam,
    TexImage,
    BufferData,
    ClientArray,
    BindTexture,
    BindBuffer,
    MatrixMode,
    UseProgram,
    ResetContext,
    DestroyContext,
  };

  Family family = Family::ClearColor;
  // Positional meaning is fixed per family (enum values, resolved owner ids,
  // levels); see docs/format.md.
  std::array<std::uint64_t, 3> disc{};
  std::uint8_t disc_count = 0;

  friend auto operator<=>(const CategoryKey&, const CategoryKey&) = default;

  std::string to_string() const {
    static constexpr std::string_view names[] = {
        "ClearColor", "clear", "capability", "clientCapability", "viewport",
        "matrix", "texParam", "texImage", "bufferData", "clientArray",
        "bindTexture", "bindBuffer", "matrixMode", "useProgram",
        "resetContext", "destroyContext"};
    std::string s = "(";
    s += names[static_cast<std::uint8_t>(family)];
    for (std::uint8_t i = 0; i < disc_count; ++i) s += "," + std::to_string(disc[i]);
    s += ")";
    return s;
  }
};

// Implicit-selector state as of a position in the log: which object each
// texture/buffer target aliases, the current matrix mode, and the current
// program. Deletions clear the affected entries, matching driver semantics,
// so owners of writes issued through a stale target resolve to 0 (sink).
struct SelectorContext {
  struct Binding {
    std::uint64_t vid = 0;
    std::optional<std::uint64_t> bind_seq;
    // Set when the slot became 0 because its object was deleted: the bind
    // that had established it and the delete that cleared it. Replaying that
    // pair is the only way a pruned log can reproduce the cleared state.
    std::optional<std::pair<std::uint64_t, std::uint64_t>> zero_chain;
  };

  std::map<std::uint32_t, Binding> texture_binding_at;
  std::map<std::uint32_t, Binding> buffer_binding_at;
  std::uint32_t matrix_mode = gl::MODELVIEW;
  std::optional<std::uint64_t> matrix_mode_seq;
  Binding current_program;

  Binding texture_binding(std::uint32_t target) const {
    auto it = texture_binding_at.find(target);
    return it == texture_binding_at.end() ? Binding{} : it->second;
  }

  Binding buffer_binding(std::uint32_t target) const {
    auto it = buffer_binding_at.find(target);
    return it == buffer_binding_at.end() ? Binding{} : it->second;
  }

  // Feed every call to the context in log order before asking about calls
  // that come after it.
  void observe(const CallRecord& rec) {
    switch (rec.fn) {
      case FunctionId::BindTexture:
        if (rec.args.size() == 2)
          texture_binding_at[rec.args[0].enum_value] = Binding{rec.args[1].id.vid, rec.seq};
        break;
      case FunctionId::BindBuffer:
        if (rec.args.size() == 2)
          buffer_binding_at[rec.args[0].enum_value] = Binding{rec.args[1].id.vid, rec.seq};
        break;
      case FunctionId::MatrixMode:
        if (rec.args.size() == 1) {
          matrix_mode = rec.args[0].enum_value;
          matrix_mode_seq = rec.seq;
        }
        break;
      case FunctionId::UseProgram:
        if (rec.args.size() == 1) current_program = Binding{rec.args[0].id.vid, rec.seq};
        break;
      case FunctionId::DeleteTextures:
        for (const ArgValue& a : rec.args) drop(texture_binding_at, a.id.vid, rec.seq);
        break;
      case FunctionId::DeleteBuffers:
        for (const ArgValue& a : rec.args) drop(buffer_binding_at, a.id.vid, rec.seq);
        break;
      case FunctionId::DeleteProgram:
        if (rec.args.size() == 1 && current_program.vid == rec.args[0].id.vid)
          current_program = Binding{};
        break;
      case FunctionId::ResetContext:
      case FunctionId::DestroyContext:
        texture_binding_at.clear();
        buffer_binding_at.clear();
        matrix_mode = gl::MODELVIEW;
        matrix_mode_seq.reset();
        current_program = Binding{};
        break;
      default:
        break;
    }
  }

 private:
  static void drop(std::map<std::uint32_t, Binding>& m, std::uint64_t vid,
                   std::uint64_t delete_seq) {
    if (vid == 0) return;
    for (auto& [target, b] : m)
      if (b.vid == vid) {
        Binding cleared{};
        if (b.bind_seq) cleared.zero_chain = std::make_pair(*b.bind_seq, delete_seq);
        b = cleared;
      }
  }
};

// Category of a StateSet or SelectorBind call given the selector state that
// precedes it. `unresolved`, when supplied, reports a target-addressed write
// whose target had no binding (the owner then resolves to the reserved id 0).
inline CategoryKey category_key(const CallRecord& rec, const SelectorContext& bindings,
                                bool* unresolved = nullptr) {
  using F = CategoryKey::Family;
  if (unresolved) *unresolved = false;
  auto k0 = [](F f) { return CategoryKey{f, {}, 0}; };
  auto k1 = [](F f, std::uint64_t a) { return CategoryKey{f, {a, 0, 0}, 1}; };
  auto k2 = [](F f, std::uint64_t a, std::uint64_t b) { return CategoryKey{f, {a, b, 0}, 2}; };
  auto k3 = [](F f, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return CategoryKey{f, {a, b, c}, 3};
  };
  auto owner = [&](const SelectorContext::Binding& b) {
    if (unresolved && !b.bind_seq && b.vid == 0) *unresolved = true;
    return b.vid;
  };
  switch (rec.fn) {
    case FunctionId::ClearColor:
      return k0(F::ClearColor);
    case FunctionId::Clear:
      return k0(F::Clear);
    case FunctionId::Enable:
    case FunctionId::Disable:
      return k1(F::Capability, rec.args[0].enum_value);
    case FunctionId::EnableClientState:
    case FunctionId::DisableClientState:
      return k1(F::ClientCapability, rec.args[0].enum_value);
    case FunctionId::Viewport:
      return k0(F::Viewport);
    case FunctionId::LoadMatrix:
      return k1(F::Matrix, bindings.matrix_mode);
    case FunctionId::TexParameter: {
      std::uint32_t target = rec.args[0].enum_value;
      return k3(F::TexParam, owner(bindings.texture_binding(target)), target,
                rec.args[1].enum_value);
    }
    case FunctionId::TexImage: {
      std::uint32_t target = rec.args[0].enum_value;
      return k3(F::TexImage, owner(bindings.texture_binding(target)), target,
                static_cast<std::uint64_t>(rec.args[1].int_value));
    }
    case FunctionId::BufferData: {
      std::uint32_t target = rec.args[0].enum_value;
      return k2(F::BufferData, owner(bindings.buffer_binding(target)), target);
    }
    case FunctionId::VertexPointer:
      return k1(F::ClientArray, gl::VERTEX_ARRAY);
    case FunctionId::ColorPointer:
      return k1(F::ClientArray, gl::COLOR_ARRAY);
    case FunctionId::TexCoordPointer:
      return k1(F::ClientArray, gl::TEXTURE_COORD_ARRAY);
    case FunctionId::BindTexture:
      return k1(F::BindTexture, rec.args[0].enum_value);
    case FunctionId::BindBuffer:
      return k1(F::BindBuffer, rec.args[0].enum_value);
    case FunctionId::MatrixMode:
      return k0(F::MatrixMode);
    case FunctionId::UseProgram:
      return k0(F::UseProgram);
    case FunctionId::ResetContext:
      return k0(F::ResetContext);
    case FunctionId::DestroyContext:
      return k0(F::DestroyContext);
    default:
      throw Error(Errc::InvalidCall,
                  std::string("no category for ") + std::string(function_name(rec.fn)));
  }
}

}  // namespace rpr
