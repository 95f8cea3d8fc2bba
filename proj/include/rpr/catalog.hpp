#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "rpr/errors.hpp"

namespace rpr {

enum class ResourceKind : std::uint8_t {
  Texture = 0,
  Buffer = 1,
  Shader = 2,
  Program = 3,
  Context = 4,
};

inline constexpr int kResourceKindCount = 5;

inline std::string_view kind_name(ResourceKind k) {
  switch (k) {
    case ResourceKind::Texture: return "Texture";
    case ResourceKind::Buffer: return "Buffer";
    case ResourceKind::Shader: return "Shader";
    case ResourceKind::Program: return "Program";
    case ResourceKind::Context: return "Context";
  }
  return "?";
}

inline std::optional<ResourceKind> kind_from_name(std::string_view s) {
  if (s == "Texture") return ResourceKind::Texture;
  if (s == "Buffer") return ResourceKind::Buffer;
  if (s == "Shader") return ResourceKind::Shader;
  if (s == "Program") return ResourceKind::Program;
  if (s == "Context") return ResourceKind::Context;
  return std::nullopt;
}

// Closed call catalog. Numeric values are the wire encoding of the binary
// log format and must not be reordered (see docs/format.md).
enum class FunctionId : std::uint8_t {
  CreateContext = 1,
  ResetContext = 2,
  DestroyContext = 3,
  ClearColor = 4,
  Clear = 5,
  Viewport = 6,
  Enable = 7,
  Disable = 8,
  EnableClientState = 9,
  DisableClientState = 10,
  MatrixMode = 11,
  LoadMatrix = 12,
  GenTextures = 13,
  DeleteTextures = 14,
  BindTexture = 15,
  TexParameter = 16,
  TexImage = 17,
  GenBuffers = 18,
  DeleteBuffers = 19,
  BindBuffer = 20,
  BufferData = 21,
  VertexPointer = 22,
  ColorPointer = 23,
  TexCoordPointer = 24,
  CreateShader = 25,
  ShaderSource = 26,
  CompileShader = 27,
  DeleteShader = 28,
  CreateProgram = 29,
  AttachShader = 30,
  LinkProgram = 31,
  UseProgram = 32,
  DeleteProgram = 33,
  Draw = 34,
  Finish = 35,
  SwapBuffers = 36,
};

inline constexpr std::uint8_t kFunctionIdMin = 1;
inline constexpr std::uint8_t kFunctionIdMax = 36;

enum class RoleTag : std::uint8_t {
  FrameRoot,
  StateSet,
  SelectorBind,
  ResourceGen,
  ResourceDelete,
  LifecycleStep,
};

// Total over the closed catalog; every function has exactly one role.
inline RoleTag classify(FunctionId fn) {
  switch (fn) {
    case FunctionId::Draw:
    case FunctionId::Finish:
    case FunctionId::SwapBuffers:
      return RoleTag::FrameRoot;
    case FunctionId::BindTexture:
    case FunctionId::BindBuffer:
    case FunctionId::MatrixMode:
    case FunctionId::UseProgram:
      return RoleTag::SelectorBind;
    case FunctionId::GenTextures:
    case FunctionId::GenBuffers:
    case FunctionId::CreateShader:
    case FunctionId::CreateProgram:
    case FunctionId::CreateContext:
      return RoleTag::ResourceGen;
    case FunctionId::DeleteTextures:
    case FunctionId::DeleteBuffers:
    case FunctionId::DeleteShader:
    case FunctionId::DeleteProgram:
      return RoleTag::ResourceDelete;
    case FunctionId::ShaderSource:
    case FunctionId::CompileShader:
    case FunctionId::AttachShader:
    case FunctionId::LinkProgram:
      return RoleTag::LifecycleStep;
    default:
      return RoleTag::StateSet;
  }
}

inline std::string_view function_name(FunctionId fn) {
  switch (fn) {
    case FunctionId::CreateContext: return "CreateContext";
    case FunctionId::ResetContext: return "ResetContext";
    case FunctionId::DestroyContext: return "DestroyContext";
    case FunctionId::ClearColor: return "ClearColor";
    case FunctionId::Clear: return "Clear";
    case FunctionId::Viewport: return "Viewport";
    case FunctionId::Enable: return "Enable";
    case FunctionId::Disable: return "Disable";
    case FunctionId::EnableClientState: return "EnableClientState";
    case FunctionId::DisableClientState: return "DisableClientState";
    case FunctionId::MatrixMode: return "MatrixMode";
    case FunctionId::LoadMatrix: return "LoadMatrix";
    case FunctionId::GenTextures: return "GenTextures";
    case FunctionId::DeleteTextures: return "DeleteTextures";
    case FunctionId::BindTexture: return "BindTexture";
    case FunctionId::TexParameter: return "TexParameter";
    case FunctionId::TexImage: return "TexImage";
    case FunctionId::GenBuffers: return "GenBuffers";
    case FunctionId::DeleteBuffers: return "DeleteBuffers";
    case FunctionId::BindBuffer: return "BindBuffer";
    case FunctionId::BufferData: return "BufferData";
    case FunctionId::VertexPointer: return "VertexPointer";
    case FunctionId::ColorPointer: return "ColorPointer";
    case FunctionId::TexCoordPointer: return "TexCoordPointer";
    case FunctionId::CreateShader: return "CreateShader";
    case FunctionId::ShaderSource: return "ShaderSource";
    case FunctionId::CompileShader: return "CompileShader";
    case FunctionId::DeleteShader: return "DeleteShader";
    case FunctionId::CreateProgram: return "CreateProgram";
    case FunctionId::AttachShader: return "AttachShader";
    case FunctionId::LinkProgram: return "LinkProgram";
    case FunctionId::UseProgram: return "UseProgram";
    case FunctionId::DeleteProgram: return "DeleteProgram";
    case FunctionId::Draw: return "Draw";
    case FunctionId::Finish: return "Finish";
    case FunctionId::SwapBuffers: return "SwapBuffers";
  }
  return "?";
}

inline std::optional<FunctionId> function_from_name(std::string_view s) {
  for (std::uint8_t v = kFunctionIdMin; v <= kFunctionIdMax; ++v) {
    auto fn = static_cast<FunctionId>(v);
    if (function_name(fn) == s) return fn;
  }
  return std::nullopt;
}

// Symbolic constants with fixed numeric values (standard OpenGL values where
// one exists). The name table below is the closed set the text codec accepts.
namespace gl {
inline constexpr std::uint32_t BLEND = 0x0BE2;
inline constexpr std::uint32_t DEPTH_TEST = 0x0B71;
inline constexpr std::uint32_t CULL_FACE = 0x0B44;
inline constexpr std::uint32_t LIGHTING = 0x0B50;
inline constexpr std::uint32_t SCISSOR_TEST = 0x0C11;
inline constexpr std::uint32_t STENCIL_TEST = 0x0B90;
inline constexpr std::uint32_t FOG = 0x0B60;

inline constexpr std::uint32_t VERTEX_ARRAY = 0x8074;
inline constexpr std::uint32_t NORMAL_ARRAY = 0x8075;
inline constexpr std::uint32_t COLOR_ARRAY = 0x8076;
inline constexpr std::uint32_t TEXTURE_COORD_ARRAY = 0x8078;

inline constexpr std::uint32_t MODELVIEW = 0x1700;
inline constexpr std::uint32_t PROJECTION = 0x1701;
inline constexpr std::uint32_t TEXTURE = 0x1702;

inline constexpr std::uint32_t TEXTURE_1D = 0x0DE0;
inline constexpr std::uint32_t TEXTURE_2D = 0x0DE1;
inline constexpr std::uint32_t TEXTURE_3D = 0x806F;

inline constexpr std::uint32_t TEXTURE_MAG_FILTER = 0x2800;
inline constexpr std::uint32_t TEXTURE_MIN_FILTER = 0x2801;
inline constexpr std::uint32_t TEXTURE_WRAP_S = 0x2802;
inline constexpr std::uint32_t TEXTURE_WRAP_T = 0x2803;

inline constexpr std::uint32_t NEAREST = 0x2600;
inline constexpr std::uint32_t LINEAR = 0x2601;
inline constexpr std::uint32_t CLAMP = 0x2900;
inline constexpr std::uint32_t REPEAT = 0x2901;
inline constexpr std::uint32_t CLAMP_TO_EDGE = 0x812F;

inline constexpr std::uint32_t ARRAY_BUFFER = 0x8892;
inline constexpr std::uint32_t ELEMENT_ARRAY_BUFFER = 0x8893;

inline constexpr std::uint32_t STREAM_DRAW = 0x88E0;
inline constexpr std::uint32_t STATIC_DRAW = 0x88E4;
inline constexpr std::uint32_t DYNAMIC_DRAW = 0x88E8;

inline constexpr std::uint32_t FRAGMENT_SHADER = 0x8B30;
inline constexpr std::uint32_t VERTEX_SHADER = 0x8B31;

inline constexpr std::uint32_t POINTS = 0x0000;
inline constexpr std::uint32_t LINES = 0x0001;
inline constexpr std::uint32_t TRIANGLES = 0x0004;
inline constexpr std::uint32_t TRIANGLE_STRIP = 0x0005;
}  // namespace gl

struct EnumEntry {
  std::string_view name;
  std::uint32_t value;
};

inline constexpr EnumEntry kEnumTable[] = {
    {"GL_BLEND", gl::BLEND},
    {"GL_DEPTH_TEST", gl::DEPTH_TEST},
    {"GL_CULL_FACE", gl::CULL_FACE},
    {"GL_LIGHTING", gl::LIGHTING},
    {"GL_SCISSOR_TEST", gl::SCISSOR_TEST},
    {"GL_STENCIL_TEST", gl::STENCIL_TEST},
    {"GL_FOG", gl::FOG},
    {"GL_VERTEX_ARRAY", gl::VERTEX_ARRAY},
    {"GL_NORMAL_ARRAY", gl::NORMAL_ARRAY},
    {"GL_COLOR_ARRAY", gl::COLOR_ARRAY},
    {"GL_TEXTURE_COORD_ARRAY", gl::TEXTURE_COORD_ARRAY},
    {"GL_MODELVIEW", gl::MODELVIEW},
    {"GL_PROJECTION", gl::PROJECTION},
    {"GL_TEXTURE", gl::TEXTURE},
    {"GL_TEXTURE_1D", gl::TEXTURE_1D},
    {"GL_TEXTURE_2D", gl::TEXTURE_2D},
    {"GL_TEXTURE_3D", gl::TEXTURE_3D},
    {"GL_TEXTURE_MAG_FILTER", gl::TEXTURE_MAG_FILTER},
    {"GL_TEXTURE_MIN_FILTER", gl::TEXTURE_MIN_FILTER},
    {"GL_TEXTURE_WRAP_S", gl::TEXTURE_WRAP_S},
    {"GL_TEXTURE_WRAP_T", gl::TEXTURE_WRAP_T},
    {"GL_NEAREST", gl::NEAREST},
    {"GL_LINEAR", gl::LINEAR},
    {"GL_CLAMP", gl::CLAMP},
    {"GL_REPEAT", gl::REPEAT},
    {"GL_CLAMP_TO_EDGE", gl::CLAMP_TO_EDGE},
    {"GL_ARRAY_BUFFER", gl::ARRAY_BUFFER},
    {"GL_ELEMENT_ARRAY_BUFFER", gl::ELEMENT_ARRAY_BUFFER},
    {"GL_STREAM_DRAW", gl::STREAM_DRAW},
    {"GL_STATIC_DRAW", gl::STATIC_DRAW},
    {"GL_DYNAMIC_DRAW", gl::DYNAMIC_DRAW},
    {"GL_FRAGMENT_SHADER", gl::FRAGMENT_SHADER},
    {"GL_VERTEX_SHADER", gl::VERTEX_SHADER},
    {"GL_POINTS", gl::POINTS},
    {"GL_LINES", gl::LINES},
    {"GL_TRIANGLES", gl::TRIANGLES},
    {"GL_TRIANGLE_STRIP", gl::TRIANGLE_STRIP},
};

inline std::optional<std::string_view> enum_name(std::uint32_t value) {
  for (const auto& e : kEnumTable)
    if (e.value == value) return e.name;
  return std::nullopt;
}

inline std::optional<std::uint32_t> enum_from_name(std::string_view name) {
  for (const auto& e : kEnumTable)
    if (e.name == name) return e.value;
  return std::nullopt;
}

// --- argument signatures ---------------------------------------------------

enum class ParamKind : std::uint8_t {
  Int,     // IntScalar
  Float,   // FloatScalar
  Enum,    // EnumToken
  Scalar,  // IntScalar, FloatScalar or EnumToken (TexParameter value slot)
  Id,      // IdRef of a specific kind
  Blob,    // BlobRef
};

struct ParamSpec {
  ParamKind kind;
  ResourceKind id_kind = ResourceKind::Texture;  // meaningful for Id only
};

struct FunctionSig {
  std::vector<ParamSpec> params;
  // Delete* take a variable-length list of IdRefs of this kind.
  std::optional<ResourceKind> variadic_ids;
  // Gen*/Create* return ids of this kind; Gen* return as many as arg0 says.
  std::optional<ResourceKind> returns;
  bool count_from_arg0 = false;
};

inline const FunctionSig& signature(FunctionId fn) {
  using PK = ParamKind;
  using RK = ResourceKind;
  static const FunctionSig sigs[] = {
      /* CreateContext */ {{}, std::nullopt, RK::Context, false},
      /* ResetContext */ {{}, std::nullopt, std::nullopt, false},
      /* DestroyContext */ {{}, std::nullopt, std::nullopt, false},
      /* ClearColor */ {{{PK::Float}, {PK::Float}, {PK::Float}, {PK::Float}}, std::nullopt, std::nullopt, false},
      /* Clear */ {{{PK::Int}}, std::nullopt, std::nullopt, false},
      /* Viewport */ {{{PK::Int}, {PK::Int}, {PK::Int}, {PK::Int}}, std::nullopt, std::nullopt, false},
      /* Enable */ {{{PK::Enum}}, std::nullopt, std::nullopt, false},
      /* Disable */ {{{PK::Enum}}, std::nullopt, std::nullopt, false},
      /* EnableClientState */ {{{PK::Enum}}, std::nullopt, std::nullopt, false},
      /* DisableClientState */ {{{PK::Enum}}, std::nullopt, std::nullopt, false},
      /* MatrixMode */ {{{PK::Enum}}, std::nullopt, std::nullopt, false},
      /* LoadMatrix */ {std::vector<ParamSpec>(16, ParamSpec{PK::Float}), std::nullopt, std::nullopt, false},
      /* GenTextures */ {{{PK::Int}}, std::nullopt, RK::Texture, true},
      /* DeleteTextures */ {{}, RK::Texture, std::nullopt, false},
      /* BindTexture */ {{{PK::Enum}, {PK::Id, RK::Texture}}, std::nullopt, std::nullopt, false},
      /* TexParameter */ {{{PK::Enum}, {PK::Enum}, {PK::Scalar}}, std::nullopt, std::nullopt, false},
      /* TexImage */ {{{PK::Enum}, {PK::Int}, {PK::Blob}}, std::nullopt, std::nullopt, false},
      /* GenBuffers */ {{{PK::Int}}, std::nullopt, RK::Buffer, true},
      /* DeleteBuffers */ {{}, RK::Buffer, std::nullopt, false},
      /* BindBuffer */ {{{PK::Enum}, {PK::Id, RK::Buffer}}, std::nullopt, std::nullopt, false},
      /* BufferData */ {{{PK::Enum}, {PK::Blob}, {PK::Enum}}, std::nullopt, std::nullopt, false},
      /* VertexPointer */ {{{PK::Blob}}, std::nullopt, std::nullopt, false},
      /* ColorPointer */ {{{PK::Blob}}, std::nullopt, std::nullopt, false},
      /* TexCoordPointer */ {{{PK::Blob}}, std::nullopt, std::nullopt, false},
      /* CreateShader */ {{{PK::Enum}}, std::nullopt, RK::Shader, false},
      /* ShaderSource */ {{{PK::Id, RK::Shader}, {PK::Blob}}, std::nullopt, std::nullopt, false},
      /* CompileShader */ {{{PK::Id, RK::Shader}}, std::nullopt, std::nullopt, false},
      /* DeleteShader */ {{{PK::Id, RK::Shader}}, std::nullopt, std::nullopt, false},
      /* CreateProgram */ {{}, std::nullopt, RK::Program, false},
      /* AttachShader */ {{{PK::Id, RK::Program}, {PK::Id, RK::Shader}}, std::nullopt, std::nullopt, false},
      /* LinkProgram */ {{{PK::Id, RK::Program}}, std::nullopt, std::nullopt, false},
      /* UseProgram */ {{{PK::Id, RK::Program}}, std::nullopt, std::nullopt, false},
      /* DeleteProgram */ {{{PK::Id, RK::Program}}, std::nullopt, std::nullopt, false},
      /* Draw */ {{{PK::Enum}, {PK::Int}, {PK::Int}}, std::nullopt, std::nullopt, false},
      /* Finish */ {{}, std::nullopt, std::nullopt, false},
      /* SwapBuffers */ {{}, std::nullopt, std::nullopt, false},
  };
  return sigs[static_cast<std::uint8_t>(fn) - kFunctionIdMin];
}

}  // namespace rpr
