#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rpr/catalog.hpp"
#include "rpr/digest.hpp"

namespace rpr {

struct IdRef {
  ResourceKind kind = ResourceKind::Texture;
  std::uint64_t vid = 0;  // 0 is reserved: "no object" / unbind

  friend bool operator==(const IdRef&, const IdRef&) = default;
};

struct BlobRef {
  Digest digest{};
  std::uint64_t length = 0;

  friend bool operator==(const BlobRef&, const BlobRef&) = default;
};

// Tagged scalar/handle/payload value of one call argument.
struct ArgValue {
  enum class Type : std::uint8_t { Int = 0, Float = 1, Enum = 2, Id = 3, Blob = 4 };

  Type type = Type::Int;
  std::int64_t int_value = 0;
  double float_value = 0.0;
  std::uint32_t enum_value = 0;
  IdRef id{};
  BlobRef blob{};

  static ArgValue integer(std::int64_t v) {
    ArgValue a;
    a.type = Type::Int;
    a.int_value = v;
    return a;
  }
  static ArgValue real(double v) {
    ArgValue a;
    a.type = Type::Float;
    a.float_value = v;
    return a;
  }
  static ArgValue token(std::uint32_t v) {
    ArgValue a;
    a.type = Type::Enum;
    a.enum_value = v;
    return a;
  }
  static ArgValue id_ref(ResourceKind k, std::uint64_t vid) {
    ArgValue a;
    a.type = Type::Id;
    a.id = {k, vid};
    return a;
  }
  static ArgValue blob_ref(BlobRef b) {
    ArgValue a;
    a.type = Type::Blob;
    a.blob = b;
    return a;
  }

  friend bool operator==(const ArgValue& x, const ArgValue& y) {
    if (x.type != y.type) return false;
    switch (x.type) {
      case Type::Int: return x.int_value == y.int_value;
      case Type::Float: {
        // bit-exact: distinguishes -0.0 and compares NaN payloads
        std::uint64_t a{}, b{};
        std::memcpy(&a, &x.float_value, 8);
        std::memcpy(&b, &y.float_value, 8);
        return a == b;
      }
      case Type::Enum: return x.enum_value == y.enum_value;
      case Type::Id: return x.id == y.id;
      case Type::Blob: return x.blob == y.blob;
    }
    return false;
  }
};

struct ReturnedId {
  ResourceKind kind = ResourceKind::Texture;
  std::uint64_t vid = 0;

  friend bool operator==(const ReturnedId&, const ReturnedId&) = default;
};

// Argument as a caller supplies it: either a ready value, or raw bytes that
// the recorder captures into the blob store at record time.
using CallArg = std::variant<ArgValue, std::vector<std::uint8_t>>;

// One recorded call, in virtual-id space. Blobs live in the owning log's
// blob store and are referenced by digest.
struct CallRecord {
  std::uint64_t seq = 0;
  FunctionId fn = FunctionId::CreateContext;
  std::vector<ArgValue> args;
  std::vector<ReturnedId> returned_ids;  // non-empty only for Gen*/Create*
  std::uint64_t frame_index = 0;

  friend bool operator==(const CallRecord&, const CallRecord&) = default;
};

// Structural validation against the catalog signature (arity, argument value
// kinds, returned-id kinds). Semantic checks live in the driver.
inline void validate_against_signature(const CallRecord& rec) {
  const FunctionSig& sig = signature(rec.fn);
  auto fail = [&](const std::string& why) {
    throw Error(Errc::InvalidCall,
                std::string(function_name(rec.fn)) + ": " + why + " (seq " +
                    std::to_string(rec.seq) + ")");
  };
  if (sig.variadic_ids) {
    for (const ArgValue& a : rec.args) {
      if (a.type != ArgValue::Type::Id || a.id.kind != *sig.variadic_ids)
        fail("expects a list of " + std::string(kind_name(*sig.variadic_ids)) + " ids");
    }
  } else {
    if (rec.args.size() != sig.params.size()) fail("wrong argument count");
    for (std::size_t i = 0; i < rec.args.size(); ++i) {
      const ParamSpec& p = sig.params[i];
      const ArgValue& a = rec.args[i];
      switch (p.kind) {
        case ParamKind::Int:
          if (a.type != ArgValue::Type::Int) fail("arg " + std::to_string(i) + " must be int");
          break;
        case ParamKind::Float:
          if (a.type != ArgValue::Type::Float) fail("arg " + std::to_string(i) + " must be float");
          break;
        case ParamKind::Enum:
          if (a.type != ArgValue::Type::Enum) fail("arg " + std::to_string(i) + " must be enum");
          break;
        case ParamKind::Scalar:
          if (a.type == ArgValue::Type::Id || a.type == ArgValue::Type::Blob)
            fail("arg " + std::to_string(i) + " must be scalar");
          break;
        case ParamKind::Id:
          if (a.type != ArgValue::Type::Id || a.id.kind != p.id_kind)
            fail("arg " + std::to_string(i) + " must be a " +
                 std::string(kind_name(p.id_kind)) + " id");
          break;
        case ParamKind::Blob:
          if (a.type != ArgValue::Type::Blob) fail("arg " + std::to_string(i) + " must be blob");
          break;
      }
    }
  }
  if (!rec.returned_ids.empty()) {
    if (!sig.returns) fail("does not return ids");
    for (const ReturnedId& r : rec.returned_ids) {
      if (r.kind != *sig.returns) fail("returned id of wrong kind");
      if (r.vid == 0) fail("returned id 0");
    }
    if (sig.count_from_arg0 && !rec.args.empty() && rec.args[0].type == ArgValue::Type::Int &&
        rec.returned_ids.size() != static_cast<std::size_t>(rec.args[0].int_value))
      fail("returned-id count does not match requested count");
  }
}

}  // namespace rpr
