#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rpr/trace_log.hpp"
#include "rpr/wire.hpp"

namespace rpr {

// Binary log format (.rprb): "RPRL" magic, little-endian u16 version, two pad
// bytes, then a varint-counted section of length-prefixed records and a
// varint-counted blob section indexed by digest. Encoding is deterministic:
// identical logs produce identical bytes.

inline constexpr std::uint8_t kBinaryMagic[4] = {'R', 'P', 'R', 'L'};
inline constexpr std::uint16_t kBinaryVersion = 1;

namespace binary_detail {

inline void put_blob_ref(std::vector<std::uint8_t>& out, const BlobRef& b) {
  wire::put_bytes(out, std::span<const std::uint8_t>(b.digest.data(), b.digest.size()));
  wire::put_varint(out, b.length);
}

inline void put_arg(std::vector<std::uint8_t>& out, const ArgValue& a) {
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

inline void put_record(std::vector<std::uint8_t>& out, const CallRecord& rec) {
  std::vector<std::uint8_t> body;
  wire::put_varint(body, rec.seq);
  wire::put_u8(body, static_cast<std::uint8_t>(rec.fn));
  wire::put_varint(body, rec.frame_index);
  wire::put_varint(body, rec.args.size());
  for (const ArgValue& a : rec.args) put_arg(body, a);
  wire::put_varint(body, rec.returned_ids.size());
  for (const ReturnedId& r : rec.returned_ids) {
    wire::put_u8(body, static_cast<std::uint8_t>(r.kind));
    wire::put_varint(body, r.vid);
  }
  wire::put_varint(out, body.size());
  wire::put_bytes(out, body);
}

inline ResourceKind read_kind(wire::Reader& r) {
  std::uint8_t k = r.u8();
  if (k >= kResourceKindCount)
    throw Error(Errc::TruncatedRecord, "bad resource kind " + std::to_string(k), r.offset());
  return static_cast<ResourceKind>(k);
}

inline BlobRef read_blob_ref(wire::Reader& r) {
  BlobRef b;
  auto d = r.bytes(32);
  std::copy(d.begin(), d.end(), b.digest.begin());
  b.length = r.varint();
  return b;
}

inline ArgValue read_arg(wire::Reader& r) {
  std::uint8_t tag = r.u8();
  switch (static_cast<ArgValue::Type>(tag)) {
    case ArgValue::Type::Int: return ArgValue::integer(wire::unzigzag(r.varint()));
    case ArgValue::Type::Float: return ArgValue::real(r.f64());
    case ArgValue::Type::Enum: return ArgValue::token(static_cast<std::uint32_t>(r.varint()));
    case ArgValue::Type::Id: {
      ResourceKind k = read_kind(r);
      return ArgValue::id_ref(k, r.varint());
    }
    case ArgValue::Type::Blob: return ArgValue::blob_ref(read_blob_ref(r));
  }
  throw Error(Errc::TruncatedRecord, "bad argument tag " + std::to_string(tag), r.offset());
}

inline CallRecord read_record(wire::Reader& outer) {
  std::uint64_t len = outer.varint();
  auto body_bytes = outer.bytes(len);
  wire::Reader r(body_bytes);
  CallRecord rec;
  rec.seq = r.varint();
  std::uint8_t fn = r.u8();
  if (fn < kFunctionIdMin || fn > kFunctionIdMax)
    throw Error(Errc::UnknownFunction, "function id " + std::to_string(fn), outer.offset());
  rec.fn = static_cast<FunctionId>(fn);
  rec.frame_index = r.varint();
  std::uint64_t argc = r.varint();
  if (argc > 1u << 20) throw Error(Errc::TruncatedRecord, "absurd arg count", outer.offset());
  rec.args.reserve(argc);
  for (std::uint64_t i = 0; i < argc; ++i) rec.args.push_back(read_arg(r));
  std::uint64_t retc = r.varint();
  if (retc > 1u << 20) throw Error(Errc::TruncatedRecord, "absurd return count", outer.offset());
  for (std::uint64_t i = 0; i < retc; ++i) {
    ResourceKind k = read_kind(r);
    rec.returned_ids.push_back({k, r.varint()});
  }
  if (!r.done()) throw Error(Errc::TruncatedRecord, "trailing bytes in record", outer.offset());
  return rec;
}

}  // namespace binary_detail

inline std::vector<std::uint8_t> encode_binary(const TraceLog& log) {
  std::vector<std::uint8_t> out;
  out.insert(out.end(), std::begin(kBinaryMagic), std::end(kBinaryMagic));
  wire::put_u16(out, kBinaryVersion);
  wire::put_u16(out, 0);
  wire::put_varint(out, log.records.size());
  for (const CallRecord& rec : log.records) binary_detail::put_record(out, rec);
  wire::put_varint(out, log.blobs.size());
  log.blobs.for_each([&](const Digest& d, const std::vector<std::uint8_t>& bytes) {
    wire::put_bytes(out, std::span<const std::uint8_t>(d.data(), d.size()));
    wire::put_varint(out, bytes.size());
    wire::put_bytes(out, bytes);
  });
  return out;
}

inline TraceLog parse_binary(std::span<const std::uint8_t> data) {
  wire::Reader r(data);
  if (r.remaining() < 8) throw Error(Errc::BadMagic, "document too short");
  auto magic = r.bytes(4);
  if (!std::equal(magic.begin(), magic.end(), std::begin(kBinaryMagic)))
    throw Error(Errc::BadMagic, "not a binary log");
  std::uint16_t version = r.u16();
  if (version != kBinaryVersion)
    throw Error(Errc::VersionMismatch, "binary log version " + std::to_string(version));
  r.u16();  // pad
  TraceLog log;
  std::uint64_t record_count = r.varint();
  for (std::uint64_t i = 0; i < record_count; ++i) {
    CallRecord rec = binary_detail::read_record(r);
    try {
      validate_against_signature(rec);
    } catch (const Error& e) {
      throw Error(Errc::TruncatedRecord, e.what(), r.offset());
    }
    log.records.push_back(std::move(rec));
  }
  std::uint64_t blob_count = r.varint();
  for (std::uint64_t i = 0; i < blob_count; ++i) {
    Digest d{};
    auto db = r.bytes(32);
    std::copy(db.begin(), db.end(), d.begin());
    std::uint64_t len = r.varint();
    auto payload = r.bytes(len);
    BlobRef ref = log.blobs.put(payload);
    if (ref.digest != d) throw Error(Errc::DigestMismatch, to_hex(d), r.offset());
  }
  if (!r.done()) throw Error(Errc::TruncatedRecord, "trailing bytes", r.offset());
  log.validate();
  return log;
}

}  // namespace rpr
