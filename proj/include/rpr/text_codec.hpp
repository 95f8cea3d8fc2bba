#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rpr/trace_log.hpp"

namespace rpr {

// Human-readable line-oriented log format (.rprt). One call per line:
//
//   <seq> <FnName>(<arg>,<arg>,...) [-> Kind#vid,...] @f<frameIndex>
//
// followed by a "%%blobs" section holding the referenced payloads hex-encoded
// under their content digest. Floats print as the shortest decimal that
// parses back bit-exactly. No continuation lines, no escaping.

inline constexpr std::string_view kTextHeader = "RPRT 1";
inline constexpr std::string_view kBlobSectionMarker = "%%blobs";

namespace text_detail {

inline void render_float(std::string& out, double v) {
  char buf[48];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  std::string_view s(buf, static_cast<std::size_t>(r.ptr - buf));
  out += s;
  // bare integers get a ".0" so the parser can tell floats from ints
  if (s.find_first_of(".eEni") == std::string_view::npos) out += ".0";
}

inline void render_arg(std::string& out, const ArgValue& a) {
  switch (a.type) {
    case ArgValue::Type::Int:
      out += std::to_string(a.int_value);
      break;
    case ArgValue::Type::Float:
      render_float(out, a.float_value);
      break;
    case ArgValue::Type::Enum: {
      auto name = enum_name(a.enum_value);
      if (!name) throw Error(Errc::Syntax, "enum value has no symbolic name: " +
                                               std::to_string(a.enum_value));
      out += *name;
      break;
    }
    case ArgValue::Type::Id:
      out += kind_name(a.id.kind);
      out += '#';
      out += std::to_string(a.id.vid);
      break;
    case ArgValue::Type::Blob:
      out += "blob:";
      out += to_hex(a.blob.digest);
      out += ':';
      out += std::to_string(a.blob.length);
      break;
  }
}

inline std::uint8_t hex_nibble(char c, std::uint64_t line) {
  if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
  if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
  if (c >= 'A' && c <= 'F') return static_cast<std::uint8_t>(c - 'A' + 10);
  throw Error(Errc::Syntax, "bad hex digit", line);
}

inline std::uint64_t parse_u64(std::string_view s, std::uint64_t line) {
  std::uint64_t v{};
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
    throw Error(Errc::Syntax, "expected unsigned integer", line);
  return v;
}

inline ArgValue parse_arg(std::string_view tok, std::uint64_t line) {
  if (tok.empty()) throw Error(Errc::Syntax, "empty argument", line);
  if (tok.rfind("blob:", 0) == 0) {
    std::string_view rest = tok.substr(5);
    auto colon = rest.find(':');
    if (colon == std::string_view::npos) throw Error(Errc::Syntax, "malformed blob ref", line);
    BlobRef b;
    if (colon != 64) throw Error(Errc::Syntax, "blob digest must be 64 hex chars", line);
    b.digest = digest_from_hex(rest.substr(0, colon));
    b.length = parse_u64(rest.substr(colon + 1), line);
    return ArgValue::blob_ref(b);
  }
  if (auto hash = tok.find('#'); hash != std::string_view::npos) {
    auto kind = kind_from_name(tok.substr(0, hash));
    if (kind) return ArgValue::id_ref(*kind, parse_u64(tok.substr(hash + 1), line));
    throw Error(Errc::Syntax, "unknown id kind in '" + std::string(tok) + "'", line);
  }
  char c = tok.front();
  bool numeric = (c == '-' || c == '+' || (c >= '0' && c <= '9')) ||
                 tok == "nan" || tok == "-nan" || tok == "inf" || tok == "-inf";
  if (numeric) {
    bool is_float = tok.find_first_of(".eEni") != std::string_view::npos;
    // hex-looking tokens are not produced by the encoder; reject
    if (is_float) {
      double v{};
      auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (r.ec != std::errc{} || r.ptr != tok.data() + tok.size())
        throw Error(Errc::Syntax, "malformed float '" + std::string(tok) + "'", line);
      return ArgValue::real(v);
    }
    std::int64_t v{};
    auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (r.ec != std::errc{} || r.ptr != tok.data() + tok.size())
      throw Error(Errc::Syntax, "malformed integer '" + std::string(tok) + "'", line);
    return ArgValue::integer(v);
  }
  if (auto value = enum_from_name(tok)) return ArgValue::token(*value);
  throw Error(Errc::Syntax, "unknown token '" + std::string(tok) + "'", line);
}

}  // namespace text_detail

inline std::string encode_text(const TraceLog& log) {
  std::string out;
  out += kTextHeader;
  out += '\n';
  for (const CallRecord& rec : log.records) {
    out += std::to_string(rec.seq);
    out += ' ';
    out += function_name(rec.fn);
    out += '(';
    for (std::size_t i = 0; i < rec.args.size(); ++i) {
      if (i) out += ',';
      text_detail::render_arg(out, rec.args[i]);
    }
    out += ')';
    if (!rec.returned_ids.empty()) {
      out += " -> ";
      for (std::size_t i = 0; i < rec.returned_ids.size(); ++i) {
        if (i) out += ',';
        out += kind_name(rec.returned_ids[i].kind);
        out += '#';
        out += std::to_string(rec.returned_ids[i].vid);
      }
    }
    out += " @f";
    out += std::to_string(rec.frame_index);
    out += '\n';
  }
  if (log.blobs.size() != 0) {
    out += kBlobSectionMarker;
    out += '\n';
    log.blobs.for_each([&](const Digest& d, const std::vector<std::uint8_t>& bytes) {
      out += "blob ";
      out += to_hex(d);
      out += ' ';
      out += std::to_string(bytes.size());
      if (!bytes.empty()) {
        out += ' ';
        static constexpr char k[] = "0123456789abcdef";
        for (std::uint8_t b : bytes) {
          out += k[b >> 4];
          out += k[b & 0xf];
        }
      }
      out += '\n';
    });
  }
  return out;
}

inline TraceLog parse_text(std::string_view doc) {
  using namespace text_detail;
  TraceLog log;
  std::uint64_t line_no = 0;
  std::size_t pos = 0;
  bool in_blobs = false;
  bool saw_header = false;
  while (pos <= doc.size()) {
    if (pos == doc.size()) break;
    auto nl = doc.find('\n', pos);
    std::string_view line =
        nl == std::string_view::npos ? doc.substr(pos) : doc.substr(pos, nl - pos);
    pos = nl == std::string_view::npos ? doc.size() : nl + 1;
    ++line_no;
    if (line_no == 1) {
      if (line != kTextHeader)
        throw Error(Errc::VersionMismatch, "expected header '" + std::string(kTextHeader) + "'");
      saw_header = true;
      continue;
    }
    if (line.empty()) throw Error(Errc::Syntax, "empty line", line_no);
    if (line == kBlobSectionMarker) {
      in_blobs = true;
      continue;
    }
    if (in_blobs) {
      if (line.rfind("blob ", 0) != 0) throw Error(Errc::Syntax, "expected blob line", line_no);
      std::string_view rest = line.substr(5);
      auto sp1 = rest.find(' ');
      if (sp1 == std::string_view::npos) throw Error(Errc::Syntax, "malformed blob line", line_no);
      Digest d = digest_from_hex(rest.substr(0, sp1));
      std::string_view rest2 = rest.substr(sp1 + 1);
      auto sp2 = rest2.find(' ');
      std::string_view len_tok = sp2 == std::string_view::npos ? rest2 : rest2.substr(0, sp2);
      std::uint64_t len = parse_u64(len_tok, line_no);
      std::string_view hex = sp2 == std::string_view::npos ? std::string_view{} : rest2.substr(sp2 + 1);
      if (hex.size() != 2 * len) throw Error(Errc::Syntax, "blob payload length mismatch", line_no);
      std::vector<std::uint8_t> bytes(len);
      for (std::uint64_t i = 0; i < len; ++i)
        bytes[i] = static_cast<std::uint8_t>(hex_nibble(hex[2 * i], line_no) << 4 |
                                             hex_nibble(hex[2 * i + 1], line_no));
      BlobRef ref = log.blobs.put(bytes);
      if (ref.digest != d) throw Error(Errc::DigestMismatch, to_hex(d), line_no);
      continue;
    }

    // record line
    auto sp = line.find(' ');
    if (sp == std::string_view::npos) throw Error(Errc::Syntax, "missing function name", line_no);
    CallRecord rec;
    rec.seq = parse_u64(line.substr(0, sp), line_no);
    std::string_view rest = line.substr(sp + 1);
    auto paren = rest.find('(');
    if (paren == std::string_view::npos) throw Error(Errc::Syntax, "missing '('", line_no);
    std::string_view fn_name = rest.substr(0, paren);
    auto fn = function_from_name(fn_name);
    if (!fn) throw Error(Errc::UnknownFunction, std::string(fn_name), line_no);
    rec.fn = *fn;
    auto close = rest.find(')', paren);
    if (close == std::string_view::npos) throw Error(Errc::Syntax, "missing ')'", line_no);
    std::string_view args = rest.substr(paren + 1, close - paren - 1);
    while (!args.empty()) {
      auto comma = args.find(',');
      std::string_view tok = comma == std::string_view::npos ? args : args.substr(0, comma);
      rec.args.push_back(parse_arg(tok, line_no));
      if (comma == std::string_view::npos) break;
      args = args.substr(comma + 1);
    }
    std::string_view tail = rest.substr(close + 1);
    if (tail.rfind(" -> ", 0) == 0) {
      tail = tail.substr(4);
      auto at = tail.find(" @f");
      if (at == std::string_view::npos) throw Error(Errc::Syntax, "missing frame index", line_no);
      std::string_view rets = tail.substr(0, at);
      tail = tail.substr(at);
      while (!rets.empty()) {
        auto comma = rets.find(',');
        std::string_view tok = comma == std::string_view::npos ? rets : rets.substr(0, comma);
        auto hash = tok.find('#');
        if (hash == std::string_view::npos) throw Error(Errc::Syntax, "malformed returned id", line_no);
        auto kind = kind_from_name(tok.substr(0, hash));
        if (!kind) throw Error(Errc::Syntax, "unknown id kind", line_no);
        rec.returned_ids.push_back({*kind, parse_u64(tok.substr(hash + 1), line_no)});
        if (comma == std::string_view::npos) break;
        rets = rets.substr(comma + 1);
      }
    }
    if (tail.rfind(" @f", 0) != 0) throw Error(Errc::Syntax, "missing frame index", line_no);
    rec.frame_index = parse_u64(tail.substr(3), line_no);
    try {
      validate_against_signature(rec);
    } catch (const Error& e) {
      throw Error(Errc::Syntax, e.what(), line_no);
    }
    log.records.push_back(std::move(rec));
  }
  if (!saw_header) throw Error(Errc::VersionMismatch, "empty document");
  log.validate();
  return log;
}

}  // namespace rpr
