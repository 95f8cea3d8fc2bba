#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rpr {

enum class Errc {
  // format / codec
  Syntax,
  UnknownFunction,
  VersionMismatch,
  BadMagic,
  TruncatedRecord,
  DigestMismatch,
  MissingBlob,
  BadImage,
  Io,
  // translation table
  DuplicateReal,
  UnknownVirtualId,
  // driver
  UseAfterDelete,
  NoContext,
  UntranslatableRealId,
  InvalidCall,
  // session
  SessionClosed,
  VerifyMismatch,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::Syntax: return "Syntax";
    case Errc::UnknownFunction: return "UnknownFunction";
    case Errc::VersionMismatch: return "VersionMismatch";
    case Errc::BadMagic: return "BadMagic";
    case Errc::TruncatedRecord: return "TruncatedRecord";
    case Errc::DigestMismatch: return "DigestMismatch";
    case Errc::MissingBlob: return "MissingBlob";
    case Errc::BadImage: return "BadImage";
    case Errc::Io: return "Io";
    case Errc::DuplicateReal: return "DuplicateReal";
    case Errc::UnknownVirtualId: return "UnknownVirtualId";
    case Errc::UseAfterDelete: return "UseAfterDelete";
    case Errc::NoContext: return "NoContext";
    case Errc::UntranslatableRealId: return "UntranslatableRealId";
    case Errc::InvalidCall: return "InvalidCall";
    case Errc::SessionClosed: return "SessionClosed";
    case Errc::VerifyMismatch: return "VerifyMismatch";
  }
  return "?";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Error(Errc code, std::string message, std::uint64_t where)
      : Error(code, message + " (at " + std::to_string(where) + ")") {
    where_ = where;
  }

  Errc code() const noexcept { return code_; }
  // line number for text parse errors, byte offset for binary parse errors
  std::uint64_t where() const noexcept { return where_; }

  // Exit-code family used by the CLI: format and I/O problems map to 3,
  // verification mismatches to 2.
  bool is_format_error() const noexcept {
    switch (code_) {
      case Errc::Syntax:
      case Errc::UnknownFunction:
      case Errc::VersionMismatch:
      case Errc::BadMagic:
      case Errc::TruncatedRecord:
      case Errc::DigestMismatch:
      case Errc::MissingBlob:
      case Errc::BadImage:
      case Errc::Io:
        return true;
      default:
        return false;
    }
  }

 private:
  Errc code_;
  std::uint64_t where_ = 0;
};

}  // namespace rpr
