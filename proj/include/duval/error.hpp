#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace duval {

// Error taxonomy used across the library. `parse` carries a byte offset into
// the offending input; the CLI maps `parse`/`usage` to exit code 2 and the
// rest to exit code 1.
enum class errc {
  domain,        // precondition violated, unsupported parameters
  parse,         // expression syntax error
  unclassified,  // germ not recognizably ADE within precision/max_index
  not_applicable,// bookkeeping rule outside its scope
  internal       // invariant broken inside the library (a bug guard)
};

class Error : public std::runtime_error {
 public:
  Error(errc code, std::string msg) : std::runtime_error(std::move(msg)), code_(code) {}
  Error(errc code, std::string msg, std::size_t position)
      : std::runtime_error(std::move(msg)), code_(code), position_(position) {}

  errc code() const { return code_; }
  std::optional<std::size_t> position() const { return position_; }

 private:
  errc code_;
  std::optional<std::size_t> position_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw Error(code, msg); }

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::domain: return "domain_error";
    case errc::parse: return "parse_error";
    case errc::unclassified: return "unclassified";
    case errc::not_applicable: return "rule_not_applicable";
    case errc::internal: return "internal_error";
  }
  return "unknown";
}

}  // namespace duval
