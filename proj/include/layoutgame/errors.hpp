#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace layoutgame {

/// A caller broke an operation's precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Semantic problem with a network: duplicate ids, dangling endpoints,
/// self-loops, parallel edges.
class NetworkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Simple-path enumeration went past the configured cap.
class PathCountCapExceeded : public std::runtime_error {
 public:
  explicit PathCountCapExceeded(std::uint64_t cap)
      : std::runtime_error("simple path count exceeds cap of " + std::to_string(cap)), cap_(cap) {}
  std::uint64_t cap() const { return cap_; }

 private:
  std::uint64_t cap_;
};

/// Malformed or inconsistent document. `where` names the field or line.
class DocumentError : public std::runtime_error {
 public:
  DocumentError(std::string where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

/// A session operation named a node the network does not have.
class UnknownNodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation on a session that has already been finalized.
class SessionClosedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace layoutgame
