#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dynmatch {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

enum class EventKind : std::uint8_t { Insert, Delete };

// One edge-level update. Endpoints are unordered; (u,v) and (v,u) address the
// same edge.
struct UpdateEvent {
  EventKind kind;
  NodeId u;
  NodeId v;
};

// A batch of edge updates sharing one endpoint. Downstream consumers may treat
// the whole star as a single logical update.
struct StarUpdate {
  EventKind kind;
  NodeId center;
  std::vector<NodeId> leaves;
};

// One change to a maintained matching, stamped with a global sequence number
// so downstream consumers can replay changes in order.
struct EdgeChange {
  std::uint64_t seq;
  EventKind kind;
  NodeId u;
  NodeId v;
};

enum class ErrorCode : int {
  SelfLoop,
  DuplicateEdge,
  MissingEdge,
  EmptyNeighborhood,
  BadParameter,
  BadInput,
  DegreeBoundExceeded,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

// Canonical 64-bit key for an undirected edge.
inline std::uint64_t edge_key(NodeId u, NodeId v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

// Elementary-operation counter. Structures tick this on their primitive steps
// (ring link/unlink, cursor advance, list splice, scan probe) so worst-case
// budgets are testable as exact integers instead of wall-clock time.
struct OpCounter {
  std::uint64_t total = 0;
  void tick(std::uint64_t n = 1) { total += n; }
  std::uint64_t take_delta(std::uint64_t& last) const {
    std::uint64_t d = total - last;
    last = total;
    return d;
  }
};

}  // namespace dynmatch
