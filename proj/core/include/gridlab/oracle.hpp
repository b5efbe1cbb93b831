#pragma once

// Round-batched oracle protocol: an algorithm submits one batch per round,
// receives all answers at once, and cannot adapt within a round. Every round
// and every charged query is recorded in a ledger.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "gridlab/geometry.hpp"

namespace gridlab {

struct OracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RoundLimitExceeded : OracleError {
  RoundLimitExceeded() : OracleError("round limit exceeded") {}
};
struct QueryBudgetExceeded : OracleError {
  QueryBudgetExceeded() : OracleError("query budget exceeded") {}
};

// Domain of an oracle: the box [lo, hi]^d (lo is 0 for padded Brouwer grids,
// 1 everywhere else).
struct GridShape {
  int d = 0;
  Coord lo = 1;
  Coord hi = 1;
  Coord side() const { return hi - lo + 1; }
  Cube box() const { return Cube::from_corners(GridPoint(d, lo), GridPoint(d, hi)); }
  bool contains(const GridPoint& p) const {
    if (p.dim() != d) return false;
    for (int i = 0; i < d; ++i)
      if (p[i] < lo || p[i] > hi) return false;
    return true;
  }
};

struct LedgerRow {
  std::int64_t round = 0;      // 1-based
  std::int64_t batch_size = 0; // distinct points submitted
  std::int64_t charged = 0;    // queries charged this round
  std::int64_t cumulative = 0;
};

class RoundLedger {
 public:
  void record(std::int64_t batch_size, std::int64_t charged) {
    total_ += charged;
    rows_.push_back({static_cast<std::int64_t>(rows_.size()) + 1, batch_size, charged, total_});
  }
  std::int64_t round_count() const { return static_cast<std::int64_t>(rows_.size()); }
  std::int64_t total_queries() const { return total_; }
  const std::vector<LedgerRow>& rows() const { return rows_; }
  // CSV rows `round,batch_size,charged,cumulative_queries` with header.
  std::string to_csv() const;

 private:
  std::vector<LedgerRow> rows_;
  std::int64_t total_ = 0;
};

// Unit direction answer for Brouwer oracles: 0 encodes the zero vector,
// +(i+1) encodes +e^{i+1}, -(i+1) encodes -e^{i+1}.
struct Direction {
  std::int8_t code = 0;
  static Direction zero() { return {0}; }
  static Direction plus(int axis) { return {static_cast<std::int8_t>(axis + 1)}; }
  static Direction minus(int axis) { return {static_cast<std::int8_t>(-(axis + 1))}; }
  bool is_zero() const { return code == 0; }
  int axis() const { return (code > 0 ? code : -code) - 1; }
  int sign() const { return code == 0 ? 0 : (code > 0 ? 1 : -1); }
  GridPoint offset(int d) const {
    GridPoint o(d, 0);
    if (code != 0) o[axis()] = sign();
    return o;
  }
  friend bool operator==(Direction a, Direction b) { return a.code == b.code; }
};

// L-inf distance between two direction values, for the direction-preserving
// check.
inline int direction_linf(Direction a, Direction b, int d) {
  int m = 0;
  for (int i = 0; i < d; ++i) {
    int av = (!a.is_zero() && a.axis() == i) ? a.sign() : 0;
    int bv = (!b.is_zero() && b.axis() == i) ? b.sign() : 0;
    m = std::max(m, std::abs(av - bv));
  }
  return m;
}

// Answer of a GP (grid PPAD path) oracle.
struct GpNeighbors {
  std::optional<GridPoint> pred;
  std::optional<GridPoint> succ;
  friend bool operator==(const GpNeighbors& a, const GpNeighbors& b) {
    return a.pred == b.pred && a.succ == b.succ;
  }
};

struct SessionLimits {
  std::optional<std::int64_t> round_limit;
  std::optional<std::int64_t> query_budget;
  // When true, a point answered in an earlier round is charged again on
  // re-query. Default is free recall: the algorithm already holds the value.
  bool strict_recharge = false;
};

template <class Answer>
class OracleSession {
 public:
  using Evaluator = std::function<Answer(const GridPoint&)>;

  OracleSession(GridShape shape, Evaluator f, SessionLimits limits = {})
      : shape_(shape), f_(std::move(f)), limits_(limits) {}

  const GridShape& shape() const { return shape_; }
  const RoundLedger& ledger() const { return ledger_; }
  const SessionLimits& limits() const { return limits_; }

  // Submits one batch and consumes one round regardless of batch size.
  // Answers align with the submitted points (duplicates included). A batch
  // that would exceed the query budget is rejected atomically: no answers,
  // no charges, no round consumed.
  std::vector<Answer> submit(const std::vector<GridPoint>& batch) {
    if (limits_.round_limit && ledger_.round_count() >= *limits_.round_limit)
      throw RoundLimitExceeded();
    std::int64_t batch_distinct = 0;
    std::int64_t charged = 0;
    std::unordered_set<GridPoint, GridPointHash> in_batch;
    for (const GridPoint& p : batch) {
      if (!shape_.contains(p)) throw DomainError("query outside the grid");
      if (!in_batch.insert(p).second) continue;  // duplicates charged once
      ++batch_distinct;
      if (limits_.strict_recharge || !seen_.count(p)) ++charged;
    }
    if (limits_.query_budget && ledger_.total_queries() + charged > *limits_.query_budget)
      throw QueryBudgetExceeded();
    std::vector<Answer> answers;
    answers.reserve(batch.size());
    for (const GridPoint& p : batch) {
      seen_.insert(p);
      answers.push_back(f_(p));
    }
    ledger_.record(batch_distinct, charged);
    return answers;
  }

  // Audit channel: evaluates without touching the ledger. Acceptance checks
  // use this to verify solutions without perturbing complexity measurements.
  Answer peek(const GridPoint& p) const {
    if (!shape_.contains(p)) throw DomainError("query outside the grid");
    return f_(p);
  }

 private:
  GridShape shape_;
  Evaluator f_;
  SessionLimits limits_;
  RoundLedger ledger_;
  std::unordered_set<GridPoint, GridPointHash> seen_;
};

using ValueSession = OracleSession<std::int64_t>;
using FieldSession = OracleSession<Direction>;
using GpSession = OracleSession<GpNeighbors>;

// Post-hoc audit: p's value is <= the value of each of its grid neighbors.
// Runs on the un-ledgered channel.
bool verify_local_min(const ValueSession& s, const GridPoint& p);

}  // namespace gridlab
