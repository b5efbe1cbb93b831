#include "gridlab/oracle.hpp"

namespace gridlab {

std::string RoundLedger::to_csv() const {
  std::string out = "round,batch_size,charged,cumulative_queries\n";
  for (const LedgerRow& r : rows_) {
    out += std::to_string(r.round);
    out += ',';
    out += std::to_string(r.batch_size);
    out += ',';
    out += std::to_string(r.charged);
    out += ',';
    out += std::to_string(r.cumulative);
    out += '\n';
  }
  return out;
}

bool verify_local_min(const ValueSession& s, const GridPoint& p) {
  const std::int64_t v = s.peek(p);
  for (const GridPoint& q : neighbors(p, s.shape().box()))
    if (s.peek(q) < v) return false;
  return true;
}

}  // namespace gridlab
