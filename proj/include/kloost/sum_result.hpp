#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "kloost/padic.hpp"
#include "kloost/weyl.hpp"

namespace kloost {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// m_{i,j} on I_w; vertices outside the map read as zero.
struct ModuliAssignment {
  std::map<Vertex, int> m;

  int at(const Vertex& v) const {
    auto it = m.find(v);
    return it == m.end() ? 0 : it->second;
  }
  int nonzero_count() const;
  std::string str() const;
};

struct AssignmentResult {
  ModuliAssignment assignment;
  CyclotomicValue value;
  u64 cell_count = 0;
};

struct SumResult {
  CyclotomicValue value;
  Magnitude magnitude;
  u64 cell_count = 0;
  std::vector<AssignmentResult> breakdown;

  // Recomputes magnitude from value.
  void finalize() { magnitude = value.magnitude(); }
};

}  // namespace kloost
