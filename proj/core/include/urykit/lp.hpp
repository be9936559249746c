#pragma once

// Exact rational linear programming: dense two-phase simplex with Bland's
// pivoting rule. All variables are non-negative. Sized for the small systems
// produced by relay-chain and witness searches (tens of variables, a few
// hundred rows).

#include <cstddef>
#include <vector>

#include "urykit/rational.hpp"

namespace urykit::lp {

enum class Relation { kLessEqual, kGreaterEqual, kEqual };

struct Term {
  std::size_t var;
  Rat coeff;
};

struct Constraint {
  std::vector<Term> terms;
  Relation relation;
  Rat rhs;
};

enum class Status { kOptimal, kInfeasible, kUnbounded };

struct Solution {
  Status status = Status::kInfeasible;
  Rat objective;
  std::vector<Rat> values;
};

class Problem {
 public:
  std::size_t add_variable() { return variables_++; }
  [[nodiscard]] std::size_t variables() const { return variables_; }
  [[nodiscard]] std::size_t constraints() const { return rows_.size(); }

  void add(std::vector<Term> terms, Relation relation, Rat rhs);
  void maximize(std::vector<Term> objective);
  void minimize(std::vector<Term> objective);

  [[nodiscard]] Solution solve() const;

 private:
  std::size_t variables_ = 0;
  std::vector<Constraint> rows_;
  std::vector<Term> objective_;
  bool maximize_ = true;
};

}  // namespace urykit::lp
