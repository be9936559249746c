#include "urykit/lp.hpp"

#include <optional>

#include "urykit/errors.hpp"

namespace urykit::lp {
namespace {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : cells_(rows, std::vector<Rat>(cols + 1)), basis_(rows), cols_(cols) {}

  Rat& at(std::size_t r, std::size_t c) { return cells_[r][c]; }
  Rat& rhs(std::size_t r) { return cells_[r][cols_]; }
  std::size_t rows() const { return cells_.size(); }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void remove_row(std::size_t r) {
    cells_.erase(cells_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

  void pivot(std::size_t r, std::size_t e, std::vector<Rat>& objective) {
    std::vector<Rat>& prow = cells_[r];
    const Rat inv = Rat(1) / prow[e];
    std::vector<std::size_t> nz;
    for (std::size_t c = 0; c <= cols_; ++c) {
      if (prow[c].is_zero()) continue;
      prow[c] *= inv;
      nz.push_back(c);
    }
    auto eliminate = [&](std::vector<Rat>& row) {
      if (row[e].is_zero()) return;
      const Rat factor = row[e];
      for (std::size_t c : nz) row[c] -= factor * prow[c];
    };
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      if (i != r) eliminate(cells_[i]);
    }
    eliminate(objective);
    basis_[r] = e;
  }

 private:
  std::vector<std::vector<Rat>> cells_;
  std::vector<std::size_t> basis_;
  std::size_t cols_;
};

// Objective row layout: reduced costs in [0, cols), negated objective value
// at index cols. Maximizes; columns with allowed[c] == false never enter.
Status run_simplex(Tableau& t, std::vector<Rat>& objective, const std::vector<bool>& allowed) {
  for (;;) {
    std::optional<std::size_t> entering;
    for (std::size_t c = 0; c < t.cols(); ++c) {
      if (allowed[c] && objective[c].sign() > 0) {
        entering = c;
        break;
      }
    }
    if (!entering) return Status::kOptimal;
    std::optional<std::size_t> leaving;
    Rat best_ratio;
    for (std::size_t r = 0; r < t.rows(); ++r) {
      const Rat& a = t.at(r, *entering);
      if (a.sign() <= 0) continue;
      Rat ratio = t.rhs(r) / a;
      if (!leaving || ratio < best_ratio ||
          (ratio == best_ratio && t.basis()[r] < t.basis()[*leaving])) {
        leaving = r;
        best_ratio = std::move(ratio);
      }
    }
    if (!leaving) return Status::kUnbounded;
    t.pivot(*leaving, *entering, objective);
  }
}

std::vector<Rat> reduced_costs(Tableau& t, const std::vector<Rat>& cost) {
  std::vector<Rat> objective(t.cols() + 1);
  for (std::size_t c = 0; c < t.cols(); ++c) objective[c] = cost[c];
  for (std::size_t r = 0; r < t.rows(); ++r) {
    const Rat& cb = cost[t.basis()[r]];
    if (cb.is_zero()) continue;
    for (std::size_t c = 0; c <= t.cols(); ++c) {
      if (!t.at(r, c).is_zero()) objective[c] -= cb * t.at(r, c);
    }
  }
  return objective;
}

}  // namespace

void Problem::add(std::vector<Term> terms, Relation relation, Rat rhs) {
  for (const Term& term : terms) {
    if (term.var >= variables_) throw InternalError("LP term references an undeclared variable");
  }
  rows_.push_back({std::move(terms), relation, std::move(rhs)});
}

void Problem::maximize(std::vector<Term> objective) {
  objective_ = std::move(objective);
  maximize_ = true;
}

void Problem::minimize(std::vector<Term> objective) {
  objective_ = std::move(objective);
  maximize_ = false;
}

Solution Problem::solve() const {
  const std::size_t m = rows_.size();
  const std::size_t n = variables_;
  std::size_t slack_count = 0;
  std::size_t artificial_count = 0;
  std::vector<bool> flip(m);
  for (std::size_t r = 0; r < m; ++r) {
    flip[r] = rows_[r].rhs.sign() < 0;
    Relation rel = rows_[r].relation;
    if (flip[r] && rel != Relation::kEqual) {
      rel = rel == Relation::kLessEqual ? Relation::kGreaterEqual : Relation::kLessEqual;
    }
    if (rel != Relation::kEqual) ++slack_count;
    if (rel != Relation::kLessEqual) ++artificial_count;
  }
  const std::size_t cols = n + slack_count + artificial_count;
  Tableau t(m, cols);
  std::vector<bool> artificial(cols, false);
  std::size_t next_slack = n;
  std::size_t next_art = n + slack_count;
  for (std::size_t r = 0; r < m; ++r) {
    const Rat sign = flip[r] ? Rat(-1) : Rat(1);
    for (const Term& term : rows_[r].terms) t.at(r, term.var) += sign * term.coeff;
    t.rhs(r) = sign * rows_[r].rhs;
    Relation rel = rows_[r].relation;
    if (flip[r] && rel != Relation::kEqual) {
      rel = rel == Relation::kLessEqual ? Relation::kGreaterEqual : Relation::kLessEqual;
    }
    if (rel == Relation::kLessEqual) {
      t.at(r, next_slack) = 1;
      t.basis()[r] = next_slack++;
    } else {
      if (rel == Relation::kGreaterEqual) t.at(r, next_slack++) = -1;
      t.at(r, next_art) = 1;
      artificial[next_art] = true;
      t.basis()[r] = next_art++;
    }
  }

  std::vector<bool> allowed(cols, true);
  if (artificial_count > 0) {
    std::vector<Rat> cost(cols);
    for (std::size_t c = 0; c < cols; ++c) {
      if (artificial[c]) cost[c] = -1;
    }
    std::vector<Rat> objective = reduced_costs(t, cost);
    run_simplex(t, objective, allowed);
    if (objective[cols].sign() != 0) return Solution{Status::kInfeasible, Rat(), {}};
    for (std::size_t r = 0; r < t.rows();) {
      if (!artificial[t.basis()[r]]) {
        ++r;
        continue;
      }
      std::optional<std::size_t> replacement;
      for (std::size_t c = 0; c < cols; ++c) {
        if (!artificial[c] && !t.at(r, c).is_zero()) {
          replacement = c;
          break;
        }
      }
      if (replacement) {
        t.pivot(r, *replacement, objective);
        ++r;
      } else {
        t.remove_row(r);
      }
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (artificial[c]) allowed[c] = false;
    }
  }

  std::vector<Rat> cost(cols);
  for (const Term& term : objective_) cost[term.var] += maximize_ ? term.coeff : -term.coeff;
  std::vector<Rat> objective = reduced_costs(t, cost);
  if (run_simplex(t, objective, allowed) == Status::kUnbounded) {
    return Solution{Status::kUnbounded, Rat(), {}};
  }
  Solution out;
  out.status = Status::kOptimal;
  out.values.assign(n, Rat());
  for (std::size_t r = 0; r < t.rows(); ++r) {
    if (t.basis()[r] < n) out.values[t.basis()[r]] = t.rhs(r);
  }
  for (const Term& term : objective_) out.objective += term.coeff * out.values[term.var];
  return out;
}

}  // namespace urykit::lp
