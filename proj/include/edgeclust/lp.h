#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "edgeclust/matrix.h"

namespace edgeclust {

struct LpEntry {
  Index column = 0;
  double value = 0.0;
};

struct LpStats {
  std::uint64_t iterations = 0;
  std::uint64_t bland_iterations = 0;
  Index rows_added = 0;
  Index rows_dropped = 0;
};

// min c^T x  s.t.  lo <= x <= hi,  a_i^T x <= b_i  for every added row.
//
// Bounded-variable dual simplex with an explicit dense basis inverse. The
// box-only problem is solved by inspection; rows are then added lazily and
// the basis stays dual feasible, so each optimize() call only restores primal
// feasibility. Each row gets a slack s_i >= 0 with a_i^T x + s_i = b_i.
class DualSimplex {
 public:
  struct Options {
    double primal_tolerance = 1e-7;
    double dual_tolerance = 1e-7;   // relative to the largest |c_j|
    double pivot_tolerance = 1e-9;
    // Iterations without objective progress before switching to Bland's rule.
    int stall_limit = 200;
    int refresh_interval = 100;
  };

  // Every bound must be finite.
  DualSimplex(std::vector<double> cost, std::vector<double> lower,
              std::vector<double> upper);
  DualSimplex(std::vector<double> cost, std::vector<double> lower,
              std::vector<double> upper, Options options);

  void add_row(std::span<const LpEntry> coefficients, double rhs);

  // Runs until the current rows are satisfied. Throws SolverError when the
  // per-call cap of 10 * (columns + rows) iterations is exceeded or when the
  // rows are infeasible.
  void optimize();

  // Removes rows whose slack is basic. Their duals are zero, so the current
  // basis stays optimal for the smaller problem.
  Index drop_inactive_rows();

  Index columns() const { return n_; }
  Index rows() const { return rows_.size(); }
  double objective() const;
  std::span<const double> values() const { return {x_.data(), n_}; }
  const LpStats& stats() const { return stats_; }

 private:
  struct Row {
    std::vector<LpEntry> entries;
    double rhs = 0.0;
  };

  bool is_slack(Index var) const { return var >= n_; }
  Index slack_of(Index row) const { return n_ + row; }
  double& binv(Index p, Index i) { return binv_[p * stride_ + i]; }
  double binv(Index p, Index i) const { return binv_[p * stride_ + i]; }
  void reserve_basis(Index m);
  void refresh_primal();
  void refresh_dual();
  void column_of_binv_times(Index var, std::vector<double>& w) const;

  Index n_;
  Options opt_;
  double cost_scale_ = 1.0;
  std::vector<double> cost_;  // structural only; slack cost is zero
  std::vector<double> lower_, upper_;  // all variables
  std::vector<double> x_;              // all variables
  std::vector<double> d_;              // reduced costs, all variables
  std::vector<std::int64_t> position_;  // basis position or -1
  std::vector<bool> at_upper_;
  std::vector<Row> rows_;
  std::vector<std::vector<LpEntry>> column_rows_;  // structural -> (row, a)
  std::vector<Index> basis_;
  std::vector<double> binv_;
  Index stride_ = 0;
  LpStats stats_;
};

}  // namespace edgeclust
