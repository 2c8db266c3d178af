#include "edgeclust/lp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "edgeclust/core.h"

namespace edgeclust {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

DualSimplex::DualSimplex(std::vector<double> cost, std::vector<double> lower,
                         std::vector<double> upper)
    : DualSimplex(std::move(cost), std::move(lower), std::move(upper),
                  Options{}) {}

DualSimplex::DualSimplex(std::vector<double> cost, std::vector<double> lower,
                         std::vector<double> upper, Options options)
    : n_(cost.size()),
      opt_(options),
      cost_(std::move(cost)),
      lower_(std::move(lower)),
      upper_(std::move(upper)) {
  if (lower_.size() != n_ || upper_.size() != n_) {
    throw std::invalid_argument("DualSimplex: bound vectors must match costs");
  }
  double scale = 0.0;
  for (Index j = 0; j < n_; ++j) {
    if (!std::isfinite(lower_[j]) || !std::isfinite(upper_[j]) ||
        lower_[j] > upper_[j] || !std::isfinite(cost_[j])) {
      throw std::invalid_argument("DualSimplex: need finite bounds lo <= hi");
    }
    scale = std::max(scale, std::abs(cost_[j]));
  }
  cost_scale_ = scale > 0 ? scale : 1.0;
  x_.resize(n_);
  d_ = cost_;
  position_.assign(n_, -1);
  at_upper_.assign(n_, false);
  column_rows_.resize(n_);
  // Box-only optimum: every column at the bound its cost prefers.
  for (Index j = 0; j < n_; ++j) {
    at_upper_[j] = cost_[j] < 0;
    x_[j] = at_upper_[j] ? upper_[j] : lower_[j];
  }
}

double DualSimplex::objective() const {
  double obj = 0.0;
  for (Index j = 0; j < n_; ++j) obj += cost_[j] * x_[j];
  return obj;
}

void DualSimplex::reserve_basis(Index m) {
  if (m <= stride_) return;
  const Index cap = std::max<Index>(m, stride_ * 2 + 16);
  std::vector<double> grown(cap * cap, 0.0);
  const Index old = basis_.size();
  for (Index p = 0; p < old; ++p) {
    std::copy_n(binv_.data() + p * stride_, old, grown.data() + p * cap);
  }
  binv_ = std::move(grown);
  stride_ = cap;
}

void DualSimplex::add_row(std::span<const LpEntry> coefficients, double rhs) {
  const Index i = rows_.size();
  const Index m = basis_.size();
  Row row;
  row.rhs = rhs;
  double activity = 0.0;
  for (const LpEntry& e : coefficients) {
    if (e.column >= n_) throw std::invalid_argument("add_row: bad column");
    if (e.value == 0.0) continue;
    row.entries.push_back(e);
    activity += e.value * x_[e.column];
  }
  reserve_basis(m + 1);
  // B' = [[B, 0], [a_B^T, 1]]  =>  new inverse row is -a_B^T B^{-1}.
  for (Index c = 0; c <= m; ++c) binv(m, c) = 0.0;
  for (Index p = 0; p < m; ++p) binv(p, i) = 0.0;
  for (const LpEntry& e : row.entries) {
    const std::int64_t q = position_[e.column];
    if (q < 0) continue;
    const double* src = binv_.data() + static_cast<Index>(q) * stride_;
    double* dst = binv_.data() + m * stride_;
    for (Index c = 0; c < m; ++c) dst[c] -= e.value * src[c];
  }
  binv(m, i) = 1.0;

  for (const LpEntry& e : row.entries) column_rows_[e.column].push_back({i, e.value});
  rows_.push_back(std::move(row));

  const Index slack = slack_of(i);
  lower_.push_back(0.0);
  upper_.push_back(kInf);
  x_.push_back(rhs - activity);
  d_.push_back(0.0);
  position_.push_back(static_cast<std::int64_t>(m));
  at_upper_.push_back(false);
  basis_.push_back(slack);
  ++stats_.rows_added;
}

void DualSimplex::column_of_binv_times(Index var, std::vector<double>& w) const {
  const Index m = basis_.size();
  w.assign(m, 0.0);
  if (is_slack(var)) {
    const Index i = var - n_;
    for (Index p = 0; p < m; ++p) w[p] = binv(p, i);
    return;
  }
  for (const LpEntry& e : column_rows_[var]) {
    const Index i = e.column;
    for (Index p = 0; p < m; ++p) w[p] += e.value * binv(p, i);
  }
}

void DualSimplex::refresh_primal() {
  const Index m = rows_.size();
  std::vector<double> residual(m);
  for (Index i = 0; i < m; ++i) {
    double r = rows_[i].rhs;
    for (const LpEntry& e : rows_[i].entries) {
      if (position_[e.column] < 0) r -= e.value * x_[e.column];
    }
    residual[i] = r;
  }
  for (Index p = 0; p < m; ++p) {
    const double* row = binv_.data() + p * stride_;
    double v = 0.0;
    for (Index i = 0; i < m; ++i) v += row[i] * residual[i];
    x_[basis_[p]] = v;
  }
}

void DualSimplex::refresh_dual() {
  const Index m = rows_.size();
  std::vector<double> pi(m, 0.0);
  for (Index p = 0; p < m; ++p) {
    const Index var = basis_[p];
    const double cb = is_slack(var) ? 0.0 : cost_[var];
    if (cb == 0.0) continue;
    const double* row = binv_.data() + p * stride_;
    for (Index i = 0; i < m; ++i) pi[i] += cb * row[i];
  }
  const double tol = opt_.dual_tolerance * cost_scale_;
  bool flipped = false;
  for (Index j = 0; j < n_ + m; ++j) {
    if (position_[j] >= 0) {
      d_[j] = 0.0;
      continue;
    }
    double dj;
    if (is_slack(j)) {
      dj = -pi[j - n_];
    } else {
      dj = cost_[j];
      for (const LpEntry& e : column_rows_[j]) dj -= pi[e.column] * e.value;
    }
    // Boxed columns with a wrong-signed reduced cost move to the other bound.
    if (!is_slack(j)) {
      if (!at_upper_[j] && dj < -tol) {
        at_upper_[j] = true;
        x_[j] = upper_[j];
        flipped = true;
      } else if (at_upper_[j] && dj > tol) {
        at_upper_[j] = false;
        x_[j] = lower_[j];
        flipped = true;
      }
    }
    d_[j] = dj;
  }
  if (flipped) refresh_primal();
}

void DualSimplex::optimize() {
  const double ptol = opt_.primal_tolerance;
  const double dtol = opt_.dual_tolerance * cost_scale_;
  const std::uint64_t cap = 10 * static_cast<std::uint64_t>(n_ + rows_.size());
  std::uint64_t local_iterations = 0;
  std::vector<double> alpha(n_, 0.0);
  std::vector<Index> touched;
  std::vector<double> w;
  std::vector<Index> candidates;
  double best_objective = -kInf;
  int stall = 0;
  bool bland = false;

  refresh_dual();
  for (;;) {
    const Index m = basis_.size();
    // Leaving variable: largest bound violation, or lowest index under Bland.
    Index r = m;
    double worst = ptol;
    Index bland_var = std::numeric_limits<Index>::max();
    for (Index p = 0; p < m; ++p) {
      const Index var = basis_[p];
      const double v = x_[var];
      const double infeas = std::max(lower_[var] - v, v - upper_[var]);
      if (infeas <= ptol) continue;
      if (bland) {
        if (var < bland_var) {
          bland_var = var;
          r = p;
        }
      } else if (infeas > worst) {
        worst = infeas;
        r = p;
      }
    }
    if (r == m) break;
    if (++local_iterations > cap) {
      throw SolverError("dual simplex exceeded its iteration budget (" +
                        std::to_string(cap) + ")");
    }
    ++stats_.iterations;
    if (bland) ++stats_.bland_iterations;

    const Index leaving = basis_[r];
    const bool to_lower = x_[leaving] < lower_[leaving];
    const double target = to_lower ? lower_[leaving] : upper_[leaving];

    // Pivot row alpha_j = (e_r^T B^{-1}) A_j over nonbasic columns.
    const double* rho = binv_.data() + r * stride_;
    for (Index i = 0; i < m; ++i) {
      const double ri = rho[i];
      if (ri == 0.0) continue;
      for (const LpEntry& e : rows_[i].entries) {
        if (alpha[e.column] == 0.0) touched.push_back(e.column);
        alpha[e.column] += ri * e.value;
        if (alpha[e.column] == 0.0) alpha[e.column] = 1e-300;
      }
    }
    const auto alpha_of = [&](Index var) {
      return is_slack(var) ? rho[var - n_] : alpha[var];
    };
    const auto eligible = [&](Index var, double a) {
      if (std::abs(a) <= opt_.pivot_tolerance) return false;
      const bool up = !is_slack(var) && at_upper_[var];
      // Moving var must push x_leaving toward its violated bound.
      return to_lower ? (up ? a > 0 : a < 0) : (up ? a < 0 : a > 0);
    };

    candidates.clear();
    for (Index var : touched) {
      if (position_[var] < 0 && eligible(var, alpha[var])) {
        candidates.push_back(var);
      }
    }
    for (Index i = 0; i < m; ++i) {
      const Index var = slack_of(i);
      if (position_[var] < 0 && eligible(var, rho[i])) candidates.push_back(var);
    }
    if (candidates.empty()) {
      for (Index var : touched) alpha[var] = 0.0;
      touched.clear();
      throw SolverError("LP rows are infeasible (dual unbounded)");
    }

    // Harris two-pass ratio test; Bland mode takes the lowest index among
    // the minimum ratios.
    Index q = candidates.front();
    if (bland) {
      double best = kInf;
      for (Index var : candidates) {
        best = std::min(best, std::abs(d_[var]) / std::abs(alpha_of(var)));
      }
      q = std::numeric_limits<Index>::max();
      for (Index var : candidates) {
        const double ratio = std::abs(d_[var]) / std::abs(alpha_of(var));
        if (ratio <= best * (1.0 + 1e-12) && var < q) q = var;
      }
    } else {
      double bound = kInf;
      for (Index var : candidates) {
        bound = std::min(bound, (std::abs(d_[var]) + dtol) / std::abs(alpha_of(var)));
      }
      double best_alpha = -1.0;
      for (Index var : candidates) {
        const double a = std::abs(alpha_of(var));
        if (std::abs(d_[var]) / a <= bound &&
            (a > best_alpha || (a == best_alpha && var < q))) {
          best_alpha = a;
          q = var;
        }
      }
    }
    const double alpha_q = alpha_of(q);
    const double theta_d = d_[q] / alpha_q;

    column_of_binv_times(q, w);
    const double pivot = w[r];
    if (std::abs(pivot) <= opt_.pivot_tolerance) {
      for (Index var : touched) alpha[var] = 0.0;
      touched.clear();
      throw SolverError("dual simplex hit a numerically zero pivot");
    }

    // Primal step.
    const double theta_p = (x_[leaving] - target) / pivot;
    for (Index p = 0; p < m; ++p) {
      if (w[p] != 0.0) x_[basis_[p]] -= theta_p * w[p];
    }
    x_[q] += theta_p;
    x_[leaving] = target;

    // Dual step.
    for (Index var : touched) {
      if (position_[var] < 0 && var != q) {
        d_[var] -= theta_d * alpha[var];
        if (!at_upper_[var] && d_[var] < 0) d_[var] = 0.0;
        if (at_upper_[var] && d_[var] > 0) d_[var] = 0.0;
      }
      alpha[var] = 0.0;
    }
    touched.clear();
    for (Index i = 0; i < m; ++i) {
      const Index var = slack_of(i);
      if (position_[var] < 0 && var != q && rho[i] != 0.0) {
        d_[var] -= theta_d * rho[i];
        if (d_[var] < 0) d_[var] = 0.0;
      }
    }
    d_[q] = 0.0;
    d_[leaving] = -theta_d;

    // Basis inverse: pivot on w[r].
    {
      double* pr = binv_.data() + r * stride_;
      const double inv = 1.0 / pivot;
      for (Index i = 0; i < m; ++i) pr[i] *= inv;
      for (Index p = 0; p < m; ++p) {
        if (p == r || w[p] == 0.0) continue;
        double* row = binv_.data() + p * stride_;
        const double f = w[p];
        for (Index i = 0; i < m; ++i) row[i] -= f * pr[i];
      }
    }
    basis_[r] = q;
    position_[q] = static_cast<std::int64_t>(r);
    position_[leaving] = -1;
    at_upper_[leaving] = !to_lower;

    if (opt_.refresh_interval > 0 &&
        stats_.iterations % static_cast<std::uint64_t>(opt_.refresh_interval) == 0) {
      refresh_primal();
      refresh_dual();
    }

    const double obj = objective();
    if (obj > best_objective + 1e-12 * (1.0 + std::abs(obj))) {
      best_objective = obj;
      stall = 0;
      bland = false;
    } else if (++stall >= opt_.stall_limit) {
      bland = true;
    }
  }
  refresh_primal();
  // Snap basic structurals that sit within tolerance of a bound.
  for (Index j = 0; j < n_; ++j) x_[j] = std::clamp(x_[j], lower_[j], upper_[j]);
}

Index DualSimplex::drop_inactive_rows() {
  const Index m = rows_.size();
  std::vector<bool> keep(m, true);
  Index dropped = 0;
  for (Index i = 0; i < m; ++i) {
    const Index s = slack_of(i);
    if (position_[s] >= 0) {
      keep[i] = false;
      ++dropped;
    }
  }
  if (dropped == 0) return 0;

  std::vector<Index> new_row(m, m);
  Index kept_rows = 0;
  for (Index i = 0; i < m; ++i) {
    if (keep[i]) new_row[i] = kept_rows++;
  }
  // Removing row i together with its basic slack deletes one row and one
  // column of B^{-1}.
  std::vector<Index> kept_positions;
  kept_positions.reserve(kept_rows);
  for (Index p = 0; p < m; ++p) {
    const Index var = basis_[p];
    if (is_slack(var) && !keep[var - n_]) continue;
    kept_positions.push_back(p);
  }
  std::vector<double> compact(stride_ * stride_, 0.0);
  for (Index np = 0; np < kept_positions.size(); ++np) {
    const double* src = binv_.data() + kept_positions[np] * stride_;
    double* dst = compact.data() + np * stride_;
    for (Index i = 0; i < m; ++i) {
      if (keep[i]) dst[new_row[i]] = src[i];
    }
  }
  binv_ = std::move(compact);

  const auto remap = [&](Index var) {
    return is_slack(var) ? slack_of(new_row[var - n_]) : var;
  };
  std::vector<Index> basis;
  basis.reserve(kept_positions.size());
  for (Index p : kept_positions) basis.push_back(remap(basis_[p]));

  std::vector<Row> rows;
  rows.reserve(kept_rows);
  std::vector<double> lower(lower_.begin(), lower_.begin() + n_);
  std::vector<double> upper(upper_.begin(), upper_.begin() + n_);
  std::vector<double> x(x_.begin(), x_.begin() + n_);
  std::vector<double> d(d_.begin(), d_.begin() + n_);
  std::vector<bool> at_upper(at_upper_.begin(), at_upper_.begin() + n_);
  for (Index i = 0; i < m; ++i) {
    if (!keep[i]) continue;
    rows.push_back(std::move(rows_[i]));
    const Index s = slack_of(i);
    lower.push_back(lower_[s]);
    upper.push_back(upper_[s]);
    x.push_back(x_[s]);
    d.push_back(d_[s]);
    at_upper.push_back(at_upper_[s]);
  }
  rows_ = std::move(rows);
  lower_ = std::move(lower);
  upper_ = std::move(upper);
  x_ = std::move(x);
  d_ = std::move(d);
  at_upper_ = std::move(at_upper);
  basis_ = std::move(basis);
  position_.assign(n_ + kept_rows, -1);
  for (Index p = 0; p < basis_.size(); ++p) {
    position_[basis_[p]] = static_cast<std::int64_t>(p);
  }
  for (auto& col : column_rows_) col.clear();
  for (Index i = 0; i < rows_.size(); ++i) {
    for (const LpEntry& e : rows_[i].entries) {
      column_rows_[e.column].push_back({i, e.value});
    }
  }
  stats_.rows_dropped += dropped;
  return dropped;
}

}  // namespace edgeclust
