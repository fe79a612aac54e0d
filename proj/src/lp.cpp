#include "chp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace chp::lp {

int LinearProgram::add_var(std::string label, double lo, double hi, double cost) {
  objective.push_back(cost);
  lower.push_back(lo);
  upper.push_back(hi);
  var_labels.push_back(std::move(label));
  return num_vars() - 1;
}

int LinearProgram::add_row(std::string label, std::vector<Term> terms, Sense sense, double rhs) {
  rows.push_back({std::move(terms), sense, rhs});
  row_labels.push_back(std::move(label));
  return num_rows() - 1;
}

std::vector<std::string> LinearProgram::check() const {
  std::vector<std::string> out;
  const int n = num_vars();
  if (static_cast<int>(lower.size()) != n || static_cast<int>(upper.size()) != n) {
    out.push_back("bound vectors do not match the objective length");
    return out;
  }
  for (int j = 0; j < n; ++j) {
    if (lower[j] > upper[j]) out.push_back("column " + std::to_string(j) + " has lo > hi");
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || !std::isfinite(objective[j])) {
      out.push_back("column " + std::to_string(j) + " has non-numeric data");
    }
  }
  for (int i = 0; i < num_rows(); ++i) {
    for (const auto& t : rows[i].terms) {
      if (t.var < 0 || t.var >= n) out.push_back("row " + std::to_string(i) + " references a bad column");
      if (!std::isfinite(t.coef)) out.push_back("row " + std::to_string(i) + " has a non-finite coefficient");
    }
    if (!std::isfinite(rows[i].rhs)) out.push_back("row " + std::to_string(i) + " has a non-finite rhs");
  }
  return out;
}

std::string to_string(Status status) {
  switch (status) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

// Bounded primal simplex on the row-slack form A x + s = b. Each row i owns a
// slack column n+i (coefficient +1, bounds from the sense) and an artificial
// column n+m+i (coefficient +-1, only basic during phase one). The basis
// inverse is kept dense and column-major; updates touch only the nonzeros of
// the pivot column and pivot row.
class Simplex {
 public:
  Simplex(const LinearProgram& lp, const SolverOptions& options);
  LpSolution run();

 private:
  enum class Outcome { kOptimal, kUnbounded };

  int slack(int i) const { return n_ + i; }
  int artificial(int i) const { return n_ + m_ + i; }
  bool is_artificial(int j) const { return j >= n_ + m_; }

  double col_dot(int j, const std::vector<double>& v) const;
  void ftran(int j, std::vector<double>& alpha) const;
  void pivot(int r, const std::vector<double>& alpha);
  void refactor();
  void recompute_basics();
  void recompute_duals();
  double reduced_cost(int j) const { return cost_[j] - col_dot(j, y_); }
  bool eligible(int j, double d) const;
  Outcome iterate();
  void drive_out_artificials();

  const LinearProgram& lp_;
  SolverOptions opt_;
  int n_ = 0;
  int m_ = 0;
  int ncols_ = 0;
  std::vector<int> col_start_;
  std::vector<int> col_row_;
  std::vector<double> col_val_;
  std::vector<double> art_sign_;
  std::vector<double> lo_, hi_, cost_, x_;
  std::vector<double> rhs_;
  std::vector<int> head_;  // basic column at each row position
  std::vector<int> pos_;   // row position of a basic column, -1 otherwise
  std::vector<double> binv_;  // (B^-1)_{ik} at binv_[k * m_ + i]
  std::vector<double> y_;
  int iterations_ = 0;
  int cap_ = 0;
  int since_refactor_ = 0;
  int degenerate_run_ = 0;
  bool bland_ = false;
};

Simplex::Simplex(const LinearProgram& lp, const SolverOptions& options)
    : lp_(lp), opt_(options), n_(lp.num_vars()), m_(lp.num_rows()), ncols_(n_ + 2 * m_) {
  // Structural columns in compressed sparse column form; explicit zeros dropped.
  std::vector<int> counts(n_, 0);
  for (const auto& row : lp.rows) {
    for (const auto& t : row.terms) {
      if (t.coef != 0.0) ++counts[t.var];
    }
  }
  col_start_.assign(n_ + 1, 0);
  for (int j = 0; j < n_; ++j) col_start_[j + 1] = col_start_[j] + counts[j];
  col_row_.resize(col_start_[n_]);
  col_val_.resize(col_start_[n_]);
  std::vector<int> fill(col_start_.begin(), col_start_.end() - 1);
  for (int i = 0; i < m_; ++i) {
    for (const auto& t : lp.rows[i].terms) {
      if (t.coef == 0.0) continue;
      col_row_[fill[t.var]] = i;
      col_val_[fill[t.var]++] = t.coef;
    }
  }

  lo_.assign(ncols_, 0.0);
  hi_.assign(ncols_, 0.0);
  cost_.assign(ncols_, 0.0);
  x_.assign(ncols_, 0.0);
  art_sign_.assign(m_, 1.0);
  rhs_.resize(m_);
  for (int j = 0; j < n_; ++j) {
    lo_[j] = lp.lower[j];
    hi_[j] = lp.upper[j];
  }
  for (int i = 0; i < m_; ++i) {
    rhs_[i] = lp.rows[i].rhs;
    switch (lp.rows[i].sense) {
      case Sense::kLessEqual: lo_[slack(i)] = 0.0; hi_[slack(i)] = kInf; break;
      case Sense::kGreaterEqual: lo_[slack(i)] = -kInf; hi_[slack(i)] = 0.0; break;
      case Sense::kEqual: lo_[slack(i)] = 0.0; hi_[slack(i)] = 0.0; break;
    }
  }
  cap_ = opt_.iteration_cap.value_or(50 * (n_ + m_) + 100);
}

double Simplex::col_dot(int j, const std::vector<double>& v) const {
  if (j < n_) {
    double s = 0.0;
    for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) s += col_val_[p] * v[col_row_[p]];
    return s;
  }
  if (j < n_ + m_) return v[j - n_];
  return art_sign_[j - n_ - m_] * v[j - n_ - m_];
}

void Simplex::ftran(int j, std::vector<double>& alpha) const {
  std::fill(alpha.begin(), alpha.end(), 0.0);
  auto add_column = [&](int k, double coef) {
    const double* col = &binv_[static_cast<std::size_t>(k) * m_];
    for (int i = 0; i < m_; ++i) alpha[i] += coef * col[i];
  };
  if (j < n_) {
    for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) add_column(col_row_[p], col_val_[p]);
  } else if (j < n_ + m_) {
    add_column(j - n_, 1.0);
  } else {
    add_column(j - n_ - m_, art_sign_[j - n_ - m_]);
  }
}

void Simplex::pivot(int r, const std::vector<double>& alpha) {
  const double ar = alpha[r];
  std::vector<int> nz;
  for (int i = 0; i < m_; ++i) {
    if (i != r && alpha[i] != 0.0) nz.push_back(i);
  }
  for (int k = 0; k < m_; ++k) {
    double* col = &binv_[static_cast<std::size_t>(k) * m_];
    const double rho = col[r];
    if (rho == 0.0) continue;
    const double f = rho / ar;
    for (int i : nz) col[i] -= alpha[i] * f;
    col[r] = f;
  }
}

void Simplex::refactor() {
  // Rebuild B^-1 by pivoting the basic columns into an identity start.
  std::vector<int> basis(head_);
  binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
  for (int i = 0; i < m_; ++i) binv_[static_cast<std::size_t>(i) * m_ + i] = 1.0;
  std::vector<int> new_head(m_, -1);
  std::vector<int> structural;
  for (int j : basis) {
    if (j >= n_) {
      const int i = is_artificial(j) ? j - n_ - m_ : j - n_;
      new_head[i] = j;
      if (is_artificial(j) && art_sign_[i] < 0.0) binv_[static_cast<std::size_t>(i) * m_ + i] = -1.0;
    } else {
      structural.push_back(j);
    }
  }
  std::vector<double> alpha(m_);
  for (int j : structural) {
    ftran(j, alpha);
    int r = -1;
    double best = 0.0;
    for (int i = 0; i < m_; ++i) {
      if (new_head[i] != -1) continue;
      if (std::abs(alpha[i]) > best) {
        best = std::abs(alpha[i]);
        r = i;
      }
    }
    if (r < 0 || best < opt_.pivot_tol) {
      // Dependent column: leave it out and park it at a bound.
      pos_[j] = -1;
      x_[j] = std::isfinite(lo_[j]) ? lo_[j] : (std::isfinite(hi_[j]) ? hi_[j] : 0.0);
      continue;
    }
    pivot(r, alpha);
    new_head[r] = j;
  }
  for (int i = 0; i < m_; ++i) {
    if (new_head[i] == -1) new_head[i] = slack(i);
  }
  head_ = new_head;
  std::fill(pos_.begin(), pos_.end(), -1);
  for (int i = 0; i < m_; ++i) pos_[head_[i]] = i;
  recompute_basics();
  recompute_duals();
  since_refactor_ = 0;
}

void Simplex::recompute_basics() {
  std::vector<double> resid(rhs_);
  for (int j = 0; j < ncols_; ++j) {
    if (pos_[j] >= 0 || x_[j] == 0.0) continue;
    if (j < n_) {
      for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) resid[col_row_[p]] -= col_val_[p] * x_[j];
    } else if (j < n_ + m_) {
      resid[j - n_] -= x_[j];
    } else {
      resid[j - n_ - m_] -= art_sign_[j - n_ - m_] * x_[j];
    }
  }
  std::vector<double> xb(m_, 0.0);
  for (int k = 0; k < m_; ++k) {
    if (resid[k] == 0.0) continue;
    const double* col = &binv_[static_cast<std::size_t>(k) * m_];
    for (int i = 0; i < m_; ++i) xb[i] += col[i] * resid[k];
  }
  for (int i = 0; i < m_; ++i) x_[head_[i]] = xb[i];
}

void Simplex::recompute_duals() {
  y_.assign(m_, 0.0);
  for (int k = 0; k < m_; ++k) {
    const double* col = &binv_[static_cast<std::size_t>(k) * m_];
    double s = 0.0;
    for (int i = 0; i < m_; ++i) s += cost_[head_[i]] * col[i];
    y_[k] = s;
  }
}

bool Simplex::eligible(int j, double d) const {
  if (lo_[j] == hi_[j]) return false;
  const double tol = opt_.opt_tol;
  const bool at_lo = std::isfinite(lo_[j]) && x_[j] <= lo_[j];
  const bool at_hi = std::isfinite(hi_[j]) && x_[j] >= hi_[j];
  if (at_lo) return d < -tol;
  if (at_hi) return d > tol;
  return std::abs(d) > tol;  // free or strictly between bounds
}

Simplex::Outcome Simplex::iterate() {
  std::vector<double> alpha(m_);
  bool verified = false;
  for (;;) {
    if (iterations_ >= cap_) {
      throw NumericalFailure("simplex iteration cap reached (" + std::to_string(cap_) + ")");
    }
    if (since_refactor_ >= opt_.refactor_every) refactor();

    int q = -1;
    double dq = 0.0;
    double best = 0.0;
    for (int j = 0; j < ncols_; ++j) {
      if (pos_[j] >= 0) continue;
      if (lo_[j] == hi_[j]) continue;
      const double d = reduced_cost(j);
      if (!eligible(j, d)) continue;
      if (bland_) {
        q = j;
        dq = d;
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        q = j;
        dq = d;
      }
    }
    if (q < 0) {
      if (verified) return Outcome::kOptimal;
      // Confirm optimality on a fresh factorization.
      refactor();
      verified = true;
      continue;
    }
    verified = false;

    ftran(q, alpha);
    const double dir = dq < 0.0 ? 1.0 : -1.0;
    // Basic i moves by -theta * delta_i.
    double theta = kInf;
    int r = -1;
    double r_mag = 0.0;
    double theta_min = kInf;
    for (int i = 0; i < m_; ++i) {
      const double delta = dir * alpha[i];
      if (std::abs(delta) <= opt_.pivot_tol) continue;
      const int b = head_[i];
      double t;
      if (delta > 0.0) {
        if (!std::isfinite(lo_[b])) continue;
        t = (x_[b] - lo_[b]) / delta;
      } else {
        if (!std::isfinite(hi_[b])) continue;
        t = (hi_[b] - x_[b]) / -delta;
      }
      theta_min = std::min(theta_min, std::max(t, 0.0));
    }
    if (std::isfinite(theta_min)) {
      // Snapping a tied row to its bound moves it by up to slack_tol * alpha.
      const double slack_tol = 1e-11 * (1.0 + theta_min);
      for (int i = 0; i < m_; ++i) {
        const double delta = dir * alpha[i];
        if (std::abs(delta) <= opt_.pivot_tol) continue;
        const int b = head_[i];
        double t;
        if (delta > 0.0) {
          if (!std::isfinite(lo_[b])) continue;
          t = (x_[b] - lo_[b]) / delta;
        } else {
          if (!std::isfinite(hi_[b])) continue;
          t = (hi_[b] - x_[b]) / -delta;
        }
        t = std::max(t, 0.0);
        if (t > theta_min + slack_tol) continue;
        const bool better = bland_ ? (r < 0 || head_[i] < head_[r]) : std::abs(delta) > r_mag;
        if (better) {
          r = i;
          r_mag = std::abs(delta);
        }
      }
      theta = theta_min;
    }
    const double span = hi_[q] - lo_[q];
    const bool flip = std::isfinite(span) && span <= theta;
    if (flip) theta = span;
    if (!std::isfinite(theta)) return Outcome::kUnbounded;

    ++iterations_;
    ++since_refactor_;
    if (theta <= 1e-12) {
      if (++degenerate_run_ >= opt_.degenerate_before_bland) bland_ = true;
    } else {
      degenerate_run_ = 0;
      bland_ = false;
    }

    for (int i = 0; i < m_; ++i) {
      if (alpha[i] != 0.0) x_[head_[i]] -= theta * dir * alpha[i];
    }
    if (flip) {
      x_[q] = dir > 0 ? hi_[q] : lo_[q];
      continue;
    }
    x_[q] += dir * theta;
    const int leaving = head_[r];
    x_[leaving] = dir * alpha[r] > 0.0 ? lo_[leaving] : hi_[leaving];
    if (is_artificial(leaving)) hi_[leaving] = 0.0;
    pivot(r, alpha);
    head_[r] = q;
    pos_[q] = r;
    pos_[leaving] = -1;
    // y += d_q * (new row r of B^-1).
    for (int k = 0; k < m_; ++k) {
      const double v = binv_[static_cast<std::size_t>(k) * m_ + r];
      if (v != 0.0) y_[k] += dq * v;
    }
  }
}

void Simplex::drive_out_artificials() {
  std::vector<double> rho(m_);
  std::vector<double> alpha(m_);
  for (int r = 0; r < m_; ++r) {
    if (!is_artificial(head_[r])) continue;
    for (int k = 0; k < m_; ++k) rho[k] = binv_[static_cast<std::size_t>(k) * m_ + r];
    int best_j = -1;
    double best = opt_.pivot_tol * 1e3;
    for (int j = 0; j < n_ + m_; ++j) {
      if (pos_[j] >= 0) continue;
      const double a = std::abs(col_dot(j, rho));
      if (a > best) {
        best = a;
        best_j = j;
      }
    }
    if (best_j < 0) continue;  // redundant row; artificial stays basic at zero
    ftran(best_j, alpha);
    const int leaving = head_[r];
    x_[leaving] = 0.0;
    pivot(r, alpha);
    head_[r] = best_j;
    pos_[best_j] = r;
    pos_[leaving] = -1;
  }
}

LpSolution Simplex::run() {
  LpSolution sol;
  // Nonbasic structurals start at a finite bound (or 0 when free).
  for (int j = 0; j < n_; ++j) {
    x_[j] = std::isfinite(lo_[j]) ? lo_[j] : (std::isfinite(hi_[j]) ? hi_[j] : 0.0);
  }
  std::vector<double> resid(rhs_);
  for (int j = 0; j < n_; ++j) {
    if (x_[j] == 0.0) continue;
    for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) resid[col_row_[p]] -= col_val_[p] * x_[j];
  }
  head_.assign(m_, -1);
  pos_.assign(ncols_, -1);
  binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
  bool need_phase1 = false;
  for (int i = 0; i < m_; ++i) {
    const int s = slack(i);
    const int a = artificial(i);
    if (resid[i] >= lo_[s] - opt_.feas_tol && resid[i] <= hi_[s] + opt_.feas_tol) {
      head_[i] = s;
      x_[s] = resid[i];
      binv_[static_cast<std::size_t>(i) * m_ + i] = 1.0;
    } else {
      const double at = resid[i] < lo_[s] ? lo_[s] : hi_[s];
      x_[s] = at;
      art_sign_[i] = resid[i] - at >= 0.0 ? 1.0 : -1.0;
      head_[i] = a;
      x_[a] = std::abs(resid[i] - at);
      hi_[a] = kInf;
      binv_[static_cast<std::size_t>(i) * m_ + i] = art_sign_[i];
      need_phase1 = true;
    }
    pos_[head_[i]] = i;
  }

  double bscale = 1.0;
  for (double b : rhs_) bscale = std::max(bscale, std::abs(b));

  if (need_phase1) {
    for (int i = 0; i < m_; ++i) cost_[artificial(i)] = 1.0;
    recompute_duals();
    iterate();
    double infeas = 0.0;
    for (int i = 0; i < m_; ++i) infeas += x_[artificial(i)];
    if (infeas > opt_.feas_tol * bscale) {
      sol.status = Status::kInfeasible;
      sol.iterations = iterations_;
      return sol;
    }
    for (int i = 0; i < m_; ++i) {
      cost_[artificial(i)] = 0.0;
      hi_[artificial(i)] = 0.0;
      if (pos_[artificial(i)] < 0) x_[artificial(i)] = 0.0;
    }
    drive_out_artificials();
    degenerate_run_ = 0;
    bland_ = false;
  }
  for (int j = 0; j < n_; ++j) cost_[j] = lp_.objective[j];
  refactor();
  const Outcome outcome = iterate();
  sol.iterations = iterations_;
  sol.primal.assign(x_.begin(), x_.begin() + n_);
  sol.objective = 0.0;
  for (int j = 0; j < n_; ++j) sol.objective += lp_.objective[j] * sol.primal[j];
  if (outcome == Outcome::kUnbounded) {
    sol.status = Status::kUnbounded;
    return sol;
  }
  sol.status = Status::kOptimal;
  sol.duals = y_;
  sol.reduced_costs.resize(n_);
  for (int j = 0; j < n_; ++j) sol.reduced_costs[j] = reduced_cost(j);
  return sol;
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SolverOptions& options) {
  const auto problems = lp.check();
  if (!problems.empty()) throw std::invalid_argument("malformed LP: " + problems.front());
  // Columns with lo = hi = infinity cannot be placed anywhere.
  for (int j = 0; j < lp.num_vars(); ++j) {
    if (lp.lower[j] == kInf || lp.upper[j] == -kInf) {
      LpSolution sol;
      sol.status = Status::kInfeasible;
      return sol;
    }
  }
  Simplex simplex(lp, options);
  return simplex.run();
}

DualityReport verify_duality(const LinearProgram& lp, const LpSolution& sol, double tol) {
  DualityReport rep;
  const int n = lp.num_vars();
  const int m = lp.num_rows();
  if (sol.status != Status::kOptimal || static_cast<int>(sol.primal.size()) != n ||
      static_cast<int>(sol.duals.size()) != m) {
    rep.primal_residual = rep.dual_residual = rep.complementarity = rep.objective_gap = kInf;
    return rep;
  }
  const auto& x = sol.primal;
  const auto& y = sol.duals;
  // Reduced costs recomputed from y rather than trusted.
  std::vector<double> d(lp.objective);
  std::vector<double> activity(m, 0.0);
  for (int i = 0; i < m; ++i) {
    for (const auto& t : lp.rows[i].terms) {
      activity[i] += t.coef * x[t.var];
      d[t.var] -= t.coef * y[i];
    }
  }
  double cx = 0.0;
  for (int j = 0; j < n; ++j) cx += lp.objective[j] * x[j];
  double dual_obj = 0.0;
  for (int i = 0; i < m; ++i) {
    const auto& row = lp.rows[i];
    const double scale = 1.0 + std::abs(row.rhs);
    const double slack = row.rhs - activity[i];
    double viol = 0.0;
    switch (row.sense) {
      case Sense::kLessEqual:
        viol = std::max(0.0, -slack);
        rep.dual_residual = std::max(rep.dual_residual, std::max(0.0, y[i]));
        break;
      case Sense::kGreaterEqual:
        viol = std::max(0.0, slack);
        rep.dual_residual = std::max(rep.dual_residual, std::max(0.0, -y[i]));
        break;
      case Sense::kEqual:
        viol = std::abs(slack);
        break;
    }
    rep.primal_residual = std::max(rep.primal_residual, viol / scale);
    rep.complementarity = std::max(rep.complementarity, std::abs(y[i] * slack));
    dual_obj += row.rhs * y[i];
  }
  for (int j = 0; j < n; ++j) {
    const double lo = lp.lower[j];
    const double hi = lp.upper[j];
    const double scale = 1.0 + std::max(std::isfinite(lo) ? std::abs(lo) : 0.0,
                                        std::isfinite(hi) ? std::abs(hi) : 0.0);
    const double viol = std::max({0.0, lo - x[j], x[j] - hi});
    rep.primal_residual = std::max(rep.primal_residual, viol / scale);
    // d_j > 0 needs x_j at a finite lower bound, d_j < 0 at a finite upper.
    if (d[j] > 0.0) {
      if (!std::isfinite(lo)) {
        rep.dual_residual = std::max(rep.dual_residual, d[j]);
      } else {
        rep.complementarity = std::max(rep.complementarity, std::abs(d[j] * (x[j] - lo)));
        dual_obj += d[j] * lo;
      }
    } else if (d[j] < 0.0) {
      if (!std::isfinite(hi)) {
        rep.dual_residual = std::max(rep.dual_residual, -d[j]);
      } else {
        rep.complementarity = std::max(rep.complementarity, std::abs(d[j] * (x[j] - hi)));
        dual_obj += d[j] * hi;
      }
    }
  }
  rep.objective_gap = std::abs(cx - dual_obj) / (1.0 + std::abs(cx));
  rep.pass = rep.primal_residual <= tol && rep.dual_residual <= tol && rep.complementarity <= tol &&
             rep.objective_gap <= tol;
  return rep;
}

}  // namespace chp::lp
