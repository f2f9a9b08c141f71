#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "potflow/detail/linalg.hpp"
#include "potflow/graph.hpp"

namespace potflow {

enum class Relation { LessEq, Equal, GreaterEq };
enum class LpSense { Minimize, Maximize };
enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LinearProgram {
  struct Variable {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    double obj = 0.0;
    std::string name;
  };
  struct Row {
    std::vector<std::pair<int, double>> terms;  // variable index, coefficient
    Relation rel = Relation::LessEq;
    double rhs = 0.0;
    std::string name;
  };

  LpSense sense = LpSense::Minimize;
  std::vector<Variable> vars;
  std::vector<Row> rows;

  int add_variable(double lo, double hi, double obj, std::string name = "") {
    if (std::isnan(lo) || std::isnan(hi) || !std::isfinite(obj))
      throw Error("lp: bad variable data");
    if (lo > hi) throw Error("lp: variable lower bound exceeds upper bound");
    vars.push_back({lo, hi, obj, std::move(name)});
    return static_cast<int>(vars.size()) - 1;
  }

  void add_constraint(std::vector<std::pair<int, double>> terms, Relation rel, double rhs,
                      std::string name = "") {
    if (!std::isfinite(rhs)) throw Error("lp: constraint rhs not finite");
    // Merge duplicate indices so callers may accumulate terms freely.
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<int, double>> merged;
    for (const auto& [idx, coef] : terms) {
      if (idx < 0 || idx >= static_cast<int>(vars.size()))
        throw Error("lp: constraint references unknown variable " + std::to_string(idx));
      if (!std::isfinite(coef)) throw Error("lp: constraint coefficient not finite");
      if (!merged.empty() && merged.back().first == idx)
        merged.back().second += coef;
      else
        merged.emplace_back(idx, coef);
    }
    rows.push_back({std::move(merged), rel, rhs, std::move(name)});
  }

  int num_variables() const { return static_cast<int>(vars.size()); }
  int num_constraints() const { return static_cast<int>(rows.size()); }
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> primal;        // per variable, filled when Optimal
  double objective = 0.0;            // in the problem's own sense
  std::vector<double> dual;          // per row, filled when Optimal
  std::vector<double> reduced_cost;  // per variable, filled when Optimal
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double duality_gap = 0.0;
  int iterations = 0;
};

namespace detail {

constexpr double kLpPivotTol = 1e-10;
constexpr double kLpEnterTol = 1e-9;
constexpr double kLpFeasTol = 1e-8;
constexpr int kLpBlandAfter = 1000;
constexpr int kLpIterCap = 100000;

// Bounded-variable primal simplex on a dense tableau. Two phases with
// artificials where the slack basis is infeasible; Dantzig pricing with a
// Bland fallback once degenerate pivots accumulate; duals and reduced costs
// recomputed from original data at the end so tableau drift cannot leak into
// reported certificates.
class Simplex {
 public:
  explicit Simplex(const LinearProgram& lp) : lp_(lp) {}

  LpSolution solve() {
    build();
    LpSolution out;
    if (needs_phase1_) {
      run_phase(true, out);
      double infeas = 0.0;
      for (int k = 0; k < num_art_; ++k) {
        const int col = art_begin_ + k;
        if (col_status_[static_cast<std::size_t>(col)] == Status::Basic) {
          for (int i = 0; i < m_; ++i)
            if (basis_[static_cast<std::size_t>(i)] == col)
              infeas += std::max(0.0, xb_[static_cast<std::size_t>(i)]);
        }
      }
      if (infeas > kLpFeasTol) {
        out.status = LpStatus::Infeasible;
        out.objective = lp_.sense == LpSense::Minimize
                            ? std::numeric_limits<double>::infinity()
                            : -std::numeric_limits<double>::infinity();
        return out;
      }
      drive_out_artificials();
    }
    for (int k = 0; k < num_art_; ++k) {
      const int col = art_begin_ + k;
      lo_[static_cast<std::size_t>(col)] = 0.0;
      hi_[static_cast<std::size_t>(col)] = 0.0;
      if (col_status_[static_cast<std::size_t>(col)] != Status::Basic) {
        col_status_[static_cast<std::size_t>(col)] = Status::Fixed;
        val_[static_cast<std::size_t>(col)] = 0.0;
      }
    }
    const bool bounded = run_phase(false, out);
    if (!bounded) {
      out.status = LpStatus::Unbounded;
      out.objective = lp_.sense == LpSense::Minimize
                          ? -std::numeric_limits<double>::infinity()
                          : std::numeric_limits<double>::infinity();
      return out;
    }
    extract(out);
    return out;
  }

 private:
  enum class Status { Basic, NbLower, NbUpper, NbFree, Fixed };

  const LinearProgram& lp_;
  int n_ = 0;          // structural columns
  int m_ = 0;          // rows
  int art_begin_ = 0;  // first artificial column
  int num_art_ = 0;
  int width_ = 0;
  bool needs_phase1_ = false;

  std::vector<double> tableau_;  // m x width, row major: B^-1 * A
  std::vector<double> xb_;       // basic variable values per row
  std::vector<int> basis_;       // column per row
  std::vector<double> lo_, hi_, val_;
  std::vector<Status> col_status_;
  std::vector<double> cost2_;                                 // internal minimize costs
  std::vector<std::vector<std::pair<int, double>>> col_terms_;  // original sparse columns
  int iterations_ = 0;
  int degenerate_pivots_ = 0;

  double& tab(int i, int j) {
    return tableau_[static_cast<std::size_t>(i) * static_cast<std::size_t>(width_) +
                    static_cast<std::size_t>(j)];
  }

  void build() {
    n_ = lp_.num_variables();
    m_ = lp_.num_constraints();
    const double inf = std::numeric_limits<double>::infinity();
    const double sgn = lp_.sense == LpSense::Minimize ? 1.0 : -1.0;

    // Columns: structurals, then one slack per row, then artificials.
    art_begin_ = n_ + m_;
    col_terms_.assign(static_cast<std::size_t>(art_begin_), {});
    lo_.assign(static_cast<std::size_t>(art_begin_), 0.0);
    hi_.assign(static_cast<std::size_t>(art_begin_), inf);
    val_.assign(static_cast<std::size_t>(art_begin_), 0.0);
    col_status_.assign(static_cast<std::size_t>(art_begin_), Status::NbLower);
    cost2_.assign(static_cast<std::size_t>(art_begin_), 0.0);

    for (int j = 0; j < n_; ++j) {
      const auto& v = lp_.vars[static_cast<std::size_t>(j)];
      lo_[static_cast<std::size_t>(j)] = v.lo;
      hi_[static_cast<std::size_t>(j)] = v.hi;
      cost2_[static_cast<std::size_t>(j)] = sgn * v.obj;
      if (v.lo == v.hi) {
        col_status_[static_cast<std::size_t>(j)] = Status::Fixed;
        val_[static_cast<std::size_t>(j)] = v.lo;
      } else if (!std::isfinite(v.lo) && !std::isfinite(v.hi)) {
        col_status_[static_cast<std::size_t>(j)] = Status::NbFree;
        val_[static_cast<std::size_t>(j)] = 0.0;
      } else if (std::isfinite(v.lo) && (!std::isfinite(v.hi) || std::abs(v.lo) <= std::abs(v.hi))) {
        col_status_[static_cast<std::size_t>(j)] = Status::NbLower;
        val_[static_cast<std::size_t>(j)] = v.lo;
      } else {
        col_status_[static_cast<std::size_t>(j)] = Status::NbUpper;
        val_[static_cast<std::size_t>(j)] = v.hi;
      }
    }
    for (int i = 0; i < m_; ++i) {
      for (const auto& [j, coef] : lp_.rows[static_cast<std::size_t>(i)].terms)
        if (coef != 0.0) col_terms_[static_cast<std::size_t>(j)].emplace_back(i, coef);
      const int s = n_ + i;
      col_terms_[static_cast<std::size_t>(s)].emplace_back(i, 1.0);
      switch (lp_.rows[static_cast<std::size_t>(i)].rel) {
        case Relation::LessEq:
          lo_[static_cast<std::size_t>(s)] = 0.0;
          hi_[static_cast<std::size_t>(s)] = inf;
          col_status_[static_cast<std::size_t>(s)] = Status::NbLower;
          break;
        case Relation::GreaterEq:
          lo_[static_cast<std::size_t>(s)] = -inf;
          hi_[static_cast<std::size_t>(s)] = 0.0;
          col_status_[static_cast<std::size_t>(s)] = Status::NbUpper;
          break;
        case Relation::Equal:
          lo_[static_cast<std::size_t>(s)] = 0.0;
          hi_[static_cast<std::size_t>(s)] = 0.0;
          col_status_[static_cast<std::size_t>(s)] = Status::Fixed;
          break;
      }
      val_[static_cast<std::size_t>(s)] = 0.0;
    }

    // Pick the initial basis: the slack where its residual value fits the
    // slack bounds, an artificial otherwise.
    std::vector<double> resid(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) {
      double act = 0.0;
      for (const auto& [j, coef] : lp_.rows[static_cast<std::size_t>(i)].terms)
        act += coef * val_[static_cast<std::size_t>(j)];
      resid[static_cast<std::size_t>(i)] = lp_.rows[static_cast<std::size_t>(i)].rhs - act;
    }
    basis_.assign(static_cast<std::size_t>(m_), -1);
    std::vector<double> art_sign(static_cast<std::size_t>(m_), 0.0);
    num_art_ = 0;
    for (int i = 0; i < m_; ++i) {
      const int s = n_ + i;
      const double r = resid[static_cast<std::size_t>(i)];
      const bool slack_ok = lp_.rows[static_cast<std::size_t>(i)].rel != Relation::Equal &&
                            r >= lo_[static_cast<std::size_t>(s)] - kLpFeasTol &&
                            r <= hi_[static_cast<std::size_t>(s)] + kLpFeasTol;
      if (slack_ok) {
        basis_[static_cast<std::size_t>(i)] = s;
        col_status_[static_cast<std::size_t>(s)] = Status::Basic;
      } else {
        art_sign[static_cast<std::size_t>(i)] = r >= 0.0 ? 1.0 : -1.0;
        ++num_art_;
      }
    }

    width_ = art_begin_ + num_art_;
    needs_phase1_ = num_art_ > 0;
    lo_.resize(static_cast<std::size_t>(width_), 0.0);
    hi_.resize(static_cast<std::size_t>(width_), inf);
    val_.resize(static_cast<std::size_t>(width_), 0.0);
    col_status_.resize(static_cast<std::size_t>(width_), Status::NbLower);
    cost2_.resize(static_cast<std::size_t>(width_), 0.0);
    col_terms_.resize(static_cast<std::size_t>(width_));

    tableau_.assign(static_cast<std::size_t>(m_) * static_cast<std::size_t>(width_), 0.0);
    xb_.assign(static_cast<std::size_t>(m_), 0.0);
    int art = art_begin_;
    for (int i = 0; i < m_; ++i) {
      double rowsign = 1.0;
      if (basis_[static_cast<std::size_t>(i)] < 0) {
        const double s = art_sign[static_cast<std::size_t>(i)];
        col_terms_[static_cast<std::size_t>(art)].emplace_back(i, s);
        basis_[static_cast<std::size_t>(i)] = art;
        col_status_[static_cast<std::size_t>(art)] = Status::Basic;
        xb_[static_cast<std::size_t>(i)] = std::abs(resid[static_cast<std::size_t>(i)]);
        rowsign = s;
        ++art;
      } else {
        xb_[static_cast<std::size_t>(i)] = resid[static_cast<std::size_t>(i)];
      }
      // Initial B is diagonal (+-1), so B^-1 A is the sign-adjusted row.
      for (int j = 0; j < n_; ++j) tab(i, j) = 0.0;
      for (const auto& [j, coef] : lp_.rows[static_cast<std::size_t>(i)].terms)
        tab(i, j) = rowsign * coef;
      tab(i, n_ + i) = rowsign;
      if (basis_[static_cast<std::size_t>(i)] >= art_begin_) tab(i, basis_[static_cast<std::size_t>(i)]) = 1.0;
    }
  }

  // One simplex phase. Returns false when the phase detected an unbounded
  // ray (only meaningful for phase 2).
  bool run_phase(bool phase1, LpSolution& out) {
    std::vector<double> cost(static_cast<std::size_t>(width_), 0.0);
    if (phase1) {
      for (int k = 0; k < num_art_; ++k) cost[static_cast<std::size_t>(art_begin_ + k)] = 1.0;
    } else {
      for (int j = 0; j < n_; ++j) cost[static_cast<std::size_t>(j)] = cost2_[static_cast<std::size_t>(j)];
    }
    std::vector<double> yrow(static_cast<std::size_t>(width_));

    while (true) {
      if (++iterations_ > kLpIterCap) throw NumericalError("lp: simplex iteration limit");
      out.iterations = iterations_;

      std::fill(yrow.begin(), yrow.end(), 0.0);
      for (int i = 0; i < m_; ++i) {
        const double cb = cost[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])];
        if (cb == 0.0) continue;
        const double* row = &tableau_[static_cast<std::size_t>(i) * static_cast<std::size_t>(width_)];
        for (int j = 0; j < width_; ++j) yrow[static_cast<std::size_t>(j)] += cb * row[j];
      }

      const bool bland = degenerate_pivots_ > kLpBlandAfter;
      int enter = -1;
      int dir = 0;
      double best = kLpEnterTol;
      for (int j = 0; j < width_; ++j) {
        const Status st = col_status_[static_cast<std::size_t>(j)];
        if (st == Status::Basic || st == Status::Fixed) continue;
        if (!phase1 && j >= art_begin_) continue;
        const double d = cost[static_cast<std::size_t>(j)] - yrow[static_cast<std::size_t>(j)];
        int cand_dir = 0;
        if ((st == Status::NbLower || st == Status::NbFree) && d < -kLpEnterTol) cand_dir = 1;
        else if ((st == Status::NbUpper || st == Status::NbFree) && d > kLpEnterTol) cand_dir = -1;
        if (cand_dir == 0) continue;
        if (bland) {
          enter = j;
          dir = cand_dir;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          enter = j;
          dir = cand_dir;
        }
      }
      if (enter < 0) return true;  // phase optimal

      // Ratio test: how far can the entering variable move.
      const double range = hi_[static_cast<std::size_t>(enter)] - lo_[static_cast<std::size_t>(enter)];
      double t_best = std::isfinite(range) ? range : std::numeric_limits<double>::infinity();
      int leave = -1;
      bool leave_at_upper = false;
      double leave_pivot = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double alpha = tab(i, enter) * dir;
        if (std::abs(alpha) <= kLpPivotTol) continue;
        const int bcol = basis_[static_cast<std::size_t>(i)];
        double cap;
        bool to_upper;
        if (alpha > 0.0) {
          const double lim = lo_[static_cast<std::size_t>(bcol)];
          if (!std::isfinite(lim)) continue;
          cap = (xb_[static_cast<std::size_t>(i)] - lim) / alpha;
          to_upper = false;
        } else {
          const double lim = hi_[static_cast<std::size_t>(bcol)];
          if (!std::isfinite(lim)) continue;
          cap = (lim - xb_[static_cast<std::size_t>(i)]) / (-alpha);
          to_upper = true;
        }
        if (cap < 0.0) cap = 0.0;
        bool take = false;
        if (cap < t_best - 1e-12) {
          take = true;
        } else if (cap <= t_best + 1e-12 && leave >= 0) {
          if (bland) {
            take = basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)];
          } else {
            take = std::abs(tab(i, enter)) > std::abs(leave_pivot);
          }
        } else if (cap <= t_best + 1e-12 && leave < 0 && cap <= t_best) {
          take = true;
        }
        if (take) {
          t_best = std::min(t_best, cap);
          leave = i;
          leave_at_upper = to_upper;
          leave_pivot = tab(i, enter);
        }
      }

      if (!std::isfinite(t_best)) {
        if (phase1) throw NumericalError("lp: phase one claims an unbounded ray");
        return false;
      }
      if (t_best <= kLpPivotTol) ++degenerate_pivots_;

      if (leave < 0) {
        // Bound flip: the entering variable crosses to its other bound.
        for (int i = 0; i < m_; ++i)
          xb_[static_cast<std::size_t>(i)] -= dir * t_best * tab(i, enter);
        if (dir > 0) {
          val_[static_cast<std::size_t>(enter)] = hi_[static_cast<std::size_t>(enter)];
          col_status_[static_cast<std::size_t>(enter)] = Status::NbUpper;
        } else {
          val_[static_cast<std::size_t>(enter)] = lo_[static_cast<std::size_t>(enter)];
          col_status_[static_cast<std::size_t>(enter)] = Status::NbLower;
        }
        continue;
      }

      for (int i = 0; i < m_; ++i)
        if (i != leave) xb_[static_cast<std::size_t>(i)] -= dir * t_best * tab(i, enter);
      const double enter_val = val_[static_cast<std::size_t>(enter)] + dir * t_best;

      const int lcol = basis_[static_cast<std::size_t>(leave)];
      col_status_[static_cast<std::size_t>(lcol)] = leave_at_upper ? Status::NbUpper : Status::NbLower;
      val_[static_cast<std::size_t>(lcol)] =
          leave_at_upper ? hi_[static_cast<std::size_t>(lcol)] : lo_[static_cast<std::size_t>(lcol)];
      if (lcol >= art_begin_) {
        // Artificials never come back.
        lo_[static_cast<std::size_t>(lcol)] = 0.0;
        hi_[static_cast<std::size_t>(lcol)] = 0.0;
        val_[static_cast<std::size_t>(lcol)] = 0.0;
        col_status_[static_cast<std::size_t>(lcol)] = Status::Fixed;
      }

      pivot(leave, enter);
      basis_[static_cast<std::size_t>(leave)] = enter;
      xb_[static_cast<std::size_t>(leave)] = enter_val;
      col_status_[static_cast<std::size_t>(enter)] = Status::Basic;
    }
  }

  void pivot(int prow, int pcol) {
    const double piv = tab(prow, pcol);
    if (std::abs(piv) <= kLpPivotTol) throw NumericalError("lp: vanishing pivot element");
    double* prow_data = &tableau_[static_cast<std::size_t>(prow) * static_cast<std::size_t>(width_)];
    const double inv = 1.0 / piv;
    for (int j = 0; j < width_; ++j) prow_data[j] *= inv;
    prow_data[pcol] = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == prow) continue;
      const double f = tab(i, pcol);
      if (f == 0.0) continue;
      double* row = &tableau_[static_cast<std::size_t>(i) * static_cast<std::size_t>(width_)];
      for (int j = 0; j < width_; ++j) row[j] -= f * prow_data[j];
      row[pcol] = 0.0;
    }
  }

  void drive_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      const int bcol = basis_[static_cast<std::size_t>(i)];
      if (bcol < art_begin_) continue;
      int target = -1;
      for (int j = 0; j < art_begin_; ++j) {
        if (col_status_[static_cast<std::size_t>(j)] == Status::Basic) continue;
        if (std::abs(tab(i, j)) > 1e-7) {
          target = j;
          break;
        }
      }
      if (target < 0) {
        // Redundant row: pin the artificial at zero and leave it basic.
        lo_[static_cast<std::size_t>(bcol)] = 0.0;
        hi_[static_cast<std::size_t>(bcol)] = 0.0;
        xb_[static_cast<std::size_t>(i)] = 0.0;
        continue;
      }
      const double target_val = val_[static_cast<std::size_t>(target)];
      col_status_[static_cast<std::size_t>(bcol)] = Status::Fixed;
      lo_[static_cast<std::size_t>(bcol)] = 0.0;
      hi_[static_cast<std::size_t>(bcol)] = 0.0;
      val_[static_cast<std::size_t>(bcol)] = 0.0;
      pivot(i, target);
      basis_[static_cast<std::size_t>(i)] = target;
      xb_[static_cast<std::size_t>(i)] = target_val;
      col_status_[static_cast<std::size_t>(target)] = Status::Basic;
    }
  }

  void extract(LpSolution& out) {
    const double sgn = lp_.sense == LpSense::Minimize ? 1.0 : -1.0;
    out.status = LpStatus::Optimal;
    out.primal.assign(static_cast<std::size_t>(n_), 0.0);
    for (int j = 0; j < n_; ++j) out.primal[static_cast<std::size_t>(j)] = val_[static_cast<std::size_t>(j)];
    for (int i = 0; i < m_; ++i) {
      const int b = basis_[static_cast<std::size_t>(i)];
      if (b < n_) out.primal[static_cast<std::size_t>(b)] = xb_[static_cast<std::size_t>(i)];
    }

    certify(out);
    if (out.primal_residual > kLpFeasTol) {
      refine(out);
      certify(out);
      if (out.primal_residual > kLpFeasTol)
        throw NumericalError("lp: primal residual " + std::to_string(out.primal_residual) +
                             " after refinement");
    }

    double obj = 0.0;
    for (int j = 0; j < n_; ++j)
      obj += lp_.vars[static_cast<std::size_t>(j)].obj * out.primal[static_cast<std::size_t>(j)];
    out.objective = obj;

    // Duals from the slack columns of B^-1, reduced costs from original data.
    out.dual.assign(static_cast<std::size_t>(m_), 0.0);
    for (int i = 0; i < m_; ++i) {
      double y = 0.0;
      for (int k = 0; k < m_; ++k) {
        const double cb = cost2_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(k)])];
        if (cb != 0.0) y += cb * tab(k, n_ + i);
      }
      out.dual[static_cast<std::size_t>(i)] = sgn * y;
    }
    out.reduced_cost.assign(static_cast<std::size_t>(n_), 0.0);
    for (int j = 0; j < n_; ++j) {
      double d = cost2_[static_cast<std::size_t>(j)];
      for (const auto& [i, coef] : col_terms_[static_cast<std::size_t>(j)])
        d -= sgn * out.dual[static_cast<std::size_t>(i)] * coef;
      out.reduced_cost[static_cast<std::size_t>(j)] = sgn * d;
    }

    // Dual residual and gap, again from original data.
    double dres = 0.0;
    for (int j = 0; j < n_; ++j) {
      const double d = sgn * out.reduced_cost[static_cast<std::size_t>(j)];
      switch (col_status_[static_cast<std::size_t>(j)]) {
        case Status::NbLower: dres = std::max(dres, -d); break;
        case Status::NbUpper: dres = std::max(dres, d); break;
        case Status::NbFree: dres = std::max(dres, std::abs(d)); break;
        case Status::Basic: dres = std::max(dres, std::abs(d)); break;
        case Status::Fixed: break;
      }
    }
    for (int i = 0; i < m_; ++i) {
      const int s = n_ + i;
      const double d = -sgn * out.dual[static_cast<std::size_t>(i)];
      switch (col_status_[static_cast<std::size_t>(s)]) {
        case Status::NbLower: dres = std::max(dres, -d); break;
        case Status::NbUpper: dres = std::max(dres, d); break;
        case Status::Basic: dres = std::max(dres, std::abs(d)); break;
        default: break;
      }
    }
    out.dual_residual = dres;

    double dual_obj = 0.0;
    for (int i = 0; i < m_; ++i)
      dual_obj += sgn * out.dual[static_cast<std::size_t>(i)] * lp_.rows[static_cast<std::size_t>(i)].rhs;
    for (int j = 0; j < n_; ++j) {
      if (col_status_[static_cast<std::size_t>(j)] == Status::Basic) continue;
      double d = cost2_[static_cast<std::size_t>(j)];
      for (const auto& [i, coef] : col_terms_[static_cast<std::size_t>(j)])
        d -= sgn * out.dual[static_cast<std::size_t>(i)] * coef;
      dual_obj += d * val_[static_cast<std::size_t>(j)];
    }
    out.duality_gap = std::abs(sgn * obj - dual_obj);
  }

  void certify(LpSolution& out) {
    double pres = 0.0;
    for (int i = 0; i < m_; ++i) {
      const auto& row = lp_.rows[static_cast<std::size_t>(i)];
      double act = 0.0;
      for (const auto& [j, coef] : row.terms) act += coef * out.primal[static_cast<std::size_t>(j)];
      switch (row.rel) {
        case Relation::LessEq: pres = std::max(pres, act - row.rhs); break;
        case Relation::GreaterEq: pres = std::max(pres, row.rhs - act); break;
        case Relation::Equal: pres = std::max(pres, std::abs(act - row.rhs)); break;
      }
    }
    for (int j = 0; j < n_; ++j) {
      const auto& v = lp_.vars[static_cast<std::size_t>(j)];
      pres = std::max(pres, v.lo - out.primal[static_cast<std::size_t>(j)]);
      pres = std::max(pres, out.primal[static_cast<std::size_t>(j)] - v.hi);
    }
    out.primal_residual = pres;
  }

  // Re-solves the basic system from original data to wash out tableau drift.
  void refine(LpSolution& out) {
    std::vector<double> bmat(static_cast<std::size_t>(m_) * static_cast<std::size_t>(m_), 0.0);
    std::vector<double> rhs(static_cast<std::size_t>(m_), 0.0);
    for (int i = 0; i < m_; ++i) rhs[static_cast<std::size_t>(i)] = lp_.rows[static_cast<std::size_t>(i)].rhs;
    for (int k = 0; k < m_; ++k) {
      const int col = basis_[static_cast<std::size_t>(k)];
      for (const auto& [i, coef] : col_terms_[static_cast<std::size_t>(col)])
        bmat[static_cast<std::size_t>(i) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(k)] = coef;
    }
    for (int j = 0; j < width_; ++j) {
      if (col_status_[static_cast<std::size_t>(j)] == Status::Basic) continue;
      const double v = val_[static_cast<std::size_t>(j)];
      if (v == 0.0) continue;
      for (const auto& [i, coef] : col_terms_[static_cast<std::size_t>(j)])
        rhs[static_cast<std::size_t>(i)] -= coef * v;
    }
    if (!solve_lu(bmat, rhs, m_)) return;
    for (int k = 0; k < m_; ++k) {
      xb_[static_cast<std::size_t>(k)] = rhs[static_cast<std::size_t>(k)];
      const int col = basis_[static_cast<std::size_t>(k)];
      if (col < n_) out.primal[static_cast<std::size_t>(col)] = rhs[static_cast<std::size_t>(k)];
    }
  }
};

}  // namespace detail

inline LpSolution solve_lp(const LinearProgram& lp) { return detail::Simplex(lp).solve(); }

// Plain-text dump in LP format; stable layout for goldens and debugging.
inline void write_lp(const LinearProgram& lp, std::ostream& os) {
  const auto num = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  const auto var_name = [&lp](int j) {
    const auto& n = lp.vars[static_cast<std::size_t>(j)].name;
    return n.empty() ? "x" + std::to_string(j) : n;
  };
  os << (lp.sense == LpSense::Minimize ? "Minimize" : "Maximize") << "\n obj:";
  bool first = true;
  for (int j = 0; j < lp.num_variables(); ++j) {
    const double c = lp.vars[static_cast<std::size_t>(j)].obj;
    if (c == 0.0) continue;
    os << (first ? " " : " + ") << num(c) << " " << var_name(j);
    first = false;
  }
  if (first) os << " 0";
  os << "\nSubject To\n";
  for (int i = 0; i < lp.num_constraints(); ++i) {
    const auto& row = lp.rows[static_cast<std::size_t>(i)];
    os << " " << (row.name.empty() ? "c" + std::to_string(i) : row.name) << ":";
    bool rfirst = true;
    for (const auto& [j, coef] : row.terms) {
      os << (rfirst ? " " : " + ") << num(coef) << " " << var_name(j);
      rfirst = false;
    }
    if (rfirst) os << " 0";
    const char* rel = row.rel == Relation::LessEq ? "<=" : row.rel == Relation::GreaterEq ? ">=" : "=";
    os << " " << rel << " " << num(row.rhs) << "\n";
  }
  os << "Bounds\n";
  for (int j = 0; j < lp.num_variables(); ++j) {
    const auto& v = lp.vars[static_cast<std::size_t>(j)];
    if (!std::isfinite(v.lo) && !std::isfinite(v.hi)) {
      os << " " << var_name(j) << " free\n";
    } else if (v.lo == v.hi) {
      os << " " << var_name(j) << " = " << num(v.lo) << "\n";
    } else {
      os << " ";
      if (std::isfinite(v.lo)) os << num(v.lo) << " <= ";
      os << var_name(j);
      if (std::isfinite(v.hi)) os << " <= " << num(v.hi);
      os << "\n";
    }
  }
  os << "End\n";
}

}  // namespace potflow
