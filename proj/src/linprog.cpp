#include "causalaudit/linprog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace causalaudit::lp {

namespace {

constexpr double kPivotEps = 1e-11;

// Simplex tableau over the columns of [A | I_artificial]. Bottom row holds
// reduced costs, bottom-right the negated objective.
class Tableau {
 public:
  Tableau(const Matrix& a, const std::vector<double>& b, double tol)
      : m_(a.rows()), n_(a.cols()), tol_(tol), tab_(m_ + 1, a.cols() + a.rows() + 1) {
    for (std::size_t i = 0; i < m_; ++i) {
      const double sign = b[i] < 0.0 ? -1.0 : 1.0;
      for (std::size_t j = 0; j < n_; ++j) tab_.at(i, j) = sign * a.at(i, j);
      tab_.at(i, n_ + i) = 1.0;
      tab_.at(i, n_ + m_) = sign * b[i];
    }
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) basis_[i] = n_ + i;
  }

  // Minimizes the artificial sum. Returns the phase-one optimum.
  double phase_one() {
    std::vector<double> cost(n_ + m_, 0.0);
    for (std::size_t j = n_; j < n_ + m_; ++j) cost[j] = 1.0;
    load_costs(cost);
    run(/*allow_artificials=*/true);
    return -tab_.at(m_, n_ + m_);
  }

  // Minimizes c'x from a feasible basis; artificial columns are barred.
  void phase_two(const std::vector<double>& c) {
    drive_out_artificials();
    std::vector<double> cost(n_ + m_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) cost[j] = c[j];
    load_costs(cost);
    run(/*allow_artificials=*/false);
  }

  std::vector<double> primal() const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x[basis_[i]] = tab_.at(i, n_ + m_);
    }
    return x;
  }

  double objective() const { return -tab_.at(m_, n_ + m_); }
  int iterations() const { return iterations_; }
  bool unbounded() const { return unbounded_; }

 private:
  void load_costs(const std::vector<double>& cost) {
    for (std::size_t j = 0; j <= n_ + m_; ++j) tab_.at(m_, j) = 0.0;
    for (std::size_t j = 0; j < n_ + m_; ++j) tab_.at(m_, j) = cost[j];
    // Cancel the cost row against the current basis.
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= n_ + m_; ++j) {
        tab_.at(m_, j) -= cb * tab_.at(i, j);
      }
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    const double p = tab_.at(row, col);
    for (std::size_t j = 0; j <= n_ + m_; ++j) tab_.at(row, j) /= p;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == row) continue;
      const double f = tab_.at(i, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= n_ + m_; ++j) {
        tab_.at(i, j) -= f * tab_.at(row, j);
      }
    }
    basis_[row] = col;
    ++iterations_;
  }

  void run(bool allow_artificials) {
    const std::size_t cols = allow_artificials ? n_ + m_ : n_;
    const int bland_after = 50 * static_cast<int>(m_ + n_) + 200;
    const int hard_cap = 200 * static_cast<int>(m_ + n_) + 20000;
    unbounded_ = false;
    int local_iter = 0;
    for (;;) {
      if (local_iter > hard_cap) {
        throw NumericalError("simplex iteration cap exceeded (cycling guard)");
      }
      const bool bland = local_iter > bland_after;
      // Entering column.
      std::size_t enter = cols;
      double best = -tol_;
      for (std::size_t j = 0; j < cols; ++j) {
        const double rc = tab_.at(m_, j);
        if (rc < best) {
          if (bland) {  // first improving index
            enter = j;
            break;
          }
          best = rc;
          enter = j;
        }
      }
      if (enter == cols) return;  // optimal
      // Ratio test.
      std::size_t leave = m_;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        const double aij = tab_.at(i, enter);
        if (aij > kPivotEps) {
          const double ratio = tab_.at(i, n_ + m_) / aij;
          if (ratio < best_ratio - kPivotEps ||
              (ratio < best_ratio + kPivotEps && leave < m_ &&
               basis_[i] < basis_[leave])) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave == m_) {
        unbounded_ = true;
        return;
      }
      pivot(leave, enter);
      ++local_iter;
    }
  }

  // Replaces basic artificials by structural columns where possible;
  // redundant rows keep their artificial at value zero and are left inert.
  void drive_out_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      std::size_t enter = n_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (std::abs(tab_.at(i, j)) > 1e-8) {
          enter = j;
          break;
        }
      }
      if (enter < n_) pivot(i, enter);
    }
  }

  std::size_t m_, n_;
  double tol_;
  Matrix tab_;
  std::vector<std::size_t> basis_;
  int iterations_ = 0;
  bool unbounded_ = false;
};

double max_residual(const Matrix& a, const std::vector<double>& b,
                    const std::vector<double>& x) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double dot = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) dot += a.at(i, j) * x[j];
    worst = std::max(worst, std::abs(dot - b[i]));
  }
  return worst;
}

Result run_solver(const Matrix& a, const std::vector<double>& b,
                  const std::vector<double>* c, double tol) {
  if (b.size() != a.rows()) throw std::invalid_argument("b size mismatch");
  if (c && c->size() != a.cols()) throw std::invalid_argument("c size mismatch");
  for (double v : b) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite rhs entry");
  }

  Tableau tab(a, b, tol);
  Result result;
  const double phase1 = tab.phase_one();
  if (phase1 > tol) {
    result.status = Status::kInfeasible;
    result.objective = phase1;
    result.iterations = tab.iterations();
    return result;
  }
  if (c) {
    tab.phase_two(*c);
    if (tab.unbounded()) {
      result.status = Status::kUnbounded;
      result.iterations = tab.iterations();
      return result;
    }
  }
  result.status = Status::kOptimal;
  result.x = tab.primal();
  for (double& v : result.x) {
    if (v < 0.0 && v > -tol) v = 0.0;  // clip simplex noise
  }
  result.objective = c ? tab.objective() : 0.0;
  result.residual = max_residual(a, b, result.x);
  result.iterations = tab.iterations();
  if (result.residual > 100.0 * tol) {
    throw NumericalError("simplex returned a point with residual " +
                         std::to_string(result.residual));
  }
  return result;
}

}  // namespace

Result solve(const Matrix& a, const std::vector<double>& b,
             const std::vector<double>& c, double tol) {
  return run_solver(a, b, &c, tol);
}

Result feasible_point(const Matrix& a, const std::vector<double>& b, double tol) {
  return run_solver(a, b, nullptr, tol);
}

}  // namespace causalaudit::lp
