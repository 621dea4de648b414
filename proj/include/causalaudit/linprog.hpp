#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace causalaudit::lp {

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Status { kOptimal, kInfeasible, kUnbounded };

struct Result {
  Status status = Status::kInfeasible;
  std::vector<double> x;      // primal solution when optimal
  double objective = 0.0;     // c'x when optimal; phase-one optimum when infeasible
  double residual = 0.0;      // max |Ax - b| of the returned point
  int iterations = 0;
};

/// Dense row-major matrix, just enough surface for the solver and its
/// callers.
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

 private:
  std::size_t rows_, cols_;
  std::vector<double> data_;
};

/// Solves min c'x subject to Ax = b, x >= 0 with a two-phase dense
/// simplex. Dantzig pricing with a switch to Bland's rule after an
/// iteration budget; the hard iteration cap throws NumericalError.
/// Infeasibility is certified by a phase-one optimum above `tol`.
Result solve(const Matrix& a, const std::vector<double>& b,
             const std::vector<double>& c, double tol = 1e-9);

/// Phase-one only: returns a feasible point of {Ax = b, x >= 0} or
/// Status::kInfeasible.
Result feasible_point(const Matrix& a, const std::vector<double>& b,
                      double tol = 1e-9);

}  // namespace causalaudit::lp
