#pragma once
// Numeric root finding for small overdetermined residual systems, and the
// Krawczyk test that proves a unique root of a square subsystem in a box.

#include <Eigen/Dense>
#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <vector>

#include "expr.hpp"

namespace tetratile {

// Residuals and their Jacobian compiled once; row-major Jacobian outputs.
class CompiledSystem {
 public:
  CompiledSystem() = default;
  CompiledSystem(ExprGraph& g, const std::vector<Expr>& residuals) : m_(residuals.size()) {
    n_ = g.num_vars();
    std::vector<Expr> jac;
    for (const auto& r : residuals)
      for (int v = 0; v < n_; ++v) jac.push_back(g.diff(r, v));
    f_ = Program(g, residuals);
    j_ = Program(g, jac);
  }

  std::size_t rows() const { return m_; }
  int cols() const { return n_; }

  Eigen::VectorXd value(const std::vector<double>& x) const {
    auto out = f_(x);
    return Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size()));
  }
  Eigen::MatrixXd jacobian(const std::vector<double>& x) const {
    auto out = j_(x);
    Eigen::MatrixXd J(m_, n_);
    for (std::size_t i = 0; i < m_; ++i)
      for (int v = 0; v < n_; ++v) J(i, v) = out[i * n_ + v];
    return J;
  }
  std::vector<Interval> value(const std::vector<Interval>& x) const { return f_(x); }
  std::vector<Interval> jacobian(const std::vector<Interval>& x) const { return j_(x); }

 private:
  std::size_t m_ = 0;
  int n_ = 0;
  Program f_, j_;
};

struct NumericRoot {
  std::vector<double> x;
  double residual = 0;  // Euclidean norm
  bool converged = false;
  int iterations = 0;
};

// Levenberg-Marquardt on the sum of squares.
inline NumericRoot levenberg_marquardt(const CompiledSystem& sys, std::vector<double> x, double tol = 1e-13,
                                       int max_iter = 200) {
  NumericRoot r;
  double lambda = 1e-3;
  Eigen::VectorXd f = sys.value(x);
  double cost = f.squaredNorm();
  int it = 0;
  for (; it < max_iter && std::sqrt(cost) > tol; ++it) {
    Eigen::MatrixXd J = sys.jacobian(x);
    Eigen::MatrixXd A = J.transpose() * J;
    Eigen::VectorXd g = J.transpose() * f;
    bool improved = false;
    for (int tries = 0; tries < 30 && !improved; ++tries) {
      Eigen::MatrixXd Ad = A;
      for (int i = 0; i < A.rows(); ++i) Ad(i, i) += lambda * std::max(A(i, i), 1e-12);
      Eigen::VectorXd step = Ad.ldlt().solve(-g);
      std::vector<double> y = x;
      for (std::size_t i = 0; i < y.size(); ++i) y[i] += step(static_cast<Eigen::Index>(i));
      Eigen::VectorXd fy = sys.value(y);
      double cy = fy.squaredNorm();
      if (std::isfinite(cy) && cy < cost) {
        x = std::move(y);
        f = fy;
        cost = cy;
        lambda = std::max(lambda / 10, 1e-15);
        improved = true;
      } else {
        lambda *= 10;
      }
    }
    if (!improved) break;
  }
  r.x = std::move(x);
  r.residual = std::sqrt(cost);
  r.converged = r.residual <= 1e-10;
  r.iterations = it;
  return r;
}

// Numerical rank from singular values, relative to max(1, sigma_max).
inline int numerical_rank(const Eigen::MatrixXd& J, double rel = 1e-7) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
  const auto& s = svd.singularValues();
  double scale = std::max(1.0, s.size() ? s(0) : 0.0);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel * scale) ++r;
  return r;
}

// The n rows of J (m x n) whose square submatrix is best conditioned.
inline std::vector<int> best_square_rows(const Eigen::MatrixXd& J) {
  const int m = static_cast<int>(J.rows()), n = static_cast<int>(J.cols());
  std::vector<int> best, pick(n);
  double best_score = -1;
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n) {
      Eigen::MatrixXd S(n, n);
      for (int i = 0; i < n; ++i) S.row(i) = J.row(pick[i]);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(S);
      double score = svd.singularValues()(n - 1) / std::max(svd.singularValues()(0), 1e-300);
      if (score > best_score) {
        best_score = score;
        best = pick;
      }
      return;
    }
    for (int i = start; i < m; ++i) {
      pick[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

struct KrawczykResult {
  std::vector<Interval> box;     // contains the unique root of the square subsystem
  std::vector<Interval> region;  // the root is the only one in here
  int iterations = 0;
};

// K(X) = x - Y F(x) + (I - Y J(X)) (X - x) over the square subsystem `rows`.
// Success (K inside the interior of X) proves exactly one root in X, lying in K.
inline std::optional<KrawczykResult> krawczyk(const CompiledSystem& sys, const std::vector<int>& rows,
                                              const std::vector<double>& x0, double radius = 1e-6,
                                              int max_iter = 20) {
  const int n = sys.cols();
  if (static_cast<int>(rows.size()) != n) return std::nullopt;
  std::vector<double> x = x0;
  Eigen::MatrixXd Jx = sys.jacobian(x);
  Eigen::MatrixXd S(n, n);
  for (int i = 0; i < n; ++i) S.row(i) = Jx.row(rows[i]);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
  if (!lu.isInvertible()) return std::nullopt;
  Eigen::MatrixXd Y = lu.inverse();

  std::vector<Interval> X(n);
  for (int i = 0; i < n; ++i) X[i] = Interval(down(x[i] - radius), up(x[i] + radius));
  std::vector<Interval> xi(x.begin(), x.end());
  auto Fx = sys.value(xi);
  for (int it = 1; it <= max_iter; ++it) {
    auto JX = sys.jacobian(X);
    std::vector<Interval> K(n);
    for (int i = 0; i < n; ++i) {
      Interval yf(0.0);
      for (int k = 0; k < n; ++k) yf += Interval(Y(i, k)) * Fx[rows[k]];
      Interval acc = Interval(x[i]) - yf;
      for (int j = 0; j < n; ++j) {
        Interval m = Interval(i == j ? 1.0 : 0.0);
        for (int k = 0; k < n; ++k) m -= Interval(Y(i, k)) * JX[rows[k] * n + j];
        acc += m * (X[j] - Interval(x[j]));
      }
      K[i] = acc;
    }
    bool inside = true;
    for (int i = 0; i < n; ++i)
      if (!(K[i].lo > X[i].lo && K[i].hi < X[i].hi)) inside = false;
    if (inside) return KrawczykResult{K, X, it};
    // Epsilon inflation around the hull of K and x.
    for (int i = 0; i < n; ++i) {
      Interval h = hull(K[i], Interval(x[i]));
      double w = std::max(h.width(), radius);
      X[i] = Interval(down(h.lo - 0.5 * w), up(h.hi + 0.5 * w));
    }
  }
  return std::nullopt;
}

}  // namespace tetratile
