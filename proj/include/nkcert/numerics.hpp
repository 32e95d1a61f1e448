#pragma once

// Dense linear algebra in the infinity norm and adaptive Simpson quadrature.

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace nkcert {

/// Real vector of dimension n >= 1 with finite entries.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n, double fill = 0.0);
  explicit Vector(std::vector<double> entries);
  Vector(std::initializer_list<double> entries);

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  double operator[](std::size_t i) const { return entries_[i]; }
  double& operator[](std::size_t i) { return entries_[i]; }

  std::span<const double> values() const noexcept { return entries_; }
  const std::vector<double>& to_std() const noexcept { return entries_; }

  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  friend Vector operator+(const Vector& a, const Vector& b);
  friend Vector operator-(const Vector& a, const Vector& b);
  friend Vector operator*(double s, const Vector& v);
  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<double> entries_;
};

/// Square n x n matrix stored row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n);
  Matrix(std::size_t n, std::vector<double> row_major);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t size() const noexcept { return n_; }

  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }

  std::span<const double> values() const noexcept { return a_; }
  bool all_finite() const noexcept;
  double max_abs() const noexcept;

  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Vector operator*(const Matrix& a, const Vector& x);
  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

/// LU factorization with partial pivoting, P A = L U.
///
/// Throws SingularMatrix when a pivot magnitude drops to or below
/// 1e-14 * max|A|.
class LuFactorization {
 public:
  explicit LuFactorization(const Matrix& a);

  std::size_t size() const noexcept { return lu_.size(); }
  Vector solve(const Vector& b) const;
  /// Solves column by column, returning A^{-1} B.
  Matrix solve(const Matrix& b) const;

 private:
  void solve_in_place(std::vector<double>& x) const;

  Matrix lu_;
  std::vector<std::size_t> perm_;
};

inline constexpr double kPivotRelativeThreshold = 1e-14;

Vector solve_linear(const Matrix& a, const Vector& b);

double norm_inf(const Vector& v) noexcept;

/// Induced infinity norm: the maximum absolute row sum.
double operator_norm_inf(const Matrix& a) noexcept;

/// Adaptive Simpson estimate of the integral of f over [0, b].
///
/// The top-level tolerance is max(rel_tol * |S|, 1e-15) where S is the
/// coarse Simpson estimate; each bisection halves the local tolerance but
/// never below the 1e-15 floor. Throws NonConvergedQuadrature past 60
/// recursion levels.
double integrate(const std::function<double(double)>& f, double b, double rel_tol = 1e-12);

struct Maximum {
  double x = 0.0;
  double value = 0.0;
};

/// Maximum of f over [a, b]: the best of `grid` + 1 equally spaced points,
/// refined by golden-section search between that point's neighbours. f may
/// return -inf where it is undefined. Not a global optimizer for functions
/// with features narrower than the grid spacing.
Maximum maximize(const std::function<double(double)>& f, double a, double b, int grid = 4096);

}  // namespace nkcert
