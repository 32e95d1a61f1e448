#include "nkcert/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "nkcert/error.hpp"

namespace nkcert {

namespace {

void require_finite(std::span<const double> xs, const char* what) {
  for (double x : xs) {
    if (!std::isfinite(x)) throw InvalidArgument(std::string(what) + " has a non-finite entry");
  }
}

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw InvalidArgument(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                          std::to_string(b) + ")");
  }
}

}  // namespace

// ---------------------------------------------------------------- Vector

Vector::Vector(std::size_t n, double fill) : entries_(n, fill) {
  if (n == 0) throw InvalidArgument("vector dimension must be at least 1");
  require_finite(entries_, "vector");
}

Vector::Vector(std::vector<double> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw InvalidArgument("vector dimension must be at least 1");
  require_finite(entries_, "vector");
}

Vector::Vector(std::initializer_list<double> entries) : Vector(std::vector<double>(entries)) {}

Vector operator+(const Vector& a, const Vector& b) {
  require_same_size(a.size(), b.size(), "vector sum");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
  return Vector(std::move(out));
}

Vector operator-(const Vector& a, const Vector& b) {
  require_same_size(a.size(), b.size(), "vector difference");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
  return Vector(std::move(out));
}

Vector operator*(double s, const Vector& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = s * v[i];
  return Vector(std::move(out));
}

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(std::size_t n) : n_(n), a_(n * n, 0.0) {
  if (n == 0) throw InvalidArgument("matrix dimension must be at least 1");
}

Matrix::Matrix(std::size_t n, std::vector<double> row_major) : n_(n), a_(std::move(row_major)) {
  if (n == 0) throw InvalidArgument("matrix dimension must be at least 1");
  if (a_.size() != n * n) throw InvalidArgument("matrix storage does not match n*n");
  require_finite(a_, "matrix");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t n = rows.size();
  std::vector<double> data;
  data.reserve(n * n);
  for (const auto& row : rows) {
    if (row.size() != n) throw InvalidArgument("matrix must be square");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Matrix(n, std::move(data));
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(a_.begin(), a_.end(), [](double x) { return std::isfinite(x); });
}

double Matrix::max_abs() const noexcept {
  double m = 0.0;
  for (double x : a_) m = std::max(m, std::abs(x));
  return m;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same_size(a.size(), b.size(), "matrix difference");
  Matrix out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) out(i, j) = a(i, j) - b(i, j);
  return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  require_same_size(a.size(), b.size(), "matrix product");
  const std::size_t n = a.size();
  Matrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

Vector operator*(const Matrix& a, const Vector& x) {
  require_same_size(a.size(), x.size(), "matrix-vector product");
  std::vector<double> out(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a(i, j) * x[j];
    out[i] = s;
  }
  return Vector(std::move(out));
}

// ------------------------------------------------------- LuFactorization

LuFactorization::LuFactorization(const Matrix& a) : lu_(a), perm_(a.size()) {
  const std::size_t n = a.size();
  if (n == 0) throw InvalidArgument("cannot factor an empty matrix");
  if (!a.all_finite()) throw InvalidArgument("matrix has a non-finite entry");

  const double threshold = kPivotRelativeThreshold * a.max_abs();
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(lu_(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best <= threshold || best == 0.0) {
      throw SingularMatrix("pivot " + std::to_string(best) + " at column " + std::to_string(k) +
                           " is below the singularity threshold");
    }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
      std::swap(perm_[k], perm_[p]);
    }
    const double pivot = lu_(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double m = lu_(i, k) / pivot;
      lu_(i, k) = m;
      if (m == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= m * lu_(k, j);
    }
  }
}

void LuFactorization::solve_in_place(std::vector<double>& x) const {
  const std::size_t n = lu_.size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = x[perm_[i]];
  for (std::size_t i = 0; i < n; ++i) {
    double s = y[i];
    for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * y[j];
    y[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = y[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= lu_(i, j) * y[j];
    y[i] = s / lu_(i, i);
  }
  x = std::move(y);
}

Vector LuFactorization::solve(const Vector& b) const {
  require_same_size(size(), b.size(), "linear solve");
  std::vector<double> x = b.to_std();
  solve_in_place(x);
  return Vector(std::move(x));
}

Matrix LuFactorization::solve(const Matrix& b) const {
  require_same_size(size(), b.size(), "linear solve");
  const std::size_t n = size();
  Matrix out(n);
  std::vector<double> col(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = b(i, j);
    solve_in_place(col);
    for (std::size_t i = 0; i < n; ++i) out(i, j) = col[i];
  }
  return out;
}

Vector solve_linear(const Matrix& a, const Vector& b) {
  require_same_size(a.size(), b.size(), "linear solve");
  return LuFactorization(a).solve(b);
}

// ----------------------------------------------------------------- norms

double norm_inf(const Vector& v) noexcept {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double operator_norm_inf(const Matrix& a) noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) row += std::abs(a(i, j));
    m = std::max(m, row);
  }
  return m;
}

// ------------------------------------------------------------ quadrature

namespace {

constexpr int kMaxQuadratureDepth = 60;
constexpr double kQuadratureFloor = 1e-15;

struct SimpsonPanel {
  double a, m, b;
  double fa, fm, fb;
  double whole;
};

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, const SimpsonPanel& p, double tol, int depth) {
  const double lm = 0.5 * (p.a + p.m);
  const double rm = 0.5 * (p.m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(p.a, p.m, p.fa, flm, p.fm);
  const double right = simpson(p.m, p.b, p.fm, frm, p.fb);
  const double delta = left + right - p.whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth >= kMaxQuadratureDepth) {
    throw NonConvergedQuadrature("adaptive Simpson exceeded " + std::to_string(kMaxQuadratureDepth) +
                                 " levels near r = " + std::to_string(p.m));
  }
  const double sub_tol = std::max(0.5 * tol, kQuadratureFloor);
  return adaptive(f, {p.a, lm, p.m, p.fa, flm, p.fm, left}, sub_tol, depth + 1) +
         adaptive(f, {p.m, rm, p.b, p.fm, frm, p.fb, right}, sub_tol, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double b, double rel_tol) {
  if (!(b >= 0.0) || !std::isfinite(b)) throw InvalidArgument("integration bound must be finite and >= 0");
  if (!(rel_tol > 0.0)) throw InvalidArgument("relative tolerance must be positive");
  if (b == 0.0) return 0.0;
  const double m = 0.5 * b;
  const double fa = f(0.0);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = simpson(0.0, b, fa, fm, fb);
  const double tol = std::max(rel_tol * std::abs(whole), kQuadratureFloor);
  return adaptive(f, {0.0, m, b, fa, fm, fb, whole}, tol, 0);
}

Maximum maximize(const std::function<double(double)>& f, double a, double b, int grid) {
  if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b)) throw InvalidArgument("maximize needs a <= b, both finite");
  if (grid < 1) throw InvalidArgument("maximize needs grid >= 1");
  const double width = b - a;
  auto at = [&](int i) { return i == grid ? b : a + width * i / grid; };
  Maximum best{a, f(a)};
  int best_i = 0;
  for (int i = 1; i <= grid; ++i) {
    const double x = at(i);
    const double v = f(x);
    if (v > best.value) {
      best = {x, v};
      best_i = i;
    }
  }
  double lo = at(std::max(0, best_i - 1));
  double hi = at(std::min(grid, best_i + 1));
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(hi)); ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = f(x1);
    }
  }
  if (f1 > best.value) best = {x1, f1};
  if (f2 > best.value) best = {x2, f2};
  return best;
}

}  // namespace nkcert
