#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace varorder {

struct TablePoint {
  double x = 0.0;
  double value = 0.0;
};

/// A real function on a finite set of abscissae, kept sorted by x.
/// The stored Lipschitz bound is the smallest c with |f(s)-f(t)| <= c|s-t|.
class FunctionTable {
 public:
  FunctionTable() = default;
  /// Points may arrive in any order; duplicate or non-finite abscissae throw.
  explicit FunctionTable(std::vector<TablePoint> points);

  static FunctionTable identity(const std::vector<double>& xs);
  static FunctionTable constant(const std::vector<double>& xs, double c);

  const std::vector<TablePoint>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  double lipschitz_bound() const noexcept { return lipschitz_bound_; }

  /// Value at the point within `tol` of x, if any.
  std::optional<double> value_at(double x, double tol) const;

  /// First pair (by index) violating |f(s)-f(t)| <= c|s-t| + tol.
  std::optional<std::pair<std::size_t, std::size_t>> lipschitz_violation(double c,
                                                                         double tol) const;

  /// Pointwise composition outer(this(x)); every value must lie in outer's domain.
  FunctionTable compose_after(const FunctionTable& outer, double tol) const;

 private:
  std::vector<TablePoint> points_;
  double lipschitz_bound_ = 0.0;
};

enum class ExtensionKind { McShaneUpper };

/// Globally c-Lipschitz extension x -> min_i f(x_i) + c|x - x_i|.
/// Negate the table, extend, and negate again for the Whitney (lower) variant.
class LipschitzExtension {
 public:
  LipschitzExtension(FunctionTable base, double constant);

  double operator()(double x) const;

  const FunctionTable& base() const noexcept { return base_; }
  double constant() const noexcept { return constant_; }
  ExtensionKind kind() const noexcept { return ExtensionKind::McShaneUpper; }

 private:
  FunctionTable base_;
  double constant_;
};

inline constexpr double kDefaultLipschitzTol = 1e-9;

/// Throws PreconditionError naming the offending pair when f is not c-Lipschitz.
LipschitzExtension mcshane_extend(const FunctionTable& f, double c,
                                  double tol = kDefaultLipschitzTol);

}  // namespace varorder
