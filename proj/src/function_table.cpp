#include "varorder/function_table.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "varorder/error.hpp"

namespace varorder {

FunctionTable::FunctionTable(std::vector<TablePoint> points) : points_(std::move(points)) {
  for (const auto& p : points_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.value)) {
      throw InputError("function table: non-finite entry");
    }
  }
  std::sort(points_.begin(), points_.end(),
            [](const TablePoint& a, const TablePoint& b) { return a.x < b.x; });
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (points_[i].x == points_[i - 1].x) {
      std::ostringstream msg;
      msg << "function table: duplicate abscissa " << points_[i].x;
      throw InputError(msg.str());
    }
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (std::size_t j = i + 1; j < points_.size(); ++j) {
      const double slope = std::abs(points_[j].value - points_[i].value) /
                           (points_[j].x - points_[i].x);
      lipschitz_bound_ = std::max(lipschitz_bound_, slope);
    }
  }
}

FunctionTable FunctionTable::identity(const std::vector<double>& xs) {
  std::vector<TablePoint> pts;
  pts.reserve(xs.size());
  for (double x : xs) pts.push_back({x, x});
  return FunctionTable(std::move(pts));
}

FunctionTable FunctionTable::constant(const std::vector<double>& xs, double c) {
  std::vector<TablePoint> pts;
  pts.reserve(xs.size());
  for (double x : xs) pts.push_back({x, c});
  return FunctionTable(std::move(pts));
}

std::optional<double> FunctionTable::value_at(double x, double tol) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), x - tol,
                             [](const TablePoint& p, double v) { return p.x < v; });
  std::optional<double> best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (; it != points_.end() && it->x <= x + tol; ++it) {
    const double d = std::abs(it->x - x);
    if (d < best_dist) {
      best_dist = d;
      best = it->value;
    }
  }
  return best;
}

std::optional<std::pair<std::size_t, std::size_t>> FunctionTable::lipschitz_violation(
    double c, double tol) const {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (std::size_t j = i + 1; j < points_.size(); ++j) {
      const double lhs = std::abs(points_[j].value - points_[i].value);
      if (lhs > c * (points_[j].x - points_[i].x) + tol) return std::make_pair(i, j);
    }
  }
  return std::nullopt;
}

FunctionTable FunctionTable::compose_after(const FunctionTable& outer, double tol) const {
  std::vector<TablePoint> pts;
  pts.reserve(points_.size());
  for (const auto& p : points_) {
    auto v = outer.value_at(p.value, tol);
    if (!v) {
      std::ostringstream msg;
      msg << "function table: composition undefined at " << p.value;
      throw DomainError(msg.str());
    }
    pts.push_back({p.x, *v});
  }
  return FunctionTable(std::move(pts));
}

LipschitzExtension::LipschitzExtension(FunctionTable base, double constant)
    : base_(std::move(base)), constant_(constant) {
  if (base_.empty()) throw InputError("Lipschitz extension of an empty table");
  if (!(constant_ >= 0.0) || !std::isfinite(constant_)) {
    throw InputError("Lipschitz constant must be finite and non-negative");
  }
}

double LipschitzExtension::operator()(double x) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : base_.points()) {
    best = std::min(best, p.value + constant_ * std::abs(x - p.x));
  }
  return best;
}

LipschitzExtension mcshane_extend(const FunctionTable& f, double c, double tol) {
  if (auto bad = f.lipschitz_violation(c, tol)) {
    const auto& a = f.points()[bad->first];
    const auto& b = f.points()[bad->second];
    std::ostringstream msg;
    msg.precision(17);
    msg << "table is not " << c << "-Lipschitz: f(" << a.x << ")=" << a.value << ", f(" << b.x
        << ")=" << b.value;
    throw PreconditionError(msg.str());
  }
  return LipschitzExtension(f, c);
}

}  // namespace varorder
