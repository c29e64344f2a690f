#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace polsim {

using RealFn = std::function<double(double)>;

// Adaptive Simpson with Richardson correction; `tol` is absolute.
double adaptive_simpson(const RealFn& f, double a, double b, double tol,
                        int max_depth = 48);

// Running integral F(s) = int_{s_ref}^{s} f on a (possibly non-uniform)
// lattice. Between nodes F is evaluated by cubic Hermite interpolation using
// the integrand itself as the derivative, which keeps the interpolation
// error at O(h^4).
class CumulativeTable {
 public:
  CumulativeTable() = default;

  // `nodes` strictly increasing; `s_ref` must lie inside [front, back].
  CumulativeTable(const RealFn& f, std::vector<double> nodes, double s_ref, double tol);

  double operator()(double s) const;
  double lo() const { return nodes_.front(); }
  double hi() const { return nodes_.back(); }
  bool contains(double s) const;
  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> nodes_;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

}  // namespace polsim
