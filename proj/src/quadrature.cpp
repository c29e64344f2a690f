#include "polsim/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "polsim/error.hpp"

namespace polsim {

namespace {

struct Panel {
  double a, m, b;
  double fa, fm, fb;
  double whole;
};

double simpson(double h, double fa, double fm, double fb) {
  return (fa + 4.0 * fm + fb) * h / 6.0;
}

double refine(const RealFn& f, const Panel& p, double tol, int depth) {
  const double lm = 0.5 * (p.a + p.m);
  const double rm = 0.5 * (p.m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(p.m - p.a, p.fa, flm, p.fm);
  const double right = simpson(p.b - p.m, p.fm, frm, p.fb);
  const double delta = left + right - p.whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return refine(f, {p.a, lm, p.m, p.fa, flm, p.fm, left}, 0.5 * tol, depth - 1) +
         refine(f, {p.m, rm, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const RealFn& f, double a, double b, double tol, int max_depth) {
  if (a == b) return 0.0;
  if (b < a) return -adaptive_simpson(f, b, a, tol, max_depth);
  // Start from four panels so a narrow feature cannot hide between the
  // three initial samples.
  constexpr int kStart = 4;
  const double h = (b - a) / kStart;
  double total = 0.0;
  for (int k = 0; k < kStart; ++k) {
    const double lo = a + h * k;
    const double hi = k + 1 == kStart ? b : a + h * (k + 1);
    const double mid = 0.5 * (lo + hi);
    const double flo = f(lo), fmid = f(mid), fhi = f(hi);
    const Panel p{lo, mid, hi, flo, fmid, fhi, simpson(hi - lo, flo, fmid, fhi)};
    total += refine(f, p, tol / kStart, max_depth);
  }
  return total;
}

CumulativeTable::CumulativeTable(const RealFn& f, std::vector<double> nodes, double s_ref,
                                 double tol)
    : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) {
    throw Error(ErrorCode::invalid_argument, "cumulative table needs at least two nodes");
  }
  for (std::size_t k = 1; k < nodes_.size(); ++k) {
    if (!(nodes_[k] > nodes_[k - 1])) {
      throw Error(ErrorCode::invalid_argument, "cumulative table nodes must increase");
    }
  }
  if (!(s_ref >= nodes_.front() && s_ref <= nodes_.back())) {
    throw Error(ErrorCode::invalid_argument,
                fmt::format("reference point {} outside table [{}, {}]", s_ref,
                            nodes_.front(), nodes_.back()));
  }
  const std::size_t n = nodes_.size();
  // Per-panel budget so the accumulated error stays below `tol`.
  const double panel_tol = tol / static_cast<double>(n);

  std::vector<double> running(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    running[k] = running[k - 1] + adaptive_simpson(f, nodes_[k - 1], nodes_[k], panel_tol);
  }
  slopes_.resize(n);
  for (std::size_t k = 0; k < n; ++k) slopes_[k] = f(nodes_[k]);

  // Shift so the integral vanishes at s_ref.
  values_ = std::move(running);
  const double offset = (*this)(s_ref);
  for (double& v : values_) v -= offset;
}

bool CumulativeTable::contains(double s) const {
  const double span = nodes_.back() - nodes_.front();
  const double eps = 1e-12 * std::max(1.0, span);
  return s >= nodes_.front() - eps && s <= nodes_.back() + eps;
}

double CumulativeTable::operator()(double s) const {
  if (!contains(s)) {
    throw Error(ErrorCode::out_of_bounds,
                fmt::format("query {} outside tabulated range [{}, {}]", s, nodes_.front(),
                            nodes_.back()));
  }
  s = std::clamp(s, nodes_.front(), nodes_.back());
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), s);
  std::size_t k = it == nodes_.begin() ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
  if (k >= nodes_.size() - 1) k = nodes_.size() - 2;
  const double h = nodes_[k + 1] - nodes_[k];
  const double t = (s - nodes_[k]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * values_[k] + h10 * h * slopes_[k] + h01 * values_[k + 1] +
         h11 * h * slopes_[k + 1];
}

}  // namespace polsim
