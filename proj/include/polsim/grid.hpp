#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace polsim {

using cplx = std::complex<double>;

// Uniform node lattice along one axis: origin + i*step, i in [0, count).
struct Axis {
  double origin = 0.0;
  double step = 1.0;
  std::size_t count = 2;

  double coord(std::size_t i) const { return origin + step * static_cast<double>(i); }
  double last() const { return coord(count - 1); }

  // Axis spanning [lo, hi] with `count` nodes including both ends.
  static Axis spanning(double lo, double hi, std::size_t count);

  friend bool operator==(const Axis&, const Axis&) = default;
};

// Complex samples on the (x, z) lattice. Storage is z-major: z varies
// fastest, node (i, j) lives at i * nz + j.
class FieldGrid {
 public:
  FieldGrid() = default;
  FieldGrid(Axis x, Axis z);

  const Axis& x() const { return x_; }
  const Axis& z() const { return z_; }
  std::size_t nx() const { return x_.count; }
  std::size_t nz() const { return z_.count; }
  std::size_t size() const { return values_.size(); }

  std::size_t index(std::size_t i, std::size_t j) const { return i * z_.count + j; }
  cplx& at(std::size_t i, std::size_t j) { return values_[index(i, j)]; }
  const cplx& at(std::size_t i, std::size_t j) const { return values_[index(i, j)]; }

  std::span<cplx> column(std::size_t i) { return {values_.data() + i * z_.count, z_.count}; }
  std::span<const cplx> column(std::size_t i) const {
    return {values_.data() + i * z_.count, z_.count};
  }

  std::span<cplx> values() { return values_; }
  std::span<const cplx> values() const { return values_; }

  bool same_geometry(const FieldGrid& other) const {
    return x_ == other.x_ && z_ == other.z_;
  }

  void fill(cplx v);

  // Bilinear interpolation; throws Error(out_of_bounds) outside the box.
  cplx interpolate(double x, double z) const;

 private:
  Axis x_;
  Axis z_;
  std::vector<cplx> values_;
};

// sqrt(sum |v|^2 dx dz)
double l2_norm(const FieldGrid& grid);

// sum |v|^2 dx dz
double l2_norm_squared(const FieldGrid& grid);

}  // namespace polsim
