#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace gsr {

using Complex = std::complex<double>;

// Dense multi-channel array on the torus Z/M x Z/N. Channels are stored as
// consecutive row-major planes. Index (x1, x2) is (row, column).
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int height, int width, int channels = 1, T fill = T{});

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return channels_; }
  std::size_t plane_size() const { return static_cast<std::size_t>(height_) * width_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  bool same_shape(const Grid& other) const {
    return height_ == other.height_ && width_ == other.width_ && channels_ == other.channels_;
  }

  // Unchecked access, coordinates must lie in [0,M)x[0,N).
  T& operator()(int x1, int x2, int c = 0) { return data_[offset(x1, x2, c)]; }
  const T& operator()(int x1, int x2, int c = 0) const { return data_[offset(x1, x2, c)]; }

  // Periodic access: any integer coordinates, wrapped modulo (M, N).
  const T& at(long x1, long x2, int c = 0) const {
    return data_[offset(wrap(x1, height_), wrap(x2, width_), c)];
  }

  std::span<T> plane(int c) { return {data_.data() + c * plane_size(), plane_size()}; }
  std::span<const T> plane(int c) const { return {data_.data() + c * plane_size(), plane_size()}; }

  std::vector<T>& values() { return data_; }
  const std::vector<T>& values() const { return data_; }

  Grid channel(int c) const;
  void set_channel(int c, const Grid& single);

  Grid& operator+=(const Grid& other);
  Grid& operator-=(const Grid& other);
  Grid& operator*=(T s);

  static int wrap(long v, int n) {
    long r = v % n;
    return static_cast<int>(r < 0 ? r + n : r);
  }

 private:
  std::size_t offset(int x1, int x2, int c) const {
    return c * plane_size() + static_cast<std::size_t>(x1) * width_ + x2;
  }

  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<T> data_;
};

template <typename T>
Grid<T> operator+(Grid<T> a, const Grid<T>& b) { return a += b; }
template <typename T>
Grid<T> operator-(Grid<T> a, const Grid<T>& b) { return a -= b; }
template <typename T>
Grid<T> operator*(T s, Grid<T> a) { return a *= s; }

/// Real image on the torus, values on the [0,255] scale for pictures.
using GridImage = Grid<double>;
/// Full complex 2-D DFT of a GridImage, same shape.
using SpectralImage = Grid<Complex>;

extern template class Grid<double>;
extern template class Grid<Complex>;

/// Subgrid {(k + i r, l + j r)} of the HR torus.
struct SubgridIndex {
  int k = 0;
  int l = 0;
  int r = 1;
};

bool all_finite(const GridImage& img);
double max_abs(const GridImage& img);
double sum(std::span<const double> v);
double mean(std::span<const double> v);
double dot(const GridImage& a, const GridImage& b);
double squared_norm(const GridImage& a);

/// Unit impulse at (a, b) on an M x N single-channel grid.
GridImage delta(int height, int width, int a = 0, int b = 0);

/// out(x) = in(-x mod (M, N)).
GridImage flip(const GridImage& img);

/// out(x) = in(x - (a, b)): circular translation by (a, b).
GridImage circular_shift(const GridImage& img, long a, long b);

/// out(x) = in(r x). Throws NotDivisible unless r divides M and N.
GridImage subsample(const GridImage& img, int r);

/// Zero-insertion upsampling, adjoint of subsample: out(r x) = in(x), zero elsewhere.
GridImage upsample_zero(const GridImage& img, int r, int hr_height, int hr_width);

/// Reads in(k + i r, l + j r) into an (M/r) x (N/r) patch.
GridImage gather_subgrid(const GridImage& img, const SubgridIndex& s);

/// Writes the patch back onto the subgrid positions of hr.
void scatter_subgrid(GridImage& hr, const GridImage& patch, const SubgridIndex& s);

/// Throws NotDivisible unless r >= 1 divides both dimensions.
void require_divisible(int height, int width, int r);

}  // namespace gsr
