#include "gsr/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gsr/errors.hpp"

namespace gsr {

template <typename T>
Grid<T>::Grid(int height, int width, int channels, T fill)
    : height_(height), width_(width), channels_(channels) {
  if (height < 1 || width < 1 || channels < 1) {
    throw SizeMismatch("grid dimensions must be positive, got " + std::to_string(height) + "x" +
                       std::to_string(width) + "x" + std::to_string(channels));
  }
  data_.assign(static_cast<std::size_t>(channels) * plane_size(), fill);
}

template <typename T>
Grid<T> Grid<T>::channel(int c) const {
  Grid out(height_, width_, 1);
  auto src = plane(c);
  std::copy(src.begin(), src.end(), out.data_.begin());
  return out;
}

template <typename T>
void Grid<T>::set_channel(int c, const Grid& single) {
  if (single.height_ != height_ || single.width_ != width_ || single.channels_ != 1) {
    throw SizeMismatch("set_channel: plane shape mismatch");
  }
  std::copy(single.data_.begin(), single.data_.end(), plane(c).begin());
}

template <typename T>
Grid<T>& Grid<T>::operator+=(const Grid& other) {
  if (!same_shape(other)) throw SizeMismatch("grid addition: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

template <typename T>
Grid<T>& Grid<T>::operator-=(const Grid& other) {
  if (!same_shape(other)) throw SizeMismatch("grid subtraction: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

template <typename T>
Grid<T>& Grid<T>::operator*=(T s) {
  for (auto& v : data_) v *= s;
  return *this;
}

template class Grid<double>;
template class Grid<Complex>;

bool all_finite(const GridImage& img) {
  return std::all_of(img.values().begin(), img.values().end(),
                     [](double v) { return std::isfinite(v); });
}

double max_abs(const GridImage& img) {
  double m = 0.0;
  for (double v : img.values()) m = std::max(m, std::abs(v));
  return m;
}

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

double mean(std::span<const double> v) {
  return v.empty() ? 0.0 : sum(v) / static_cast<double>(v.size());
}

double dot(const GridImage& a, const GridImage& b) {
  if (!a.same_shape(b)) throw SizeMismatch("dot: shape mismatch");
  return std::inner_product(a.values().begin(), a.values().end(), b.values().begin(), 0.0);
}

double squared_norm(const GridImage& a) { return dot(a, a); }

GridImage delta(int height, int width, int a, int b) {
  GridImage out(height, width);
  out(GridImage::wrap(a, height), GridImage::wrap(b, width)) = 1.0;
  return out;
}

GridImage flip(const GridImage& img) {
  GridImage out(img.height(), img.width(), img.channels());
  const int m = img.height();
  const int n = img.width();
  for (int c = 0; c < img.channels(); ++c)
    for (int x1 = 0; x1 < m; ++x1)
      for (int x2 = 0; x2 < n; ++x2) out(x1, x2, c) = img((m - x1) % m, (n - x2) % n, c);
  return out;
}

GridImage circular_shift(const GridImage& img, long a, long b) {
  GridImage out(img.height(), img.width(), img.channels());
  for (int c = 0; c < img.channels(); ++c)
    for (int x1 = 0; x1 < img.height(); ++x1)
      for (int x2 = 0; x2 < img.width(); ++x2) out(x1, x2, c) = img.at(x1 - a, x2 - b, c);
  return out;
}

void require_divisible(int height, int width, int r) {
  if (r < 1) throw InvalidFactor("zoom factor must be >= 1, got " + std::to_string(r));
  if (height % r != 0 || width % r != 0) {
    throw NotDivisible("factor " + std::to_string(r) + " does not divide " +
                       std::to_string(height) + "x" + std::to_string(width));
  }
}

GridImage subsample(const GridImage& img, int r) {
  return gather_subgrid(img, SubgridIndex{0, 0, r});
}

GridImage upsample_zero(const GridImage& img, int r, int hr_height, int hr_width) {
  require_divisible(hr_height, hr_width, r);
  if (img.height() * r != hr_height || img.width() * r != hr_width) {
    throw SizeMismatch("upsample_zero: LR size does not match HR size / r");
  }
  GridImage out(hr_height, hr_width, img.channels());
  scatter_subgrid(out, img, SubgridIndex{0, 0, r});
  return out;
}

GridImage gather_subgrid(const GridImage& img, const SubgridIndex& s) {
  require_divisible(img.height(), img.width(), s.r);
  const int lm = img.height() / s.r;
  const int ln = img.width() / s.r;
  GridImage out(lm, ln, img.channels());
  for (int c = 0; c < img.channels(); ++c)
    for (int i = 0; i < lm; ++i)
      for (int j = 0; j < ln; ++j) out(i, j, c) = img(s.k + i * s.r, s.l + j * s.r, c);
  return out;
}

void scatter_subgrid(GridImage& hr, const GridImage& patch, const SubgridIndex& s) {
  require_divisible(hr.height(), hr.width(), s.r);
  const int lm = hr.height() / s.r;
  const int ln = hr.width() / s.r;
  if (patch.height() != lm || patch.width() != ln || patch.channels() != hr.channels()) {
    throw SizeMismatch("scatter_subgrid: patch must be (M/r)x(N/r) with matching channels");
  }
  if (s.k < 0 || s.k >= s.r || s.l < 0 || s.l >= s.r) {
    throw SizeMismatch("scatter_subgrid: subgrid offset outside [0, r)");
  }
  for (int c = 0; c < hr.channels(); ++c)
    for (int i = 0; i < lm; ++i)
      for (int j = 0; j < ln; ++j) hr(s.k + i * s.r, s.l + j * s.r, c) = patch(i, j, c);
}

}  // namespace gsr
