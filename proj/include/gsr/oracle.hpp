#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "gsr/adsn.hpp"
#include "gsr/degrade.hpp"
#include "gsr/grid.hpp"

// Dense brute-force counterparts of the FFT fast path. Images are vectorized
// row-major: pixel (x1, x2) of an M x N grid is entry x1 * N + x2. Everything
// here is single-channel and meant for small instances only.
namespace gsr::oracle {

inline constexpr int kDefaultMaxPixels = 4096;
inline constexpr double kDefaultCutoff = 1e-10;

struct DenseOperator {
  Eigen::MatrixXd entries;
  int rows() const { return static_cast<int>(entries.rows()); }
  int cols() const { return static_cast<int>(entries.cols()); }
};

Eigen::VectorXd vectorize(const GridImage& img);
GridImage unvectorize(const Eigen::VectorXd& v, int height, int width);

/// O(M^2 N^2) double sum (X * Y)(x) = sum_y X(x - y) Y(y).
GridImage direct_conv2(const GridImage& x, const GridImage& y);

/// Matrix of the periodic convolution by kernel: B[p, q] = kernel(p - q).
DenseOperator dense_convolution_matrix(const GridImage& kernel, int max_pixels = kDefaultMaxPixels);

/// Stride-r subsampling S as an (MN/r^2) x MN selection matrix.
DenseOperator dense_subsample_matrix(int height, int width, int r,
                                     int max_pixels = kDefaultMaxPixels);

/// A = S C assembled tap by tap.
DenseOperator dense_degrade_matrix(const DegradeOperator& op, int height, int width,
                                   int max_pixels = kDefaultMaxPixels);

/// Gamma = T T^T with T the convolution by kernel (the texton t, or per(t)).
DenseOperator dense_covariance_matrix(const GridImage& kernel, int max_pixels = kDefaultMaxPixels);

/// Minimum-norm least-squares solution of A Gamma A^T Lambda = A Gamma through the
/// eigendecomposition of the symmetric PSD matrix A Gamma A^T; eigenvalues at or
/// below cutoff * max are treated as zero. Lambda is LR x HR, Lambda^T maps LR to HR.
DenseOperator dense_solve_kriging(const DenseOperator& a, const DenseOperator& gamma,
                                  double cutoff = kDefaultCutoff);

// Gamma - Lambda^T A Gamma A^T Lambda, assembled in the factored form
// (I - Lambda^T A) Gamma (I - Lambda^T A)^T, which is the same matrix when Lambda
// solves A Gamma A^T Lambda = A Gamma and keeps its eigenvalues accurate near 0.
// formula_gap measures how far the unfactored expression is from it.
struct ConditionalCovariance {
  DenseOperator matrix;
  double formula_gap = 0.0;  // max |unfactored - factored| / max |Gamma|
  double trace = 0.0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

ConditionalCovariance conditional_covariance(const DenseOperator& a, const DenseOperator& gamma,
                                             const DenseOperator& lambda);

/// Tr((I - Lambda^T A) Gamma_inn (I - Lambda^T A)^T): expected squared norm of the
/// innovation X~ - Lambda^T A X~ for X~ ~ N(0, Gamma_inn).
double innovation_energy(const DenseOperator& a, const DenseOperator& gamma_innovation,
                         const DenseOperator& lambda);

/// S B S^T against the LR convolution by S beta; true iff they agree within
/// tol * max(1, max|beta|).
bool verify_lemma_convolution_subsampling(const GridImage& beta, int r, double tol = 1e-10,
                                          int max_pixels = kDefaultMaxPixels);

struct CheckLine {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Small-instance certification of the fast path on a random texture.
std::vector<CheckLine> run_certification(int size, int r, std::uint64_t seed);

}  // namespace gsr::oracle
