#include "gsr/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "gsr/errors.hpp"
#include "gsr/fft.hpp"
#include "gsr/kriging.hpp"
#include "gsr/sampler.hpp"
#include "gsr/synthetic.hpp"

namespace gsr::oracle {
namespace {

void require_cap(int height, int width, int max_pixels) {
  if (static_cast<long>(height) * width > max_pixels) {
    throw TooLarge("dense oracle limited to " + std::to_string(max_pixels) + " pixels, got " +
                   std::to_string(height) + "x" + std::to_string(width));
  }
}

void require_single_channel(const GridImage& img, const char* what) {
  if (img.channels() != 1) throw ChannelMismatch(std::string(what) + ": dense oracle is single-channel");
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

}  // namespace

Eigen::VectorXd vectorize(const GridImage& img) {
  require_single_channel(img, "vectorize");
  Eigen::VectorXd v(static_cast<Eigen::Index>(img.size()));
  for (std::size_t i = 0; i < img.size(); ++i) v[static_cast<Eigen::Index>(i)] = img.values()[i];
  return v;
}

GridImage unvectorize(const Eigen::VectorXd& v, int height, int width) {
  if (v.size() != static_cast<Eigen::Index>(height) * width) throw SizeMismatch("unvectorize: length mismatch");
  GridImage out(height, width);
  for (Eigen::Index i = 0; i < v.size(); ++i) out.values()[static_cast<std::size_t>(i)] = v[i];
  return out;
}

GridImage direct_conv2(const GridImage& x, const GridImage& y) {
  if (!x.same_shape(y)) throw SizeMismatch("direct_conv2: shape mismatch");
  const int m = x.height();
  const int n = x.width();
  GridImage out(m, n, x.channels());
  for (int c = 0; c < x.channels(); ++c)
    for (int a1 = 0; a1 < m; ++a1)
      for (int a2 = 0; a2 < n; ++a2) {
        double acc = 0.0;
        for (int b1 = 0; b1 < m; ++b1)
          for (int b2 = 0; b2 < n; ++b2) acc += x.at(a1 - b1, a2 - b2, c) * y(b1, b2, c);
        out(a1, a2, c) = acc;
      }
  return out;
}

DenseOperator dense_convolution_matrix(const GridImage& kernel, int max_pixels) {
  require_single_channel(kernel, "dense_convolution_matrix");
  const int m = kernel.height();
  const int n = kernel.width();
  require_cap(m, n, max_pixels);
  DenseOperator b{Eigen::MatrixXd(m * n, m * n)};
  for (int p1 = 0; p1 < m; ++p1)
    for (int p2 = 0; p2 < n; ++p2)
      for (int q1 = 0; q1 < m; ++q1)
        for (int q2 = 0; q2 < n; ++q2) b.entries(p1 * n + p2, q1 * n + q2) = kernel.at(p1 - q1, p2 - q2);
  return b;
}

DenseOperator dense_subsample_matrix(int height, int width, int r, int max_pixels) {
  require_divisible(height, width, r);
  require_cap(height, width, max_pixels);
  const int lm = height / r;
  const int ln = width / r;
  DenseOperator s{Eigen::MatrixXd::Zero(lm * ln, height * width)};
  for (int i = 0; i < lm; ++i)
    for (int j = 0; j < ln; ++j) s.entries(i * ln + j, (r * i) * width + r * j) = 1.0;
  return s;
}

DenseOperator dense_degrade_matrix(const DegradeOperator& op, int height, int width, int max_pixels) {
  require_divisible(height, width, op.r);
  require_cap(height, width, max_pixels);
  const int lm = height / op.r;
  const int ln = width / op.r;
  DenseOperator a{Eigen::MatrixXd::Zero(lm * ln, height * width)};
  for (int i = 0; i < lm; ++i)
    for (int j = 0; j < ln; ++j)
      for (int t1 = 0; t1 < op.support(); ++t1)
        for (int t2 = 0; t2 < op.support(); ++t2) {
          const int p1 = GridImage::wrap(static_cast<long>(op.r) * i + op.offsets[t1], height);
          const int p2 = GridImage::wrap(static_cast<long>(op.r) * j + op.offsets[t2], width);
          a.entries(i * ln + j, p1 * width + p2) += op.taps[t1] * op.taps[t2];
        }
  return a;
}

DenseOperator dense_covariance_matrix(const GridImage& kernel, int max_pixels) {
  const DenseOperator t = dense_convolution_matrix(kernel, max_pixels);
  Eigen::MatrixXd g = t.entries * t.entries.transpose();
  return DenseOperator{0.5 * (g + g.transpose())};
}

DenseOperator dense_solve_kriging(const DenseOperator& a, const DenseOperator& gamma, double cutoff) {
  if (a.cols() != gamma.rows() || gamma.rows() != gamma.cols()) {
    throw SizeMismatch("dense_solve_kriging: incompatible A and Gamma");
  }
  const Eigen::MatrixXd a_gamma = a.entries * gamma.entries;
  Eigen::MatrixXd k = a_gamma * a.entries.transpose();
  k = 0.5 * (k + k.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k);
  const Eigen::VectorXd& values = eig.eigenvalues();
  const double vmax = values.cwiseAbs().maxCoeff();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (std::abs(values[i]) > cutoff * vmax) inv[i] = 1.0 / values[i];
  const Eigen::MatrixXd& v = eig.eigenvectors();
  const Eigen::MatrixXd k_pinv = v * inv.asDiagonal() * v.transpose();
  return DenseOperator{k_pinv * a_gamma};
}

ConditionalCovariance conditional_covariance(const DenseOperator& a, const DenseOperator& gamma,
                                             const DenseOperator& lambda) {
  const Eigen::Index n = gamma.entries.rows();
  const Eigen::MatrixXd lt = lambda.entries.transpose();
  const Eigen::MatrixXd residual = Eigen::MatrixXd::Identity(n, n) - lt * a.entries;
  Eigen::MatrixXd cov = residual * gamma.entries * residual.transpose();
  cov = 0.5 * (cov + cov.transpose());
  const Eigen::MatrixXd literal =
      gamma.entries - lt * (a.entries * gamma.entries * a.entries.transpose()) * lambda.entries;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov, Eigen::EigenvaluesOnly);
  ConditionalCovariance out;
  out.formula_gap = (literal - cov).cwiseAbs().maxCoeff() / gamma.entries.cwiseAbs().maxCoeff();
  out.trace = cov.trace();
  out.min_eigenvalue = eig.eigenvalues().minCoeff();
  out.max_eigenvalue = eig.eigenvalues().maxCoeff();
  out.matrix = DenseOperator{std::move(cov)};
  return out;
}

double innovation_energy(const DenseOperator& a, const DenseOperator& gamma_innovation,
                         const DenseOperator& lambda) {
  const Eigen::Index n = gamma_innovation.entries.rows();
  const Eigen::MatrixXd residual =
      Eigen::MatrixXd::Identity(n, n) - lambda.entries.transpose() * a.entries;
  return (residual * gamma_innovation.entries * residual.transpose()).trace();
}

bool verify_lemma_convolution_subsampling(const GridImage& beta, int r, double tol, int max_pixels) {
  require_single_channel(beta, "verify_lemma_convolution_subsampling");
  const DenseOperator b = dense_convolution_matrix(beta, max_pixels);
  const DenseOperator s = dense_subsample_matrix(beta.height(), beta.width(), r, max_pixels);
  const Eigen::MatrixXd lhs = s.entries * b.entries * s.entries.transpose();
  const DenseOperator rhs = dense_convolution_matrix(subsample(beta, r), max_pixels);
  const double scale = std::max(1.0, max_abs(beta));
  return (lhs - rhs.entries).cwiseAbs().maxCoeff() <= tol * scale;
}

std::vector<CheckLine> run_certification(int size, int r, std::uint64_t seed) {
  std::vector<CheckLine> lines;
  auto add = [&](std::string name, double error, double tol) {
    lines.push_back({std::move(name), error <= tol, "error=" + fmt(error) + " tol=" + fmt(tol)});
  };

  const GridImage texture = synthetic_texture(size, size, 1, seed);
  const DegradeOperator op = build_downscale_kernel(r);
  const GridImage probe = draw_standard_noise(size, size, seed + 1);

  {
    const GridImage fast = conv2_periodic(texture, probe);
    const GridImage slow = direct_conv2(texture, probe);
    add("convolution theorem (FFT vs direct sum)", max_abs(fast - slow) / max_abs(slow), 1e-10);
  }
  const DenseOperator a = dense_degrade_matrix(op, size, size);
  {
    const Eigen::VectorXd dense = a.entries * vectorize(probe);
    const Eigen::VectorXd fast = vectorize(apply_degrade(op, probe));
    add("zoom-out operator A (fast vs dense)", (dense - fast).cwiseAbs().maxCoeff(), 1e-10);
    const GridImage y = draw_standard_noise(size / r, size / r, seed + 2);
    const double lhs = dot(apply_degrade(op, probe), y);
    const double rhs = dot(probe, apply_degrade_adjoint(op, y, size, size));
    add("adjoint identity <Au,y> = <u,A^T y>", std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)), 1e-10);
  }
  {
    bool ok = true;
    for (int trial = 0; trial < 5; ++trial)
      ok = ok && verify_lemma_convolution_subsampling(draw_standard_noise(size, size, seed + 10 + trial), r);
    lines.push_back({"S B S^T is the LR convolution by S beta", ok, "5 random kernels, tol=1e-10"});
  }

  SamplerOptions options;
  options.consistent_texton = true;
  const SRModel model = build_sr_model(texture, r, options);
  const DenseOperator gamma = dense_covariance_matrix(model.innovation_kernel());
  const DenseOperator lambda = dense_solve_kriging(a, gamma);
  {
    const KrigingPrecomputation pre = precompute_kernels(model.texton(), op);
    const Eigen::VectorXd col = (a.entries * gamma.entries * a.entries.transpose()).col(0);
    const Eigen::VectorXd fast = vectorize(pre.kappa);
    add("kappa = first column of A Gamma A^T", (col - fast).cwiseAbs().maxCoeff() / col.cwiseAbs().maxCoeff(), 1e-9);
  }
  {
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      const GridImage y = draw_standard_noise(size / r, size / r, seed + 100 + trial);
      const Eigen::VectorXd dense = lambda.entries.transpose() * vectorize(y);
      const Eigen::VectorXd fast = vectorize(apply_kriging(model.kernels(), y));
      worst = std::max(worst, (dense - fast).cwiseAbs().maxCoeff() / dense.cwiseAbs().maxCoeff());
    }
    add("Lambda^T y (fast vs dense minimum norm)", worst, 1e-7);
  }
  {
    const Eigen::MatrixXd ag = a.entries * gamma.entries;
    const Eigen::MatrixXd fast_lambda_t = [&] {
      const int lr = (size / r) * (size / r);
      Eigen::MatrixXd m(size * size, lr);
      for (int col = 0; col < lr; ++col) {
        GridImage e(size / r, size / r);
        e.values()[static_cast<std::size_t>(col)] = 1.0;
        m.col(col) = vectorize(apply_kriging(model.kernels(), e));
      }
      return m;
    }();
    const Eigen::MatrixXd lhs = ag * a.entries.transpose() * fast_lambda_t.transpose();
    add("A Gamma A^T Lambda = A Gamma (fast Lambda)", (lhs - ag).norm() / ag.norm(), 1e-7);

    double worst = 0.0;
    const int lm = size / r;
    for (int k = 0; k < r; ++k)
      for (int l = 0; l < r; ++l)
        for (int i = 0; i < lm; ++i)
          for (int j = 0; j < lm; ++j) {
            const Eigen::VectorXd base = lambda.entries.col(k * size + l);
            const Eigen::VectorXd col = lambda.entries.col((k + i * r) * size + l + j * r);
            const GridImage shifted = circular_shift(unvectorize(base, lm, lm), i, j);
            worst = std::max(worst, (col - vectorize(shifted)).cwiseAbs().maxCoeff());
          }
    add("Lambda block-circulant (column shifts)", worst / lambda.entries.cwiseAbs().maxCoeff(), 1e-7);
  }
  {
    const ConditionalCovariance cc = conditional_covariance(a, gamma, lambda);
    add("innovation covariance is PSD", std::max(0.0, -cc.min_eigenvalue) / cc.max_eigenvalue, 1e-8);
    add("Gamma - L A Gamma A^T L^T matches its factored form", cc.formula_gap, 1e-8);
  }
  return lines;
}

}  // namespace gsr::oracle
