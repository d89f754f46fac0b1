#pragma once

#include <span>

#include "gsr/grid.hpp"

namespace gsr {

/// Unnormalized forward DFT, per channel:
///   X^(x) = sum_y X(y) exp(-2i pi x1 y1 / M) exp(-2i pi x2 y2 / N).
SpectralImage dft2(const GridImage& img);

/// Inverse DFT with the 1/MN factor. Throws NonHermitianSpectrum when the result
/// carries an imaginary residual above 1e-8 times the spectrum magnitude.
GridImage idft2(const SpectralImage& spec);

/// Periodic convolution (X * Y)(x) = sum_y X(x - y) Y(y), computed spectrally.
/// A single-channel y is broadcast over the channels of x.
GridImage conv2_periodic(const GridImage& x, const GridImage& y);

/// Periodic correlation sum_y X(y - x) Y(y) = (flip(X) * Y)(x).
GridImage corr2_periodic(const GridImage& x, const GridImage& y);

namespace fft {

// In-place transforms on one row-major M x N complex plane. Plans are cached per
// shape; execution is safe from several threads.
void forward(std::span<Complex> plane, int height, int width);
void inverse_unnormalized(std::span<Complex> plane, int height, int width);

/// Spectrum of one real plane.
void forward_real(std::span<const double> in, std::span<Complex> out, int height, int width);

/// Real part of the normalized inverse of one plane; returns the largest |imag|.
double inverse_to_real(std::span<Complex> work, std::span<double> out, int height, int width);

/// As inverse_to_real, throwing NonHermitianSpectrum when the imaginary residual
/// exceeds 1e-8 of the spectrum's L1 norm / MN (a bound on every output value).
void inverse_checked(std::span<Complex> work, std::span<double> out, int height, int width);

}  // namespace fft

}  // namespace gsr
