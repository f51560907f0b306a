#pragma once

// Single-precision DFT and recursive radix-2 FFT. Neither transform
// normalises; callers scale the inverse by 1/n.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "eithne/registry.hpp"

namespace eithne::fourier {

struct Complex {
  float a = 0.0f;  ///< real
  float b = 0.0f;  ///< imaginary

  bool operator==(const Complex&) const = default;
};

inline constexpr float kPi = 3.14159265358979323846f;
inline constexpr int kDefaultLog2n = 8;

/// (cos theta, sin theta).
Complex comp_euler(float theta);
/// x <- x * y.
void comp_mul_self(Complex& x, const Complex& y);

/// Direct O(n^2) transform, sign -1 forward / +1 inverse.
std::vector<Complex> dft(std::span<const Complex> sig, bool inverse);

/// Decimation-in-time recursion over sig[0], sig[stride], ... into f[0..n).
/// n must be a power of two; throws InvalidArgument otherwise or when the
/// buffers are too short.
void fft(std::span<const Complex> sig, std::span<Complex> f, int stride, int n, bool inverse);
std::vector<Complex> fft(std::span<const Complex> sig, bool inverse);

/// Multiplies every sample by `factor`.
void scale(std::span<Complex> x, float factor);

bool is_power_of_two(std::size_t n);

/// Deterministic samples with both parts in [-1, 1), from mt19937(seed).
std::vector<Complex> make_test_signal(std::size_t n, std::uint32_t seed);

/// Complex values travel on the wire as interleaved re/im floats.
std::vector<float> interleave(std::span<const Complex> x);
std::vector<Complex> deinterleave(std::span<const float> x);

namespace var {
inline constexpr std::uint16_t kSig = 0;
inline constexpr std::uint16_t kF = 1;
inline constexpr std::uint16_t kStride = 2;
inline constexpr std::uint16_t kInv = 3;
inline constexpr std::uint16_t kLog2n = 4;
}  // namespace var

namespace kernel {
inline constexpr std::uint16_t kDft = 0;
inline constexpr std::uint16_t kFft = 1;
}  // namespace kernel

/// SIG and F hold 2^log2n interleaved complex samples; S, INV and LOG2N are INT32 scalars.
std::vector<VariableSpec> registrations(int log2n);

/// Kernel entry points over a table built from registrations().
void dft_wrapper(VariableTable& vars);
void fft_wrapper(VariableTable& vars);

/// Kernels DFT (0) and FFT (1).
KernelProgram make_program(int log2n = kDefaultLog2n, std::uint32_t code_bytes_per_kernel = 0);

}  // namespace eithne::fourier
