#pragma once

// Single-precision LINPACK: matrix generation, LU factorisation with partial
// pivoting (sgefa), triangular solve (sgesl) and the MFLOPS arithmetic.
//
// Matrices are column-major with leading dimension `lda`: element (i, j)
// lives at a[i + j * lda].

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "eithne/registry.hpp"

namespace eithne::linpack {

inline constexpr int kDefaultOrder = 20;
inline constexpr std::uint32_t kDefaultSeed = 1325;

struct Matrix {
  int n = 0;
  int lda = 0;
  std::vector<float> data;

  Matrix() = default;
  Matrix(int order, int leading_dim) : n(order), lda(leading_dim), data(static_cast<std::size_t>(order) * leading_dim) {}

  float& operator()(int i, int j) { return data[static_cast<std::size_t>(i) + static_cast<std::size_t>(j) * lda]; }
  float operator()(int i, int j) const { return data[static_cast<std::size_t>(i) + static_cast<std::size_t>(j) * lda]; }
};

struct Problem {
  Matrix a;
  Matrix a_orig;
  std::vector<float> b;       ///< right-hand side; overwritten with x by sgesl
  std::vector<float> b_orig;
  std::vector<float> x_true;  ///< all ones
  std::vector<std::int32_t> ipvt;
  std::int32_t job = 0;
  std::int32_t info = 0;
};

/// Fills A from the 16-bit multiplicative LCG x <- 3125 x mod 65536, mapped
/// to [-0.5, 0.5), and sets b = A * ones in single precision. A seed whose
/// residue mod 65536 is zero would generate a zero matrix and is replaced by
/// kDefaultSeed.
Problem matgen(int n, int lda, std::uint32_t seed = kDefaultSeed);

/// Index of the first element of maximal |x[i * stride]| among n; 0 when n == 0.
std::size_t isamax(std::span<const float> x, std::size_t n, std::size_t stride = 1);
/// y[i] += a * x[i] for i < n.
void saxpy(std::size_t n, float a, std::span<const float> x, std::span<float> y);
void sscal(std::size_t n, float a, std::span<float> x);
float sdot(std::size_t n, std::span<const float> x, std::span<const float> y);

/// LU-factorises the leading n x n block of `a` in place. Multipliers are
/// stored negated below the diagonal. Returns 0, or k + 1 when U(k, k) == 0.
std::int32_t sgefa(std::span<float> a, int lda, int n, std::span<std::int32_t> ipvt);

/// Solves A x = b (job == 0) or A^T x = b (job != 0) using sgefa's output;
/// `b` is overwritten with x.
void sgesl(std::span<const float> a, int lda, int n, std::span<const std::int32_t> ipvt, std::span<float> b,
           std::int32_t job);

/// 2 n^3 / 3 + 2 n^2.
double ops(int n);
/// ops / (t * 1e6); throws InvalidArgument when elapsed_s <= 0.
double mflops(double ops, double elapsed_s);

struct Residual {
  double residual_norm = 0;  ///< max |A_orig x - b_orig|
  double x_err_norm = 0;     ///< max |x - 1|
};

Residual residual_check(const Problem& problem, std::span<const float> x);

/// Runs sgefa then sgesl on the problem in-process; `b` ends up holding x.
void solve_in_place(Problem& problem);

namespace var {
inline constexpr std::uint16_t kA = 0;
inline constexpr std::uint16_t kB = 1;
inline constexpr std::uint16_t kIpvt = 2;
inline constexpr std::uint16_t kJob = 3;
inline constexpr std::uint16_t kInfo = 4;
}  // namespace var

namespace kernel {
inline constexpr std::uint16_t kSgefa = 0;
inline constexpr std::uint16_t kSgesl = 1;
}  // namespace kernel

std::vector<VariableSpec> registrations(int n, int lda);

/// Kernels SGEFA (0) and SGESL (1) over the registrations above.
KernelProgram make_program(int n = kDefaultOrder, int lda = kDefaultOrder, std::uint32_t code_bytes_per_kernel = 0);

}  // namespace eithne::linpack
