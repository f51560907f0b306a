#include "eithne/linpack.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eithne/error.hpp"

namespace eithne::linpack {

namespace {

std::size_t at(int i, int j, int lda) { return static_cast<std::size_t>(i) + static_cast<std::size_t>(j) * lda; }

void check_shape(int n, int lda, std::size_t storage) {
  if (n < 0 || lda < n) throw InvalidArgument("need 0 <= n <= lda");
  if (storage < static_cast<std::size_t>(n) * lda) throw InvalidArgument("matrix storage smaller than n * lda");
}

}  // namespace

Problem matgen(int n, int lda, std::uint32_t seed) {
  if (n < 1 || lda < n) throw InvalidArgument("matgen needs n >= 1 and lda >= n");
  std::uint32_t state = seed % 65536u;
  if (state == 0) state = kDefaultSeed;

  Problem p;
  p.a = Matrix(n, lda);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      state = (3125u * state) % 65536u;
      p.a(i, j) = static_cast<float>((static_cast<double>(state) - 32768.0) / 65536.0);
    }
  }
  p.x_true.assign(static_cast<std::size_t>(n), 1.0f);
  p.b.assign(static_cast<std::size_t>(n), 0.0f);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) p.b[static_cast<std::size_t>(i)] += p.a(i, j) * p.x_true[static_cast<std::size_t>(j)];
  }
  p.a_orig = p.a;
  p.b_orig = p.b;
  p.ipvt.assign(static_cast<std::size_t>(n), 0);
  return p;
}

std::size_t isamax(std::span<const float> x, std::size_t n, std::size_t stride) {
  if (n == 0) return 0;
  std::size_t best = 0;
  float best_abs = std::fabs(x[0]);
  for (std::size_t i = 1; i < n; ++i) {
    const float v = std::fabs(x[i * stride]);
    if (v > best_abs) {
      best = i;
      best_abs = v;
    }
  }
  return best;
}

void saxpy(std::size_t n, float a, std::span<const float> x, std::span<float> y) {
  if (n == 0 || a == 0.0f) return;
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void sscal(std::size_t n, float a, std::span<float> x) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

float sdot(std::size_t n, std::span<const float> x, std::span<const float> y) {
  float sum = 0.0f;
  for (std::size_t i = 0; i < n; ++i) sum += x[i] * y[i];
  return sum;
}

std::int32_t sgefa(std::span<float> a, int lda, int n, std::span<std::int32_t> ipvt) {
  check_shape(n, lda, a.size());
  if (ipvt.size() < static_cast<std::size_t>(n)) throw InvalidArgument("ipvt shorter than n");
  std::int32_t info = 0;

  for (int k = 0; k + 1 < n; ++k) {
    const std::size_t tail = static_cast<std::size_t>(n - k - 1);
    const int l = static_cast<int>(isamax(a.subspan(at(k, k, lda)), static_cast<std::size_t>(n - k))) + k;
    ipvt[static_cast<std::size_t>(k)] = l;

    if (a[at(l, k, lda)] == 0.0f) {
      info = k + 1;
      continue;
    }
    if (l != k) std::swap(a[at(l, k, lda)], a[at(k, k, lda)]);

    // Multipliers for column k, stored negated.
    const float t = -1.0f / a[at(k, k, lda)];
    sscal(tail, t, a.subspan(at(k + 1, k, lda), tail));

    for (int j = k + 1; j < n; ++j) {
      float pivot_row = a[at(l, j, lda)];
      if (l != k) {
        a[at(l, j, lda)] = a[at(k, j, lda)];
        a[at(k, j, lda)] = pivot_row;
      }
      saxpy(tail, pivot_row, a.subspan(at(k + 1, k, lda), tail), a.subspan(at(k + 1, j, lda), tail));
    }
  }
  if (n > 0) {
    ipvt[static_cast<std::size_t>(n - 1)] = n - 1;
    if (a[at(n - 1, n - 1, lda)] == 0.0f) info = n;
  }
  return info;
}

void sgesl(std::span<const float> a, int lda, int n, std::span<const std::int32_t> ipvt, std::span<float> b,
           std::int32_t job) {
  check_shape(n, lda, a.size());
  if (b.size() < static_cast<std::size_t>(n) || ipvt.size() < static_cast<std::size_t>(n)) {
    throw InvalidArgument("b or ipvt shorter than n");
  }

  if (job == 0) {
    // Forward elimination: solve L y = b.
    for (int k = 0; k + 1 < n; ++k) {
      const std::size_t tail = static_cast<std::size_t>(n - k - 1);
      const int l = ipvt[static_cast<std::size_t>(k)];
      const float t = b[static_cast<std::size_t>(l)];
      if (l != k) {
        b[static_cast<std::size_t>(l)] = b[static_cast<std::size_t>(k)];
        b[static_cast<std::size_t>(k)] = t;
      }
      saxpy(tail, t, a.subspan(at(k + 1, k, lda), tail), b.subspan(static_cast<std::size_t>(k + 1), tail));
    }
    // Back substitution: solve U x = y.
    for (int k = n - 1; k >= 0; --k) {
      b[static_cast<std::size_t>(k)] /= a[at(k, k, lda)];
      const float t = -b[static_cast<std::size_t>(k)];
      saxpy(static_cast<std::size_t>(k), t, a.subspan(at(0, k, lda)), b);
    }
    return;
  }

  // Solve trans(U) y = b.
  for (int k = 0; k < n; ++k) {
    const float t = sdot(static_cast<std::size_t>(k), a.subspan(at(0, k, lda)), b);
    b[static_cast<std::size_t>(k)] = (b[static_cast<std::size_t>(k)] - t) / a[at(k, k, lda)];
  }
  // Solve trans(L) x = y.
  for (int k = n - 2; k >= 0; --k) {
    const std::size_t tail = static_cast<std::size_t>(n - k - 1);
    b[static_cast<std::size_t>(k)] +=
        sdot(tail, a.subspan(at(k + 1, k, lda), tail), b.subspan(static_cast<std::size_t>(k + 1), tail));
    const int l = ipvt[static_cast<std::size_t>(k)];
    if (l != k) std::swap(b[static_cast<std::size_t>(l)], b[static_cast<std::size_t>(k)]);
  }
}

double ops(int n) {
  const double nn = static_cast<double>(n);
  return 2.0 * nn * nn * nn / 3.0 + 2.0 * nn * nn;
}

double mflops(double ops, double elapsed_s) {
  if (!(elapsed_s > 0.0)) throw InvalidArgument("MFLOPS needs a positive elapsed time");
  return ops / (elapsed_s * 1e6);
}

Residual residual_check(const Problem& problem, std::span<const float> x) {
  const Matrix& a = problem.a_orig;
  Residual r;
  for (int i = 0; i < a.n; ++i) {
    double row = 0.0;
    for (int j = 0; j < a.n; ++j) row += static_cast<double>(a(i, j)) * static_cast<double>(x[static_cast<std::size_t>(j)]);
    r.residual_norm = std::max(r.residual_norm, std::fabs(row - static_cast<double>(problem.b_orig[static_cast<std::size_t>(i)])));
    r.x_err_norm = std::max(r.x_err_norm, std::fabs(static_cast<double>(x[static_cast<std::size_t>(i)]) - 1.0));
  }
  return r;
}

void solve_in_place(Problem& problem) {
  problem.info = sgefa(problem.a.data, problem.a.lda, problem.a.n, problem.ipvt);
  if (problem.info == 0) sgesl(problem.a.data, problem.a.lda, problem.a.n, problem.ipvt, problem.b, problem.job);
}

std::vector<VariableSpec> registrations(int n, int lda) {
  if (n < 1 || lda < n) throw InvalidArgument("LINPACK needs n >= 1 and lda >= n");
  return {
      {var::kA, "A", VarKind::kFloatArray, static_cast<std::uint32_t>(n) * static_cast<std::uint32_t>(lda)},
      {var::kB, "B", VarKind::kFloatArray, static_cast<std::uint32_t>(n)},
      {var::kIpvt, "IPVT", VarKind::kIntArray, static_cast<std::uint32_t>(n)},
      {var::kJob, "JOB", VarKind::kIntScalar, 1},
      {var::kInfo, "INFO", VarKind::kIntScalar, 1},
  };
}

KernelProgram make_program(int n, int lda, std::uint32_t code_bytes_per_kernel) {
  KernelProgram program;
  program.name = "linpack";
  program.variables = registrations(n, lda);
  program.kernels.push_back({kernel::kSgefa, "sgefa",
                             [n, lda](VariableTable& vars) {
                               vars.set_int(var::kInfo, sgefa(vars.floats(var::kA), lda, n, vars.ints(var::kIpvt)));
                             },
                             code_bytes_per_kernel});
  program.kernels.push_back({kernel::kSgesl, "sgesl",
                             [n, lda](VariableTable& vars) {
                               sgesl(vars.floats(var::kA), lda, n, vars.ints(var::kIpvt), vars.floats(var::kB),
                                     vars.int_value(var::kJob));
                             },
                             code_bytes_per_kernel});
  return program;
}

}  // namespace eithne::linpack
