#include "eithne/fourier.hpp"

#include <cmath>
#include <random>
#include <string>

#include "eithne/error.hpp"

namespace eithne::fourier {

namespace {

void fft_recursive(const Complex* sig, Complex* f, int s, int n, bool inv) {
  const int hn = n >> 1;
  if (!hn) {
    *f = *sig;
    return;
  }
  const Complex ep = comp_euler((inv ? kPi : -kPi) / static_cast<float>(hn));
  fft_recursive(sig, f, s << 1, hn, inv);
  fft_recursive(sig + s, f + hn, s << 1, hn, inv);
  Complex twiddle{1.0f, 0.0f};
  for (int i = 0; i < hn; ++i) {
    const Complex even = f[i];
    Complex* pe = f + i;
    Complex* po = pe + hn;
    comp_mul_self(*po, twiddle);
    pe->a += po->a;
    pe->b += po->b;
    po->a = even.a - po->a;
    po->b = even.b - po->b;
    comp_mul_self(twiddle, ep);
  }
}

int checked_log2n(std::int32_t log2n, std::size_t capacity_complex) {
  if (log2n < 0 || log2n > 24 || (std::size_t{1} << log2n) > capacity_complex) {
    throw InvalidArgument("LOG2N " + std::to_string(log2n) + " does not fit the registered signal");
  }
  return log2n;
}

}  // namespace

Complex comp_euler(float theta) { return {std::cos(theta), std::sin(theta)}; }

void comp_mul_self(Complex& x, const Complex& y) {
  const float a = x.a * y.a - x.b * y.b;
  const float b = x.a * y.b + x.b * y.a;
  x.a = a;
  x.b = b;
}

std::vector<Complex> dft(std::span<const Complex> sig, bool inverse) {
  const std::size_t n = sig.size();
  std::vector<Complex> out(n);
  const float sign = inverse ? 1.0f : -1.0f;
  for (std::size_t k = 0; k < n; ++k) {
    Complex sum;
    for (std::size_t j = 0; j < n; ++j) {
      // Reduce j*k mod n so the angle keeps full single precision.
      const std::size_t r = (j * k) % n;
      Complex term = sig[j];
      comp_mul_self(term, comp_euler(sign * 2.0f * kPi * static_cast<float>(r) / static_cast<float>(n)));
      sum.a += term.a;
      sum.b += term.b;
    }
    out[k] = sum;
  }
  return out;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft(std::span<const Complex> sig, std::span<Complex> f, int stride, int n, bool inverse) {
  if (n < 1 || !is_power_of_two(static_cast<std::size_t>(n))) {
    throw InvalidArgument("FFT length " + std::to_string(n) + " is not a power of two");
  }
  if (stride < 1) throw InvalidArgument("FFT stride must be positive");
  const std::size_t span_needed = static_cast<std::size_t>(n - 1) * static_cast<std::size_t>(stride) + 1;
  if (sig.size() < span_needed || f.size() < static_cast<std::size_t>(n)) {
    throw InvalidArgument("FFT buffers too short for n=" + std::to_string(n));
  }
  if (sig.data() < f.data() + f.size() && f.data() < sig.data() + sig.size()) {
    throw InvalidArgument("FFT input and output must not overlap");
  }
  fft_recursive(sig.data(), f.data(), stride, n, inverse);
}

std::vector<Complex> fft(std::span<const Complex> sig, bool inverse) {
  std::vector<Complex> out(sig.size());
  fft(sig, out, 1, static_cast<int>(sig.size()), inverse);
  return out;
}

void scale(std::span<Complex> x, float factor) {
  for (auto& c : x) {
    c.a *= factor;
    c.b *= factor;
  }
}

std::vector<Complex> make_test_signal(std::size_t n, std::uint32_t seed) {
  std::mt19937 gen(seed);
  // Top 24 bits give exactly representable floats in [0, 1).
  auto unit = [&gen] { return static_cast<float>(gen() >> 8) * (1.0f / 16777216.0f) * 2.0f - 1.0f; };
  std::vector<Complex> out(n);
  for (auto& c : out) {
    c.a = unit();
    c.b = unit();
  }
  return out;
}

std::vector<float> interleave(std::span<const Complex> x) {
  std::vector<float> out(x.size() * 2);
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[2 * i] = x[i].a;
    out[2 * i + 1] = x[i].b;
  }
  return out;
}

std::vector<Complex> deinterleave(std::span<const float> x) {
  std::vector<Complex> out(x.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {x[2 * i], x[2 * i + 1]};
  return out;
}

std::vector<VariableSpec> registrations(int log2n) {
  if (log2n < 0 || log2n > 24) throw InvalidArgument("log2n must be in [0, 24]");
  const std::uint32_t floats = 2u << log2n;
  return {
      {var::kSig, "SIG", VarKind::kFloatArray, floats},
      {var::kF, "F", VarKind::kFloatArray, floats},
      {var::kStride, "S", VarKind::kIntScalar, 1},
      {var::kInv, "INV", VarKind::kIntScalar, 1},
      {var::kLog2n, "LOG2N", VarKind::kIntScalar, 1},
  };
}

void dft_wrapper(VariableTable& vars) {
  const auto sig_floats = vars.floats(var::kSig);
  const int log2n = checked_log2n(vars.int_value(var::kLog2n), sig_floats.size() / 2);
  const std::size_t n = std::size_t{1} << log2n;
  const auto sig = deinterleave(sig_floats.first(2 * n));
  const auto out = dft(sig, vars.int_value(var::kInv) != 0);
  auto f = vars.floats(var::kF);
  for (std::size_t i = 0; i < n; ++i) {
    f[2 * i] = out[i].a;
    f[2 * i + 1] = out[i].b;
  }
}

void fft_wrapper(VariableTable& vars) {
  const auto sig_floats = vars.floats(var::kSig);
  const int log2n = checked_log2n(vars.int_value(var::kLog2n), sig_floats.size() / 2);
  const int n = 1 << log2n;
  const auto sig = deinterleave(sig_floats);
  std::vector<Complex> out(static_cast<std::size_t>(n));
  fft(sig, out, vars.int_value(var::kStride), n, vars.int_value(var::kInv) != 0);
  auto f = vars.floats(var::kF);
  for (std::size_t i = 0; i < out.size(); ++i) {
    f[2 * i] = out[i].a;
    f[2 * i + 1] = out[i].b;
  }
}

KernelProgram make_program(int log2n, std::uint32_t code_bytes_per_kernel) {
  KernelProgram program;
  program.name = "fourier";
  program.variables = registrations(log2n);
  program.kernels.push_back({kernel::kDft, "dft", dft_wrapper, code_bytes_per_kernel});
  program.kernels.push_back({kernel::kFft, "fft", fft_wrapper, code_bytes_per_kernel});
  return program;
}

}  // namespace eithne::fourier
