#pragma once

// Host-side benchmark flows. Each one moves the inputs, runs the timed
// kernels and pulls the outputs back, leaving verification to the caller.

#include <cstdint>
#include <vector>

#include "eithne/fourier.hpp"
#include "eithne/host.hpp"
#include "eithne/linpack.hpp"

namespace eithne {

struct LinpackOutcome {
  std::vector<float> lu;
  std::vector<std::int32_t> ipvt;
  std::int32_t info = 0;
  std::vector<float> x;  ///< empty when sgefa reported a zero pivot
  TimingRecord factor;
  TimingRecord solve;
};

/// send A, EXECUTE SGEFA, recv A/IPVT/INFO; then send B/JOB, EXECUTE SGESL, recv B.
LinpackOutcome run_linpack(HostSession& session, std::uint16_t core_id, const linpack::Problem& problem);

struct FourierOutcome {
  std::vector<fourier::Complex> spectrum;
  /// Inverse of `spectrum`, scaled by 1/n on the host.
  std::vector<fourier::Complex> roundtrip;
  TimingRecord forward;
  TimingRecord inverse;
};

/// Forward then inverse transform with kernel DFT or FFT. The signal length
/// must be 2^LOG2N for the session's registrations.
FourierOutcome run_fourier(HostSession& session, std::uint16_t core_id, std::uint16_t kernel_id,
                           const std::vector<fourier::Complex>& signal);

}  // namespace eithne
