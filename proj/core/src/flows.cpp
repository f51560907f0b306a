#include "eithne/flows.hpp"

#include <algorithm>
#include <string>

#include "eithne/error.hpp"

namespace eithne {

LinpackOutcome run_linpack(HostSession& session, std::uint16_t core_id, const linpack::Problem& problem) {
  namespace lv = linpack::var;
  VariableTable& vars = session.variables();
  auto a = vars.floats(lv::kA);
  auto b = vars.floats(lv::kB);
  if (a.size() != problem.a.data.size() || b.size() != problem.b.size()) {
    throw InvalidArgument("LINPACK problem does not match the session registrations");
  }
  std::copy(problem.a.data.begin(), problem.a.data.end(), a.begin());
  std::copy(problem.b.begin(), problem.b.end(), b.begin());
  vars.set_int(lv::kJob, problem.job);

  LinpackOutcome out;
  session.send_var(core_id, lv::kA);
  session.sync(core_id);
  out.factor = session.execute_kernel(core_id, linpack::kernel::kSgefa);
  session.recv_var(core_id, lv::kA);
  session.recv_var(core_id, lv::kIpvt);
  session.recv_var(core_id, lv::kInfo);
  out.lu.assign(a.begin(), a.end());
  const auto ipvt = vars.ints(lv::kIpvt);
  out.ipvt.assign(ipvt.begin(), ipvt.end());
  out.info = vars.int_value(lv::kInfo);
  if (out.info != 0) return out;

  session.send_var(core_id, lv::kB);
  session.send_var(core_id, lv::kJob);
  session.sync(core_id);
  out.solve = session.execute_kernel(core_id, linpack::kernel::kSgesl);
  session.recv_var(core_id, lv::kB);
  out.x.assign(b.begin(), b.end());
  return out;
}

FourierOutcome run_fourier(HostSession& session, std::uint16_t core_id, std::uint16_t kernel_id,
                           const std::vector<fourier::Complex>& signal) {
  namespace fv = fourier::var;
  VariableTable& vars = session.variables();
  auto sig = vars.floats(fv::kSig);
  if (sig.size() != 2 * signal.size()) {
    throw InvalidArgument("signal of " + std::to_string(signal.size()) + " points does not match the registered " +
                          std::to_string(sig.size() / 2));
  }
  int log2n = 0;
  while ((std::size_t{1} << log2n) < signal.size()) ++log2n;

  const auto samples = fourier::interleave(signal);
  std::copy(samples.begin(), samples.end(), sig.begin());
  vars.set_int(fv::kStride, 1);
  vars.set_int(fv::kInv, 0);
  vars.set_int(fv::kLog2n, log2n);

  FourierOutcome out;
  for (const auto id : {fv::kSig, fv::kStride, fv::kInv, fv::kLog2n}) session.send_var(core_id, id);
  session.sync(core_id);
  out.forward = session.execute_kernel(core_id, kernel_id);
  session.recv_var(core_id, fv::kF);
  out.spectrum = fourier::deinterleave(vars.floats(fv::kF));

  const auto f = vars.floats(fv::kF);
  std::copy(f.begin(), f.end(), sig.begin());
  vars.set_int(fv::kInv, 1);
  session.send_var(core_id, fv::kSig);
  session.send_var(core_id, fv::kInv);
  session.sync(core_id);
  out.inverse = session.execute_kernel(core_id, kernel_id);
  session.recv_var(core_id, fv::kF);
  out.roundtrip = fourier::deinterleave(vars.floats(fv::kF));
  fourier::scale(out.roundtrip, 1.0f / static_cast<float>(signal.size()));
  return out;
}

}  // namespace eithne
