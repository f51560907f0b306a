#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "eithne/wire.hpp"

namespace eithne {

/// Object ID the listener treats as a discard sink for bandwidth probes.
inline constexpr std::uint16_t kScratchVarId = 0xFFFF;

enum class VarKind : std::uint8_t { kIntScalar = 0, kFloatScalar = 1, kIntArray = 2, kFloatArray = 3 };

std::string_view to_string(VarKind kind);
bool is_scalar(VarKind kind);
ElementType element_type_of(VarKind kind);

struct VariableDescriptor {
  std::uint16_t var_id = 0;
  std::string name;
  VarKind kind = VarKind::kIntScalar;
  std::uint32_t length = 1;

  std::size_t byte_size() const { return std::size_t{length} * 4; }
};

/// One entry of a registration list: what both sides of a link declare.
using VariableSpec = VariableDescriptor;

/// Typed benchmark variables plus the storage that backs them.
///
/// Storage is zero-initialised on registration and owned by the table;
/// kernels reach it through ints()/floats().
class VariableTable {
 public:
  const VariableDescriptor& register_array(std::uint16_t var_id, std::string name, VarKind kind,
                                           std::uint32_t length);
  const VariableDescriptor& register_scalar(std::uint16_t var_id, std::string name, VarKind kind);
  /// Dispatches on the kind of `spec`.
  const VariableDescriptor& add(const VariableSpec& spec);

  bool contains(std::uint16_t var_id) const;
  const VariableDescriptor& descriptor(std::uint16_t var_id) const;
  std::span<const VariableDescriptor> descriptors() const { return descriptors_; }
  std::size_t size() const { return descriptors_.size(); }
  std::size_t total_bytes() const;

  std::span<std::int32_t> ints(std::uint16_t var_id);
  std::span<const std::int32_t> ints(std::uint16_t var_id) const;
  std::span<float> floats(std::uint16_t var_id);
  std::span<const float> floats(std::uint16_t var_id) const;

  std::int32_t int_value(std::uint16_t var_id) const { return ints(var_id)[0]; }
  void set_int(std::uint16_t var_id, std::int32_t v) { ints(var_id)[0] = v; }

  struct Marshalled {
    ElementType element_type;
    std::uint32_t count;
    Bytes payload;
  };

  /// Snapshot of the variable's storage as a little-endian wire payload.
  Marshalled marshal(std::uint16_t var_id) const;
  /// Overwrites storage from a payload of exactly byte_size() bytes.
  void unmarshal(std::uint16_t var_id, std::span<const std::uint8_t> payload);

 private:
  using Storage = std::variant<std::vector<std::int32_t>, std::vector<float>>;

  std::size_t index_of(std::uint16_t var_id) const;

  std::vector<VariableDescriptor> descriptors_;
  std::vector<Storage> storage_;
};

/// Builds a table from a registration list; throws RegistryError on bad entries.
VariableTable make_table(std::span<const VariableSpec> specs);

/// Same IDs, kinds and lengths in the same order. Names are not compared.
bool structurally_equal(std::span<const VariableDescriptor> a, std::span<const VariableDescriptor> b);
bool structurally_equal(const VariableTable& a, const VariableTable& b);

/// Table layout as a flat INT32 list: (var_id, kind, length) per descriptor.
std::vector<std::int32_t> layout_words(std::span<const VariableDescriptor> descriptors);
std::vector<VariableDescriptor> layout_from_words(std::span<const std::int32_t> words);

/// A launchable kernel. Kernels take no arguments of their own: every input
/// and output goes through the owning core's VariableTable.
struct KernelDescriptor {
  std::uint16_t kernel_id = 0;
  std::string name;
  std::function<void(VariableTable&)> entry;
  /// Nominal binary size charged against the core's scratchpad.
  std::uint32_t code_bytes = 0;
};

/// Everything downloaded to a core: variable registrations plus kernels in ID order.
struct KernelProgram {
  std::string name;
  std::vector<VariableSpec> variables;
  std::vector<KernelDescriptor> kernels;

  std::size_t variable_bytes() const;
  std::size_t code_bytes() const;
  std::size_t footprint_bytes() const { return variable_bytes() + code_bytes(); }
};

}  // namespace eithne
