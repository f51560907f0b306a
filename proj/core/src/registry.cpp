#include "eithne/registry.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "eithne/error.hpp"

namespace eithne {

std::string_view to_string(VarKind kind) {
  switch (kind) {
    case VarKind::kIntScalar:
      return "INT_SCALAR";
    case VarKind::kFloatScalar:
      return "FLOAT_SCALAR";
    case VarKind::kIntArray:
      return "INT_ARRAY";
    case VarKind::kFloatArray:
      return "FLOAT_ARRAY";
  }
  return "UNKNOWN";
}

bool is_scalar(VarKind kind) { return kind == VarKind::kIntScalar || kind == VarKind::kFloatScalar; }

ElementType element_type_of(VarKind kind) {
  return (kind == VarKind::kIntScalar || kind == VarKind::kIntArray) ? ElementType::kInt32 : ElementType::kFloat32;
}

const VariableDescriptor& VariableTable::register_array(std::uint16_t var_id, std::string name, VarKind kind,
                                                        std::uint32_t length) {
  if (is_scalar(kind)) {
    throw RegistryError("register_array called with scalar kind " + std::string(to_string(kind)) + " for '" + name + "'");
  }
  if (length == 0) throw RegistryError("variable '" + name + "' registered with zero length");
  if (var_id == kScratchVarId) throw RegistryError("variable id 0xFFFF is reserved");
  if (contains(var_id)) throw RegistryError("duplicate variable id " + std::to_string(var_id) + " ('" + name + "')");

  if (element_type_of(kind) == ElementType::kInt32) {
    storage_.emplace_back(std::vector<std::int32_t>(length, 0));
  } else {
    storage_.emplace_back(std::vector<float>(length, 0.0f));
  }
  descriptors_.push_back({var_id, std::move(name), kind, length});
  return descriptors_.back();
}

const VariableDescriptor& VariableTable::register_scalar(std::uint16_t var_id, std::string name, VarKind kind) {
  if (!is_scalar(kind)) {
    throw RegistryError("register_scalar called with array kind " + std::string(to_string(kind)) + " for '" + name + "'");
  }
  if (var_id == kScratchVarId) throw RegistryError("variable id 0xFFFF is reserved");
  if (contains(var_id)) throw RegistryError("duplicate variable id " + std::to_string(var_id) + " ('" + name + "')");
  if (kind == VarKind::kIntScalar) {
    storage_.emplace_back(std::vector<std::int32_t>(1, 0));
  } else {
    storage_.emplace_back(std::vector<float>(1, 0.0f));
  }
  descriptors_.push_back({var_id, std::move(name), kind, 1});
  return descriptors_.back();
}

const VariableDescriptor& VariableTable::add(const VariableSpec& spec) {
  if (is_scalar(spec.kind)) {
    if (spec.length != 1) throw RegistryError("scalar '" + spec.name + "' must have length 1");
    return register_scalar(spec.var_id, spec.name, spec.kind);
  }
  return register_array(spec.var_id, spec.name, spec.kind, spec.length);
}

bool VariableTable::contains(std::uint16_t var_id) const {
  return std::any_of(descriptors_.begin(), descriptors_.end(), [&](const auto& d) { return d.var_id == var_id; });
}

std::size_t VariableTable::index_of(std::uint16_t var_id) const {
  for (std::size_t i = 0; i < descriptors_.size(); ++i) {
    if (descriptors_[i].var_id == var_id) return i;
  }
  throw RegistryError("unknown variable id " + std::to_string(var_id));
}

const VariableDescriptor& VariableTable::descriptor(std::uint16_t var_id) const {
  return descriptors_[index_of(var_id)];
}

std::size_t VariableTable::total_bytes() const {
  std::size_t total = 0;
  for (const auto& d : descriptors_) total += d.byte_size();
  return total;
}

std::span<std::int32_t> VariableTable::ints(std::uint16_t var_id) {
  auto* v = std::get_if<std::vector<std::int32_t>>(&storage_[index_of(var_id)]);
  if (!v) throw RegistryError("variable " + std::to_string(var_id) + " is not an integer variable");
  return *v;
}

std::span<const std::int32_t> VariableTable::ints(std::uint16_t var_id) const {
  const auto* v = std::get_if<std::vector<std::int32_t>>(&storage_[index_of(var_id)]);
  if (!v) throw RegistryError("variable " + std::to_string(var_id) + " is not an integer variable");
  return *v;
}

std::span<float> VariableTable::floats(std::uint16_t var_id) {
  auto* v = std::get_if<std::vector<float>>(&storage_[index_of(var_id)]);
  if (!v) throw RegistryError("variable " + std::to_string(var_id) + " is not a float variable");
  return *v;
}

std::span<const float> VariableTable::floats(std::uint16_t var_id) const {
  const auto* v = std::get_if<std::vector<float>>(&storage_[index_of(var_id)]);
  if (!v) throw RegistryError("variable " + std::to_string(var_id) + " is not a float variable");
  return *v;
}

VariableTable::Marshalled VariableTable::marshal(std::uint16_t var_id) const {
  const std::size_t i = index_of(var_id);
  const auto& d = descriptors_[i];
  Bytes payload = std::visit(
      [](const auto& values) -> Bytes {
        using T = typename std::decay_t<decltype(values)>::value_type;
        if constexpr (std::is_same_v<T, float>) {
          return pack_float32(values);
        } else {
          return pack_int32(values);
        }
      },
      storage_[i]);
  return {element_type_of(d.kind), d.length, std::move(payload)};
}

void VariableTable::unmarshal(std::uint16_t var_id, std::span<const std::uint8_t> payload) {
  const std::size_t i = index_of(var_id);
  const auto& d = descriptors_[i];
  if (payload.size() != d.byte_size()) {
    throw RegistryError("payload for '" + d.name + "' is " + std::to_string(payload.size()) + " bytes, expected " +
                        std::to_string(d.byte_size()));
  }
  std::visit(
      [&](auto& values) {
        for (std::size_t k = 0; k < values.size(); ++k) {
          const std::uint32_t word = get_u32(payload.data() + 4 * k);
          using T = typename std::decay_t<decltype(values)>::value_type;
          values[k] = std::bit_cast<T>(word);
        }
      },
      storage_[i]);
}

VariableTable make_table(std::span<const VariableSpec> specs) {
  VariableTable table;
  for (const auto& spec : specs) table.add(spec);
  return table;
}

bool structurally_equal(std::span<const VariableDescriptor> a, std::span<const VariableDescriptor> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](const auto& x, const auto& y) {
    return x.var_id == y.var_id && x.kind == y.kind && x.length == y.length;
  });
}

bool structurally_equal(const VariableTable& a, const VariableTable& b) {
  return structurally_equal(a.descriptors(), b.descriptors());
}

std::vector<std::int32_t> layout_words(std::span<const VariableDescriptor> descriptors) {
  std::vector<std::int32_t> words;
  words.reserve(descriptors.size() * 3);
  for (const auto& d : descriptors) {
    words.push_back(d.var_id);
    words.push_back(static_cast<std::int32_t>(d.kind));
    words.push_back(static_cast<std::int32_t>(d.length));
  }
  return words;
}

std::vector<VariableDescriptor> layout_from_words(std::span<const std::int32_t> words) {
  if (words.size() % 3 != 0) throw ProtocolError("table layout is not a multiple of 3 words");
  std::vector<VariableDescriptor> out;
  for (std::size_t i = 0; i < words.size(); i += 3) {
    if (words[i] < 0 || words[i] > 0xFFFF || words[i + 1] < 0 || words[i + 1] > 3) {
      throw ProtocolError("malformed table layout entry");
    }
    VariableDescriptor d;
    d.var_id = static_cast<std::uint16_t>(words[i]);
    d.kind = static_cast<VarKind>(words[i + 1]);
    d.length = static_cast<std::uint32_t>(words[i + 2]);
    out.push_back(std::move(d));
  }
  return out;
}

std::size_t KernelProgram::variable_bytes() const {
  std::size_t total = 0;
  for (const auto& v : variables) total += v.byte_size();
  return total;
}

std::size_t KernelProgram::code_bytes() const {
  std::size_t total = 0;
  for (const auto& k : kernels) total += k.code_bytes;
  return total;
}

}  // namespace eithne
