#include <gtest/gtest.h>

#include <bit>
#include <random>

#include "eithne/error.hpp"
#include "eithne/linpack.hpp"
#include "eithne/registry.hpp"

namespace eithne {
namespace {

TEST(Registry, LinpackShapes) {
  VariableTable t;
  EXPECT_EQ(t.register_array(0, "A", VarKind::kFloatArray, 400).byte_size(), 1600u);
  EXPECT_EQ(t.register_array(2, "IPVT", VarKind::kIntArray, 20).byte_size(), 80u);
  const auto& job = t.register_scalar(3, "JOB", VarKind::kIntScalar);
  EXPECT_EQ(job.length, 1u);
  EXPECT_EQ(t.register_scalar(5, "X", VarKind::kFloatScalar).byte_size(), 4u);
  EXPECT_EQ(t.total_bytes(), 1600u + 80u + 4u + 4u);
}

TEST(Registry, RegistrationErrors) {
  VariableTable t;
  t.register_array(1, "B", VarKind::kFloatArray, 4);
  EXPECT_THROW(t.register_array(1, "dup", VarKind::kIntArray, 4), RegistryError);
  EXPECT_THROW(t.register_array(2, "empty", VarKind::kIntArray, 0), RegistryError);
  EXPECT_THROW(t.register_scalar(3, "arr", VarKind::kFloatArray), RegistryError);
  EXPECT_THROW(t.register_array(4, "scalar", VarKind::kIntScalar, 3), RegistryError);
  EXPECT_THROW(t.register_scalar(kScratchVarId, "sink", VarKind::kIntScalar), RegistryError);
  EXPECT_EQ(t.size(), 1u);
}

TEST(Registry, StorageStartsZeroed) {
  VariableTable t;
  t.register_array(0, "v", VarKind::kFloatArray, 16);
  for (const float f : t.floats(0)) EXPECT_EQ(f, 0.0f);
}

TEST(Registry, MarshalGoldenBytes) {
  VariableTable t;
  t.register_scalar(0, "i", VarKind::kIntScalar);
  t.register_array(1, "f", VarKind::kFloatArray, 2);
  t.set_int(0, 7);
  t.floats(1)[0] = 1.0f;
  t.floats(1)[1] = -2.0f;

  const auto i = t.marshal(0);
  EXPECT_EQ(i.element_type, ElementType::kInt32);
  EXPECT_EQ(i.count, 1u);
  EXPECT_EQ(i.payload, (Bytes{0x07, 0x00, 0x00, 0x00}));

  const auto f = t.marshal(1);
  EXPECT_EQ(f.element_type, ElementType::kFloat32);
  EXPECT_EQ(f.payload, (Bytes{0x00, 0x00, 0x80, 0x3F, 0x00, 0x00, 0x00, 0xC0}));
}

TEST(Registry, MarshalRoundTripIsBitExact) {
  std::mt19937 rng(99);
  for (int round = 0; round < 200; ++round) {
    VariableTable src;
    VariableTable dst;
    const auto kind = static_cast<VarKind>(rng() % 4);
    const std::uint32_t length = is_scalar(kind) ? 1 : 1 + rng() % 300;
    src.add({0, "v", kind, length});
    dst.add({0, "v", kind, length});
    if (element_type_of(kind) == ElementType::kInt32) {
      for (auto& x : src.ints(0)) x = static_cast<std::int32_t>(rng());
    } else {
      // Arbitrary bit patterns, NaNs included.
      for (auto& x : src.floats(0)) x = std::bit_cast<float>(static_cast<std::uint32_t>(rng()));
    }
    const auto before = src.total_bytes();
    const auto snapshot = src.marshal(0);
    dst.unmarshal(0, snapshot.payload);
    EXPECT_EQ(dst.marshal(0).payload, snapshot.payload);
    EXPECT_EQ(src.total_bytes(), before);
  }
}

TEST(Registry, UnmarshalChecksLengthAndId) {
  VariableTable t;
  t.register_array(0, "v", VarKind::kIntArray, 3);
  EXPECT_THROW(t.unmarshal(0, Bytes(8)), RegistryError);
  EXPECT_THROW(t.unmarshal(9, Bytes(12)), RegistryError);
  EXPECT_THROW(t.marshal(9), RegistryError);
}

TEST(Registry, TypedAccessIsChecked) {
  VariableTable t;
  t.register_array(0, "v", VarKind::kIntArray, 3);
  EXPECT_THROW(t.floats(0), RegistryError);
}

TEST(Registry, StructuralEquality) {
  const auto specs = linpack::registrations(20, 20);
  const auto a = make_table(specs);
  auto renamed = specs;
  renamed[0].name = "matrix";
  EXPECT_TRUE(structurally_equal(a, make_table(renamed)));

  auto longer = specs;
  longer[1].length += 1;
  EXPECT_FALSE(structurally_equal(a, make_table(longer)));

  auto reordered = specs;
  std::swap(reordered[0], reordered[1]);
  EXPECT_FALSE(structurally_equal(a, make_table(reordered)));
}

TEST(Registry, LayoutWordsRoundTrip) {
  const auto specs = linpack::registrations(20, 20);
  const auto t = make_table(specs);
  const auto words = layout_words(t.descriptors());
  EXPECT_EQ(words.size(), specs.size() * 3);
  EXPECT_TRUE(structurally_equal(layout_from_words(words), t.descriptors()));
}

TEST(Registry, ProgramFootprint) {
  const auto program = linpack::make_program(20, 20, 100);
  EXPECT_EQ(program.variable_bytes(), 1768u);
  EXPECT_EQ(program.code_bytes(), 200u);
  EXPECT_EQ(program.footprint_bytes(), 1968u);
}

}  // namespace
}  // namespace eithne
