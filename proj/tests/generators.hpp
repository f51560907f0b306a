#pragma once

#include <random>

#include "eithne/wire.hpp"

namespace eithne::testing {

/// A random well-formed frame of any message type.
inline Message random_message(std::mt19937& rng) {
  static constexpr MsgType kTypes[] = {MsgType::kDataSend, MsgType::kDataRequest, MsgType::kDataResponse,
                                       MsgType::kExecute,  MsgType::kExecuteDone, MsgType::kPing,
                                       MsgType::kPong,     MsgType::kError,       MsgType::kStop,
                                       MsgType::kTableRequest, MsgType::kTableResponse};
  std::uniform_int_distribution<int> pick(0, static_cast<int>(std::size(kTypes)) - 1);
  std::uniform_int_distribution<int> u16(0, 0xFFFF);
  const MsgType type = kTypes[pick(rng)];
  const auto target = static_cast<std::uint16_t>(u16(rng));
  const auto object = static_cast<std::uint16_t>(u16(rng));
  if (type == MsgType::kError) {
    Message m = make_control(MsgType::kError, target, object);
    m.error_code = static_cast<std::uint16_t>(u16(rng));
    return m;
  }
  if (!carries_payload(type)) return make_control(type, target, object);

  const auto element = rng() % 2 ? ElementType::kInt32 : ElementType::kFloat32;
  std::uniform_int_distribution<int> len(0, 64);
  Bytes payload(static_cast<std::size_t>(len(rng)) * 4);
  for (auto& b : payload) b = static_cast<std::uint8_t>(rng());
  return make_data(type, target, object, element, std::move(payload));
}

}  // namespace eithne::testing
