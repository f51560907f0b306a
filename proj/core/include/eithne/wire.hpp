#pragma once

// Framed host <-> core message format.
//
// Every frame is a fixed 16-byte header followed by `count * 4` payload bytes:
//
//   offset  size  field
//   0       2     magic 0xE1 0x7E
//   2       1     version (kProtocolVersion)
//   3       1     msg_type
//   4       2     target_id   (core address)
//   6       2     object_id   (variable ID, kernel ID or 0)
//   8       1     element_type (0 for frames without payload)
//   9       1     reserved, always 0
//   10      4     count       (32-bit elements in the payload)
//   14      2     error_code  (ERROR frames only)
//
// All multi-byte fields are little-endian.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace eithne {

class Endpoint;

using Bytes = std::vector<std::uint8_t>;

inline constexpr std::uint8_t kMagic0 = 0xE1;
inline constexpr std::uint8_t kMagic1 = 0x7E;
inline constexpr std::uint8_t kProtocolVersion = 1;
inline constexpr std::size_t kHeaderSize = 16;
/// Upper bound accepted by the stream reader; larger counts are treated as corrupt.
inline constexpr std::uint32_t kMaxFrameElements = 64u * 1024u * 1024u;

enum class ElementType : std::uint8_t { kInt32 = 1, kFloat32 = 2 };

enum class MsgType : std::uint8_t {
  kDataSend = 0x01,
  kDataRequest = 0x02,
  kDataResponse = 0x03,
  kExecute = 0x04,
  kExecuteDone = 0x05,
  kPing = 0x06,
  kPong = 0x07,
  kError = 0x08,
  kStop = 0x09,
  kTableRequest = 0x0A,
  kTableResponse = 0x0B,
};

/// Numeric codes carried by ERROR frames.
enum class ErrorCode : std::uint16_t {
  kUnknownVariable = 1,
  kUnknownKernel = 2,
  kSizeMismatch = 3,
  kTypeMismatch = 4,
  kMemoryBudget = 5,
  kUnexpectedMessage = 6,
  kKernelFailed = 7,
};

std::string_view to_string(MsgType type);
std::string_view to_string(ErrorCode code);

/// True for frame types that carry an element payload.
bool carries_payload(MsgType type);
/// True for DATA_SEND / DATA_REQUEST / DATA_RESPONSE.
bool is_data_frame(MsgType type);

struct Message {
  std::uint8_t version = kProtocolVersion;
  MsgType type = MsgType::kPing;
  std::uint16_t target_id = 0;
  std::uint16_t object_id = 0;
  std::optional<ElementType> element_type;
  std::uint32_t count = 0;
  Bytes payload;
  std::uint16_t error_code = 0;

  bool operator==(const Message&) const = default;
};

Message make_control(MsgType type, std::uint16_t target_id, std::uint16_t object_id = 0);
Message make_data(MsgType type, std::uint16_t target_id, std::uint16_t object_id, ElementType element_type,
                  Bytes payload);
Message make_error(std::uint16_t target_id, std::uint16_t object_id, ErrorCode code);

/// Throws EncodeError when `m` violates the payload/count rules.
void validate(const Message& m);

Bytes encode_message(const Message& m);

struct Decoded {
  Message message;
  std::size_t consumed = 0;
};

/// Decodes the first frame in `bytes`. Throws DecodeError; never yields a partial message.
Decoded decode_message(std::span<const std::uint8_t> bytes);

/// Header fields of one frame, before the payload has been read.
struct FrameHeader {
  std::uint8_t version = 0;
  MsgType type = MsgType::kPing;
  std::uint16_t target_id = 0;
  std::uint16_t object_id = 0;
  std::uint8_t element_type = 0;
  std::uint32_t count = 0;
  std::uint16_t error_code = 0;

  std::size_t payload_bytes() const { return carries_payload(type) ? std::size_t{count} * 4 : 0; }
};

FrameHeader decode_header(std::span<const std::uint8_t, kHeaderSize> header);

void send_message(Endpoint& ep, const Message& m);
/// Blocks until one whole frame has arrived.
Message recv_message(Endpoint& ep);

// Little-endian element packing shared with the registry.
void put_u32(std::uint8_t* out, std::uint32_t v);
std::uint32_t get_u32(const std::uint8_t* in);
Bytes pack_int32(std::span<const std::int32_t> values);
Bytes pack_float32(std::span<const float> values);
std::vector<std::int32_t> unpack_int32(std::span<const std::uint8_t> bytes);
std::vector<float> unpack_float32(std::span<const std::uint8_t> bytes);

}  // namespace eithne
