#include "eithne/wire.hpp"

#include <bit>
#include <string>

#include "eithne/error.hpp"
#include "eithne/transport.hpp"

namespace eithne {

namespace {

void put_u16(std::uint8_t* out, std::uint16_t v) {
  out[0] = static_cast<std::uint8_t>(v & 0xFF);
  out[1] = static_cast<std::uint8_t>(v >> 8);
}

std::uint16_t get_u16(const std::uint8_t* in) {
  return static_cast<std::uint16_t>(in[0] | (in[1] << 8));
}

bool known_type(std::uint8_t raw) { return raw >= 0x01 && raw <= 0x0B; }

std::optional<ElementType> element_from_byte(std::uint8_t raw) {
  switch (raw) {
    case 1:
      return ElementType::kInt32;
    case 2:
      return ElementType::kFloat32;
    default:
      return std::nullopt;
  }
}

Message message_from_header(const FrameHeader& h, std::span<const std::uint8_t> payload) {
  Message m;
  m.version = h.version;
  m.type = h.type;
  m.target_id = h.target_id;
  m.object_id = h.object_id;
  if (carries_payload(h.type)) m.element_type = element_from_byte(h.element_type);
  m.count = h.count;
  m.payload.assign(payload.begin(), payload.end());
  m.error_code = h.error_code;
  return m;
}

}  // namespace

std::string_view to_string(MsgType type) {
  switch (type) {
    case MsgType::kDataSend:
      return "DATA_SEND";
    case MsgType::kDataRequest:
      return "DATA_REQUEST";
    case MsgType::kDataResponse:
      return "DATA_RESPONSE";
    case MsgType::kExecute:
      return "EXECUTE";
    case MsgType::kExecuteDone:
      return "EXECUTE_DONE";
    case MsgType::kPing:
      return "PING";
    case MsgType::kPong:
      return "PONG";
    case MsgType::kError:
      return "ERROR";
    case MsgType::kStop:
      return "STOP";
    case MsgType::kTableRequest:
      return "TABLE_REQUEST";
    case MsgType::kTableResponse:
      return "TABLE_RESPONSE";
  }
  return "UNKNOWN";
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownVariable:
      return "unknown-variable";
    case ErrorCode::kUnknownKernel:
      return "unknown-kernel";
    case ErrorCode::kSizeMismatch:
      return "size-mismatch";
    case ErrorCode::kTypeMismatch:
      return "type-mismatch";
    case ErrorCode::kMemoryBudget:
      return "memory-budget";
    case ErrorCode::kUnexpectedMessage:
      return "unexpected-message";
    case ErrorCode::kKernelFailed:
      return "kernel-failed";
  }
  return "unknown-error";
}

bool carries_payload(MsgType type) {
  return type == MsgType::kDataSend || type == MsgType::kDataResponse || type == MsgType::kTableResponse;
}

bool is_data_frame(MsgType type) {
  return type == MsgType::kDataSend || type == MsgType::kDataRequest || type == MsgType::kDataResponse;
}

Message make_control(MsgType type, std::uint16_t target_id, std::uint16_t object_id) {
  Message m;
  m.type = type;
  m.target_id = target_id;
  m.object_id = object_id;
  return m;
}

Message make_data(MsgType type, std::uint16_t target_id, std::uint16_t object_id, ElementType element_type,
                  Bytes payload) {
  Message m;
  m.type = type;
  m.target_id = target_id;
  m.object_id = object_id;
  m.element_type = element_type;
  m.count = static_cast<std::uint32_t>(payload.size() / 4);
  m.payload = std::move(payload);
  return m;
}

Message make_error(std::uint16_t target_id, std::uint16_t object_id, ErrorCode code) {
  Message m = make_control(MsgType::kError, target_id, object_id);
  m.error_code = static_cast<std::uint16_t>(code);
  return m;
}

void validate(const Message& m) {
  if (!known_type(static_cast<std::uint8_t>(m.type))) throw EncodeError("unknown message type");
  if (carries_payload(m.type)) {
    if (!m.element_type) throw EncodeError(std::string(to_string(m.type)) + " requires an element type");
    if (m.payload.size() != std::size_t{m.count} * 4) {
      throw EncodeError("payload is " + std::to_string(m.payload.size()) + " bytes but count " +
                        std::to_string(m.count) + " requires " + std::to_string(std::size_t{m.count} * 4));
    }
  } else {
    if (m.count != 0 || !m.payload.empty()) {
      throw EncodeError(std::string(to_string(m.type)) + " must not carry a payload");
    }
    if (m.element_type) throw EncodeError(std::string(to_string(m.type)) + " must not carry an element type");
  }
  if (m.type != MsgType::kError && m.error_code != 0) throw EncodeError("error_code set on a non-ERROR frame");
}

Bytes encode_message(const Message& m) {
  validate(m);
  Bytes out(kHeaderSize + m.payload.size());
  std::uint8_t* p = out.data();
  p[0] = kMagic0;
  p[1] = kMagic1;
  p[2] = m.version;
  p[3] = static_cast<std::uint8_t>(m.type);
  put_u16(p + 4, m.target_id);
  put_u16(p + 6, m.object_id);
  p[8] = m.element_type ? static_cast<std::uint8_t>(*m.element_type) : 0;
  p[9] = 0;
  put_u32(p + 10, m.count);
  put_u16(p + 14, m.error_code);
  std::copy(m.payload.begin(), m.payload.end(), out.begin() + kHeaderSize);
  return out;
}

FrameHeader decode_header(std::span<const std::uint8_t, kHeaderSize> header) {
  const std::uint8_t* p = header.data();
  if (p[0] != kMagic0 || p[1] != kMagic1) throw DecodeError(DecodeFailure::kBadMagic, "bad frame magic");
  FrameHeader h;
  h.version = p[2];
  if (h.version != kProtocolVersion) {
    throw DecodeError(DecodeFailure::kUnsupportedVersion, "unsupported protocol version " + std::to_string(h.version));
  }
  if (!known_type(p[3])) throw DecodeError(DecodeFailure::kUnknownType, "unknown msg_type " + std::to_string(p[3]));
  h.type = static_cast<MsgType>(p[3]);
  h.target_id = get_u16(p + 4);
  h.object_id = get_u16(p + 6);
  h.element_type = p[8];
  h.count = get_u32(p + 10);
  h.error_code = get_u16(p + 14);

  if (carries_payload(h.type)) {
    if (!element_from_byte(h.element_type)) {
      throw DecodeError(DecodeFailure::kBadElementType, "bad element_type " + std::to_string(h.element_type));
    }
  } else if (h.element_type != 0 || h.count != 0) {
    throw DecodeError(DecodeFailure::kMalformed, std::string(to_string(h.type)) + " frame with a payload");
  }
  if (p[9] != 0) throw DecodeError(DecodeFailure::kMalformed, "reserved header byte is not zero");
  if (h.type != MsgType::kError && h.error_code != 0) {
    throw DecodeError(DecodeFailure::kMalformed, "error_code set on a non-ERROR frame");
  }
  return h;
}

Decoded decode_message(std::span<const std::uint8_t> bytes) {
  if (bytes.size() >= 2 && (bytes[0] != kMagic0 || bytes[1] != kMagic1)) {
    throw DecodeError(DecodeFailure::kBadMagic, "bad frame magic");
  }
  if (bytes.size() < kHeaderSize) {
    throw DecodeError(DecodeFailure::kTruncated,
                      "truncated header: " + std::to_string(bytes.size()) + " of 16 bytes");
  }
  const FrameHeader h = decode_header(bytes.first<kHeaderSize>());
  const std::size_t need = kHeaderSize + h.payload_bytes();
  if (bytes.size() < need) {
    throw DecodeError(DecodeFailure::kTruncated, "truncated payload: frame needs " + std::to_string(need) +
                                                     " bytes, have " + std::to_string(bytes.size()));
  }
  return {message_from_header(h, bytes.subspan(kHeaderSize, h.payload_bytes())), need};
}

void send_message(Endpoint& ep, const Message& m) {
  const Bytes frame = encode_message(m);
  ep.send_all(frame);
}

Message recv_message(Endpoint& ep) {
  std::array<std::uint8_t, kHeaderSize> header{};
  ep.recv_exact(header);
  const FrameHeader h = decode_header(header);
  if (h.count > kMaxFrameElements) {
    throw DecodeError(DecodeFailure::kMalformed, "frame count " + std::to_string(h.count) + " exceeds limit");
  }
  Bytes payload(h.payload_bytes());
  try {
    ep.recv_exact(payload);
  } catch (const TimeoutError& e) {
    throw TimeoutError(e.what(), kHeaderSize + e.bytes_read());
  } catch (const TransportError& e) {
    throw TransportError(std::string("connection closed mid-frame: ") + e.what(), kHeaderSize + e.bytes_read());
  }
  return message_from_header(h, payload);
}

void put_u32(std::uint8_t* out, std::uint32_t v) {
  out[0] = static_cast<std::uint8_t>(v & 0xFF);
  out[1] = static_cast<std::uint8_t>((v >> 8) & 0xFF);
  out[2] = static_cast<std::uint8_t>((v >> 16) & 0xFF);
  out[3] = static_cast<std::uint8_t>(v >> 24);
}

std::uint32_t get_u32(const std::uint8_t* in) {
  return std::uint32_t{in[0]} | (std::uint32_t{in[1]} << 8) | (std::uint32_t{in[2]} << 16) |
         (std::uint32_t{in[3]} << 24);
}

Bytes pack_int32(std::span<const std::int32_t> values) {
  Bytes out(values.size() * 4);
  for (std::size_t i = 0; i < values.size(); ++i) put_u32(out.data() + 4 * i, static_cast<std::uint32_t>(values[i]));
  return out;
}

Bytes pack_float32(std::span<const float> values) {
  Bytes out(values.size() * 4);
  for (std::size_t i = 0; i < values.size(); ++i) put_u32(out.data() + 4 * i, std::bit_cast<std::uint32_t>(values[i]));
  return out;
}

std::vector<std::int32_t> unpack_int32(std::span<const std::uint8_t> bytes) {
  std::vector<std::int32_t> out(bytes.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<std::int32_t>(get_u32(bytes.data() + 4 * i));
  return out;
}

std::vector<float> unpack_float32(std::span<const std::uint8_t> bytes) {
  std::vector<float> out(bytes.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::bit_cast<float>(get_u32(bytes.data() + 4 * i));
  return out;
}

}  // namespace eithne
