#include <gtest/gtest.h>

#include <random>

#include "eithne/error.hpp"
#include "eithne/transport.hpp"
#include "eithne/wire.hpp"
#include "generators.hpp"

namespace eithne {
namespace {

DecodeFailure decode_failure(const Bytes& bytes) {
  try {
    decode_message(bytes);
  } catch (const DecodeError& e) {
    return e.failure();
  }
  ADD_FAILURE() << "expected a DecodeError";
  return DecodeFailure::kMalformed;
}

TEST(Wire, PingHeaderIsBitExact) {
  const Bytes expected = {0xE1, 0x7E, 0x01, 0x06, 0x03, 0x00, 0x00, 0x00,
                          0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00};
  EXPECT_EQ(encode_message(make_control(MsgType::kPing, 3)), expected);

  const auto decoded = decode_message(expected);
  EXPECT_EQ(decoded.consumed, kHeaderSize);
  EXPECT_EQ(decoded.message.type, MsgType::kPing);
  EXPECT_EQ(decoded.message.target_id, 3);
}

TEST(Wire, FloatOneEncodesLittleEndian) {
  const float one = 1.0f;
  const auto frame = encode_message(make_data(MsgType::kDataSend, 0, 2, ElementType::kFloat32, pack_float32({&one, 1})));
  const Bytes expected = {0xE1, 0x7E, 0x01, 0x01, 0x00, 0x00, 0x02, 0x00, 0x02, 0x00,
                          0x01, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x80, 0x3F};
  EXPECT_EQ(frame, expected);
}

TEST(Wire, MultiByteFieldsAreLittleEndian) {
  Message m = make_error(0x1234, 0xABCD, ErrorCode::kMemoryBudget);
  const auto bytes = encode_message(m);
  EXPECT_EQ(bytes[4], 0x34);
  EXPECT_EQ(bytes[5], 0x12);
  EXPECT_EQ(bytes[6], 0xCD);
  EXPECT_EQ(bytes[7], 0xAB);
  EXPECT_EQ(bytes[14], 0x05);
  EXPECT_EQ(bytes[15], 0x00);
}

TEST(Wire, RandomFramesRoundTrip) {
  std::mt19937 rng(20240611);
  for (int i = 0; i < 1000; ++i) {
    const Message m = testing::random_message(rng);
    const Bytes bytes = encode_message(m);
    const auto decoded = decode_message(bytes);
    ASSERT_EQ(decoded.message, m) << "case " << i;
    ASSERT_EQ(decoded.consumed, bytes.size());
  }
}

TEST(Wire, ConcatenatedFramesDecodeInOrder) {
  std::mt19937 rng(7);
  std::vector<Message> sent;
  Bytes stream;
  for (int i = 0; i < 5; ++i) {
    sent.push_back(testing::random_message(rng));
    const auto bytes = encode_message(sent.back());
    stream.insert(stream.end(), bytes.begin(), bytes.end());
  }
  std::span<const std::uint8_t> rest(stream);
  for (const auto& m : sent) {
    const auto d = decode_message(rest);
    EXPECT_EQ(d.message, m);
    rest = rest.subspan(d.consumed);
  }
  EXPECT_TRUE(rest.empty());
}

TEST(Wire, DecodeErrorsAreDistinct) {
  Bytes bad_magic = encode_message(make_control(MsgType::kPing, 3));
  bad_magic[0] = bad_magic[1] = 0xFF;
  EXPECT_EQ(decode_failure(bad_magic), DecodeFailure::kBadMagic);

  Bytes version = encode_message(make_control(MsgType::kPing, 3));
  version[2] = 2;
  EXPECT_EQ(decode_failure(version), DecodeFailure::kUnsupportedVersion);

  Bytes unknown = encode_message(make_control(MsgType::kPing, 3));
  unknown[3] = 0x42;
  EXPECT_EQ(decode_failure(unknown), DecodeFailure::kUnknownType);

  const std::vector<std::int32_t> four = {1, 2, 3, 4};
  Bytes truncated = encode_message(make_data(MsgType::kDataSend, 0, 1, ElementType::kInt32, pack_int32(four)));
  truncated.resize(kHeaderSize + 8);
  EXPECT_EQ(decode_failure(truncated), DecodeFailure::kTruncated);

  Bytes short_header(10, 0);
  short_header[0] = kMagic0;
  short_header[1] = kMagic1;
  EXPECT_EQ(decode_failure(short_header), DecodeFailure::kTruncated);

  Bytes element = encode_message(make_data(MsgType::kDataSend, 0, 1, ElementType::kInt32, pack_int32(four)));
  element[8] = 9;
  EXPECT_EQ(decode_failure(element), DecodeFailure::kBadElementType);
}

TEST(Wire, EncodeRejectsMalformedMessages) {
  Message m = make_data(MsgType::kDataSend, 0, 1, ElementType::kInt32, Bytes(8));
  m.count = 3;
  EXPECT_THROW(encode_message(m), EncodeError);

  Message control = make_control(MsgType::kExecute, 0, 1);
  control.payload = Bytes(4);
  control.count = 1;
  EXPECT_THROW(encode_message(control), EncodeError);

  Message data = make_data(MsgType::kDataSend, 0, 1, ElementType::kInt32, Bytes(4));
  data.element_type.reset();
  EXPECT_THROW(encode_message(data), EncodeError);
}

TEST(Wire, LoopbackPreservesOrder) {
  auto ep = make_loopback();
  const Message a = make_control(MsgType::kPing, 1);
  const Message b = make_control(MsgType::kExecute, 1, 7);
  const Message c = make_data(MsgType::kDataSend, 1, 2, ElementType::kFloat32, Bytes(12, 0xAB));
  for (const auto& m : {a, b, c}) send_message(*ep, m);
  EXPECT_EQ(recv_message(*ep), a);
  EXPECT_EQ(recv_message(*ep), b);
  EXPECT_EQ(recv_message(*ep), c);
}

TEST(Wire, CloseMidFrameReportsBytesRead) {
  auto [writer, reader] = make_channel_pair();
  const std::vector<std::int32_t> four = {1, 2, 3, 4};
  Bytes frame = encode_message(make_data(MsgType::kDataSend, 0, 1, ElementType::kInt32, pack_int32(four)));
  frame.resize(kHeaderSize + 8);
  writer->send_all(frame);
  writer->close();
  try {
    recv_message(*reader);
    FAIL() << "expected TransportError";
  } catch (const TransportError& e) {
    EXPECT_EQ(e.bytes_read(), kHeaderSize + 8);
  }
}

}  // namespace
}  // namespace eithne
