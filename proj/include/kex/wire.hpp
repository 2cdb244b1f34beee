#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kex/errors.hpp"
#include "kex/field.hpp"

namespace kex {

// On-wire frame layout, little endian:
//   u32 length of the rest, u16 session id, u32 round, u8 sender, u8 kind,
//   then the payload as packed 8-byte field elements.
enum class MsgKind : uint8_t {
  kShares = 1,   // protocol share exchange
  kSubmit = 2,   // client input submission
  kResult = 3,   // result share delivery
  kControl = 4,  // session setup / teardown
};

struct FrameHeader {
  uint16_t session_id = 0;
  uint32_t round = 0;
  uint8_t sender = 0;  // party index 1..n, 0 for clients
  MsgKind kind = MsgKind::kShares;
};

constexpr size_t kLengthPrefixBytes = 4;
constexpr size_t kFrameHeaderBytes = 8;

inline size_t framed_size(size_t num_elems) {
  return kLengthPrefixBytes + kFrameHeaderBytes + 8 * num_elems;
}

// Full frame including the length prefix.
inline std::vector<uint8_t> encode_frame(const FrameHeader& h,
                                         std::span<const uint64_t> payload) {
  std::vector<uint8_t> out;
  out.reserve(framed_size(payload.size()));
  uint32_t len = static_cast<uint32_t>(kFrameHeaderBytes + 8 * payload.size());
  out.push_back(uint8_t(len));
  out.push_back(uint8_t(len >> 8));
  out.push_back(uint8_t(len >> 16));
  out.push_back(uint8_t(len >> 24));
  out.push_back(uint8_t(h.session_id));
  out.push_back(uint8_t(h.session_id >> 8));
  out.push_back(uint8_t(h.round));
  out.push_back(uint8_t(h.round >> 8));
  out.push_back(uint8_t(h.round >> 16));
  out.push_back(uint8_t(h.round >> 24));
  out.push_back(h.sender);
  out.push_back(static_cast<uint8_t>(h.kind));
  for (uint64_t v : payload) put_u64_le(out, v);
  return out;
}

// Parses a full frame (length prefix included) as produced by encode_frame.
inline FrameHeader decode_frame_header(std::span<const uint8_t> frame) {
  if (frame.size() < kLengthPrefixBytes + kFrameHeaderBytes)
    throw TransportError("frame too short");
  uint32_t len = uint32_t(frame[0]) | uint32_t(frame[1]) << 8 |
                 uint32_t(frame[2]) << 16 | uint32_t(frame[3]) << 24;
  if (frame.size() != kLengthPrefixBytes + len)
    throw TransportError("frame length mismatch");
  FrameHeader h;
  h.session_id = uint16_t(frame[4]) | uint16_t(frame[5]) << 8;
  h.round = uint32_t(frame[6]) | uint32_t(frame[7]) << 8 | uint32_t(frame[8]) << 16 |
            uint32_t(frame[9]) << 24;
  h.sender = frame[10];
  h.kind = static_cast<MsgKind>(frame[11]);
  return h;
}

inline std::vector<uint64_t> decode_frame_payload(std::span<const uint8_t> frame) {
  size_t body = frame.size() - kLengthPrefixBytes - kFrameHeaderBytes;
  if (body % 8 != 0) throw TransportError("frame payload not a multiple of 8 bytes");
  std::vector<uint64_t> out(body / 8);
  for (size_t i = 0; i < out.size(); ++i)
    out[i] = get_u64_le(frame, kLengthPrefixBytes + kFrameHeaderBytes + 8 * i);
  return out;
}

}  // namespace kex
