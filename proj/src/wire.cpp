#include <algorithm>
#include <bit>
#include <cmath>

#include "abcd/netsim.hpp"
#include "byteio.hpp"

namespace abcd::net {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic{'Q', 'M', 'S', 'G'};

}  // namespace

std::string_view to_string(Sender s) {
  switch (s) {
    case Sender::Alice: return "alice";
    case Sender::Bob: return "bob";
    case Sender::Charlie: return "charlie";
  }
  return "?";
}

std::vector<std::uint8_t> encode_message(const WireMessage& m) {
  const std::size_t amps = m.payload.size();
  if (amps == 0 || !std::has_single_bit(amps))
    throw std::invalid_argument("encode_message: payload must hold 2^k amplitudes, got " +
                                std::to_string(amps));
  detail::ByteWriter w;
  w.reserve(kHeaderBytes + 16 * amps);
  w.bytes(kMagic);
  w.u32(m.version);
  w.u64(m.session_id);
  w.u32(m.round);
  w.u8(static_cast<std::uint8_t>(m.sender));
  w.u32(m.num_model_qubits);
  w.u64(16ULL * amps);
  for (const cplx& z : m.payload) w.c128(z);
  return w.take();
}

WireHeader decode_header(std::span<const std::uint8_t> bytes) {
  try {
    detail::ByteReader r(bytes);
    const auto magic = r.bytes(4, "magic");
    if (!std::equal(magic.begin(), magic.end(), kMagic.begin()))
      throw DecodeError("bad magic, expected \"QMSG\"", 0);
    WireHeader h{};
    h.version = r.u32("version");
    if (h.version != kWireVersion)
      throw DecodeError("unsupported wire version " + std::to_string(h.version) + " (expected " +
                            std::to_string(kWireVersion) + ")",
                        4);
    h.session_id = r.u64("session_id");
    h.round = r.u32("round");
    const std::uint8_t sender = r.u8("sender");
    if (sender > 2) throw DecodeError("invalid sender id " + std::to_string(sender), 20);
    h.sender = static_cast<Sender>(sender);
    h.num_model_qubits = r.u32("num_model_qubits");
    h.payload_len = r.u64("payload_len");
    if (h.payload_len == 0 || h.payload_len % 16 != 0 || !std::has_single_bit(h.payload_len / 16))
      throw DecodeError("payload_len " + std::to_string(h.payload_len) +
                            " is not 16 * 2^k for any qubit count k",
                        25);
    if (h.payload_len > kMaxPayloadBytes)
      throw DecodeError("payload_len " + std::to_string(h.payload_len) + " exceeds limit", 25);
    return h;
  } catch (const detail::ReadError& e) {
    throw DecodeError(e.what, e.offset);
  }
}

WireMessage decode_message(std::span<const std::uint8_t> bytes) {
  const WireHeader h = decode_header(bytes);
  const std::size_t have = bytes.size() - kHeaderBytes;
  if (have != h.payload_len)
    throw DecodeError("payload_len declares " + std::to_string(h.payload_len) + " bytes but " +
                          std::to_string(have) + " follow the header",
                      kHeaderBytes);
  WireMessage m;
  m.version = h.version;
  m.session_id = h.session_id;
  m.round = h.round;
  m.sender = h.sender;
  m.num_model_qubits = h.num_model_qubits;
  detail::ByteReader r(bytes.subspan(kHeaderBytes));
  m.payload.resize(h.payload_len / 16);
  for (std::size_t i = 0; i < m.payload.size(); ++i) {
    m.payload[i] = r.c128("amplitude");
    if (!std::isfinite(m.payload[i].real()) || !std::isfinite(m.payload[i].imag()))
      throw DecodeError("non-finite amplitude " + std::to_string(i), kHeaderBytes + 16 * i);
  }
  return m;
}

void send_message(Transport& t, const WireMessage& m) {
  const auto bytes = encode_message(m);
  t.send(bytes);
}

WireMessage recv_message(Transport& t) {
  std::vector<std::uint8_t> buf(kHeaderBytes);
  t.recv_exact(buf);
  const WireHeader h = decode_header(buf);
  buf.resize(kHeaderBytes + h.payload_len);
  t.recv_exact(std::span(buf).subspan(kHeaderBytes));
  return decode_message(buf);
}

}  // namespace abcd::net
