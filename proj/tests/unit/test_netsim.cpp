#include <gtest/gtest.h>

#include <unistd.h>

#include <thread>

#include "abcd/netsim.hpp"

using namespace abcd;
using namespace abcd::net;

namespace {

WireMessage sample_message(std::uint32_t qubits) {
  WireMessage m;
  m.session_id = 0x1122334455667788ULL;
  m.round = 3;
  m.sender = Sender::Bob;
  m.num_model_qubits = qubits;
  Rng rng(RngStream{1, qubits});
  m.payload.resize(std::size_t{1} << qubits);
  for (auto& z : m.payload) z = rng.complex_normal();
  return m;
}

SessionConfig config(std::uint64_t samples, std::uint64_t seed) {
  SessionConfig c;
  c.samples = samples;
  c.stream = RngStream{seed, 1};
  c.session_id = seed;
  return c;
}

}  // namespace

TEST(Wire, RoundTrip) {
  for (std::uint32_t q : {0u, 1u, 4u, 10u}) {
    const WireMessage m = sample_message(q);
    const auto bytes = encode_message(m);
    EXPECT_EQ(bytes.size(), kHeaderBytes + 16 * m.payload.size());
    EXPECT_EQ(decode_message(bytes), m);
  }
}

TEST(Wire, LayoutIsLittleEndian) {
  const auto bytes = encode_message(sample_message(1));
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "QMSG");
  EXPECT_EQ(bytes[4], 1);  // version
  EXPECT_EQ(bytes[8], 0x88);
  EXPECT_EQ(bytes[15], 0x11);
  EXPECT_EQ(bytes[16], 3);   // round
  EXPECT_EQ(bytes[20], 1);   // sender Bob
  EXPECT_EQ(bytes[21], 1);   // model qubits
  EXPECT_EQ(bytes[25], 32);  // payload_len = 16 * 2
}

TEST(Wire, FlippedMagicIsDecodeError) {
  auto bytes = encode_message(sample_message(2));
  bytes[0] ^= 0x01;
  try {
    decode_message(bytes);
    FAIL();
  } catch (const DecodeError& e) {
    EXPECT_EQ(e.offset(), 0u);
  }
}

TEST(Wire, InconsistentPayloadLengthIsDecodeError) {
  auto bytes = encode_message(sample_message(2));  // 4 amplitudes, 64 bytes
  bytes[25] = 48;                                  // 3 amplitudes is no qubit count
  EXPECT_THROW(decode_message(bytes), DecodeError);
  bytes[25] = 128;  // claims 8 amplitudes but only 4 follow
  EXPECT_THROW(decode_message(bytes), DecodeError);
  bytes[25] = 0;
  EXPECT_THROW(decode_message(bytes), DecodeError);
}

TEST(Wire, OverflowingPayloadLengthIsDecodeError) {
  auto bytes = encode_message(sample_message(1));
  for (int i = 25; i < 33; ++i) bytes[i] = 0xFF;
  EXPECT_THROW(decode_message(bytes), DecodeError);
  bytes[32] = 0x10;  // 16 * 2^56
  for (int i = 25; i < 32; ++i) bytes[i] = 0;
  EXPECT_THROW(decode_message(bytes), DecodeError);
}

TEST(Wire, TruncationVersionAndSenderErrors) {
  const auto good = encode_message(sample_message(2));
  for (std::size_t cut = 0; cut < good.size(); cut += 7)
    EXPECT_THROW(decode_message(std::span(good.data(), cut)), DecodeError) << cut;
  auto v = good;
  v[4] = 2;
  EXPECT_THROW(decode_message(v), DecodeError);
  v = good;
  v[20] = 3;
  EXPECT_THROW(decode_message(v), DecodeError);
  WireMessage bad = sample_message(2);
  bad.payload.pop_back();
  EXPECT_THROW(encode_message(bad), std::invalid_argument);
}

TEST(Transport, FramingOverSocketPairAndMemoryPipe) {
  auto [a, b] = make_socket_pair();
  const WireMessage m = sample_message(6);
  send_message(a, m);
  send_message(a, m);
  EXPECT_EQ(recv_message(b), m);
  EXPECT_EQ(recv_message(b), m);
  a.close();
  EXPECT_THROW(recv_message(b), TransportError);

  auto [x, y] = make_memory_pipe();
  send_message(*y, m);
  EXPECT_EQ(recv_message(*x), m);
  x->close();
  EXPECT_THROW(recv_message(*y), TransportError);
}

TEST(Transport, TcpLoopback) {
  const int lfd = tcp_listen(0);
  const std::uint16_t port = bound_port(lfd);
  ASSERT_NE(port, 0);
  const WireMessage m = sample_message(3);
  std::thread client([&] {
    FdTransport c = tcp_connect("127.0.0.1", port);
    send_message(c, m);
  });
  FdTransport s = tcp_accept(lfd);
  EXPECT_EQ(recv_message(s), m);
  client.join();
  ::close(lfd);
}

TEST(Session, SplitKeepsOnlyOwnMatrices) {
  const auto inst = gen_no(8, RngStream{2, 2});
  const auto [alice, bob] = split_instance(inst);
  EXPECT_EQ(alice.a, inst.a);
  EXPECT_EQ(alice.c, inst.c);
  EXPECT_EQ(bob.b, inst.b);
  EXPECT_EQ(bob.d, inst.d);
}

TEST(Session, ParityWithInProcessSampler) {
  for (std::size_t n : {8u, 64u}) {
    const auto inst = gen_no(n, RngStream{3, n});
    const SessionConfig cfg = config(60, 17);
    const SampledEstimate ref = dqc1_accept_sampled(inst, 60, cfg.stream, false, 1);
    for (const auto kind : {TransportKind::Memory, TransportKind::SocketPair}) {
      const TranscriptReport rep = run_session(inst, cfg, kind);
      ASSERT_TRUE(rep.completed) << rep.error;
      EXPECT_EQ(rep.estimate, ref.estimate);
      EXPECT_EQ(rep.std_error, ref.std_error);
      EXPECT_EQ(rep.samples, 60u);
      EXPECT_EQ(rep.decision, Decision::RejectNo);
    }
  }
}

TEST(Session, BernoulliParity) {
  const auto inst = gen_no(16, RngStream{4, 4});
  SessionConfig cfg = config(200, 5);
  cfg.bernoulli = true;
  const SampledEstimate ref = dqc1_accept_sampled(inst, 200, cfg.stream, true, 1);
  const TranscriptReport rep = run_session(inst, cfg);
  EXPECT_EQ(rep.estimate, ref.estimate);
}

TEST(Session, LedgerExactness) {
  const auto inst = gen_yes(16, GenMode::ExactInverse, 0.0, RngStream{5, 5});
  const TranscriptReport rep = run_session(inst, config(10, 1));
  ASSERT_TRUE(rep.completed);
  EXPECT_EQ(rep.rounds, 4u);
  EXPECT_EQ(rep.total_model_qubits, 4u * 5u);
  ASSERT_EQ(rep.ledger.size(), 4u);
  std::uint64_t sum = 0;
  for (const auto& e : rep.ledger) sum += e.model_qubits;
  EXPECT_EQ(sum, rep.total_model_qubits);
  EXPECT_EQ(rep.ledger[0].sender, Sender::Alice);
  EXPECT_EQ(rep.ledger[3].sender, Sender::Bob);
  EXPECT_EQ(rep.messages, 40u);
  EXPECT_EQ(rep.payload_bytes_per_message, 16u * 32u);
  EXPECT_EQ(rep.wire_bytes, 40u * (kHeaderBytes + 16u * 32u));
  EXPECT_EQ(rep.decision, Decision::AcceptYes);
  EXPECT_NEAR(rep.estimate, 1.0, 1e-12);
  EXPECT_EQ(model_qubits_per_round(1024), 11u);
}

TEST(Session, Deterministic) {
  const auto inst = gen_no(8, RngStream{6, 6});
  const auto a = run_session(inst, config(30, 9)), b = run_session(inst, config(30, 9));
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.wire_bytes, b.wire_bytes);
  EXPECT_EQ(a.decision, b.decision);
}

TEST(Session, VersionMismatchIsProtocolError) {
  const auto inst = gen_no(8, RngStream{7, 7});
  auto [alice_in, bob_in] = split_instance(inst);
  auto [x, y] = make_memory_pipe();
  SessionConfig bob_cfg = config(5, 1);
  bob_cfg.wire_version = 2;
  std::string bob_error;
  std::thread bob([&, &y = y, bob_in = bob_in] {
    try {
      BobAgent(bob_in).run(*y, bob_cfg);
    } catch (const std::exception& e) {
      bob_error = e.what();
    }
  });
  const TranscriptReport rep = AliceAgent(alice_in).run(*x, config(5, 1));
  bob.join();
  EXPECT_FALSE(rep.completed);
  EXPECT_NE(rep.error.find("version"), std::string::npos) << rep.error;
  EXPECT_EQ(rep.ledger.size(), 4u);  // partial ledger still reported
  EXPECT_EQ(rep.samples, 0u);
}

TEST(Session, SessionIdMismatchAborts) {
  const auto inst = gen_no(8, RngStream{8, 8});
  auto [alice_in, bob_in] = split_instance(inst);
  auto [x, y] = make_socket_pair();
  SessionConfig bob_cfg = config(5, 1);
  bob_cfg.session_id = 99;
  std::thread bob([&, bob_in = bob_in] {
    try {
      BobAgent(bob_in).run(y, bob_cfg);
    } catch (const std::exception&) {
    }
  });
  const TranscriptReport rep = AliceAgent(alice_in).run(x, config(5, 1));
  bob.join();
  EXPECT_FALSE(rep.completed);
  EXPECT_FALSE(rep.error.empty());
}

TEST(Session, PeerVanishingGivesPartialReport) {
  const auto inst = gen_no(8, RngStream{9, 9});
  auto [alice_in, bob_in] = split_instance(inst);
  auto [x, y] = make_socket_pair();
  SessionConfig short_cfg = config(3, 1);  // bob serves fewer executions than alice wants
  std::thread bob([&, bob_in = bob_in] { BobAgent(bob_in).run(y, short_cfg); y.close(); });
  const TranscriptReport rep = AliceAgent(alice_in).run(x, config(10, 1));
  bob.join();
  EXPECT_FALSE(rep.completed);
  EXPECT_EQ(rep.samples, 3u);
  EXPECT_EQ(rep.messages, 12u);
}
