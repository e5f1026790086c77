#include <thread>

#include "abcd/montecarlo.hpp"
#include "abcd/netsim.hpp"

namespace abcd::net {

namespace {

constexpr std::uint32_t kRoundsPerRun = 4;

void expect(const WireMessage& m, const SessionConfig& cfg, std::uint32_t round, Sender from,
            std::uint32_t qubits) {
  if (m.session_id != cfg.session_id)
    throw DecodeError("session id mismatch: got " + std::to_string(m.session_id) + ", expected " +
                          std::to_string(cfg.session_id),
                      8);
  if (m.round != round)
    throw DecodeError("out-of-order round " + std::to_string(m.round) + ", expected " +
                          std::to_string(round),
                      16);
  if (m.sender != from)
    throw DecodeError(std::string("unexpected sender ") + std::string(to_string(m.sender)), 20);
  if (m.num_model_qubits != qubits || m.payload.size() != (std::size_t{1} << qubits))
    throw DecodeError("payload of " + std::to_string(m.payload.size()) +
                          " amplitudes does not match " + std::to_string(m.num_model_qubits) +
                          " declared qubits (expected " + std::to_string(qubits) + ")",
                      21);
}

WireMessage make_message(const SessionConfig& cfg, std::uint32_t round, Sender from,
                         std::uint32_t qubits, std::vector<cplx> state) {
  WireMessage m;
  m.version = cfg.wire_version;
  m.session_id = cfg.session_id;
  m.round = round;
  m.sender = from;
  m.num_model_qubits = qubits;
  m.payload = std::move(state);
  return m;
}

}  // namespace

std::uint32_t model_qubits_per_round(std::size_t n) {
  return static_cast<std::uint32_t>(register_qubits(n)) + 1;
}

std::pair<AliceInput, BobInput> split_instance(const AbcdInstance& inst) {
  return {AliceInput{inst.n, inst.a, inst.c}, BobInput{inst.n, inst.b, inst.d}};
}

TranscriptReport AliceAgent::run(Transport& t, const SessionConfig& cfg) const {
  if (cfg.samples == 0) throw std::invalid_argument("netsim: samples must be >= 1");
  const std::uint32_t qubits = model_qubits_per_round(in_.n);
  const std::uint64_t msg_bytes = kHeaderBytes + (16ULL << qubits);

  TranscriptReport rep;
  rep.rounds = kRoundsPerRun;
  rep.total_model_qubits = static_cast<std::uint64_t>(kRoundsPerRun) * qubits;
  rep.payload_bytes_per_message = 16ULL << qubits;
  for (std::uint32_t r = 1; r <= kRoundsPerRun; ++r)
    rep.ledger.push_back({r, r % 2 == 1 ? Sender::Alice : Sender::Bob, qubits, 16ULL << qubits});

  // Same draw order as dqc1_accept_sampled with one block.
  Rng rng(cfg.stream.derive(0));
  mc::MeanAccumulator acc;
  try {
    std::uint32_t round = 0;
    for (std::uint64_t s = 0; s < cfg.samples; ++s) {
      const std::vector<cplx> v = haar_unit_vector(in_.n, rng);
      std::vector<cplx> state = dqc1::prepare(v, in_.n);

      dqc1::apply_controlled_adjoint(state, in_.a.matrix());
      send_message(t, make_message(cfg, ++round, Sender::Alice, qubits, std::move(state)));
      WireMessage m = recv_message(t);
      expect(m, cfg, ++round, Sender::Bob, qubits);
      state = std::move(m.payload);

      dqc1::apply_controlled_adjoint(state, in_.c.matrix());
      send_message(t, make_message(cfg, ++round, Sender::Alice, qubits, std::move(state)));
      m = recv_message(t);
      expect(m, cfg, ++round, Sender::Bob, qubits);

      const double p = dqc1::plus_probability(m.payload);
      acc.add(cfg.bernoulli ? (rng.uniform() < p ? 1.0 : 0.0) : p);
      rep.messages += kRoundsPerRun;
      rep.wire_bytes += kRoundsPerRun * msg_bytes;
    }
    rep.completed = true;
  } catch (const std::exception& e) {
    rep.error = e.what();
    t.close();
  }
  rep.samples = acc.count;
  rep.estimate = acc.mean.real();
  rep.std_error = acc.std_error();
  rep.decision = rep.estimate >= cfg.threshold ? Decision::AcceptYes : Decision::RejectNo;
  return rep;
}

std::uint64_t BobAgent::run(Transport& t, const SessionConfig& cfg) const {
  const std::uint32_t qubits = model_qubits_per_round(in_.n);
  std::uint64_t handled = 0;
  std::uint32_t round = 0;
  try {
    for (std::uint64_t s = 0; s < cfg.samples; ++s) {
      for (const SpecialUnitary* u : {&in_.b, &in_.d}) {
        WireMessage m = recv_message(t);
        expect(m, cfg, ++round, Sender::Alice, qubits);
        dqc1::apply_controlled_adjoint(m.payload, u->matrix());
        send_message(t, make_message(cfg, ++round, Sender::Bob, qubits, std::move(m.payload)));
        handled += 2;
      }
    }
  } catch (...) {
    t.close();
    throw;
  }
  return handled;
}

TranscriptReport run_session(const AbcdInstance& inst, const SessionConfig& cfg,
                             TransportKind kind) {
  std::unique_ptr<Transport> alice_end, bob_end;
  if (kind == TransportKind::Memory) {
    std::tie(alice_end, bob_end) = make_memory_pipe();
  } else {
    auto [x, y] = make_socket_pair();
    alice_end = std::make_unique<FdTransport>(std::move(x));
    bob_end = std::make_unique<FdTransport>(std::move(y));
  }

  TranscriptReport rep;
  std::string bob_error;
  {
    auto [alice_in, bob_in] = split_instance(inst);
    const AliceAgent alice(std::move(alice_in));
    const BobAgent bob(std::move(bob_in));
    std::thread bob_thread([&] {
      try {
        bob.run(*bob_end, cfg);
      } catch (const std::exception& e) {
        bob_error = e.what();
      }
    });
    rep = alice.run(*alice_end, cfg);
    bob_thread.join();
  }
  if (rep.error.empty() && !bob_error.empty()) {
    rep.completed = false;
    rep.error = "bob: " + bob_error;
  } else if (!bob_error.empty()) {
    rep.error += "; bob: " + bob_error;
  }
  return rep;
}

}  // namespace abcd::net
