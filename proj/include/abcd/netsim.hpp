#pragma once

// Networked run of the one-clean-qubit protocol. Alice and Bob are separate
// agents that only exchange serialized register states over a byte stream;
// each is constructed from its own half of the instance.

#include <array>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "abcd/instances.hpp"
#include "abcd/protocols.hpp"

namespace abcd::net {

// --- wire format ------------------------------------------------------------
//
//   offset  size  field
//   0       4     magic "QMSG"
//   4       4     version (u32 LE)
//   8       8     session_id (u64 LE)
//   16      4     round (u32 LE)
//   20      1     sender (0 Alice, 1 Bob, 2 Charlie)
//   21      4     num_model_qubits (u32 LE)
//   25      8     payload_len (u64 LE) = 16 * 2^k
//   33      ...   payload: 2^k (re, im) f64 LE pairs

inline constexpr std::uint32_t kWireVersion = 1;
inline constexpr std::size_t kHeaderBytes = 33;
inline constexpr std::uint64_t kMaxPayloadBytes = 1ULL << 32;

enum class Sender : std::uint8_t { Alice = 0, Bob = 1, Charlie = 2 };
std::string_view to_string(Sender s);

struct WireMessage {
  std::uint32_t version = kWireVersion;
  std::uint64_t session_id = 0;
  std::uint32_t round = 0;
  Sender sender = Sender::Alice;
  std::uint32_t num_model_qubits = 0;
  std::vector<cplx> payload;

  friend bool operator==(const WireMessage&, const WireMessage&) = default;
};

class DecodeError : public std::runtime_error {
 public:
  DecodeError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
  [[nodiscard]] std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

std::vector<std::uint8_t> encode_message(const WireMessage& m);
WireMessage decode_message(std::span<const std::uint8_t> bytes);

struct WireHeader {
  std::uint32_t version;
  std::uint64_t session_id;
  std::uint32_t round;
  Sender sender;
  std::uint32_t num_model_qubits;
  std::uint64_t payload_len;
};
/// Validates and parses the fixed 33-byte header (used by the framing reader
/// to learn how many payload bytes follow).
WireHeader decode_header(std::span<const std::uint8_t> bytes);

// --- transport --------------------------------------------------------------

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordered, reliable byte stream.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual void send(std::span<const std::uint8_t> bytes) = 0;
  /// Fills `out` completely or throws TransportError (closed peer, I/O error).
  virtual void recv_exact(std::span<std::uint8_t> out) = 0;
  virtual void close() = 0;
};

/// Stream socket (socketpair end or TCP connection); owns the descriptor.
class FdTransport final : public Transport {
 public:
  explicit FdTransport(int fd);
  ~FdTransport() override;
  FdTransport(FdTransport&& o) noexcept;
  FdTransport& operator=(FdTransport&& o) noexcept;
  FdTransport(const FdTransport&) = delete;
  FdTransport& operator=(const FdTransport&) = delete;

  void send(std::span<const std::uint8_t> bytes) override;
  void recv_exact(std::span<std::uint8_t> out) override;
  void close() override;
  [[nodiscard]] int fd() const { return fd_; }
  /// Gives up ownership of the descriptor.
  int release();

 private:
  int fd_ = -1;
};

std::pair<FdTransport, FdTransport> make_socket_pair();
/// Binds 127.0.0.1:port (0 picks a free port), returns the listening fd.
int tcp_listen(std::uint16_t port);
std::uint16_t bound_port(int listen_fd);
FdTransport tcp_accept(int listen_fd);
FdTransport tcp_connect(const std::string& host, std::uint16_t port);

/// In-process pipe for agents hosted on threads.
std::pair<std::unique_ptr<Transport>, std::unique_ptr<Transport>> make_memory_pipe();

void send_message(Transport& t, const WireMessage& m);
WireMessage recv_message(Transport& t);

// --- agents -----------------------------------------------------------------

struct AliceInput {
  std::size_t n;
  SpecialUnitary a, c;
};
struct BobInput {
  std::size_t n;
  SpecialUnitary b, d;
};
std::pair<AliceInput, BobInput> split_instance(const AbcdInstance& inst);

struct LedgerEntry {
  std::uint32_t round;
  Sender sender;
  std::uint32_t model_qubits;
  std::uint64_t payload_bytes;
};

struct SessionConfig {
  std::uint64_t samples = 1000;
  RngStream stream{};
  std::uint64_t session_id = 0;
  bool bernoulli = false;
  double threshold = 0.75;
  std::uint32_t wire_version = kWireVersion;  // overridable to exercise mismatch handling
};

struct TranscriptReport {
  std::uint32_t rounds = 0;  // transmissions in one protocol execution
  std::uint64_t total_model_qubits = 0;
  std::vector<LedgerEntry> ledger;  // one protocol execution
  std::uint64_t messages = 0;       // over all sampled executions
  std::uint64_t wire_bytes = 0;     // encoded bytes over all executions
  std::uint64_t payload_bytes_per_message = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  Decision decision = Decision::RejectNo;
  bool completed = false;
  std::string error;  // set when the session aborted
};

class AliceAgent {
 public:
  explicit AliceAgent(AliceInput in) : in_(std::move(in)) {}
  /// Runs every sampled execution; fills the report (partial on failure).
  TranscriptReport run(Transport& t, const SessionConfig& cfg) const;

 private:
  AliceInput in_;
};

class BobAgent {
 public:
  explicit BobAgent(BobInput in) : in_(std::move(in)) {}
  /// Serves cfg.samples executions; returns the number of messages handled.
  std::uint64_t run(Transport& t, const SessionConfig& cfg) const;

 private:
  BobInput in_;
};

enum class TransportKind { Memory, SocketPair };

/// Hosts both agents on separate threads over the chosen transport.
TranscriptReport run_session(const AbcdInstance& inst, const SessionConfig& cfg,
                             TransportKind kind = TransportKind::SocketPair);

/// Model qubits in one DQC1 transmission: 1 + ceil(log2 n).
std::uint32_t model_qubits_per_round(std::size_t n);

}  // namespace abcd::net
