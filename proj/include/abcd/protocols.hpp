#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "abcd/instances.hpp"
#include "abcd/montecarlo.hpp"

namespace abcd {

enum class Protocol { Dqc1, Fingerprint };
enum class Decision { AcceptYes, RejectNo };

std::string_view to_string(Protocol p);
std::string_view to_string(Decision d);

/// Single-shot acceptance bounds guaranteed by the promise.
struct PromiseBounds {
  double no_max;   // acceptance on No instances is at most this
  double yes_min;  // acceptance on Yes instances is at least this
};
PromiseBounds promise_bounds(Protocol p);

struct DecisionRule {
  double threshold = 0.75;
  std::uint32_t repetitions = 1;

  /// Midpoint of the protocol's promise gap.
  static DecisionRule midpoint(Protocol p, std::uint32_t repetitions);
};

struct ProtocolReport {
  Protocol protocol = Protocol::Dqc1;
  std::optional<double> exact_p;
  std::optional<double> estimated_p;
  std::uint64_t samples = 0;
  double std_error = 0.0;
  Decision decision = Decision::RejectNo;
  std::uint32_t qubit_cost = 0;
  std::optional<double> threshold;
  std::optional<double> hoeffding_bound;

  /// False when both probabilities are present and differ by more than
  /// five standard errors.
  [[nodiscard]] bool consistent() const;
};

/// ceil(log2 n) for n >= 1.
std::uint32_t register_qubits(std::size_t n);

/// Model qubits exchanged by one protocol execution. Dqc1: four
/// transmissions of the (1 + ceil(log2 n))-qubit register. Fingerprint: each
/// player sends 1 + ceil(log2 n) qubits to the referee.
std::uint32_t qubit_cost(Protocol p, std::size_t n);

/// 1/2 + Re Tr(ABCD) / (2N)
double dqc1_accept_exact(const AbcdInstance& inst);
/// 1/4 + Re Tr(ABCD) / (4N)
double fingerprint_accept_exact(const AbcdInstance& inst);
double accept_exact(Protocol p, const AbcdInstance& inst);

/// Register steps of the one-clean-qubit protocol on the pure-state branch
/// |0>|v>. The register is 1 + q qubits (q = ceil(log2 n)); the clean qubit
/// is the most significant, so amplitudes [0, 2^q) are its |0> half. The
/// same functions drive both the in-process sampler and the networked agents.
namespace dqc1 {

/// (H (x) I)|0>|v>, v zero-padded to 2^q entries.
std::vector<cplx> prepare(std::span<const cplx> v, std::size_t n);
/// Applies U^dagger to the |1> half (U acts on the first n entries of the
/// 2^q-dimensional register, identity on the padding).
void apply_controlled_adjoint(std::span<cplx> state, const ComplexMatrix& u);
/// Probability of |+> when the clean qubit is measured in the Hadamard basis.
double plus_probability(std::span<const cplx> state);

}  // namespace dqc1

struct SampledEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
};

/// Mixture-over-v estimate of the DQC1 acceptance. bernoulli=false averages
/// p_v directly; bernoulli=true averages sampled measurement outcomes.
/// Block b of `blocks` draws from stream.derive(b).
SampledEstimate dqc1_accept_sampled(const AbcdInstance& inst, std::uint64_t samples,
                                    RngStream stream, bool bernoulli, std::size_t blocks = 1,
                                    mc::Execution exec = mc::Execution::Parallel);

/// One DQC1 pure-state run for a given v: returns p_v.
double dqc1_run_for_vector(const AbcdInstance& inst, std::span<const cplx> v);

/// Runs `rule.repetitions` independent single-shot trials and accepts iff the
/// accepted fraction reaches rule.threshold. The report carries the
/// Hoeffding bound 2 exp(-2 k margin^2), margin being the distance from the
/// threshold to the nearer promise bound.
ProtocolReport amplify_decide(Protocol p, const AbcdInstance& inst, const DecisionRule& rule,
                              RngStream stream);

double hoeffding_bound(std::uint32_t k, double margin);

}  // namespace abcd
