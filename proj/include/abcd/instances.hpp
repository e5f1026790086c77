#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "abcd/linalg.hpp"

namespace abcd {

enum class Label : std::uint8_t { No = 0, Yes = 1, Unknown = 2 };
enum class GenMode : std::uint8_t { ExactInverse = 0, Perturbed = 1, HaarNo = 2 };

std::string_view to_string(Label l);
std::string_view to_string(GenMode m);

/// A labeled (A, B, C, D) quadruple. Alice holds (A, C), Bob holds (B, D).
struct AbcdInstance {
  std::size_t n = 0;
  SpecialUnitary a, b, c, d;
  Label label = Label::Unknown;
  std::uint64_t seed = 0;
  GenMode mode = GenMode::HaarNo;

  /// Tr(ABCD), evaluated left to right.
  [[nodiscard]] cplx trace_abcd() const;
};

enum class Promise { Yes, No, Outside };
std::string_view to_string(Promise p);

struct PromiseStatus {
  Promise value = Promise::Outside;
  cplx trace = 0.0;
};

/// Retry exhaustion in a rejection-sampling generator.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GenOptions {
  int max_retries = 100;
  double yes_fraction = 0.9;  // Re Tr >= 0.9 N
  double no_fraction = 0.1;   // Re Tr <= 0.1 N
};

/// Yes instance. ExactInverse: A, B, C Haar and D = (ABC)^{-1}. Perturbed:
/// D = (ABC)^{-1} exp(i eps H), resampled until Re Tr(ABCD) >= 0.9 N.
AbcdInstance gen_yes(std::size_t n, GenMode mode, double epsilon, RngStream stream,
                     const GenOptions& opts = {});

/// No instance: A, B, C, D independent Haar, resampled until Re Tr(ABCD) <= 0.1 N.
AbcdInstance gen_no(std::size_t n, RngStream stream, const GenOptions& opts = {});

/// Classifies Re Tr(ABCD) against the 0.9 N / 0.1 N thresholds.
PromiseStatus check_promise(const AbcdInstance& inst);
PromiseStatus classify_trace(cplx trace, std::size_t n);

// --- .abcd binary format -------------------------------------------------
//
//   offset  size  field
//   0       4     magic "ABCD"
//   4       4     version (u32 LE) = 1
//   8       8     n (u64 LE)
//   16      1     label (0 No, 1 Yes, 2 Unknown)
//   17      1     mode  (0 ExactInverse, 1 Perturbed, 2 HaarNo)
//   18      8     seed (u64 LE)
//   26      ...   A, B, C, D; each n*n (re, im) f64 LE pairs, row-major

inline constexpr std::uint32_t kInstanceFormatVersion = 1;

class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
  [[nodiscard]] std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

std::vector<std::uint8_t> encode_instance(const AbcdInstance& inst);
/// Matrices are not re-validated as special unitary: the format is bit-exact
/// and validation would reject nothing a writer of this library produced.
/// Use `validate_instance` for files from elsewhere.
AbcdInstance decode_instance(std::span<const std::uint8_t> bytes);
void validate_instance(const AbcdInstance& inst, const Tolerances& tol = default_tolerances());

void save_instance(const AbcdInstance& inst, const std::filesystem::path& path);
AbcdInstance load_instance(const std::filesystem::path& path);

}  // namespace abcd
