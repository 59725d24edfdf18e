#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "weavesafe/matrix.hpp"
#include "weavesafe/weaksec.hpp"

namespace weavesafe::audit {

using gf::Element;
using linalg::Matrix;
using linalg::Vector;
using weaksec::SecureCodec;

// A parity-check matrix H (message S = H X) together with the observation
// matrix G_e of every node (node e sees G_e X).
struct SecrecyModel {
  std::string label;
  Matrix parity_check;
  std::vector<Matrix> node_generators;  // index e-1

  std::size_t message_size() const { return parity_check.rows(); }
  std::size_t node_count() const { return node_generators.size(); }
};

// H from the construction.
SecrecyModel construction_model(const SecureCodec& codec);
// H = identity: the bare PM-MBR code with no outer code.
SecrecyModel baseline_model(const SecureCodec& codec);

// Symbols of S_subset revealed by observing G X, in units of log q:
// rank H_sub + rank G - rank [H_sub; G].
std::size_t leakage(const Matrix& h_sub, const Matrix& g);

struct LeakageReport {
  unsigned node = 0;                // 1-based
  std::vector<std::size_t> subset;  // 0-based rows of H
  std::size_t leaked_symbols = 0;

  bool secure() const { return leaked_symbols == 0; }
};

LeakageReport leakage_report(const SecrecyModel& model, std::span<const std::size_t> subset,
                             unsigned node);

struct AuditLimits {
  // (subset, node) rank checks per verify_weak_secrecy call.
  std::uint64_t check_cap = 5'000'000;
  // Codewords enumerated by the mutual-information oracle.
  std::uint64_t oracle_cap = std::uint64_t{1} << 24;

  // Defaults, with WEAVESAFE_AUDIT_CAP overriding check_cap when set.
  static AuditLimits from_environment();
};

struct SecrecyVerdict {
  std::size_t guesses = 0;
  std::uint64_t checks = 0;
  std::optional<LeakageReport> counterexample;

  bool passed() const { return !counterexample.has_value(); }
};

// n * sum_{s=1}^{g+1} C(Bs, s), saturating.
std::uint64_t weak_secrecy_checks(const SecrecyModel& model, std::size_t guesses);

// Checks zero leakage for every subset of at most g+1 message symbols against
// every node. Subsets are visited by size, then lexicographically, then by
// node, so the returned counterexample is minimal. Throws
// Error(cap_exceeded) when the check count exceeds `check_cap`.
SecrecyVerdict verify_weak_secrecy(const SecrecyModel& model, std::size_t guesses,
                                   std::uint64_t check_cap = AuditLimits{}.check_cap);

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  friend bool operator==(const Rational&, const Rational&) = default;
  std::string to_string() const;
};

// I(S_subset ; G_e X) in units of log q, computed by enumerating every
// X in GF(q)^B and counting. Independent of the rank formula.
Rational exhaustive_mi_oracle(const SecrecyModel& model, std::span<const std::size_t> subset,
                              unsigned node,
                              std::uint64_t oracle_cap = AuditLimits{}.oracle_cap);

// ---------------------------------------------------------------------------
// Successive-decoding certificates.

enum class CertifyAlgorithm {
  h_prime,            // full rank of H'
  completion,         // [H_sub; G_e] completed to B x B, k >= 3
  completion_k2,      // same, k = 2
};

std::string_view to_string(CertifyAlgorithm algorithm);

struct RowOrigin {
  enum class Kind { parity_check, observation, appended };
  Kind kind = Kind::parity_check;
  unsigned type = 0;
  // Row of the coefficient matrix (parity_check/appended) or of G_e
  // (observation), 0-based.
  std::size_t source_row = 0;
};

struct DecodeStep {
  unsigned type = 0;
  std::vector<std::size_t> variables;  // codeword positions solved here
  std::vector<std::size_t> rows;       // rows of the system used
};

struct DecodeCertificate {
  CertifyAlgorithm algorithm = CertifyAlgorithm::h_prime;
  bool success = false;
  std::string failure;
  Matrix system;                   // T' (or H'), rows in order of origins
  std::vector<RowOrigin> origins;  // one per system row
  std::size_t base_rows = 0;       // rows present before appending
  std::vector<DecodeStep> steps;

  std::size_t appended_rows() const { return system.rows() - base_rows; }
  // Every codeword position solved exactly once.
  bool covers_all() const;
};

DecodeCertificate certify_H_prime(const SecureCodec& codec);
// subset holds 0-based rows of H; node is 1-based. k must be at least 2.
DecodeCertificate certify_completion(const SecureCodec& codec,
                                     std::span<const std::size_t> subset, unsigned node);

// Replays a successful certificate as a sequence of small solves: returns Y
// with system * Y = z. Throws if a step touches an undecoded variable outside
// its own set or its coefficient block is singular.
Vector replay_certificate(const DecodeCertificate& certificate, std::span<const Element> z);

// ---------------------------------------------------------------------------

struct CompletionSummary {
  std::uint64_t instances = 0;
  std::uint64_t failures = 0;
  std::size_t max_subset = 0;
};

struct AuditOptions {
  std::optional<std::size_t> guesses;  // default: d + k - 4
  bool baseline = false;               // audit the identity-H model instead
  bool completion_grid = true;
  AuditLimits limits;
};

struct AuditReport {
  pm_mbr::CodeParams params;
  std::size_t capacity = 0;         // B
  std::size_t secure_capacity = 0;  // Bs
  std::size_t max_guesses = 0;      // d + k - 4
  std::size_t perfect_capacity = 0; // one observed node
  std::size_t baseline_guesses = 0; // k - 2
  std::size_t improvement = 0;      // (d + k - 4) - (k - 2)
  std::vector<unsigned> theta;

  std::string subject;  // "construction" or "baseline"
  SecrecyVerdict verdict;
  // Observed, not guaranteed: construction at g_max + 1.
  std::optional<SecrecyVerdict> beyond_guarantee;
  std::optional<SecrecyVerdict> baseline_at_k_minus_2;
  std::optional<SecrecyVerdict> baseline_at_k_minus_1;

  bool h_prime_certified = false;
  std::size_t h_prime_steps = 0;
  std::optional<CompletionSummary> completion;

  // Key: value blocks.
  std::string to_text() const;
  std::string to_json() const;
};

// Throws Error(cap_exceeded) if the requested verification is too large;
// the optional sections are skipped instead.
AuditReport audit_report(const SecureCodec& codec, const AuditOptions& options);

}  // namespace weavesafe::audit
