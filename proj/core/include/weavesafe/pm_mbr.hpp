#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "weavesafe/gf2m.hpp"
#include "weavesafe/matrix.hpp"

namespace weavesafe::pm_mbr {

using gf::Element;
using linalg::Matrix;
using linalg::Vector;

class InnerCode;

// Validated (n, k, d, m). Node storage alpha = d and per-helper download
// beta = 1 (MBR point).
struct CodeParams {
  unsigned n = 0;
  unsigned k = 0;
  unsigned d = 0;
  unsigned m = 0;

  std::size_t alpha() const { return d; }
  std::size_t beta() const { return 1; }
  // B = sum_{i<k} (d - i) = k(k+1)/2 + k(d-k).
  std::size_t message_size() const;
  // Bs = B - 2, the payload of one coset-coded chunk.
  std::size_t secure_size() const { return message_size() - 2; }
  // Guesses tolerated by the secure codec: d + k - 4.
  std::size_t max_guesses() const { return d + k - 4; }

  friend bool operator==(const CodeParams&, const CodeParams&) = default;
};

std::size_t mbr_capacity(unsigned k, unsigned d);

// Rejects each violated constraint with its own message (Errc::parameter_invalid):
// 3 <= m <= 16, 2 <= k <= d <= n-1, n <= 255, 2^m >= n + 2d.
CodeParams params_new(unsigned n, unsigned k, unsigned d, unsigned m);

// Bijection between codeword index b and the upper-triangle positions (i, j),
// i <= j, i < k, of the symmetric d x d message matrix, in row-major order.
// All indices are 0-based.
class MessageLayout {
 public:
  MessageLayout(unsigned k, unsigned d);

  std::size_t size() const { return positions_.size(); }
  unsigned k() const { return k_; }
  unsigned d() const { return d_; }
  // Codeword index stored at M(i, j), or nullopt for the zero block.
  std::optional<std::size_t> index(std::size_t i, std::size_t j) const {
    const int b = index_[i * d_ + j];
    if (b < 0) return std::nullopt;
    return static_cast<std::size_t>(b);
  }
  std::pair<std::size_t, std::size_t> position(std::size_t b) const {
    return positions_[b];
  }

 private:
  unsigned k_;
  unsigned d_;
  std::vector<int> index_;
  std::vector<std::pair<std::size_t, std::size_t>> positions_;
};

struct NodeShare {
  unsigned node = 0;  // 1-based
  Vector symbols;
};

struct HelperSymbol {
  unsigned node = 0;  // 1-based
  Element symbol;
};

// Decoder for a fixed set of k nodes. Inverts the k x k block of the encoding
// matrix once and reuses it across chunks.
class ReconstructionPlan {
 public:
  const std::vector<unsigned>& nodes() const { return nodes_; }
  // shares[i] holds the d symbols of nodes()[i].
  Vector decode(std::span<const Vector> shares) const;

 private:
  friend class InnerCode;
  ReconstructionPlan(const InnerCode& code, std::vector<unsigned> nodes);

  unsigned k_;
  unsigned d_;
  MessageLayout layout_;
  std::vector<unsigned> nodes_;
  Matrix phi_inv_;
  Matrix delta_;
};

// Regeneration of one node from d fixed helpers.
class RepairPlan {
 public:
  unsigned failed() const { return failed_; }
  const std::vector<unsigned>& helpers() const { return helpers_; }
  // symbols[i] is the single symbol sent by helpers()[i].
  Vector regenerate(std::span<const Element> symbols) const;

 private:
  friend class InnerCode;
  RepairPlan(const InnerCode& code, unsigned failed, std::vector<unsigned> helpers);

  unsigned failed_;
  std::vector<unsigned> helpers_;
  Matrix helper_inv_;
};

// Product-matrix MBR code: node e stores psi_e * M for the symmetric message
// matrix M = [[M1, M2], [M2^T, 0]].
class InnerCode {
 public:
  // psi must be n x d over GF(2^m). Any k rows of its first k columns and any
  // d rows must be linearly independent; this is not rechecked here.
  InnerCode(CodeParams params, Matrix psi);

  const CodeParams& params() const { return params_; }
  const Matrix& psi() const { return psi_; }
  const gf::FieldPtr& field() const { return psi_.field_ptr(); }
  const MessageLayout& layout() const { return layout_; }

  Matrix fill_message_matrix(std::span<const Element> codeword) const;
  Vector extract_codeword(const Matrix& message) const;

  // Node indices are 1-based throughout.
  Vector encode_node(std::span<const Element> codeword, unsigned node) const;
  // Row e-1 holds the share of node e.
  Matrix encode_all(std::span<const Element> codeword) const;
  // d x B matrix G_e with G_e * X = (psi_e * M)^T.
  Matrix generator_matrix(unsigned node) const;

  ReconstructionPlan reconstruction_plan(std::vector<unsigned> nodes) const;
  // Uses the first k shares; needs at least k distinct nodes.
  Vector reconstruct(std::span<const NodeShare> shares) const;

  // Symbol that `helper` sends for the repair of `failed`: share . psi_failed.
  Element helper_symbol(unsigned helper, unsigned failed,
                        std::span<const Element> helper_share) const;
  RepairPlan repair_plan(unsigned failed, std::vector<unsigned> helpers) const;
  // Needs exactly d distinct helpers, none equal to `failed`.
  Vector repair(unsigned failed, std::span<const HelperSymbol> helpers) const;

  void check_node(unsigned node) const;

 private:
  CodeParams params_;
  Matrix psi_;
  MessageLayout layout_;
};

}  // namespace weavesafe::pm_mbr
