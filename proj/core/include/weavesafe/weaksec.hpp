#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "weavesafe/matrix.hpp"
#include "weavesafe/pm_mbr.hpp"

namespace weavesafe::weaksec {

using gf::Element;
using linalg::Matrix;
using linalg::Vector;
using pm_mbr::CodeParams;

// Row-type cardinalities for the parity-check matrix; entry t-1 is the number
// of type-t rows. Requires 2 <= k <= d.
std::vector<unsigned> theta(unsigned k, unsigned d);

// Bs = B - 2.
std::size_t secure_capacity(unsigned k, unsigned d);
// g_max = d + k - 4.
std::size_t max_guesses(unsigned k, unsigned d);
// Capacity of the perfectly secure MBR code against l observed nodes,
// sum_{i=l}^{k-1} (d - i). Reported for comparison only.
std::size_t perfect_capacity(unsigned k, unsigned d, unsigned l);

// (n+d) x d Cauchy matrix on row points 0..n+d-1 and column points
// n+d..n+2d-1. The top n rows encode nodes; the bottom d rows supply the
// parity-check coefficients.
Matrix build_tilde_psi(const CodeParams& params, gf::FieldPtr field);

// Types are 1-based. The index set of type t lists the codeword positions of
// column t of the message matrix, top to bottom; the matching entry of
// coefficient_columns() is the message-matrix row j of that position, which
// selects the coefficient used at that position.
class TypeSystem {
 public:
  explicit TypeSystem(const pm_mbr::MessageLayout& layout);

  unsigned k() const { return k_; }
  unsigned d() const { return d_; }
  std::size_t codeword_size() const { return size_; }
  bool is_group_one(unsigned type) const { return type >= 1 && type <= k_; }

  const std::vector<std::size_t>& index_set(unsigned type) const;
  const std::vector<std::size_t>& coefficient_columns(unsigned type) const;

  // Length-B row with support exactly index_set(type); the value at the t-th
  // index is coeffs[t]. Extra coefficients are ignored.
  Vector make_type_row(unsigned type, std::span<const Element> coeffs) const;

 private:
  void check_type(unsigned type) const;

  unsigned k_;
  unsigned d_;
  std::size_t size_;
  std::vector<std::vector<std::size_t>> index_sets_;
  std::vector<std::vector<std::size_t>> columns_;
};

// Which type a parity-check row has and which coefficient-matrix row (0-based)
// provides its values.
struct RowTag {
  unsigned type = 0;
  std::size_t coeff_row = 0;

  friend bool operator==(const RowTag&, const RowTag&) = default;
};

struct TaggedMatrix {
  Matrix matrix;
  std::vector<RowTag> tags;
};

// (B-2) x B parity-check matrix: blocks H_2, ..., H_d, where H_t uses
// coefficient rows 0..theta_t-1.
TaggedMatrix build_H(const CodeParams& params, const TypeSystem& types,
                     const Matrix& psi_hat);
// B x B extension of H: appends a type-k row from coefficient row d and a
// type-1 row from coefficient row 1.
TaggedMatrix build_H_prime(const CodeParams& params, const TypeSystem& types,
                           const TaggedMatrix& h, const Matrix& psi_hat);

// Coset code: message S (Bs symbols) is the syndrome H X of a uniformly
// chosen codeword X.
class OuterCode {
 public:
  OuterCode(const CodeParams& params, Matrix psi_hat);

  const std::vector<unsigned>& theta() const { return theta_; }
  const Matrix& psi_hat() const { return psi_hat_; }
  const TypeSystem& types() const { return types_; }
  const Matrix& H() const { return h_.matrix; }
  const std::vector<RowTag>& H_tags() const { return h_.tags; }
  const Matrix& H_prime() const { return h_prime_.matrix; }
  const std::vector<RowTag>& H_prime_tags() const { return h_prime_.tags; }

  // X = H'^{-1} (S || r). For uniform r this picks X uniformly from the coset
  // { X : H X = S }.
  Vector encode(std::span<const Element> message, std::span<const Element> randomness) const;
  Vector decode(std::span<const Element> codeword) const;

  static constexpr std::size_t kRandomSymbols = 2;

 private:
  CodeParams params_;
  Matrix psi_hat_;
  TypeSystem types_;
  std::vector<unsigned> theta_;
  TaggedMatrix h_;
  TaggedMatrix h_prime_;
  Matrix h_prime_inv_;
};

// Inner PM-MBR code and outer coset code built from one Cauchy matrix.
class SecureCodec {
 public:
  static SecureCodec create(const CodeParams& params);
  SecureCodec(const CodeParams& params, Matrix tilde_psi);

  const CodeParams& params() const { return params_; }
  const gf::FieldPtr& field() const { return tilde_psi_.field_ptr(); }
  const Matrix& tilde_psi() const { return tilde_psi_; }
  const pm_mbr::InnerCode& inner() const { return inner_; }
  const OuterCode& outer() const { return outer_; }
  const TypeSystem& types() const { return outer_.types(); }

  Vector coset_encode(std::span<const Element> message,
                      std::span<const Element> randomness) const {
    return outer_.encode(message, randomness);
  }
  Vector coset_decode(std::span<const Element> codeword) const {
    return outer_.decode(codeword);
  }

 private:
  CodeParams params_;
  Matrix tilde_psi_;
  pm_mbr::InnerCode inner_;
  OuterCode outer_;
};

}  // namespace weavesafe::weaksec
