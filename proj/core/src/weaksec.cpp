#include "weavesafe/weaksec.hpp"

#include <numeric>
#include <string>

#include "weavesafe/error.hpp"

namespace weavesafe::weaksec {
namespace {

constexpr std::string_view kModule = "weaksec";

void check_kd(unsigned k, unsigned d) {
  if (k < 2) throw Error(Errc::parameter_invalid, kModule, "k must be at least 2");
  if (k > d) throw Error(Errc::parameter_invalid, kModule, "k must not exceed d");
}

std::vector<std::size_t> iota_rows(std::size_t first, std::size_t count) {
  std::vector<std::size_t> rows(count);
  std::iota(rows.begin(), rows.end(), first);
  return rows;
}

}  // namespace

std::vector<unsigned> theta(unsigned k, unsigned d) {
  check_kd(k, d);
  std::vector<unsigned> t(d, 0);
  for (unsigned i = 2; i <= k - 1; ++i) t[i - 1] = d - k + i;
  t[k - 1] = d - 1;
  for (unsigned i = k + 1; i <= d; ++i) t[i - 1] = 1;
  return t;
}

std::size_t secure_capacity(unsigned k, unsigned d) {
  check_kd(k, d);
  return pm_mbr::mbr_capacity(k, d) - 2;
}

std::size_t max_guesses(unsigned k, unsigned d) {
  check_kd(k, d);
  return d + k - 4;
}

std::size_t perfect_capacity(unsigned k, unsigned d, unsigned l) {
  if (l >= k || k > d) {
    throw Error(Errc::invalid_argument, kModule, "need 0 <= l < k <= d");
  }
  std::size_t total = 0;
  for (unsigned i = l; i < k; ++i) total += d - i;
  return total;
}

Matrix build_tilde_psi(const CodeParams& params, gf::FieldPtr field) {
  const std::uint32_t needed = params.n + 2 * params.d;
  if (field->order() < needed) {
    throw Error(Errc::parameter_invalid, kModule,
                "GF(2^" + std::to_string(field->degree()) + ") has fewer than n+2d=" +
                    std::to_string(needed) + " elements");
  }
  std::vector<Element> rows;
  std::vector<Element> cols;
  for (std::uint32_t v = 0; v < params.n + params.d; ++v) rows.emplace_back(v);
  for (std::uint32_t v = params.n + params.d; v < needed; ++v) cols.emplace_back(v);
  return linalg::cauchy(std::move(field), rows, cols);
}

TypeSystem::TypeSystem(const pm_mbr::MessageLayout& layout)
    : k_(layout.k()), d_(layout.d()), size_(layout.size()), index_sets_(d_), columns_(d_) {
  for (std::size_t t = 0; t < d_; ++t) {
    for (std::size_t j = 0; j < d_; ++j) {
      if (auto b = layout.index(j, t)) {
        index_sets_[t].push_back(*b);
        columns_[t].push_back(j);
      }
    }
  }
}

void TypeSystem::check_type(unsigned type) const {
  if (type < 1 || type > d_) {
    throw Error(Errc::invalid_argument, kModule,
                "type " + std::to_string(type) + " outside 1.." + std::to_string(d_));
  }
}

const std::vector<std::size_t>& TypeSystem::index_set(unsigned type) const {
  check_type(type);
  return index_sets_[type - 1];
}

const std::vector<std::size_t>& TypeSystem::coefficient_columns(unsigned type) const {
  check_type(type);
  return columns_[type - 1];
}

Vector TypeSystem::make_type_row(unsigned type, std::span<const Element> coeffs) const {
  const auto& ind = index_set(type);
  if (coeffs.size() < ind.size()) {
    throw Error(Errc::dimension_mismatch, kModule,
                "type " + std::to_string(type) + " needs " + std::to_string(ind.size()) +
                    " coefficients");
  }
  Vector row(size_);
  for (std::size_t t = 0; t < ind.size(); ++t) row[ind[t]] = coeffs[t];
  return row;
}

TaggedMatrix build_H(const CodeParams& params, const TypeSystem& types,
                     const Matrix& psi_hat) {
  if (psi_hat.rows() != params.d || psi_hat.cols() != params.d) {
    throw Error(Errc::dimension_mismatch, kModule, "coefficient matrix must be d x d");
  }
  const auto th = theta(params.k, params.d);
  TaggedMatrix out{Matrix(psi_hat.field_ptr(), 0, types.codeword_size()), {}};
  for (unsigned type = 2; type <= params.d; ++type) {
    for (std::size_t p = 0; p < th[type - 1]; ++p) {
      out.matrix.append_row(types.make_type_row(type, psi_hat.row(p)));
      out.tags.push_back({type, p});
    }
  }
  return out;
}

TaggedMatrix build_H_prime(const CodeParams& params, const TypeSystem& types,
                           const TaggedMatrix& h, const Matrix& psi_hat) {
  TaggedMatrix out = h;
  out.matrix.append_row(types.make_type_row(params.k, psi_hat.row(params.d - 1)));
  out.tags.push_back({params.k, params.d - 1});
  out.matrix.append_row(types.make_type_row(1, psi_hat.row(0)));
  out.tags.push_back({1, 0});
  return out;
}

OuterCode::OuterCode(const CodeParams& params, Matrix psi_hat)
    : params_(params),
      psi_hat_(std::move(psi_hat)),
      types_(pm_mbr::MessageLayout(params.k, params.d)),
      theta_(weaksec::theta(params.k, params.d)),
      h_(build_H(params_, types_, psi_hat_)),
      h_prime_(build_H_prime(params_, types_, h_, psi_hat_)),
      h_prime_inv_(linalg::invert(h_prime_.matrix)) {}

Vector OuterCode::encode(std::span<const Element> message,
                         std::span<const Element> randomness) const {
  const std::size_t bs = h_.matrix.rows();
  if (message.size() != bs) {
    throw Error(Errc::dimension_mismatch, kModule,
                "message has " + std::to_string(message.size()) + " symbols, expected Bs=" +
                    std::to_string(bs));
  }
  if (randomness.size() != kRandomSymbols) {
    throw Error(Errc::dimension_mismatch, kModule, "coset encoding takes 2 random symbols");
  }
  Vector z(message.begin(), message.end());
  z.insert(z.end(), randomness.begin(), randomness.end());
  return linalg::mat_vec(h_prime_inv_, z);
}

Vector OuterCode::decode(std::span<const Element> codeword) const {
  if (codeword.size() != h_.matrix.cols()) {
    throw Error(Errc::dimension_mismatch, kModule,
                "codeword has " + std::to_string(codeword.size()) + " symbols, expected B=" +
                    std::to_string(h_.matrix.cols()));
  }
  return linalg::mat_vec(h_.matrix, codeword);
}

SecureCodec SecureCodec::create(const CodeParams& params) {
  auto field = gf::Field::create(params.m);
  return SecureCodec(params, build_tilde_psi(params, std::move(field)));
}

SecureCodec::SecureCodec(const CodeParams& params, Matrix tilde_psi)
    : params_(params),
      tilde_psi_(std::move(tilde_psi)),
      inner_(params_, linalg::select_rows(tilde_psi_, iota_rows(0, params_.n))),
      outer_(params_, linalg::select_rows(tilde_psi_, iota_rows(params_.n, params_.d))) {
  if (tilde_psi_.rows() != params_.n + params_.d || tilde_psi_.cols() != params_.d) {
    throw Error(Errc::dimension_mismatch, kModule, "tilde psi must be (n+d) x d");
  }
}

}  // namespace weavesafe::weaksec
