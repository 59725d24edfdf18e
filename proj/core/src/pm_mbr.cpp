#include "weavesafe/pm_mbr.hpp"

#include <algorithm>
#include <string>

#include "weavesafe/error.hpp"

namespace weavesafe::pm_mbr {
namespace {

constexpr std::string_view kModule = "pm_mbr";

[[noreturn]] void bad_params(const std::string& what) {
  throw Error(Errc::parameter_invalid, kModule, what);
}

void check_distinct(std::vector<unsigned> nodes, const char* what) {
  std::sort(nodes.begin(), nodes.end());
  if (std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end()) {
    throw Error(Errc::invalid_argument, kModule, std::string("duplicate ") + what);
  }
}

}  // namespace

std::size_t mbr_capacity(unsigned k, unsigned d) {
  return static_cast<std::size_t>(k) * (k + 1) / 2 + static_cast<std::size_t>(k) * (d - k);
}

std::size_t CodeParams::message_size() const { return mbr_capacity(k, d); }

CodeParams params_new(unsigned n, unsigned k, unsigned d, unsigned m) {
  if (m < gf::kMinDegree || m > gf::kMaxDegree) {
    bad_params("m=" + std::to_string(m) + " unsupported (need 3 <= m <= 16)");
  }
  if (k == 0) bad_params("k must be at least 1");
  if (k == 1) {
    bad_params(
        "k=1 cannot be secured: a single node has the same degrees of freedom as a "
        "data collector");
  }
  if (k > d) {
    bad_params("k=" + std::to_string(k) + " exceeds d=" + std::to_string(d));
  }
  if (d + 1 > n) {
    bad_params("d=" + std::to_string(d) + " must be at most n-1=" +
               std::to_string(n == 0 ? 0 : n - 1));
  }
  if (n > 255) bad_params("n=" + std::to_string(n) + " exceeds 255");
  const std::uint64_t needed = static_cast<std::uint64_t>(n) + 2ULL * d;
  if ((1ULL << m) < needed) {
    bad_params("field GF(2^" + std::to_string(m) + ") too small: need 2^m >= n+2d=" +
               std::to_string(needed));
  }
  return CodeParams{n, k, d, m};
}

MessageLayout::MessageLayout(unsigned k, unsigned d)
    : k_(k), d_(d), index_(static_cast<std::size_t>(d) * d, -1) {
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      const int b = static_cast<int>(positions_.size());
      positions_.emplace_back(i, j);
      index_[i * d + j] = b;
      index_[j * d + i] = b;
    }
  }
}

InnerCode::InnerCode(CodeParams params, Matrix psi)
    : params_(params), psi_(std::move(psi)), layout_(params.k, params.d) {
  if (psi_.rows() != params_.n || psi_.cols() != params_.d) {
    throw Error(Errc::dimension_mismatch, kModule, "encoding matrix must be n x d");
  }
  if (psi_.field().degree() != params_.m) {
    throw Error(Errc::invalid_argument, kModule, "encoding matrix field degree != m");
  }
}

void InnerCode::check_node(unsigned node) const {
  if (node < 1 || node > params_.n) {
    throw Error(Errc::invalid_argument, kModule,
                "node index out of range: " + std::to_string(node) + " (n=" +
                    std::to_string(params_.n) + ")");
  }
}

Matrix InnerCode::fill_message_matrix(std::span<const Element> codeword) const {
  if (codeword.size() != layout_.size()) {
    throw Error(Errc::dimension_mismatch, kModule,
                "codeword has " + std::to_string(codeword.size()) + " symbols, expected " +
                    std::to_string(layout_.size()));
  }
  Matrix m(field(), params_.d, params_.d);
  for (std::size_t b = 0; b < codeword.size(); ++b) {
    const auto [i, j] = layout_.position(b);
    m(i, j) = codeword[b];
    m(j, i) = codeword[b];
  }
  return m;
}

Vector InnerCode::extract_codeword(const Matrix& message) const {
  if (message.rows() != params_.d || message.cols() != params_.d) {
    throw Error(Errc::dimension_mismatch, kModule, "message matrix must be d x d");
  }
  Vector x(layout_.size());
  for (std::size_t b = 0; b < x.size(); ++b) {
    const auto [i, j] = layout_.position(b);
    x[b] = message(i, j);
  }
  return x;
}

Vector InnerCode::encode_node(std::span<const Element> codeword, unsigned node) const {
  check_node(node);
  const Matrix m = fill_message_matrix(codeword);
  const gf::Field& f = *field();
  Vector out(params_.d);
  for (std::size_t j = 0; j < params_.d; ++j) {
    Element acc;
    for (std::size_t l = 0; l < params_.d; ++l) acc += f.mul(psi_(node - 1, l), m(l, j));
    out[j] = acc;
  }
  return out;
}

Matrix InnerCode::encode_all(std::span<const Element> codeword) const {
  return linalg::mat_mul(psi_, fill_message_matrix(codeword));
}

Matrix InnerCode::generator_matrix(unsigned node) const {
  check_node(node);
  Matrix g(field(), params_.d, layout_.size());
  for (std::size_t i = 0; i < params_.d; ++i) {
    for (std::size_t j = 0; j < params_.d; ++j) {
      if (auto b = layout_.index(i, j)) g(i, *b) = psi_(node - 1, j);
    }
  }
  return g;
}

ReconstructionPlan::ReconstructionPlan(const InnerCode& code, std::vector<unsigned> nodes)
    : k_(code.params().k),
      d_(code.params().d),
      layout_(code.layout()),
      nodes_(std::move(nodes)),
      phi_inv_(code.field(), 0, 0),
      delta_(code.field(), 0, 0) {
  const unsigned k = code.params().k;
  const unsigned d = code.params().d;
  Matrix phi(code.field(), k, k);
  Matrix delta(code.field(), k, d - k);
  for (std::size_t r = 0; r < k; ++r) {
    const std::size_t row = nodes_[r] - 1;
    for (std::size_t c = 0; c < k; ++c) phi(r, c) = code.psi()(row, c);
    for (std::size_t c = k; c < d; ++c) delta(r, c - k) = code.psi()(row, c);
  }
  phi_inv_ = linalg::invert(phi);
  delta_ = std::move(delta);
}

Vector ReconstructionPlan::decode(std::span<const Vector> shares) const {
  const unsigned k = k_;
  const unsigned d = d_;
  if (shares.size() != k) {
    throw Error(Errc::insufficient_nodes, kModule, "reconstruction needs k shares");
  }
  const gf::FieldPtr& fp = phi_inv_.field_ptr();
  Matrix c(fp, k, d);
  for (std::size_t r = 0; r < k; ++r) {
    if (shares[r].size() != d) {
      throw Error(Errc::dimension_mismatch, kModule, "share must hold d symbols");
    }
    for (std::size_t j = 0; j < d; ++j) c(r, j) = shares[r][j];
  }
  // C = [Phi M1 + Delta M2^T | Phi M2].
  Matrix c_right(fp, k, d - k);
  Matrix c_left(fp, k, k);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t j = 0; j < k; ++j) c_left(r, j) = c(r, j);
    for (std::size_t j = k; j < d; ++j) c_right(r, j - k) = c(r, j);
  }
  const Matrix m2 = linalg::mat_mul(phi_inv_, c_right);
  Matrix rhs = linalg::mat_mul(delta_, linalg::transpose(m2));
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t j = 0; j < k; ++j) rhs(r, j) += c_left(r, j);
  }
  const Matrix m1 = linalg::mat_mul(phi_inv_, rhs);

  const MessageLayout& layout = layout_;
  Vector x(layout.size());
  for (std::size_t b = 0; b < x.size(); ++b) {
    const auto [i, j] = layout.position(b);
    x[b] = j < k ? m1(i, j) : m2(i, j - k);
  }
  return x;
}

ReconstructionPlan InnerCode::reconstruction_plan(std::vector<unsigned> nodes) const {
  if (nodes.size() != params_.k) {
    throw Error(Errc::insufficient_nodes, kModule,
                "reconstruction uses exactly k=" + std::to_string(params_.k) + " nodes");
  }
  for (unsigned node : nodes) check_node(node);
  check_distinct(nodes, "node index in reconstruction set");
  return ReconstructionPlan(*this, std::move(nodes));
}

Vector InnerCode::reconstruct(std::span<const NodeShare> shares) const {
  std::vector<unsigned> all;
  for (const auto& s : shares) {
    check_node(s.node);
    if (s.symbols.size() != params_.d) {
      throw Error(Errc::dimension_mismatch, kModule,
                  "share of node " + std::to_string(s.node) + " has " +
                      std::to_string(s.symbols.size()) + " symbols, expected d=" +
                      std::to_string(params_.d));
    }
    all.push_back(s.node);
  }
  check_distinct(all, "share for one node");
  if (shares.size() < params_.k) {
    throw Error(Errc::insufficient_nodes, kModule,
                "have " + std::to_string(shares.size()) + " shares, need k=" +
                    std::to_string(params_.k));
  }
  std::vector<unsigned> chosen(all.begin(), all.begin() + params_.k);
  std::vector<Vector> data;
  for (std::size_t i = 0; i < params_.k; ++i) data.push_back(shares[i].symbols);
  return reconstruction_plan(std::move(chosen)).decode(data);
}

Element InnerCode::helper_symbol(unsigned helper, unsigned failed,
                                 std::span<const Element> helper_share) const {
  check_node(helper);
  check_node(failed);
  if (helper == failed) {
    throw Error(Errc::invalid_argument, kModule, "failed node cannot act as helper");
  }
  if (helper_share.size() != params_.d) {
    throw Error(Errc::dimension_mismatch, kModule, "helper share must hold d symbols");
  }
  const gf::Field& f = *field();
  Element acc;
  for (std::size_t j = 0; j < params_.d; ++j) acc += f.mul(helper_share[j], psi_(failed - 1, j));
  return acc;
}

RepairPlan::RepairPlan(const InnerCode& code, unsigned failed, std::vector<unsigned> helpers)
    : failed_(failed), helpers_(std::move(helpers)), helper_inv_(code.field(), 0, 0) {
  helper_inv_ = linalg::invert(linalg::select_rows(
      code.psi(), [&] {
        std::vector<std::size_t> rows;
        for (unsigned h : helpers_) rows.push_back(h - 1);
        return rows;
      }()));
}

Vector RepairPlan::regenerate(std::span<const Element> symbols) const {
  if (symbols.size() != helpers_.size()) {
    throw Error(Errc::dimension_mismatch, kModule, "one symbol per helper expected");
  }
  // Helper symbols are psi_rep * (M psi_f^T); M symmetric gives psi_f M back.
  return linalg::mat_vec(helper_inv_, symbols);
}

RepairPlan InnerCode::repair_plan(unsigned failed, std::vector<unsigned> helpers) const {
  check_node(failed);
  if (helpers.size() != params_.d) {
    throw Error(Errc::insufficient_nodes, kModule,
                "repair needs exactly d=" + std::to_string(params_.d) + " helpers, got " +
                    std::to_string(helpers.size()));
  }
  for (unsigned h : helpers) {
    check_node(h);
    if (h == failed) {
      throw Error(Errc::invalid_argument, kModule,
                  "failed node " + std::to_string(failed) + " listed as its own helper");
    }
  }
  check_distinct(helpers, "helper");
  return RepairPlan(*this, failed, std::move(helpers));
}

Vector InnerCode::repair(unsigned failed, std::span<const HelperSymbol> helpers) const {
  std::vector<unsigned> nodes;
  Vector symbols;
  for (const auto& h : helpers) {
    nodes.push_back(h.node);
    symbols.push_back(h.symbol);
  }
  return repair_plan(failed, std::move(nodes)).regenerate(symbols);
}

}  // namespace weavesafe::pm_mbr
