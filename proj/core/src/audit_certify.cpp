#include <algorithm>
#include <numeric>
#include <string>

#include "weavesafe/audit.hpp"
#include "weavesafe/error.hpp"

namespace weavesafe::audit {
namespace {

constexpr std::string_view kModule = "audit";

// Builds T' row by row and records the successive-decoding steps.
class Certifier {
 public:
  Certifier(const SecureCodec& codec, CertifyAlgorithm algorithm)
      : codec_(codec),
        types_(codec.types()),
        d_(codec.params().d),
        k_(codec.params().k),
        decoded_(codec.params().message_size(), false),
        rows_of_type_(d_ + 1),
        coeff_used_(d_ + 1, std::vector<bool>(d_, false)) {
    cert_.algorithm = algorithm;
    cert_.system = Matrix(codec.field(), 0, codec.params().message_size());
  }

  unsigned k() const { return k_; }
  unsigned d() const { return d_; }
  std::size_t lambda(unsigned type) const { return rows_of_type_[type].size(); }
  bool failed() const { return !cert_.failure.empty(); }

  void add_row(std::span<const Element> row, RowOrigin origin) {
    rows_of_type_[origin.type].push_back(cert_.system.rows());
    if (origin.kind != RowOrigin::Kind::observation) {
      coeff_used_[origin.type][origin.source_row] = true;
    }
    cert_.system.append_row(row);
    cert_.origins.push_back(origin);
  }

  void seal_base() { cert_.base_rows = cert_.system.rows(); }

  // Appends `count` rows of `type` built from the lowest coefficient rows not
  // yet used by that type.
  bool append(unsigned type, std::size_t count) {
    const Matrix& psi_hat = codec_.outer().psi_hat();
    for (std::size_t r = 0; r < d_ && count > 0; ++r) {
      if (coeff_used_[type][r]) continue;
      add_row(types_.make_type_row(type, psi_hat.row(r)),
              {RowOrigin::Kind::appended, type, r});
      --count;
    }
    if (count > 0) {
      return fail("no unused coefficient row left for type " + std::to_string(type));
    }
    return true;
  }

  // Solves the undecoded variables of `type` with all rows of that type.
  bool decode(unsigned type) {
    if (failed()) return false;
    std::vector<std::size_t> unknowns;
    for (std::size_t b : types_.index_set(type)) {
      if (!decoded_[b]) unknowns.push_back(b);
    }
    const auto& rows = rows_of_type_[type];
    if (rows.size() != unknowns.size()) {
      return fail("type " + std::to_string(type) + " has " + std::to_string(rows.size()) +
                  " rows for " + std::to_string(unknowns.size()) + " unknowns");
    }
    if (linalg::rank(linalg::submatrix(cert_.system, rows, unknowns)) != rows.size()) {
      return fail("singular coefficient block for type " + std::to_string(type));
    }
    for (std::size_t b : unknowns) decoded_[b] = true;
    cert_.steps.push_back(DecodeStep{type, std::move(unknowns), rows});
    return true;
  }

  bool fail(std::string why) {
    if (cert_.failure.empty()) cert_.failure = std::move(why);
    return false;
  }

  DecodeCertificate finish() {
    if (!failed() && !cert_.covers_all()) fail("decoding did not cover every variable");
    if (!failed() && cert_.system.rows() != cert_.system.cols()) {
      fail("completed system is not square");
    }
    cert_.success = !failed();
    return std::move(cert_);
  }

  // Types ordered by row count, ties by ascending type.
  std::vector<unsigned> sorted_types(unsigned first, unsigned last) const {
    std::vector<unsigned> out(last - first + 1);
    std::iota(out.begin(), out.end(), first);
    std::stable_sort(out.begin(), out.end(),
                     [&](unsigned a, unsigned b) { return lambda(a) < lambda(b); });
    return out;
  }

 private:
  const SecureCodec& codec_;
  const weaksec::TypeSystem& types_;
  unsigned d_;
  unsigned k_;
  DecodeCertificate cert_;
  std::vector<bool> decoded_;
  std::vector<std::vector<std::size_t>> rows_of_type_;
  std::vector<std::vector<bool>> coeff_used_;
};

// Appends rows of `type` up to `needed`, or declares failure when T already
// holds more rows of that type than unknowns remain.
bool top_up_and_decode(Certifier& c, unsigned type, std::size_t needed) {
  if (c.lambda(type) > needed) {
    return c.fail("type " + std::to_string(type) + " has " + std::to_string(c.lambda(type)) +
                  " rows but only " + std::to_string(needed) + " unknowns remain");
  }
  return c.append(type, needed - c.lambda(type)) && c.decode(type);
}

// Group-II types with two rows, then type j_2, then the remaining group-II
// types, then type 1. Shared tail of both completion algorithms.
void finish_completion(Certifier& c, const std::vector<unsigned>& group_one,
                       const std::vector<unsigned>& group_two, std::size_t gamma1) {
  std::size_t pairs = 0;
  for (unsigned t : group_two) pairs += c.lambda(t) == 2 ? 1 : 0;
  const std::size_t singles = group_two.size() - pairs;

  for (std::size_t i = singles; i < group_two.size(); ++i) {
    if (!c.decode(group_two[i])) return;
  }
  gamma1 -= pairs;

  if (!top_up_and_decode(c, group_one[1], gamma1)) return;

  for (std::size_t i = 0; i < singles; ++i) {
    if (!c.decode(group_two[i])) return;
  }
  // G_e always contributes a type-1 row, so this append is normally empty.
  const unsigned last = group_one[0];
  if (c.lambda(last) == 0 && !c.append(last, 1)) return;
  c.decode(last);
}

}  // namespace

std::string_view to_string(CertifyAlgorithm algorithm) {
  switch (algorithm) {
    case CertifyAlgorithm::h_prime: return "h_prime";
    case CertifyAlgorithm::completion: return "completion";
    case CertifyAlgorithm::completion_k2: return "completion_k2";
  }
  return "unknown";
}

bool DecodeCertificate::covers_all() const {
  std::vector<int> seen(system.cols(), 0);
  for (const auto& step : steps) {
    for (std::size_t b : step.variables) ++seen[b];
  }
  return std::all_of(seen.begin(), seen.end(), [](int n) { return n == 1; });
}

DecodeCertificate certify_H_prime(const SecureCodec& codec) {
  Certifier c(codec, CertifyAlgorithm::h_prime);
  const auto& outer = codec.outer();
  for (std::size_t r = 0; r < outer.H().rows(); ++r) {
    const auto& tag = outer.H_tags()[r];
    c.add_row(outer.H().row(r), {RowOrigin::Kind::parity_check, tag.type, tag.coeff_row});
  }
  c.seal_base();
  const unsigned k = c.k();
  const unsigned d = c.d();
  // H' = H + type-k row from coefficient row d + type-1 row from row 1.
  c.append(k, 1);
  c.append(1, 1);

  for (unsigned p = k; p >= 2; --p) c.decode(p);
  for (unsigned t = k + 1; t <= d; ++t) c.decode(t);
  c.decode(1);
  return c.finish();
}

DecodeCertificate certify_completion(const SecureCodec& codec,
                                     std::span<const std::size_t> subset, unsigned node) {
  const auto& params = codec.params();
  if (params.k < 2) {
    throw Error(Errc::parameter_invalid, kModule, "certificates need k >= 2");
  }
  codec.inner().check_node(node);
  const auto& outer = codec.outer();
  Certifier c(codec, params.k >= 3 ? CertifyAlgorithm::completion
                                   : CertifyAlgorithm::completion_k2);

  std::vector<std::size_t> sorted(subset.begin(), subset.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(Errc::invalid_argument, kModule, "subset has repeated rows");
  }
  for (std::size_t r : subset) {
    if (r >= outer.H().rows()) {
      throw Error(Errc::invalid_argument, kModule, "subset row outside H");
    }
    const auto& tag = outer.H_tags()[r];
    c.add_row(outer.H().row(r), {RowOrigin::Kind::parity_check, tag.type, tag.coeff_row});
  }
  const Matrix g = codec.inner().generator_matrix(node);
  for (std::size_t i = 0; i < g.rows(); ++i) {
    c.add_row(g.row(i), {RowOrigin::Kind::observation, static_cast<unsigned>(i + 1), i});
  }
  c.seal_base();

  const unsigned k = c.k();
  const unsigned d = c.d();
  const auto group_one = c.sorted_types(1, k);
  const auto group_two = k < d ? c.sorted_types(k + 1, d) : std::vector<unsigned>{};

  std::size_t gamma1 = d;
  // group_one[p-1] is j_p.
  for (unsigned p = k; p >= 3; --p) {
    if (!top_up_and_decode(c, group_one[p - 1], gamma1)) break;
    --gamma1;
  }
  if (!c.failed()) finish_completion(c, group_one, group_two, gamma1);
  return c.finish();
}

Vector replay_certificate(const DecodeCertificate& certificate, std::span<const Element> z) {
  const Matrix& t = certificate.system;
  if (!certificate.success) {
    throw Error(Errc::invalid_argument, kModule, "cannot replay a failed certificate");
  }
  if (z.size() != t.rows()) {
    throw Error(Errc::dimension_mismatch, kModule, "right-hand side length != system rows");
  }
  const gf::Field& f = t.field();
  Vector y(t.cols());
  std::vector<bool> known(t.cols(), false);
  for (const auto& step : certificate.steps) {
    std::vector<bool> in_step(t.cols(), false);
    for (std::size_t b : step.variables) in_step[b] = true;
    Vector rhs;
    for (std::size_t r : step.rows) {
      Element acc = z[r];
      for (std::size_t c = 0; c < t.cols(); ++c) {
        const Element coef = t(r, c);
        if (coef.is_zero() || in_step[c]) continue;
        if (!known[c]) {
          throw Error(Errc::inconsistent_system, kModule,
                      "step for type " + std::to_string(step.type) +
                          " depends on an undecoded variable");
        }
        acc -= f.mul(coef, y[c]);
      }
      rhs.push_back(acc);
    }
    const Vector solved =
        linalg::mat_vec(linalg::invert(linalg::submatrix(t, step.rows, step.variables)), rhs);
    for (std::size_t i = 0; i < step.variables.size(); ++i) {
      y[step.variables[i]] = solved[i];
      known[step.variables[i]] = true;
    }
  }
  if (!std::all_of(known.begin(), known.end(), [](bool v) { return v; })) {
    throw Error(Errc::inconsistent_system, kModule, "certificate leaves variables unsolved");
  }
  return y;
}

}  // namespace weavesafe::audit
