#include "drazinlab/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "drazinlab/errors.hpp"

namespace drazin {

double PortableRng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

int PortableRng::uniform_int(int lo, int hi) {
  if (hi < lo) {
    throw InputError("uniform_int: empty range");
  }
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(static_cast<std::uint64_t>(uniform() * static_cast<double>(span)));
}

double PortableRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) {
    u1 = uniform();
  }
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Complex PortableRng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

Complex PortableRng::phase() { return std::polar(1.0, 2.0 * std::numbers::pi * uniform()); }

CMatrix random_unitary(PortableRng& rng, Index n) {
  CMatrix g(n, n);
  for (Index c = 0; c < n; ++c) {
    for (Index r = 0; r < n; ++r) {
      g(r, c) = rng.complex_normal();
    }
  }
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * identity(n);
  // Fix the phases so the distribution is Haar.
  const CMatrix rr = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < n; ++i) {
    const Complex d = rr(i, i);
    const double mag = std::abs(d);
    if (mag > 0.0) {
      q.col(i) *= d / mag;
    }
  }
  return q;
}

CMatrix random_nilpotent_block(PortableRng& rng, Index size) {
  CMatrix block = CMatrix::Zero(size, size);
  for (Index r = 0; r < size; ++r) {
    for (Index c = r + 1; c < size; ++c) {
      if (c == r + 1) {
        // Superdiagonal bounded away from zero keeps the order exactly `size`.
        block(r, c) = rng.uniform(0.5, 1.5) * rng.phase();
      } else {
        block(r, c) = 0.5 * rng.complex_normal();
      }
    }
  }
  return block;
}

CMatrix random_similarity_transform(PortableRng& rng, const CMatrix& b, double condition,
                                    CMatrix* s_out) {
  const Index n = b.rows();
  const CMatrix u = random_unitary(rng, n);
  const CMatrix v = random_unitary(rng, n);
  Eigen::VectorXd sigma(n);
  const double log_cond = std::log(std::max(condition, 1.0));
  for (Index i = 0; i < n; ++i) {
    sigma(i) = std::exp(rng.uniform(0.0, log_cond));
  }
  sigma(0) = 1.0;
  if (n > 1) {
    sigma(n - 1) = std::max(condition, 1.0);
  }
  const CMatrix s = u * sigma.cast<Complex>().asDiagonal() * v.adjoint();
  const CMatrix s_inv = v * sigma.cwiseInverse().cast<Complex>().asDiagonal() * u.adjoint();
  if (s_out != nullptr) {
    *s_out = s;
  }
  return s * b * s_inv;
}

CMatrix direct_sum(const std::vector<CMatrix>& blocks) {
  Index n = 0;
  for (const auto& b : blocks) {
    require_square(b, "direct_sum");
    n += b.rows();
  }
  CMatrix out = CMatrix::Zero(n, n);
  Index at = 0;
  for (const auto& b : blocks) {
    out.block(at, at, b.rows(), b.cols()) = b;
    at += b.rows();
  }
  return out;
}

CMatrix jordan_block(Index n, Complex lambda) {
  CMatrix j = lambda * identity(n);
  for (Index i = 0; i + 1 < n; ++i) {
    j(i, i + 1) = 1.0;
  }
  return j;
}

CorpusMatrix generate_core_nilpotent(PortableRng& rng, const CorpusOptions& options) {
  if (options.min_dim < 1 || options.max_dim < options.min_dim || options.max_block < 1) {
    throw InputError("generate_core_nilpotent: invalid dimension options");
  }
  CorpusMatrix out;
  const int n = rng.uniform_int(options.min_dim, options.max_dim);
  out.nil_dim = rng.uniform_int(0, n);
  out.core_dim = n - out.nil_dim;

  std::vector<CMatrix> blocks;
  if (out.core_dim > 0) {
    const CMatrix u = random_unitary(rng, out.core_dim);
    CVector eig(out.core_dim);
    for (int i = 0; i < out.core_dim; ++i) {
      eig(i) = rng.uniform(options.core_min, options.core_max) * rng.phase();
    }
    blocks.push_back(u * eig.asDiagonal() * u.adjoint());
  }
  int remaining = out.nil_dim;
  while (remaining > 0) {
    const int size = rng.uniform_int(1, std::min(remaining, options.max_block));
    out.nil_blocks.push_back(size);
    out.index = std::max(out.index, size);
    blocks.push_back(random_nilpotent_block(rng, size));
    remaining -= size;
  }
  out.condition = rng.uniform(1.0, options.max_condition);
  out.a = random_similarity_transform(rng, direct_sum(blocks), out.condition, &out.similarity);
  return out;
}

std::vector<CorpusMatrix> generate_corpus(std::uint64_t seed, int count,
                                          const CorpusOptions& options) {
  PortableRng rng(seed);
  std::vector<CorpusMatrix> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    out.push_back(generate_core_nilpotent(rng, options));
  }
  return out;
}

} // namespace drazin
