#pragma once

#include <Eigen/SVD>

#include "drazinlab/corpus.hpp"
#include "drazinlab/linalg.hpp"

namespace testing {

using drazin::CMatrix;
using drazin::Complex;
using drazin::Index;

inline CMatrix random_matrix(drazin::PortableRng& rng, Index rows, Index cols) {
  CMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      m(r, c) = rng.complex_normal();
    }
  }
  return m;
}

/// Rank-k matrix as a product of random factors.
inline CMatrix random_rank(drazin::PortableRng& rng, Index n, Index k) {
  if (k == 0) {
    return CMatrix::Zero(n, n);
  }
  return random_matrix(rng, n, k) * random_matrix(rng, k, n);
}

/// Rank through Eigen's SVD with an absolute cutoff, independent of the
/// library's chain code.
inline int svd_rank(const CMatrix& m, double cutoff) {
  if (m.size() == 0) {
    return 0;
  }
  Eigen::JacobiSVD<CMatrix> svd(m);
  int r = 0;
  for (Index i = 0; i < svd.singularValues().size(); ++i) {
    r += svd.singularValues()(i) > cutoff ? 1 : 0;
  }
  return r;
}

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

inline CMatrix diag(std::initializer_list<Complex> values) {
  CMatrix m = CMatrix::Zero(static_cast<Index>(values.size()), static_cast<Index>(values.size()));
  Index i = 0;
  for (const Complex& v : values) {
    m(i, i) = v;
    ++i;
  }
  return m;
}

} // namespace testing
