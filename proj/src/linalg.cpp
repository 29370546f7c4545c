#include "drazinlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "drazinlab/errors.hpp"

namespace drazin {

namespace {

struct Svd {
  Eigen::VectorXd sigma;
  CMatrix u;
  CMatrix v;
};

Svd full_svd(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {svd.singularValues(), svd.matrixU(), svd.matrixV()};
}

Index count_above(const Eigen::VectorXd& sigma, double cutoff) {
  Index r = 0;
  for (Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff) {
      ++r;
    }
  }
  return r;
}

double relative_cutoff(const CMatrix& m, const Eigen::VectorXd& sigma, RankTol tol) {
  const double t = resolve_rank_tol(m, tol);
  const double smax = sigma.size() > 0 ? sigma(0) : 0.0;
  return t * smax;
}

} // namespace

double default_rank_tol(const CMatrix& m) {
  return static_cast<double>(std::max(m.rows(), m.cols())) * kRankTolPerDim;
}

double resolve_rank_tol(const CMatrix& m, RankTol tol) {
  if (!tol) {
    return default_rank_tol(m);
  }
  if (!(*tol >= 0.0) || !std::isfinite(*tol)) {
    throw InputError("rank tolerance must be a finite nonnegative number");
  }
  return *tol;
}

void require_finite(const CMatrix& m, std::string_view what) {
  if (!m.allFinite()) {
    throw InputError(std::string(what) + ": matrix has non-finite entries");
  }
}

void require_square(const CMatrix& m, std::string_view what) {
  if (m.rows() != m.cols()) {
    throw ShapeError(std::string(what) + ": expected a square matrix, got " +
                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

void require_same_shape(const CMatrix& a, const CMatrix& b, std::string_view what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(what) + ": shape mismatch " + std::to_string(a.rows()) +
                     "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                     "x" + std::to_string(b.cols()));
  }
}

Eigen::VectorXd singular_values(const CMatrix& m) {
  require_finite(m, "singular_values");
  if (m.size() == 0) {
    return Eigen::VectorXd(0);
  }
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues();
}

double norm2(const CMatrix& m) {
  const auto s = singular_values(m);
  return s.size() > 0 ? s(0) : 0.0;
}

int rank(const CMatrix& m, RankTol tol) {
  const auto s = singular_values(m);
  return static_cast<int>(count_above(s, relative_cutoff(m, s, tol)));
}

int rank_above(const CMatrix& m, double cutoff) {
  return static_cast<int>(count_above(singular_values(m), cutoff));
}

SubspaceBasis null_basis_below(const CMatrix& m, double cutoff) {
  require_finite(m, "null_basis");
  SubspaceBasis out;
  out.ambient_dim = m.cols();
  if (m.rows() == 0 || m.cols() == 0) {
    out.vectors = identity(m.cols());
    return out;
  }
  const Svd svd = full_svd(m);
  const Index r = count_above(svd.sigma, cutoff);
  out.vectors = svd.v.rightCols(m.cols() - r);
  return out;
}

SubspaceBasis range_basis_above(const CMatrix& m, double cutoff) {
  require_finite(m, "range_basis");
  SubspaceBasis out;
  out.ambient_dim = m.rows();
  if (m.rows() == 0 || m.cols() == 0) {
    out.vectors = CMatrix(m.rows(), 0);
    return out;
  }
  const Svd svd = full_svd(m);
  const Index r = count_above(svd.sigma, cutoff);
  out.vectors = svd.u.leftCols(r);
  return out;
}

SubspaceBasis null_basis(const CMatrix& m, RankTol tol) {
  const auto s = singular_values(m);
  return null_basis_below(m, relative_cutoff(m, s, tol));
}

SubspaceBasis range_basis(const CMatrix& m, RankTol tol) {
  const auto s = singular_values(m);
  return range_basis_above(m, relative_cutoff(m, s, tol));
}

CMatrix SubspaceBasis::projector() const {
  if (vectors.cols() == 0) {
    return CMatrix::Zero(ambient_dim, ambient_dim);
  }
  return vectors * vectors.adjoint();
}

double SubspaceBasis::orthonormality_defect() const {
  if (vectors.cols() == 0) {
    return 0.0;
  }
  const CMatrix gram = vectors.adjoint() * vectors;
  return (gram - identity(gram.rows())).cwiseAbs().maxCoeff();
}

double SubspaceBasis::distance(const CVector& v) const {
  const double nv = v.norm();
  if (nv == 0.0) {
    return 0.0;
  }
  const CVector residual = v - projector() * v;
  return residual.norm() / nv;
}

SubspaceBasis SubspaceBasis::zero(Index n) {
  SubspaceBasis out;
  out.ambient_dim = n;
  out.vectors = CMatrix(n, 0);
  return out;
}

SubspaceBasis SubspaceBasis::full(Index n) {
  SubspaceBasis out;
  out.ambient_dim = n;
  out.vectors = identity(n);
  return out;
}

SubspaceBasis SubspaceBasis::span(const CMatrix& columns, double cutoff) {
  if (columns.cols() == 0) {
    return zero(columns.rows());
  }
  const double scale = columns.colwise().norm().maxCoeff();
  SubspaceBasis out = range_basis_above(columns, cutoff * std::max(scale, 1e-300));
  out.tol = cutoff;
  return out;
}

SubspaceBasis intersect(const SubspaceBasis& a, const SubspaceBasis& b) {
  if (a.ambient_dim != b.ambient_dim) {
    throw ShapeError("intersect: ambient dimension mismatch " + std::to_string(a.ambient_dim) +
                     " vs " + std::to_string(b.ambient_dim));
  }
  const Index n = a.ambient_dim;
  const double cutoff = std::max({kSubspaceTol, a.tol, b.tol});
  if (a.empty() || b.empty()) {
    SubspaceBasis out = SubspaceBasis::zero(n);
    out.tol = cutoff;
    return out;
  }
  // v lies in both subspaces iff (I - Pa) v = 0 and (I - Pb) v = 0.
  CMatrix stacked(2 * n, n);
  stacked.topRows(n) = identity(n) - a.projector();
  stacked.bottomRows(n) = identity(n) - b.projector();
  SubspaceBasis out = null_basis_below(stacked, cutoff);
  out.tol = cutoff;
  return out;
}

SubspaceBasis subspace_sum(const SubspaceBasis& a, const SubspaceBasis& b) {
  if (a.ambient_dim != b.ambient_dim) {
    throw ShapeError("subspace_sum: ambient dimension mismatch " +
                     std::to_string(a.ambient_dim) + " vs " + std::to_string(b.ambient_dim));
  }
  const Index n = a.ambient_dim;
  const double cutoff = std::max({kSubspaceTol, a.tol, b.tol});
  CMatrix joined(n, a.dim() + b.dim());
  joined << a.vectors, b.vectors;
  SubspaceBasis out = range_basis_above(joined, cutoff);
  out.tol = cutoff;
  return out;
}

std::vector<SubspaceBasis> range_chain(const CMatrix& a, int k_max, RankTol tol) {
  require_square(a, "range_chain");
  require_finite(a, "range_chain");
  const auto s = singular_values(a);
  const double cutoff = relative_cutoff(a, s, tol);
  std::vector<SubspaceBasis> chain;
  chain.reserve(static_cast<std::size_t>(k_max) + 1);
  chain.push_back(SubspaceBasis::full(a.rows()));
  for (int k = 0; k < k_max; ++k) {
    const SubspaceBasis& prev = chain.back();
    if (prev.empty()) {
      chain.push_back(SubspaceBasis::zero(a.rows()));
      continue;
    }
    chain.push_back(range_basis_above(a * prev.vectors, cutoff));
  }
  return chain;
}

std::vector<SubspaceBasis> kernel_chain(const CMatrix& a, int k_max, RankTol tol) {
  require_square(a, "kernel_chain");
  require_finite(a, "kernel_chain");
  const Index n = a.rows();
  const auto s = singular_values(a);
  const double cutoff = relative_cutoff(a, s, tol);
  std::vector<SubspaceBasis> chain;
  chain.reserve(static_cast<std::size_t>(k_max) + 1);
  chain.push_back(SubspaceBasis::zero(n));
  for (int k = 0; k < k_max; ++k) {
    const CMatrix complement = identity(n) - chain.back().projector();
    chain.push_back(null_basis_below(complement * a, cutoff));
  }
  return chain;
}

CMatrix pinv(const CMatrix& m, RankTol tol) {
  require_finite(m, "pinv");
  if (m.size() == 0) {
    return CMatrix(m.cols(), m.rows());
  }
  const Svd svd = full_svd(m);
  const Index r = count_above(svd.sigma, relative_cutoff(m, svd.sigma, tol));
  return pinv_truncated(m, r);
}

CMatrix pinv_truncated(const CMatrix& m, Index keep) {
  require_finite(m, "pinv");
  CMatrix out = CMatrix::Zero(m.cols(), m.rows());
  if (m.size() == 0 || keep <= 0) {
    return out;
  }
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  keep = std::min<Index>(keep, s.size());
  for (Index i = 0; i < keep; ++i) {
    if (s(i) > 0.0) {
      out += svd.matrixV().col(i) * (1.0 / s(i)) * svd.matrixU().col(i).adjoint();
    }
  }
  return out;
}

CMatrix matrix_power(const CMatrix& m, int k) {
  require_square(m, "matrix_power");
  if (k < 0) {
    throw InputError("matrix_power: negative exponent");
  }
  CMatrix result = identity(m.rows());
  CMatrix base = m;
  while (k > 0) {
    if (k & 1) {
      result = result * base;
    }
    k >>= 1;
    if (k > 0) {
      base = base * base;
    }
  }
  return result;
}

CMatrix identity(Index n) { return CMatrix::Identity(n, n); }

double relative(double num, double scale) { return scale > 0.0 ? num / scale : num; }

} // namespace drazin
