#include "gur/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace gur {

namespace {

// Flat index <-> per-subsystem digits, subsystem 0 most significant.
std::vector<int> digits_of(int flat, const std::vector<int>& dims) {
  std::vector<int> d(dims.size());
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    d[static_cast<std::size_t>(k)] = flat % dims[static_cast<std::size_t>(k)];
    flat /= dims[static_cast<std::size_t>(k)];
  }
  return d;
}

int flat_of(const std::vector<int>& digits, const std::vector<int>& dims) {
  int flat = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) flat = flat * dims[k] + digits[k];
  return flat;
}

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

double max_diff(const CMat& a, const CMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_diff: shape mismatch");
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

double max_abs(const CMat& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

CMat tensor(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

int total_dim(const std::vector<int>& dims) {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<int>());
}

CMat partial_trace(const CMat& m, const std::vector<int>& dims,
                   const std::vector<int>& keep) {
  require(m.rows() == m.cols(), "partial_trace: matrix not square");
  require(m.rows() == total_dim(dims), "partial_trace: dimension mismatch");
  std::vector<int> drop;
  for (int k = 0; k < static_cast<int>(dims.size()); ++k)
    if (std::find(keep.begin(), keep.end(), k) == keep.end()) drop.push_back(k);

  std::vector<int> keep_dims, drop_dims;
  for (int k : keep) keep_dims.push_back(dims[static_cast<std::size_t>(k)]);
  for (int k : drop) drop_dims.push_back(dims[static_cast<std::size_t>(k)]);
  const int dk = total_dim(keep_dims);
  const int dt = total_dim(drop_dims);

  CMat out = CMat::Zero(dk, dk);
  std::vector<int> full_i(dims.size()), full_j(dims.size());
  for (int i = 0; i < dk; ++i) {
    const auto di = digits_of(i, keep_dims);
    for (int j = 0; j < dk; ++j) {
      const auto dj = digits_of(j, keep_dims);
      Cplx acc = 0.0;
      for (int t = 0; t < dt; ++t) {
        const auto dtg = digits_of(t, drop_dims);
        for (std::size_t a = 0; a < keep.size(); ++a) {
          full_i[static_cast<std::size_t>(keep[a])] = di[a];
          full_j[static_cast<std::size_t>(keep[a])] = dj[a];
        }
        for (std::size_t a = 0; a < drop.size(); ++a) {
          full_i[static_cast<std::size_t>(drop[a])] = dtg[a];
          full_j[static_cast<std::size_t>(drop[a])] = dtg[a];
        }
        acc += m(flat_of(full_i, dims), flat_of(full_j, dims));
      }
      out(i, j) = acc;
    }
  }
  return out;
}

CMat partial_trace_drop(const CMat& m, const std::vector<int>& dims,
                        const std::vector<int>& drop) {
  std::vector<int> keep;
  for (int k = 0; k < static_cast<int>(dims.size()); ++k)
    if (std::find(drop.begin(), drop.end(), k) == drop.end()) keep.push_back(k);
  return partial_trace(m, dims, keep);
}

CMat embed_local(const CMat& op, const std::vector<int>& dims, int target) {
  require(target >= 0 && target < static_cast<int>(dims.size()),
          "embed_local: bad target");
  require(op.rows() == dims[static_cast<std::size_t>(target)] &&
              op.cols() == op.rows(),
          "embed_local: operator does not fit the target subsystem");
  std::vector<int> rest_dims;
  for (int k = 0; k < static_cast<int>(dims.size()); ++k)
    if (k != target) rest_dims.push_back(dims[static_cast<std::size_t>(k)]);
  return tensor_at(op, dims, target,
                   CMat::Identity(total_dim(rest_dims), total_dim(rest_dims)));
}

CMat tensor_at(const CMat& factor, const std::vector<int>& dims, int target,
               const CMat& rest) {
  const int d = total_dim(dims);
  std::vector<int> rest_dims;
  for (int k = 0; k < static_cast<int>(dims.size()); ++k)
    if (k != target) rest_dims.push_back(dims[static_cast<std::size_t>(k)]);
  require(factor.rows() == dims[static_cast<std::size_t>(target)],
          "tensor_at: factor does not fit the target subsystem");
  require(rest.rows() == total_dim(rest_dims),
          "tensor_at: remainder does not fit the untouched subsystems");

  CMat out(d, d);
  for (int i = 0; i < d; ++i) {
    const auto di = digits_of(i, dims);
    std::vector<int> ri;
    for (int k = 0; k < static_cast<int>(dims.size()); ++k)
      if (k != target) ri.push_back(di[static_cast<std::size_t>(k)]);
    const int fi = flat_of(ri, rest_dims);
    for (int j = 0; j < d; ++j) {
      const auto dj = digits_of(j, dims);
      std::vector<int> rj;
      for (int k = 0; k < static_cast<int>(dims.size()); ++k)
        if (k != target) rj.push_back(dj[static_cast<std::size_t>(k)]);
      out(i, j) = factor(di[static_cast<std::size_t>(target)],
                         dj[static_cast<std::size_t>(target)]) *
                  rest(fi, flat_of(rj, rest_dims));
    }
  }
  return out;
}

CMat haar_unitary(int dim, Rng& rng) {
  require(dim >= 1, "haar_unitary: dim must be positive");
  CMat z(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) z(i, j) = rng.normal_complex();
  Eigen::HouseholderQR<CMat> qr(z);
  CMat q = qr.householderQ();
  CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    Cplx d = r(j, j);
    q.col(j) *= (std::abs(d) > 0.0) ? d / std::abs(d) : Cplx(1.0, 0.0);
  }
  return q;
}

CMat random_density(int dim, int rank, Rng& rng) {
  require(rank >= 1 && rank <= dim, "random_density: rank out of range");
  CMat g(dim, rank);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < rank; ++j) g(i, j) = rng.normal_complex();
  CMat rho = g * g.adjoint();
  return rho / rho.trace().real();
}

CMat random_projector(int dim, int rank, Rng& rng) {
  require(rank >= 1 && rank <= dim, "random_projector: rank out of range");
  CMat u = haar_unitary(dim, rng);
  CMat v = u.leftCols(rank);
  return v * v.adjoint();
}

std::vector<CMat> random_observable(int dim, int num_outcomes, Rng& rng) {
  require(num_outcomes >= 1 && num_outcomes <= dim,
          "random_observable: outcome count out of range");
  // Uniform random composition of dim into num_outcomes positive parts:
  // choose num_outcomes - 1 distinct cut points in {1, .., dim-1}.
  std::vector<int> cuts(static_cast<std::size_t>(dim - 1));
  std::iota(cuts.begin(), cuts.end(), 1);
  for (int i = 0; i < num_outcomes - 1; ++i) {
    int j = rng.uniform_int(i, dim - 2);
    std::swap(cuts[static_cast<std::size_t>(i)],
              cuts[static_cast<std::size_t>(j)]);
  }
  std::vector<int> bounds(cuts.begin(), cuts.begin() + (num_outcomes - 1));
  bounds.push_back(0);
  bounds.push_back(dim);
  std::sort(bounds.begin(), bounds.end());

  CMat u = haar_unitary(dim, rng);
  std::vector<CMat> parts;
  for (int x = 0; x < num_outcomes; ++x) {
    const int lo = bounds[static_cast<std::size_t>(x)];
    const int hi = bounds[static_cast<std::size_t>(x) + 1];
    CMat v = u.middleCols(lo, hi - lo);
    parts.push_back(v * v.adjoint());
  }
  return parts;
}

bool is_psd(const CMat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  if (max_diff(m, m.adjoint()) > tol) return false;
  Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

double min_eigenvalue(const CMat& m) {
  CMat h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

CMat choi_matrix(const std::function<CMat(const CMat&)>& map, int dim) {
  CMat out = CMat::Zero(dim * dim, dim * dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      CMat unit = CMat::Zero(dim, dim);
      unit(i, j) = 1.0;
      CMat img = map(unit);
      out.block(i * dim, j * dim, dim, dim) = img;
    }
  return out;
}

}  // namespace gur
