#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "gur/rng.hpp"

namespace gur {

using Cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

// Max-norm of the entrywise difference, the equality metric used throughout.
double max_diff(const CMat& a, const CMat& b);

// Largest entry magnitude.
double max_abs(const CMat& m);

// Kronecker product. The left factor owns the slower-varying (most
// significant) index, so tensor(A, B) acts on subsystem order [A, B].
CMat tensor(const CMat& a, const CMat& b);

// Product of the listed subsystem dimensions.
int total_dim(const std::vector<int>& dims);

// Trace out every subsystem not listed in `keep` (ascending indices).
// The result acts on the kept subsystems in their original relative order.
CMat partial_trace(const CMat& m, const std::vector<int>& dims,
                   const std::vector<int>& keep);

// Trace out exactly the subsystems listed in `drop`.
CMat partial_trace_drop(const CMat& m, const std::vector<int>& dims,
                        const std::vector<int>& drop);

// op on subsystem `target`, identity elsewhere, in canonical subsystem order.
CMat embed_local(const CMat& op, const std::vector<int>& dims, int target);

// Tensor a single-subsystem factor at position `target` against a joint
// operator on the remaining subsystems (given in their original order).
CMat tensor_at(const CMat& factor, const std::vector<int>& dims, int target,
               const CMat& rest);

// Haar-distributed unitary via QR of a complex Ginibre matrix with the
// R diagonal phases folded back into Q.
CMat haar_unitary(int dim, Rng& rng);

// Random rank-`rank` density operator, normalized Wishart G G^dag / tr.
CMat random_density(int dim, int rank, Rng& rng);

// Rank-`rank` orthogonal projector from the leading columns of a Haar unitary.
CMat random_projector(int dim, int rank, Rng& rng);

// Projective observable with `num_outcomes` outcomes whose ranks form a
// uniform random composition of dim.
std::vector<CMat> random_observable(int dim, int num_outcomes, Rng& rng);

// Hermitian to tol and eigenvalues >= -tol.
bool is_psd(const CMat& m, double tol);

// Smallest eigenvalue of the Hermitian part.
double min_eigenvalue(const CMat& m);

// Choi matrix sum_ij |i><j| (x) map(|i><j|) of a linear map on dim x dim
// matrices; PSD exactly when the map is completely positive.
CMat choi_matrix(const std::function<CMat(const CMat&)>& map, int dim);

}  // namespace gur
