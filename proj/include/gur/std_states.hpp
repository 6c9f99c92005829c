#pragma once

#include "gur/linalg.hpp"

namespace gur {

// |i><i| on a d-dimensional space.
inline CMat basis_projector(int d, int i) {
  CMat m = CMat::Zero(d, d);
  m(i, i) = 1.0;
  return m;
}

inline CMat outer(const CVec& v) { return v * v.adjoint(); }

// |+><+| and |-><-| on a qubit.
inline CMat plus_projector() {
  CVec v(2);
  v << 1.0, 1.0;
  return outer(v / std::sqrt(2.0));
}

inline CMat minus_projector() {
  CVec v(2);
  v << 1.0, -1.0;
  return outer(v / std::sqrt(2.0));
}

// (|00> + |11>)/sqrt(2) and (|00> - |11>)/sqrt(2) projectors.
inline CMat bell_phi_plus() {
  CVec v(4);
  v << 1.0, 0.0, 0.0, 1.0;
  return outer(v / std::sqrt(2.0));
}

inline CMat bell_phi_minus() {
  CVec v(4);
  v << 1.0, 0.0, 0.0, -1.0;
  return outer(v / std::sqrt(2.0));
}

// (|01> - |10>)/sqrt(2) projector.
inline CMat singlet_projector() {
  CVec v(4);
  v << 0.0, 1.0, -1.0, 0.0;
  return outer(v / std::sqrt(2.0));
}

}  // namespace gur
