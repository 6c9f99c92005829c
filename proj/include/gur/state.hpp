#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gur/linalg.hpp"

namespace gur {

// Ordered subsystem dimensions of a tensor-product space.
struct CompositeSpace {
  std::vector<int> dims;

  CompositeSpace() = default;
  CompositeSpace(std::initializer_list<int> d) : dims(d) {}
  explicit CompositeSpace(std::vector<int> d) : dims(std::move(d)) {}

  int total() const { return total_dim(dims); }
  int num_subsystems() const { return static_cast<int>(dims.size()); }
  int dim(int k) const { return dims.at(static_cast<std::size_t>(k)); }
  bool operator==(const CompositeSpace& o) const { return dims == o.dims; }
};

// Sub-normalized density operator: PSD with trace in [0, 1]. The trace
// carries the probability of the branch that produced the state.
struct QuantumState {
  CompositeSpace space;
  CMat matrix;

  double trace() const { return matrix.trace().real(); }
};

// Weighted list of states encoding classical preparation uncertainty
// (a proper mixture). Weights stay fixed under measurement updates while
// the member states become sub-normalized.
struct GemengeItem {
  double weight = 1.0;
  QuantumState state;
};

struct Gemenge {
  std::vector<GemengeItem> items;

  const CompositeSpace& space() const;
  double total_trace() const;
};

class ZeroTrace : public std::runtime_error {
 public:
  ZeroTrace() : std::runtime_error("state has (near-)zero trace") {}
};

// Trace of a denominator below this threshold is treated as zero and the
// corresponding update returns the zero operator.
inline constexpr double kZeroTraceGuard = 1e-12;

// sum_i p_i rho_i on the shared space.
QuantumState gemenge_density(const Gemenge& g);

// s / Tr(s); throws ZeroTrace when the trace is below the guard.
QuantumState normalize(const QuantumState& s);

// A measurement outcome: a projector acting on one subsystem (local) or on
// the whole space (target == nullopt, global).
struct Outcome {
  CMat projector;
  std::optional<int> target;

  bool is_global() const { return !target.has_value(); }
};

// Collection of mutually orthogonal projectors summing to the identity,
// all sharing one target.
struct Observable {
  std::vector<Outcome> outcomes;
};

// Projector embedded into the full space (identity on untouched factors).
CMat embedded_projector(const Outcome& o, const CompositeSpace& space);

// Convenience constructors.
QuantumState make_state(const CompositeSpace& space, CMat m);
Gemenge pure_gemenge(QuantumState s);

}  // namespace gur
