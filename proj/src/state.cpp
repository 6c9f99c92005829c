#include "gur/state.hpp"

namespace gur {

const CompositeSpace& Gemenge::space() const {
  if (items.empty()) throw std::invalid_argument("empty Gemenge has no space");
  return items.front().state.space;
}

double Gemenge::total_trace() const {
  double t = 0.0;
  for (const auto& it : items) t += it.weight * it.state.trace();
  return t;
}

QuantumState gemenge_density(const Gemenge& g) {
  if (g.items.empty()) throw std::invalid_argument("empty Gemenge");
  const CompositeSpace& sp = g.space();
  CMat acc = CMat::Zero(sp.total(), sp.total());
  for (const auto& it : g.items) {
    if (!(it.state.space == sp))
      throw std::invalid_argument("Gemenge items on mixed spaces");
    acc += it.weight * it.state.matrix;
  }
  return {sp, acc};
}

QuantumState normalize(const QuantumState& s) {
  const double t = s.trace();
  if (t < kZeroTraceGuard) throw ZeroTrace();
  return {s.space, s.matrix / t};
}

CMat embedded_projector(const Outcome& o, const CompositeSpace& space) {
  if (o.is_global()) {
    if (o.projector.rows() != space.total())
      throw std::invalid_argument("global projector does not fit the space");
    return o.projector;
  }
  return embed_local(o.projector, space.dims, *o.target);
}

QuantumState make_state(const CompositeSpace& space, CMat m) {
  if (m.rows() != space.total() || m.cols() != space.total())
    throw std::invalid_argument("state matrix does not fit the space");
  return {space, std::move(m)};
}

Gemenge pure_gemenge(QuantumState s) {
  Gemenge g;
  g.items.push_back({1.0, std::move(s)});
  return g;
}

}  // namespace gur
