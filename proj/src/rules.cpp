#include "gur/rules.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <utility>

namespace gur {

namespace {

Gemenge single_item(const CompositeSpace& sp, CMat m) {
  Gemenge g;
  g.items.push_back({1.0, {sp, std::move(m)}});
  return g;
}

Gemenge zero_output(const CompositeSpace& sp) {
  return single_item(sp, CMat::Zero(sp.total(), sp.total()));
}

// Single-system update applied to the measured factor, tensored with the
// joint reduced state of the untouched factors divided by Tr(rho). Global
// outcomes (and single-subsystem spaces) use the single-system form on the
// whole space.
Gemenge local_factor_update(
    const Outcome& o, const QuantumState& s,
    const std::function<CMat(const CMat&, const CMat&)>& single) {
  if (o.is_global() || s.space.num_subsystems() == 1) {
    const CMat p = o.is_global() ? o.projector
                                 : embedded_projector(o, s.space);
    return single_item(s.space, single(p, s.matrix));
  }
  const int k = *o.target;
  const Cplx t = s.matrix.trace();
  if (std::abs(t) < kZeroTraceGuard) return zero_output(s.space);
  const CMat rho_k = partial_trace(s.matrix, s.space.dims, {k});
  const CMat rest = partial_trace_drop(s.matrix, s.space.dims, {k});
  return single_item(
      s.space, tensor_at(single(o.projector, rho_k), s.space.dims, k, rest / t));
}

CMat luders_single(const CMat& p, const CMat& m) { return p * m * p; }

CMat lambda_single(double lambda, const CMat& p, const CMat& m) {
  const int d = static_cast<int>(p.rows());
  const CMat id = CMat::Identity(d, d);
  const CMat g = (1.0 - lambda) * p + lambda * id;
  const CMat sq = p + std::sqrt(lambda) * (id - p);  // G^{1/2} in closed form
  const Cplx den = (g * m).trace();
  if (std::abs(den) < kZeroTraceGuard) return CMat::Zero(d, d);
  return (p * m).trace() * (sq * m * sq) / den;
}

std::string format_param(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

Gemenge luders(const Outcome& o, const QuantumState& s) {
  const CMat q = embedded_projector(o, s.space);
  return single_item(s.space, q * s.matrix * q);
}

Gemenge locally_luders(const Outcome& o, const QuantumState& s) {
  return local_factor_update(o, s, luders_single);
}

Gemenge passive(const Outcome& o, const QuantumState& s) {
  const Cplx t = s.matrix.trace();
  if (std::abs(t) < kZeroTraceGuard) return zero_output(s.space);
  const CMat q = embedded_projector(o, s.space);
  return single_item(s.space, (q * s.matrix).trace() * s.matrix / t);
}

Gemenge depolarising(const Outcome& o, const QuantumState& s) {
  const int d = s.space.total();
  const CMat q = embedded_projector(o, s.space);
  if (o.is_global() || s.space.num_subsystems() == 1) {
    return single_item(s.space,
                       (q * s.matrix).trace() * CMat::Identity(d, d) / (1.0 * d));
  }
  const int k = *o.target;
  const int dk = s.space.dim(k);
  const CMat conditioned =
      partial_trace_drop(q * s.matrix * q, s.space.dims, {k});
  return single_item(s.space, tensor_at(CMat::Identity(dk, dk) / dk,
                                        s.space.dims, k, conditioned));
}

Gemenge lambda_rule(double lambda, const Outcome& o, const QuantumState& s) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::invalid_argument("lambda must lie in [0, 1]");
  return local_factor_update(o, s, [lambda](const CMat& p, const CMat& m) {
    return lambda_single(lambda, p, m);
  });
}

Gemenge cc_extended_depolarising(const Outcome& o, const QuantumState& s) {
  const int d = s.space.total();
  const CMat q = embedded_projector(o, s.space);
  return single_item(s.space,
                     (q * s.matrix).trace() * CMat::Identity(d, d) / (1.0 * d));
}

Gemenge cc_extended_lambda(double lambda, const Outcome& o,
                           const QuantumState& s) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::invalid_argument("lambda must lie in [0, 1]");
  const CMat q = embedded_projector(o, s.space);
  return single_item(s.space, lambda_single(lambda, q, s.matrix));
}

Gemenge mu_mixture(double mu, const Outcome& o, const QuantumState& s) {
  if (!(mu > 0.0 && mu < 1.0))
    throw std::invalid_argument("mu must lie in (0, 1)");
  Gemenge g;
  g.items.push_back({1.0 - mu, luders(o, s).items.front().state});
  g.items.push_back({mu, passive(o, s).items.front().state});
  return g;
}

Gemenge von_neumann(const Outcome& o, const QuantumState& s,
                    const std::vector<CMat>& refinement) {
  CMat sum = CMat::Zero(o.projector.rows(), o.projector.cols());
  for (const CMat& r : refinement) sum += r;
  if (max_diff(sum, o.projector) > 1e-9)
    throw std::invalid_argument("refinement does not sum to the outcome");
  Gemenge g;
  for (const CMat& r : refinement) {
    const CMat q = embedded_projector({r, o.target}, s.space);
    g.items.push_back({1.0, {s.space, q * s.matrix * q}});
  }
  return g;
}

Gemenge unitary_kick(const CMat& u, const Outcome& o, const QuantumState& s) {
  if (max_diff(u * u.adjoint(), CMat::Identity(u.rows(), u.cols())) > 1e-9)
    throw std::invalid_argument("kick operator is not unitary");
  const Cplx t = s.matrix.trace();
  if (std::abs(t) < kZeroTraceGuard) return zero_output(s.space);
  const CMat reduced = o.is_global()
                           ? s.matrix
                           : partial_trace(s.matrix, s.space.dims, {*o.target});
  const Cplx p = (o.projector * reduced).trace();
  const CMat u_emb = o.is_global() ? u : embed_local(u, s.space.dims, *o.target);
  return single_item(s.space, p * (u_emb * s.matrix * u_emb.adjoint()) / t);
}

std::vector<CMat> canonical_refinement(const CMat& projector) {
  Eigen::SelfAdjointEigenSolver<CMat> es(projector);
  std::vector<CMat> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) > 0.5) {
      CVec v = es.eigenvectors().col(i);
      out.push_back(v * v.adjoint());
    }
  }
  return out;
}

CMat cyclic_shift(int dim) {
  CMat u = CMat::Zero(dim, dim);
  for (int j = 0; j < dim; ++j) u((j + 1) % dim, j) = 1.0;
  return u;
}

Gemenge apply_gemenge(const UpdateRule& rule, const Outcome& o,
                      const Gemenge& g) {
  Gemenge out;
  for (const auto& item : g.items) {
    Gemenge sub = rule.apply(o, item.state);
    for (auto& si : sub.items)
      out.items.push_back({item.weight * si.weight, std::move(si.state)});
  }
  return out;
}

Gemenge apply_sequence(const UpdateRule& rule,
                       const std::vector<Outcome>& outcomes, const Gemenge& g) {
  Gemenge cur = g;
  for (const Outcome& o : outcomes) cur = apply_gemenge(rule, o, cur);
  return cur;
}

Gemenge UpdateRule::apply_refined(const Outcome& o, const QuantumState& s,
                                  const std::vector<CMat>&) const {
  return apply(o, s);
}

namespace {

class BasicRule : public UpdateRule {
 public:
  using Fn = std::function<Gemenge(const Outcome&, const QuantumState&)>;
  BasicRule(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}
  std::string name() const override { return name_; }
  Gemenge apply(const Outcome& o, const QuantumState& s) const override {
    return fn_(o, s);
  }

 private:
  std::string name_;
  Fn fn_;
};

class VonNeumannRule : public UpdateRule {
 public:
  std::string name() const override { return "von-neumann"; }
  bool refinement_dependent() const override { return true; }
  Gemenge apply(const Outcome& o, const QuantumState& s) const override {
    return von_neumann(o, s, canonical_refinement(o.projector));
  }
  Gemenge apply_refined(const Outcome& o, const QuantumState& s,
                        const std::vector<CMat>& refinement) const override {
    return von_neumann(o, s, refinement);
  }
};

class UnitaryKickRule : public UpdateRule {
 public:
  std::string name() const override { return "unitary-kick"; }
  Gemenge apply(const Outcome& o, const QuantumState& s) const override {
    const int d = o.is_global() ? s.space.total() : s.space.dim(*o.target);
    return unitary_kick(cyclic_shift(d), o, s);
  }
};

double parse_param(const std::string& spec, std::size_t colon) {
  const std::string tail = spec.substr(colon + 1);
  std::size_t used = 0;
  double v = std::stod(tail, &used);
  if (used != tail.size())
    throw std::invalid_argument("bad rule parameter: " + tail);
  return v;
}

}  // namespace

RulePtr make_rule(const std::string& spec) {
  const std::size_t colon = spec.find(':');
  const std::string head = spec.substr(0, colon);

  auto basic = [](std::string name, BasicRule::Fn fn) {
    return std::make_shared<BasicRule>(std::move(name), std::move(fn));
  };

  if (head == "luders") return basic("luders", luders);
  if (head == "loc-luders") return basic("loc-luders", locally_luders);
  if (head == "passive") return basic("passive", passive);
  if (head == "dep") return basic("dep", depolarising);
  if (head == "cc-dep") return basic("cc-dep", cc_extended_depolarising);
  if (head == "von-neumann") return std::make_shared<VonNeumannRule>();
  if (head == "unitary-kick") return std::make_shared<UnitaryKickRule>();

  if (head == "lambda" || head == "cc-lambda") {
    if (colon == std::string::npos)
      throw std::invalid_argument(head + " needs a parameter, e.g. " + head +
                                  ":0.5");
    const double l = parse_param(spec, colon);
    if (!(l >= 0.0 && l <= 1.0))
      throw std::invalid_argument("lambda must lie in [0, 1]");
    const std::string name = head + ":" + format_param(l);
    if (head == "lambda")
      return basic(name, [l](const Outcome& o, const QuantumState& s) {
        return lambda_rule(l, o, s);
      });
    return basic(name, [l](const Outcome& o, const QuantumState& s) {
      return cc_extended_lambda(l, o, s);
    });
  }

  if (head == "mu") {
    if (colon == std::string::npos)
      throw std::invalid_argument("mu needs a parameter, e.g. mu:0.5");
    const double m = parse_param(spec, colon);
    if (!(m > 0.0 && m < 1.0))
      throw std::invalid_argument("mu must lie in (0, 1)");
    return basic("mu:" + format_param(m),
                 [m](const Outcome& o, const QuantumState& s) {
                   return mu_mixture(m, o, s);
                 });
  }

  throw std::invalid_argument("unknown rule: " + spec);
}

std::vector<std::string> catalog_rule_names() {
  return {"luders", "loc-luders",    "passive", "dep",         "lambda:0.25",
          "cc-dep", "cc-lambda:0.5", "mu:0.5",  "von-neumann", "unitary-kick"};
}

}  // namespace gur
