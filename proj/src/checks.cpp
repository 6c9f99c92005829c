#include "gur/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "gur/std_states.hpp"

namespace gur {

namespace {

// CHSH scores above 2 + this margin count as a genuine inequality violation.
constexpr double kChshMargin = 1e-6;
// Conditional-probability trials resample until the outcome has this much weight.
constexpr double kMinOutcomeProb = 0.05;
constexpr int kMaxResample = 20;

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Independent, replayable generator for one (check, trial) pair.
Rng make_trial_rng(const CheckConfig& cfg, const std::string& check,
                   int trial) {
  return Rng(Rng::derive(cfg.seed ^ fnv1a(check),
                         static_cast<std::uint64_t>(trial)));
}

CMat scalar(Cplx v) {
  CMat m(1, 1);
  m(0, 0) = v;
  return m;
}

CVec basis_vec(int d, int i) {
  CVec v = CVec::Zero(d);
  v(i) = 1.0;
  return v;
}

CVec tensor_vec(const CVec& a, const CVec& b) {
  CVec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) out(i * b.size() + j) = a(i) * b(j);
  return out;
}

CVec product_vec(const CompositeSpace& sp, const std::vector<int>& levels) {
  CVec v = basis_vec(sp.dim(0), levels[0]);
  for (int k = 1; k < sp.num_subsystems(); ++k)
    v = tensor_vec(v, basis_vec(sp.dim(k), levels[static_cast<std::size_t>(k)]));
  return v;
}

QuantumState pure_state(const CompositeSpace& sp, const CVec& v) {
  return {sp, v * v.adjoint()};
}

std::vector<int> ground_levels(const CompositeSpace& sp) {
  return std::vector<int>(static_cast<std::size_t>(sp.num_subsystems()), 0);
}

// |0,0,...,0>.
QuantumState ground_state(const CompositeSpace& sp) {
  return pure_state(sp, product_vec(sp, ground_levels(sp)));
}

// (|0> + |1>)/sqrt(2) on subsystem 0, |0> elsewhere.
QuantumState plus_state(const CompositeSpace& sp) {
  CVec v = (basis_vec(sp.dim(0), 0) + basis_vec(sp.dim(0), 1)) / std::sqrt(2.0);
  for (int k = 1; k < sp.num_subsystems(); ++k)
    v = tensor_vec(v, basis_vec(sp.dim(k), 0));
  return pure_state(sp, v);
}

// sqrt(w)|0,0,0,...> + sign sqrt(1-w)|1,1,0,...> on the first two subsystems.
QuantumState entangled_state(const CompositeSpace& sp, double w, double sign) {
  std::vector<int> lo = ground_levels(sp);
  std::vector<int> hi = ground_levels(sp);
  hi[0] = 1;
  hi[1] = 1;
  const CVec v = std::sqrt(w) * product_vec(sp, lo) +
                 sign * std::sqrt(1.0 - w) * product_vec(sp, hi);
  return pure_state(sp, v);
}

// |+><+| on levels 0 and 1 of a d-dimensional space.
CMat plus_projector_d(int d) {
  const CVec v = (basis_vec(d, 0) + basis_vec(d, 1)) / std::sqrt(2.0);
  return v * v.adjoint();
}

CMat dft_matrix(int d) {
  CMat f(d, d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      f(j, k) = std::polar(scale, 2.0 * std::numbers::pi * j * k / d);
  return f;
}

CVec uniform_vec(int d) {
  return CVec::Constant(d, Cplx(1.0 / std::sqrt(static_cast<double>(d)), 0.0));
}

QuantumState random_state(const CompositeSpace& sp, Rng& rng) {
  const int d = sp.total();
  return {sp, random_density(d, rng.uniform_int(1, d), rng)};
}

Outcome random_outcome(const CompositeSpace& sp, Rng& rng, bool allow_global) {
  if (allow_global && sp.num_subsystems() >= 2 && rng.uniform() < 0.3) {
    const int d = sp.total();
    return {random_projector(d, rng.uniform_int(1, d - 1), rng), std::nullopt};
  }
  const int k = rng.uniform_int(0, sp.num_subsystems() - 1);
  const int dk = sp.dim(k);
  return {random_projector(dk, rng.uniform_int(1, dk), rng), k};
}

// Haar-rotated rank-1 partition of the range of a projector.
std::vector<CMat> rank_one_refinement(const CMat& p, Rng& rng) {
  Eigen::SelfAdjointEigenSolver<CMat> es(p);
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > 0.5) idx.push_back(i);
  const int r = static_cast<int>(idx.size());
  CMat v(p.rows(), r);
  for (int j = 0; j < r; ++j) v.col(j) = es.eigenvectors().col(idx[static_cast<std::size_t>(j)]);
  const CMat b = v * haar_unitary(r, rng);
  std::vector<CMat> out;
  for (int j = 0; j < r; ++j) out.push_back(b.col(j) * b.col(j).adjoint());
  return out;
}

nlohmann::json matrices_to_json(const std::vector<CMat>& ms) {
  nlohmann::json arr = nlohmann::json::array();
  for (const CMat& m : ms) arr.push_back(matrix_to_json(m));
  return arr;
}

std::vector<CMat> matrices_from_json(const nlohmann::json& arr) {
  std::vector<CMat> out;
  for (const auto& j : arr) out.push_back(matrix_from_json(j));
  return out;
}

CMat density_after(const UpdateRule& rule, const Outcome& o,
                   const QuantumState& s) {
  return gemenge_density(rule.apply(o, s)).matrix;
}

struct Eval {
  CMat lhs;
  CMat rhs;
  double distance = 0.0;
};

Eval diff_eval(CMat lhs, CMat rhs) {
  Eval e{std::move(lhs), std::move(rhs), 0.0};
  e.distance = max_diff(e.lhs, e.rhs);
  return e;
}

// Recomputes one trial equation from its serialized inputs. Both the trial
// scanners and replay_witness go through here, so recorded distances always
// replay exactly.
Eval evaluate_trial(const std::string& check, const UpdateRule* rule_ptr,
                    const nlohmann::json& in, double tol) {
  if (check == "observable") {
    const std::string kind = in.at("kind");
    if (kind == "empty") return {scalar(0.0), scalar(0.0), 1.0};
    std::vector<Outcome> outs;
    for (const auto& j : in.at("outcomes")) outs.push_back(outcome_from_json(j));
    if (kind == "target") {
      double dist = 0.0;
      for (const Outcome& o : outs)
        if (o.target != outs.front().target) dist = 1.0;
      return {scalar(0.0), scalar(0.0), dist};
    }
    if (kind == "hermiticity") {
      const CMat& p = outs.at(in.at("i").get<std::size_t>()).projector;
      return diff_eval(p, p.adjoint());
    }
    if (kind == "idempotence") {
      const CMat& p = outs.at(in.at("i").get<std::size_t>()).projector;
      return diff_eval(p * p, p);
    }
    if (kind == "orthogonality") {
      const CMat& a = outs.at(in.at("i").get<std::size_t>()).projector;
      const CMat& b = outs.at(in.at("j").get<std::size_t>()).projector;
      return diff_eval(a * b, CMat::Zero(a.rows(), a.cols()));
    }
    if (kind == "completeness") {
      CMat sum = CMat::Zero(outs.front().projector.rows(),
                            outs.front().projector.cols());
      for (const Outcome& o : outs) sum += o.projector;
      return diff_eval(sum, CMat::Identity(sum.rows(), sum.cols()));
    }
    throw std::invalid_argument("unknown observable witness kind: " + kind);
  }

  const UpdateRule& rule = *rule_ptr;

  if (check == "born") {
    const QuantumState s = state_from_json(in.at("state"));
    const Outcome o = outcome_from_json(in.at("outcome"));
    const CMat q = embedded_projector(o, s.space);
    return diff_eval(scalar(rule.apply(o, s).total_trace()),
                     scalar((q * s.matrix).trace()));
  }

  if (check == "homogeneity") {
    const QuantumState s = state_from_json(in.at("state"));
    const Outcome o = outcome_from_json(in.at("outcome"));
    const double c = in.at("factor");
    const QuantumState scaled{s.space, (c * s.matrix).eval()};
    return diff_eval(density_after(rule, o, scaled),
                     (c * density_after(rule, o, s)).eval());
  }

  if (check == "A1") {
    const QuantumState s = state_from_json(in.at("state"));
    const Outcome o = outcome_from_json(in.at("outcome"));
    const Gemenge out = rule.apply(o, s);
    CMat m;
    double excess = 0.0;
    if (in.at("component").is_string()) {
      m = gemenge_density(out).matrix;
      excess = m.trace().real() - s.trace();
    } else {
      m = out.items.at(in.at("component").get<std::size_t>()).state.matrix;
    }
    const double herm = max_diff(m, m.adjoint());
    const double neg = -min_eigenvalue(m);
    Eval e{m, CMat::Zero(m.rows(), m.cols()), 0.0};
    e.distance = std::max({herm, neg, excess, 0.0});
    return e;
  }

  if (check == "A2") {
    const QuantumState s = state_from_json(in.at("state"));
    const Outcome o = outcome_from_json(in.at("outcome"));
    const std::vector<CMat> r1 = matrices_from_json(in.at("refinement1"));
    const std::vector<CMat> r2 = matrices_from_json(in.at("refinement2"));
    return diff_eval(gemenge_density(rule.apply_refined(o, s, r1)).matrix,
                     gemenge_density(rule.apply_refined(o, s, r2)).matrix);
  }

  if (check == "A3") {
    const QuantumState s = state_from_json(in.at("state"));
    const Outcome o = outcome_from_json(in.at("outcome"));
    const std::vector<CMat> us = matrices_from_json(in.at("unitaries"));
    CMat ufull = us.front();
    for (std::size_t k = 1; k < us.size(); ++k) ufull = tensor(ufull, us[k]);
    const QuantumState ts{s.space, (ufull * s.matrix * ufull.adjoint()).eval()};
    const CMat& ulocal = o.is_global() ? ufull : us.at(static_cast<std::size_t>(*o.target));
    const Outcome to{(ulocal * o.projector * ulocal.adjoint()).eval(), o.target};
    if (rule.refinement_dependent() && in.contains("refinement")) {
      const std::vector<CMat> base = matrices_from_json(in.at("refinement"));
      std::vector<CMat> moved;
      for (const CMat& r : base) moved.push_back(ulocal * r * ulocal.adjoint());
      return diff_eval(
          gemenge_density(rule.apply_refined(to, ts, moved)).matrix,
          (ufull * gemenge_density(rule.apply_refined(o, s, base)).matrix *
           ufull.adjoint())
              .eval());
    }
    return diff_eval(density_after(rule, to, ts),
                     (ufull * density_after(rule, o, s) * ufull.adjoint()).eval());
  }

  if (check == "A4") {
    const QuantumState s = state_from_json(in.at("state"));
    const Outcome o = outcome_from_json(in.at("outcome"));
    const int m = in.at("drop");
    const int k = *o.target;
    std::vector<int> red_dims;
    for (int i = 0; i < s.space.num_subsystems(); ++i)
      if (i != m) red_dims.push_back(s.space.dim(i));
    const CompositeSpace red(red_dims);
    const QuantumState sred =
        make_state(red, partial_trace_drop(s.matrix, s.space.dims, {m}));
    const Outcome ored{o.projector, k - (m < k ? 1 : 0)};
    return diff_eval(
        partial_trace_drop(density_after(rule, o, s), s.space.dims, {m}),
        density_after(rule, ored, sred));
  }

  if (check == "A5") {
    const QuantumState s = state_from_json(in.at("state"));
    const int k = in.at("target");
    const std::vector<CMat> projs = matrices_from_json(in.at("observable"));
    CMat sum;
    for (std::size_t x = 0; x < projs.size(); ++x) {
      const CMat part = partial_trace_drop(
          density_after(rule, Outcome{projs[x], k}, s), s.space.dims, {k});
      sum = x == 0 ? part : (sum + part).eval();
    }
    return diff_eval(sum, partial_trace_drop(s.matrix, s.space.dims, {k}));
  }

  if (check == "A6") {
    const QuantumState s = state_from_json(in.at("state"));
    const Outcome ox = outcome_from_json(in.at("outcome_x"));
    const Outcome oy = outcome_from_json(in.at("outcome_y"));
    const Gemenge g = pure_gemenge(s);
    return diff_eval(
        gemenge_density(apply_sequence(rule, {ox, oy}, g)).matrix,
        gemenge_density(apply_sequence(rule, {oy, ox}, g)).matrix);
  }

  if (check == "det-repeatability" || check == "weak-repeatability") {
    const QuantumState s = state_from_json(in.at("state"));
    const Outcome o = outcome_from_json(in.at("outcome"));
    const CMat q = embedded_projector(o, s.space);
    const CMat out = density_after(rule, o, s);
    const double tout = out.trace().real();
    const double p2 =
        tout < kZeroTraceGuard ? 0.0 : (q * out).trace().real() / tout;
    if (check == "det-repeatability") {
      Eval e{scalar(p2), scalar(1.0), std::abs(p2 - 1.0)};
      return e;
    }
    const double p1 = (q * s.matrix).trace().real() / s.trace();
    Eval e{scalar(p2), scalar(p1), 0.0};
    const std::string mode = in.at("mode");
    if (mode == "dominance") {
      e.distance = p1 - p2;
    } else {
      e.distance = 2.0 * tol - (p2 - p1);
    }
    return e;
  }

  if (check == "prep-indistinguishability") {
    const Gemenge g1 = gemenge_from_json(in.at("gemenge1"));
    const Gemenge g2 = gemenge_from_json(in.at("gemenge2"));
    const Outcome o = outcome_from_json(in.at("outcome"));
    return diff_eval(gemenge_density(apply_gemenge(rule, o, g1)).matrix,
                     gemenge_density(apply_gemenge(rule, o, g2)).matrix);
  }

  if (check == "composition-compatibility") {
    const QuantumState s = state_from_json(in.at("state"));
    const Outcome o = outcome_from_json(in.at("outcome"));
    const Outcome global{embedded_projector(o, s.space), std::nullopt};
    return diff_eval(density_after(rule, o, s), density_after(rule, global, s));
  }

  if (check == "ideality") {
    const QuantumState s = state_from_json(in.at("state"));
    const Outcome o = outcome_from_json(in.at("outcome"));
    return diff_eval(density_after(rule, o, s), s.matrix);
  }

  if (check == "local-tomography") {
    const QuantumState s = state_from_json(in.at("state"));
    const Outcome ox = outcome_from_json(in.at("outcome_x"));
    const Outcome oy = outcome_from_json(in.at("outcome_y"));
    const double q =
        apply_sequence(rule, {ox, oy}, pure_gemenge(s)).total_trace();
    const CMat joint =
        embedded_projector(ox, s.space) * embedded_projector(oy, s.space);
    return diff_eval(scalar(q), scalar((joint * s.matrix).trace().real()));
  }

  if (check == "coherence") {
    const QuantumState s = state_from_json(in.at("state"));
    const Outcome oy = outcome_from_json(in.at("outcome_y"));
    const CMat px = matrix_from_json(in.at("projector_x"));
    const CMat out = density_after(rule, oy, s);
    return diff_eval(scalar((px * out).trace()),
                     scalar((px * s.matrix).trace()));
  }

  if (check == "nonlocality") {
    const double s = chsh_value(rule, in.at("a_first").get<bool>());
    Eval e{scalar(s), scalar(2.0), 2.0 + kChshMargin - s};
    return e;
  }

  if (check == "complete-positivity") {
    const std::string mode = in.at("mode");
    if (mode == "linearity") {
      const QuantumState s1 = state_from_json(in.at("state1"));
      const QuantumState s2 = state_from_json(in.at("state2"));
      const Outcome o = outcome_from_json(in.at("outcome"));
      const double theta = in.at("theta");
      const QuantumState mix{
          s1.space, (theta * s1.matrix + (1.0 - theta) * s2.matrix).eval()};
      return diff_eval(density_after(rule, o, mix),
                       (theta * density_after(rule, o, s1) +
                        (1.0 - theta) * density_after(rule, o, s2))
                           .eval());
    }
    const CompositeSpace sp(in.at("dims").get<std::vector<int>>());
    const Outcome o = outcome_from_json(in.at("outcome"));
    const auto map = [&](const CMat& m) {
      return density_after(rule, o, QuantumState{sp, m});
    };
    const CMat choi = choi_matrix(map, sp.total());
    Eval e{choi, CMat::Zero(choi.rows(), choi.cols()),
           std::max(0.0, -min_eigenvalue(choi))};
    return e;
  }

  throw std::invalid_argument("unknown check: " + check);
}

CheckResult base_result(const UpdateRule& rule, std::string check,
                        const CheckConfig& cfg, std::string scope) {
  CheckResult r;
  r.rule = rule.name();
  r.check = std::move(check);
  r.scope = std::move(scope);
  r.tol = cfg.tol;
  r.seed = cfg.seed;
  return r;
}

void set_violation(CheckResult& res, const nlohmann::json& in, const Eval& e) {
  res.verdict = Verdict::Violated;
  res.witness = Witness{in, e.lhs, e.rhs, e.distance};
}

using CanonFn = std::function<std::vector<nlohmann::json>(const CompositeSpace&)>;
using SampleFn = std::function<nlohmann::json(const CompositeSpace&, Rng&)>;

std::vector<nlohmann::json> canon_none(const CompositeSpace&) { return {}; }

struct ScanOutcome {
  std::optional<Witness> witness;
  int trials = 0;
};

// Deterministic canonical trials first, then seeded random trials; stops at
// the first violation.
ScanOutcome scan_trials(const std::string& check, const UpdateRule& rule,
                        const CheckConfig& cfg,
                        const std::vector<std::vector<int>>& spaces,
                        const CanonFn& canonical, const SampleFn& sample,
                        int& counter) {
  ScanOutcome out;
  if (spaces.empty()) return out;
  for (const auto& dims : spaces) {
    const CompositeSpace sp(dims);
    for (const nlohmann::json& in : canonical(sp)) {
      ++out.trials;
      const Eval e = evaluate_trial(check, &rule, in, cfg.tol);
      if (e.distance > cfg.tol) {
        out.witness = Witness{in, e.lhs, e.rhs, e.distance};
        return out;
      }
    }
  }
  const int per_space =
      std::max(1, cfg.trials / static_cast<int>(spaces.size()));
  for (const auto& dims : spaces) {
    const CompositeSpace sp(dims);
    for (int i = 0; i < per_space; ++i) {
      Rng rng = make_trial_rng(cfg, check, counter++);
      const nlohmann::json in = sample(sp, rng);
      if (in.is_null()) continue;
      ++out.trials;
      const Eval e = evaluate_trial(check, &rule, in, cfg.tol);
      if (e.distance > cfg.tol) {
        out.witness = Witness{in, e.lhs, e.rhs, e.distance};
        return out;
      }
    }
  }
  return out;
}

std::vector<std::vector<int>> all_spaces(const CheckConfig& cfg) {
  std::vector<std::vector<int>> out = cfg.single_spaces();
  for (const auto& d : cfg.composite_spaces()) out.push_back(d);
  return out;
}

CheckResult finish_scan(CheckResult res, const ScanOutcome& scan) {
  res.trials_run = scan.trials;
  if (scan.witness) {
    res.verdict = Verdict::Violated;
    res.witness = scan.witness;
  }
  return res;
}

// Merges independent single-system and composite scans: a composite-only
// violation downgrades Holds to the single-system scope instead of failing.
CheckResult finish_dual(CheckResult res, const ScanOutcome& single_scan,
                        bool composite_run, const ScanOutcome& comp_scan) {
  res.trials_run = single_scan.trials + comp_scan.trials;
  if (single_scan.witness) {
    res.verdict = Verdict::Violated;
    res.scope =
        (composite_run && !comp_scan.witness) ? "single-system" : "both";
    res.witness = single_scan.witness;
  } else if (composite_run && comp_scan.witness) {
    res.verdict = Verdict::Holds;
    res.scope = "single-system";
    res.witness = comp_scan.witness;
  } else {
    res.verdict = Verdict::Holds;
    res.scope = composite_run ? "both" : "single-system";
  }
  return res;
}

nlohmann::json in_state_outcome(const QuantumState& s, const Outcome& o) {
  return {{"state", state_to_json(s)}, {"outcome", outcome_to_json(o)}};
}

// Resamples (state, outcome) until the outcome carries enough probability
// for a meaningful conditional second measurement.
nlohmann::json sample_conditioned(const CompositeSpace& sp, Rng& rng) {
  for (int a = 0; a < kMaxResample; ++a) {
    const QuantumState s = random_state(sp, rng);
    const Outcome o = random_outcome(sp, rng, true);
    const CMat q = embedded_projector(o, sp);
    if ((q * s.matrix).trace().real() >= kMinOutcomeProb * s.trace())
      return in_state_outcome(s, o);
  }
  return nullptr;
}

std::vector<nlohmann::json> canon_repeatability(const CompositeSpace& sp) {
  const Outcome o{basis_projector(sp.dim(0), 0), 0};
  return {in_state_outcome(plus_state(sp), o),
          in_state_outcome(ground_state(sp), o)};
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds:
      return "holds";
    case Verdict::Violated:
      return "violated";
    default:
      return "not-applicable";
  }
}

nlohmann::json check_result_to_json(const CheckResult& r) {
  nlohmann::json j{{"rule", r.rule},       {"check", r.check},
                   {"verdict", to_string(r.verdict)},
                   {"scope", r.scope},     {"trials", r.trials_run},
                   {"tol", r.tol},         {"seed", r.seed},
                   {"witness", nullptr}};
  if (r.witness) {
    j["witness"] = {{"inputs", r.witness->inputs},
                    {"lhs", matrix_to_json(r.witness->lhs)},
                    {"rhs", matrix_to_json(r.witness->rhs)},
                    {"distance", r.witness->distance}};
  }
  return j;
}

std::vector<std::vector<int>> CheckConfig::composite_spaces() const {
  std::vector<std::vector<int>> out;
  for (const auto& d : dims)
    if (d.size() >= 2) out.push_back(d);
  return out;
}

std::vector<std::vector<int>> CheckConfig::single_spaces() const {
  std::vector<std::vector<int>> out;
  for (const auto& d : dims)
    if (d.size() == 1) out.push_back(d);
  if (out.empty()) out = {{2}, {3}, {4}};
  return out;
}

CheckResult validate_observable(const Observable& obs, double tol) {
  CheckResult res;
  res.check = "observable";
  res.tol = tol;
  res.trials_run = 1;
  nlohmann::json outs = nlohmann::json::array();
  for (const Outcome& o : obs.outcomes) outs.push_back(outcome_to_json(o));
  const auto fail = [&](nlohmann::json in) {
    in["outcomes"] = outs;
    const Eval e = evaluate_trial("observable", nullptr, in, tol);
    set_violation(res, in, e);
    return res;
  };
  if (obs.outcomes.empty()) return fail({{"kind", "empty"}});
  for (std::size_t i = 1; i < obs.outcomes.size(); ++i)
    if (obs.outcomes[i].target != obs.outcomes.front().target)
      return fail({{"kind", "target"}});
  for (std::size_t i = 0; i < obs.outcomes.size(); ++i) {
    const CMat& p = obs.outcomes[i].projector;
    if (max_diff(p, p.adjoint()) > tol)
      return fail({{"kind", "hermiticity"}, {"i", i}});
    if (max_diff(p * p, p) > tol)
      return fail({{"kind", "idempotence"}, {"i", i}});
    for (std::size_t j = i + 1; j < obs.outcomes.size(); ++j) {
      const CMat& q = obs.outcomes[j].projector;
      if (max_abs(p * q) > tol)
        return fail({{"kind", "orthogonality"}, {"i", i}, {"j", j}});
    }
  }
  CMat sum = CMat::Zero(obs.outcomes.front().projector.rows(),
                        obs.outcomes.front().projector.cols());
  for (const Outcome& o : obs.outcomes) sum += o.projector;
  if (max_diff(sum, CMat::Identity(sum.rows(), sum.cols())) > tol)
    return fail({{"kind", "completeness"}});
  return res;
}

CheckResult check_born(const UpdateRule& rule, const CheckConfig& cfg) {
  int counter = 0;
  const auto sample = [](const CompositeSpace& sp, Rng& rng) {
    return in_state_outcome(random_state(sp, rng),
                            random_outcome(sp, rng, true));
  };
  return finish_scan(base_result(rule, "born", cfg, "both"),
                     scan_trials("born", rule, cfg, all_spaces(cfg),
                                 canon_none, sample, counter));
}

CheckResult check_homogeneity(const UpdateRule& rule, const CheckConfig& cfg) {
  int counter = 0;
  const auto canonical = [](const CompositeSpace& sp) {
    std::vector<nlohmann::json> out;
    for (double c : {0.0, 0.3, 1.0}) {
      nlohmann::json in = in_state_outcome(
          plus_state(sp), Outcome{basis_projector(sp.dim(0), 0), 0});
      in["factor"] = c;
      out.push_back(in);
    }
    return out;
  };
  const auto sample = [](const CompositeSpace& sp, Rng& rng) {
    nlohmann::json in = in_state_outcome(random_state(sp, rng),
                                         random_outcome(sp, rng, true));
    in["factor"] = rng.uniform();
    return in;
  };
  return finish_scan(base_result(rule, "homogeneity", cfg, "both"),
                     scan_trials("homogeneity", rule, cfg, all_spaces(cfg),
                                 canonical, sample, counter));
}

CheckResult check_A1(const UpdateRule& rule, const CheckConfig& cfg) {
  CheckResult res = base_result(rule, "A1", cfg, "both");
  const auto spaces = all_spaces(cfg);
  const int per_space =
      std::max(1, cfg.trials / static_cast<int>(spaces.size()));
  int counter = 0;
  for (const auto& dims : spaces) {
    const CompositeSpace sp(dims);
    for (int i = 0; i < per_space; ++i) {
      Rng rng = make_trial_rng(cfg, "A1", counter++);
      const QuantumState s = random_state(sp, rng);
      const Outcome o = random_outcome(sp, rng, true);
      ++res.trials_run;
      std::vector<nlohmann::json> components = {"density"};
      const std::size_t items = rule.apply(o, s).items.size();
      for (std::size_t c = 0; c < items; ++c) components.push_back(c);
      for (const nlohmann::json& comp : components) {
        nlohmann::json in = in_state_outcome(s, o);
        in["component"] = comp;
        const Eval e = evaluate_trial("A1", &rule, in, cfg.tol);
        if (e.distance > cfg.tol) {
          set_violation(res, in, e);
          return res;
        }
      }
    }
  }
  return res;
}

CheckResult check_A2(const UpdateRule& rule, const CheckConfig& cfg) {
  int counter = 0;
  const auto canonical = [](const CompositeSpace& sp) {
    const int d0 = sp.dim(0);
    CVec v = uniform_vec(d0);
    for (int k = 1; k < sp.num_subsystems(); ++k)
      v = tensor_vec(v, basis_vec(sp.dim(k), 0));
    const CMat f = dft_matrix(d0);
    std::vector<CMat> comp, four;
    for (int i = 0; i < d0; ++i) {
      comp.push_back(basis_projector(d0, i));
      four.push_back(f.col(i) * f.col(i).adjoint());
    }
    nlohmann::json in = in_state_outcome(pure_state(sp, v),
                                         Outcome{CMat::Identity(d0, d0), 0});
    in["refinement1"] = matrices_to_json(comp);
    in["refinement2"] = matrices_to_json(four);
    return std::vector<nlohmann::json>{in};
  };
  const auto sample = [](const CompositeSpace& sp, Rng& rng) {
    Outcome o = random_outcome(sp, rng, true);
    const int d = o.is_global() ? sp.total() : sp.dim(*o.target);
    o.projector = random_projector(d, rng.uniform_int(2, d), rng);
    nlohmann::json in = in_state_outcome(random_state(sp, rng), o);
    in["refinement1"] = matrices_to_json(rank_one_refinement(o.projector, rng));
    in["refinement2"] = matrices_to_json(rank_one_refinement(o.projector, rng));
    return in;
  };
  return finish_scan(base_result(rule, "A2", cfg, "both"),
                     scan_trials("A2", rule, cfg, all_spaces(cfg), canonical,
                                 sample, counter));
}

CheckResult check_A3(const UpdateRule& rule, const CheckConfig& cfg) {
  int counter = 0;
  const auto canonical = [](const CompositeSpace& sp) {
    std::vector<CMat> us{dft_matrix(sp.dim(0))};
    for (int k = 1; k < sp.num_subsystems(); ++k)
      us.push_back(CMat::Identity(sp.dim(k), sp.dim(k)));
    const CMat p = basis_projector(sp.dim(0), 0);
    nlohmann::json in = in_state_outcome(ground_state(sp), Outcome{p, 0});
    in["unitaries"] = matrices_to_json(us);
    in["refinement"] = matrices_to_json({p});
    return std::vector<nlohmann::json>{in};
  };
  const auto sample = [](const CompositeSpace& sp, Rng& rng) {
    const Outcome o = random_outcome(sp, rng, true);
    std::vector<CMat> us;
    for (int k = 0; k < sp.num_subsystems(); ++k)
      us.push_back(haar_unitary(sp.dim(k), rng));
    nlohmann::json in = in_state_outcome(random_state(sp, rng), o);
    in["unitaries"] = matrices_to_json(us);
    in["refinement"] = matrices_to_json(canonical_refinement(o.projector));
    return in;
  };
  return finish_scan(base_result(rule, "A3", cfg, "both"),
                     scan_trials("A3", rule, cfg, all_spaces(cfg), canonical,
                                 sample, counter));
}

CheckResult check_A4(const UpdateRule& rule, const CheckConfig& cfg) {
  CheckResult res = base_result(rule, "A4", cfg, "composite");
  const auto spaces = cfg.composite_spaces();
  if (spaces.empty()) {
    res.verdict = Verdict::NotApplicable;
    return res;
  }
  int counter = 0;
  const auto sample = [](const CompositeSpace& sp, Rng& rng) {
    const int n = sp.num_subsystems();
    const int k = rng.uniform_int(0, n - 1);
    int m = rng.uniform_int(0, n - 2);
    if (m >= k) ++m;
    const int dk = sp.dim(k);
    nlohmann::json in = in_state_outcome(
        random_state(sp, rng),
        Outcome{random_projector(dk, rng.uniform_int(1, dk), rng), k});
    in["drop"] = m;
    return in;
  };
  return finish_scan(std::move(res), scan_trials("A4", rule, cfg, spaces,
                                                 canon_none, sample, counter));
}

CheckResult check_A5(const UpdateRule& rule, const CheckConfig& cfg) {
  CheckResult res = base_result(rule, "A5", cfg, "composite");
  const auto spaces = cfg.composite_spaces();
  if (spaces.empty()) {
    res.verdict = Verdict::NotApplicable;
    return res;
  }
  int counter = 0;
  const auto canonical = [](const CompositeSpace& sp) {
    const int d0 = sp.dim(0);
    std::vector<CMat> comp;
    for (int i = 0; i < d0; ++i) comp.push_back(basis_projector(d0, i));
    std::vector<nlohmann::json> out;
    for (const QuantumState& s :
         {ground_state(sp), entangled_state(sp, 0.8, 1.0)}) {
      nlohmann::json in{{"state", state_to_json(s)}, {"target", 0}};
      in["observable"] = matrices_to_json(comp);
      out.push_back(in);
    }
    return out;
  };
  const auto sample = [](const CompositeSpace& sp, Rng& rng) {
    const int k = rng.uniform_int(0, sp.num_subsystems() - 1);
    const int dk = sp.dim(k);
    nlohmann::json in{{"state", state_to_json(random_state(sp, rng))},
                      {"target", k}};
    in["observable"] = matrices_to_json(
        random_observable(dk, rng.uniform_int(2, dk), rng));
    return in;
  };
  return finish_scan(std::move(res), scan_trials("A5", rule, cfg, spaces,
                                                 canonical, sample, counter));
}

CheckResult check_A6(const UpdateRule& rule, const CheckConfig& cfg) {
  CheckResult res = base_result(rule, "A6", cfg, "composite");
  const auto spaces = cfg.composite_spaces();
  if (spaces.empty()) {
    res.verdict = Verdict::NotApplicable;
    return res;
  }
  int counter = 0;
  const auto canonical = [](const CompositeSpace& sp) {
    nlohmann::json in{
        {"state", state_to_json(entangled_state(sp, 0.8, 1.0))},
        {"outcome_x", outcome_to_json({basis_projector(sp.dim(0), 0), 0})},
        {"outcome_y", outcome_to_json({basis_projector(sp.dim(1), 1), 1})}};
    return std::vector<nlohmann::json>{in};
  };
  const auto sample = [](const CompositeSpace& sp, Rng& rng) {
    const int n = sp.num_subsystems();
    const int k1 = rng.uniform_int(0, n - 1);
    int k2 = rng.uniform_int(0, n - 2);
    if (k2 >= k1) ++k2;
    const int d1 = sp.dim(k1);
    const int d2 = sp.dim(k2);
    nlohmann::json in{{"state", state_to_json(random_state(sp, rng))}};
    in["outcome_x"] = outcome_to_json(
        {random_projector(d1, rng.uniform_int(1, d1), rng), k1});
    in["outcome_y"] = outcome_to_json(
        {random_projector(d2, rng.uniform_int(1, d2), rng), k2});
    return in;
  };
  return finish_scan(std::move(res), scan_trials("A6", rule, cfg, spaces,
                                                 canonical, sample, counter));
}

CheckResult check_det_repeatability(const UpdateRule& rule,
                                    const CheckConfig& cfg) {
  int counter = 0;
  const auto comp = cfg.composite_spaces();
  const ScanOutcome single_scan =
      scan_trials("det-repeatability", rule, cfg, cfg.single_spaces(),
                  canon_repeatability, sample_conditioned, counter);
  const ScanOutcome comp_scan =
      scan_trials("det-repeatability", rule, cfg, comp, canon_repeatability,
                  sample_conditioned, counter);
  return finish_dual(base_result(rule, "det-repeatability", cfg, "both"),
                     single_scan, !comp.empty(), comp_scan);
}

namespace {

struct WeakScan {
  std::optional<Witness> witness;
  int trials = 0;
};

// Dominance is violated per trial; strictness is violated when no trial in
// the scope shows a genuine probability increase.
WeakScan weak_scan(const UpdateRule& rule, const CheckConfig& cfg,
                   const std::vector<std::vector<int>>& spaces, int& counter) {
  WeakScan out;
  if (spaces.empty()) return out;
  bool any = false;
  double best_delta = 0.0;
  nlohmann::json best_in;
  const auto consume = [&](nlohmann::json in) {
    in["mode"] = "dominance";
    const Eval e = evaluate_trial("weak-repeatability", &rule, in, cfg.tol);
    ++out.trials;
    if (e.distance > cfg.tol) {
      out.witness = Witness{in, e.lhs, e.rhs, e.distance};
      return true;
    }
    const double delta = -e.distance;
    if (!any || delta > best_delta) {
      any = true;
      best_delta = delta;
      best_in = in;
    }
    return false;
  };
  for (const auto& dims : spaces) {
    for (const nlohmann::json& in : canon_repeatability(CompositeSpace(dims)))
      if (consume(in)) return out;
  }
  const int per_space =
      std::max(1, cfg.trials / static_cast<int>(spaces.size()));
  for (const auto& dims : spaces) {
    const CompositeSpace sp(dims);
    for (int i = 0; i < per_space; ++i) {
      Rng rng = make_trial_rng(cfg, "weak-repeatability", counter++);
      const nlohmann::json in = sample_conditioned(sp, rng);
      if (in.is_null()) continue;
      if (consume(in)) return out;
    }
  }
  if (any && best_delta <= cfg.tol) {
    nlohmann::json in = best_in;
    in["mode"] = "strictness";
    const Eval e = evaluate_trial("weak-repeatability", &rule, in, cfg.tol);
    out.witness = Witness{in, e.lhs, e.rhs, e.distance};
  }
  return out;
}

}  // namespace

CheckResult check_weak_repeatability(const UpdateRule& rule,
                                     const CheckConfig& cfg) {
  int counter = 0;
  const auto comp = cfg.composite_spaces();
  const WeakScan single_scan = weak_scan(rule, cfg, cfg.single_spaces(), counter);
  const WeakScan comp_scan = weak_scan(rule, cfg, comp, counter);
  ScanOutcome s{single_scan.witness, single_scan.trials};
  ScanOutcome c{comp_scan.witness, comp_scan.trials};
  return finish_dual(base_result(rule, "weak-repeatability", cfg, "both"), s,
                     !comp.empty(), c);
}

namespace {

std::vector<nlohmann::json> canon_prep(const CompositeSpace& sp) {
  const Outcome o{basis_projector(sp.dim(0), 0), 0};
  Gemenge g1, g2;
  if (sp.num_subsystems() == 1) {
    const int d = sp.total();
    const CMat f = dft_matrix(d);
    for (int i = 0; i < d; ++i) {
      g1.items.push_back({1.0 / d, {sp, basis_projector(d, i)}});
      g2.items.push_back({1.0 / d, {sp, (f.col(i) * f.col(i).adjoint()).eval()}});
    }
  } else {
    std::vector<int> hi = ground_levels(sp);
    hi[0] = 1;
    hi[1] = 1;
    g1.items.push_back({0.5, pure_state(sp, product_vec(sp, ground_levels(sp)))});
    g1.items.push_back({0.5, pure_state(sp, product_vec(sp, hi))});
    g2.items.push_back({0.5, entangled_state(sp, 0.5, 1.0)});
    g2.items.push_back({0.5, entangled_state(sp, 0.5, -1.0)});
  }
  nlohmann::json in{{"gemenge1", gemenge_to_json(g1)},
                    {"gemenge2", gemenge_to_json(g2)},
                    {"outcome", outcome_to_json(o)}};
  return {in};
}

nlohmann::json sample_prep(const CompositeSpace& sp, Rng& rng) {
  const int d = sp.total();
  const int rank = rng.uniform_int(2, d);
  const CMat rho = random_density(d, rank, rng);
  Eigen::SelfAdjointEigenSolver<CMat> es(rho);
  std::vector<double> lam;
  std::vector<CVec> vec;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) > 1e-9) {
      lam.push_back(es.eigenvalues()(i));
      vec.push_back(es.eigenvectors().col(i));
    }
  }
  const int r = static_cast<int>(lam.size());
  const CMat w = haar_unitary(r, rng);
  Gemenge g1, g2;
  for (int i = 0; i < r; ++i)
    g1.items.push_back({lam[static_cast<std::size_t>(i)],
                        {sp, (vec[static_cast<std::size_t>(i)] *
                              vec[static_cast<std::size_t>(i)].adjoint())
                                 .eval()}});
  for (int j = 0; j < r; ++j) {
    CVec c = CVec::Zero(d);
    for (int i = 0; i < r; ++i)
      c += w(j, i) * std::sqrt(lam[static_cast<std::size_t>(i)]) *
           vec[static_cast<std::size_t>(i)];
    const double q = c.squaredNorm();
    if (q < 1e-12) continue;
    g2.items.push_back({q, {sp, (c * c.adjoint() / q).eval()}});
  }
  return {{"gemenge1", gemenge_to_json(g1)},
          {"gemenge2", gemenge_to_json(g2)},
          {"outcome", outcome_to_json(random_outcome(sp, rng, true))}};
}

}  // namespace

CheckResult check_prep_indistinguishability(const UpdateRule& rule,
                                            const CheckConfig& cfg) {
  int counter = 0;
  const auto comp = cfg.composite_spaces();
  const ScanOutcome single_scan =
      scan_trials("prep-indistinguishability", rule, cfg, cfg.single_spaces(),
                  canon_prep, sample_prep, counter);
  const ScanOutcome comp_scan = scan_trials(
      "prep-indistinguishability", rule, cfg, comp, canon_prep, sample_prep,
      counter);
  return finish_dual(
      base_result(rule, "prep-indistinguishability", cfg, "both"), single_scan,
      !comp.empty(), comp_scan);
}

CheckResult check_composition_compat(const UpdateRule& rule,
                                     const CheckConfig& cfg) {
  CheckResult res = base_result(rule, "composition-compatibility", cfg, "composite");
  const auto spaces = cfg.composite_spaces();
  if (spaces.empty()) {
    res.verdict = Verdict::NotApplicable;
    return res;
  }
  int counter = 0;
  const auto canonical = [](const CompositeSpace& sp) {
    const Outcome o{basis_projector(sp.dim(0), 0), 0};
    CVec mixed = basis_vec(sp.dim(0), 0);
    for (int k = 1; k < sp.num_subsystems(); ++k)
      mixed = tensor_vec(mixed, uniform_vec(sp.dim(k)));
    return std::vector<nlohmann::json>{
        in_state_outcome(ground_state(sp), o),
        in_state_outcome(entangled_state(sp, 0.5, 1.0), o),
        in_state_outcome(pure_state(sp, mixed), o)};
  };
  const auto sample = [](const CompositeSpace& sp, Rng& rng) {
    return in_state_outcome(random_state(sp, rng),
                            random_outcome(sp, rng, false));
  };
  return finish_scan(std::move(res),
                     scan_trials("composition-compatibility", rule, cfg,
                                 spaces, canonical, sample, counter));
}

namespace {

std::vector<nlohmann::json> canon_ideality(const CompositeSpace& sp) {
  std::vector<nlohmann::json> out;
  const int d0 = sp.dim(0);
  if (sp.num_subsystems() == 1) {
    out.push_back(in_state_outcome(ground_state(sp),
                                   Outcome{basis_projector(d0, 0), 0}));
    const CMat p01 = basis_projector(d0, 0) + basis_projector(d0, 1);
    out.push_back(in_state_outcome(plus_state(sp), Outcome{p01, 0}));
  } else {
    out.push_back(in_state_outcome(entangled_state(sp, 0.5, 1.0),
                                   Outcome{CMat::Identity(d0, d0), 0}));
    out.push_back(in_state_outcome(ground_state(sp),
                                   Outcome{basis_projector(d0, 0), 0}));
  }
  return out;
}

nlohmann::json sample_ideality(const CompositeSpace& sp, Rng& rng) {
  const int d = sp.total();
  for (int a = 0; a < kMaxResample; ++a) {
    const Outcome o = random_outcome(sp, rng, true);
    const CMat q = embedded_projector(o, sp);
    const CMat rho0 = random_density(d, rng.uniform_int(1, d), rng);
    const CMat m = q * rho0 * q;
    const double t = m.trace().real();
    if (t >= kMinOutcomeProb)
      return in_state_outcome({sp, (m / t).eval()}, o);
  }
  return nullptr;
}

}  // namespace

CheckResult check_ideality(const UpdateRule& rule, const CheckConfig& cfg) {
  int counter = 0;
  const auto comp = cfg.composite_spaces();
  const ScanOutcome single_scan =
      scan_trials("ideality", rule, cfg, cfg.single_spaces(), canon_ideality,
                  sample_ideality, counter);
  const ScanOutcome comp_scan = scan_trials(
      "ideality", rule, cfg, comp, canon_ideality, sample_ideality, counter);
  return finish_dual(base_result(rule, "ideality", cfg, "both"), single_scan,
                     !comp.empty(), comp_scan);
}

CheckResult check_local_tomography(const UpdateRule& rule,
                                   const CheckConfig& cfg) {
  CheckResult res = base_result(rule, "local-tomography", cfg, "composite");
  const CheckResult a6 = check_A6(rule, cfg);
  if (a6.verdict != Verdict::Holds) {
    res.verdict = Verdict::NotApplicable;
    return res;
  }
  int counter = 0;
  const auto canonical = [](const CompositeSpace& sp) {
    nlohmann::json in{
        {"state", state_to_json(entangled_state(sp, 0.5, 1.0))},
        {"outcome_x", outcome_to_json({basis_projector(sp.dim(0), 0), 0})},
        {"outcome_y", outcome_to_json({basis_projector(sp.dim(1), 0), 1})}};
    return std::vector<nlohmann::json>{in};
  };
  const auto sample = [](const CompositeSpace& sp, Rng& rng) {
    const int n = sp.num_subsystems();
    const int k1 = rng.uniform_int(0, n - 1);
    int k2 = rng.uniform_int(0, n - 2);
    if (k2 >= k1) ++k2;
    const int d1 = sp.dim(k1);
    const int d2 = sp.dim(k2);
    nlohmann::json in{{"state", state_to_json(random_state(sp, rng))}};
    in["outcome_x"] = outcome_to_json(
        {random_projector(d1, rng.uniform_int(1, d1), rng), k1});
    in["outcome_y"] = outcome_to_json(
        {random_projector(d2, rng.uniform_int(1, d2), rng), k2});
    return in;
  };
  return finish_scan(std::move(res),
                     scan_trials("local-tomography", rule, cfg,
                                 cfg.composite_spaces(), canonical, sample,
                                 counter));
}

CheckResult check_coherence(const UpdateRule& rule, const CheckConfig& cfg) {
  int counter = 0;
  const auto canonical = [](const CompositeSpace& sp) {
    const int d = sp.total();
    const CMat e0 = basis_projector(d, 0);
    const CMat pplus = plus_projector_d(d);
    nlohmann::json t1 = in_state_outcome(plus_state(sp), Outcome{e0, 0});
    t1["outcome_y"] = t1["outcome"];
    t1.erase("outcome");
    t1["projector_x"] = matrix_to_json(e0);
    nlohmann::json t2 =
        in_state_outcome({sp, pplus}, Outcome{CMat::Identity(d, d), 0});
    t2["outcome_y"] = t2["outcome"];
    t2.erase("outcome");
    t2["projector_x"] = matrix_to_json(pplus);
    return std::vector<nlohmann::json>{t1, t2};
  };
  const auto sample = [](const CompositeSpace& sp, Rng& rng) {
    const int d = sp.total();
    const CMat u = haar_unitary(d, rng);
    const int r = rng.uniform_int(1, d);
    const int rp = rng.uniform_int(1, r);
    const CMat v = u.leftCols(r);
    const CMat b = v * haar_unitary(r, rng);
    const CMat py = v * v.adjoint();
    const CMat px = b.leftCols(rp) * b.leftCols(rp).adjoint();
    nlohmann::json in{{"state", state_to_json(random_state(sp, rng))}};
    in["outcome_y"] = outcome_to_json({py, 0});
    in["projector_x"] = matrix_to_json(px);
    return in;
  };
  return finish_scan(base_result(rule, "coherence", cfg, "single-system"),
                     scan_trials("coherence", rule, cfg, cfg.single_spaces(),
                                 canonical, sample, counter));
}

CheckResult check_nonlocality(const UpdateRule& rule, const CheckConfig& cfg) {
  CheckResult res = base_result(rule, "nonlocality", cfg, "composite");
  const CheckResult a6 = check_A6(rule, cfg);
  if (a6.verdict != Verdict::Holds) {
    res.verdict = Verdict::NotApplicable;
    return res;
  }
  const nlohmann::json in{{"a_first", true}};
  const Eval e = evaluate_trial("nonlocality", &rule, in, cfg.tol);
  res.trials_run = 1;
  if (e.distance > cfg.tol) set_violation(res, in, e);
  return res;
}

CheckResult check_complete_positivity(const UpdateRule& rule,
                                      const CheckConfig& cfg) {
  CheckResult res = base_result(rule, "complete-positivity", cfg, "both");
  const auto spaces = all_spaces(cfg);
  int counter = 0;
  const auto canonical = [](const CompositeSpace& sp) {
    std::vector<int> hi = ground_levels(sp);
    hi[0] = 1;
    if (sp.num_subsystems() >= 2) hi[1] = 1;
    nlohmann::json in{
        {"mode", "linearity"},
        {"state1", state_to_json(ground_state(sp))},
        {"state2", state_to_json(pure_state(sp, product_vec(sp, hi)))},
        {"theta", 0.5},
        {"outcome", outcome_to_json({basis_projector(sp.dim(0), 0), 0})}};
    return std::vector<nlohmann::json>{in};
  };
  const auto sample = [](const CompositeSpace& sp, Rng& rng) {
    nlohmann::json in{
        {"mode", "linearity"},
        {"state1", state_to_json(random_state(sp, rng))},
        {"state2", state_to_json(random_state(sp, rng))},
        {"theta", rng.uniform()},
        {"outcome", outcome_to_json(random_outcome(sp, rng, true))}};
    return in;
  };
  const ScanOutcome lin = scan_trials("complete-positivity", rule, cfg, spaces,
                                      canonical, sample, counter);
  res.trials_run = lin.trials;
  if (lin.witness) {
    res.verdict = Verdict::Violated;
    res.witness = lin.witness;
    return res;
  }
  for (const auto& dims : spaces) {
    const CompositeSpace sp(dims);
    std::vector<Outcome> outcomes{{basis_projector(sp.dim(0), 0), 0}};
    Rng rng = make_trial_rng(cfg, "complete-positivity", counter++);
    outcomes.push_back(random_outcome(sp, rng, false));
    if (sp.num_subsystems() >= 2) {
      const int d = sp.total();
      outcomes.push_back(
          {random_projector(d, rng.uniform_int(1, d - 1), rng), std::nullopt});
    }
    for (const Outcome& o : outcomes) {
      nlohmann::json in{{"mode", "choi"},
                        {"dims", sp.dims},
                        {"outcome", outcome_to_json(o)}};
      ++res.trials_run;
      const Eval e = evaluate_trial("complete-positivity", &rule, in, cfg.tol);
      if (e.distance > cfg.tol) {
        set_violation(res, in, e);
        return res;
      }
    }
  }
  return res;
}

std::vector<CheckResult> run_all(const UpdateRule& rule,
                                 const CheckConfig& cfg) {
  std::vector<CheckResult> out;
  for (const std::string& name : all_check_names())
    out.push_back(run_check(name, rule, cfg));
  return out;
}

CheckResult run_check(const std::string& check_name, const UpdateRule& rule,
                      const CheckConfig& cfg) {
  if (check_name == "born") return check_born(rule, cfg);
  if (check_name == "homogeneity") return check_homogeneity(rule, cfg);
  if (check_name == "A1") return check_A1(rule, cfg);
  if (check_name == "A2") return check_A2(rule, cfg);
  if (check_name == "A3") return check_A3(rule, cfg);
  if (check_name == "A4") return check_A4(rule, cfg);
  if (check_name == "A5") return check_A5(rule, cfg);
  if (check_name == "A6") return check_A6(rule, cfg);
  if (check_name == "det-repeatability")
    return check_det_repeatability(rule, cfg);
  if (check_name == "weak-repeatability")
    return check_weak_repeatability(rule, cfg);
  if (check_name == "prep-indistinguishability")
    return check_prep_indistinguishability(rule, cfg);
  if (check_name == "composition-compatibility")
    return check_composition_compat(rule, cfg);
  if (check_name == "ideality") return check_ideality(rule, cfg);
  if (check_name == "local-tomography")
    return check_local_tomography(rule, cfg);
  if (check_name == "coherence") return check_coherence(rule, cfg);
  if (check_name == "nonlocality") return check_nonlocality(rule, cfg);
  if (check_name == "complete-positivity")
    return check_complete_positivity(rule, cfg);
  throw std::invalid_argument("unknown check: " + check_name);
}

std::vector<std::string> all_check_names() {
  return {"born",
          "homogeneity",
          "A1",
          "A2",
          "A3",
          "A4",
          "A5",
          "A6",
          "det-repeatability",
          "weak-repeatability",
          "prep-indistinguishability",
          "composition-compatibility",
          "ideality",
          "local-tomography",
          "coherence",
          "nonlocality",
          "complete-positivity"};
}

double replay_witness(const CheckResult& r) {
  if (!r.witness) throw std::invalid_argument("check result has no witness");
  if (r.check == "observable")
    return evaluate_trial(r.check, nullptr, r.witness->inputs, r.tol).distance;
  const RulePtr rule = make_rule(r.rule);
  return evaluate_trial(r.check, rule.get(), r.witness->inputs, r.tol).distance;
}

double chsh_value(const UpdateRule& rule, bool a_first) {
  const CompositeSpace sp{2, 2};
  const QuantumState singlet = make_state(sp, singlet_projector());
  const auto setting = [](double theta, int sign) {
    CMat m(2, 2);
    m << 1.0 + sign * std::cos(theta), sign * std::sin(theta),
        sign * std::sin(theta), 1.0 - sign * std::cos(theta);
    return (m / 2.0).eval();
  };
  const double as[2] = {0.0, std::numbers::pi / 2.0};
  const double bs[2] = {std::numbers::pi / 4.0, 3.0 * std::numbers::pi / 4.0};
  double e[2][2];
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      double corr = 0.0;
      for (int sa : {1, -1}) {
        for (int sb : {1, -1}) {
          const Outcome oa{setting(as[i], sa), 0};
          const Outcome ob{setting(bs[j], sb), 1};
          const std::vector<Outcome> seq =
              a_first ? std::vector<Outcome>{oa, ob}
                      : std::vector<Outcome>{ob, oa};
          corr += sa * sb *
                  apply_sequence(rule, seq, pure_gemenge(singlet)).total_trace();
        }
      }
      e[i][j] = corr;
    }
  }
  return std::abs(e[0][0] - e[0][1] + e[1][0] + e[1][1]);
}

}  // namespace gur
