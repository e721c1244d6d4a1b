#include "ordembed/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ordembed/error.hpp"
#include "ordembed/parallel.hpp"
#include "ordembed/random.hpp"

namespace ordembed {
namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 60;

double squared_distance(const std::vector<double>& x, std::size_t dim, std::size_t i, std::size_t j) {
  double s = 0;
  for (std::size_t k = 0; k < dim; ++k) {
    const double diff = x[i * dim + k] - x[j * dim + k];
    s += diff * diff;
  }
  return s;
}

/// Hinge loss, or its square when `squared` (the smooth warm-start surrogate).
double loss_of(const std::vector<double>& x, std::size_t dim, const std::vector<Comparison>& cs, double gamma,
               bool squared = false) {
  double total = 0;
  for (const Comparison& c : cs) {
    const double term = gamma + squared_distance(x, dim, c.a, c.b) - squared_distance(x, dim, c.c, c.d);
    if (term > 0) total += squared ? term * term : term;
  }
  return total;
}

void gradient_of(const std::vector<double>& x, std::size_t dim, const std::vector<Comparison>& cs, double gamma,
                 std::vector<double>& grad, bool squared = false) {
  grad.assign(x.size(), 0.0);
  for (const Comparison& c : cs) {
    const double term = gamma + squared_distance(x, dim, c.a, c.b) - squared_distance(x, dim, c.c, c.d);
    if (term <= 0) continue;
    const double w = squared ? 2.0 * term : 1.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double near = w * 2.0 * (x[c.a * dim + k] - x[c.b * dim + k]);
      const double far = w * 2.0 * (x[c.c * dim + k] - x[c.d * dim + k]);
      grad[c.a * dim + k] += near;
      grad[c.b * dim + k] -= near;
      grad[c.c * dim + k] -= far;
      grad[c.d * dim + k] += far;
    }
  }
}

double median_sq(const std::vector<double>& x, std::size_t n, std::size_t dim) {
  if (n < 2) return 0;
  std::vector<double> sq;
  sq.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) sq.push_back(squared_distance(x, dim, i, j));
  }
  auto mid = sq.begin() + static_cast<std::ptrdiff_t>(sq.size() / 2);
  std::nth_element(sq.begin(), mid, sq.end());
  return *mid;
}

struct RestartOutcome {
  std::vector<double> x;
  double loss = 0;
  double margin = 0;
  std::vector<std::vector<double>> trace;
};

/// Runs descent until the iteration budget is spent, the loss hits zero or
/// no step passes the Armijo test. Every accepted step lowers the loss.
double descend(std::vector<double>& x, std::size_t dim, const std::vector<Comparison>& cs, double gamma,
               const FitConfig& cfg, bool squared = false, std::vector<double>* trace = nullptr) {
  double loss = loss_of(x, dim, cs, gamma, squared);
  if (trace) trace->push_back(loss);
  double t = cfg.step;
  std::vector<double> grad, trial(x.size());
  for (std::size_t it = 0; it < cfg.iterations && loss > 0; ++it) {
    gradient_of(x, dim, cs, gamma, grad, squared);
    const double gg = std::inner_product(grad.begin(), grad.end(), grad.begin(), 0.0);
    if (gg == 0) break;
    bool accepted = false;
    for (int h = 0; h < kMaxHalvings; ++h) {
      for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] - t * grad[i];
      const double trial_loss = loss_of(trial, dim, cs, gamma, squared);
      if (trial_loss <= loss - kArmijo * t * gg) {
        x.swap(trial);
        loss = trial_loss;
        if (trace) trace->push_back(loss);
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    t *= 2.0;
  }
  return loss;
}

}  // namespace

Embedding bourgain_embed(const FiniteMetricSpace& space, std::size_t reps_per_scale, std::uint64_t seed) {
  const std::size_t n = space.size();
  if (n < 2) throw ValidationError("Bourgain embedding needs n >= 2");
  if (reps_per_scale < 1) throw ValidationError("reps_per_scale must be >= 1");
  if (!space.all_finite()) throw ValidationError("Bourgain embedding needs finite distances");
  std::size_t scales = 0;
  while ((std::size_t{1} << scales) < n) ++scales;
  const std::size_t coords = scales * reps_per_scale;
  const double scale = 1.0 / static_cast<double>(coords);

  Embedding emb = Embedding::zeros(n, coords);
  parallel_for(coords, [&](std::size_t c) {
    const std::size_t size = std::size_t{1} << (c / reps_per_scale);
    auto rng = stream_rng(seed, c);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = 0; i < size; ++i) {
      const std::size_t r = i + std::min(n - i - 1, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n - i)));
      std::swap(order[i], order[r]);
    }
    for (std::size_t x = 0; x < n; ++x) {
      double best = kInfiniteDistance;
      for (std::size_t i = 0; i < size; ++i) best = std::min(best, space(x, order[i]));
      emb.at(x, c) = best * scale;
    }
  });
  return emb;
}

Embedding jl_project(const Embedding& emb, std::size_t d_out, std::uint64_t seed) {
  if (d_out < 1) throw ValidationError("JL output dimension must be >= 1");
  const std::size_t d = emb.dim(), n = emb.size();
  std::vector<double> P(d_out * d);
  auto rng = stream_rng(seed, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& v : P) v = normal(rng);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d_out));

  Embedding out = Embedding::zeros(n, d_out);
  parallel_for(n, [&](std::size_t i) {
    auto x = emb.row(i);
    for (std::size_t r = 0; r < d_out; ++r) {
      double s = 0;
      for (std::size_t k = 0; k < d; ++k) s += P[r * d + k] * x[k];
      out.at(i, r) = s * scale;
    }
  });
  return out;
}

double hinge_loss(const Embedding& emb, const ConstraintSet& cs, double gamma) {
  return loss_of(emb.coords(), emb.dim(), cs.comparisons, gamma);
}

std::vector<double> hinge_gradient(const Embedding& emb, const ConstraintSet& cs, double gamma) {
  std::vector<double> grad;
  gradient_of(emb.coords(), emb.dim(), cs.comparisons, gamma, grad);
  return grad;
}

double median_squared_distance(const Embedding& emb) { return median_sq(emb.coords(), emb.size(), emb.dim()); }

FitResult fit_triplets(const FiniteMetricSpace& space, const ConstraintSet& cs, const FitConfig& cfg) {
  if (cs.family != Family::triplet) {
    throw ValidationError("fit_triplets needs a triplet constraint set, got " + to_string(cs.family));
  }
  if (cfg.d < 1) throw ValidationError("fit dimension must be >= 1");
  if (cfg.restarts < 1) throw ValidationError("restarts must be >= 1");
  if (!(cfg.margin_rel >= 0)) throw ValidationError("margin must be nonnegative");
  if (!(cfg.step > 0)) throw ValidationError("step size must be positive");
  const std::size_t n = space.size();
  validate_constraints(cs, n);
  const std::size_t dim = cfg.d;

  std::vector<RestartOutcome> outcomes(cfg.restarts);
  parallel_for(cfg.restarts, [&](std::size_t r) {
    auto rng = stream_rng(cfg.seed, r);
    std::normal_distribution<double> normal(0.0, 1.0);
    RestartOutcome& out = outcomes[r];
    out.x.resize(n * dim);
    for (double& v : out.x) v = normal(rng);
    for (int phase = 0; phase < 2; ++phase) {
      out.margin = cfg.margin_rel * median_sq(out.x, n, dim);
      if (phase == 0) descend(out.x, dim, cs.comparisons, out.margin, cfg, true);
      std::vector<double>* trace = nullptr;
      if (cfg.record_trace) trace = &out.trace.emplace_back();
      out.loss = descend(out.x, dim, cs.comparisons, out.margin, cfg, false, trace);
    }
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r) {
    if (outcomes[r].loss < outcomes[best].loss) best = r;
  }
  FitResult result;
  result.emb = Embedding(n, dim, outcomes[best].x);
  result.loss = outcomes[best].loss;
  result.margin = outcomes[best].margin;
  result.restart = best;
  result.trace = std::move(outcomes[best].trace);
  for (const RestartOutcome& o : outcomes) result.restart_losses.push_back(o.loss);
  result.violations = check_constraints(result.emb, cs, CheckOptions{2.0, 0.0}).violated.size();
  result.status = result.violations == 0 ? "SAT-in-d" : "UNSAT-in-d not proven";
  return result;
}

}  // namespace ordembed
