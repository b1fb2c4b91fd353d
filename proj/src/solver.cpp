#include "dualdomain/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "dualdomain/parallel.hpp"
#include "dualdomain/rng.hpp"

namespace dd {

namespace {

using cvec = std::vector<std::complex<double>>;
using rvec = std::vector<double>;

constexpr double kStepSlack = 1e-5;  // fp headroom on the step-size product

double weighted_l1(std::span<const double> weights,
                   std::span<const std::complex<double>> z) {
  const std::complex<double>* p = z.data();
  if (weights.empty())
    return par::map_sum(z.size(),
                        [&](std::ptrdiff_t q) { return std::abs(p[q]); });
  const double* w = weights.data();
  return par::map_sum(
      z.size(), [&](std::ptrdiff_t q) { return w[q] * std::abs(p[q]); });
}

void check_steps(const SolverConfig& config, double norm) {
  if (!(config.tau > 0.0) || !(config.sigma > 0.0))
    throw std::invalid_argument("step sizes must be positive");
  const double product = config.tau * config.sigma * norm;
  if (!(product <= 1.0 + kStepSlack))
    throw std::invalid_argument(
        "step sizes violate the convergence bound: tau*sigma*norm = " +
        std::to_string(product));
  if (!(config.rho > 0.0) || !(config.rho < 2.0))
    throw std::invalid_argument("relaxation must lie in (0, 2)");
  if (config.max_iterations < 1)
    throw std::invalid_argument("max_iterations must be at least 1");
  if (!(config.rel_tolerance >= 0.0))
    throw std::invalid_argument("rel_tolerance must be nonnegative");
}

void check_problem(const ProblemSpec& problem, std::span<const double> init) {
  if (problem.frame == nullptr)
    throw std::invalid_argument("problem has no frame");
  const std::size_t P = problem.frame->signal_length();
  const std::size_t Q = problem.frame->num_coefficients();
  if (init.size() != P)
    throw std::invalid_argument("init length does not match the frame");
  if (!par::all_finite(init.data(), init.size()))
    throw std::invalid_argument("init contains non-finite values");
  if (!problem.weights.empty()) {
    if (problem.weights.size() != Q)
      throw std::invalid_argument("weights length does not match the frame");
    for (double w : problem.weights)
      if (!(w >= 0.0)) throw std::invalid_argument("weights must be >= 0");
  }
  if (problem.box_time.size() != 0 && problem.box_time.size() != P)
    throw std::invalid_argument("time box does not match the frame");
  if (problem.box_tf.size() != 0 && problem.box_tf.size() != Q)
    throw std::invalid_argument("TF box does not match the frame");
}

void check_finite_iterate(const cvec& z, int iteration) {
  if (!par::all_finite(z.data(), z.size()))
    throw std::runtime_error("non-finite iterate at iteration " +
                             std::to_string(iteration) +
                             "; check the step sizes");
}

void check_finite_iterate(const rvec& x, int iteration) {
  if (!par::all_finite(x.data(), x.size()))
    throw std::runtime_error("non-finite iterate at iteration " +
                             std::to_string(iteration) +
                             "; check the step sizes");
}

// tv = sigma * (tmp - prox_{h/sigma}(tmp)) with tmp = v/sigma + Lu held in
// `tmp`; `pb` receives the prox output. Complex TF-side blocks.
void dual_step_tf(const cvec& tmp, const TfBoxConstraint& box, Mode mode,
                  double sigma, cvec& pb, cvec& tv) {
  if (mode == Mode::Consistent)
    project(tmp, box, pb);
  else
    prox_distance(tmp, box, 1.0 / sigma, pb);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(tmp.size());
#pragma omp parallel for schedule(static) if (n >= par::grain)
  for (std::ptrdiff_t q = 0; q < n; ++q) tv[q] = sigma * (tmp[q] - pb[q]);
}

void dual_step_time(const rvec& tmp, const BoxConstraint& box, Mode mode,
                    double sigma, rvec& pb, rvec& tv) {
  if (mode == Mode::Consistent)
    project(tmp, box, pb);
  else
    prox_distance(tmp, box, 1.0 / sigma, pb);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(tmp.size());
#pragma omp parallel for schedule(static) if (n >= par::grain)
  for (std::ptrdiff_t i = 0; i < n; ++i) tv[i] = sigma * (tmp[i] - pb[i]);
}

// Threshold block: tmp = v/sigma + W(Ku); tv = sigma*(tmp - soft(tmp, 1/sigma)).
void dual_step_threshold(const cvec& v, const cvec& ku, const double* w,
                         double sigma, cvec& tv) {
  const double inv_sigma = 1.0 / sigma;
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(v.size());
#pragma omp parallel for schedule(static) if (n >= par::grain)
  for (std::ptrdiff_t q = 0; q < n; ++q) {
    const std::complex<double> t =
        v[q] * inv_sigma + (w ? w[q] : 1.0) * ku[q];
    tv[q] = sigma * (t - soft_threshold(t, inv_sigma));
  }
}

inline double abs_sq(double x) { return x * x; }
inline double abs_sq(std::complex<double> z) { return std::norm(z); }

// Relaxation step for one dual block.  Accumulates the squared movement and
// the squared previous norm so callers can track a dual stopping criterion:
// early in a run the primal iterate can sit exactly still while the duals are
// charging up, so primal change alone is not a safe convergence signal.
template <typename Vec>
void relax_dual(Vec& v, const Vec& tv, double rho, double& diff_sq,
                double& prev_sq) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(v.size());
  double d2 = 0.0, p2 = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : d2, p2) \
    if (n >= par::grain)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    p2 += abs_sq(v[i]);
    const auto d = rho * (tv[i] - v[i]);
    v[i] += d;
    d2 += abs_sq(d);
  }
  diff_sq += d2;
  prev_sq += p2;
}

double relative_change(double diff_sq, double prev_sq) {
  const double denom = std::sqrt(std::max(prev_sq, 1e-24));
  return std::sqrt(diff_sq) / denom;
}

SolveReport finish_report(const ProblemSpec& problem, const rvec& signal,
                          const cvec& coefficients, int iterations,
                          double change) {
  SolveReport report;
  report.iterations_run = iterations;
  report.final_primal_change = change;
  report.dist_time = distance(signal, problem.box_time);
  report.dist_tf = distance(coefficients, problem.box_tf);
  report.objective = weighted_l1(problem.weights, coefficients);
  return report;
}

}  // namespace

SolverConfig default_config(Algorithm alg) {
  SolverConfig config;
  const double norm = alg == Algorithm::Tight ? 2.0 : 3.0;
  config.tau = config.sigma = 1.0 / std::sqrt(norm);
  config.rho = 1.0;
  config.max_iterations = 300;
  config.rel_tolerance = 0.0;
  return config;
}

std::complex<double> soft_threshold(std::complex<double> z, double t) {
  const double mag = std::abs(z);
  if (mag <= t) return {0.0, 0.0};
  const double shrink = 1.0 - t / mag;
  return {z.real() * shrink, z.imag() * shrink};
}

void soft_threshold(std::span<const std::complex<double>> z, double t,
                    std::span<std::complex<double>> out) {
  if (t < 0.0) throw std::invalid_argument("negative threshold");
  if (out.size() != z.size()) throw std::invalid_argument("size mismatch");
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(z.size());
#pragma omp parallel for schedule(static) if (n >= par::grain)
  for (std::ptrdiff_t q = 0; q < n; ++q) out[q] = soft_threshold(z[q], t);
}

void soft_threshold(std::span<const std::complex<double>> z,
                    std::span<const double> t,
                    std::span<std::complex<double>> out) {
  if (out.size() != z.size() || t.size() != z.size())
    throw std::invalid_argument("size mismatch");
  for (double ti : t)
    if (!(ti >= 0.0)) throw std::invalid_argument("negative threshold");
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(z.size());
#pragma omp parallel for schedule(static) if (n >= par::grain)
  for (std::ptrdiff_t q = 0; q < n; ++q) out[q] = soft_threshold(z[q], t[q]);
}

double objective(const ProblemSpec& problem, std::span<const double> x) {
  if (problem.frame == nullptr)
    throw std::invalid_argument("problem has no frame");
  if (problem.model != Model::Analysis)
    throw std::invalid_argument(
        "synthesis-model objective takes coefficients");
  if (x.size() != problem.frame->signal_length())
    throw std::invalid_argument("signal length does not match the frame");
  const cvec c = analyze(*problem.frame, x);
  return weighted_l1(problem.weights, c);
}

double objective(const ProblemSpec& problem,
                 std::span<const std::complex<double>> z) {
  if (problem.frame == nullptr)
    throw std::invalid_argument("problem has no frame");
  if (problem.model != Model::Synthesis)
    throw std::invalid_argument("analysis-model objective takes a signal");
  if (z.size() != problem.frame->num_coefficients())
    throw std::invalid_argument(
        "coefficient length does not match the frame");
  return weighted_l1(problem.weights, z);
}

std::vector<double> cv_generic(const GenericProblem& prob,
                               const SolverConfig& config,
                               std::span<const double> init,
                               GenericReport* report) {
  if (prob.dim == 0) throw std::invalid_argument("zero-dimensional problem");
  if (init.size() != prob.dim)
    throw std::invalid_argument("init length does not match the problem");
  for (const DualBlock& b : prob.blocks) {
    if (b.op.cols != prob.dim)
      throw std::invalid_argument("operator input dimension mismatch");
    if (b.op.rows == 0) throw std::invalid_argument("empty dual block");
    if (!b.op.forward || !b.op.adjoint || !b.prox)
      throw std::invalid_argument("incomplete dual block");
  }

  double norm = prob.norm_bound;
  if (!(norm > 0.0)) {
    rvec tmp_rows, acc(prob.dim);
    norm = power_iteration_norm(
        prob.dim, [&](const rvec& x, rvec& out) {
          std::fill(acc.begin(), acc.end(), 0.0);
          for (const DualBlock& b : prob.blocks) {
            tmp_rows.assign(b.op.rows, 0.0);
            rvec cols(prob.dim);
            b.op.forward(x, tmp_rows);
            b.op.adjoint(tmp_rows, cols);
            for (std::size_t i = 0; i < prob.dim; ++i) acc[i] += cols[i];
          }
          out = acc;
        });
  }
  check_steps(config, norm);

  const double tau = config.tau, sigma = config.sigma, rho = config.rho;
  const double inv_sigma = 1.0 / sigma;
  const std::size_t M = prob.blocks.size();

  rvec u(init.begin(), init.end());
  std::vector<rvec> v(M), tv(M), row_buf(M);
  for (std::size_t m = 0; m < M; ++m) {
    v[m].assign(prob.blocks[m].op.rows, 0.0);
    tv[m].assign(prob.blocks[m].op.rows, 0.0);
    row_buf[m].assign(prob.blocks[m].op.rows, 0.0);
  }
  rvec acc(prob.dim), grad(prob.dim), unew(prob.dim), col_buf(prob.dim);

  int iterations = 0;
  double change = 0.0;
  for (int k = 0; k < config.max_iterations; ++k) {
    // Dual half-steps via the Moreau identity.
    for (std::size_t m = 0; m < M; ++m) {
      const DualBlock& b = prob.blocks[m];
      b.op.forward(u, row_buf[m]);
      for (std::size_t j = 0; j < b.op.rows; ++j)
        row_buf[m][j] += v[m][j] * inv_sigma;
      b.prox(row_buf[m], inv_sigma, tv[m]);
      for (std::size_t j = 0; j < b.op.rows; ++j)
        tv[m][j] = sigma * (row_buf[m][j] - tv[m][j]);
    }

    // Primal step with the reflected dual term.
    acc = u;
    if (prob.grad_f) {
      prob.grad_f(u, grad);
      for (std::size_t i = 0; i < prob.dim; ++i) acc[i] -= tau * grad[i];
    }
    for (std::size_t m = 0; m < M; ++m) {
      const DualBlock& b = prob.blocks[m];
      for (std::size_t j = 0; j < b.op.rows; ++j)
        row_buf[m][j] = 2.0 * tv[m][j] - v[m][j];
      b.op.adjoint(row_buf[m], col_buf);
      for (std::size_t i = 0; i < prob.dim; ++i) acc[i] -= tau * col_buf[i];
    }
    if (prob.prox_g)
      prob.prox_g(acc, tau, unew);
    else
      unew = acc;

    double prev_sq = 0.0, diff_sq = 0.0;
    for (std::size_t i = 0; i < prob.dim; ++i) {
      prev_sq += u[i] * u[i];
      const double d = rho * (unew[i] - u[i]);
      u[i] += d;
      diff_sq += d * d;
    }
    double dual_diff_sq = 0.0, dual_prev_sq = 0.0;
    for (std::size_t m = 0; m < M; ++m)
      relax_dual(v[m], tv[m], rho, dual_diff_sq, dual_prev_sq);

    iterations = k + 1;
    change = relative_change(diff_sq, prev_sq);
    const double dual_change = relative_change(dual_diff_sq, dual_prev_sq);
    if (k % 10 == 9) check_finite_iterate(u, k);
    if (config.rel_tolerance > 0.0 && change <= config.rel_tolerance &&
        dual_change <= config.rel_tolerance)
      break;
  }
  check_finite_iterate(u, iterations);

  if (report != nullptr) {
    report->iterations_run = iterations;
    report->final_primal_change = change;
  }
  return u;
}

namespace {

// Three-block core, synthesis model: the primal lives in the coefficient
// space.
SolveResult general_synthesis(const ProblemSpec& problem,
                              const SolverConfig& config,
                              std::span<const double> init) {
  const FrameSpec& frame = *problem.frame;
  const std::size_t P = frame.signal_length();
  const std::size_t Q = frame.num_coefficients();
  const double* w =
      problem.weights.empty() ? nullptr : problem.weights.data();
  const double tau = config.tau, sigma = config.sigma, rho = config.rho;
  const double inv_sigma = 1.0 / sigma;
  const std::ptrdiff_t nq = static_cast<std::ptrdiff_t>(Q);
  const std::ptrdiff_t np = static_cast<std::ptrdiff_t>(P);

  cvec z = analyze(frame, init);
  cvec v1(Q, {0.0, 0.0}), v3(Q, {0.0, 0.0});
  rvec v2(P, 0.0);
  cvec tv1(Q), tv3(Q), tmp_q(Q), pb_q(Q), reflected_q(Q);
  rvec tv2(P), tmp_p(P), pb_p(P);

  int iterations = 0;
  double change = 0.0;
  for (int k = 0; k < config.max_iterations; ++k) {
    const rvec s = synthesize(frame, z);  // L z with L = A*

    dual_step_threshold(v1, z, w, sigma, tv1);

#pragma omp parallel for schedule(static) if (np >= par::grain)
    for (std::ptrdiff_t i = 0; i < np; ++i)
      tmp_p[i] = v2[i] * inv_sigma + s[i];
    dual_step_time(tmp_p, problem.box_time, problem.mode, sigma, pb_p, tv2);

#pragma omp parallel for schedule(static) if (nq >= par::grain)
    for (std::ptrdiff_t q = 0; q < nq; ++q)
      tmp_q[q] = v3[q] * inv_sigma + z[q];
    dual_step_tf(tmp_q, problem.box_tf, problem.mode, sigma, pb_q, tv3);

    // z <- z - rho*tau*( W(2tv1 - v1) + A(2tv2 - v2) + (2tv3 - v3) )
#pragma omp parallel for schedule(static) if (np >= par::grain)
    for (std::ptrdiff_t i = 0; i < np; ++i)
      tmp_p[i] = 2.0 * tv2[i] - v2[i];
    const cvec lifted = analyze(frame, tmp_p);
    const double step = rho * tau;
    const double prev_sq = par::norm_sq(z.data(), Q);
    const double diff_sq = par::map_sum(Q, [&](std::ptrdiff_t q) {
      const std::complex<double> d =
          step * ((w ? w[q] : 1.0) * (2.0 * tv1[q] - v1[q]) + lifted[q] +
                  (2.0 * tv3[q] - v3[q]));
      z[q] -= d;
      return std::norm(d);
    });

    double dual_diff_sq = 0.0, dual_prev_sq = 0.0;
    relax_dual(v1, tv1, rho, dual_diff_sq, dual_prev_sq);
    relax_dual(v2, tv2, rho, dual_diff_sq, dual_prev_sq);
    relax_dual(v3, tv3, rho, dual_diff_sq, dual_prev_sq);

    iterations = k + 1;
    change = relative_change(diff_sq, prev_sq);
    const double dual_change = relative_change(dual_diff_sq, dual_prev_sq);
    if (k % 10 == 9) check_finite_iterate(z, k);
    if (config.rel_tolerance > 0.0 && change <= config.rel_tolerance &&
        dual_change <= config.rel_tolerance)
      break;
  }
  check_finite_iterate(z, iterations);

  SolveResult result;
  result.signal = synthesize(frame, z);
  result.report = finish_report(problem, result.signal, z, iterations, change);
  return result;
}

// Three-block core, analysis model: the primal is the time-domain signal.
SolveResult general_analysis(const ProblemSpec& problem,
                             const SolverConfig& config,
                             std::span<const double> init) {
  const FrameSpec& frame = *problem.frame;
  const std::size_t P = frame.signal_length();
  const std::size_t Q = frame.num_coefficients();
  const double* w =
      problem.weights.empty() ? nullptr : problem.weights.data();
  const double tau = config.tau, sigma = config.sigma, rho = config.rho;
  const double inv_sigma = 1.0 / sigma;
  const std::ptrdiff_t nq = static_cast<std::ptrdiff_t>(Q);
  const std::ptrdiff_t np = static_cast<std::ptrdiff_t>(P);

  rvec x(init.begin(), init.end());
  cvec v1(Q, {0.0, 0.0}), v3(Q, {0.0, 0.0});
  rvec v2(P, 0.0);
  cvec tv1(Q), tv3(Q), tmp_q(Q), pb_q(Q), combined_q(Q);
  rvec tv2(P), tmp_p(P), pb_p(P);

  int iterations = 0;
  double change = 0.0;
  for (int k = 0; k < config.max_iterations; ++k) {
    const cvec c = analyze(frame, x);  // K x with K = A

    dual_step_threshold(v1, c, w, sigma, tv1);

#pragma omp parallel for schedule(static) if (np >= par::grain)
    for (std::ptrdiff_t i = 0; i < np; ++i)
      tmp_p[i] = v2[i] * inv_sigma + x[i];
    dual_step_time(tmp_p, problem.box_time, problem.mode, sigma, pb_p, tv2);

#pragma omp parallel for schedule(static) if (nq >= par::grain)
    for (std::ptrdiff_t q = 0; q < nq; ++q)
      tmp_q[q] = v3[q] * inv_sigma + c[q];
    dual_step_tf(tmp_q, problem.box_tf, problem.mode, sigma, pb_q, tv3);

    // x <- x - rho*tau*( A*(W(2tv1 - v1) + (2tv3 - v3)) + (2tv2 - v2) )
#pragma omp parallel for schedule(static) if (nq >= par::grain)
    for (std::ptrdiff_t q = 0; q < nq; ++q)
      combined_q[q] = (w ? w[q] : 1.0) * (2.0 * tv1[q] - v1[q]) +
                      (2.0 * tv3[q] - v3[q]);
    const rvec back = synthesize(frame, combined_q);
    const double step = rho * tau;
    const double prev_sq = par::norm_sq(x.data(), P);
    const double diff_sq = par::map_sum(P, [&](std::ptrdiff_t i) {
      const double d = step * (back[i] + 2.0 * tv2[i] - v2[i]);
      x[i] -= d;
      return d * d;
    });

    double dual_diff_sq = 0.0, dual_prev_sq = 0.0;
    relax_dual(v1, tv1, rho, dual_diff_sq, dual_prev_sq);
    relax_dual(v2, tv2, rho, dual_diff_sq, dual_prev_sq);
    relax_dual(v3, tv3, rho, dual_diff_sq, dual_prev_sq);

    iterations = k + 1;
    change = relative_change(diff_sq, prev_sq);
    const double dual_change = relative_change(dual_diff_sq, dual_prev_sq);
    if (k % 10 == 9) check_finite_iterate(x, k);
    if (config.rel_tolerance > 0.0 && change <= config.rel_tolerance &&
        dual_change <= config.rel_tolerance)
      break;
  }
  check_finite_iterate(x, iterations);

  SolveResult result;
  result.signal = std::move(x);
  const cvec c = analyze(frame, result.signal);
  result.report = finish_report(problem, result.signal, c, iterations, change);
  return result;
}

// Tight two-block core, synthesis model.
SolveResult tight_synthesis(const ProblemSpec& problem,
                            const SolverConfig& config,
                            std::span<const double> init) {
  const FrameSpec& frame = *problem.frame;
  const std::size_t P = frame.signal_length();
  const std::size_t Q = frame.num_coefficients();
  const double* w =
      problem.weights.empty() ? nullptr : problem.weights.data();
  const double tau = config.tau, sigma = config.sigma, rho = config.rho;
  const double inv_sigma = 1.0 / sigma;
  const std::ptrdiff_t nq = static_cast<std::ptrdiff_t>(Q);
  const std::ptrdiff_t np = static_cast<std::ptrdiff_t>(P);

  cvec z = analyze(frame, init);
  cvec v1(Q, {0.0, 0.0}), v2(Q, {0.0, 0.0});
  cvec tv1(Q), tv2(Q), tmp_q(Q), pb_q(Q), w_q(Q);
  rvec p_buf(P), proj_p(P);

  int iterations = 0;
  double change = 0.0;
  for (int k = 0; k < config.max_iterations; ++k) {
    dual_step_threshold(v1, z, w, sigma, tv1);

#pragma omp parallel for schedule(static) if (nq >= par::grain)
    for (std::ptrdiff_t q = 0; q < nq; ++q)
      tmp_q[q] = v2[q] * inv_sigma + z[q];
    dual_step_tf(tmp_q, problem.box_tf, problem.mode, sigma, pb_q, tv2);

    // w = z - tau*( W(2tv1 - v1) + (2tv2 - v2) )
#pragma omp parallel for schedule(static) if (nq >= par::grain)
    for (std::ptrdiff_t q = 0; q < nq; ++q)
      w_q[q] = z[q] - tau * ((w ? w[q] : 1.0) * (2.0 * tv1[q] - v1[q]) +
                             (2.0 * tv2[q] - v2[q]));

    // u~ = w + A(prox(A*w) - A*w); prox is the projection when consistent.
    const rvec lw = synthesize(frame, w_q);
    if (problem.mode == Mode::Consistent)
      project(lw, problem.box_time, proj_p);
    else
      prox_distance(lw, problem.box_time, tau, proj_p);
#pragma omp parallel for schedule(static) if (np >= par::grain)
    for (std::ptrdiff_t i = 0; i < np; ++i) p_buf[i] = proj_p[i] - lw[i];
    const cvec corr = analyze(frame, p_buf);

    const double prev_sq = par::norm_sq(z.data(), Q);
    const double diff_sq = par::map_sum(Q, [&](std::ptrdiff_t q) {
      const std::complex<double> d = rho * (w_q[q] + corr[q] - z[q]);
      z[q] += d;
      return std::norm(d);
    });

    double dual_diff_sq = 0.0, dual_prev_sq = 0.0;
    relax_dual(v1, tv1, rho, dual_diff_sq, dual_prev_sq);
    relax_dual(v2, tv2, rho, dual_diff_sq, dual_prev_sq);

    iterations = k + 1;
    change = relative_change(diff_sq, prev_sq);
    const double dual_change = relative_change(dual_diff_sq, dual_prev_sq);
    if (k % 10 == 9) check_finite_iterate(z, k);
    if (config.rel_tolerance > 0.0 && change <= config.rel_tolerance &&
        dual_change <= config.rel_tolerance)
      break;
  }
  check_finite_iterate(z, iterations);

  SolveResult result;
  result.signal = synthesize(frame, z);
  result.report = finish_report(problem, result.signal, z, iterations, change);
  return result;
}

// Tight two-block core, analysis model: L is the identity, so the primal
// step is the plain time-domain projection (or distance prox).
SolveResult tight_analysis(const ProblemSpec& problem,
                           const SolverConfig& config,
                           std::span<const double> init) {
  const FrameSpec& frame = *problem.frame;
  const std::size_t P = frame.signal_length();
  const std::size_t Q = frame.num_coefficients();
  const double* w =
      problem.weights.empty() ? nullptr : problem.weights.data();
  const double tau = config.tau, sigma = config.sigma, rho = config.rho;
  const double inv_sigma = 1.0 / sigma;
  const std::ptrdiff_t nq = static_cast<std::ptrdiff_t>(Q);

  rvec x(init.begin(), init.end());
  cvec v1(Q, {0.0, 0.0}), v2(Q, {0.0, 0.0});
  cvec tv1(Q), tv2(Q), tmp_q(Q), pb_q(Q), combined_q(Q);
  rvec w_p(P), u_p(P);

  int iterations = 0;
  double change = 0.0;
  for (int k = 0; k < config.max_iterations; ++k) {
    const cvec c = analyze(frame, x);

    dual_step_threshold(v1, c, w, sigma, tv1);

#pragma omp parallel for schedule(static) if (nq >= par::grain)
    for (std::ptrdiff_t q = 0; q < nq; ++q)
      tmp_q[q] = v2[q] * inv_sigma + c[q];
    dual_step_tf(tmp_q, problem.box_tf, problem.mode, sigma, pb_q, tv2);

#pragma omp parallel for schedule(static) if (nq >= par::grain)
    for (std::ptrdiff_t q = 0; q < nq; ++q)
      combined_q[q] = (w ? w[q] : 1.0) * (2.0 * tv1[q] - v1[q]) +
                      (2.0 * tv2[q] - v2[q]);
    const rvec back = synthesize(frame, combined_q);
    const std::ptrdiff_t np = static_cast<std::ptrdiff_t>(P);
#pragma omp parallel for schedule(static) if (np >= par::grain)
    for (std::ptrdiff_t i = 0; i < np; ++i) w_p[i] = x[i] - tau * back[i];

    if (problem.mode == Mode::Consistent)
      project(w_p, problem.box_time, u_p);
    else
      prox_distance(w_p, problem.box_time, tau, u_p);

    const double prev_sq = par::norm_sq(x.data(), P);
    const double diff_sq = par::map_sum(P, [&](std::ptrdiff_t i) {
      const double d = rho * (u_p[i] - x[i]);
      x[i] += d;
      return d * d;
    });

    double dual_diff_sq = 0.0, dual_prev_sq = 0.0;
    relax_dual(v1, tv1, rho, dual_diff_sq, dual_prev_sq);
    relax_dual(v2, tv2, rho, dual_diff_sq, dual_prev_sq);

    iterations = k + 1;
    change = relative_change(diff_sq, prev_sq);
    const double dual_change = relative_change(dual_diff_sq, dual_prev_sq);
    if (k % 10 == 9) check_finite_iterate(x, k);
    if (config.rel_tolerance > 0.0 && change <= config.rel_tolerance &&
        dual_change <= config.rel_tolerance)
      break;
  }
  check_finite_iterate(x, iterations);

  SolveResult result;
  result.signal = std::move(x);
  const cvec c = analyze(frame, result.signal);
  result.report = finish_report(problem, result.signal, c, iterations, change);
  return result;
}

void check_tightness(const FrameSpec& frame) {
  const std::size_t P = frame.signal_length();
  Rng rng(411);
  rvec t(P);
  for (double& v : t) v = rng.uniform(-1.0, 1.0);
  const rvec round_trip = synthesize(frame, analyze(frame, t));
  double diff_sq = 0.0, ref_sq = 0.0;
  for (std::size_t i = 0; i < P; ++i) {
    const double d = round_trip[i] - t[i];
    diff_sq += d * d;
    ref_sq += t[i] * t[i];
  }
  if (!(std::sqrt(diff_sq) <= 1e-8 * std::sqrt(ref_sq)))
    throw std::invalid_argument("frame is not Parseval tight");
}

}  // namespace

SolveResult solve_general(const ProblemSpec& problem,
                          const SolverConfig& config,
                          std::span<const double> init) {
  check_problem(problem, init);
  const double norm = operator_norm(*problem.frame, OperatorStack::GeneralTriple,
                                    problem.model, problem.weights);
  check_steps(config, norm);
  return problem.model == Model::Synthesis
             ? general_synthesis(problem, config, init)
             : general_analysis(problem, config, init);
}

SolveResult solve_tight(const ProblemSpec& problem, const SolverConfig& config,
                        std::span<const double> init) {
  check_problem(problem, init);
  check_tightness(*problem.frame);
  const double norm = operator_norm(*problem.frame, OperatorStack::TightPair,
                                    problem.model, problem.weights);
  check_steps(config, norm);
  return problem.model == Model::Synthesis
             ? tight_synthesis(problem, config, init)
             : tight_analysis(problem, config, init);
}

}  // namespace dd
