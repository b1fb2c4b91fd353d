#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "dualdomain/feasible.hpp"
#include "dualdomain/frame.hpp"

namespace dd {

// Consistent: the solution must lie in the constraint sets (indicators).
// Inconsistent: distances to the sets are minimized instead.
enum class Mode { Consistent, Inconsistent };

enum class Algorithm { General, Tight };

// One reconstruction problem: minimize the weighted l1 norm of the
// coefficients subject to (or penalized by) a time-domain box and a
// TF-domain box. In the synthesis model the unknown is the coefficient
// vector, in the analysis model it is the signal itself.
struct ProblemSpec {
  const FrameSpec* frame = nullptr;
  Model model = Model::Analysis;
  Mode mode = Mode::Consistent;
  std::vector<double> weights;  // diagonal W over Q entries; empty = all ones
  BoxConstraint box_time;       // over P samples; empty = unconstrained
  TfBoxConstraint box_tf;       // over Q coefficients; empty = unconstrained
};

struct SolverConfig {
  double tau = 0.0;
  double sigma = 0.0;
  double rho = 1.0;
  int max_iterations = 300;
  double rel_tolerance = 0.0;  // early stop on relative change; 0 disables
};

// Steps saturating tau*sigma*norm = 1 for the given algorithm with unit
// weights: norm 2 for the two-block tight form, 3 for the three-block one.
SolverConfig default_config(Algorithm alg);

struct SolveReport {
  int iterations_run = 0;
  double final_primal_change = 0.0;  // relative, last iteration
  double dist_time = 0.0;            // Euclidean distance of Lu to the time box
  double dist_tf = 0.0;              // Euclidean distance of Ku to the TF box
  double objective = 0.0;            // weighted l1 norm of Ku
};

struct SolveResult {
  std::vector<double> signal;  // time-domain reconstruction, length P
  SolveReport report;
};

// Magnitude shrinkage by t, phase preserved; entries with |z| <= t vanish.
std::complex<double> soft_threshold(std::complex<double> z, double t);
void soft_threshold(std::span<const std::complex<double>> z, double t,
                    std::span<std::complex<double>> out);
void soft_threshold(std::span<const std::complex<double>> z,
                    std::span<const double> t,
                    std::span<std::complex<double>> out);

// Weighted l1 objective of the primal variable (signal for the analysis
// model, coefficients for the synthesis model).
double objective(const ProblemSpec& problem, std::span<const double> x);
double objective(const ProblemSpec& problem,
                 std::span<const std::complex<double>> z);

// ---------------------------------------------------------------------------
// Generic primal-dual engine over real vectors.

struct LinearOp {
  std::size_t rows = 0;  // output dimension of forward
  std::size_t cols = 0;  // input dimension of forward
  std::function<void(std::span<const double>, std::span<double>)> forward;
  std::function<void(std::span<const double>, std::span<double>)> adjoint;
};

// prox(x, t, out): out = prox of t*h at x.
using ProxFn =
    std::function<void(std::span<const double>, double, std::span<double>)>;

struct DualBlock {
  LinearOp op;
  ProxFn prox;
};

struct GenericProblem {
  std::size_t dim = 0;
  std::function<void(std::span<const double>, std::span<double>)> grad_f;
  ProxFn prox_g;  // null means g = 0
  std::vector<DualBlock> blocks;
  double norm_bound = 0.0;  // norm of sum of op*op; nonpositive = estimate
};

struct GenericReport {
  int iterations_run = 0;
  double final_primal_change = 0.0;
};

// Primal-dual iteration with dual updates through the Moreau identity,
// relaxation on both sides and the reflected dual term in the primal step.
std::vector<double> cv_generic(const GenericProblem& prob,
                               const SolverConfig& config,
                               std::span<const double> init,
                               GenericReport* report = nullptr);

// ---------------------------------------------------------------------------
// Problem-shaped solvers. `init` is the degraded time-domain signal; the
// synthesis model starts from its analysis coefficients. Dual variables
// start at zero.

// Three dual blocks (threshold, time box, TF box); works for any frame.
SolveResult solve_general(const ProblemSpec& problem,
                          const SolverConfig& config,
                          std::span<const double> init);

// Two dual blocks plus an exact primal step through the time box; requires
// a Parseval tight frame.
SolveResult solve_tight(const ProblemSpec& problem, const SolverConfig& config,
                        std::span<const double> init);

}  // namespace dd
