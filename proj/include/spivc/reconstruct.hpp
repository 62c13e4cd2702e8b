#pragma once

#include <vector>

#include "spivc/measure.hpp"
#include "spivc/patterns.hpp"
#include "spivc/raster.hpp"

namespace spivc {

enum class SolveMethod { kCorrelation, kLeastSquares, kTv };
enum class StepPolicy { kFixed, kBacktracking };

struct SolverConfig {
  SolveMethod method = SolveMethod::kTv;
  double lambda = -1.0;  // < 0 selects the default heuristic (see below)
  int max_iters = 1500;
  StepPolicy step_policy = StepPolicy::kBacktracking;
  double fixed_step = 1e-3;  // used only by StepPolicy::kFixed
  bool nonneg = false;
  double tol = 1e-9;  // relative objective-change stopping threshold
};

struct IterationRecord {
  int iter = 0;
  double objective = 0.0;
  double step = 0.0;
};

// Default TV weight: 0.05 * mean(|y|) / pixel_count. A starting point, not
// a tuned value; noisy or undersampled problems usually want it raised.
double default_tv_lambda(const std::vector<double>& values, int pixel_count);

// Differential correlation baseline: x̂(p) = (1/N) Σ (I_n - Ī)(P_n(p) - P̄(p)),
// shifted so the minimum is zero. Needs N ≥ 2.
Image reconstruct_correlation(const MeasurementSeries& series,
                              const PatternSequence& patterns);

// Exact inversion oracle: minimizes Σ (⟨x, P_n⟩ + d - I_n)² over the image
// and a scalar DC offset d; minimum-norm solution when underdetermined.
Image reconstruct_lsq(const MeasurementSeries& series,
                      const PatternSequence& patterns);

// TV-regularized inversion: ‖Ax + d·1 − y‖² + λ Σ √((∇x)² + ε²) with the
// anisotropic neighbor-difference TV, optional x ≥ 0 projection, and an
// accelerated monotone descent (objective never increases across accepted
// iterations; momentum restarts on rejection). The offset is eliminated in
// closed form each iterate — d*(x) = mean(y − Ax) — so the iteration runs
// on the centered problem while still minimizing the joint objective.
// Appends one record per accepted iteration to `log` when given.
Image reconstruct_tv(const MeasurementSeries& series,
                     const PatternSequence& patterns, const SolverConfig& cfg,
                     std::vector<IterationRecord>* log = nullptr);

// Dispatch on cfg.method.
Image reconstruct(const MeasurementSeries& series,
                  const PatternSequence& patterns, const SolverConfig& cfg,
                  std::vector<IterationRecord>* log = nullptr);

// Peak signal-to-noise ratio with peak = max(reference); +infinity when the
// images agree exactly.
double psnr(const Image& a, const Image& reference);

double dot_accuracy(const BitMatrix& a, const BitMatrix& b);

// F1 of the foreground class (bit 1). Two empty images score 1; an empty
// prediction against a non-empty truth (or vice versa) scores 0.
double f1_score(const BitMatrix& predicted, const BitMatrix& truth);

}  // namespace spivc
