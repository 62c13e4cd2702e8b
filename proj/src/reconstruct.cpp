#include "spivc/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

namespace spivc {

namespace {

void check_pair(const MeasurementSeries& series, const PatternSequence& patterns) {
  if (patterns.count() == 0)
    throw std::invalid_argument("reconstruct: empty pattern sequence");
  if (series.values.size() != std::size_t(patterns.count()))
    throw std::invalid_argument(
        "reconstruct: series length does not match pattern count");
  for (double v : series.values)
    if (!std::isfinite(v))
      throw std::invalid_argument("reconstruct: non-finite measurement");
}

Eigen::MatrixXd pattern_matrix(const PatternSequence& patterns) {
  int n = patterns.count();
  int p = patterns.width * patterns.height;
  Eigen::MatrixXd a(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) a(i, j) = patterns.patterns[i].bits[j];
  return a;
}

Image to_result(const Eigen::VectorXd& x, int width, int height) {
  Image img(width, height);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) img.pixels[i] = x[long(i)];
  return img;
}

// Smoothed anisotropic TV and its gradient: Σ √(t² + ε²) over horizontal
// and vertical neighbor pairs (replicate boundary ≡ in-bounds pairs only).
double tv_value(const Eigen::VectorXd& x, int width, int height, double eps) {
  double acc = 0.0;
  auto term = [&](double t) { return std::sqrt(t * t + eps * eps); };
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      long i = long(r) * width + c;
      if (c + 1 < width) acc += term(x[i + 1] - x[i]);
      if (r + 1 < height) acc += term(x[i + width] - x[i]);
    }
  return acc;
}

void tv_gradient(const Eigen::VectorXd& x, int width, int height, double eps,
                 Eigen::VectorXd& grad) {
  grad.setZero();
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      long i = long(r) * width + c;
      if (c + 1 < width) {
        double t = x[i + 1] - x[i];
        double g = t / std::sqrt(t * t + eps * eps);
        grad[i + 1] += g;
        grad[i] -= g;
      }
      if (r + 1 < height) {
        double t = x[i + width] - x[i];
        double g = t / std::sqrt(t * t + eps * eps);
        grad[i + width] += g;
        grad[i] -= g;
      }
    }
}

}  // namespace

double default_tv_lambda(const std::vector<double>& values, int pixel_count) {
  if (values.empty() || pixel_count <= 0) return 0.0;
  double mean_abs = 0.0;
  for (double v : values) mean_abs += std::abs(v);
  mean_abs /= double(values.size());
  return 0.05 * mean_abs / double(pixel_count);
}

Image reconstruct_correlation(const MeasurementSeries& series,
                              const PatternSequence& patterns) {
  check_pair(series, patterns);
  int n = patterns.count();
  if (n < 2)
    throw std::invalid_argument("reconstruct_correlation: need at least 2 measurements");

  int p = patterns.width * patterns.height;
  double mean_i =
      std::accumulate(series.values.begin(), series.values.end(), 0.0) / n;

  std::vector<double> mean_p(p, 0.0);
  for (const BitMatrix& m : patterns.patterns)
    for (int j = 0; j < p; ++j) mean_p[j] += m.bits[j];
  for (double& v : mean_p) v /= n;

  Image out(patterns.width, patterns.height);
  for (int i = 0; i < n; ++i) {
    double di = series.values[i] - mean_i;
    const BitMatrix& m = patterns.patterns[i];
    for (int j = 0; j < p; ++j)
      out.pixels[j] += di * (double(m.bits[j]) - mean_p[j]);
  }
  double lo = std::numeric_limits<double>::infinity();
  for (double& v : out.pixels) {
    v /= n;
    lo = std::min(lo, v);
  }
  for (double& v : out.pixels) v -= lo;
  return out;
}

Image reconstruct_lsq(const MeasurementSeries& series,
                      const PatternSequence& patterns) {
  check_pair(series, patterns);
  int n = patterns.count();
  int p = patterns.width * patterns.height;

  // Augment with the all-ones column for the DC offset; the minimum-norm
  // solution of the rank-deficient system comes from a complete orthogonal
  // decomposition.
  Eigen::MatrixXd a(n, p + 1);
  a.leftCols(p) = pattern_matrix(patterns);
  a.col(p).setOnes();
  Eigen::VectorXd y =
      Eigen::Map<const Eigen::VectorXd>(series.values.data(), n);
  Eigen::VectorXd z = a.completeOrthogonalDecomposition().solve(y);
  return to_result(z.head(p), patterns.width, patterns.height);
}

Image reconstruct_tv(const MeasurementSeries& series,
                     const PatternSequence& patterns, const SolverConfig& cfg,
                     std::vector<IterationRecord>* log) {
  check_pair(series, patterns);
  if (cfg.max_iters < 1)
    throw std::invalid_argument("reconstruct_tv: max_iters must be >= 1");
  if (!(cfg.tol > 0.0))
    throw std::invalid_argument("reconstruct_tv: tol must be > 0");
  if (!(cfg.lambda < 0.0) && !std::isfinite(cfg.lambda))
    throw std::invalid_argument("reconstruct_tv: non-finite lambda");
  if (cfg.step_policy == StepPolicy::kFixed &&
      !(cfg.fixed_step > 0.0 && std::isfinite(cfg.fixed_step)))
    throw std::invalid_argument("reconstruct_tv: fixed_step must be positive");

  int n = patterns.count();
  int width = patterns.width, height = patterns.height;
  int p = width * height;
  double lambda =
      cfg.lambda >= 0.0 ? cfg.lambda : default_tv_lambda(series.values, p);

  // ε scales with the signal: 1e-6 of the dynamic range of a cheap
  // correlation estimate (the solver only needs the order of magnitude).
  double eps = 1e-6;
  if (n >= 2) {
    Image rough = reconstruct_correlation(series, patterns);
    double range =
        *std::max_element(rough.pixels.begin(), rough.pixels.end());
    if (range > 0.0) eps = 1e-6 * range;
  }

  Eigen::MatrixXd a = pattern_matrix(patterns);
  Eigen::VectorXd y =
      Eigen::Map<const Eigen::VectorXd>(series.values.data(), n);

  // The offset has a closed-form optimum d*(x) = mean(y - Ax); substituting
  // it is the same as centering the columns of A and the values of y. That
  // leaves a problem in x alone and removes the dominant DC component of
  // the 0/1 pattern matrix, which otherwise throttles the step size.
  Eigen::VectorXd col_mean = a.colwise().mean();
  Eigen::VectorXd yc = y.array() - y.mean();

  Eigen::VectorXd x = Eigen::VectorXd::Zero(p);

  Eigen::VectorXd grad_x(p), tv_grad(p);
  // residual = (A - 1·mᵀ)x - yc, evaluated as a matvec plus a rank-one term.
  auto objective = [&](const Eigen::VectorXd& xx, Eigen::VectorXd& residual) {
    residual.noalias() = a * xx;
    residual.array() -= col_mean.dot(xx);
    residual -= yc;
    return residual.squaredNorm() + lambda * tv_value(xx, width, height, eps);
  };

  Eigen::VectorXd residual(n);
  double obj = objective(x, residual);
  if (!std::isfinite(obj))
    throw std::runtime_error("reconstruct_tv: non-finite objective");
  if (log) log->push_back({0, obj, 0.0});

  // Accelerated projected descent with a monotone safeguard: a step must
  // satisfy the quadratic-model backtracking criterion at the extrapolated
  // point AND not increase the objective over the previous accepted iterate;
  // otherwise the momentum restarts from the current point.
  double step = cfg.step_policy == StepPolicy::kFixed ? cfg.fixed_step : 1.0;
  double t_momentum = 1.0;
  Eigen::VectorXd x_prev = x;
  Eigen::VectorXd vx(p), nx(p), diff_x(p);

  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    double beta = 0.0;
    if (t_momentum > 1.0) {
      double t_next = (1.0 + std::sqrt(1.0 + 4.0 * t_momentum * t_momentum)) / 2.0;
      beta = (t_momentum - 1.0) / t_next;
    }
    vx = x + beta * (x - x_prev);

    // Gradient of the smooth objective at the extrapolated point.
    residual.noalias() = a * vx;
    residual.array() -= col_mean.dot(vx);
    residual -= yc;
    double f_v = residual.squaredNorm() + lambda * tv_value(vx, width, height, eps);
    grad_x.noalias() = 2.0 * (a.transpose() * residual);
    grad_x -= (2.0 * residual.sum()) * col_mean;
    tv_gradient(vx, width, height, eps, tv_grad);
    grad_x += lambda * tv_grad;

    bool accepted = false;
    double new_obj = obj;
    for (int bt = 0; bt < 60; ++bt) {
      nx = vx - step * grad_x;
      if (cfg.nonneg) nx = nx.cwiseMax(0.0);
      new_obj = objective(nx, residual);
      if (!std::isfinite(new_obj))
        throw std::runtime_error("reconstruct_tv: non-finite objective");
      if (cfg.step_policy == StepPolicy::kFixed) {
        accepted = true;
        break;
      }
      // Quadratic upper model at vx: accept if the move is justified by
      // the local curvature bound implied by 1/step.
      diff_x = nx - vx;
      double model = f_v + grad_x.dot(diff_x) + diff_x.squaredNorm() / (2.0 * step);
      if (new_obj <= model + 1e-12 * std::abs(model)) {
        accepted = true;
        break;
      }
      step /= 2.0;
    }
    if (!accepted)
      throw std::runtime_error("reconstruct_tv: backtracking failed to find a step");

    if (cfg.step_policy == StepPolicy::kBacktracking && new_obj > obj) {
      // Momentum overshot: restart from the current iterate. x is always a
      // feasible point with a known objective, so progress resumes.
      t_momentum = 1.0;
      x_prev = x;
      continue;
    }

    x_prev = x;
    x = nx;
    t_momentum = (1.0 + std::sqrt(1.0 + 4.0 * t_momentum * t_momentum)) / 2.0;

    double prev_obj = obj;
    obj = new_obj;
    if (log) log->push_back({iter, obj, step});
    if (cfg.step_policy == StepPolicy::kBacktracking)
      step *= 1.2;  // cautious growth; backtracking will trim it again

    if (std::abs(prev_obj - obj) <= cfg.tol * std::max(1.0, std::abs(obj)))
      break;
  }
  return to_result(x, width, height);
}

Image reconstruct(const MeasurementSeries& series,
                  const PatternSequence& patterns, const SolverConfig& cfg,
                  std::vector<IterationRecord>* log) {
  switch (cfg.method) {
    case SolveMethod::kCorrelation:
      return reconstruct_correlation(series, patterns);
    case SolveMethod::kLeastSquares:
      return reconstruct_lsq(series, patterns);
    case SolveMethod::kTv:
      return reconstruct_tv(series, patterns, cfg, log);
  }
  throw std::invalid_argument("reconstruct: unknown method");
}

double psnr(const Image& a, const Image& reference) {
  check_finite(a, "psnr lhs");
  check_finite(reference, "psnr reference");
  check_same_dims(a.width, a.height, reference.width, reference.height, "psnr");
  double peak =
      *std::max_element(reference.pixels.begin(), reference.pixels.end());
  double mse = 0.0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    double dv = a.pixels[i] - reference.pixels[i];
    mse += dv * dv;
  }
  mse /= double(a.pixels.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

double dot_accuracy(const BitMatrix& a, const BitMatrix& b) {
  check_bits(a);
  check_bits(b);
  check_same_dims(a.width, a.height, b.width, b.height, "dot_accuracy");
  std::size_t match = 0;
  for (std::size_t i = 0; i < a.bits.size(); ++i) match += a.bits[i] == b.bits[i];
  return double(match) / double(a.bits.size());
}

double f1_score(const BitMatrix& predicted, const BitMatrix& truth) {
  check_bits(predicted);
  check_bits(truth);
  check_same_dims(predicted.width, predicted.height, truth.width, truth.height,
                  "f1_score");
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < truth.bits.size(); ++i) {
    if (predicted.bits[i] && truth.bits[i]) ++tp;
    else if (predicted.bits[i]) ++fp;
    else if (truth.bits[i]) ++fn;
  }
  if (tp == 0) return fp == 0 && fn == 0 ? 1.0 : 0.0;
  return 2.0 * double(tp) / double(2 * tp + fp + fn);
}

}  // namespace spivc
