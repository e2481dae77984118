#pragma once

// Post-processing of blowup runs: power-law fits of the norm, blowup point
// tracking, self-similar frames and the Type-I profile residual.

#include <optional>
#include <span>
#include <vector>

#include "nlslab/field.hpp"

namespace nlslab {

struct BlowupFit {
  double T = 0.0;
  double alpha = 0.0;
  double C0 = 0.0;
  double r_squared = 0.0;
  double t0 = 0.0, t1 = 0.0;  // window actually used
  int points = 0;
  double jarque_bera = 0.0;
  bool residual_normality_flag = false;  // true when residuals pass a 5% normality test
};

struct FitOptions {
  int scan_points = 400;
  // candidate T range: t1 + width * [min_offset, max_offset]
  double min_offset = 1e-7;
  double max_offset = 20.0;
};

/// 1/||u|| ~ C0 (T - t)^alpha on the samples with t in [t0, t1].
BlowupFit fit_blowup_rate(std::span<const double> t, std::span<const double> norm, double t0, double t1,
                          const FitOptions& opt = {});

struct FitReport {
  BlowupFit full;
  std::optional<BlowupFit> first_half, second_half;
};

/// Full-window fit plus the fits on both halves of the window.
FitReport fit_blowup_rate_with_halves(std::span<const double> t, std::span<const double> norm, double t0, double t1,
                                      const FitOptions& opt = {});

struct BlowupPath {
  std::vector<double> t;
  std::vector<double> xi;  // unwrapped: consecutive points differ by less than half a period
  std::vector<double> amplitude;
};

struct PathEvent {
  double t;
  int count_before;
  int count_after;
};

struct TrackResult {
  std::vector<BlowupPath> paths;
  std::vector<int> counts;  // maxima per snapshot
  std::vector<PathEvent> events;
};

/// Local maxima of |u| above half the sup norm on the oversampled grid,
/// refined by a parabola through three samples and linked by nearest neighbour.
TrackResult track_blowup_points(std::span<const FourierField> snapshots, std::span<const double> times);

/// Refined positions of the maxima of one field (in [0, period)).
std::vector<std::pair<double, double>> peak_positions(const FourierField& u, double relative_floor = 0.5);

std::vector<double> median_filter5(std::span<const double> x);
/// Central differences (one-sided at the ends).
std::vector<double> central_difference(std::span<const double> t, std::span<const double> x);

struct Scaling {
  double alpha = 1.0;
  double beta = 0.5;
};

/// (2, 1) for a single-mode exponential, (1, 1/2) otherwise.
Scaling default_scaling(const FourierField& u0);

struct FrameGrid {
  double y_min = -10.0;
  double y_max = 10.0;
  int points = 512;  // y_max excluded
};

struct SelfSimilarFrame {
  double t = 0.0;
  double s = 0.0;
  std::vector<double> y_grid;
  std::vector<cplx> U_values;
  double xi = 0.0;
  Scaling scaling;
  bool wrapped = false;  // the y-grid covers more than one spatial period
};

/// U(s, y) = (T - t)^alpha u(t, xi + (T - t)^beta y) by evaluating the Fourier
/// series. Throws std::invalid_argument if t >= fit.T.
SelfSimilarFrame rescale_frame(const FourierField& u, double t, const BlowupFit& fit, Scaling scaling, double xi,
                               const FrameGrid& grid = {});

/// U'' - (i/2) y U' - i U + U^2 on the frame's grid, derivatives taken
/// spectrally on the periodic extension. Requires scaling (1, 1/2).
std::vector<cplx> typeI_residual_field(const SelfSimilarFrame& frame);
/// sqrt(sum w_j |R_j|^2 h) with a Tukey window w (flat on the middle half).
double typeI_residual(const SelfSimilarFrame& frame);
std::vector<double> tukey_window(int n, double taper = 0.5);

}  // namespace nlslab
