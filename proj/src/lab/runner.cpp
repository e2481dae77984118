#include "nlslab/lab/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <ostream>

#include <json.hpp>

#include "nlslab/evolution.hpp"
#include "nlslab/field_io.hpp"
#include "nlslab/galerkin.hpp"
#include "nlslab/hunt.hpp"
#include "nlslab/lab/initial.hpp"
#include "nlslab/lab/plot.hpp"
#include "nlslab/lab/series_io.hpp"
#include "nlslab/manifold.hpp"
#include "nlslab/manifold_io.hpp"
#include "nlslab/selfsim.hpp"

#ifndef NLSLAB_VERSION
#define NLSLAB_VERSION "unknown"
#endif

namespace nlslab::lab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kSeriesEnergyModes = 8;

struct Artifacts {
  fs::path dir;
  std::ostream* log;
  std::string outcome;
  json details = json::object();

  void say(const std::string& line) const {
    if (log) *log << line << '\n' << std::flush;
  }
};

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<std::string> series_header() {
  std::vector<std::string> h{"t", "sup_norm"};
  for (int n = 0; n <= kSeriesEnergyModes; ++n) h.push_back("E_" + std::to_string(n));
  return h;
}

std::vector<double> series_row(double t, double norm, const std::vector<double>& energy) {
  std::vector<double> r{t, norm};
  for (int n = 0; n <= kSeriesEnergyModes; ++n)
    r.push_back(static_cast<std::size_t>(n) < energy.size() ? energy[static_cast<std::size_t>(n)] : 0.0);
  return r;
}

// keeps at most `cap` evenly spaced indices out of n
std::vector<std::size_t> thin(std::size_t n, std::size_t cap) {
  std::vector<std::size_t> idx;
  if (n == 0) return idx;
  if (n <= cap) {
    for (std::size_t i = 0; i < n; ++i) idx.push_back(i);
    return idx;
  }
  for (std::size_t j = 0; j < cap; ++j) idx.push_back(j * (n - 1) / (cap - 1));
  return idx;
}

Line thinned_line(const std::string& label, const std::vector<double>& x, const std::vector<double>& y,
                  std::size_t cap = 4000) {
  Line l{label, {}, {}};
  for (const auto i : thin(std::min(x.size(), y.size()), cap)) {
    l.x.push_back(x[i]);
    l.y.push_back(y[i]);
  }
  return l;
}

void energy_plot(const fs::path& path, const std::string& title, const std::vector<double>& t,
                 const std::vector<std::vector<double>>& energy, int modes) {
  LinePlot p{title, "t", "E_n", {}, true, {}};
  for (int n = 0; n <= modes; ++n) {
    std::vector<double> y;
    for (const auto& e : energy) y.push_back(static_cast<std::size_t>(n) < e.size() ? e[static_cast<std::size_t>(n)] : 0);
    p.lines.push_back(thinned_line("E_" + std::to_string(n), t, y));
  }
  write_svg(path, p);
}

std::vector<double> inverse(const std::vector<double>& v) {
  std::vector<double> out;
  for (const double x : v) out.push_back(x > 0 ? 1.0 / x : std::nan(""));
  return out;
}

void fresh_dir(const fs::path& p) {
  fs::remove_all(p);
  fs::create_directories(p);
}

std::string snapshot_stem(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%06zu", i);
  return buf;
}

// ---------------------------------------------------------------- simulate

void run_simulate(const SimulateBlock& b, Artifacts& out) {
  const FourierField u0 = parse_initial(b.initial, b.n_modes, b.period);
  EvolveConfig ec;
  ec.theta = b.theta;
  ec.dt = b.dt;
  ec.t_end = b.t_end;
  ec.n_modes = b.n_modes;
  ec.period = b.period;
  ec.blowup_threshold = b.blowup_threshold;
  ec.record_stride = b.record_stride;
  ec.energy_modes = std::max(b.energy_modes, kSeriesEnergyModes);
  ec.trapping_check = b.trapping_check;
  ec.stop_on_trap = false;
  ec.keep_snapshots = b.snapshot_stride > 0;
  out.say("simulate: " + std::to_string(ec.n_steps()) + " steps of " + format_double(ec.effective_dt()));
  const TrajectoryRecord rec = evolve(u0, ec);

  {
    CsvWriter series(out.dir / "series.csv", series_header());
    std::size_t j = 0;
    for (std::size_t i = 0; i < rec.times.size(); ++i) {
      while (j + 1 < rec.step_times.size() && rec.step_times[j] < rec.times[i]) ++j;
      series.row(series_row(rec.times[i], rec.sup_norms[j], rec.energy_fractions[i]));
    }
  }
  {
    CsvWriter norms(out.dir / "norms.csv", {"t", "sup_norm"});
    const auto stride = static_cast<std::size_t>(b.norm_stride);
    for (std::size_t i = 0; i < rec.step_times.size(); ++i)
      if (i % stride == 0 || i + 1 == rec.step_times.size()) norms.row({rec.step_times[i], rec.sup_norms[i]});
  }
  fresh_dir(out.dir / "snapshots");
  std::vector<std::vector<double>> spacetime;
  if (b.snapshot_stride > 0) {
    const auto stride = static_cast<std::size_t>(b.snapshot_stride);
    for (std::size_t i = 0; i < rec.snapshots.size(); ++i)
      if (i % stride == 0 || i + 1 == rec.snapshots.size())
        write_field(out.dir / "snapshots" / snapshot_stem(i), rec.snapshots[i], rec.times[i]);
    const std::size_t grid = oversampled_size(b.n_modes);
    const std::size_t cols = std::min<std::size_t>(grid, 512);
    for (const auto i : thin(rec.snapshots.size(), 1000)) {
      if (!rec.snapshots[i].all_finite()) continue;
      const GridField g = to_grid(rec.snapshots[i], grid);
      std::vector<double> row;
      for (std::size_t c = 0; c < cols; ++c) row.push_back(std::log10(std::abs(g.values[c * grid / cols]) + 1e-300));
      spacetime.push_back(std::move(row));
    }
  }
  if (!spacetime.empty()) write_png_heatmap(out.dir / "spacetime.png", spacetime, Colormap::Sequential);

  LinePlot inv{"1/||u||_inf", "t", "1/||u||", {thinned_line("1/||u||", rec.step_times, inverse(rec.sup_norms))}, false,
               {}};
  if (const auto trap = trapping_entry_time(rec)) inv.x_marks.push_back(*trap);
  write_svg(out.dir / "inverse_norm.svg", inv);
  energy_plot(out.dir / "energy.svg", "energy proportions", rec.times, rec.energy_fractions, kSeriesEnergyModes);

  out.outcome = std::string(to_string(rec.outcome.kind));
  double peak = 0.0, peak_t = 0.0;
  for (std::size_t i = 0; i < rec.sup_norms.size(); ++i)
    if (std::isfinite(rec.sup_norms[i]) && rec.sup_norms[i] > peak) peak = rec.sup_norms[i], peak_t = rec.step_times[i];
  out.details = {{"outcome_time", rec.outcome.time},
                 {"steps", ec.n_steps()},
                 {"dt", ec.effective_dt()},
                 {"peak_norm", peak},
                 {"peak_time", peak_t},
                 {"snapshots", b.snapshot_stride > 0 ? rec.snapshots.size() : 0}};
  if (const auto trap = trapping_entry_time(rec)) out.details["trap_time"] = *trap;
}

// ---------------------------------------------------------------- sweep

void run_sweep(const SweepBlock& b, Artifacts& out) {
  FamilySpec fam{parse_initial(b.family, b.n_modes, 1.0), 0, 0, b.family};
  const std::vector<double> A = parse_grid(b.A);
  EvolveConfig ec;
  ec.theta = b.theta;
  ec.dt = b.dt;
  ec.t_end = b.t_end;
  ec.n_modes = b.n_modes;
  ec.record_stride = b.record_stride;
  out.say("sweep: " + std::to_string(A.size()) + " runs");
  const auto rows = sweep_nls(fam, A, ec, static_cast<unsigned>(b.threads));

  std::string csv = "A,outcome,trap_time,max_norm\n";
  std::vector<double> trapA, trapT;
  int trapped = 0, blowups = 0, failures = 0;
  for (const auto& r : rows) {
    csv += format_double(r.A) + "," + std::string(to_string(r.outcome)) + "," +
           (r.trap_time ? format_double(*r.trap_time) : "") + "," + format_double(r.max_norm) + "\n";
    if (r.trap_time) {
      trapA.push_back(r.A);
      trapT.push_back(*r.trap_time);
      ++trapped;
    }
    blowups += r.outcome == OutcomeKind::BlowupDetected;
    failures += r.outcome == OutcomeKind::NumericalFailure;
  }
  write_text(out.dir / "sweep.csv", csv);
  write_svg(out.dir / "trap_time.svg",
            LinePlot{"trapping entry time", "A", "t_trap", {Line{"t_trap", trapA, trapT}}, false, {}});

  // log10 of the sup norm on a common time grid, one row per A
  const std::size_t cols = 400;
  std::vector<std::vector<double>> heat;
  for (const auto& r : rows) {
    std::vector<double> row(cols, std::nan(""));
    std::size_t j = 0;
    for (std::size_t c = 0; c < cols; ++c) {
      const double t = b.t_end * static_cast<double>(c) / (cols - 1);
      while (j + 1 < r.times.size() && r.times[j + 1] <= t) ++j;
      if (j < r.times.size() && r.times[j] <= t + b.dt && std::isfinite(r.sup_norms[j]))
        row[c] = std::log10(r.sup_norms[j] + 1e-300);
    }
    heat.push_back(std::move(row));
  }
  if (!heat.empty()) write_png_heatmap(out.dir / "norms.png", heat, Colormap::Sequential);

  out.outcome = "completed";
  out.details = {{"runs", rows.size()}, {"trapped", trapped}, {"blowups", blowups}, {"failures", failures}};
}

// ---------------------------------------------------------------- bisect

json report_json(const FateReport& r) {
  return {{"fate", std::string(to_string(r.fate))},
          {"time", number(r.time)},
          {"certificate", r.certificate},
          {"final_norm", number(r.final_norm)},
          {"t_max_used", r.t_max_used}};
}

void run_bisect(const BisectBlock& b, Artifacts& out) {
  const auto [lo, hi] = parse_range(b.range);
  FamilySpec fam{parse_initial(b.family, b.n_modes, 1.0), lo, hi, b.family};
  HeatFateConfig hc;
  hc.dt = b.dt;
  hc.t_max = b.t_max;
  hc.decay_threshold = b.decay_threshold;
  out.say("bisect: " + b.family + " on [" + format_double(lo) + ", " + format_double(hi) + "]");
  json doc = {{"family", b.family}, {"n_modes", b.n_modes}, {"tol", b.tol}};
  try {
    const BisectionResult res = bisect_manifold(fam, b.tol, hc);
    json hist = json::array();
    for (const auto& s : res.history)
      hist.push_back({{"lo", s.lo}, {"hi", s.hi}, {"probe", s.probe}, {"report", report_json(s.report)}});
    doc["A_star"] = res.A_star;
    doc["bracket"] = {res.lo, res.hi};
    doc["lo_report"] = report_json(res.lo_report);
    doc["hi_report"] = report_json(res.hi_report);
    doc["history"] = hist;
    out.outcome = "converged";
    out.details = {{"A_star", res.A_star}, {"bracket", {res.lo, res.hi}}, {"probes", res.history.size()}};
  } catch (const BisectionError& e) {
    json reps = json::array();
    for (const auto& r : e.reports()) reps.push_back(report_json(r));
    doc["error"] = e.what();
    doc["reports"] = reps;
    write_text(out.dir / "bisect.json", doc.dump(2) + "\n");
    throw;
  }
  write_text(out.dir / "bisect.json", doc.dump(2) + "\n");
}

// ---------------------------------------------------------------- galerkin

std::vector<cplx> complexify(const std::vector<double>& v) { return {v.begin(), v.end()}; }

std::vector<cplx> manifold_point(int N, int order, const std::vector<double>& targets, json& info) {
  const TaylorModel model = solve_cohomological(GalerkinSystem::make(N, 0.0), order);
  std::vector<Constraint> cons;
  for (int n = 1; n <= N; ++n) cons.push_back({n, targets[static_cast<std::size_t>(n - 1)]});
  const auto sigma = solve_sigma_for_constraints(model, cons);
  json s = json::array();
  for (const auto& c : sigma) s.push_back({c.real(), c.imag()});
  info["sigma"] = s;
  return evaluate_W(model, sigma);
}

void run_galerkin(const GalerkinBlock& b, Artifacts& out) {
  const auto colon = b.init.find(':');
  const std::string head = b.init.substr(0, colon);
  const auto vals = parse_list(b.init.substr(colon + 1));
  std::vector<cplx> a0;
  json init = {{"spec", b.init}};
  if (head == "values") {
    a0 = complexify(vals);
  } else if (head == "sigma") {
    const TaylorModel model = solve_cohomological(GalerkinSystem::make(b.N, 0.0), b.order);
    a0 = evaluate_W(model, complexify(vals));
  } else {
    a0 = manifold_point(b.N, b.order, vals, init);
  }
  json a = json::array();
  for (const auto& c : a0) a.push_back({c.real(), c.imag()});
  init["a"] = a;

  const GalerkinSystem sys = GalerkinSystem::make(b.N, b.theta);
  GalerkinOptions opt;
  opt.record_stride = b.record_stride;
  opt.energy_modes = b.N;
  out.say("galerkin: N = " + std::to_string(b.N) + ", t_end = " + format_double(b.t_end));
  const GalerkinTrajectory tr = integrate_galerkin(a0, sys, b.dt, b.t_end, opt);

  {
    CsvWriter series(out.dir / "series.csv", series_header());
    for (std::size_t i = 0; i < tr.times.size(); ++i)
      series.row(series_row(tr.times[i], tr.sup_norms[i], tr.energy_fractions[i]));
  }
  {
    std::vector<std::string> h{"t"};
    for (int n = 0; n <= b.N; ++n) {
      h.push_back("re_a" + std::to_string(n));
      h.push_back("im_a" + std::to_string(n));
    }
    CsvWriter states(out.dir / "states.csv", h);
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      std::vector<double> r{tr.times[i]};
      for (const auto& c : tr.states[i]) {
        r.push_back(c.real());
        r.push_back(c.imag());
      }
      states.row(r);
    }
  }
  write_svg(out.dir / "inverse_norm.svg",
            LinePlot{"1/||u||_inf", "t", "1/||u||", {thinned_line("1/||u||", tr.times, inverse(tr.sup_norms))}, false,
                     {tr.peak_time}});
  energy_plot(out.dir / "energy.svg", "energy proportions", tr.times, tr.energy_fractions, b.N);

  out.outcome = std::string(to_string(tr.outcome));
  out.details = {{"end_time", tr.end_time}, {"peak_norm", tr.peak_norm}, {"peak_time", tr.peak_time}, {"init", init}};
}

// ---------------------------------------------------------------- manifold

void run_manifold(const ManifoldBlock& b, Artifacts& out) {
  out.say("manifold: N = " + std::to_string(b.N) + ", order " + std::to_string(b.order));
  const TaylorModel model = solve_cohomological(GalerkinSystem::make(b.N, 0.0), b.order);
  save_model(out.dir / "model.json", model);
  write_text(out.dir / "resonances.json", resonances_to_json(detect_resonances(b.N, b.order)) + "\n");
  write_text(out.dir / "f_support.json", resonances_to_json(model.f_support()) + "\n");

  json rad;
  try {
    const RadiusEstimate r = estimate_radius(model);
    rad = {{"radius", number(r.radius)},
           {"infinite", r.infinite},
           {"degenerate", r.degenerate},
           {"per_order", r.per_order}};
    json axes = json::array();
    for (const double v : r.axis_radius) axes.push_back(number(v));
    rad["axis_radius"] = axes;
  } catch (const std::exception& e) {
    rad = {{"error", e.what()}};
  }
  write_text(out.dir / "radius.json", rad.dump(2) + "\n");

  json eval = json::object();
  auto pack = [](const std::vector<cplx>& v) {
    json j = json::array();
    for (const auto& c : v) j.push_back({c.real(), c.imag()});
    return j;
  };
  std::vector<cplx> sigma;
  if (!b.targets.empty()) {
    const auto t = parse_list(b.targets);
    std::vector<Constraint> cons;
    for (int n = 1; n <= b.N; ++n) cons.push_back({n, t[static_cast<std::size_t>(n - 1)]});
    sigma = solve_sigma_for_constraints(model, cons);
    eval["targets"] = t;
  } else if (!b.sigma.empty()) {
    sigma = complexify(parse_list(b.sigma));
  }
  if (!sigma.empty()) {
    eval["sigma"] = pack(sigma);
    eval["W"] = pack(evaluate_W(model, sigma));
    eval["f"] = pack(evaluate_f(model, sigma));
    write_text(out.dir / "eval.json", eval.dump(2) + "\n");
  }
  out.outcome = "built";
  out.details = {{"W_terms", model.W.size()}, {"f_terms", model.f.size()}, {"radius", rad}};
  if (!sigma.empty()) out.details["eval"] = eval;
}

// ---------------------------------------------------------------- selfsim

json fit_json(const BlowupFit& f) {
  return {{"T", f.T},        {"alpha", f.alpha},         {"C0", f.C0},
          {"r_squared", f.r_squared}, {"window", {f.t0, f.t1}}, {"points", f.points},
          {"jarque_bera", f.jarque_bera}, {"residuals_normal", f.residual_normality_flag}};
}

std::vector<StampedField> load_snapshots(const fs::path& dir, double t0, double t1) {
  std::vector<fs::path> stems;
  if (fs::exists(dir))
    for (const auto& e : fs::directory_iterator(dir))
      if (e.path().extension() == ".json") stems.push_back(e.path().parent_path() / e.path().stem());
  std::sort(stems.begin(), stems.end());
  std::vector<StampedField> out;
  for (const auto& s : stems) {
    const json meta = json::parse(read_text(fs::path(s).concat(".json")));
    const double t = meta.at("time").get<double>();
    if (t >= t0 && t <= t1) out.push_back(read_field(s));
  }
  return out;
}

void run_selfsim(const SelfsimBlock& b, Artifacts& out) {
  const fs::path run = locate_run(b.run);
  const fs::path series = fs::exists(run / "norms.csv") ? run / "norms.csv" : run / "series.csv";
  const Columns cols = read_columns(series);
  const auto [t0, t1] = parse_range(b.window);
  out.say("selfsim: fitting " + series.string() + " over [" + format_double(t0) + ", " + format_double(t1) + "]");
  const FitReport rep = fit_blowup_rate_with_halves(cols["t"], cols["sup_norm"], t0, t1);
  json fit = {{"series", series.string()}, {"full", fit_json(rep.full)}};
  if (rep.first_half) fit["first_half"] = fit_json(*rep.first_half);
  if (rep.second_half) fit["second_half"] = fit_json(*rep.second_half);

  {
    Line data{"data", {}, {}}, model{"fit", {}, {}};
    for (std::size_t i = 0; i < cols["t"].size(); ++i) {
      const double t = cols["t"][i];
      if (t < t0 || t > t1 || t >= rep.full.T) continue;
      const double x = std::log(rep.full.T - t);
      data.x.push_back(x);
      data.y.push_back(std::log(1.0 / cols["sup_norm"][i]));
      model.x.push_back(x);
      model.y.push_back(std::log(rep.full.C0) + rep.full.alpha * x);
    }
    write_svg(out.dir / "fit.svg", LinePlot{"log(1/||u||) against log(T - t)", "log(T - t)", "log(1/||u||)",
                                            {data, model}, false, {}});
  }

  double f0 = t0, f1 = t1;
  if (!b.frame_window.empty()) std::tie(f0, f1) = parse_range(b.frame_window);
  std::vector<StampedField> snaps = load_snapshots(run / "snapshots", std::min(f0, t0), std::max(f1, t1));
  std::erase_if(snaps, [&](const StampedField& s) { return !(s.time < rep.full.T) || !s.field.all_finite(); });
  fresh_dir(out.dir / "frames");

  if (!snaps.empty()) {
    std::vector<FourierField> fields;
    std::vector<double> times;
    for (const auto& s : snaps) {
      fields.push_back(s.field);
      times.push_back(s.time);
    }
    const TrackResult track = track_blowup_points(fields, times);
    json paths = json::array();
    for (const auto& p : track.paths) paths.push_back({{"t", p.t}, {"xi", p.xi}, {"amplitude", p.amplitude}});
    json events = json::array();
    for (const auto& e : track.events) events.push_back({{"t", e.t}, {"before", e.count_before}, {"after", e.count_after}});
    write_text(out.dir / "track.json",
               json{{"times", times}, {"counts", track.counts}, {"paths", paths}, {"events", events}}.dump(2) + "\n");
    fit["track"] = {{"max_count", *std::max_element(track.counts.begin(), track.counts.end())},
                    {"events", track.events.size()}};

    // frames: the largest peak of each snapshot, unwrapped then median filtered
    std::vector<std::size_t> frame_idx;
    for (std::size_t i = 0; i < times.size(); ++i)
      if (times[i] >= f0 && times[i] <= f1) frame_idx.push_back(i);
    std::vector<std::size_t> chosen;
    for (const auto k : thin(frame_idx.size(), static_cast<std::size_t>(b.max_frames))) chosen.push_back(frame_idx[k]);
    const double period = fields.front().period();
    std::vector<double> xi;
    for (const auto i : chosen) {
      const auto peaks = peak_positions(fields[i]);
      double best = 0.0, amp = -1.0;
      for (const auto& [x, a] : peaks)
        if (a > amp + 1e-12 * std::abs(a)) best = x, amp = a;
      if (!xi.empty()) best += period * std::round((xi.back() - best) / period);
      xi.push_back(best);
    }
    xi = median_filter5(xi);

    Scaling sc = default_scaling(fields.front());
    if (b.alpha > 0) sc.alpha = b.alpha;
    if (b.beta > 0) sc.beta = b.beta;
    const FrameGrid grid{b.y_min, b.y_max, b.y_points};
    const bool typeI = std::abs(sc.alpha - 1.0) < 1e-12 && std::abs(sc.beta - 0.5) < 1e-12;
    std::vector<std::vector<double>> re(static_cast<std::size_t>(b.y_points)), im(static_cast<std::size_t>(b.y_points));
    std::unique_ptr<CsvWriter> resid;
    if (typeI) resid = std::make_unique<CsvWriter>(out.dir / "residuals.csv", std::vector<std::string>{"t", "s", "residual"});
    CsvWriter index(out.dir / "frames" / "index.csv", {"frame", "t", "s", "xi", "wrapped"});
    for (std::size_t j = 0; j < chosen.size(); ++j) {
      const SelfSimilarFrame fr = rescale_frame(fields[chosen[j]], times[chosen[j]], rep.full, sc, xi[j], grid);
      char name[32];
      std::snprintf(name, sizeof name, "frame_%04zu.csv", j);
      CsvWriter w(out.dir / "frames" / name, {"y", "re_U", "im_U"});
      for (std::size_t k = 0; k < fr.y_grid.size(); ++k) {
        w.row({fr.y_grid[k], fr.U_values[k].real(), fr.U_values[k].imag()});
        // image rows run from y_max (top) down to y_min
        const std::size_t r = fr.y_grid.size() - 1 - k;
        re[r].push_back(fr.U_values[k].real());
        im[r].push_back(fr.U_values[k].imag());
      }
      index.row({static_cast<double>(j), fr.t, fr.s, fr.xi, fr.wrapped ? 1.0 : 0.0});
      if (resid) resid->row({fr.t, fr.s, typeI_residual(fr)});
    }
    if (!chosen.empty()) {
      write_png_heatmap(out.dir / "re_U.png", re, Colormap::Diverging);
      write_png_heatmap(out.dir / "im_U.png", im, Colormap::Diverging);
    }
    fit["frames"] = {{"count", chosen.size()}, {"alpha", sc.alpha}, {"beta", sc.beta}};
  }
  write_text(out.dir / "fit.json", fit.dump(2) + "\n");
  out.outcome = rep.full.r_squared >= 0.999 ? "fit" : "fit (R^2 below 0.999)";
  out.details = fit;
}

}  // namespace

fs::path locate_run(const std::string& run) {
  const fs::path p(run);
  if (fs::exists(p) || p.is_absolute()) return p;
  ExperimentConfig probe;
  probe.output_dir = run;
  return resolve_output(probe);
}

RunSummary run_experiment(const ExperimentConfig& cfg, std::ostream* log) {
  validate(cfg);
  Artifacts out{resolve_output(cfg), log, {}, json::object()};
  fs::create_directories(out.dir);
  const auto start = std::chrono::steady_clock::now();
  json meta = {{"config", json::parse(config_to_json(cfg))}, {"version", NLSLAB_VERSION}};
  auto finish = [&](const std::string& status) {
    meta["status"] = status;
    meta["outcome"] = out.outcome;
    meta["summary"] = out.details;
    meta["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_text(out.dir / "meta.json", meta.dump(2) + "\n");
  };
  try {
    switch (cfg.kind) {
      case Kind::Simulate: run_simulate(cfg.simulate, out); break;
      case Kind::Sweep: run_sweep(cfg.sweep, out); break;
      case Kind::Bisect: run_bisect(cfg.bisect, out); break;
      case Kind::Galerkin: run_galerkin(cfg.galerkin, out); break;
      case Kind::Manifold: run_manifold(cfg.manifold, out); break;
      case Kind::Selfsim: run_selfsim(cfg.selfsim, out); break;
    }
  } catch (const std::exception& e) {
    out.outcome = "error";
    out.details["error"] = std::string(to_string(cfg.kind)) + ": " + e.what();
    finish("failed");
    throw std::runtime_error(std::string(to_string(cfg.kind)) + ": " + e.what());
  }
  finish("ok");
  return {out.dir, out.outcome, out.details.dump()};
}

}  // namespace nlslab::lab
