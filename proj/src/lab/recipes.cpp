#include "nlslab/lab/recipes.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace nlslab::lab {

namespace {

struct Entry {
  RecipeInfo info;
  std::function<ExperimentConfig()> make;
};

ExperimentConfig base(Kind kind, const std::string& name) {
  ExperimentConfig c;
  c.kind = kind;
  c.name = name;
  c.output_dir = name;
  return c;
}

ExperimentConfig blowup_run(const std::string& name, const std::string& initial, double t_end) {
  ExperimentConfig c = base(Kind::Simulate, name);
  c.simulate.theta = std::numbers::pi / 2;
  c.simulate.n_modes = 4096;
  c.simulate.dt = 1e-7;
  c.simulate.t_end = t_end;
  c.simulate.initial = initial;
  c.simulate.record_stride = 1000;
  c.simulate.snapshot_stride = 1;
  c.simulate.norm_stride = 100;
  return c;
}

ExperimentConfig selfsim_run(const std::string& name, const std::string& run, const std::string& window, double alpha,
                             double beta) {
  ExperimentConfig c = base(Kind::Selfsim, name);
  c.selfsim.run = run;
  c.selfsim.window = window;
  c.selfsim.alpha = alpha;
  c.selfsim.beta = beta;
  return c;
}

const std::vector<Entry>& table() {
  static const std::vector<Entry> entries = {
      {{"fig2-sweep", "NLS sweep of 30cos(2 pi x) + A over A in [-150, 150]: trapping times and norms", false},
       [] {
         ExperimentConfig c = base(Kind::Sweep, "fig2-sweep");
         c.sweep.family = "cos:30";
         c.sweep.A = "-150:150:1";
         c.sweep.n_modes = 256;
         c.sweep.dt = 1e-4;
         c.sweep.t_end = 1.0;
         return c;
       }},
      {{"fig3-blowup", "NLS run from 30cos(2 pi x) - 5.3070235 at 4096 modes, dt 1e-7", true},
       [] { return blowup_run("fig3-blowup", "cos:30+const:-5.3070235", 2.0); }},
      {{"fig5-galerkin", "three-mode Galerkin NLS run from the manifold point with a1 = 0.5, a2 = a3 = 0", false},
       [] {
         ExperimentConfig c = base(Kind::Galerkin, "fig5-galerkin");
         c.galerkin.N = 3;
         c.galerkin.init = "targets:0.5,0,0";
         c.galerkin.order = 20;
         c.galerkin.dt = 1e-3;
         c.galerkin.t_end = 200.0;
         return c;
       }},
      {{"fig6-real", "NLS blowup from 300cos(2 pi x) - 189.286840601635 at 4096 modes, dt 1e-7", true},
       [] { return blowup_run("fig6-real", "cos:300+const:-189.286840601635", 0.08); }},
      {{"fig6-selfsim", "rate fit and self-similar frames for fig6-real over [0.070, 0.074]", true},
       [] { return selfsim_run("fig6-selfsim", "fig6-real", "0.070:0.074", 1.0, 0.5); }},
      {{"fig7-monochromatic", "NLS blowup from 300 exp(2 pi i x) at 4096 modes, dt 1e-7", true},
       [] { return blowup_run("fig7-monochromatic", "exp:300", 0.05); }},
      {{"fig7-selfsim", "rate fit and self-similar frames for fig7-monochromatic over [0.038, 0.045]", true},
       [] { return selfsim_run("fig7-selfsim", "fig7-monochromatic", "0.038:0.045", 2.0, 1.0); }},
      {{"bisect-a30", "heat-flow bisection for the threshold constant of 30cos(2 pi x) at 256 modes", false},
       [] {
         ExperimentConfig c = base(Kind::Bisect, "bisect-a30");
         c.bisect.family = "cos:30";
         c.bisect.range = "-10:0";
         c.bisect.n_modes = 256;
         return c;
       }},
      {{"bisect-a300", "heat-flow bisection for the threshold constant of 300cos(2 pi x) at 1024 modes", true},
       [] {
         ExperimentConfig c = base(Kind::Bisect, "bisect-a300");
         c.bisect.family = "cos:300";
         c.bisect.range = "-250:-100";
         c.bisect.n_modes = 1024;
         return c;
       }},
      {{"manifold-n3", "order-20 stable manifold chart of the three-mode heat system", false},
       [] {
         ExperimentConfig c = base(Kind::Manifold, "manifold-n3");
         c.manifold.N = 3;
         c.manifold.order = 20;
         c.manifold.targets = "0.5,0,0";
         return c;
       }},
  };
  return entries;
}

}  // namespace

std::vector<RecipeInfo> list_recipes() {
  std::vector<RecipeInfo> out;
  for (const auto& e : table()) out.push_back(e.info);
  return out;
}

namespace {

std::string unknown_message(const std::string& name) {
  std::string msg = "unknown recipe '" + name + "'; available:";
  for (const auto& e : table()) msg += " " + e.info.name;
  return msg;
}

int scale_modes(int n, double f) { return std::max(16, static_cast<int>(std::lround(n * f))); }

}  // namespace

UnknownRecipe::UnknownRecipe(const std::string& name) : std::invalid_argument(unknown_message(name)) {}

ExperimentConfig recipe(const std::string& name) {
  for (const auto& e : table())
    if (e.info.name == name) return e.make();
  throw UnknownRecipe(name);
}

ExperimentConfig scaled(ExperimentConfig cfg, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw std::invalid_argument("scale factor must be positive");
  if (factor == 1.0) return cfg;
  cfg.simulate.n_modes = scale_modes(cfg.simulate.n_modes, factor);
  cfg.simulate.dt /= factor;
  cfg.sweep.n_modes = scale_modes(cfg.sweep.n_modes, factor);
  cfg.sweep.dt /= factor;
  cfg.bisect.n_modes = scale_modes(cfg.bisect.n_modes, factor);
  cfg.bisect.dt /= factor;
  cfg.galerkin.dt /= factor;
  return cfg;
}

}  // namespace nlslab::lab
