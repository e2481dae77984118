#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nlslab/field_io.hpp"
#include "nlslab/galerkin.hpp"
#include "nlslab/lab/config.hpp"
#include "nlslab/lab/recipes.hpp"
#include "nlslab/lab/runner.hpp"
#include "nlslab/lab/series_io.hpp"
#include "nlslab/manifold.hpp"
#include "nlslab/manifold_io.hpp"
#include "nlslab/selfsim.hpp"

namespace fs = std::filesystem;
using namespace nlslab;
using namespace nlslab::lab;

namespace {

std::string literal_dir(const std::string& out) { return out.empty() ? out : fs::absolute(out).string(); }

int launch(ExperimentConfig cfg, const std::string& out) {
  if (!out.empty()) cfg.output_dir = literal_dir(out);
  const RunSummary s = run_experiment(cfg, &std::cerr);
  std::cout << s.dir.string() << ": " << s.outcome << '\n' << s.details_json << '\n';
  return 0;
}

std::string monomial(const MultiIndex& k) {
  std::string s;
  for (std::size_t j = 0; j < k.size(); ++j) {
    if (k[j] == 0) continue;
    if (!s.empty()) s += " ";
    s += "s" + std::to_string(j + 1);
    if (k[j] > 1) s += "^" + std::to_string(k[j]);
  }
  return s;
}

std::string rational(const RationalComplex& c) {
  if (c.is_real()) return RationalComplex::to_string(c.re());
  return "(" + RationalComplex::to_string(c.re()) + " + " + RationalComplex::to_string(c.im()) + " i)";
}

void print_vector(const char* name, const std::vector<cplx>& v) {
  std::cout << name << " =";
  for (const auto& c : v) {
    std::cout << ' ' << format_double(c.real());
    if (c.imag() != 0.0) std::cout << (c.imag() < 0 ? "" : "+") << format_double(c.imag()) << 'i';
  }
  std::cout << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quadratic NLS blowup and invariant manifold laboratory", "nlslab"};
  app.require_subcommand(1);

  ExperimentConfig sim;
  sim.kind = Kind::Simulate;
  sim.name = "simulate";
  std::string sim_theta = "pi/2", sim_out;
  auto* simulate = app.add_subcommand("simulate", "integrate u_t = e^{i theta}(u_xx + u^2) with ETDRK4");
  simulate->add_option("--theta", sim_theta, "rotation angle (pi/2, -pi/4, 0.3, ...)")->capture_default_str();
  simulate->add_option("--modes", sim.simulate.n_modes, "Fourier modes N (|n| <= N)")->capture_default_str();
  simulate->add_option("--dt", sim.simulate.dt, "time step")->capture_default_str();
  simulate->add_option("--tend", sim.simulate.t_end, "final time")->capture_default_str();
  simulate->add_option("--initial", sim.simulate.initial, "initial data, e.g. cos:30+const:-5.3")->capture_default_str();
  simulate->add_option("--record-stride", sim.simulate.record_stride, "steps per series row")->capture_default_str();
  simulate->add_option("--snapshot-stride", sim.simulate.snapshot_stride, "series rows per snapshot (0: none)")
      ->capture_default_str();
  simulate->add_option("--norm-stride", sim.simulate.norm_stride, "steps per norms.csv row")->capture_default_str();
  simulate->add_flag("--trapping", sim.simulate.trapping_check, "check the trapping cone at every record");
  simulate->add_option("--out", sim_out, "output directory");

  ExperimentConfig gal;
  gal.kind = Kind::Galerkin;
  gal.name = "galerkin";
  std::string gal_theta = "pi/2", gal_out;
  auto* galerkin = app.add_subcommand("galerkin", "integrate the cosine Galerkin truncation on modes 0..N");
  galerkin->add_option("--N", gal.galerkin.N, "highest mode")->capture_default_str();
  galerkin->add_option("--theta", gal_theta, "rotation angle")->capture_default_str();
  galerkin->add_option("--init", gal.galerkin.init, "values:a0,..,aN | sigma:s1,..,sN | targets:a1,..,aN")
      ->capture_default_str();
  galerkin->add_option("--order", gal.galerkin.order, "manifold order for sigma/targets")->capture_default_str();
  galerkin->add_option("--dt", gal.galerkin.dt, "RK4 step")->capture_default_str();
  galerkin->add_option("--tend", gal.galerkin.t_end, "final time")->capture_default_str();
  galerkin->add_option("--out", gal_out, "output directory");

  auto* manifold = app.add_subcommand("manifold", "stable manifold charts of the heat Galerkin system");
  manifold->require_subcommand(1);
  int mb_N = 3, mb_order = 20;
  std::string mb_out = "model.json";
  auto* mbuild = manifold->add_subcommand("build", "solve the cohomological equations in exact arithmetic");
  mbuild->add_option("--N", mb_N, "highest mode")->capture_default_str();
  mbuild->add_option("--order", mb_order, "Taylor order")->capture_default_str();
  mbuild->add_option("--out", mb_out, "model file")->capture_default_str();
  std::string me_model, me_sigma, me_targets;
  auto* meval = manifold->add_subcommand("eval", "evaluate W and f, or solve for sigma from target values");
  meval->add_option("--model", me_model, "model file")->required();
  auto* sig_opt = meval->add_option("--sigma", me_sigma, "s1,s2,... (real)");
  meval->add_option("--targets", me_targets, "a1,...,aN to hit with W(sigma)")->excludes(sig_opt);
  int mr_N = 3, mr_order = 20;
  auto* mres = manifold->add_subcommand("resonances", "list resonant monomials");
  mres->add_option("--N", mr_N, "highest mode")->capture_default_str();
  mres->add_option("--order", mr_order, "maximal total order")->capture_default_str();

  auto* hunt = app.add_subcommand("hunt", "threshold searches in families g + A");
  hunt->require_subcommand(1);
  ExperimentConfig bis;
  bis.kind = Kind::Bisect;
  bis.name = "bisect";
  std::string bis_out;
  auto* hbisect = hunt->add_subcommand("bisect", "bisect the heat-flow fate in A");
  hbisect->add_option("--family", bis.bisect.family, "g, same grammar as --initial")->capture_default_str();
  hbisect->add_option("--range", bis.bisect.range, "lo:hi")->capture_default_str();
  hbisect->add_option("--tol", bis.bisect.tol, "bracket width")->capture_default_str();
  hbisect->add_option("--modes", bis.bisect.n_modes, "Fourier modes")->capture_default_str();
  hbisect->add_option("--dt", bis.bisect.dt, "time step")->capture_default_str();
  hbisect->add_option("--tmax", bis.bisect.t_max, "initial horizon")->capture_default_str();
  hbisect->add_option("--out", bis_out, "output directory");
  ExperimentConfig swp;
  swp.kind = Kind::Sweep;
  swp.name = "sweep";
  std::string swp_theta = "pi/2", swp_out;
  auto* hsweep = hunt->add_subcommand("sweep", "NLS runs over a grid of A");
  hsweep->add_option("--family", swp.sweep.family, "g")->capture_default_str();
  hsweep->add_option("--A", swp.sweep.A, "lo:hi:step")->capture_default_str();
  hsweep->add_option("--theta", swp_theta, "rotation angle")->capture_default_str();
  hsweep->add_option("--modes", swp.sweep.n_modes, "Fourier modes")->capture_default_str();
  hsweep->add_option("--dt", swp.sweep.dt, "time step")->capture_default_str();
  hsweep->add_option("--tend", swp.sweep.t_end, "final time")->capture_default_str();
  hsweep->add_option("--threads", swp.sweep.threads, "workers (0: hardware)")->capture_default_str();
  hsweep->add_option("--out", swp_out, "output directory");

  auto* selfsim = app.add_subcommand("selfsim", "blowup rate fits and self-similar frames");
  selfsim->require_subcommand(1);
  std::string sf_series, sf_window = "0.070:0.074", sf_out;
  auto* sfit = selfsim->add_subcommand("fit", "fit 1/||u|| = C0 (T - t)^alpha");
  sfit->add_option("--series", sf_series, "CSV with t and sup_norm columns")->required();
  sfit->add_option("--window", sf_window, "t0:t1")->capture_default_str();
  sfit->add_option("--out", sf_out, "write the fit as JSON here");
  ExperimentConfig frm;
  frm.kind = Kind::Selfsim;
  frm.name = "frames";
  std::string frm_out;
  auto* sframes = selfsim->add_subcommand("frames", "fit, track and rescale a simulate run");
  sframes->add_option("--run", frm.selfsim.run, "simulate run directory")->required();
  sframes->add_option("--window", frm.selfsim.window, "fit window t0:t1")->capture_default_str();
  sframes->add_option("--alpha", frm.selfsim.alpha, "amplitude exponent (0: default)");
  sframes->add_option("--beta", frm.selfsim.beta, "length exponent (0: default)");
  sframes->add_option("--max-frames", frm.selfsim.max_frames, "frames kept")->capture_default_str();
  sframes->add_option("--out", frm_out, "output directory");

  std::string run_config, run_recipe, run_out;
  std::vector<std::string> run_sets;
  double run_scale = 1.0;
  auto* run = app.add_subcommand("run", "run a config file or a named recipe");
  auto* cfg_opt = run->add_option("--config", run_config, "YAML config, or meta.json of an earlier run");
  run->add_option("--recipe", run_recipe, "named preset (see 'recipes')")->excludes(cfg_opt);
  run->add_option("--set", run_sets, "override block.key=value (repeatable)");
  run->add_option("--scale", run_scale, "multiply modes and divide dt by this factor")->capture_default_str();
  run->add_option("--out", run_out, "output directory");
  bool print_yaml = false;
  run->add_flag("--print", print_yaml, "print the resolved config and exit");

  auto* recipes = app.add_subcommand("recipes", "list the named presets");

  if (argc < 2) {
    std::cerr << app.help();
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (simulate->parsed()) {
      sim.simulate.theta = parse_angle(sim_theta);
      return launch(sim, sim_out);
    }
    if (galerkin->parsed()) {
      gal.galerkin.theta = parse_angle(gal_theta);
      return launch(gal, gal_out);
    }
    if (mbuild->parsed()) {
      const TaylorModel model = solve_cohomological(GalerkinSystem::make(mb_N, 0.0), mb_order);
      save_model(mb_out, model);
      std::cout << "wrote " << mb_out << " (" << model.W.size() << " W coefficients)\n";
      for (const auto& [k, v] : model.f) {
        if (total_order(k) < 2) continue;
        for (std::size_t i = 0; i < v.size(); ++i)
          if (!v[i].is_zero()) std::cout << "f_" << i + 1 << " += " << rational(v[i]) << " " << monomial(k) << '\n';
      }
      return 0;
    }
    if (meval->parsed()) {
      const TaylorModel model = load_model(me_model);
      std::vector<cplx> sigma;
      if (!me_targets.empty()) {
        const auto t = parse_list(me_targets);
        if (static_cast<int>(t.size()) != model.dim_domain)
          throw std::invalid_argument("--targets needs " + std::to_string(model.dim_domain) + " values");
        std::vector<Constraint> cons;
        for (int j = 0; j < model.dim_domain; ++j) cons.push_back({model.tangent_component[static_cast<std::size_t>(j)], t[static_cast<std::size_t>(j)]});
        sigma = solve_sigma_for_constraints(model, cons);
      } else {
        for (const double s : parse_list(me_sigma)) sigma.emplace_back(s);
      }
      if (static_cast<int>(sigma.size()) != model.dim_domain)
        throw std::invalid_argument("sigma needs " + std::to_string(model.dim_domain) + " values");
      print_vector("sigma", sigma);
      print_vector("W", evaluate_W(model, sigma));
      print_vector("f", evaluate_f(model, sigma));
      return 0;
    }
    if (mres->parsed()) {
      std::cout << resonances_to_json(detect_resonances(mr_N, mr_order)) << '\n';
      return 0;
    }
    if (hbisect->parsed()) return launch(bis, bis_out);
    if (hsweep->parsed()) {
      swp.sweep.theta = parse_angle(swp_theta);
      return launch(swp, swp_out);
    }
    if (sfit->parsed()) {
      const Columns c = read_columns(sf_series);
      const auto [t0, t1] = parse_range(sf_window);
      const FitReport r = fit_blowup_rate_with_halves(c["t"], c["sup_norm"], t0, t1);
      auto pack = [](const BlowupFit& f) {
        return nlohmann::json{{"T", f.T},           {"alpha", f.alpha},     {"C0", f.C0},
                              {"r_squared", f.r_squared}, {"window", {f.t0, f.t1}}, {"points", f.points},
                              {"jarque_bera", f.jarque_bera}, {"residuals_normal", f.residual_normality_flag}};
      };
      nlohmann::json j = {{"series", sf_series}, {"full", pack(r.full)}};
      if (r.first_half) j["first_half"] = pack(*r.first_half);
      if (r.second_half) j["second_half"] = pack(*r.second_half);
      if (!sf_out.empty()) write_text(sf_out, j.dump(2) + "\n");
      std::cout << j.dump(2) << '\n';
      return 0;
    }
    if (sframes->parsed()) return launch(frm, frm_out);
    if (run->parsed()) {
      ExperimentConfig cfg;
      if (!run_recipe.empty())
        cfg = recipe(run_recipe);
      else if (!run_config.empty())
        cfg = load_config(run_config);
      else
        throw std::invalid_argument("run needs --config or --recipe");
      cfg = scaled(apply_overrides(cfg, run_sets), run_scale);
      if (print_yaml) {
        std::cout << config_to_yaml(cfg);
        return 0;
      }
      return launch(cfg, run_out);
    }
    if (recipes->parsed()) {
      for (const auto& r : list_recipes())
        std::cout << r.name << (r.slow ? "  [slow]" : "") << "\n    " << r.summary << '\n';
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "invalid configuration:\n";
    for (const auto& issue : e.issues()) std::cerr << "  " << issue << '\n';
    return 2;
  } catch (const UnknownRecipe& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
