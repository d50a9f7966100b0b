#pragma once

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plasmaflow/analytic.hpp"
#include "plasmaflow/experiments.hpp"
#include "plasmaflow/io.hpp"

namespace plasmaflow {

namespace detail {

/// foo.csv + "_ade" -> foo_ade.csv; no extension appends the suffix.
inline std::string sibling_path(const std::string& path, const std::string& suffix) {
  const auto slash = path.find_last_of("/\\");
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + suffix;
  return path.substr(0, dot) + suffix + path.substr(dot);
}

inline void warn_if_snapped(const DerivedQuantities& q) {
  if (q.s1_snapped || q.s2_snapped)
    std::cerr << "warning: transit times s1/s2 snapped to the " << format_number(q.dt)
              << " s grid (s1 = " << format_number(q.s1) << " s, s2 = " << format_number(q.s2)
              << " s)\n";
}

}  // namespace detail

inline int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Simulation of new-plasma fraction during therapeutic plasma exchange "
               "performed on a VA or VV ECMO circuit"};
  app.require_subcommand(1);

  const std::map<std::string, EcmoMode> ecmo_names{{"va", EcmoMode::VA}, {"vv", EcmoMode::VV}};
  const std::map<std::string, PortMode> port_names{{"typical", PortMode::Typical},
                                                   {"switched", PortMode::Switched}};
  const std::map<std::string, ModelKind> model_names{{"ade", ModelKind::ADE},
                                                     {"dde", ModelKind::DDE}};

  std::string config_path, out_path;
  EcmoMode ecmo = EcmoMode::VA;
  PortMode ports = PortMode::Typical;
  ModelKind model = ModelKind::DDE;
  double duration_hours = 0.0, dt = 0.0, pvp = 0.0, t_hours = 0.0;
  std::int64_t stride = 0;
  std::vector<double> alphas;

  auto add_common = [&](CLI::App* cmd, bool with_ports) {
    cmd->add_option("--config", config_path, "parameter file (JSON)")->required();
    cmd->add_option("--ecmo", ecmo, "ECMO cannulation")
        ->transform(CLI::CheckedTransformer(ecmo_names, CLI::ignore_case))
        ->required();
    if (with_ports)
      cmd->add_option("--ports", ports, "TPE port orientation")
          ->transform(CLI::CheckedTransformer(port_names, CLI::ignore_case))
          ->required();
    cmd->add_option("--duration-hours", duration_hours, "simulated time, hours");
    cmd->add_option("--dt", dt, "timestep, seconds");
    cmd->add_option("--stride", stride, "output every Nth sample");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "run one model and write the trajectory");
  add_common(simulate, true);
  simulate->add_option("--model", model, "model family")
      ->transform(CLI::CheckedTransformer(model_names, CLI::ignore_case))
      ->required();
  simulate->add_option("--out", out_path, "output CSV")->required();

  CLI::App* compare = app.add_subcommand("compare", "run both models and report their gap");
  add_common(compare, true);
  compare->add_option("--out", out_path, "output CSV stem (writes <stem>_ade/_dde)")->required();

  CLI::App* sweep = app.add_subcommand("sweep-alpha",
                                       "typical-vs-switched percent difference across alphas");
  add_common(sweep, false);
  sweep->add_option("--alphas", alphas, "comma-separated ECMO flow fractions")->delimiter(',');
  sweep->add_option("--out", out_path, "summary CSV (per-alpha series written alongside)")
      ->required();

  CLI::App* sensitivity = app.add_subcommand("sensitivity",
                                             "forward-difference sensitivity of gamma1");
  add_common(sensitivity, true);
  sensitivity->add_option("--out", out_path, "output CSV")->required();

  CLI::App* analytic = app.add_subcommand("analytic", "closed-form lumped-model values");
  analytic->add_option("--config", config_path, "parameter file (JSON)")->required();
  analytic->add_option("--ecmo", ecmo, "ECMO cannulation (volume relations)")
      ->transform(CLI::CheckedTransformer(ecmo_names, CLI::ignore_case));
  CLI::Option* pvp_opt = analytic->add_option("--pvp", pvp, "plasma volumes processed");
  CLI::Option* t_opt = analytic->add_option("--t-hours", t_hours, "evaluation time, hours");
  pvp_opt->excludes(t_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return 2;
  }

  try {
    RunConfig rc = parse_config(config_path);
    if (duration_hours > 0.0) rc.duration_h = duration_hours;
    if (dt > 0.0) rc.dt = dt;
    if (stride > 0) rc.stride = stride;
    rc.configuration = ModelConfiguration{ecmo, ports, model};
    rc.output_path = out_path;
    const ModelParameters& p = rc.parameters;

    if (*analytic) {
      if (pvp_opt->count() == 0 && t_opt->count() == 0) {
        std::cerr << "analytic: one of --pvp or --t-hours is required\n";
        return 2;
      }
      if (pvp_opt->count() > 0) {
        std::cout << "pvp=" << format_number(pvp) << "\n"
                  << "fraction_old_remaining_typical="
                  << format_number(fraction_old_remaining(pvp, p, PortMode::Typical)) << "\n"
                  << "fraction_old_remaining_switched="
                  << format_number(fraction_old_remaining(pvp, p, PortMode::Switched)) << "\n";
      } else {
        const double t = t_hours * 3600.0;
        const double volumes = plasma_volumes_processed(p, t);
        std::cout << "t_seconds=" << format_number(t) << "\n"
                  << "plasma_volumes_processed=" << format_number(volumes) << "\n"
                  << "beta_typical=" << format_number(lumped_beta(p, PortMode::Typical)) << "\n"
                  << "beta_switched=" << format_number(lumped_beta(p, PortMode::Switched)) << "\n"
                  << "gamma2_lumped_typical="
                  << format_number(lumped_solution(p, ecmo, PortMode::Typical, t)) << "\n"
                  << "gamma2_lumped_switched="
                  << format_number(lumped_solution(p, ecmo, PortMode::Switched, t)) << "\n"
                  << "fraction_old_remaining_typical="
                  << format_number(fraction_old_remaining(volumes, p, PortMode::Typical)) << "\n"
                  << "fraction_old_remaining_switched="
                  << format_number(fraction_old_remaining(volumes, p, PortMode::Switched))
                  << "\n";
      }
      return 0;
    }

    validate_run_config(rc);
    if (*simulate) {
      const DerivedQuantities q = derive_quantities(p, rc.configuration, rc.dt);
      detail::warn_if_snapped(q);
      const TimeSeries ts =
          (model == ModelKind::ADE)
              ? simulate_ade(p, rc.configuration, q, rc.duration_s(), rc.dt)
              : simulate_dde(p, rc.configuration, q, rc.duration_s(), rc.dt);
      write_timeseries_csv(ts, out_path, rc.stride);
    } else if (*compare) {
      const ComparisonReport r = compare_models(p, ecmo, ports, rc.duration_s(), rc.dt);
      write_timeseries_csv(r.ade, detail::sibling_path(out_path, "_ade"), rc.stride);
      write_timeseries_csv(r.dde, detail::sibling_path(out_path, "_dde"), rc.stride);
      std::cout << "sup_diff=" << format_number(r.sup_diff)
                << " at t=" << format_number(r.time_of_max) << "\n";
    } else if (*sweep) {
      if (alphas.empty()) alphas = default_sweep_alphas();
      const SweepReport report = sweep_alpha(p, ecmo, alphas, rc.duration_s(), rc.dt);
      for (const auto& entry : report.entries)
        write_percent_difference_csv(
            entry.percent_diff,
            detail::sibling_path(out_path, "_alpha_" + format_number(entry.alpha)), rc.stride);
      write_sweep_summary_csv(report, out_path);
    } else if (*sensitivity) {
      write_sensitivity_csv(sensitivity_analysis(p, ecmo, ports, rc.duration_s(), rc.dt),
                            out_path);
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace plasmaflow
