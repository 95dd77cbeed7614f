#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tmd/analysis.hpp"
#include "tmd/core_math.hpp"
#include "tmd/csv.hpp"
#include "tmd/dispersion.hpp"
#include "tmd/distributions.hpp"
#include "tmd/model.hpp"
#include "tmd/oracle.hpp"
#include "tmd/units.hpp"
#include "tmd/version.hpp"

namespace tmd::cli {

namespace detail {

/// Detector geometry flags shared by the click-statistics subcommands.
/// Dimensioned values stay as the user-facing strings until parse time so the
/// manifest can echo them verbatim.
struct GeometryOpts {
  std::string dead_time = "10ns";
  std::string splitter_loss = "0.05dB";
  std::string fiber_loss = "0.2dB/km";
  std::string fiber_speed = "2e8m/s";
  double eta_ex = 1.0;
  int bins_exponent = 8;
  bool ideal_geometry = false;
};

inline void add_geometry_options(CLI::App* cmd, GeometryOpts& g, bool with_bins) {
  if (with_bins)
    cmd->add_option("--bins-exponent", g.bins_exponent, "Stage count b, giving N = 2^b bins")
        ->check(CLI::Range(0, 20))
        ->capture_default_str();
  cmd->add_option("--eta-ex", g.eta_ex, "Setup + detection efficiency outside the network")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--dead-time", g.dead_time, "Detector dead time = bin spacing (e.g. 10ns)")
      ->capture_default_str();
  cmd->add_option("--splitter-loss", g.splitter_loss, "Loss per beam splitter (e.g. 0.05dB)")
      ->capture_default_str();
  cmd->add_option("--fiber-loss", g.fiber_loss, "Delay fiber loss (e.g. 0.2dB/km)")
      ->capture_default_str();
  cmd->add_option("--fiber-speed", g.fiber_speed, "Light speed in fiber (e.g. 2e8m/s)")
      ->capture_default_str();
  cmd->add_flag("--ideal-geometry", g.ideal_geometry,
                "Zero the splitter and fiber losses (isolates the convolution)");
}

inline TmdConfig make_config(const GeometryOpts& g) {
  TmdConfig cfg;
  cfg.stages = static_cast<unsigned>(g.bins_exponent);
  cfg.dead_time_s = units::parse_duration_s(g.dead_time);
  cfg.splitter_loss_db = units::parse_db(g.splitter_loss);
  cfg.fiber_loss_db_per_km = units::parse_db_per_km(g.fiber_loss);
  cfg.fiber_speed_m_per_s = units::parse_speed_m_per_s(g.fiber_speed);
  cfg.eta_ex = g.eta_ex;
  if (g.ideal_geometry) cfg = cfg.ideal_geometry();
  cfg.validate();
  return cfg;
}

inline void append_geometry_params(csv::ParamList& p, const GeometryOpts& g, bool with_bins) {
  if (with_bins) p.emplace_back("bins-exponent", std::to_string(g.bins_exponent));
  p.emplace_back("eta-ex", csv::format_double(g.eta_ex));
  p.emplace_back("dead-time", g.dead_time);
  p.emplace_back("splitter-loss", g.splitter_loss);
  p.emplace_back("fiber-loss", g.fiber_loss);
  p.emplace_back("fiber-speed", g.fiber_speed);
  p.emplace_back("ideal-geometry", g.ideal_geometry ? "true" : "false");
}

/// Photon statistics from a text file: probabilities in order n = 0,1,...,
/// separated by whitespace, newlines or commas; '#' starts a comment.
inline PhotonStatistics load_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open state file: " + path);
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream tokens(line);
    std::string tok;
    while (tokens >> tok) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0')
        throw std::domain_error("state file: cannot parse probability '" + tok + "'");
      values.push_back(v);
    }
  }
  return PhotonStatistics(std::move(values));
}

inline void emit(const std::string& subcommand, const csv::ParamList& params,
                 const csv::Table& table, const std::string& output_path,
                 std::ostream& fallback) {
  if (output_path.empty()) {
    csv::write_with_manifest(fallback, subcommand, params, table);
    return;
  }
  std::ofstream file(output_path);
  if (!file) throw std::runtime_error("cannot open output file: " + output_path);
  csv::write_with_manifest(file, subcommand, params, table);
  file.flush();
  if (!file) throw std::runtime_error("failed writing output file: " + output_path);
}

inline double parse_ps(const std::string& text) { return units::parse_duration_s(text) * 1e12; }

inline std::string trimmed(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

/// Flat key = value configuration files: every key names a long option of the
/// invoked subcommand; '#' starts a comment. Values from the file fill in only
/// options absent from the command line, so flags always win.
inline void apply_config_overlay(std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw std::domain_error("--config requires a file path");
      path = args[i + 1];
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      break;
    }
  }
  if (path.empty()) return;

  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);

  const auto given_on_command_line = [&args](const std::string& flag) {
    for (const auto& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    return false;
  };

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trimmed(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::domain_error("config file " + path + " line " + std::to_string(line_no) +
                              ": expected key = value");
    const std::string key = trimmed(line.substr(0, eq));
    const std::string value = trimmed(line.substr(eq + 1));
    if (key.empty())
      throw std::domain_error("config file " + path + " line " + std::to_string(line_no) +
                              ": empty key");
    const std::string flag = "--" + key;
    if (given_on_command_line(flag)) continue;
    if (value == "true") {
      args.push_back(flag);
    } else if (value == "false") {
      continue;  // flags default to off
    } else {
      args.push_back(flag);
      args.push_back(value);
    }
  }
}

} // namespace detail

/// Entry point behind the tmd-sim binary. Exit code 0 on success, 2 on any
/// argument or domain error (diagnostic on err).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Click-statistics simulation and design-space sweeps for "
               "time-multiplexed photon-counting detectors"};
  app.name("tmd-sim");
  app.set_version_flag("--version", TMD_SIM_VERSION);
  app.require_subcommand(1);

  // --- dispersion-map ------------------------------------------------------
  auto* sc_disp = app.add_subcommand(
      "dispersion-map", "Dispersion-limited maximum bin count over a (rep-rate, pulse) grid");
  std::string d_tau, d_rep;
  std::string d_tau_min = "0.1ps", d_tau_max = "10ps";
  std::string d_rep_min = "1kHz", d_rep_max = "1MHz";
  std::size_t d_tau_points = 50, d_rep_points = 50;
  std::string d_wavelength = "1550nm", d_coeff = "18ps/nm/km", d_speed = "2e8m/s";
  std::string d_output;
  sc_disp->add_option("--tau", d_tau, "Single input pulse FWHM (e.g. 9ps); overrides the grid");
  sc_disp->add_option("--rep-rate", d_rep, "Single repetition rate (e.g. 100kHz); overrides the grid");
  sc_disp->add_option("--tau-min", d_tau_min)->capture_default_str();
  sc_disp->add_option("--tau-max", d_tau_max)->capture_default_str();
  sc_disp->add_option("--tau-points", d_tau_points)->check(CLI::PositiveNumber)->capture_default_str();
  sc_disp->add_option("--rep-min", d_rep_min)->capture_default_str();
  sc_disp->add_option("--rep-max", d_rep_max)->capture_default_str();
  sc_disp->add_option("--rep-points", d_rep_points)->check(CLI::PositiveNumber)->capture_default_str();
  sc_disp->add_option("--wavelength", d_wavelength)->capture_default_str();
  sc_disp->add_option("--dispersion-coeff", d_coeff)->capture_default_str();
  sc_disp->add_option("--fiber-speed", d_speed)->capture_default_str();
  sc_disp->add_option("--output", d_output, "Write CSV here instead of stdout");
  std::string d_config;
  sc_disp->add_option("--config", d_config, "Flat key=value defaults; flags override");

  // --- click-stats ---------------------------------------------------------
  auto* sc_click = app.add_subcommand(
      "click-stats", "Click distribution of a photon-number state after the detector");
  int c_fock = -1;
  std::string c_state_file, c_output;
  bool c_loss_only = false;
  detail::GeometryOpts c_geom;
  auto* c_fock_opt =
      sc_click->add_option("--fock", c_fock, "Fock input |n>")->check(CLI::NonNegativeNumber);
  sc_click->add_option("--state-file", c_state_file, "Photon statistics from file (p0 p1 ...)")
      ->excludes(c_fock_opt);
  sc_click->add_flag("--loss-only", c_loss_only,
                     "Apply only the loss channel; rows are surviving photon numbers");
  detail::add_geometry_options(sc_click, c_geom, true);
  sc_click->add_option("--output", c_output, "Write CSV here instead of stdout");
  std::string c_config;
  sc_click->add_option("--config", c_config, "Flat key=value defaults; flags override");

  // --- overlap-sweep -------------------------------------------------------
  auto* sc_sweep = app.add_subcommand(
      "overlap-sweep", "Fock-pair overlap vs bin count, split by contribution");
  int s_n1 = 0, s_n2 = 0;
  unsigned s_b_min = 1, s_b_max = 14;
  std::string s_output;
  detail::GeometryOpts s_geom;
  sc_sweep->add_option("--n1", s_n1, "First Fock state")->required()->check(CLI::NonNegativeNumber);
  sc_sweep->add_option("--n2", s_n2, "Second Fock state")->required()->check(CLI::NonNegativeNumber);
  sc_sweep->add_option("--b-min", s_b_min)->check(CLI::Range(1u, 20u))->capture_default_str();
  sc_sweep->add_option("--b-max", s_b_max)->check(CLI::Range(1u, 20u))->capture_default_str();
  detail::add_geometry_options(sc_sweep, s_geom, false);
  sc_sweep->add_option("--output", s_output, "Write CSV here instead of stdout");
  std::string s_config;
  sc_sweep->add_option("--config", s_config, "Flat key=value defaults; flags override");

  // --- optimal-bins --------------------------------------------------------
  auto* sc_opt = app.add_subcommand(
      "optimal-bins", "Overlap-minimizing bin count for Fock pairs (n, n+separation)");
  int o_separation = 1, o_n_max = 20;
  unsigned o_b_max = 14;
  std::string o_output;
  detail::GeometryOpts o_geom;
  sc_opt->add_option("--separation", o_separation, "Fock-state separation")
      ->check(CLI::IsMember({1, 2, 4}))
      ->capture_default_str();
  sc_opt->add_option("--n-max", o_n_max, "Largest photon number in the sweep")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sc_opt->add_option("--b-max", o_b_max, "Largest bin exponent tried")
      ->check(CLI::Range(1u, 20u))
      ->capture_default_str();
  detail::add_geometry_options(sc_opt, o_geom, false);
  sc_opt->add_option("--output", o_output, "Write CSV here instead of stdout");
  std::string o_config;
  sc_opt->add_option("--config", o_config, "Flat key=value defaults; flags override");

  // --- recon-scan ----------------------------------------------------------
  auto* sc_recon = app.add_subcommand(
      "recon-scan", "Overlap of |n_center> with its Fock neighbours after the detector");
  int r_n_center = 0, r_delta_min = -10, r_delta_max = 10;
  std::string r_output;
  detail::GeometryOpts r_geom;
  sc_recon->add_option("--n-center", r_n_center, "Central Fock state")
      ->required()
      ->check(CLI::NonNegativeNumber);
  sc_recon->add_option("--delta-min", r_delta_min)->capture_default_str();
  sc_recon->add_option("--delta-max", r_delta_max)->capture_default_str();
  detail::add_geometry_options(sc_recon, r_geom, true);
  sc_recon->add_option("--output", r_output, "Write CSV here instead of stdout");
  std::string r_config;
  sc_recon->add_option("--config", r_config, "Flat key=value defaults; flags override");

  // --- mc-validate ---------------------------------------------------------
  auto* sc_mc = app.add_subcommand(
      "mc-validate", "Monte-Carlo cross-check of the analytic click statistics");
  int m_fock = 0;
  std::uint64_t m_samples = 1'000'000, m_seed = 12345;
  std::string m_output;
  detail::GeometryOpts m_geom;
  sc_mc->add_option("--fock", m_fock, "Fock input |n>")->required()->check(CLI::NonNegativeNumber);
  sc_mc->add_option("--samples", m_samples)->check(CLI::PositiveNumber)->capture_default_str();
  sc_mc->add_option("--seed", m_seed)->capture_default_str();
  detail::add_geometry_options(sc_mc, m_geom, true);
  sc_mc->add_option("--output", m_output, "Write CSV here instead of stdout");
  std::string m_config;
  sc_mc->add_option("--config", m_config, "Flat key=value defaults; flags override");

  std::vector<std::string> full_args = args;
  try {
    detail::apply_config_overlay(full_args);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  std::vector<const char*> argv;
  argv.reserve(full_args.size() + 1);
  argv.push_back("tmd-sim");
  for (const auto& a : full_args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << TMD_SIM_VERSION << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(sc_disp)) {
      DispersionParams base;
      base.wavelength_nm = units::parse_length_m(d_wavelength) * 1e9;
      base.dispersion_ps_nm_km = units::parse_dispersion_ps_nm_km(d_coeff);
      base.fiber_speed_m_per_s = units::parse_speed_m_per_s(d_speed);

      const std::vector<double> taus =
          d_tau.empty()
              ? lin_spaced(detail::parse_ps(d_tau_min), detail::parse_ps(d_tau_max), d_tau_points)
              : std::vector<double>{detail::parse_ps(d_tau)};
      const std::vector<double> reps =
          d_rep.empty()
              ? log_spaced(units::parse_rate_hz(d_rep_min), units::parse_rate_hz(d_rep_max),
                           d_rep_points)
              : std::vector<double>{units::parse_rate_hz(d_rep)};

      csv::ParamList params;
      if (!d_tau.empty()) {
        params.emplace_back("tau", d_tau);
      } else {
        params.emplace_back("tau-min", d_tau_min);
        params.emplace_back("tau-max", d_tau_max);
        params.emplace_back("tau-points", std::to_string(d_tau_points));
      }
      if (!d_rep.empty()) {
        params.emplace_back("rep-rate", d_rep);
      } else {
        params.emplace_back("rep-min", d_rep_min);
        params.emplace_back("rep-max", d_rep_max);
        params.emplace_back("rep-points", std::to_string(d_rep_points));
      }
      params.emplace_back("wavelength", d_wavelength);
      params.emplace_back("dispersion-coeff", d_coeff);
      params.emplace_back("fiber-speed", d_speed);

      csv::Table table;
      table.header = "rep_rate_hz,tau_in_ps,n_max_bins";
      for (const DispersionPoint& p : dispersion_map(reps, taus, base))
        table.rows.push_back(csv::format_double(p.rep_rate_hz) + "," +
                             csv::format_double(p.tau_in_ps) + "," +
                             std::to_string(p.n_max_bins));
      detail::emit("dispersion-map", params, table, d_output, out);
      return 0;
    }

    if (app.got_subcommand(sc_click)) {
      if (c_fock < 0 && c_state_file.empty())
        throw std::domain_error("click-stats: give either --fock or --state-file");
      const PhotonStatistics state = c_state_file.empty()
                                         ? PhotonStatistics::fock(c_fock)
                                         : detail::load_state_file(c_state_file);
      const TmdConfig cfg = detail::make_config(c_geom);

      csv::ParamList params;
      if (!c_state_file.empty())
        params.emplace_back("state-file", c_state_file);
      else
        params.emplace_back("fock", std::to_string(c_fock));
      params.emplace_back("loss-only", c_loss_only ? "true" : "false");
      detail::append_geometry_params(params, c_geom, true);

      std::vector<double> probabilities;
      if (c_loss_only) {
        const int n_max = static_cast<int>(state.n_max());
        const double eta = cfg.eta_ex * tmd_efficiency(cfg);
        const LossMatrix loss = loss_matrix(eta, n_max);
        probabilities.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
        for (int n = 0; n <= n_max; ++n)
          for (int np = 0; np <= n; ++np)
            probabilities[static_cast<std::size_t>(np)] +=
                state.probabilities[static_cast<std::size_t>(n)] * loss.m.at(n, np);
      } else {
        probabilities = click_statistics(state, cfg).probabilities;
      }

      csv::Table table;
      table.header = "k,probability";
      for (std::size_t k = 0; k < probabilities.size(); ++k)
        table.rows.push_back(std::to_string(k) + "," + csv::format_double(probabilities[k]));
      detail::emit("click-stats", params, table, c_output, out);
      return 0;
    }

    if (app.got_subcommand(sc_sweep)) {
      const TmdConfig cfg = detail::make_config(s_geom);
      const OverlapCurve conv = overlap_vs_bins(s_n1, s_n2, s_geom.eta_ex, s_b_min, s_b_max,
                                                OverlapMode::convolution_only, cfg);
      const OverlapCurve loss = overlap_vs_bins(s_n1, s_n2, s_geom.eta_ex, s_b_min, s_b_max,
                                                OverlapMode::loss_only, cfg);
      const OverlapCurve comb = overlap_vs_bins(s_n1, s_n2, s_geom.eta_ex, s_b_min, s_b_max,
                                                OverlapMode::combined, cfg);

      csv::ParamList params;
      params.emplace_back("n1", std::to_string(s_n1));
      params.emplace_back("n2", std::to_string(s_n2));
      params.emplace_back("b-min", std::to_string(s_b_min));
      params.emplace_back("b-max", std::to_string(s_b_max));
      detail::append_geometry_params(params, s_geom, false);

      csv::Table table;
      table.header = "bins,overlap_convolution,overlap_loss,overlap_combined";
      for (std::size_t i = 0; i < conv.values.size(); ++i) {
        const auto b = static_cast<unsigned>(conv.abscissa[i]);
        table.rows.push_back(std::to_string(std::uint64_t{1} << b) + "," +
                             csv::format_double(conv.values[i]) + "," +
                             csv::format_double(loss.values[i]) + "," +
                             csv::format_double(comb.values[i]));
      }
      detail::emit("overlap-sweep", params, table, s_output, out);
      return 0;
    }

    if (app.got_subcommand(sc_opt)) {
      const TmdConfig cfg = detail::make_config(o_geom);
      const std::vector<SweepRow> rows =
          optimal_bins_sweep(o_separation, o_n_max, o_geom.eta_ex, o_b_max, cfg);

      csv::ParamList params;
      params.emplace_back("separation", std::to_string(o_separation));
      params.emplace_back("n-max", std::to_string(o_n_max));
      params.emplace_back("b-max", std::to_string(o_b_max));
      detail::append_geometry_params(params, o_geom, false);

      csv::Table table;
      table.header = "n,best_bins,best_overlap";
      for (const SweepRow& r : rows)
        table.rows.push_back(std::to_string(r.n) + "," + std::to_string(r.best_bins) + "," +
                             csv::format_double(r.best_overlap));
      detail::emit("optimal-bins", params, table, o_output, out);
      return 0;
    }

    if (app.got_subcommand(sc_recon)) {
      const TmdConfig cfg = detail::make_config(r_geom);
      const OverlapCurve curve =
          reconstruction_scan(r_n_center, static_cast<unsigned>(r_geom.bins_exponent),
                              r_delta_min, r_delta_max, r_geom.eta_ex, cfg);

      csv::ParamList params;
      params.emplace_back("n-center", std::to_string(r_n_center));
      params.emplace_back("delta-min", std::to_string(r_delta_min));
      params.emplace_back("delta-max", std::to_string(r_delta_max));
      detail::append_geometry_params(params, r_geom, true);

      csv::Table table;
      table.header = "delta_n,overlap";
      for (std::size_t i = 0; i < curve.values.size(); ++i)
        table.rows.push_back(std::to_string(static_cast<int>(curve.abscissa[i])) + "," +
                             csv::format_double(curve.values[i]));
      detail::emit("recon-scan", params, table, r_output, out);
      return 0;
    }

    if (app.got_subcommand(sc_mc)) {
      const TmdConfig cfg = detail::make_config(m_geom);
      const double eta_total = cfg.eta_ex * tmd_efficiency(cfg);
      oracle::McConfig mc_cfg;
      mc_cfg.samples = m_samples;
      mc_cfg.seed = m_seed;
      mc_cfg.n_photons = m_fock;
      mc_cfg.n_bins = cfg.n_bins();
      mc_cfg.eta = eta_total;
      const ClickDistribution empirical = oracle::mc_click_distribution(mc_cfg);
      const ClickDistribution analytic = fock_click_statistics(m_fock, cfg);
      const double tv = total_variation(empirical.probabilities, analytic.probabilities);

      csv::ParamList params;
      params.emplace_back("fock", std::to_string(m_fock));
      params.emplace_back("samples", std::to_string(m_samples));
      params.emplace_back("seed", std::to_string(m_seed));
      detail::append_geometry_params(params, m_geom, true);
      params.emplace_back("eta-total", csv::format_double(eta_total));
      params.emplace_back("tv-distance", csv::format_double(tv));

      csv::Table table;
      table.header = "k,empirical,analytic";
      const std::size_t k_top =
          std::max(empirical.probabilities.size(), analytic.probabilities.size());
      for (std::size_t k = 0; k < k_top; ++k) {
        const double e = k < empirical.probabilities.size() ? empirical.probabilities[k] : 0.0;
        const double a = k < analytic.probabilities.size() ? analytic.probabilities[k] : 0.0;
        table.rows.push_back(std::to_string(k) + "," + csv::format_double(e) + "," +
                             csv::format_double(a));
      }
      detail::emit("mc-validate", params, table, m_output, out);
      return 0;
    }

    err << "error: no subcommand selected\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

inline int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

} // namespace tmd::cli
