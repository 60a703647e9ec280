#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <iostream>
#include <memory>
#include <regex>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "qtrotor/abfield.hpp"
#include "qtrotor/constants.hpp"
#include "qtrotor/crystal.hpp"
#include "qtrotor/errors.hpp"
#include "qtrotor/expsim.hpp"
#include "qtrotor/fit.hpp"
#include "qtrotor/io.hpp"
#include "qtrotor/modes.hpp"
#include "qtrotor/quantum.hpp"
#include "qtrotor/rotor.hpp"
#include "qtrotor/thermo.hpp"

using namespace qtr;
using io::Json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

// Everything here is in CLI units (MHz, kHz, gauss, ms, um^2) and converted
// to SI when a module is called.
struct Global {
  std::string output;
  std::string format = "csv";
  std::uint64_t seed = 1;
  int jobs = 1;
};

struct TrapArgs {
  double wx_mhz = 1.523;
  double wy_mhz = 1.961;
  double wz_mhz = 1.119;
  int ions = 3;
  double mass_amu = 40.0;

  TrapConfig trap() const {
    TrapConfig t = TrapConfig::experiment();
    t.omega_x = constants::two_pi * wx_mhz * 1e6;
    t.omega_y = constants::two_pi * wy_mhz * 1e6;
    t.omega_z = constants::two_pi * wz_mhz * 1e6;
    t.n_ions = ions;
    t.ion_mass = mass_amu * constants::atomic_mass_unit;
    t.validate();
    return t;
  }
};

void add_trap_options(CLI::App* cmd, TrapArgs& t, bool with_x = true) {
  if (with_x) cmd->add_option("--omega-x", t.wx_mhz, "secular frequency x / 2pi, MHz")->capture_default_str();
  cmd->add_option("--omega-y", t.wy_mhz, "secular frequency y / 2pi, MHz")->capture_default_str();
  cmd->add_option("--omega-z", t.wz_mhz, "secular frequency z / 2pi, MHz")->capture_default_str();
  cmd->add_option("--ions", t.ions, "number of ions")->capture_default_str();
  cmd->add_option("--mass", t.mass_amu, "ion mass, amu")->capture_default_str();
}

void check_range(const std::pair<double, double>& r, int steps, const char* what) {
  if (!(std::isfinite(r.first) && std::isfinite(r.second)) || r.first > r.second)
    throw InvalidArgument(std::string(what) + ": range must satisfy lo <= hi");
  if (steps < 1 || (steps == 1 && r.first != r.second))
    throw InvalidArgument(std::string(what) + ": need steps >= 2 for a non-empty range");
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw InvalidArgument("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void write_json(const std::string& path, const Json& j) {
  Output out(path);
  out.stream() << j.dump(2) << '\n';
}

void progress(const std::string& msg) { std::cerr << "qtrotor: " << msg << '\n'; }

std::string fmt(double x) { return io::format_number(x); }

// CLI11 cannot render pair/vector defaults itself; --dump-config needs them.
std::string list_str(std::initializer_list<double> v) {
  std::string s = "[";
  for (double x : v) s += (s.size() > 1 ? "," : "") + fmt(x);
  return s + "]";
}

void report_fit(const FitResult& fit) {
  std::string line = "fit " + fit.model + (fit.converged ? "" : " (not converged)");
  for (std::size_t i = 0; i < fit.names.size(); ++i)
    line += "  " + fit.names[i] + " = " + fmt(fit.values[i]) + " +- " + fmt(fit.std_errors[i]);
  progress(line);
  for (const auto& w : fit.warnings) progress("warning: " + w);
}

void emit_series_and_fit(const Global& g, const std::string& fit_path, const ShotSeries& series,
                         const FitResult& fit) {
  if (g.format == "json") {
    Json j;
    j["schema_version"] = io::kSchemaVersion;
    j["series"] = io::series_to_json(series);
    j["fit"] = io::fit_to_json(fit);
    write_json(g.output, j);
  } else {
    Output out(g.output);
    io::write_series_csv(out.stream(), series);
  }
  if (!fit_path.empty()) write_json(fit_path, io::fit_to_json(fit));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-tunnelling ion-crystal rotor: crystal, modes, rotor bands, scans and fits"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "read options from a TOML/INI file (flags win)");
  bool dump_config = false;
  app.add_flag("--dump-config", dump_config, "print the effective configuration and exit")->configurable(false);

  Global g;
  app.add_option("-o,--output", g.output, "output file (default standard output)");
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--jobs", g.jobs, "worker threads for scans")->check(CLI::PositiveNumber)->capture_default_str();

  // crystal
  TrapArgs crystal_trap;
  auto* crystal_cmd = app.add_subcommand("crystal", "equilibrium configuration");
  add_trap_options(crystal_cmd, crystal_trap);

  // modes
  TrapArgs modes_trap;
  std::pair<double, double> modes_range{1.0, 2.0};
  int modes_steps = 41;
  auto* modes_cmd = app.add_subcommand("modes", "normal modes versus omega_x");
  add_trap_options(modes_cmd, modes_trap, false);
  modes_cmd->add_option("--omega-x-range", modes_range, "omega_x / 2pi range, MHz")->default_str(list_str({modes_range.first, modes_range.second}));
  modes_cmd->add_option("--steps", modes_steps, "points in the range")->capture_default_str();

  // rotor
  TrapArgs rotor_trap;
  double rotor_delta_khz = 1.74;
  int rotor_samples = 256;
  int rotor_basis = 65;
  double rotor_flux = 0.0;
  auto* rotor_cmd = app.add_subcommand("rotor", "effective rotor potential and band levels");
  add_trap_options(rotor_cmd, rotor_trap, false);
  rotor_cmd->add_option("--delta", rotor_delta_khz, "(omega_x - omega_z) / 2pi, kHz")->capture_default_str();
  rotor_cmd->add_option("--samples", rotor_samples, "angle samples per period")->capture_default_str();
  rotor_cmd->add_option("--basis", rotor_basis, "plane-wave basis size (odd)")->capture_default_str();
  rotor_cmd->add_option("--flux", rotor_flux, "flux through the loop, flux quanta")->capture_default_str();

  // rate-scan
  TrapArgs rate_trap;
  std::pair<double, double> rate_range{1.0, 2.5};
  int rate_steps = 16;
  int rate_basis = 65;
  auto* rate_cmd = app.add_subcommand("rate-scan", "tunnelling rate versus confinement");
  add_trap_options(rate_cmd, rate_trap, false);
  rate_cmd->add_option("--delta-range", rate_range, "(omega_x - omega_z) / 2pi range, kHz")->default_str(list_str({rate_range.first, rate_range.second}));
  rate_cmd->add_option("--steps", rate_steps, "points in the range")->capture_default_str();
  rate_cmd->add_option("--basis", rate_basis, "plane-wave basis size (odd)")->capture_default_str();

  // spectrum
  TrapArgs spec_trap;
  double spec_delta_khz = 1.74;
  std::pair<double, double> spec_range{0.0, 2.0};
  int spec_steps = 41;
  auto* spec_cmd = app.add_subcommand("spectrum", "tunnelling rate versus flux from exact diagonalisation");
  add_trap_options(spec_cmd, spec_trap, false);
  spec_cmd->add_option("--delta", spec_delta_khz, "(omega_x - omega_z) / 2pi, kHz")->capture_default_str();
  spec_cmd->add_option("--flux-range", spec_range, "flux range, flux quanta")->default_str(list_str({spec_range.first, spec_range.second}));
  spec_cmd->add_option("--steps", spec_steps, "points in the range")->capture_default_str();

  // time-scan
  DynamicsModel time_model = DynamicsModel::experiment();
  double time_t2_ms = time_model.T2 * 1e3;
  std::pair<double, double> time_range{0.0, 500.0};
  int time_points = 26;
  std::int64_t time_shots = kTimeScanShots;
  double time_flux = 0.0;
  std::string time_fit_out;
  auto* time_cmd = app.add_subcommand("time-scan", "simulated flip probability versus waiting time");
  time_cmd->add_option("--p0", time_model.p0, "ground-band population")->capture_default_str();
  time_cmd->add_option("--nu", time_model.nu, "tunnelling frequency, Hz")->capture_default_str();
  time_cmd->add_option("--t2", time_t2_ms, "coherence time, ms")->capture_default_str();
  time_cmd->add_option("--v", time_model.v, "classical rotation rate, 1/s")->capture_default_str();
  time_cmd->add_option("--tau-range", time_range, "waiting time range, ms")->default_str(list_str({time_range.first, time_range.second}));
  time_cmd->add_option("--points", time_points, "points in the range")->capture_default_str();
  time_cmd->add_option("--shots", time_shots, "experiments per point")->check(CLI::PositiveNumber)->capture_default_str();
  time_cmd->add_option("--flux", time_flux, "flux, flux quanta")->capture_default_str();
  time_cmd->add_option("--fit-output", time_fit_out, "write the fit of f as JSON");

  // ab-scan
  DynamicsModel ab_model = DynamicsModel::experiment();
  double ab_t2_ms = ab_model.T2 * 1e3;
  std::pair<double, double> ab_range{-1.0, 1.0};
  int ab_points = 21;
  double ab_tau_ms = kFluxScanTau * 1e3;
  double ab_offset = kDefaultFluxOffset;
  std::int64_t ab_shots = kFluxScanShots;
  std::string ab_fit_out;
  bool ab_golden = false;
  auto* ab_cmd = app.add_subcommand("ab-scan", "simulated flip probability versus added flux");
  ab_cmd->add_option("--p0", ab_model.p0, "ground-band population")->capture_default_str();
  ab_cmd->add_option("--nu", ab_model.nu, "tunnelling frequency at zero flux, Hz")->capture_default_str();
  ab_cmd->add_option("--t2", ab_t2_ms, "coherence time, ms")->capture_default_str();
  ab_cmd->add_option("--v", ab_model.v, "classical rotation rate, 1/s")->capture_default_str();
  ab_cmd->add_option("--flux-range", ab_range, "added flux range, flux quanta")->default_str(list_str({ab_range.first, ab_range.second}));
  ab_cmd->add_option("--points", ab_points, "points in the range")->capture_default_str();
  ab_cmd->add_option("--tau", ab_tau_ms, "waiting time, ms")->capture_default_str();
  ab_cmd->add_option("--offset", ab_offset, "flux with the tunable coil off, flux quanta")->capture_default_str();
  ab_cmd->add_option("--shots", ab_shots, "experiments per point")->check(CLI::PositiveNumber)->capture_default_str();
  ab_cmd->add_option("--fit-output", ab_fit_out, "write the fit of g as JSON");
  ab_cmd->add_flag("--golden-rule", ab_golden, "print the analytic envelope and probability instead of simulating");

  // thermo
  double th_start_khz = 750.0;
  double th_end_khz = 0.18;
  double th_duration_ms = 200.0;
  int th_samples = 201;
  double th_nbar0 = 0.08;
  double th_heating = 3.92;
  auto* th_cmd = app.add_subcommand("thermo", "adiabatic ramp of the rotational mode");
  th_cmd->add_option("--start", th_start_khz, "initial mode frequency, kHz")->capture_default_str();
  th_cmd->add_option("--end", th_end_khz, "final mode frequency, kHz")->capture_default_str();
  th_cmd->add_option("--duration", th_duration_ms, "ramp duration, ms")->capture_default_str();
  th_cmd->add_option("--samples", th_samples, "samples along the ramp")->capture_default_str();
  th_cmd->add_option("--nbar", th_nbar0, "initial mean phonon number")->capture_default_str();
  th_cmd->add_option("--heating", th_heating, "quanta added during the ramp")->capture_default_str();

  // flux
  FieldSetup fs = FieldSetup::experiment();
  double fixed_gauss = 3.4;
  double tunable_gauss = 0.0;
  double area_um2 = fs.loop_area * 1e12;
  double misalign_deg = 0.0;
  std::vector<double> fixed_dir{0.5, -0.5, 1.0 / std::sqrt(2.0)};
  std::vector<double> tunable_dir{fs.tunable_direction[0], fs.tunable_direction[1], fs.tunable_direction[2]};
  std::vector<double> normal{fs.rotor_normal[0], fs.rotor_normal[1], fs.rotor_normal[2]};
  auto* flux_cmd = app.add_subcommand("flux", "magnetic flux through the rotor loop");
  flux_cmd->add_option("--fixed", fixed_gauss, "fixed coil field, G")->capture_default_str();
  flux_cmd->add_option("--fixed-dir", fixed_dir, "fixed coil direction")->expected(3)->default_str(list_str({fixed_dir[0], fixed_dir[1], fixed_dir[2]}));
  flux_cmd->add_option("--tunable", tunable_gauss, "tunable coil field, G")->capture_default_str();
  flux_cmd->add_option("--tunable-dir", tunable_dir, "tunable coil direction")->expected(3)->default_str(list_str({tunable_dir[0], tunable_dir[1], tunable_dir[2]}));
  flux_cmd->add_option("--normal", normal, "rotor loop normal")->expected(3)->default_str(list_str({normal[0], normal[1], normal[2]}));
  flux_cmd->add_option("--area", area_um2, "loop area, um^2")->capture_default_str();
  flux_cmd->add_option("--misalignment", misalign_deg, "tilt of the normal about x, degrees")->capture_default_str();

  // lorentz
  LorentzInputs li = LorentzInputs::experiment();
  double lz_barrier_hz = 270.0;
  double lz_ground_hz = 90.0;
  double lz_field_gauss = 5.0;
  double lz_r0_um = li.r0 * 1e6;
  double lz_radial_mhz = li.omega_radial / constants::two_pi * 1e-6;
  auto* lz_cmd = app.add_subcommand("lorentz", "order-of-magnitude Lorentz force estimates");
  lz_cmd->add_option("--barrier", lz_barrier_hz, "barrier top / h, Hz")->capture_default_str();
  lz_cmd->add_option("--ground", lz_ground_hz, "ground level / h, Hz")->capture_default_str();
  lz_cmd->add_option("--field", lz_field_gauss, "magnetic field, G")->capture_default_str();
  lz_cmd->add_option("--rate", li.J_rate, "tunnelling rate, Hz")->capture_default_str();
  lz_cmd->add_option("--r0", lz_r0_um, "rotor radius, um")->capture_default_str();
  lz_cmd->add_option("--radial", lz_radial_mhz, "radial (breathing) mode / 2pi, MHz")->capture_default_str();

  // fit
  std::string fit_input;
  std::string fit_model = "auto";
  auto* fit_cmd = app.add_subcommand("fit", "refit a shot series CSV with f (time) or g (flux)");
  fit_cmd->add_option("--input", fit_input, "shot series CSV")->required();
  fit_cmd->add_option("--model", fit_model, "model")->check(CLI::IsMember({"auto", "f", "g"}))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (dump_config) {
    // List defaults come out as quoted strings; TOML wants bare arrays.
    static const std::regex quoted_list(R"re("(\[[^"]*\])")re");
    std::cout << std::regex_replace(app.config_to_str(true, false), quoted_list, "$1");
    return 0;
  }

  try {
    if (*crystal_cmd) {
      const auto c = find_equilibrium(crystal_trap.trap());
      progress("energy " + fmt(c.energy) + " J, gradient " + fmt(c.gradient_norm) + " J/m");
      if (g.format == "json") {
        write_json(g.output, io::crystal_to_json(c));
      } else {
        Output out(g.output);
        io::write_crystal_csv(out.stream(), c);
      }
    } else if (*modes_cmd) {
      check_range(modes_range, modes_steps, "--omega-x-range");
      if (modes_range.first <= 0.0) throw InvalidArgument("--omega-x-range: frequencies must be positive");
      SweepOptions opt;
      opt.jobs = g.jobs;
      const auto base = modes_trap.trap();
      const auto table = sweep_confinement(base, constants::two_pi * modes_range.first * 1e6,
                                           constants::two_pi * modes_range.second * 1e6, modes_steps, opt);
      progress("modes: " + std::to_string(table.rows.size()) + " rows");
      if (g.format == "json") {
        write_json(g.output, io::sweep_to_json(table));
      } else {
        Output out(g.output);
        io::write_sweep_csv(out.stream(), table);
      }
    } else if (*rotor_cmd) {
      TrapConfig t = rotor_trap.trap();
      t.omega_x = t.omega_z + constants::two_pi * rotor_delta_khz * 1e3;
      RotorOptions ro;
      ro.samples_per_period = rotor_samples;
      const auto rp = rotor_potential(t, ro);
      BandOptions bo;
      bo.basis_size = rotor_basis;
      const auto sol = band_levels(rp, rotor_flux, bo);
      progress("barrier " + fmt(rp.barrier / constants::planck) + " Hz, well " +
               fmt(rp.well_frequency() / constants::two_pi) + " Hz, nu " + fmt(sol.nu) + " Hz, E0 " +
               fmt(sol.levels.front() / constants::planck) + " Hz");
      if (g.format == "json") {
        Json j = io::rotor_to_json(rp);
        j["tunnelling"] = io::tunnelling_to_json(sol);
        write_json(g.output, j);
      } else {
        Output out(g.output);
        io::write_rotor_csv(out.stream(), rp);
      }
    } else if (*rate_cmd) {
      check_range(rate_range, rate_steps, "--delta-range");
      if (rate_range.first <= 0.0) throw InvalidArgument("--delta-range: detuning must be positive");
      BandOptions bo;
      bo.basis_size = rate_basis;
      std::vector<double> deltas;
      for (double d : linspace(rate_range.first, rate_range.second, rate_steps)) deltas.push_back(d * 1e3);
      const auto pts = rate_vs_confinement(rate_trap.trap(), deltas, {}, bo, g.jobs);
      progress("rate-scan: " + std::to_string(pts.size()) + " points");
      const std::vector<std::string> cols{"delta_hz", "nu_hz", "barrier_hz", "ground_hz", "well_hz"};
      if (g.format == "json") {
        Json j;
        j["schema_version"] = io::kSchemaVersion;
        j["points"] = Json::array();
        for (const auto& p : pts)
          j["points"].push_back({{"delta_hz", p.delta_hz}, {"nu_hz", p.nu}, {"barrier_hz", p.barrier_hz},
                                 {"ground_hz", p.ground_hz}, {"well_hz", p.well_hz}});
        write_json(g.output, j);
      } else {
        std::vector<std::vector<double>> rows;
        for (const auto& p : pts) rows.push_back({p.delta_hz, p.nu, p.barrier_hz, p.ground_hz, p.well_hz});
        Output out(g.output);
        io::write_csv(out.stream(), cols, rows);
      }
    } else if (*spec_cmd) {
      check_range(spec_range, spec_steps, "--flux-range");
      TrapConfig t = spec_trap.trap();
      t.omega_x = t.omega_z + constants::two_pi * spec_delta_khz * 1e3;
      const auto rp = rotor_potential(t);
      const auto flux = linspace(spec_range.first, spec_range.second, spec_steps);
      const auto nu = tunnelling_rate_vs_flux(rp, flux);
      const double nu0 = band_levels(rp, 0.0).nu;
      std::vector<std::vector<double>> rows;
      for (const auto& [phi, v] : nu)
        rows.push_back({phi, v, tunnelling_frequency(nu0, phi), golden_rule_envelope(phi)});
      progress("spectrum: nu(0) = " + fmt(nu0) + " Hz");
      const std::vector<std::string> cols{"flux_quanta", "nu_hz", "nu_cosine_hz", "envelope"};
      if (g.format == "json") {
        Json j;
        j["schema_version"] = io::kSchemaVersion;
        for (std::size_t k = 0; k < cols.size(); ++k) {
          j[cols[k]] = Json::array();
          for (const auto& r : rows) j[cols[k]].push_back(r[k]);
        }
        write_json(g.output, j);
      } else {
        Output out(g.output);
        io::write_csv(out.stream(), cols, rows);
      }
    } else if (*time_cmd) {
      check_range(time_range, time_points, "--tau-range");
      if (time_range.first < 0.0) throw InvalidArgument("--tau-range: times must be non-negative");
      time_model.T2 = time_t2_ms * 1e-3;
      time_model.validate();
      std::vector<double> tau;
      for (double t : linspace(time_range.first, time_range.second, time_points)) tau.push_back(t * 1e-3);
      const auto series = simulate_time_scan(time_model, tau, time_shots, g.seed, time_flux);
      const auto fit = fit_time_scan(series);
      report_fit(fit);
      emit_series_and_fit(g, time_fit_out, series, fit);
    } else if (*ab_cmd) {
      check_range(ab_range, ab_points, "--flux-range");
      if (ab_tau_ms < 0.0) throw InvalidArgument("--tau: waiting time must be non-negative");
      ab_model.T2 = ab_t2_ms * 1e-3;
      ab_model.validate();
      const auto flux = linspace(ab_range.first, ab_range.second, ab_points);
      if (ab_golden) {
        const std::vector<std::string> cols{"flux_quanta", "total_flux_quanta", "envelope", "probability"};
        std::vector<std::vector<double>> rows;
        for (double n : flux) {
          const double total = ab_offset + n;
          rows.push_back({n, total, golden_rule_envelope(total), transition_probability(total, ab_tau_ms * 1e-3, ab_model)});
        }
        if (g.format == "json") {
          Json j;
          j["schema_version"] = io::kSchemaVersion;
          for (std::size_t k = 0; k < cols.size(); ++k) {
            j[cols[k]] = Json::array();
            for (const auto& r : rows) j[cols[k]].push_back(r[k]);
          }
          write_json(g.output, j);
        } else {
          Output out(g.output);
          io::write_csv(out.stream(), cols, rows);
        }
        return 0;
      }
      const auto series = simulate_flux_scan(ab_model, flux, ab_tau_ms * 1e-3, ab_shots, g.seed, ab_offset);
      const auto fit = fit_flux_scan(series);
      report_fit(fit);
      emit_series_and_fit(g, ab_fit_out, series, fit);
    } else if (*th_cmd) {
      if (th_start_khz <= 0.0 || th_end_khz <= 0.0 || th_duration_ms <= 0.0 || th_samples < 2)
        throw InvalidArgument("thermo: frequencies and duration must be positive, samples >= 2");
      const double w0 = constants::two_pi * th_start_khz * 1e3;
      const double w1 = constants::two_pi * th_end_khz * 1e3;
      const auto schedule = exponential_ramp(w0, w1, th_duration_ms * 1e-3, th_samples);
      const double T0 = temperature_from_nbar(w0, th_nbar0);
      const auto ramp = adiabatic_ramp(schedule, T0, th_heating);
      const auto& last = ramp.points.back();
      progress("T0 " + fmt(T0) + " K, final nbar " + fmt(last.nbar) + ", final T " + fmt(last.temperature) + " K" +
               (ramp.any_diabatic ? " (diabatic segment)" : ""));
      if (g.format == "json") {
        Json j;
        j["schema_version"] = io::kSchemaVersion;
        j["initial_temperature_k"] = T0;
        j["final_temperature_k"] = last.temperature;
        j["any_diabatic"] = ramp.any_diabatic;
        j["points"] = Json::array();
        for (const auto& p : ramp.points)
          j["points"].push_back({{"t_s", p.t}, {"omega_hz", p.omega / constants::two_pi}, {"nbar", p.nbar},
                                 {"temperature_k", p.temperature}, {"adiabaticity", p.adiabaticity}});
        write_json(g.output, j);
      } else {
        Output out(g.output);
        io::write_ramp_csv(out.stream(), ramp);
      }
    } else if (*flux_cmd) {
      auto unit = [](const std::vector<double>& v, const char* what) {
        const double n = std::hypot(v[0], v[1], v[2]);
        if (!(n > 0.0)) throw InvalidArgument(std::string(what) + ": direction must be non-zero");
        return Vec3{v[0] / n, v[1] / n, v[2] / n};
      };
      const Vec3 fd = unit(fixed_dir, "--fixed-dir");
      for (int a = 0; a < 3; ++a) fs.fixed_field[a] = fixed_gauss * constants::gauss * fd[a];
      fs.tunable_direction = unit(tunable_dir, "--tunable-dir");
      fs.tunable_magnitude = tunable_gauss * constants::gauss;
      fs.rotor_normal = unit(normal, "--normal");
      fs.loop_area = area_um2 * 1e-12;
      fs.misalignment = misalign_deg * constants::pi / 180.0;
      fs.validate();
      const auto f = flux(fs);
      const double per_quantum = tunable_field_per_quantum(fs);
      progress("flux " + fmt(f.flux_quanta) + " flux quanta");
      if (g.format == "json") {
        write_json(g.output, {{"schema_version", io::kSchemaVersion},
                              {"phi_wb", f.phi},
                              {"flux_quanta", f.flux_quanta},
                              {"b_perp_t", f.b_perp},
                              {"flux_quantum_wb", constants::flux_quantum},
                              {"tunable_gauss_per_quantum", per_quantum / constants::gauss}});
      } else {
        Output out(g.output);
        io::write_csv(out.stream(), {"phi_wb", "flux_quanta", "b_perp_t", "tunable_gauss_per_quantum"},
                      {{f.phi, f.flux_quanta, f.b_perp, per_quantum / constants::gauss}});
      }
    } else if (*lz_cmd) {
      li.U0 = constants::planck * lz_barrier_hz;
      li.E = constants::planck * lz_ground_hz;
      li.B = lz_field_gauss * constants::gauss;
      li.r0 = lz_r0_um * 1e-6;
      li.omega_radial = constants::two_pi * lz_radial_mhz * 1e6;
      const auto e = lorentz_estimates(li);
      progress("F_max " + fmt(e.F_max) + " N, F_mean " + fmt(e.F_mean) + " N");
      if (g.format == "json") {
        write_json(g.output, {{"schema_version", io::kSchemaVersion},
                              {"v_max_m_s", e.v_max},
                              {"F_max_n", e.F_max},
                              {"v_mean_m_s", e.v_mean},
                              {"F_mean_n", e.F_mean},
                              {"radius_shift_max_m", e.radius_shift_max},
                              {"radius_shift_mean_m", e.radius_shift_mean}});
      } else {
        Output out(g.output);
        io::write_csv(out.stream(),
                      {"v_max_m_s", "F_max_n", "v_mean_m_s", "F_mean_n", "radius_shift_max_m", "radius_shift_mean_m"},
                      {{e.v_max, e.F_max, e.v_mean, e.F_mean, e.radius_shift_max, e.radius_shift_mean}});
      }
    } else if (*fit_cmd) {
      std::ifstream in(fit_input);
      if (!in) throw InvalidArgument("cannot open input file " + fit_input);
      const auto series = io::read_series_csv(in);
      std::string model = fit_model;
      if (model == "auto") model = series.axis_name == "flux_quanta" ? "g" : "f";
      const auto fit = model == "g" ? fit_flux_scan(series) : fit_time_scan(series);
      report_fit(fit);
      write_json(g.output, io::fit_to_json(fit));
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "qtrotor: error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    std::cerr << "qtrotor: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "qtrotor: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
