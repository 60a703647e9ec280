#include "qtrotor/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "qtrotor/constants.hpp"
#include "qtrotor/errors.hpp"

namespace qtr::io {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

void write_csv(std::ostream& out, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  out << "# ";
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  return out;
}

double parse_double(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw InvalidArgument("csv: bad number '" + s + "'");
  return v;
}

Json vec3_json(const Vec3& v) { return Json::array({v[0], v[1], v[2]}); }

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(r);
  }
  return rows;
}

// JSON has no infinity; encode as null.
Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line[0] == '#') {
      if (t.columns.empty()) t.columns = split(line.substr(1));
      continue;
    }
    std::vector<double> row;
    for (const auto& cell : split(line)) row.push_back(parse_double(cell));
    if (!t.columns.empty() && row.size() != t.columns.size()) throw InvalidArgument("csv: row width mismatch");
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_crystal_csv(std::ostream& out, const IonCrystal& c) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < c.positions.size(); ++i)
    rows.push_back({static_cast<double>(i), c.positions[i][0], c.positions[i][1], c.positions[i][2]});
  write_csv(out, {"ion", "x_m", "y_m", "z_m"}, rows);
}

Json crystal_to_json(const IonCrystal& c) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  Json pos = Json::array();
  for (const auto& p : c.positions) pos.push_back(vec3_json(p));
  j["positions_m"] = pos;
  j["energy_j"] = c.energy;
  j["converged"] = c.converged;
  j["gradient_norm_j_per_m"] = c.gradient_norm;
  j["soft_rotation"] = c.soft_rotation;
  j["trap"] = {{"omega_x_hz", hertz(c.trap.omega_x)},
               {"omega_y_hz", hertz(c.trap.omega_y)},
               {"omega_z_hz", hertz(c.trap.omega_z)},
               {"ion_mass_kg", c.trap.ion_mass},
               {"ion_charge_c", c.trap.ion_charge},
               {"n_ions", c.trap.n_ions}};
  return j;
}

void write_sweep_csv(std::ostream& out, const SweepTable& t) {
  std::vector<std::string> cols{"omega_x_hz"};
  for (const auto& n : t.names) cols.push_back(n + "_hz");
  std::vector<std::vector<double>> rows;
  for (const auto& r : t.rows) {
    std::vector<double> row{hertz(r.omega_x)};
    for (double w : r.tracked) row.push_back(hertz(w));
    rows.push_back(std::move(row));
  }
  write_csv(out, cols, rows);
}

Json sweep_to_json(const SweepTable& t) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["modes"] = t.names;
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    Json row;
    row["omega_x_hz"] = hertz(r.omega_x);
    Json freqs = Json::object();
    for (std::size_t k = 0; k < t.names.size(); ++k) freqs[t.names[k] + "_hz"] = hertz(r.tracked[k]);
    row["frequencies"] = freqs;
    row["stable"] = r.spectrum.stable;
    Json modes = Json::array();
    for (std::size_t k = 0; k < r.spectrum.frequencies.size(); ++k)
      modes.push_back({{"frequency_hz", hertz(r.spectrum.frequencies[k])},
                       {"label", to_string(r.spectrum.labels[k])},
                       {"vector", r.spectrum.vectors.column(k)}});
    row["spectrum"] = modes;
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j;
}

void write_rotor_csv(std::ostream& out, const RotorPotential& r) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < r.theta.size(); ++i) rows.push_back({r.theta[i], r.U[i] / constants::planck});
  write_csv(out, {"theta_rad", "U_over_h_hz"}, rows);
}

Json rotor_to_json(const RotorPotential& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["inertia_kg_m2"] = r.inertia;
  j["r0_m"] = r.r0;
  j["loop_area_m2"] = constants::pi * r.r0 * r.r0;
  j["barrier_j"] = r.barrier;
  j["barrier_over_h_hz"] = r.barrier / constants::planck;
  j["well_frequency_hz"] = hertz(r.well_frequency());
  j["period_rad"] = r.period;
  std::vector<double> u_hz;
  for (double u : r.U) u_hz.push_back(u / constants::planck);
  j["theta_rad"] = r.theta;
  j["U_over_h_hz"] = u_hz;
  return j;
}

Json tunnelling_to_json(const TunnellingSolution& s) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["flux_quanta"] = s.flux_quanta;
  std::vector<double> lv;
  for (double e : s.levels) lv.push_back(e / constants::planck);
  j["levels_over_h_hz"] = lv;
  j["splitting_j"] = s.splitting;
  j["nu_hz"] = s.nu;
  j["J_hz"] = s.J_amp;
  j["basis_size"] = s.basis_size;
  j["tail_weight"] = s.tail_weight;
  j["max_residual"] = s.max_residual;
  return j;
}

void write_series_csv(std::ostream& out, const ShotSeries& s) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < s.size(); ++i)
    rows.push_back({s.axis[i], static_cast<double>(s.successes[i]), static_cast<double>(s.shots[i]),
                    s.probabilities[i], s.errors[i]});
  write_csv(out, {s.axis_name, "successes", "shots", "probability", "sigma"}, rows);
}

Json series_to_json(const ShotSeries& s) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["axis_name"] = s.axis_name;
  j["axis"] = s.axis;
  j["successes"] = s.successes;
  j["shots"] = s.shots;
  j["probability"] = s.probabilities;
  j["sigma"] = s.errors;
  return j;
}

ShotSeries read_series_csv(std::istream& in) {
  const auto t = read_csv(in);
  if (t.columns.size() != 5) throw InvalidArgument("shot series csv: expected 5 columns");
  ShotSeries s;
  s.axis_name = t.columns[0];
  for (const auto& r : t.rows) {
    s.axis.push_back(r[0]);
    s.successes.push_back(static_cast<std::int64_t>(std::llround(r[1])));
    s.shots.push_back(static_cast<std::int64_t>(std::llround(r[2])));
  }
  s.validate();
  s.finalize();
  return s;
}

Json fit_to_json(const FitResult& f) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["model"] = f.model;
  Json params = Json::array();
  for (std::size_t i = 0; i < f.names.size(); ++i)
    params.push_back({{"name", f.names[i]}, {"value", f.values[i]}, {"std_error", number_or_null(f.std_errors[i])}});
  j["parameters"] = params;
  j["covariance"] = matrix_json(f.covariance);
  j["chi2"] = f.chi2;
  j["dof"] = f.dof;
  j["converged"] = f.converged;
  j["iterations"] = f.iterations;
  j["warnings"] = f.warnings;
  return j;
}

FitResult fit_from_json(const Json& j) {
  FitResult f;
  f.model = j.at("model").get<std::string>();
  for (const auto& p : j.at("parameters")) {
    f.names.push_back(p.at("name").get<std::string>());
    f.values.push_back(p.at("value").get<double>());
    const auto& e = p.at("std_error");
    f.std_errors.push_back(e.is_null() ? std::numeric_limits<double>::infinity() : e.get<double>());
  }
  const auto& cov = j.at("covariance");
  f.covariance = Matrix(cov.size(), cov.empty() ? 0 : cov[0].size());
  for (std::size_t r = 0; r < cov.size(); ++r)
    for (std::size_t c = 0; c < cov[r].size(); ++c) f.covariance(r, c) = cov[r][c].get<double>();
  f.chi2 = j.at("chi2").get<double>();
  f.dof = j.at("dof").get<int>();
  f.converged = j.at("converged").get<bool>();
  f.iterations = j.at("iterations").get<int>();
  f.warnings = j.at("warnings").get<std::vector<std::string>>();
  return f;
}

void write_ramp_csv(std::ostream& out, const RampResult& ramp) {
  std::vector<std::vector<double>> rows;
  for (const auto& p : ramp.points)
    rows.push_back({p.t, hertz(p.omega), p.nbar, p.temperature, p.adiabaticity});
  write_csv(out, {"t_s", "omega_hz", "nbar", "temperature_k", "adiabaticity"}, rows);
}

}  // namespace qtr::io
