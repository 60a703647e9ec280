#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "qtrotor/abfield.hpp"
#include "qtrotor/crystal.hpp"
#include "qtrotor/expsim.hpp"
#include "qtrotor/fit.hpp"
#include "qtrotor/modes.hpp"
#include "qtrotor/quantum.hpp"
#include "qtrotor/rotor.hpp"
#include "qtrotor/thermo.hpp"

namespace qtr::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// Shortest decimal representation that round-trips to the same double.
std::string format_number(double x);

// CSV with a single "# col,col,..." header line.
void write_csv(std::ostream& out, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};
CsvTable read_csv(std::istream& in);

void write_crystal_csv(std::ostream& out, const IonCrystal& crystal);
Json crystal_to_json(const IonCrystal& crystal);

void write_sweep_csv(std::ostream& out, const SweepTable& table);
Json sweep_to_json(const SweepTable& table);

void write_rotor_csv(std::ostream& out, const RotorPotential& rotor);
Json rotor_to_json(const RotorPotential& rotor);

Json tunnelling_to_json(const TunnellingSolution& solution);

void write_series_csv(std::ostream& out, const ShotSeries& series);
Json series_to_json(const ShotSeries& series);
ShotSeries read_series_csv(std::istream& in);

Json fit_to_json(const FitResult& fit);
FitResult fit_from_json(const Json& j);

void write_ramp_csv(std::ostream& out, const RampResult& ramp);

}  // namespace qtr::io
