#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "oamopo/adiabatic_sweep.hpp"
#include "oamopo/geometric_phase.hpp"
#include "oamopo/interference.hpp"
#include "oamopo/opo_dynamics.hpp"

namespace oamopo::io {

/// Shortest decimal text that round-trips to the same double.
std::string format_number(double value);

/// RFC 4180 writer: CRLF line endings, fields quoted when they contain a comma,
/// quote or line break.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(const std::vector<std::string>& names);
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
};

/// Columns: t, Re/Im of pump, s+, s-, i+, i-, |alpha_p|^2, I_s, I_i, signal
/// p1..p3, idler p1..p3. Stokes cells are empty where a beam has no power.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

/// One row per sweep sample: time, injected theta/phi, amplitudes, Stokes
/// vectors and the relative deviation from the instantaneous steady state.
void write_sweep_csv(std::ostream& out, const SweepRecord& record);

void write_path_csv(std::ostream& out, const SpherePath& path);

/// Reads `theta,phi` rows (radians); a non-numeric first row is taken as a
/// header. Throws DomainError on malformed input.
SpherePath read_path_csv(std::istream& in, bool closed = true);

/// 16-bit binary PGM (P5, maxval 65535, big-endian samples, row-major),
/// linearly scaled so the frame maximum maps to 65535.
void write_pgm(std::ostream& out, const IntensityMap& map);

/// Row-major CSV of x, y, intensity.
void write_intensity_csv(std::ostream& out, const IntensityMap& map);

}  // namespace oamopo::io
