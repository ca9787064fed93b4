#include "oamopo/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "oamopo/errors.hpp"

namespace oamopo::io {

namespace {

std::string escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> stokes_cells(const ModeVector& v) {
  if (!(v.intensity() > 0.0)) return {"", "", ""};
  const StokesVector s = stokes_from_mode(v);
  return {format_number(s.p1), format_number(s.p2), format_number(s.p3)};
}

void append(std::vector<std::string>& row, const std::vector<std::string>& more) {
  row.insert(row.end(), more.begin(), more.end());
}

std::vector<std::string> amplitude_cells(const FiveModeState& x) {
  std::vector<std::string> row;
  for (const Complex& z : {x.pump, x.signal.plus, x.signal.minus, x.idler.plus, x.idler.minus}) {
    row.push_back(format_number(z.real()));
    row.push_back(format_number(z.imag()));
  }
  return row;
}

const std::vector<std::string> kAmplitudeColumns = {
    "re_pump", "im_pump", "re_s_plus", "im_s_plus", "re_s_minus", "im_s_minus",
    "re_i_plus", "im_i_plus", "re_i_minus", "im_i_minus"};

const std::vector<std::string> kStokesColumns = {"s_p1", "s_p2", "s_p3", "i_p1", "i_p2", "i_p3"};

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  const auto last = s.find_last_not_of(" \t\r");
  return first == std::string::npos ? std::string{} : s.substr(first, last - first + 1);
}

bool parse_double(const std::string& text, double& value) {
  const std::string t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  return ec == std::errc{} && ptr == t.data() + t.size() && !t.empty();
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ec == std::errc{} ? ptr : buf);
}

void CsvWriter::header(const std::vector<std::string>& names) { row(names); }

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k) out_ << ',';
    out_ << escape(fields[k]);
  }
  out_ << "\r\n";
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  CsvWriter csv(out);
  std::vector<std::string> names{"t"};
  append(names, kAmplitudeColumns);
  append(names, {"pump_intensity", "signal_intensity", "idler_intensity"});
  append(names, kStokesColumns);
  csv.header(names);
  for (const TrajectorySample& s : trajectory.samples) {
    std::vector<std::string> row{format_number(s.t)};
    append(row, amplitude_cells(s.state));
    append(row, {format_number(std::norm(s.state.pump)), format_number(s.state.signal.intensity()),
                 format_number(s.state.idler.intensity())});
    append(row, stokes_cells(s.state.signal));
    append(row, stokes_cells(s.state.idler));
    csv.row(row);
  }
}

void write_sweep_csv(std::ostream& out, const SweepRecord& record) {
  CsvWriter csv(out);
  std::vector<std::string> names{"t", "theta", "phi"};
  append(names, kAmplitudeColumns);
  append(names, kStokesColumns);
  names.push_back("steady_deviation");
  csv.header(names);
  for (std::size_t k = 0; k < record.times.size(); ++k) {
    std::vector<std::string> row{format_number(record.times[k]), format_number(record.injected[k].theta),
                                 format_number(record.injected[k].phi)};
    append(row, amplitude_cells(record.states[k]));
    const StokesVector& s = record.signal_stokes[k];
    const StokesVector& i = record.idler_stokes[k];
    append(row, {format_number(s.p1), format_number(s.p2), format_number(s.p3), format_number(i.p1),
                 format_number(i.p2), format_number(i.p3)});
    row.push_back(format_number((record.states[k] - record.steady[k]).norm() / record.steady[k].norm()));
    csv.row(row);
  }
}

void write_path_csv(std::ostream& out, const SpherePath& path) {
  CsvWriter csv(out);
  csv.header({"theta", "phi"});
  for (const SpherePoint& p : path.vertices) csv.row({format_number(p.theta), format_number(p.phi)});
}

SpherePath read_path_csv(std::istream& in, bool closed) {
  SpherePath path;
  path.closed = closed;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::stringstream ss(line);
    std::string a;
    std::string b;
    std::getline(ss, a, ',');
    std::getline(ss, b, ',');
    double theta = 0.0;
    double phi = 0.0;
    if (parse_double(a, theta) && parse_double(b, phi)) {
      path.vertices.push_back({theta, phi});
    } else if (!(path.vertices.empty() && line_no == 1)) {
      throw DomainError("path file line " + std::to_string(line_no) + ": expected 'theta,phi'");
    }
  }
  path.validate();
  return path;
}

void write_pgm(std::ostream& out, const IntensityMap& map) {
  const int n = map.grid.n;
  out << "P5\n" << n << ' ' << n << "\n65535\n";
  const double peak = map.max();
  std::string bytes;
  bytes.reserve(map.values.size() * 2);
  for (double v : map.values) {
    const double scaled = peak > 0.0 ? std::round(65535.0 * v / peak) : 0.0;
    const auto word = static_cast<unsigned>(std::clamp(scaled, 0.0, 65535.0));
    bytes.push_back(static_cast<char>((word >> 8) & 0xff));
    bytes.push_back(static_cast<char>(word & 0xff));
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

void write_intensity_csv(std::ostream& out, const IntensityMap& map) {
  CsvWriter csv(out);
  csv.header({"x", "y", "intensity"});
  for (int j = 0; j < map.grid.n; ++j) {
    for (int i = 0; i < map.grid.n; ++i) {
      csv.row({format_number(map.grid.coordinate(i)), format_number(map.grid.coordinate(j)),
               format_number(map.at(i, j))});
    }
  }
}

}  // namespace oamopo::io
