#pragma once

#include <vector>

#include "oamopo/geometric_phase.hpp"
#include "oamopo/mode_algebra.hpp"
#include "oamopo/opo_dynamics.hpp"

namespace oamopo {

/// Complex field sampled on a GridSpec, row-major with row j at y = coordinate(j).
struct FieldMap {
  GridSpec grid{};
  std::vector<Complex> values;

  Complex at(int i, int j) const { return values[static_cast<std::size_t>(j) * grid.n + i]; }
};

struct IntensityMap {
  GridSpec grid{};
  std::vector<double> values;

  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * grid.n + i]; }
  /// Riemann sum of the intensity over the grid (pixel area included).
  double integral() const;
  double max() const;
};

/// e^{i extra_phase} (c+ psi_+ + c- psi_-) sampled on the grid.
FieldMap synthesize_field(const ModeVector& v, double extra_phase, const GridSpec& grid);

IntensityMap intensity(const FieldMap& field);

/// |E_s + E_i|^2 pixel by pixel. Throws DomainError if the grids differ.
IntensityMap mutual_interference(const FieldMap& signal, const FieldMap& idler);

struct RotationEstimate {
  double angle = 0.0;        ///< rotation of `after` relative to `before`, in (-pi/m, pi/m]
  int harmonic = 0;          ///< dominant azimuthal harmonic m of `before`
  double ring_radius = 0.0;  ///< radius of maximum radial mean intensity
};

/// Rotation of an azimuthally structured pattern. The azimuthal profile is read
/// on the ring of maximum radial mean intensity, the two profiles are
/// circularly cross-correlated and the best shift is reported modulo the
/// pattern's symmetry period 2pi/m.
///
/// Throws DomainError for mismatched grids and for patterns without azimuthal
/// structure ("no fringes").
RotationEstimate estimate_rotation(const IntensityMap& before, const IntensityMap& after, int bins = 720);
double pattern_rotation(const IntensityMap& before, const IntensityMap& after, int bins = 720);

struct CycleRender {
  ModeVector signal{};
  ModeVector idler{};
  ConjugationPair phases{};
  IntensityMap before{};
  IntensityMap after{};
  RotationEstimate rotation{};
};

/// Signal and idler from the injected steady state at the first vertex of
/// `path`; the "after" frame adds the geometric phases of the cycle to each.
CycleRender render_cycle(const OpoParams& params, double pump_in, double seed_intensity, const SpherePath& path,
                         const GridSpec& grid);

}  // namespace oamopo
