#pragma once

#include <Eigen/Dense>

namespace magicpol {

/// Complex unit polarization vector multiplying exp(-i w t).
struct Polarization {
  Eigen::Vector3cd epsilon = Eigen::Vector3cd::UnitX();

  /// A = -i (eps* x eps) . z
  double helicity() const;
  /// |eps . z|^2
  double axial_overlap() const;
  Polarization conjugate() const { return {epsilon.conjugate()}; }
};

/// Propagation geometry: k lies in the x-z plane at angle theta_kz from the
/// quantization axis z (the magnetic field direction).
struct Geometry {
  double theta_kz_deg = 180.0;
  Eigen::Vector3d k_direction() const;
};

/// eps = cos(chi) e1 + i sin(chi) e2 with {e1, e2, k} right handed, e1 the
/// part of y transverse to k (x when k is along y). A = sin(2 chi) k.z.
Polarization polarization_from_waveplate(double chi_rad, const Eigen::Vector3d& k,
                                         const Eigen::Vector3d& z_hat = Eigen::Vector3d::UnitZ());

struct LaserField {
  double wavelength_nm = 532.0;
  double intensity_W_m2 = 0.0;
  Eigen::Vector3d k_direction = -Eigen::Vector3d::UnitZ();
  Polarization pol;

  double frequency_MHz() const;
  void validate() const;
};

/// Laser with helicity projection A in the given geometry. Throws when
/// |A| > |cos theta_kz|, which no transverse polarization reaches.
LaserField laser_with_helicity(double A, double wavelength_nm, double intensity_W_m2,
                               const Geometry& geometry = {});

}  // namespace magicpol
