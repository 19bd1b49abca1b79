#include "magicpol/polarization.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "magicpol/constants.hpp"
#include "magicpol/errors.hpp"

namespace magicpol {

double Polarization::helicity() const {
  // written out: Eigen's cross() conjugates complex results
  const std::complex<double> cz = std::conj(epsilon.x()) * epsilon.y() - std::conj(epsilon.y()) * epsilon.x();
  return (std::complex<double>(0.0, -1.0) * cz).real();
}

double Polarization::axial_overlap() const { return std::norm(epsilon.z()); }

Eigen::Vector3d Geometry::k_direction() const {
  const double t = theta_kz_deg * constants::pi / 180.0;
  return {std::sin(t), 0.0, std::cos(t)};
}

Polarization polarization_from_waveplate(double chi, const Eigen::Vector3d& k,
                                         const Eigen::Vector3d& z_hat) {
  if (k.norm() == 0.0 || z_hat.norm() == 0.0)
    throw ValidationError("polarization: zero-length direction vector");
  const Eigen::Vector3d kh = k.normalized();
  Eigen::Vector3d e1 = Eigen::Vector3d::UnitY() - Eigen::Vector3d::UnitY().dot(kh) * kh;
  if (e1.norm() < 1e-8) e1 = Eigen::Vector3d::UnitX() - Eigen::Vector3d::UnitX().dot(kh) * kh;
  e1.normalize();
  const Eigen::Vector3d e2 = kh.cross(e1);
  Polarization p;
  p.epsilon = std::cos(chi) * e1.cast<std::complex<double>>() +
              std::complex<double>(0.0, std::sin(chi)) * e2.cast<std::complex<double>>();
  // The helicity is measured against z_hat; rotate the frame if it is not z.
  if ((z_hat.normalized() - Eigen::Vector3d::UnitZ()).norm() > 1e-15) {
    const Eigen::Matrix3d R =
        Eigen::Quaterniond::FromTwoVectors(z_hat.normalized(), Eigen::Vector3d::UnitZ())
            .toRotationMatrix();
    p.epsilon = R.cast<std::complex<double>>() * p.epsilon;
  }
  return p;
}

double LaserField::frequency_MHz() const { return constants::wavelength_to_MHz(wavelength_nm); }

void LaserField::validate() const {
  if (!(wavelength_nm > 0.0)) throw ValidationError("laser: wavelength must be > 0");
  if (!(intensity_W_m2 >= 0.0)) throw ValidationError("laser: intensity must be >= 0");
  if (std::abs(pol.epsilon.norm() - 1.0) > 1e-9)
    throw ValidationError("laser: polarization vector is not normalized");
  if (std::abs(pol.epsilon.dot(k_direction.normalized().cast<std::complex<double>>())) > 1e-9)
    throw ValidationError("laser: polarization is not transverse to k");
}

LaserField laser_with_helicity(double A, double wavelength_nm, double intensity_W_m2,
                               const Geometry& geometry) {
  const Eigen::Vector3d k = geometry.k_direction();
  const double kz = k.z();
  if (!(std::abs(A) <= std::abs(kz) + 1e-15))
    throw ValidationError("helicity " + std::to_string(A) + " not reachable at theta_kz = " +
                          std::to_string(geometry.theta_kz_deg) + " deg");
  const double s = kz == 0.0 ? 0.0 : std::clamp(A / kz, -1.0, 1.0);
  LaserField laser;
  laser.wavelength_nm = wavelength_nm;
  laser.intensity_W_m2 = intensity_W_m2;
  laser.k_direction = k;
  laser.pol = polarization_from_waveplate(0.5 * std::asin(s), k);
  laser.validate();
  return laser;
}

}  // namespace magicpol
