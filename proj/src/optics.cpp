#include "magicpol/optics.hpp"

#include <cmath>

#include "magicpol/errors.hpp"

namespace magicpol {

double beam_divergence(double w, double w0, double f) {
  if (!(f > 0.0)) throw DomainError("beam_divergence: focal length must be > 0");
  if (!(w0 >= 0.0) || !(w >= w0)) throw DomainError("beam_divergence: need w >= w0 >= 0");
  return std::atan((w - w0) / (2.0 * f));
}

}  // namespace magicpol
