#pragma once

namespace magicpol {

/// Far-field half-angle divergence atan((w - w0) / (2 f)) of a beam whose
/// radius grows from w0 to w behind a lens of focal length f (metres, radians).
double beam_divergence(double w_m, double w0_m, double f_m);

}  // namespace magicpol
