#pragma once

// Calibration constants for the predicted query degree
//     ceil(c1 * t * sqrt(lambda * Gamma) + c2 * sqrt(lambda / Gamma) * log(1/eps)).
// Fitted once by tools/calibrate_degrees over a reference grid of
// (t, lambda, Gamma, eps) against the measured cos+sin composite degrees,
// then frozen here. Regenerate with:  ./calibrate_degrees --write
namespace lowensim::degree_constants {

inline constexpr double c1 = 8.6782;
inline constexpr double c2 = 11.6366;
inline constexpr int version = 1;

}  // namespace lowensim::degree_constants
