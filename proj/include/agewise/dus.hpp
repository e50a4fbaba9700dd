#pragma once

#include "agewise/distribution.hpp"

namespace agewise {

/// DUS transform of a baseline (f, F):
///   g(x) = f(x) e^{F(x)} / (e - 1),   G(x) = (e^{F(x)} - 1) / (e - 1).
/// The result is an ordinary Model; its family is "dus-<baseline>".
Model dus(const Model& base);

/// Generalized DUS transform with exponent alpha > 0:
///   g(x) = alpha f F^{alpha-1} e^{F^alpha} / (e - 1),  G(x) = (e^{F^alpha} - 1) / (e - 1).
/// gdus(base, 1) coincides with dus(base).
Model gdus(const Model& base, double alpha);

/// DUS transform of the exponential-Weibull mixture, evaluated from its own
/// closed form rather than through the generic combinator.
Model dus_ew(double alpha, double lambda);

} // namespace agewise
