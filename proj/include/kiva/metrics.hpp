#pragma once

#include <cstddef>

namespace kiva {

/// Relative difference in percent: (f_a / f_b - 1) * 100. Throws invalid_input
/// when f_b is zero.
double rd_metric(double f_a, double f_b);

/// Orders fulfilled per rack visit: n / sol. Throws invalid_input when sol is zero.
double of_metric(double n, double sol);

} // namespace kiva
