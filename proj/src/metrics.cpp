#include "kiva/metrics.hpp"

#include "kiva/error.hpp"

namespace kiva {

double rd_metric(double f_a, double f_b) {
    if (f_b == 0.0) fail(ErrorKind::invalid_input, "relative difference against a zero objective is undefined");
    return (f_a / f_b - 1.0) * 100.0;
}

double of_metric(double n, double sol) {
    if (sol == 0.0) fail(ErrorKind::invalid_input, "orders per visit undefined for zero visits");
    return n / sol;
}

} // namespace kiva
