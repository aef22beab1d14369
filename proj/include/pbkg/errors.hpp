#ifndef PBKG_ERRORS_HPP
#define PBKG_ERRORS_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace pbkg {

// Base class for everything thrown by this library.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

class parameter_error : public error {
public:
    using error::error;
};

class index_error : public error {
public:
    using error::error;
};

class dimension_error : public error {
public:
    using error::error;
};

class memory_budget_error : public error {
public:
    using error::error;
};

class non_normalizable_error : public error {
public:
    using error::error;
};

class singular_frequency_error : public error {
public:
    using error::error;
};

class truncation_budget_error : public error {
public:
    using error::error;
};

class truncation_edge_error : public error {
public:
    using error::error;
};

class aliasing_error : public error {
public:
    using error::error;
};

class convergence_error : public error {
public:
    using error::error;
};

class insufficient_data_error : public error {
public:
    using error::error;
};

class fit_error : public error {
public:
    using error::error;
};

class coverage_error : public error {
public:
    using error::error;
};

class construction_error : public error {
public:
    using error::error;
};

class internal_consistency_error : public error {
public:
    using error::error;
};

class config_error : public error {
public:
    using error::error;
};

class usage_error : public error {
public:
    using error::error;
};

// A divergent integral is never returned as a number.  The error carries
// the coefficient of the logarithmically divergent piece (so callers can
// run a cutoff scan) and, when one exists, the finite remainder.
class divergence_error : public error {
public:
    divergence_error(const std::string& msg, double log_slope_coefficient,
                     std::complex<double> finite_part = {0.0, 0.0},
                     bool has_finite_part = false)
        : error(msg),
          log_slope_coefficient_(log_slope_coefficient),
          finite_part_(finite_part),
          has_finite_part_(has_finite_part) {}

    double log_slope_coefficient() const noexcept { return log_slope_coefficient_; }
    std::complex<double> finite_part() const noexcept { return finite_part_; }
    bool has_finite_part() const noexcept { return has_finite_part_; }

private:
    double log_slope_coefficient_;
    std::complex<double> finite_part_;
    bool has_finite_part_;
};

} // namespace pbkg

#endif
