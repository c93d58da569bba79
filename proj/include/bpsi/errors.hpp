#pragma once

#include <stdexcept>
#include <string>

namespace bpsi {

// Every failure raised by the library derives from Error; kind() gives a
// stable identifier used in structured error records.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

#define BPSI_DECLARE_ERROR(Name, tag)                                  \
    class Name : public Error {                                        \
    public:                                                            \
        using Error::Error;                                            \
        const char* kind() const noexcept override { return tag; }     \
    };

BPSI_DECLARE_ERROR(DomainError, "domain")
BPSI_DECLARE_ERROR(ShapeError, "shape")
BPSI_DECLARE_ERROR(SymmetryError, "symmetry")
BPSI_DECLARE_ERROR(SingularityError, "singularity")
BPSI_DECLARE_ERROR(ConfigError, "config")
BPSI_DECLARE_ERROR(ConsistencyError, "consistency")
BPSI_DECLARE_ERROR(RangeError, "range")
BPSI_DECLARE_ERROR(MetricError, "metric")
BPSI_DECLARE_ERROR(IoError, "io")

#undef BPSI_DECLARE_ERROR

/// Quadrature did not reach its tolerance within the refinement budget.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double estimate, double error_bound)
        : Error(what), estimate_(estimate), error_bound_(error_bound) {}
    const char* kind() const noexcept override { return "accuracy"; }
    double estimate() const noexcept { return estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

}  // namespace bpsi
