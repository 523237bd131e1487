#pragma once

#include <stdexcept>
#include <string>

namespace rsv {

// Base for every error raised by the library. `category()` groups errors for
// the command-line exit codes.
class Error : public std::runtime_error {
public:
    enum class Category { Config, Domain, Convergence, Verification };

    Error(Category category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    Category category() const { return category_; }

private:
    Category category_;
};

#define RSV_DEFINE_ERROR(Name, Cat)                                       \
    class Name : public Error {                                           \
    public:                                                               \
        explicit Name(const std::string& what) : Error(Category::Cat, what) {} \
    };

RSV_DEFINE_ERROR(InvalidInput, Config)
RSV_DEFINE_ERROR(ConfigError, Config)
RSV_DEFINE_ERROR(BadCase, Config)
RSV_DEFINE_ERROR(SingularMetric, Domain)
RSV_DEFINE_ERROR(SignatureMismatch, Domain)
RSV_DEFINE_ERROR(DifferentiationFailure, Domain)
RSV_DEFINE_ERROR(DimensionTooSmall, Domain)
RSV_DEFINE_ERROR(BadTetrad, Domain)
RSV_DEFINE_ERROR(WrongSignature, Domain)
RSV_DEFINE_ERROR(OutOfDomain, Domain)
RSV_DEFINE_ERROR(NoConvergence, Convergence)
RSV_DEFINE_ERROR(SingularJacobian, Convergence)

#undef RSV_DEFINE_ERROR

}  // namespace rsv
