#pragma once

#include <stdexcept>
#include <string>

namespace gmc {

/// Domain or precondition failure in a computation (maps to CLI exit 1).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Requested moment is infinite or undefined for the law.
class MomentError : public Error {
public:
    using Error::Error;
};

}  // namespace gmc
