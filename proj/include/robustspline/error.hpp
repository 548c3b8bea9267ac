#pragma once

#include <stdexcept>
#include <string>

namespace robustspline {

// Every failure raised by the library derives from Error so callers can
// catch the whole family; the subclasses map onto distinct failure causes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DesignError : public Error { using Error::Error; };
class InputError : public Error { using Error::Error; };
class NumericalError : public Error { using Error::Error; };
class DensityError : public Error { using Error::Error; };
class BudgetError : public Error { using Error::Error; };
class LogicError : public Error { using Error::Error; };
class ConstructionError : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };
class IoError : public Error { using Error::Error; };

} // namespace robustspline
