#ifndef KELVINASYM_ERRORS_HPP
#define KELVINASYM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace kelvinasym {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define KELVINASYM_ERROR(Name)                    \
  class Name : public Error {                     \
   public:                                        \
    explicit Name(const std::string& what)        \
        : Error(#Name ": " + what) {}             \
  }

KELVINASYM_ERROR(ParseError);
KELVINASYM_ERROR(ValueError);
KELVINASYM_ERROR(DimensionError);
KELVINASYM_ERROR(SolveError);
KELVINASYM_ERROR(IndexError);
KELVINASYM_ERROR(MismatchError);
KELVINASYM_ERROR(ArityError);
KELVINASYM_ERROR(AdmissibilityError);
KELVINASYM_ERROR(ZeroPointError);
KELVINASYM_ERROR(DomainError);
KELVINASYM_ERROR(InsufficientDataError);
KELVINASYM_ERROR(ConditioningError);

#undef KELVINASYM_ERROR

}  // namespace kelvinasym

#endif
