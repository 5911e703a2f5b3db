#pragma once

#include <stdexcept>
#include <string>

namespace sbp {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SizeError : public Error { public: using Error::Error; };
class ParameterError : public Error { public: using Error::Error; };
class ParseError : public Error { public: using Error::Error; };
class VersionError : public Error { public: using Error::Error; };
class InfeasibleError : public Error { public: using Error::Error; };
class NumericalRankError : public Error { public: using Error::Error; };
class DerivationError : public Error { public: using Error::Error; };
class DomainError : public Error { public: using Error::Error; };
class DivergenceError : public Error { public: using Error::Error; };
class StiffnessError : public Error { public: using Error::Error; };
class SingularityError : public Error { public: using Error::Error; };
class InvalidStateError : public Error { public: using Error::Error; };

} // namespace sbp
