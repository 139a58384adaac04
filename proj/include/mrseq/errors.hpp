#pragma once

#include <stdexcept>
#include <string>

namespace mrseq {

// Input does not conform to the instance/plan/assignment schema.
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally valid input that breaks a domain invariant.
class InvariantViolation : public std::runtime_error {
public:
    explicit InvariantViolation(const std::string& what) : std::runtime_error(what) {}
};

// A scaled micro-route no longer fits the vehicle capacity.
class InfeasibleDemand : public InvariantViolation {
public:
    explicit InfeasibleDemand(const std::string& what) : InvariantViolation(what) {}
};

// Operation applied to an instance of the wrong case kind.
class WrongCaseKind : public std::logic_error {
public:
    explicit WrongCaseKind(const std::string& what) : std::logic_error(what) {}
};

// Assignment has a non-integral value on a binary variable.
class FractionalSolution : public std::runtime_error {
public:
    explicit FractionalSolution(const std::string& what) : std::runtime_error(what) {}
};

// Assignment violates a model constraint beyond tolerance.
class ConstraintViolation : public std::runtime_error {
public:
    explicit ConstraintViolation(const std::string& what) : std::runtime_error(what) {}
};

// Active arcs do not form depot-anchored walks.
class DisconnectedTour : public std::runtime_error {
public:
    explicit DisconnectedTour(const std::string& what) : std::runtime_error(what) {}
};

// Two model entities would share one export name.
class NameCollision : public std::runtime_error {
public:
    explicit NameCollision(const std::string& what) : std::runtime_error(what) {}
};

// A plan references a stop the instance does not define.
class UnknownStop : public std::runtime_error {
public:
    explicit UnknownStop(const std::string& what) : std::runtime_error(what) {}
};

// Plan-level coverage errors.
class DuplicateMicroRoute : public std::runtime_error {
public:
    explicit DuplicateMicroRoute(const std::string& what) : std::runtime_error(what) {}
};

class MissingMicroRoute : public std::runtime_error {
public:
    explicit MissingMicroRoute(const std::string& what) : std::runtime_error(what) {}
};

// Greedy construction cannot place a micro-route that is infeasible alone.
class ConstructionFailed : public std::runtime_error {
public:
    explicit ConstructionFailed(const std::string& what) : std::runtime_error(what) {}
};

// Brute-force enumeration refused: instance too large.
class TooLarge : public std::logic_error {
public:
    explicit TooLarge(const std::string& what) : std::logic_error(what) {}
};

// percent_diff with a zero baseline.
class DivisionByZero : public std::domain_error {
public:
    explicit DivisionByZero(const std::string& what) : std::domain_error(what) {}
};

// Aggregation over a shift result that is not feasible.
class InfeasibleInput : public std::runtime_error {
public:
    explicit InfeasibleInput(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mrseq
