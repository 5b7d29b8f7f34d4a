#pragma once

#include <stdexcept>
#include <string>

namespace ksup {

// Process exit code classes used by the CLI: config 2, precondition 3,
// invariant 4, exhaustion 5.
enum class ErrorClass : int {
    Config = 2,
    Precondition = 3,
    Invariant = 4,
    Exhaustion = 5,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorClass cls, const std::string& what)
        : std::runtime_error(what), cls_(cls) {}
    ErrorClass error_class() const { return cls_; }
    int exit_code() const { return static_cast<int>(cls_); }

  private:
    ErrorClass cls_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& w) : Error(ErrorClass::Config, w) {}
};
struct PreconditionError : Error {
    explicit PreconditionError(const std::string& w) : Error(ErrorClass::Precondition, w) {}
};
struct InvariantError : Error {
    explicit InvariantError(const std::string& w) : Error(ErrorClass::Invariant, w) {}
};
struct ExhaustionError : Error {
    explicit ExhaustionError(const std::string& w) : Error(ErrorClass::Exhaustion, w) {}
};

// Named error conditions from the module contracts.
struct NoCoverFineEnough : ExhaustionError {
    explicit NoCoverFineEnough(const std::string& w) : ExhaustionError("NoCoverFineEnough: " + w) {}
};
struct SeparationFailure : ExhaustionError {
    explicit SeparationFailure(const std::string& w) : ExhaustionError("SeparationFailure: " + w) {}
};
struct FamilyExhausted : ExhaustionError {
    explicit FamilyExhausted(const std::string& w) : ExhaustionError("FamilyExhausted: " + w) {}
};
struct FixtureTooCoarse : ExhaustionError {
    explicit FixtureTooCoarse(const std::string& w) : ExhaustionError("FixtureTooCoarse: " + w) {}
};
struct HorizonTooSmall : ExhaustionError {
    explicit HorizonTooSmall(const std::string& w) : ExhaustionError("HorizonTooSmall: " + w) {}
};
struct UnknownBrick : PreconditionError {
    explicit UnknownBrick(const std::string& w) : PreconditionError("UnknownBrick: " + w) {}
};
struct BoundViolation : PreconditionError {
    explicit BoundViolation(const std::string& w) : PreconditionError("BoundViolation: " + w) {}
};
struct ConstraintConflict : PreconditionError {
    explicit ConstraintConflict(const std::string& w) : PreconditionError("ConstraintConflict: " + w) {}
};
struct PreconditionViolated : PreconditionError {
    explicit PreconditionViolated(const std::string& w) : PreconditionError("PreconditionViolated: " + w) {}
};
struct Undecidable : PreconditionError {
    explicit Undecidable(const std::string& w) : PreconditionError("Undecidable: " + w) {}
};
struct WitnessAmbiguity : InvariantError {
    explicit WitnessAmbiguity(const std::string& w) : InvariantError("WitnessAmbiguity: " + w) {}
};
struct ChainCollision : InvariantError {
    explicit ChainCollision(const std::string& w) : InvariantError("ChainCollision: " + w) {}
};

}  // namespace ksup
