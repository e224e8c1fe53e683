#ifndef DDAE_ERRORS_HPP
#define DDAE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ddae
{

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error
{
public:
    using Error::Error;
};

class SingularPencil : public Error
{
public:
    using Error::Error;
};

/// The subspace split produced by the Wong sequences could not be turned
/// into an invertible transformation; usually a rank misjudgment.
class DecompositionFailure : public Error
{
public:
    using Error::Error;
};

class OutOfDomain : public Error
{
public:
    using Error::Error;
};

class MalformedInput : public Error
{
public:
    using Error::Error;
};

class NotAdmissible : public Error
{
public:
    NotAdmissible(double residual)
        : Error("history is not admissible (residual " +
                std::to_string(residual) + ")"),
          residual_(residual)
    {
    }
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// The restart value x^[i-1](tau) violates the algebraic constraints of
/// segment i.
class InconsistentRestart : public Error
{
public:
    InconsistentRestart(int segment, double residual)
        : Error("inconsistent restart at segment " + std::to_string(segment) +
                " (residual " + std::to_string(residual) + ")"),
          segment_(segment), residual_(residual)
    {
    }
    int segment() const noexcept { return segment_; }
    double residual() const noexcept { return residual_; }

private:
    int segment_;
    double residual_;
};

class CollocationSingular : public Error
{
public:
    using Error::Error;
};

class NotSmoothingType : public Error
{
public:
    using Error::Error;
};

} // namespace ddae

#endif
