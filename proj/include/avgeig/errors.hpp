#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace avgeig {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class ZeroMatrix : public Error {
 public:
  ZeroMatrix() : Error("matrix is identically zero") {}
};

/// An iterative solver hit its iteration cap. `index` is the 1-based
/// eigenpair that failed; `residual` the last residual norm seen.
class NoConvergence : public Error {
 public:
  NoConvergence(std::size_t index, double residual, const std::string& what)
      : Error(what), index_(index), residual_(residual) {}

  std::size_t index() const noexcept { return index_; }
  double residual() const noexcept { return residual_; }

 private:
  std::size_t index_;
  double residual_;
};

/// A single draw of a Monte Carlo average failed to converge.
class DrawFailed : public NoConvergence {
 public:
  DrawFailed(std::size_t draw, const NoConvergence& cause)
      : NoConvergence(cause.index(), cause.residual(),
                      "draw " + std::to_string(draw) + ": " + cause.what()),
        draw_(draw) {}

  std::size_t draw() const noexcept { return draw_; }

 private:
  std::size_t draw_;
};

class AllDrawsFailed : public Error {
 public:
  explicit AllDrawsFailed(std::size_t draws)
      : Error("all " + std::to_string(draws) + " draws failed to converge") {}
};

class DuplicateEigenvalue : public Error {
 public:
  using Error::Error;
};

class OutsidePerturbativeRegime : public Error {
 public:
  explicit OutsidePerturbativeRegime(double ratio)
      : Error("2||E||/d = " + std::to_string(ratio) + " >= 1; expansion undefined"),
        ratio_(ratio) {}

  double ratio() const noexcept { return ratio_; }

 private:
  double ratio_;
};

class InfeasibleSupports : public Error {
 public:
  using Error::Error;
};

class InvalidVn : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class NodeIdOverflow : public Error {
 public:
  using Error::Error;
};

class EmptyGraph : public Error {
 public:
  EmptyGraph() : Error("graph has no nodes") {}
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class ZeroVariance : public Error {
 public:
  ZeroVariance() : Error("rank vector has zero variance") {}
};

}  // namespace avgeig
