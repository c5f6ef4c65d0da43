#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dscrypt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RingMismatch : public Error {
 public:
  RingMismatch() : Error("operands belong to different rings") {}
};

class NotAUnit : public Error {
 public:
  explicit NotAUnit(const std::string& what) : Error("not a unit: " + what) {}
};

class InvalidRing : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class NotInvertible : public Error {
 public:
  using Error::Error;
};

class PrimitiveSearchFailed : public Error {
 public:
  using Error::Error;
};

class NotBijective : public Error {
 public:
  using Error::Error;
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

class DegreeBlowup : public Error {
 public:
  DegreeBlowup(int degree, int cap)
      : Error("degree blowup: intermediate degree " + std::to_string(degree) +
              " exceeds cap " + std::to_string(cap)),
        degree_(degree),
        cap_(cap) {}
  int degree() const { return degree_; }
  int cap() const { return cap_; }

 private:
  int degree_;
  int cap_;
};

class NotInvertibleLastColour : public Error {
 public:
  using Error::Error;
};

class DegreeExceeded : public Error {
 public:
  DegreeExceeded(std::size_t power, int degree, int claimed)
      : Error("degree exceeded at power " + std::to_string(power) + ": " +
              std::to_string(degree) + " > " + std::to_string(claimed)),
        power_(power),
        degree_(degree) {}
  std::size_t power() const { return power_; }
  int degree() const { return degree_; }

 private:
  std::size_t power_;
  int degree_;
};

class UnreachableDensity : public Error {
 public:
  UnreachableDensity(const std::string& what, std::size_t lo, std::size_t hi)
      : Error(what), lo_(lo), hi_(hi) {}
  std::size_t achievable_low() const { return lo_; }
  std::size_t achievable_high() const { return hi_; }

 private:
  std::size_t lo_;
  std::size_t hi_;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

class CollisionMismatch : public Error {
 public:
  using Error::Error;
};

class NonCommutingCheckFailed : public Error {
 public:
  using Error::Error;
};

class MessageCapExceeded : public Error {
 public:
  MessageCapExceeded(std::uint64_t counter, std::uint64_t cap)
      : Error("message cap exceeded: message " + std::to_string(counter + 1) +
              " > cap " + std::to_string(cap)) {}
};

class ExponentOutOfRange : public Error {
 public:
  using Error::Error;
};

class InverseUnavailable : public Error {
 public:
  using Error::Error;
};

}  // namespace dscrypt
