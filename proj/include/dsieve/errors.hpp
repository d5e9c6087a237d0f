#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dsieve {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameters : public Error {
 public:
  using Error::Error;
};

/// An operation needs the planted shift but the instance was loaded blind.
class MissingGroundTruth : public Error {
 public:
  using Error::Error;
};

/// The dense circuit backend would exceed the configured qubit cap.
class BackendTooLarge : public Error {
 public:
  BackendTooLarge(int qubits, int cap)
      : Error("circuit needs " + std::to_string(qubits) + " qubits, cap is " +
              std::to_string(cap)),
        qubits_(qubits),
        cap_(cap) {}
  int qubits() const { return qubits_; }
  int cap() const { return cap_; }

 private:
  int qubits_;
  int cap_;
};

class UnknownRegister : public Error {
 public:
  explicit UnknownRegister(const std::string& name) : Error("unknown register '" + name + "'") {}
};

class WidthMismatch : public Error {
 public:
  using Error::Error;
};

class ModulusMismatch : public Error {
 public:
  using Error::Error;
};

class NotSievedToTarget : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check (fidelity, uncomputation, invariant) failed.
class VerificationFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace dsieve
