#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tmncell {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input description (network spec, robot model).
class SpecError : public Error {
public:
  using Error::Error;
};

/// Caller violated an operation precondition (wrong sizes, short horizon).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// An impulse would drive a stock or an in-flight mass below zero.
class NegativeMass : public Error {
public:
  enum class Where { Vertex, Arc };

  NegativeMass(Where where, int id, std::uint64_t n, std::int64_t attempted);

  Where where() const noexcept { return where_; }
  int id() const noexcept { return id_; }
  std::uint64_t sample() const noexcept { return n_; }

private:
  Where where_;
  int id_;
  std::uint64_t n_;
};

class MissingSchedule : public Error {
public:
  using Error::Error;
};

class UnknownVertex : public Error {
public:
  explicit UnknownVertex(int id);
};

/// B(q) failed a Cholesky factorization.
class SingularInertia : public Error {
public:
  using Error::Error;
};

class NonFinite : public Error {
public:
  using Error::Error;
};

} // namespace tmncell
