#include "tmncell/mass.hpp"

#include <limits>
#include <string>

#include "tmncell/errors.hpp"

namespace tmncell {

Mass::Mass(std::int64_t milligrams) : mg_(milligrams) {
  if (milligrams < 0) {
    throw InvalidArgument("mass must be non-negative, got " + std::to_string(milligrams) + " mg");
  }
}

Mass Mass::operator+(Mass other) const {
  if (mg_ > std::numeric_limits<std::int64_t>::max() - other.mg_) {
    throw InvalidArgument("mass overflow");
  }
  return Mass{mg_ + other.mg_};
}

Mass Mass::operator-(Mass other) const {
  if (other.mg_ > mg_) {
    throw InvalidArgument("mass subtraction below zero: " + std::to_string(mg_) + " - " +
                          std::to_string(other.mg_) + " mg");
  }
  return Mass{mg_ - other.mg_};
}

Mass& Mass::operator+=(Mass other) { return *this = *this + other; }
Mass& Mass::operator-=(Mass other) { return *this = *this - other; }

Mass Mass::operator*(std::int64_t k) const {
  if (k < 0) throw InvalidArgument("mass scaled by a negative factor");
  if (k != 0 && mg_ > std::numeric_limits<std::int64_t>::max() / k) throw InvalidArgument("mass overflow");
  return Mass{mg_ * k};
}

std::ostream& operator<<(std::ostream& os, Mass m) { return os << m.mg() << " mg"; }

NegativeMass::NegativeMass(Where where, int id, std::uint64_t n, std::int64_t attempted)
    : Error(std::string(where == Where::Vertex ? "vertex " : "arc ") + std::to_string(id) +
            " would hold " + std::to_string(attempted) + " mg after the impulses at n = " +
            std::to_string(n) + " (infeasible schedule)"),
      where_(where), id_(id), n_(n) {}

UnknownVertex::UnknownVertex(int id) : Error("unknown vertex id " + std::to_string(id)) {}

} // namespace tmncell
