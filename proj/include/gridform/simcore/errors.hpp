#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gridform {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A state magnitude crossed the divergence threshold during integration.
class NumericalDivergence : public Error {
 public:
  NumericalDivergence(double time, std::string detail)
      : Error("numerical divergence at t=" + std::to_string(time) + ": " + detail),
        time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

/// An energized island has no device able to form its voltage.
class IslandWithoutFormingSource : public Error {
 public:
  explicit IslandWithoutFormingSource(std::vector<std::string> buses)
      : Error(describe(buses)), buses_(std::move(buses)) {}
  const std::vector<std::string>& buses() const { return buses_; }

 private:
  static std::string describe(const std::vector<std::string>& buses) {
    std::string s = "island without forming source:";
    for (const auto& b : buses) s += " " + b;
    return s;
  }
  std::vector<std::string> buses_;
};

class SingularNetwork : public Error {
 public:
  using Error::Error;
};

/// The algebraic network iteration failed to converge (voltage collapse).
class NonConvergence : public Error {
 public:
  using Error::Error;
};

class SequenceViolation : public Error {
 public:
  using Error::Error;
};

class UnknownId : public Error {
 public:
  explicit UnknownId(const std::string& id) : Error("unknown id: " + id) {}
};

/// Carries every problem found while validating an input, not just the first.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> problems)
      : Error(join(problems)), problems_(std::move(problems)) {}
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& p) {
    std::string s;
    for (const auto& x : p) {
      if (!s.empty()) s += "; ";
      s += x;
    }
    return s;
  }
  std::vector<std::string> problems_;
};

}  // namespace gridform
