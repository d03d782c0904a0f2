#pragma once

#include <stdexcept>
#include <string>

namespace bhflow {

/// Post-selection density fell below the configured node floor; the
/// velocity ratio is operationally undefined there.
class NodeProximityError : public std::runtime_error {
 public:
  NodeProximityError(std::string what, double density, double floor)
      : std::runtime_error(std::move(what)), density_(density), floor_(floor) {}
  double density() const { return density_; }
  double floor() const { return floor_; }

 private:
  double density_;
  double floor_;
};

/// Successive quadrature refinements disagreed above tolerance.
class NonConvergenceError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// More than the allowed fraction of density mass lies outside the
/// configured sampling window.
class WindowTooSmallError : public std::runtime_error {
 public:
  WindowTooSmallError(std::string what, double outside_fraction)
      : std::runtime_error(std::move(what)), outside_fraction_(outside_fraction) {}
  double outside_fraction() const { return outside_fraction_; }

 private:
  double outside_fraction_;
};

/// Configuration parse/validation failure; carries the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, std::string what)
      : std::runtime_error(std::move(what)), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

}  // namespace bhflow
