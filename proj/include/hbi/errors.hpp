#pragma once

#include <stdexcept>
#include <string>

namespace hbi {

// Argument outside the mathematical domain of an operation (bad slope,
// evaluation past a singularity, malformed band, ...).
class domain_error : public std::domain_error {
public:
  explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

// |s| > 1 where a kinetic density or flux is undefined. Carries the cell
// index when the slope came from a profile (-1 otherwise).
class slope_error : public domain_error {
public:
  slope_error(const std::string& what, double slope, long cell = -1)
      : domain_error(what), slope(slope), cell(cell) {}
  double slope;
  long cell;
};

// Evaluation exactly on a pole (flux at |s| = 1, conserved energy at a
// turning point, ...).
class singularity_error : public domain_error {
public:
  explicit singularity_error(const std::string& what) : domain_error(what) {}
};

// Constructor argument that violates the advertised contract of a family
// (negative amplitude, regularization index < 2, eps outside (0,1), ...).
class parameter_error : public std::invalid_argument {
public:
  explicit parameter_error(const std::string& what)
      : std::invalid_argument(what) {}
};

// Operation that requires a uniform grid was handed a non-uniform one.
class unsupported_grid_error : public std::invalid_argument {
public:
  explicit unsupported_grid_error(const std::string& what)
      : std::invalid_argument(what) {}
};

// A profile surgery (excision, odd reflection) whose junction values do not
// line up within tolerance.
class surgery_error : public std::runtime_error {
public:
  explicit surgery_error(const std::string& what) : std::runtime_error(what) {}
};

// The potential vanishes strictly inside (-1,1): the connection problem
// degenerates and the time map is no longer finite across that point.
class degenerate_well_error : public std::runtime_error {
public:
  explicit degenerate_well_error(const std::string& what)
      : std::runtime_error(what) {}
};

// Invalid run configuration (solver parameters, CLI config file).
class config_error : public std::invalid_argument {
public:
  explicit config_error(const std::string& what)
      : std::invalid_argument(what) {}
};

// Unreadable, unwritable, or malformed data file.
class io_error : public std::runtime_error {
public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hbi
