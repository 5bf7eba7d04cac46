// Copyright 2026 conecert contributors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <stdexcept>
#include <string>

namespace conecert {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input has the wrong shape for the cone/problem it is paired with.
struct DimensionError : Error {
  explicit DimensionError(const std::string& msg) : Error(msg) {}
};

// A documented precondition does not hold (infeasible point, Y outside ri, ...).
struct PreconditionError : Error {
  explicit PreconditionError(const std::string& msg) : Error(msg) {}
};

// Evaluation outside a validity region (reduction radius, spectral gap).
struct RadiusError : Error {
  explicit RadiusError(const std::string& msg) : Error(msg) {}
};

// A numeric procedure could not certify its result (underflow, stall, residual).
struct NumericError : Error {
  explicit NumericError(const std::string& msg) : Error(msg) {}
};

// Expression evaluated outside its domain (log of nonpositive, ...).
struct EvalError : Error {
  explicit EvalError(const std::string& msg) : Error(msg) {}
};

// Problem file / expression text could not be parsed.
struct ParseError : Error {
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

}  // namespace conecert
