// Copyright 2026 conecert contributors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "conecert/linalg.hpp"

namespace conecert {

// All randomized procedures derive their generator from one root seed plus a
// purpose tag, so a whole run is reproducible from the single --seed value.
std::uint64_t derive_seed(std::uint64_t root, std::string_view tag, std::uint64_t index = 0);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  Rng(std::uint64_t root, std::string_view tag, std::uint64_t index = 0)
      : gen_(derive_seed(root, tag, index)) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
  int uniform_int(int lo, int hi) {  // inclusive
    return std::uniform_int_distribution<int>(lo, hi)(gen_);
  }
  Vec normal_vec(int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
  }
  Vec unit_vec(int n) {
    Vec v = normal_vec(n);
    double nn = v.norm();
    while (nn < 1e-12) {
      v = normal_vec(n);
      nn = v.norm();
    }
    return v / nn;
  }
  // Haar-distributed n x r matrix with orthonormal columns.
  Mat haar_orthonormal(int n, int r);

  std::mt19937_64& raw() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

// Deterministic low-discrepancy points in the n-ball of given radius around
// center: Halton sequence in the cube, rejected to the ball, with a seeded
// index offset.
std::vector<Vec> halton_ball(const Vec& center, double radius, int count,
                             std::uint64_t seed);

}  // namespace conecert
