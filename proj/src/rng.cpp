// Copyright 2026 conecert contributors
// Licensed under the Apache License, Version 2.0

#include "conecert/rng.hpp"

#include <Eigen/QR>

namespace conecert {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                           41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};

double halton(std::uint64_t index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t root, std::string_view tag, std::uint64_t index) {
  std::uint64_t h = splitmix64(root);
  for (char c : tag) h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
  return splitmix64(h ^ splitmix64(index));
}

Mat Rng::haar_orthonormal(int n, int r) {
  Mat g(n, r);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < r; ++j) g(i, j) = normal();
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(n, r);
  // Fix the sign ambiguity so the sample is a deterministic function of g.
  Mat rfac = q.transpose() * g;
  for (int j = 0; j < r; ++j)
    if (rfac(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

std::vector<Vec> halton_ball(const Vec& center, double radius, int count,
                             std::uint64_t seed) {
  const int n = static_cast<int>(center.size());
  std::vector<Vec> pts;
  pts.reserve(count);
  if (n == 0) {
    for (int i = 0; i < count; ++i) pts.push_back(center);
    return pts;
  }
  const std::uint64_t offset = 16 + (splitmix64(seed) % 8191);
  std::uint64_t idx = offset;
  const int nb = std::min<int>(n, static_cast<int>(sizeof(kPrimes) / sizeof(int)));
  while (static_cast<int>(pts.size()) < count) {
    Vec u(n);
    for (int j = 0; j < n; ++j) {
      // Dimensions past the prime table reuse bases with an index twist.
      const int base = kPrimes[j % nb];
      u[j] = 2.0 * halton(idx + static_cast<std::uint64_t>(j / nb) * 7919ULL, base) - 1.0;
    }
    ++idx;
    if (u.norm() <= 1.0) pts.push_back(center + radius * u);
  }
  return pts;
}

}  // namespace conecert
