#pragma once

#include <cmath>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gtd/systems.hpp"

namespace gtd::test {

// Sampling boxes that sit inside each catalog system's domain.
inline std::vector<std::pair<double, double>> sample_box(const std::string& id) {
  static const std::map<std::string, std::vector<std::pair<double, double>>> boxes{
      {"ideal_s", {{0.5, 5}, {0.5, 5}}}, {"ideal_u", {{-1, 3}, {0.5, 5}}}, {"ideal_F", {{0.5, 3}, {0.5, 5}}},
      {"ideal_g", {{0.5, 3}, {0.5, 3}}}, {"vdw_s", {{0.5, 5}, {1.5, 6}}},  {"vdw_u", {{-1, 3}, {1.5, 6}}},
      {"vdw_F", {{0.5, 3}, {1.5, 6}}},   {"ising_f", {{0.5, 5}, {0.2, 2}}}, {"chap_s", {{0.5, 5}, {0.5, 5}}},
      {"chap_u", {{2, 5}, {0.5, 2}}}};
  return boxes.at(id);
}

inline std::vector<Point> random_points(const SystemSpec& spec, std::size_t n, unsigned seed = 12345) {
  std::mt19937_64 rng(seed);
  const auto box = sample_box(spec.id);
  std::vector<Point> out;
  while (out.size() < n) {
    Point p;
    for (const auto& [lo, hi] : box) p.push_back(std::uniform_real_distribution<double>(lo, hi)(rng));
    if (domain_check(spec, p).empty()) out.push_back(std::move(p));
  }
  return out;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace gtd::test
