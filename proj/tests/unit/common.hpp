#pragma once

#include <doctest.h>

#include <cmath>
#include <random>
#include <string_view>

#include "dunkl/errors.hpp"
#include "dunkl/types.hpp"

// Silences library warnings for the lifetime of the object.
struct QuietWarnings {
  dunkl::WarningHandler previous;
  QuietWarnings() : previous(dunkl::set_warning_handler([](std::string_view) {})) {}
  ~QuietWarnings() { dunkl::set_warning_handler(previous); }
};

inline dunkl::Vec random_vec(std::mt19937_64& g, int n, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  dunkl::Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = d(g);
  return v;
}
