#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adamo/vecmath.hpp"

namespace adamo {

struct PairExample {
  int a = 0;
  int b = 0;
  int label = 0;
};

// All p^2 ordered pairs (a, b) with label (a+b) mod p, shuffled by the seeded
// generator and split at round(split_fraction * p^2). Train and test
// partition the grid exactly.
struct ModularDataset {
  int p = 0;
  double split_fraction = 0.0;
  std::uint64_t seed = 0;
  std::vector<PairExample> train;
  std::vector<PairExample> test;
};

ModularDataset gen_modular_addition(int p, double split_fraction,
                                    std::uint64_t seed);

// Rows "a b label split" with split in {train, test}.
void write_dataset_text(const ModularDataset& ds, const std::string& path);

// Concatenated one-hot encoding of (a, b): a 2p-wide row per example.
Matrix encode_modular(const std::vector<PairExample>& examples, int p);
std::vector<int> modular_targets(const std::vector<PairExample>& examples);

// Interleaved two-arcs binary classification set. Class 0 sits on the unit
// upper arc, class 1 on a shifted lower arc; noise is i.i.d. Gaussian per
// coordinate. Classes stay balanced to within one point.
struct Toy2dDataset {
  Matrix X;  // n x 2
  std::vector<int> y;
  std::uint64_t seed = 0;
};

Toy2dDataset gen_two_clusters_2d(int n, double noise, std::uint64_t seed);

// Rows "x y label split" (single split: train).
void write_dataset_text(const Toy2dDataset& ds, const std::string& path);

}  // namespace adamo
