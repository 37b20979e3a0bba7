#include "adamo/tasks.hpp"

#include <cmath>
#include <fstream>

#include "adamo/rng.hpp"

namespace adamo {

ModularDataset gen_modular_addition(int p, double split_fraction,
                                    std::uint64_t seed) {
  if (p < 2) throw ConfigError("gen_modular_addition: p must be at least 2");
  if (!(split_fraction > 0.0 && split_fraction < 1.0)) {
    throw ConfigError("gen_modular_addition: split_fraction must be in (0,1)");
  }

  const long total = long(p) * long(p);
  std::vector<PairExample> all;
  all.reserve(std::size_t(total));
  for (int a = 0; a < p; ++a) {
    for (int b = 0; b < p; ++b) {
      all.push_back({a, b, (a + b) % p});
    }
  }

  Rng rng(seed);
  rng.shuffle(all);

  const long n_train = std::llround(split_fraction * double(total));
  ModularDataset ds;
  ds.p = p;
  ds.split_fraction = split_fraction;
  ds.seed = seed;
  ds.train.assign(all.begin(), all.begin() + n_train);
  ds.test.assign(all.begin() + n_train, all.end());
  return ds;
}

void write_dataset_text(const ModularDataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << "a b label split\n";
  for (const auto& e : ds.train) {
    out << e.a << ' ' << e.b << ' ' << e.label << " train\n";
  }
  for (const auto& e : ds.test) {
    out << e.a << ' ' << e.b << ' ' << e.label << " test\n";
  }
}

Matrix encode_modular(const std::vector<PairExample>& examples, int p) {
  Matrix X = Matrix::Zero(Index(examples.size()), 2 * Index(p));
  for (Index i = 0; i < X.rows(); ++i) {
    const auto& e = examples[std::size_t(i)];
    X(i, e.a) = 1.0;
    X(i, Index(p) + e.b) = 1.0;
  }
  return X;
}

std::vector<int> modular_targets(const std::vector<PairExample>& examples) {
  std::vector<int> t;
  t.reserve(examples.size());
  for (const auto& e : examples) t.push_back(e.label);
  return t;
}

Toy2dDataset gen_two_clusters_2d(int n, double noise, std::uint64_t seed) {
  if (n < 4) throw ConfigError("gen_two_clusters_2d: n must be at least 4");
  if (noise < 0.0) throw ConfigError("gen_two_clusters_2d: noise must be >= 0");

  const int n0 = (n + 1) / 2;
  const int n1 = n - n0;
  Toy2dDataset ds;
  ds.seed = seed;
  ds.X.resize(n, 2);
  ds.y.resize(std::size_t(n));

  Rng rng(seed);
  for (int i = 0; i < n0; ++i) {
    const double t = M_PI * double(i) / double(n0 - 1);
    ds.X(i, 0) = std::cos(t) + noise * rng.normal();
    ds.X(i, 1) = std::sin(t) + noise * rng.normal();
    ds.y[std::size_t(i)] = 0;
  }
  for (int i = 0; i < n1; ++i) {
    const double t = M_PI * double(i) / double(n1 - 1);
    ds.X(n0 + i, 0) = 1.0 - std::cos(t) + noise * rng.normal();
    ds.X(n0 + i, 1) = 0.5 - std::sin(t) + noise * rng.normal();
    ds.y[std::size_t(n0 + i)] = 1;
  }
  return ds;
}

void write_dataset_text(const Toy2dDataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << "x y label split\n";
  char buf[64];
  for (Index i = 0; i < ds.X.rows(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g", ds.X(i, 0), ds.X(i, 1));
    out << buf << ' ' << ds.y[std::size_t(i)] << " train\n";
  }
}

}  // namespace adamo
