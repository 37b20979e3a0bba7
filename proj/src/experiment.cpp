#include "adamo/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "adamo/checkpoint.hpp"
#include "adamo/metrics.hpp"
#include "adamo/mlp.hpp"
#include "adamo/objectives.hpp"
#include "adamo/tasks.hpp"

namespace adamo {

namespace {

namespace fs = std::filesystem;

// Stream ids for derive_seed; fixed so artifacts reproduce across versions.
constexpr std::uint64_t kStreamInit = 1;
constexpr std::uint64_t kStreamShuffle = 2;
constexpr std::uint64_t kStreamLandscape = 3;

struct ClassificationData {
  int in_dim = 0;
  int out_dim = 0;
  long n_train = 0;
  // Fills the batch design matrix and targets for the given train indices.
  std::function<void(const std::vector<long>&, Matrix*, std::vector<int>*)>
      gather;
  Matrix test_X;
  std::vector<int> test_y;
};

ClassificationData make_grokking_data(const ExperimentConfig& cfg) {
  auto ds = std::make_shared<ModularDataset>(
      gen_modular_addition(cfg.p, cfg.split_fraction, cfg.seed));
  if (cfg.export_data) {
    write_dataset_text(*ds, (fs::path(cfg.out_dir) / "dataset.txt").string());
  }
  ClassificationData data;
  data.in_dim = 2 * cfg.p;
  data.out_dim = cfg.p;
  data.n_train = long(ds->train.size());
  data.test_X = encode_modular(ds->test, cfg.p);
  data.test_y = modular_targets(ds->test);
  const int p = cfg.p;
  data.gather = [ds, p](const std::vector<long>& idx, Matrix* X,
                        std::vector<int>* y) {
    std::vector<PairExample> batch;
    batch.reserve(idx.size());
    for (long i : idx) batch.push_back(ds->train[std::size_t(i)]);
    *X = encode_modular(batch, p);
    *y = modular_targets(batch);
  };
  return data;
}

ClassificationData make_toy2d_data(const ExperimentConfig& cfg) {
  auto ds = std::make_shared<Toy2dDataset>(
      gen_two_clusters_2d(cfg.n_points, cfg.noise, cfg.seed));
  if (cfg.export_data) {
    write_dataset_text(*ds, (fs::path(cfg.out_dir) / "dataset.txt").string());
  }
  ClassificationData data;
  data.in_dim = 2;
  data.out_dim = 2;
  data.n_train = ds->X.rows();
  data.test_X = ds->X;
  data.test_y = ds->y;
  data.gather = [ds](const std::vector<long>& idx, Matrix* X,
                     std::vector<int>* y) {
    X->resize(Index(idx.size()), 2);
    y->resize(idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) {
      X->row(Index(r)) = ds->X.row(idx[r]);
      (*y)[r] = ds->y[std::size_t(idx[r])];
    }
  };
  return data;
}

void write_summary(const RunSummary& summary, const ExperimentConfig& cfg) {
  std::ofstream out(fs::path(cfg.out_dir) / "summary.json");
  if (!out) throw ConfigError("cannot write summary.json in " + cfg.out_dir);
  out << summary.to_json(cfg).dump(2) << "\n";
}

void save_run_checkpoint(RunSummary& summary, const ExperimentConfig& cfg,
                         const std::vector<ParamBlock>& blocks,
                         Optimizer& optim, const Rng& shuffle_rng,
                         long epochs_completed) {
  if (!cfg.save_checkpoint) return;
  Checkpoint ck;
  ck.config_text = cfg.to_text();
  ck.optimizer = cfg.optimizer;
  ck.blocks = blocks;
  ck.states = optim.states();
  ck.rng_state = shuffle_rng.state();
  ck.epochs_completed = epochs_completed;
  const auto path = (fs::path(cfg.out_dir) / "checkpoint.bin").string();
  ck.save(path);
  summary.checkpoint_path = path;
}

void fill_final_norms(RunSummary& summary,
                      const std::vector<ParamBlock>& blocks) {
  double total_sq = 0.0;
  for (const auto& b : blocks) {
    const double n2 = norm2(b.values);
    summary.final_norms[b.name] = std::sqrt(n2);
    total_sq += n2;
  }
  summary.final_norm_total = std::sqrt(total_sq);
}

RunSummary run_classification(const ExperimentConfig& cfg) {
  ClassificationData data = cfg.task == TaskKind::kGrokking
                                ? make_grokking_data(cfg)
                                : make_toy2d_data(cfg);

  MlpModel model(data.in_dim, cfg.hidden, data.out_dim);
  Rng init_rng(derive_seed(cfg.seed, kStreamInit));
  model.init_kaiming(init_rng);

  Optimizer optim(cfg.optimizer, cfg.opt);
  optim.attach(model.blocks());
  Rng shuffle_rng(derive_seed(cfg.seed, kStreamShuffle));

  std::vector<std::string> block_names;
  for (const auto& b : model.blocks()) block_names.push_back(b.name);
  MetricsWriter writer((fs::path(cfg.out_dir) / "metrics.csv").string(),
                       block_names);

  RunSummary summary;
  summary.metrics_path = writer.path();

  auto eval_test = [&]() {
    return accuracy(model.forward(data.test_X), data.test_y);
  };
  summary.initial_test_acc = eval_test();
  summary.final_test_acc = summary.initial_test_acc;

  std::vector<std::pair<long, double>> acc_series;
  const std::size_t n_blocks = model.blocks().size();
  long epochs_done = 0;

  try {
    std::vector<long> order(std::size_t(data.n_train));
    for (long i = 0; i < data.n_train; ++i) order[std::size_t(i)] = i;

    Matrix batch_X;
    std::vector<int> batch_y;
    MlpModel::Cache cache;

    for (long epoch = 1; epoch <= cfg.epochs && !summary.diverged; ++epoch) {
      shuffle_rng.shuffle(order);

      double loss_sum = 0.0, correct_sum = 0.0;
      long sample_count = 0, steps = 0;
      double grad_norm_sum = 0.0;
      std::vector<double> g_norm_sum(n_blocks, 0.0);
      std::vector<double> dw_rho_sq(n_blocks, 0.0), dw_theta_sq(n_blocks, 0.0),
          dw_total_sq(n_blocks, 0.0);
      std::vector<StepInfo> last_infos;

      for (long start = 0; start < data.n_train; start += cfg.batch_size) {
        const long stop = std::min(start + cfg.batch_size, data.n_train);
        const std::vector<long> idx(order.begin() + start,
                                    order.begin() + stop);
        data.gather(idx, &batch_X, &batch_y);

        const Matrix logits = model.forward(batch_X, &cache);
        const LossGrad lg = cross_entropy_with_grad(logits, batch_y);
        if (!std::isfinite(lg.loss) || lg.loss > cfg.divergence_threshold) {
          summary.diverged = true;
          break;
        }
        const double batch_n = double(stop - start);
        loss_sum += lg.loss * batch_n;
        correct_sum += accuracy(logits, batch_y) * batch_n;
        sample_count += stop - start;

        const auto grads = model.backward(cache, lg.dlogits);
        const auto infos = optim.step(model.blocks(), grads);

        double global_sq = 0.0;
        for (std::size_t b = 0; b < n_blocks; ++b) {
          const double g2 = norm2(grads[b]);
          global_sq += g2;
          g_norm_sum[b] += std::sqrt(g2);
          dw_rho_sq[b] += infos[b].delta_rho_norm * infos[b].delta_rho_norm;
          dw_theta_sq[b] +=
              infos[b].delta_theta_norm * infos[b].delta_theta_norm;
          dw_total_sq[b] +=
              infos[b].delta_total_norm * infos[b].delta_total_norm;
          if (infos[b].lr_capped) ++summary.radial_lr_cap_hits;
        }
        grad_norm_sum += std::sqrt(global_sq);
        ++steps;
        last_infos = infos;
      }
      if (summary.diverged) break;
      epochs_done = epoch;

      if (epoch % cfg.eval_every == 0 || epoch == cfg.epochs) {
        MetricsRecord rec;
        rec.epoch = epoch;
        rec.train_loss = sample_count > 0 ? loss_sum / double(sample_count) : 0.0;
        rec.train_acc =
            sample_count > 0 ? correct_sum / double(sample_count) : 0.0;
        rec.test_acc = eval_test();
        rec.grad_norm_global = steps > 0 ? grad_norm_sum / double(steps) : 0.0;
        double eta_sum = 0.0, tau_sum = 0.0;
        for (const auto& info : last_infos) {
          eta_sum += info.eta_rho_t;
          tau_sum += info.tau;
        }
        if (!last_infos.empty()) {
          rec.eta_rho_t = eta_sum / double(last_infos.size());
          rec.tau = tau_sum / double(last_infos.size());
        }
        rec.blocks.resize(n_blocks);
        for (std::size_t b = 0; b < n_blocks; ++b) {
          rec.blocks[b].w_norm = std::sqrt(norm2(model.blocks()[b].values));
          rec.blocks[b].g_norm =
              steps > 0 ? g_norm_sum[b] / double(steps) : 0.0;
          rec.blocks[b].dw_rho = std::sqrt(dw_rho_sq[b]);
          rec.blocks[b].dw_theta = std::sqrt(dw_theta_sq[b]);
          rec.blocks[b].dw_total = std::sqrt(dw_total_sq[b]);
        }
        writer.append(rec);
        acc_series.emplace_back(epoch, rec.test_acc);
        summary.final_test_acc = rec.test_acc;
        summary.final_train_acc = rec.train_acc;
        summary.final_train_loss = rec.train_loss;
      }
    }
  } catch (const NumericError&) {
    summary.diverged = true;
  }

  summary.grokking_epoch = grokking_epoch(acc_series, cfg.grok_threshold);
  fill_final_norms(summary, model.blocks());
  save_run_checkpoint(summary, cfg, model.blocks(), optim, shuffle_rng,
                      epochs_done);
  write_summary(summary, cfg);
  return summary;
}

RunSummary run_quadratic(const ExperimentConfig& cfg) {
  std::vector<ParamBlock> blocks(1);
  blocks[0] = {"w", Vector::Constant(cfg.quad_dim, cfg.quad_scale), 2, false};

  Optimizer optim(cfg.optimizer, cfg.opt);
  optim.attach(blocks);
  Rng shuffle_rng(derive_seed(cfg.seed, kStreamShuffle));  // kept for layout parity

  MetricsWriter writer((fs::path(cfg.out_dir) / "metrics.csv").string(),
                       {"w"});
  RunSummary summary;
  summary.metrics_path = writer.path();

  Vector grad;
  summary.initial_test_acc = 0.0;
  long epochs_done = 0;

  try {
    for (long epoch = 1; epoch <= cfg.epochs; ++epoch) {
      const double loss = quadratic_objective(blocks[0].values, grad);
      if (!std::isfinite(loss) || loss > cfg.divergence_threshold) {
        summary.diverged = true;
        break;
      }
      const auto infos = optim.step(blocks, {grad});
      epochs_done = epoch;
      if (infos[0].lr_capped) ++summary.radial_lr_cap_hits;

      if (epoch % cfg.eval_every == 0 || epoch == cfg.epochs) {
        MetricsRecord rec;
        rec.epoch = epoch;
        rec.train_loss = loss;
        rec.grad_norm_global = std::sqrt(norm2(grad));
        rec.eta_rho_t = infos[0].eta_rho_t;
        rec.tau = infos[0].tau;
        rec.blocks.resize(1);
        rec.blocks[0].w_norm = std::sqrt(norm2(blocks[0].values));
        rec.blocks[0].g_norm = rec.grad_norm_global;
        rec.blocks[0].dw_rho = infos[0].delta_rho_norm;
        rec.blocks[0].dw_theta = infos[0].delta_theta_norm;
        rec.blocks[0].dw_total = infos[0].delta_total_norm;
        writer.append(rec);
        summary.final_train_loss = rec.train_loss;
      }
    }
  } catch (const NumericError&) {
    summary.diverged = true;
  }

  fill_final_norms(summary, blocks);
  save_run_checkpoint(summary, cfg, blocks, optim, shuffle_rng, epochs_done);
  write_summary(summary, cfg);
  return summary;
}

}  // namespace

nlohmann::json RunSummary::to_json(const ExperimentConfig& cfg) const {
  nlohmann::json j;
  j["final_test_acc"] = final_test_acc;
  j["final_train_acc"] = final_train_acc;
  j["final_train_loss"] = final_train_loss;
  j["initial_test_acc"] = initial_test_acc;
  if (grokking_epoch.has_value()) {
    j["grokking_epoch"] = *grokking_epoch;
  } else {
    j["grokking_epoch"] = nullptr;
  }
  j["diverged"] = diverged;
  j["final_norms"] = final_norms;
  j["final_norm_total"] = final_norm_total;
  j["radial_lr_cap_hits"] = radial_lr_cap_hits;
  j["seed"] = cfg.seed;
  j["metrics_csv"] = metrics_path;
  if (checkpoint_path.empty()) {
    j["checkpoint"] = nullptr;
  } else {
    j["checkpoint"] = checkpoint_path;
  }
  j["config"] = cfg.to_json();
  return j;
}

RunSummary run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  // Fail fast on decay factors that could cross 1 during the run.
  if (cfg.optimizer == OptKind::kAdamO) {
    const double worst_lr = cfg.opt.decay_mode == DecayMode::kRadial
                                ? (cfg.opt.enable_curvature
                                       ? cfg.opt.radial_lr_cap * cfg.opt.eta_rho
                                       : cfg.opt.eta_rho)
                                : cfg.opt.eta_theta;
    if (worst_lr * cfg.opt.lambda >= 1.0) {
      throw ConfigError("decay step (lr*lambda) must stay below 1");
    }
  }
  fs::create_directories(cfg.out_dir);
  switch (cfg.task) {
    case TaskKind::kGrokking:
    case TaskKind::kToy2d:
      return run_classification(cfg);
    case TaskKind::kQuadratic:
      return run_quadratic(cfg);
  }
  throw ConfigError("unhandled task kind");
}

std::optional<long> grokking_epoch(
    const std::vector<std::pair<long, double>>& test_acc_series,
    double threshold) {
  for (const auto& [epoch, acc] : test_acc_series) {
    if (acc > threshold) return epoch;
  }
  return std::nullopt;
}

double landscape_coef(int i, int grid_n, double span) {
  if (grid_n == 1) return 0.0;
  return span * double(2 * i - (grid_n - 1)) / double(grid_n - 1);
}

Matrix landscape_slice(const Vector& w0,
                       const std::function<double(const Vector&)>& loss,
                       const Vector& dir1, const Vector& dir2, int grid_n,
                       double span) {
  if (grid_n < 1) throw ConfigError("landscape_slice: grid_n must be >= 1");
  if (span <= 0.0) throw ConfigError("landscape_slice: span must be positive");
  detail::check_same_size(dir1.size(), w0.size(), "landscape_slice");
  detail::check_same_size(dir2.size(), w0.size(), "landscape_slice");

  Matrix grid(grid_n, grid_n);
  Vector w(w0.size());
  for (int i = 0; i < grid_n; ++i) {
    const double a = landscape_coef(i, grid_n, span);
    for (int j = 0; j < grid_n; ++j) {
      const double b = landscape_coef(j, grid_n, span);
      w = w0;
      if (a != 0.0) w += a * dir1;
      if (b != 0.0) w += b * dir2;
      grid(i, j) = loss(w);
    }
  }
  return grid;
}

Vector filter_normalized_direction(const std::vector<ParamBlock>& blocks,
                                   Rng& rng) {
  Index total = 0;
  for (const auto& b : blocks) total += b.numel();
  Vector d(total);
  Index off = 0;
  for (const auto& b : blocks) {
    auto seg = d.segment(off, b.numel());
    for (Index i = 0; i < seg.size(); ++i) seg[i] = rng.normal();
    const double dn = std::sqrt(norm2(seg));
    const double wn = std::sqrt(norm2(b.values));
    if (dn > 0.0) {
      seg *= wn / dn;
    } else {
      seg.setZero();
    }
    off += b.numel();
  }
  return d;
}

void landscape_from_checkpoint(const std::string& checkpoint_path, int grid_n,
                               double span, const std::string& out_csv) {
  const Checkpoint ck = Checkpoint::load(checkpoint_path);
  const ExperimentConfig cfg = ExperimentConfig::from_text(ck.config_text, {});

  Index total = 0;
  for (const auto& b : ck.blocks) total += b.numel();
  Vector w0(total);
  Index off = 0;
  for (const auto& b : ck.blocks) {
    w0.segment(off, b.numel()) = b.values;
    off += b.numel();
  }

  std::function<double(const Vector&)> loss;
  if (cfg.task == TaskKind::kQuadratic) {
    loss = [](const Vector& w) { return 0.5 * norm2(w); };
  } else {
    auto model = std::make_shared<MlpModel>(
        cfg.task == TaskKind::kGrokking ? 2 * cfg.p : 2, cfg.hidden,
        cfg.task == TaskKind::kGrokking ? cfg.p : 2);
    Index model_total = 0;
    for (const auto& b : model->blocks()) model_total += b.numel();
    if (model_total != total) {
      throw ConfigError("landscape: checkpoint does not match its config");
    }
    auto X = std::make_shared<Matrix>();
    auto y = std::make_shared<std::vector<int>>();
    if (cfg.task == TaskKind::kGrokking) {
      const auto ds = gen_modular_addition(cfg.p, cfg.split_fraction, cfg.seed);
      *X = encode_modular(ds.train, cfg.p);
      *y = modular_targets(ds.train);
    } else {
      const auto ds = gen_two_clusters_2d(cfg.n_points, cfg.noise, cfg.seed);
      *X = ds.X;
      *y = ds.y;
    }
    loss = [model, X, y](const Vector& w) {
      Index pos = 0;
      for (auto& b : model->blocks()) {
        b.values = w.segment(pos, b.numel());
        pos += b.numel();
      }
      return cross_entropy_with_grad(model->forward(*X), *y).loss;
    };
  }

  Rng dir_rng(derive_seed(cfg.seed, kStreamLandscape));
  const Vector d1 = filter_normalized_direction(ck.blocks, dir_rng);
  const Vector d2 = filter_normalized_direction(ck.blocks, dir_rng);
  const Matrix grid = landscape_slice(w0, loss, d1, d2, grid_n, span);

  std::ofstream out(out_csv);
  if (!out) throw ConfigError("cannot open '" + out_csv + "' for writing");
  out << "a,b,loss\n";
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      out << format_double(landscape_coef(i, grid_n, span)) << ','
          << format_double(landscape_coef(j, grid_n, span)) << ','
          << format_double(grid(i, j)) << "\n";
    }
  }
}

SweepResult sensitivity_sweep(const std::string& base_config_text,
                              const std::vector<std::string>& overrides,
                              const std::string& grid_spec) {
  // grid spec: "key1=v1,v2,...;key2=w1,w2,..."
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
  std::istringstream spec(grid_spec);
  std::string axis;
  while (std::getline(spec, axis, ';')) {
    const auto eq = axis.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("grid axis '" + axis + "' is not key=v1,v2,...");
    }
    std::vector<std::string> values;
    std::istringstream vs(axis.substr(eq + 1));
    std::string v;
    while (std::getline(vs, v, ',')) {
      if (!v.empty()) values.push_back(v);
    }
    if (values.empty()) {
      throw ConfigError("grid axis '" + axis + "' has no values");
    }
    axes.emplace_back(axis.substr(0, eq), values);
  }
  if (axes.size() != 2) {
    throw ConfigError("sweep grid needs exactly two axes, got " +
                      std::to_string(axes.size()));
  }

  const ExperimentConfig base =
      ExperimentConfig::from_text(base_config_text, overrides);

  SweepResult result;
  result.p1_name = axes[0].first;
  result.p2_name = axes[1].first;
  for (std::size_t i = 0; i < axes[0].second.size(); ++i) {
    for (std::size_t j = 0; j < axes[1].second.size(); ++j) {
      const std::string& v1 = axes[0].second[i];
      const std::string& v2 = axes[1].second[j];
      std::vector<std::string> cell_overrides = overrides;
      cell_overrides.push_back(result.p1_name + "=" + v1);
      cell_overrides.push_back(result.p2_name + "=" + v2);
      cell_overrides.push_back(
          "out_dir=" + (fs::path(base.out_dir) / "cells" /
                        (std::to_string(i) + "_" + std::to_string(j)))
                           .string());
      cell_overrides.push_back("save_checkpoint=false");
      cell_overrides.push_back("export_data=false");
      const ExperimentConfig cfg =
          ExperimentConfig::from_text(base_config_text, cell_overrides);
      const RunSummary summary = run_experiment(cfg);
      result.cells.push_back(
          {v1, v2, summary.final_test_acc, summary.diverged});
    }
  }
  return result;
}

void write_sweep_csv(const SweepResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << result.p1_name << ',' << result.p2_name << ",final_test_acc,diverged\n";
  for (const auto& c : result.cells) {
    out << c.v1 << ',' << c.v2 << ',' << format_double(c.final_test_acc) << ','
        << (c.diverged ? 1 : 0) << "\n";
  }
}

}  // namespace adamo
