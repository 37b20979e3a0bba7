#include "adamo/metrics.hpp"

#include <cstdio>

namespace adamo {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

MetricsWriter::MetricsWriter(const std::string& path,
                             const std::vector<std::string>& block_names)
    : path_(path), n_blocks_(block_names.size()), out_(path) {
  if (!out_) throw ConfigError("cannot open '" + path + "' for writing");
  out_ << "epoch,train_loss,train_acc,test_acc,grad_norm_global,eta_rho_t,tau";
  for (const auto& name : block_names) {
    out_ << ",w_norm." << name << ",g_norm." << name << ",dw_rho." << name
         << ",dw_theta." << name << ",dw_total." << name;
  }
  out_ << "\n";
  out_.flush();
}

void MetricsWriter::append(const MetricsRecord& rec) {
  if (rec.blocks.size() != n_blocks_) {
    throw DimensionError("MetricsWriter: record block count mismatch");
  }
  out_ << rec.epoch << ',' << format_double(rec.train_loss) << ','
       << format_double(rec.train_acc) << ',' << format_double(rec.test_acc)
       << ',' << format_double(rec.grad_norm_global) << ','
       << format_double(rec.eta_rho_t) << ',' << format_double(rec.tau);
  for (const auto& b : rec.blocks) {
    out_ << ',' << format_double(b.w_norm) << ',' << format_double(b.g_norm)
         << ',' << format_double(b.dw_rho) << ',' << format_double(b.dw_theta)
         << ',' << format_double(b.dw_total);
  }
  out_ << "\n";
  out_.flush();
}

}  // namespace adamo
