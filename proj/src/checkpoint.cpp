#include "adamo/checkpoint.hpp"

#include <fstream>

namespace adamo {

namespace {

template <typename T>
void write_pod(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw ConfigError("checkpoint: truncated file");
  return v;
}

void write_string(std::ofstream& out, const std::string& s) {
  write_pod<std::uint64_t>(out, s.size());
  out.write(s.data(), std::streamsize(s.size()));
}

std::string read_string(std::ifstream& in) {
  const auto n = read_pod<std::uint64_t>(in);
  std::string s(n, '\0');
  in.read(s.data(), std::streamsize(n));
  if (!in) throw ConfigError("checkpoint: truncated string");
  return s;
}

void write_vector(std::ofstream& out, const Vector& v) {
  write_pod<std::uint64_t>(out, std::uint64_t(v.size()));
  out.write(reinterpret_cast<const char*>(v.data()),
            std::streamsize(sizeof(double)) * v.size());
}

Vector read_vector(std::ifstream& in) {
  const auto n = read_pod<std::uint64_t>(in);
  Vector v;
  v.resize(Index(n));
  in.read(reinterpret_cast<char*>(v.data()),
          std::streamsize(sizeof(double) * n));
  if (!in) throw ConfigError("checkpoint: truncated vector");
  return v;
}

}  // namespace

void Checkpoint::save(const std::string& path) const {
  if (blocks.size() != states.size()) {
    throw DimensionError("Checkpoint::save: blocks/states count mismatch");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");

  write_pod(out, kMagic);
  write_pod(out, kVersion);
  write_string(out, config_text);
  write_pod<std::uint8_t>(out, std::uint8_t(optimizer));
  write_pod<std::int64_t>(out, epochs_completed);
  for (const auto s : rng_state) write_pod(out, s);

  write_pod<std::uint64_t>(out, blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& b = blocks[i];
    write_string(out, b.name);
    write_pod<std::int32_t>(out, b.logical_dim);
    write_pod<std::uint8_t>(out, b.scale_invariant ? 1 : 0);
    write_vector(out, b.values);

    const auto& st = states[i];
    write_pod<std::int64_t>(out, st.t);
    write_pod<double>(out, st.curv.tau);
    write_vector(out, st.curv.g_prev);
    write_vector(out, st.m_rho);
    write_vector(out, st.m_theta);
    write_vector(out, st.v_theta);
    write_vector(out, st.m_plain);
    write_vector(out, st.v_plain);
  }
  if (!out) throw ConfigError("checkpoint: write failed for '" + path + "'");
}

Checkpoint Checkpoint::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open checkpoint '" + path + "'");

  Checkpoint ck;
  if (read_pod<std::uint32_t>(in) != kMagic) {
    throw ConfigError("checkpoint: bad magic in '" + path + "'");
  }
  const auto version = read_pod<std::uint32_t>(in);
  if (version != kVersion) {
    throw ConfigError("checkpoint: unsupported version " +
                      std::to_string(version));
  }
  ck.config_text = read_string(in);
  ck.optimizer = OptKind(read_pod<std::uint8_t>(in));
  ck.epochs_completed = read_pod<std::int64_t>(in);
  for (auto& s : ck.rng_state) s = read_pod<std::uint64_t>(in);

  const auto n_blocks = read_pod<std::uint64_t>(in);
  ck.blocks.resize(n_blocks);
  ck.states.resize(n_blocks);
  for (std::size_t i = 0; i < n_blocks; ++i) {
    auto& b = ck.blocks[i];
    b.name = read_string(in);
    b.logical_dim = read_pod<std::int32_t>(in);
    b.scale_invariant = read_pod<std::uint8_t>(in) != 0;
    b.values = read_vector(in);

    auto& st = ck.states[i];
    st.t = read_pod<std::int64_t>(in);
    st.curv.tau = read_pod<double>(in);
    st.curv.g_prev = read_vector(in);
    st.m_rho = read_vector(in);
    st.m_theta = read_vector(in);
    st.v_theta = read_vector(in);
    st.m_plain = read_vector(in);
    st.v_plain = read_vector(in);
  }
  return ck;
}

}  // namespace adamo
