#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "adamo/checkpoint.hpp"
#include "adamo/optimizer.hpp"
#include "adamo/rng.hpp"
#include "reference_adam.hpp"

using adamo::BlockState;
using adamo::OptimizerConfig;
using adamo::ParamBlock;
using adamo::StepInfo;
using adamo::StepVectors;
using adamo::Vector;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(Eigen::Index(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

Vector random_vec(adamo::Rng& rng, Eigen::Index d, double scale = 1.0) {
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v[i] = scale * rng.normal();
  return v;
}

double norm(const Vector& v) { return std::sqrt(adamo::norm2(v)); }

// |<a, w>| / (|a||w|), guarded
double normalized_dot(const Vector& a, const Vector& w) {
  return std::abs(adamo::dot(a, w)) / (norm(a) * norm(w) + 1e-300);
}

// ||tangential residue of a w.r.t. w|| / ||a||, guarded
double parallel_residual(const Vector& a, const Vector& w) {
  return norm(adamo::project_tangential(a, w)) / (norm(a) + 1e-300);
}

OptimizerConfig base_cfg() {
  OptimizerConfig cfg;
  cfg.eta_theta = 0.1;
  cfg.eta_rho = 0.1;
  cfg.lambda = 0.0;
  cfg.enable_curvature = false;
  cfg.enable_dimension = false;
  return cfg;
}

}  // namespace

TEST_CASE("radial_decay: scales the norm, keeps the direction") {
  const Vector w = vec({3, 4});
  const Vector d = adamo::radial_decay(w, 0.1, 1.0);
  CHECK(d[0] == doctest::Approx(2.7).epsilon(1e-15));
  CHECK(d[1] == doctest::Approx(3.6).epsilon(1e-15));
  CHECK(norm(d) == doctest::Approx(4.5).epsilon(1e-15));
  CHECK(parallel_residual(d, w) < 1e-15);

  CHECK(adamo::radial_decay(w, 0.1, 0.0) == w);
  CHECK(adamo::radial_decay(Vector::Zero(2), 0.5, 1.0) == Vector::Zero(2));
  CHECK_THROWS_AS(adamo::radial_decay(w, 1.0, 1.0), adamo::ConfigError);
}

TEST_CASE("low_dim_predicate") {
  OptimizerConfig cfg;
  cfg.dim_threshold = 8192;
  CHECK(adamo::low_dim_predicate({"b", Vector::Zero(128), 1, false}, cfg));
  CHECK_FALSE(
      adamo::low_dim_predicate({"W", Vector::Zero(16384), 2, false}, cfg));
  CHECK(adamo::low_dim_predicate({"W", Vector::Zero(100), 2, false}, cfg));
}

TEST_CASE("adamo_step: frozen single-step oracle, d=2") {
  OptimizerConfig cfg = base_cfg();
  ParamBlock block{"w", vec({3, 4}), 2, false};
  BlockState st = BlockState::init(2, cfg);
  StepVectors dbg;
  const StepInfo info = adamo::adamo_step(block, vec({1, 0}), st, cfg, &dbg);

  // frozen by tests/oracle/gen_expected.py
  const Vector delta_rho_exp = vec({0x1.26e978d4fdf3bp-5, 0x1.89374bc6a7efap-5});
  const Vector delta_theta_exp =
      vec({0x1.cac08288fe387p-4, -0x1.581061e6beaa6p-4});
  const Vector w_plus_exp = vec({0x1.6d0e560864167p+1, 0x1.024dd2f00daadp+2});

  for (int i = 0; i < 2; ++i) {
    CHECK(dbg.delta_rho[i] == doctest::Approx(delta_rho_exp[i]).epsilon(1e-15));
    CHECK(dbg.delta_theta[i] ==
          doctest::Approx(delta_theta_exp[i]).epsilon(1e-15));
    CHECK(block.values[i] == doctest::Approx(w_plus_exp[i]).epsilon(1e-15));
  }

  CHECK(normalized_dot(dbg.delta_theta, dbg.w_pre) <= 1e-10);
  CHECK(parallel_residual(dbg.delta_rho, dbg.w_pre) <= 1e-10);
  CHECK(info.eta_rho_t == cfg.eta_rho);
  CHECK(st.t == 1);
}

TEST_CASE("adamo_step: zero gradient from zero state is a fixed point") {
  OptimizerConfig cfg = base_cfg();
  const Vector w0 = vec({0.5, -1.25, 2.0});
  ParamBlock block{"w", w0, 2, false};
  BlockState st = BlockState::init(3, cfg);
  for (int i = 0; i < 5; ++i) {
    adamo::adamo_step(block, Vector::Zero(3), st, cfg);
  }
  CHECK(block.values == w0);
}

TEST_CASE("adamo_step: scale-invariant block discards radial gradients") {
  OptimizerConfig cfg = base_cfg();
  ParamBlock block{"g", vec({3, 4}), 2, true};
  BlockState st = BlockState::init(2, cfg);
  const double n0 = norm(block.values);
  for (int i = 0; i < 3; ++i) {
    const Vector g = 2.0 * block.values;  // purely radial gradient
    adamo::adamo_step(block, g, st, cfg);
  }
  CHECK(std::abs(norm(block.values) - n0) / n0 <= 1e-12);
}

TEST_CASE("adamo_step: weight decay applies on scale-invariant blocks") {
  OptimizerConfig cfg = base_cfg();
  cfg.lambda = 1.0;
  ParamBlock block{"g", vec({3, 4}), 2, true};
  BlockState st = BlockState::init(2, cfg);
  adamo::adamo_step(block, Vector(2.0 * block.values), st, cfg);
  // radial update dropped, so only the decay factor moves the norm
  CHECK(norm(block.values) ==
        doctest::Approx(5.0 * (1.0 - cfg.eta_rho * cfg.lambda)).epsilon(1e-12));
}

TEST_CASE("adamo_step: decay modes scale by the matching learning rate") {
  adamo::Rng rng(11);
  const Vector w0 = random_vec(rng, 8);
  const Vector g = Vector::Zero(8);

  OptimizerConfig radial = base_cfg();
  radial.lambda = 0.5;
  radial.eta_rho = 0.02;
  radial.eta_theta = 0.2;
  radial.decay_mode = adamo::DecayMode::kRadial;
  ParamBlock br{"w", w0, 2, false};
  BlockState sr = BlockState::init(8, radial);
  adamo::adamo_step(br, g, sr, radial);
  CHECK(norm(br.values) ==
        doctest::Approx((1.0 - 0.02 * 0.5) * norm(w0)).epsilon(1e-14));

  OptimizerConfig iso = radial;
  iso.decay_mode = adamo::DecayMode::kIsotropic;
  ParamBlock bi{"w", w0, 2, false};
  BlockState si = BlockState::init(8, iso);
  adamo::adamo_step(bi, g, si, iso);
  CHECK(norm(bi.values) ==
        doctest::Approx((1.0 - 0.2 * 0.5) * norm(w0)).epsilon(1e-14));

  // radial decay with zero gradient preserves the direction
  CHECK(parallel_residual(br.values, w0) <= 1e-12);
}

TEST_CASE("lowdim_step: matches the reference Adam elementwise") {
  OptimizerConfig cfg;
  cfg.eta_theta = 3e-3;
  cfg.alpha = 1.0;
  adamo::Rng rng(101);
  const Eigen::Index d = 33;

  ParamBlock block{"b", random_vec(rng, d), 1, false};
  BlockState st = BlockState::init(d, cfg);
  Vector w_ref = block.values;
  testref::RefAdam ref(d, cfg.eta_theta, cfg.beta1_theta, cfg.beta2_theta,
                       cfg.eps);

  for (int step = 0; step < 100; ++step) {
    const Vector g = random_vec(rng, d);
    adamo::lowdim_step(block, g, st, cfg);
    ref.step(w_ref, g);
    for (Eigen::Index i = 0; i < d; ++i) {
      CHECK(block.values[i] == doctest::Approx(w_ref[i]).epsilon(1e-15));
    }
  }
}

TEST_CASE("lowdim_step: alpha scales the first update linearly") {
  OptimizerConfig cfg;
  cfg.eta_theta = 1e-2;
  adamo::Rng rng(5);
  const Vector g = random_vec(rng, 7);

  // starting from w=0 the post-step values are exactly -delta, so halving is
  // observable bit for bit
  cfg.alpha = 1.0;
  ParamBlock b1{"b", Vector::Zero(7), 1, false};
  BlockState s1 = BlockState::init(7, cfg);
  adamo::lowdim_step(b1, g, s1, cfg);

  cfg.alpha = 0.5;
  ParamBlock b2{"b", Vector::Zero(7), 1, false};
  BlockState s2 = BlockState::init(7, cfg);
  adamo::lowdim_step(b2, g, s2, cfg);

  CHECK(b2.values == Vector(0.5 * b1.values));
}

TEST_CASE("lowdim_step: zero gradient from zero state is a fixed point") {
  OptimizerConfig cfg;
  const Vector w0 = vec({1.0, -2.0});
  ParamBlock block{"b", w0, 1, false};
  BlockState st = BlockState::init(2, cfg);
  adamo::lowdim_step(block, Vector::Zero(2), st, cfg);
  CHECK(block.values == w0);
}

TEST_CASE("lowdim_step: rejects blocks that are not low-dimensional") {
  OptimizerConfig cfg;
  cfg.dim_threshold = 2;
  ParamBlock block{"W", Vector::Zero(4), 2, false};
  BlockState st = BlockState::init(4, cfg);
  CHECK_THROWS_AS(adamo::lowdim_step(block, Vector::Zero(4), st, cfg),
                  adamo::ConfigError);
}

TEST_CASE("adam_step: frozen quadratic trajectory and closed-form step") {
  // 200 steps on f(w) = 0.5*||w||^2 from [1,1]; values frozen from the
  // independent oracle script.
  OptimizerConfig cfg;
  cfg.eta_theta = 0.1;
  cfg.lambda = 0.0;
  ParamBlock block{"w", vec({1, 1}), 2, false};
  BlockState st = BlockState::init(2, cfg);
  for (int t = 1; t <= 200; ++t) {
    const Vector g = block.values;
    adamo::adam_step(block, g, st, cfg);
    if (t == 1) {
      CHECK(block.values[0] ==
            doctest::Approx(0x1.ccccccd563d2cp-1).epsilon(5e-13));
    }
    if (t == 50) {
      CHECK(block.values[0] ==
            doctest::Approx(-0x1.3bc44edca6e9ep-8).epsilon(5e-13));
    }
  }
  CHECK(block.values[0] == doctest::Approx(-0x1.e464501e2eaccp-18).epsilon(5e-13));
  CHECK(norm(block.values) < 0.05);

  // single step from zero state: |delta| tracks eta for |g| >> eps
  OptimizerConfig cfg1;
  cfg1.eta_theta = 0.05;
  cfg1.lambda = 0.0;
  ParamBlock b1{"w", vec({0.0}), 0 + 2, false};
  BlockState s1 = BlockState::init(1, cfg1);
  adamo::adam_step(b1, vec({3.7}), s1, cfg1);
  CHECK(std::abs(b1.values[0]) == doctest::Approx(0.05).epsilon(1e-8));
}

TEST_CASE("adamw_step: lambda=0 equals adam bit for bit") {
  OptimizerConfig cfg;
  cfg.eta_theta = 2e-3;
  cfg.lambda = 0.0;
  adamo::Rng rng(77);
  const Eigen::Index d = 19;
  ParamBlock ba{"w", random_vec(rng, d), 2, false};
  ParamBlock bw{"w", ba.values, 2, false};
  BlockState sa = BlockState::init(d, cfg);
  BlockState sw = BlockState::init(d, cfg);
  for (int step = 0; step < 50; ++step) {
    const Vector g = random_vec(rng, d);
    adamo::adam_step(ba, g, sa, cfg);
    adamo::adamw_step(bw, g, sw, cfg);
    CHECK(ba.values == bw.values);
  }
}

TEST_CASE("adamw_step: frozen single step with decay") {
  OptimizerConfig cfg;
  cfg.eta_theta = 0.1;
  cfg.lambda = 0.4;
  ParamBlock block{"w", vec({2, -3}), 2, false};
  BlockState st = BlockState::init(2, cfg);
  adamo::adamw_step(block, vec({0.5, 0.25}), st, cfg);
  CHECK(block.values[0] == doctest::Approx(0x1.d1eb85274f57ep+0).epsilon(1e-15));
  CHECK(block.values[1] == doctest::Approx(-0x1.7d70a3ce73378p+1).epsilon(1e-15));
}

TEST_CASE("adam_step: coupled decay enters through the gradient") {
  OptimizerConfig cfg;
  cfg.eta_theta = 0.1;
  cfg.lambda = 0.5;
  ParamBlock block{"w", vec({1.0}), 2, false};
  BlockState st = BlockState::init(1, cfg);
  adamo::adam_step(block, vec({0.0}), st, cfg);
  // g_eff = 0 + 0.5*1 = 0.5; first Adam step moves by ~eta
  CHECK(block.values[0] == doctest::Approx(1.0 - 0.1).epsilon(1e-7));
}

TEST_CASE("adamp_step: orthogonal gradient takes the projected branch") {
  OptimizerConfig cfg;
  cfg.eta_theta = 0.1;
  cfg.lambda = 0.5;
  cfg.adamp_delta = 0.1;
  cfg.adamp_wd_ratio = 0.5;
  const Vector w0 = vec({1.0, 0.0});
  ParamBlock block{"w", w0, 2, false};
  BlockState st = BlockState::init(2, cfg);
  adamo::adamp_step(block, vec({0.0, 1.0}), st, cfg);

  // decay softened by wd_ratio on the projected branch
  CHECK(block.values[0] ==
        doctest::Approx((1.0 - 0.1 * 0.5 * 0.5) * 1.0).epsilon(1e-12));
  // the applied update is tangential: component along w0 comes only from decay
  const Vector moved = w0 - block.values;
  const Vector update = moved - (0.1 * 0.5 * 0.5) * w0;
  CHECK(normalized_dot(update, w0) <= 1e-10);
}

TEST_CASE("adamp_step: aligned gradient takes the full branch") {
  OptimizerConfig cfg;
  cfg.eta_theta = 0.1;
  cfg.lambda = 0.0;
  cfg.adamp_delta = 0.1;
  ParamBlock block{"w", vec({1.0, 0.0}), 2, false};
  BlockState st = BlockState::init(2, cfg);
  adamo::adamp_step(block, vec({1.0, 0.0}), st, cfg);
  // cosine = 1 > 0.1/sqrt(2) = 0.0707..., so the update is not projected
  const double moved = 1.0 - block.values[0];
  CHECK(moved == doctest::Approx(0.1).epsilon(1e-7));
}

TEST_CASE("adamp_step: delta=0 never projects and equals adamw") {
  OptimizerConfig cfg;
  cfg.eta_theta = 3e-3;
  cfg.lambda = 0.2;
  cfg.adamp_delta = 0.0;
  adamo::Rng rng(13);
  const Eigen::Index d = 9;
  ParamBlock bp{"w", random_vec(rng, d), 2, false};
  ParamBlock bw{"w", bp.values, 2, false};
  BlockState sp = BlockState::init(d, cfg);
  BlockState sw = BlockState::init(d, cfg);
  for (int step = 0; step < 25; ++step) {
    const Vector g = random_vec(rng, d);
    adamo::adamp_step(bp, g, sp, cfg);
    adamo::adamw_step(bw, g, sw, cfg);
    CHECK(bp.values == bw.values);
  }
}

TEST_CASE("adamo_step: subspace closure and state re-projection over time") {
  OptimizerConfig cfg = base_cfg();
  cfg.lambda = 0.01;
  cfg.enable_curvature = true;
  cfg.eta_theta = 0.05;
  cfg.eta_rho = 0.05;
  adamo::Rng rng(2024);
  const Eigen::Index d = 16;

  ParamBlock block{"w", random_vec(rng, d), 2, false};
  BlockState st = BlockState::init(d, cfg);
  for (int step = 0; step < 100; ++step) {
    const Vector g = random_vec(rng, d);
    StepVectors dbg;
    const StepInfo info = adamo::adamo_step(block, g, st, cfg, &dbg);

    CHECK(normalized_dot(dbg.delta_theta, dbg.w_pre) <= 1e-10);
    CHECK(parallel_residual(dbg.delta_rho, dbg.w_pre) <= 1e-10);

    // moments stay confined to their subspaces relative to the step's w
    CHECK(normalized_dot(st.m_theta, dbg.w_pre) <= 1e-10);
    CHECK(parallel_residual(st.m_rho, dbg.w_pre) <= 1e-10);

    // orthogonal components: squared norms add up
    const double lhs = info.delta_rho_norm * info.delta_rho_norm +
                       info.delta_theta_norm * info.delta_theta_norm;
    const double rhs = info.delta_total_norm * info.delta_total_norm;
    CHECK(std::abs(lhs - rhs) <= 1e-8 * (rhs + 1e-300));

    CHECK((st.v_theta.array() >= 0.0).all());
  }
  CHECK(st.t == 100);
}

TEST_CASE("ablation: curvature off pins eta_rho_t exactly") {
  OptimizerConfig cfg = base_cfg();
  cfg.enable_curvature = false;
  adamo::Rng rng(3);
  ParamBlock block{"w", random_vec(rng, 8), 2, false};
  BlockState st = BlockState::init(8, cfg);
  for (int step = 0; step < 20; ++step) {
    const StepInfo info =
        adamo::adamo_step(block, random_vec(rng, 8), st, cfg);
    CHECK(info.eta_rho_t == cfg.eta_rho);
  }
}

TEST_CASE("ablation: projection off makes scale-invariant tags a no-op") {
  OptimizerConfig cfg = base_cfg();
  cfg.enable_projection = false;
  cfg.lambda = 0.01;
  adamo::Rng rng(9);
  const Vector w0 = random_vec(rng, 12);
  std::vector<Vector> grads;
  for (int i = 0; i < 30; ++i) grads.push_back(random_vec(rng, 12));

  ParamBlock tagged{"w", w0, 2, true};
  ParamBlock untagged{"w", w0, 2, false};
  BlockState st_a = BlockState::init(12, cfg);
  BlockState st_b = BlockState::init(12, cfg);
  for (const auto& g : grads) {
    adamo::adamo_step(tagged, g, st_a, cfg);
    adamo::adamo_step(untagged, g, st_b, cfg);
    CHECK(tagged.values == untagged.values);
  }

  // sanity: with projection on, the tag changes the trajectory
  cfg.enable_projection = true;
  ParamBlock t2{"w", w0, 2, true};
  ParamBlock u2{"w", w0, 2, false};
  BlockState s2a = BlockState::init(12, cfg);
  BlockState s2b = BlockState::init(12, cfg);
  for (const auto& g : grads) {
    adamo::adamo_step(t2, g, s2a, cfg);
    adamo::adamo_step(u2, g, s2b, cfg);
  }
  CHECK(t2.values != u2.values);
}

TEST_CASE("ablation: dimension off routes biases through the full path") {
  OptimizerConfig cfg = base_cfg();
  cfg.lambda = 0.1;
  adamo::Rng rng(44);
  const Vector w0 = random_vec(rng, 6);
  const Vector g = random_vec(rng, 6);

  cfg.enable_dimension = true;
  ParamBlock fast{"b", w0, 1, false};
  BlockState sf = BlockState::init(6, cfg);
  adamo::adamo_step(fast, g, sf, cfg);

  cfg.enable_dimension = false;
  ParamBlock full{"b", w0, 1, false};
  BlockState su = BlockState::init(6, cfg);
  adamo::adamo_step(full, g, su, cfg);

  // fast path skips decay entirely; full path applies it
  CHECK(fast.values != full.values);
  CHECK(sf.m_plain.cwiseAbs().maxCoeff() > 0.0);
  CHECK(sf.m_theta == Vector::Zero(6));
  CHECK(su.m_theta.cwiseAbs().maxCoeff() > 0.0);
  CHECK(su.m_plain == Vector::Zero(6));
}

TEST_CASE("determinism: identical sequences give bit-identical states") {
  OptimizerConfig cfg = base_cfg();
  cfg.enable_curvature = true;
  cfg.lambda = 0.05;
  adamo::Rng rng(64);
  const Vector w0 = random_vec(rng, 10);
  std::vector<Vector> grads;
  for (int i = 0; i < 40; ++i) grads.push_back(random_vec(rng, 10));

  auto run = [&]() {
    ParamBlock b{"w", w0, 2, false};
    BlockState s = BlockState::init(10, cfg);
    for (const auto& g : grads) adamo::adamo_step(b, g, s, cfg);
    return b.values;
  };
  CHECK(run() == run());
}

TEST_CASE("errors: non-finite gradient names the block") {
  OptimizerConfig cfg = base_cfg();
  ParamBlock block{"W2", vec({1, 2}), 2, false};
  BlockState st = BlockState::init(2, cfg);
  Vector g = vec({1, std::numeric_limits<double>::quiet_NaN()});
  try {
    adamo::adamo_step(block, g, st, cfg);
    FAIL("expected NumericError");
  } catch (const adamo::NumericError& e) {
    CHECK(std::string(e.what()).find("W2") != std::string::npos);
  }
  CHECK_THROWS_AS(adamo::adamo_step(block, Vector::Zero(3), st, cfg),
                  adamo::DimensionError);
}

TEST_CASE("OptimizerConfig: validation") {
  OptimizerConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.beta1_theta = 1.0;
  CHECK_THROWS_AS(cfg.validate(), adamo::ConfigError);
  cfg = OptimizerConfig{};
  cfg.alpha = 0.0;
  CHECK_THROWS_AS(cfg.validate(), adamo::ConfigError);
  cfg = OptimizerConfig{};
  cfg.tau_target = 0.0;
  CHECK_THROWS_AS(cfg.validate(), adamo::ConfigError);
  cfg = OptimizerConfig{};
  cfg.eta_theta = -1.0;
  CHECK_THROWS_AS(cfg.validate(), adamo::ConfigError);
}

TEST_CASE("Optimizer: dispatch and per-block states") {
  OptimizerConfig cfg = base_cfg();
  cfg.enable_dimension = true;
  cfg.dim_threshold = 4;
  adamo::Rng rng(8);

  std::vector<ParamBlock> blocks;
  blocks.push_back({"W", random_vec(rng, 8), 2, false});
  blocks.push_back({"b", random_vec(rng, 3), 1, false});

  adamo::Optimizer opt(adamo::OptKind::kAdamO, cfg);
  opt.attach(blocks);
  std::vector<Vector> grads{random_vec(rng, 8), random_vec(rng, 3)};
  const auto infos = opt.step(blocks, grads);
  CHECK(infos.size() == 2);
  CHECK(opt.states()[0].t == 1);
  CHECK(opt.states()[1].t == 1);
  // block 0 is full-path (numel 8 >= threshold 4, rank 2)
  CHECK(opt.states()[0].m_theta.cwiseAbs().maxCoeff() > 0.0);
  // block 1 is low-dim (rank 1)
  CHECK(opt.states()[1].m_plain.cwiseAbs().maxCoeff() > 0.0);

  adamo::Optimizer unattached(adamo::OptKind::kAdam, cfg);
  CHECK_THROWS_AS(unattached.step(blocks, grads), adamo::ConfigError);
}

TEST_CASE("checkpoint: bit-exact round trip and resume equivalence") {
  OptimizerConfig cfg = base_cfg();
  cfg.enable_curvature = true;
  cfg.lambda = 0.02;
  adamo::Rng rng(123);
  const Eigen::Index d = 12;
  const Vector w0 = random_vec(rng, d);
  std::vector<Vector> grads;
  for (int i = 0; i < 20; ++i) grads.push_back(random_vec(rng, d));

  // straight-through run
  std::vector<ParamBlock> blocks{{"w", w0, 2, false}};
  adamo::Optimizer opt(adamo::OptKind::kAdamO, cfg);
  opt.attach(blocks);
  for (int i = 0; i < 10; ++i) opt.step(blocks, {grads[std::size_t(i)]});

  adamo::Checkpoint ck;
  ck.config_text = "task = quadratic\n";
  ck.optimizer = adamo::OptKind::kAdamO;
  ck.blocks = blocks;
  ck.states = opt.states();
  ck.rng_state = {1, 2, 3, 4};
  ck.epochs_completed = 10;

  const std::string path1 = "ckpt_test_1.bin";
  const std::string path2 = "ckpt_test_2.bin";
  ck.save(path1);
  adamo::Checkpoint loaded = adamo::Checkpoint::load(path1);
  loaded.save(path2);

  // file-level bit-exactness
  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  CHECK(slurp(path1) == slurp(path2));
  CHECK(loaded.blocks[0].values == blocks[0].values);
  CHECK(loaded.states[0].m_rho == opt.states()[0].m_rho);
  CHECK(loaded.states[0].curv.g_prev == opt.states()[0].curv.g_prev);
  CHECK(loaded.states[0].t == 10);
  CHECK(loaded.rng_state == std::array<std::uint64_t, 4>{1, 2, 3, 4});

  // resume: 10 more steps from the loaded state match 20 straight steps
  adamo::Optimizer resumed(adamo::OptKind::kAdamO, cfg);
  resumed.attach(loaded.blocks);
  resumed.states() = loaded.states;
  for (int i = 10; i < 20; ++i) {
    opt.step(blocks, {grads[std::size_t(i)]});
    resumed.step(loaded.blocks, {grads[std::size_t(i)]});
  }
  CHECK(loaded.blocks[0].values == blocks[0].values);

  std::remove(path1.c_str());
  std::remove(path2.c_str());
}
