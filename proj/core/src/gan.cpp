#include "rampart/gan.hpp"

#include <algorithm>
#include <cmath>

#include "rampart/adam.hpp"
#include "rampart/error.hpp"
#include "rampart/rng.hpp"
#include "rampart/version.hpp"

namespace rampart {

namespace {

// Generator stem: dense to 8 channels at 5x6, upsample to 10x12, crop to
// 10x11, then two 3x3 convs (8 channels, then 1) with LeakyReLU between.
constexpr int64_t kGenChannels = 8;
constexpr int64_t kGenH = 5, kGenW = 6;
constexpr int64_t kGenProj = kGenChannels * kGenH * kGenW;  // 240
constexpr int64_t kC1 = 8, kC2 = 8;                         // critic widths
constexpr int64_t kCriticDense = 16;
constexpr double kSlope = 0.2;

Tensor noise_batch(int n, int dim, Rng& rng) {
  Tensor z({n, dim});
  for (int64_t i = 0; i < z.numel(); ++i) z[i] = rng.normal();
  return z;
}

}  // namespace

GanModel make_gan(const GanConfig& config, uint64_t seed) {
  if (config.noise_dim < 1 || config.noise_dim >= kSampleRows * kSampleCols) {
    throw ConfigError("gan: noise dimension must be in [1, 110)");
  }
  if (config.batch_size < 1 || config.critic_steps < 1 || config.iterations < 0) {
    throw ConfigError("gan: counts must be positive");
  }
  GanModel m;
  m.config = config;
  m.seed = seed;
  Rng rng(Rng::derive(seed, "gan-init"));
  // DCGAN-style N(0, 0.02) weights, zero biases.
  m.gen.add("gen.proj.w", init_normal({config.noise_dim, kGenProj}, 0.02, rng));
  m.gen.add("gen.proj.b", Tensor({kGenProj}));
  m.gen.add("gen.conv1.w", init_normal({kC1, kGenChannels, 3, 3}, 0.02, rng));
  m.gen.add("gen.conv1.b", Tensor({kC1}));
  m.gen.add("gen.conv2.w", init_normal({1, kC1, 3, 3}, 0.02, rng));
  m.gen.add("gen.conv2.b", Tensor({1}));
  m.critic.add("critic.conv1.w", init_normal({kC1, 1, 3, 3}, 0.02, rng));
  m.critic.add("critic.conv1.b", Tensor({kC1}));
  m.critic.add("critic.conv2.w", init_normal({kC2, kC1, 3, 3}, 0.02, rng));
  m.critic.add("critic.conv2.b", Tensor({kC2}));
  m.critic.add("critic.fc1.w",
               init_normal({kC2 * kSampleRows * kSampleCols, kCriticDense}, 0.02, rng));
  m.critic.add("critic.fc1.b", Tensor({kCriticDense}));
  m.critic.add("critic.fc2.w", init_normal({kCriticDense, 1}, 0.02, rng));
  m.critic.add("critic.fc2.b", Tensor({1}));
  return m;
}

ad::Var generator_forward(const GanModel& model, const ad::Var& z) {
  const auto& v = model.gen.vars();
  const int64_t n = z.shape()[0];
  ad::Var h = ad::leaky_relu(ad::bias_add_cols(ad::matmul(z, v[0]), v[1]), kSlope);
  h = ad::reshape(h, {n, kGenChannels, kGenH, kGenW});
  h = ad::crop2d(ad::upsample2x(h), kSampleRows, kSampleCols);
  h = ad::leaky_relu(ad::bias_add_chan(ad::conv2d(h, v[2], 1, 1), v[3]), kSlope);
  h = ad::bias_add_chan(ad::conv2d(h, v[4], 1, 1), v[5]);
  // tanh output rescaled into the normalized feature range [0,1]
  return ad::scalar_add(ad::scalar_mul(ad::tanh_(h), 0.5), 0.5);
}

ad::Var critic_forward(const GanModel& model, const ad::Var& x) {
  const auto& v = model.critic.vars();
  const int64_t n = x.shape()[0];
  ad::Var h = ad::leaky_relu(ad::bias_add_chan(ad::conv2d(x, v[0], 1, 1), v[1]), kSlope);
  h = ad::leaky_relu(ad::bias_add_chan(ad::conv2d(h, v[2], 1, 1), v[3]), kSlope);
  h = ad::reshape(h, {n, kC2 * kSampleRows * kSampleCols});
  h = ad::leaky_relu(ad::bias_add_cols(ad::matmul(h, v[4]), v[5]), kSlope);
  return ad::bias_add_cols(ad::matmul(h, v[6]), v[7]);
}

GanModel train_wgan_gp(const std::vector<Sample>& benign, const GanConfig& config,
                       uint64_t seed) {
  for (const Sample& s : benign) {
    if (s.label != 0) {
      throw ConfigError("train_wgan_gp: input contains a non-benign sample");
    }
  }
  if (benign.size() < static_cast<size_t>(config.batch_size)) {
    throw ConfigError("train_wgan_gp: need at least one batch of benign samples");
  }
  GanModel model = make_gan(config, seed);

  Rng data_rng(Rng::derive(seed, "gan-data"));
  Rng noise_rng(Rng::derive(seed, "gan-noise"));
  Rng mix_rng(Rng::derive(seed, "gan-mix"));
  Adam opt_critic({.lr = config.lr});
  Adam opt_gen({.lr = config.lr});

  auto real_batch = [&] {
    std::vector<size_t> idxs(static_cast<size_t>(config.batch_size));
    for (auto& i : idxs) {
      i = static_cast<size_t>(data_rng.uniform_int(0, static_cast<int64_t>(benign.size()) - 1));
    }
    return samples_to_batch(benign, idxs);
  };

  for (int it = 0; it < config.iterations; ++it) {
    GanIterationStats stats;
    for (int k = 0; k < config.critic_steps; ++k) {
      Tensor real = real_batch();
      ad::Var z = ad::constant(noise_batch(config.batch_size, config.noise_dim, noise_rng));
      Tensor fake = generator_forward(model, z).value();  // critic step: generator frozen

      // Interpolates x_hat = u*real + (1-u)*fake per sample.
      Tensor x_hat(real.shape());
      const int64_t per = x_hat.numel() / config.batch_size;
      for (int64_t b = 0; b < config.batch_size; ++b) {
        const double u = mix_rng.uniform();
        for (int64_t i = 0; i < per; ++i) {
          x_hat[b * per + i] = u * real[b * per + i] + (1.0 - u) * fake[b * per + i];
        }
      }
      ad::Var x_hat_var = ad::leaf(std::move(x_hat), true);
      ad::Var d_real = critic_forward(model, ad::constant(std::move(real)));
      ad::Var d_fake = critic_forward(model, ad::constant(std::move(fake)));
      ad::Var d_hat = critic_forward(model, x_hat_var);

      // Gradient penalty via a second differentiation through the critic.
      std::vector<ad::Var> wrt{x_hat_var};
      ad::Var gx = ad::gradients(ad::sum_all(d_hat), wrt)[0];
      ad::Var norms = ad::sqrt_(ad::scalar_add(ad::sum_per_sample(ad::mul(gx, gx)), 1e-12));
      ad::Var gp = ad::mean_all(ad::mul(ad::scalar_add(norms, -1.0),
                                        ad::scalar_add(norms, -1.0)));
      ad::Var loss = ad::add(ad::sub(ad::mean_all(d_fake), ad::mean_all(d_real)),
                             ad::scalar_mul(gp, config.gp_lambda));
      if (!std::isfinite(loss.value().item())) {
        throw Error("train_wgan_gp: non-finite critic loss at iteration " +
                    std::to_string(it));
      }
      auto grads = ad::gradients(loss, model.critic.vars());
      std::vector<Tensor> gv;
      gv.reserve(grads.size());
      for (const auto& g : grads) gv.push_back(g.value());
      opt_critic.step(model.critic.tensors(), gv);
      if (!model.critic.all_finite()) {
        throw Error("train_wgan_gp: non-finite critic parameters at iteration " +
                    std::to_string(it));
      }
      stats.wasserstein = ad::mean_all(d_real).value().item() -
                          ad::mean_all(d_fake).value().item();
      stats.gradient_penalty = gp.value().item();
    }

    ad::Var z = ad::constant(noise_batch(config.batch_size, config.noise_dim, noise_rng));
    ad::Var fake = generator_forward(model, z);
    ad::Var g_loss = ad::neg(ad::mean_all(critic_forward(model, fake)));
    if (!std::isfinite(g_loss.value().item())) {
      throw Error("train_wgan_gp: non-finite generator loss at iteration " +
                  std::to_string(it));
    }
    auto grads = ad::gradients(g_loss, model.gen.vars());
    std::vector<Tensor> gv;
    gv.reserve(grads.size());
    for (const auto& g : grads) gv.push_back(g.value());
    opt_gen.step(model.gen.tensors(), gv);
    if (!model.gen.all_finite()) {
      throw Error("train_wgan_gp: non-finite generator parameters at iteration " +
                  std::to_string(it));
    }
    stats.generator_loss = g_loss.value().item();
    model.history.push_back(stats);
  }
  return model;
}

Tensor generate(const GanModel& model, int n, uint64_t seed) {
  if (n < 1) throw ConfigError("generate: need n >= 1");
  Rng rng(Rng::derive(seed, "gan-generate"));
  ad::Var z = ad::constant(noise_batch(n, model.config.noise_dim, rng));
  Tensor out = generator_forward(model, z).value();
  // tanh rescale is already in [0,1]; clamp away any rounding spill
  for (int64_t i = 0; i < out.numel(); ++i) out[i] = std::clamp(out[i], 0.0, 1.0);
  return out;
}

void save_gan(const std::filesystem::path& path, const GanModel& model,
              const std::map<std::string, std::string>& extra_meta) {
  Checkpoint ckpt = checkpoint_from_params(model.gen);
  Checkpoint critic = checkpoint_from_params(model.critic);
  for (auto& t : critic.tensors) ckpt.tensors.push_back(std::move(t));
  ckpt.metadata["kind"] = "gan";
  ckpt.metadata["tool_version"] = kVersion;
  ckpt.metadata["noise_dim"] = std::to_string(model.config.noise_dim);
  ckpt.metadata["seed"] = std::to_string(model.seed);
  ckpt.metadata["iterations"] = std::to_string(model.config.iterations);
  for (const auto& [k, v] : extra_meta) ckpt.metadata[k] = v;
  save_checkpoint(path, ckpt);
}

GanModel load_gan(const std::filesystem::path& path) {
  Checkpoint ckpt = load_checkpoint(path);
  if (ckpt.metadata.count("kind") && ckpt.metadata.at("kind") != "gan") {
    throw ConfigError("'" + path.string() + "' is not a gan checkpoint");
  }
  GanConfig config;
  config.noise_dim = std::stoi(ckpt.metadata.at("noise_dim"));
  GanModel model = make_gan(config, std::stoull(ckpt.metadata.at("seed")));
  params_from_checkpoint(ckpt, model.gen);
  params_from_checkpoint(ckpt, model.critic);
  return model;
}

}  // namespace rampart
