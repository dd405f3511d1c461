// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Each check also enforces its runtime budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "vpnn/audio.hpp"
#include "vpnn/cli.hpp"
#include "vpnn/eval.hpp"
#include "vpnn/network.hpp"
#include "vpnn/pipeline.hpp"
#include "vpnn/transform.hpp"
#include "vpnn/vecmat.hpp"

namespace {

using namespace vpnn;
namespace fs = std::filesystem;

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Collects the first failing condition and a running summary.
class Check {
 public:
  void require(bool cond, const std::string& what) {
    if (!cond && outcome_.ok) {
      outcome_.ok = false;
      outcome_.detail = what;
    }
  }
  void note(const std::string& s) {
    if (outcome_.ok) {
      if (!outcome_.detail.empty()) outcome_.detail += "; ";
      outcome_.detail += s;
    }
  }
  Outcome result() const { return outcome_; }

 private:
  Outcome outcome_;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("vpnn_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// ---------------------------------------------------------------------------

Outcome cross_algebra() {
  Check c;
  std::mt19937_64 rng(1);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Vec3 a = test::random_vec3(rng, 10.0);
    const Vec3 b = test::random_vec3(rng, 10.0);
    const double na = std::sqrt(norm_sq(a)), nb = std::sqrt(norm_sq(b));
    const double scale = na * nb;
    const Vec3 ab = cross(a, b);
    worst = std::max(worst, std::sqrt(norm_sq(ab + cross(b, a))) / scale);
    worst = std::max(worst, std::sqrt(norm_sq(cross(a, a))) / (na * na));
    worst = std::max(worst, std::abs(dot(ab, a)) / (scale * na));
    worst = std::max(worst, std::abs(dot(ab, b)) / (scale * nb));
    const double lagrange = norm_sq(a) * norm_sq(b) - dot(a, b) * dot(a, b);
    worst = std::max(worst, std::abs(norm_sq(ab) - lagrange) / (scale * scale));
  }
  c.require(worst <= 1e-10, "max relative error " + fmt("%.3e", worst));
  c.note("max relative error " + fmt("%.3e", worst));
  return c.result();
}

Outcome product_oracle() {
  Check c;
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> dim(1, 16);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int m = dim(rng), k = dim(rng), n = dim(rng);
    const VecMatrix p = test::random_vecmatrix(m, k, rng);
    const VecMatrix q = test::random_vecmatrix(k, n, rng);
    const VecMatrix fast = vec_matmul(p, q);
    const VecMatrix naive = vec_matmul_naive(p, q);
    for (int pl = 0; pl < 3; ++pl) {
      worst = std::max(worst, (fast.plane(pl) - naive.plane(pl)).cwiseAbs().maxCoeff());
    }
  }
  c.require(worst <= 1e-12, "max entry error " + fmt("%.3e", worst));
  c.note("max entry error " + fmt("%.3e", worst));
  return c.result();
}

Outcome gradients() {
  Check c;
  std::mt19937_64 rng(3);
  const Index f = 6;
  const std::vector<Index> widths{f, 16, 12, 2 * f};
  const Matrix mix = test::random_matrix(f, 5, rng, 0, 1);
  const Matrix target_mag = test::random_matrix(2 * f, 5, rng, 0, 1);

  RealNetwork dnn = init_real_network(ModelKind::DNN1, widths, 1);
  test::randomize(dnn, rng);
  const double e_dnn = test::check_real_network(dnn, mix, target_mag).max_relative_error;

  VPNetwork wvpnn = init_vp_network(widths, 2);
  test::randomize(wvpnn, rng);
  const double e_w =
      test::check_vp_network(wvpnn, window_encode(mix), window_encode(target_mag))
          .max_relative_error;

  const ColorParams color;
  VPNetwork cvpnn = init_vp_network(widths, 3);
  test::randomize(cvpnn, rng);
  const double e_c = test::check_vp_network(cvpnn, color_encode(mix, color),
                                            color_encode(target_mag, color))
                         .max_relative_error;

  c.require(e_dnn < 1e-4, "DNN relative error " + fmt("%.3e", e_dnn));
  c.require(e_w < 1e-4, "WVPNN relative error " + fmt("%.3e", e_w));
  c.require(e_c < 1e-4, "CVPNN relative error " + fmt("%.3e", e_c));
  c.note("DNN " + fmt("%.2e", e_dnn) + ", WVPNN " + fmt("%.2e", e_w) + ", CVPNN " +
         fmt("%.2e", e_c));
  return c.result();
}

Outcome transforms() {
  Check c;
  const ColorParams p;
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const double x = k / 9999.0;
    worst = std::max(worst, std::abs(color_decode(color_encode(x, p), p) - x));
  }
  c.require(worst <= 1e-9, "colour roundtrip error " + fmt("%.3e", worst));

  std::mt19937_64 rng(4);
  const Matrix s = test::random_matrix(40, 30, rng, 0, 1);
  c.require(window_decode(window_encode(s)) == s, "window roundtrip not exact");

  // Dense grid oracle x_k = k·1e-5.
  constexpr int kGrid = 100001;
  std::vector<Vec3> curve(kGrid);
  for (int k = 0; k < kGrid; ++k) curve[k] = color_encode(k * 1e-5, p);
  auto grid_nearest = [&](const Vec3& rgb) {
    int best = 0;
    double best_d = INFINITY;
    for (int k = 0; k < kGrid; ++k) {
      const double d = norm_sq(curve[k] - rgb);
      if (d < best_d) { best_d = d; best = k; }
    }
    return std::pair<double, double>{best * 1e-5, std::sqrt(best_d)};
  };

  const Vec3 example{0.5, -0.1, 0.0};
  const double x_example = color_decode(example, p);
  const double gap_example = std::abs(x_example - grid_nearest(example).first);
  c.require(gap_example <= 1e-6, "off-curve example differs from grid by " +
                                     fmt("%.3e", gap_example));

  std::uniform_real_distribution<double> dist(-0.5, 1.5);
  double excess = -INFINITY;
  for (int i = 0; i < 100; ++i) {
    const Vec3 rgb{dist(rng), dist(rng), dist(rng)};
    const double d_analytic = std::sqrt(norm_sq(color_encode(color_decode(rgb, p), p) - rgb));
    excess = std::max(excess, d_analytic - grid_nearest(rgb).second);
  }
  c.require(excess <= 1e-6, "projection worse than grid by " + fmt("%.3e", excess));
  c.note("roundtrip " + fmt("%.2e", worst) + ", example gap " + fmt("%.2e", gap_example) +
         ", max distance excess over grid " + fmt("%.2e", excess));
  return c.result();
}

double interior_error(const Waveform& a, const Waveform& b, Index frames) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = kWindowLength; i < static_cast<std::size_t>((frames - 1) * kHop); ++i) {
    num += (a.samples[i] - b.samples[i]) * (a.samples[i] - b.samples[i]);
    den += a.samples[i] * a.samples[i];
  }
  return std::sqrt(num / den);
}

Waveform noise_signal(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 0.3);
  Waveform w;
  w.samples.resize(n);
  for (double& v : w.samples) v = dist(rng);
  return w;
}

Waveform tone_signal(double freq, std::size_t n) {
  Waveform w;
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    w.samples[i] = 0.5 * std::sin(2.0 * std::numbers::pi * freq * i / kAnalysisRate);
  }
  return w;
}

Outcome stft_roundtrip() {
  Check c;
  double worst = 0.0;
  for (const Waveform& x : {noise_signal(48000, 5), tone_signal(1000.0, 48000),
                            tone_signal(523.25, 30000)}) {
    const ComplexSpectrogram s = stft(x);
    worst = std::max(worst, interior_error(x, istft(s), s.frames()));
  }
  c.require(worst < 1e-10, "interior relative error " + fmt("%.3e", worst));
  c.note("interior relative error " + fmt("%.3e", worst) + " (" +
         fmt("%.1f", 20.0 * std::log10(worst)) + " dB)");
  return c.result();
}

Outcome mask_conservation() {
  Check c;
  const Waveform x = noise_signal(40000, 6);
  const ComplexSpectrogram mix = stft(x);
  const Waveform full = istft(mix);
  std::mt19937_64 rng(7);
  std::exponential_distribution<double> dist(1.0);
  Matrix a(mix.bins.rows(), mix.frames()), b(a.rows(), a.cols());
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      a(i, j) = (i + j) % 11 == 0 ? 0.0 : dist(rng);
      b(i, j) = (i + j) % 13 == 0 ? 0.0 : dist(rng);
    }
  }
  const MaskPair m = soft_mask(a, b);
  const double mask_err = (m.m1 + m.m2 - Matrix::Ones(a.rows(), a.cols())).cwiseAbs().maxCoeff();
  const auto [s1, s2] = apply_mask_and_reconstruct(mix, m);
  double recon_err = 0.0;
  for (std::size_t i = 0; i < full.size(); ++i) {
    recon_err = std::max(recon_err, std::abs(s1.samples[i] + s2.samples[i] - full.samples[i]));
  }
  c.require(mask_err <= 1e-12, "mask sum error " + fmt("%.3e", mask_err));
  c.require(recon_err < 1e-10, "reconstruction sum error " + fmt("%.3e", recon_err));
  c.note("mask sum error " + fmt("%.2e", mask_err) + ", reconstruction error " +
         fmt("%.2e", recon_err));
  return c.result();
}

Outcome bss_sanity() {
  Check c;
  std::mt19937_64 rng(8);
  std::normal_distribution<double> dist(0.0, 1.0);
  const std::size_t T = 16000;
  std::vector<std::vector<double>> refs(2, std::vector<double>(T));
  for (auto& r : refs)
    for (double& v : r) v = dist(rng);

  const BssResult perfect = sdr_sir_sar(bss_decompose(refs[0], refs, 0));
  c.require(perfect.sdr == kMetricCapDb && perfect.sir == kMetricCapDb &&
                perfect.sar == kMetricCapDb,
            "perfect estimate not capped: SDR " + fmt("%.3f", perfect.sdr));

  // Exactly orthogonal equal-energy references.
  const std::size_t n = 4096;
  std::vector<double> r1(n), r2(n), sum(n);
  for (std::size_t t = 0; t < n; ++t) {
    r1[t] = std::sin(2.0 * std::numbers::pi * 37.0 * t / n);
    r2[t] = std::sin(2.0 * std::numbers::pi * 101.0 * t / n);
    sum[t] = r1[t] + r2[t];
  }
  const double sir = sdr_sir_sar(bss_decompose(sum, {r1, r2}, 0, 1)).sir;
  c.require(std::abs(sir) <= 0.1, "orthogonal SIR " + fmt("%.4f", sir));

  std::vector<double> est(T), scaled(T);
  for (std::size_t t = 0; t < T; ++t) {
    est[t] = refs[0][t] + 0.3 * refs[1][t] + 0.2 * dist(rng);
    scaled[t] = 2.0 * est[t];
  }
  const BssProjector proj(refs);
  const BssResult a = sdr_sir_sar(proj.decompose(est, 0));
  const BssResult b = sdr_sir_sar(proj.decompose(scaled, 0));
  const double drift = std::max({std::abs(a.sdr - b.sdr), std::abs(a.sir - b.sir),
                                 std::abs(a.sar - b.sar)});
  c.require(drift <= 1e-6, "scale drift " + fmt("%.3e", drift));
  c.note("orthogonal SIR " + fmt("%.2e", sir) + " dB, scale drift " + fmt("%.2e", drift) + " dB");
  return c.result();
}

Outcome parameter_count() {
  Check c;
  const std::vector<Index> widths{kBins, 512, 512, 512, 2 * kBins};
  const std::int64_t cv = param_count(init_vp_network(widths, 0));
  const std::int64_t d1 = param_count(init_real_network(ModelKind::DNN1, widths, 0));
  c.require(cv == 3 * d1, "CVPNN " + std::to_string(cv) + " vs 3 x DNN1 " + std::to_string(3 * d1));
  c.note("CVPNN " + std::to_string(cv) + " = 3 x " + std::to_string(d1));
  return c.result();
}

Outcome desk_scale() {
  Check c;
  const fs::path root = scratch_dir("desk");
  SynthOptions opts;
  opts.seed = 0;
  opts.train_clips = 6;
  opts.test_clips = 4;
  opts.duration_s = 4.0;
  const DatasetManifest manifest = synth_dataset(root, opts);
  const EvaluationOptions eval_opts;

  const EvaluationReport oracle = evaluate(
      manifest,
      [](const ClipAudio& a) { return ideal_soft_mask(a.mixture, *a.vocal, *a.music); },
      eval_opts, "IdealSoftMask", "-", 1);

  for (ModelKind kind : {ModelKind::CVPNN, ModelKind::WVPNN}) {
    ExperimentConfig cfg;
    cfg.model = kind;
    cfg.hidden_width = 64;
    cfg.hidden_layers = 2;
    cfg.epochs = 50;
    cfg.seed = 0;
    const TrainingResult r = train(cfg, manifest);
    const double first = r.loss_history.front();
    const double last = r.loss_history.back();
    const EvaluationReport rep = evaluate(r.checkpoint, manifest, eval_opts);
    const std::string name(to_string(kind));
    c.require(last < 0.5 * first, name + " J " + fmt("%.4g", first) + " -> " + fmt("%.4g", last));
    c.require(rep.vocal.gnsdr > 0.0, name + " GNSDR " + fmt("%.3f", rep.vocal.gnsdr));
    c.require(oracle.vocal.gnsdr > rep.vocal.gnsdr,
              "oracle GNSDR " + fmt("%.3f", oracle.vocal.gnsdr) + " <= " + name);
    c.note(name + " J " + fmt("%.4g", first) + " -> " + fmt("%.4g", last) + ", GNSDR " +
           fmt("%.2f", rep.vocal.gnsdr) + " dB");
  }
  c.note("ideal soft mask GNSDR " + fmt("%.2f", oracle.vocal.gnsdr) + " dB");
  return c.result();
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, '\t')) out.push_back(field);
  return out;
}

std::vector<std::vector<std::string>> read_tsv(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) rows.push_back(split_tabs(line));
  return rows;
}

Outcome protocol_fidelity() {
  Check c;
  const fs::path root = scratch_dir("protocol");
  // Three clips of 1, 2 and 4 seconds.
  DatasetManifest m;
  m.root = root;
  const std::vector<double> seconds{1.0, 2.0, 4.0};
  std::mt19937_64 rng(9);
  std::normal_distribution<double> noise(0.0, 0.1);
  for (std::size_t i = 0; i < seconds.size(); ++i) {
    const std::string id = "clip" + std::to_string(i);
    m.clips.push_back({id, "test", seconds[i]});
    const std::size_t n = static_cast<std::size_t>(seconds[i] * kAnalysisRate);
    Waveform vocal, music;
    for (std::size_t t = 0; t < n; ++t) {
      vocal.samples.push_back(0.3 * std::sin(2.0 * std::numbers::pi * (220.0 + 50.0 * i) * t /
                                             kAnalysisRate));
      music.samples.push_back(noise(rng));
    }
    fs::create_directories(root / id);
    wav_write(root / id / "vocal.wav", vocal, SampleFormat::Float32);
    wav_write(root / id / "music.wav", music, SampleFormat::Float32);
  }
  write_manifest(m);

  const std::string prefix = (root / "report").string();
  const std::vector<std::string> args{"vpnn",          "evaluate", "--oracle", "soft",
                                      "--data",        root.string(), "--filter-len", "64",
                                      "--out",         prefix};
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  c.require(code == 0, "evaluate exited " + std::to_string(code) + ": " + err.str());
  if (code != 0) return c.result();

  const auto summary = read_tsv(prefix + ".tsv");
  c.require(summary.size() == 2, "summary rows " + std::to_string(summary.size()));
  c.require(summary[0] == std::vector<std::string>{"model", "arch", "context", "GNSDR", "GSIR",
                                                   "GSAR"},
            "summary header differs");
  const auto clips = read_tsv(prefix + ".clips.tsv");

  // Hand computation from the per-clip table: w_i = len_i / Σ len.
  double total = 0.0, nsdr = 0.0, sir = 0.0, sar = 0.0;
  std::vector<double> lengths;
  for (std::size_t r = 1; r < clips.size(); ++r) {
    if (clips[r][2] != "vocal") continue;
    const double len = std::stod(clips[r][1]);
    lengths.push_back(len);
    total += len;
    nsdr += len * std::stod(clips[r][4]);
    sir += len * std::stod(clips[r][5]);
    sar += len * std::stod(clips[r][6]);
  }
  c.require(lengths == std::vector<double>{16000, 32000, 64000}, "clip lengths differ");
  const double gnsdr = std::stod(summary[1][3]);
  const double gsir = std::stod(summary[1][4]);
  const double gsar = std::stod(summary[1][5]);
  const double err_max = std::max({std::abs(gnsdr - nsdr / total), std::abs(gsir - sir / total),
                                   std::abs(gsar - sar / total)});
  c.require(err_max <= 1e-12, "weighted mean error " + fmt("%.3e", err_max));
  c.note("GNSDR " + fmt("%.4f", gnsdr) + " dB, max deviation from hand mean " +
         fmt("%.1e", err_max));
  return c.result();
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "cross-product algebra", 1.0, cross_algebra},
      {2, "vector product vs naive oracle", 1.0, product_oracle},
      {3, "analytic vs finite-difference gradients", 30.0, gradients},
      {4, "transform roundtrips and projection", 5.0, transforms},
      {5, "STFT/iSTFT roundtrip", 5.0, stft_roundtrip},
      {6, "mask conservation", 5.0, mask_conservation},
      {7, "BSS Eval sanity", 30.0, bss_sanity},
      {8, "parameter count", 1.0, parameter_count},
      {9, "desk-scale end-to-end", 600.0, desk_scale},
      {10, "evaluation protocol fidelity", 60.0, protocol_fidelity},
  };
  int failures = 0;
  for (const auto& cr : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = cr.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && secs > cr.budget_s) {
      o = {false, "took " + fmt("%.2f", secs) + " s, budget " + fmt("%.0f", cr.budget_s) + " s"};
    }
    if (!o.ok) ++failures;
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << cr.id << ": " << cr.name << " ("
              << fmt("%.2f", secs) << " s) " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
