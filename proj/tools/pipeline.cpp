#include "pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pattern_spec.hpp"
#include "spivc/measure.hpp"
#include "spivc/patterns.hpp"
#include "spivc/pnm.hpp"
#include "spivc/qr.hpp"
#include "spivc/reconstruct.hpp"
#include "spivc/sample.hpp"
#include "spivc/series_io.hpp"
#include "spivc/vc_opaque.hpp"
#include "spivc/vc_patterns.hpp"

namespace spivc::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

[[noreturn]] void fail(const std::string& stage, const std::string& msg) {
  throw PipelineError(stage, msg);
}

// Runs one stage, tagging any escaping library error with the stage name.
template <typename F>
auto stage(const char* name, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    fail(name, e.what());
  }
}

// --- manifest field helpers (defaults applied, normalized echo kept) ---

json section(const json& manifest, const std::string& key,
             json fallback = json::object()) {
  if (!manifest.contains(key)) return fallback;
  if (!manifest.at(key).is_object())
    fail("parse", "'" + key + "' must be an object");
  return manifest.at(key);
}

NoiseModel parse_noise(const json& j) {
  NoiseModel model;
  const std::string kind = j.value("kind", "none");
  if (kind == "none")
    model.kind = NoiseKind::kNone;
  else if (kind == "additive-gaussian")
    model.kind = NoiseKind::kAdditiveGaussian;
  else
    fail("parse", "noise.kind must be \"none\" or \"additive-gaussian\"");
  model.sigma = j.value("sigma", 0.0);
  model.seed = j.value("seed", std::uint64_t(0));
  if (model.kind == NoiseKind::kNone && model.sigma != 0.0)
    fail("parse", "noise.sigma requires noise.kind \"additive-gaussian\"");
  return model;
}

json noise_echo(const NoiseModel& m) {
  return {{"kind", m.kind == NoiseKind::kNone ? "none" : "additive-gaussian"},
          {"sigma", m.sigma},
          {"seed", m.seed}};
}

SolverConfig parse_solver(const json& j) {
  SolverConfig cfg;
  const std::string method = j.value("method", "tv");
  if (method == "correlation")
    cfg.method = SolveMethod::kCorrelation;
  else if (method == "lsq")
    cfg.method = SolveMethod::kLeastSquares;
  else if (method == "tv")
    cfg.method = SolveMethod::kTv;
  else
    fail("parse", "solver.method must be correlation, lsq, or tv");
  cfg.lambda = j.value("lambda", -1.0);
  cfg.max_iters = j.value("max_iters", cfg.max_iters);
  cfg.tol = j.value("tol", cfg.tol);
  cfg.nonneg = j.value("nonneg", false);
  return cfg;
}

json solver_echo(const SolverConfig& cfg) {
  const char* name = cfg.method == SolveMethod::kCorrelation ? "correlation"
                     : cfg.method == SolveMethod::kLeastSquares ? "lsq"
                                                                : "tv";
  return {{"method", name},
          {"lambda", cfg.lambda},
          {"max_iters", cfg.max_iters},
          {"tol", cfg.tol},
          {"nonneg", cfg.nonneg}};
}

// Secrets and objects may come from files; relative paths resolve against
// the manifest's own directory so manifests stay relocatable.
std::string resolve(const fs::path& manifest_dir, const std::string& path) {
  fs::path p(path);
  return p.is_absolute() ? p.string() : (manifest_dir / p).string();
}

BitMatrix load_secret(const json& j, int width, int height,
                      const fs::path& manifest_dir) {
  const std::string kind = j.value("kind", "glyph");
  if (kind == "glyph")
    return sample::ok_glyph(width, height, j.value("scale", 0));
  if (kind == "file") {
    if (!j.contains("path")) fail("parse", "secret.kind=file needs a path");
    BitMatrix m = read_pbm(resolve(manifest_dir, j.at("path")));
    if (m.width != width || m.height != height)
      fail("parse", "secret file dimensions do not match dims");
    return m;
  }
  fail("parse", "secret.kind must be \"glyph\" or \"file\"");
}

Image load_object(const json& j, int width, int height,
                  const fs::path& manifest_dir) {
  const std::string kind = j.value("kind", "scene");
  if (kind == "scene")
    return sample::scene(width, height, j.value("variant", 0));
  if (kind == "zero") return Image(width, height, 0.0);
  if (kind == "file") {
    if (!j.contains("path")) fail("parse", "object.kind=file needs a path");
    Image img = read_image_any(resolve(manifest_dir, j.at("path")));
    if (img.width != width || img.height != height)
      fail("parse", "object file dimensions do not match dims");
    return img;
  }
  fail("parse", "object.kind must be \"scene\", \"zero\", or \"file\"");
}

// --- threshold bookkeeping ---

struct Checks {
  json list = json::array();
  bool all_pass = true;

  void add_ge(const std::string& name, double measured, double required) {
    bool pass = measured >= required;
    list.push_back({{"name", name},
                    {"required_min", required},
                    {"measured", measured},
                    {"pass", pass}});
    all_pass = all_pass && pass;
  }
  void add_le(const std::string& name, double measured, double required) {
    bool pass = measured <= required;
    list.push_back({{"name", name},
                    {"required_max", required},
                    {"measured", measured},
                    {"pass", pass}});
    all_pass = all_pass && pass;
  }
  void add_flag(const std::string& name, bool measured) {
    list.push_back({{"name", name}, {"required", true}, {"measured", measured},
                    {"pass", measured}});
    all_pass = all_pass && measured;
  }
};

void write_image_outputs(const Image& img, const fs::path& dir,
                         const std::string& stem) {
  write_pgm(img, (dir / (stem + ".pgm")).string());
  write_image_json(img, (dir / (stem + ".json")).string());
}

// --- scheme runners; each fills `results`, `outputs`, and `checks` ---

void run_opaque_qr(const json& manifest, const fs::path& manifest_dir,
                   const fs::path& out, json& echo, json& results,
                   json& outputs, Checks& checks) {
  const json dims = section(manifest, "dims");
  const std::string text = manifest.value("text", "");
  const int version = manifest.value("version", 4);
  const std::string ec_name = manifest.value("ec", "H");
  const json seeds = section(manifest, "seeds");
  const std::uint64_t share_seed = seeds.value("share", std::uint64_t(0));
  const std::uint64_t pattern_seed = seeds.value("pattern", std::uint64_t(0));
  const int n = manifest.value("n", 0);
  const std::string assignment_name = manifest.value("assignment", "random");
  const NoiseModel noise = parse_noise(section(manifest, "noise"));
  const SolverConfig solver = parse_solver(section(manifest, "solver"));
  const json thresholds = section(manifest, "thresholds");

  qr::QrSymbol symbol;
  try {
    symbol = qr::qr_encode(text, version, qr::ec_level_from_string(ec_name));
  } catch (const std::exception& e) {
    fail("encode", e.what());
  }
  const int w = symbol.matrix.width, h = symbol.matrix.height;
  if (dims.contains("width") &&
      (dims.value("width", 0) != w || dims.value("height", 0) != h))
    fail("parse", "dims do not match the symbol side for this version");

  BitMatrix secret =
      load_secret(section(manifest, "secret"), w, h, manifest_dir);

  ShareAssignment assignment;
  if (assignment_name == "random")
    assignment = ShareAssignment::kRandom;
  else if (assignment_name == "balanced")
    assignment = ShareAssignment::kBalanced;
  else
    fail("parse", "assignment must be \"random\" or \"balanced\"");

  ModificationBudget budget = modification_budget(secret, symbol);
  results["modification_budget"] = {
      {"per_key_expected", budget.per_key_expected},
      {"per_block_worst", budget.per_block_worst},
      {"ok", budget.ok}};

  SharePair pair;
  try {
    pair = encode_shares(symbol.matrix, secret, share_seed, assignment);
  } catch (const std::exception& e) {
    fail("shares", e.what());
  }
  write_pbm(pair.key1, (out / "key1.pbm").string());
  write_pbm(pair.key2, (out / "key2.pbm").string());
  outputs["key1"] = "key1.pbm";
  outputs["key2"] = "key2.pbm";

  // Both modified keys must still carry the original message.
  json decodes = json::array();
  bool keys_ok = true;
  for (const BitMatrix* key : {&pair.key1, &pair.key2}) {
    try {
      qr::Decoded d = qr::qr_decode(*key);
      decodes.push_back({{"message", d.message},
                         {"corrected_errors", d.corrected_errors},
                         {"matches", d.message == text}});
      keys_ok = keys_ok && d.message == text;
    } catch (const qr::DecodeError& e) {
      decodes.push_back({{"error", e.what()}, {"matches", false}});
      keys_ok = false;
    }
  }
  results["key_decodes"] = decodes;

  if (n <= 0) fail("parse", "n must be positive");
  PatternSequence patterns = stage(
      "patterns", [&] { return generate_patterns(w, h, n, pattern_seed); });

  MeasurementSeries series = stage("measure", [&] {
    MeasurementSeries s = measure_combined(
        {to_image(pair.key1), to_image(pair.key2)}, {patterns, patterns});
    if (noise.kind != NoiseKind::kNone) s = add_noise(s, noise);
    write_series(s, (out / "series.json").string());
    return s;
  });
  outputs["series"] = "series.json";

  Image recon = stage("reconstruct", [&] {
    Image r = reconstruct(series, patterns, solver);
    write_image_outputs(r, out, "recon");
    return r;
  });
  outputs["recon"] = "recon.pgm";

  BitMatrix extracted = stage("reveal", [&] {
    Image rescaled = rescale_overlay(recon);
    BitMatrix bits = extract_secret_from_overlay(rescaled);
    write_pbm(bits, (out / "secret_extracted.pbm").string());
    return bits;
  });
  outputs["secret_extracted"] = "secret_extracted.pbm";

  stage("metrics", [&] {
    results["dot_accuracy"] = dot_accuracy(extracted, secret);
    results["overlay_psnr"] = psnr(recon, overlay(pair.key1, pair.key2));
  });

  if (thresholds.value("keys_decode", true))
    checks.add_flag("keys_decode", keys_ok);
  if (thresholds.contains("dot_accuracy"))
    checks.add_ge("dot_accuracy", results["dot_accuracy"].get<double>(),
                  thresholds.at("dot_accuracy").get<double>());
  if (thresholds.contains("overlay_psnr"))
    checks.add_ge("overlay_psnr", results["overlay_psnr"].get<double>(),
                  thresholds.at("overlay_psnr").get<double>());

  echo["text"] = text;
  echo["version"] = version;
  echo["ec"] = ec_name;
  echo["assignment"] = assignment_name;
  echo["n"] = n;
  echo["seeds"] = {{"share", share_seed}, {"pattern", pattern_seed}};
  echo["noise"] = noise_echo(noise);
  echo["solver"] = solver_echo(solver);
}

void run_pattern_share(const json& manifest, const fs::path& manifest_dir,
                       const fs::path& out, json& echo, json& results,
                       json& outputs, Checks& checks) {
  const json dims = section(manifest, "dims");
  const int w = dims.value("width", 0), h = dims.value("height", 0);
  const int n = manifest.value("n", 0);
  const json seeds = section(manifest, "seeds");
  const std::uint64_t base_seed = seeds.value("pair_base", std::uint64_t(0));
  const std::uint64_t orient_seed =
      seeds.value("pair_orient", std::uint64_t(0));
  const std::uint64_t ref_seed = seeds.value("reference", std::uint64_t(0));
  const NoiseModel noise = parse_noise(section(manifest, "noise"));
  const SolverConfig solver = parse_solver(section(manifest, "solver"));
  const json thresholds = section(manifest, "thresholds");

  BitMatrix secret =
      load_secret(section(manifest, "secret"), w, h, manifest_dir);
  Image object = load_object(section(manifest, "object"), w, h, manifest_dir);

  PatternSharePair pair;
  try {
    pair = encode_pattern_shares(w, h, n, secret, base_seed, orient_seed);
  } catch (const std::exception& e) {
    fail("shares", e.what());
  }
  write_json_file(share_spec(pair, 'a'), (out / "patterns_a.json").string());
  write_json_file(share_spec(pair, 'b'), (out / "patterns_b.json").string());
  outputs["patterns_a"] = "patterns_a.json";
  outputs["patterns_b"] = "patterns_b.json";

  // Holder-side exact check: superposing the two sequences pins down the
  // secret's support with no measurement at all.
  results["pattern_domain_accuracy"] =
      dot_accuracy(reveal_secret_from_patterns(pair), secret);

  // One detector sees the object under both sequences at once; the
  // reference run uses an ordinary sequence on the same object. With
  // noise enabled the two series draw from consecutive seeds.
  PatternSequence reference = stage(
      "patterns", [&] { return generate_patterns(w, h, n, ref_seed); });

  auto [combined, single] = stage("measure", [&] {
    MeasurementSeries comb =
        measure_combined({object, object}, {pair.seq_a, pair.seq_b});
    MeasurementSeries sing = measure(object, reference);
    if (noise.kind != NoiseKind::kNone) {
      comb = add_noise(comb, noise);
      NoiseModel ref_noise = noise;
      ref_noise.seed = noise.seed + 1;
      sing = add_noise(sing, ref_noise);
    }
    write_series(comb, (out / "series_combined.json").string());
    write_series(sing, (out / "series_reference.json").string());
    return std::pair{comb, sing};
  });
  outputs["series_combined"] = "series_combined.json";
  outputs["series_reference"] = "series_reference.json";

  auto [recon_combined, recon_reference] = stage("reconstruct", [&] {
    Image rc = reconstruct(combined, pair.seq_a, solver);
    Image rr = reconstruct(single, reference, solver);
    write_image_outputs(rc, out, "recon_combined");
    write_image_outputs(rr, out, "recon_reference");
    return std::pair{rc, rr};
  });
  outputs["recon_combined"] = "recon_combined.pgm";
  outputs["recon_reference"] = "recon_reference.pgm";

  BitMatrix revealed = stage("reveal", [&] {
    BitMatrix bits =
        reveal_secret_from_reconstruction(recon_combined, recon_reference);
    write_pbm(bits, (out / "secret_revealed.pbm").string());
    return bits;
  });
  outputs["secret_revealed"] = "secret_revealed.pbm";

  stage("metrics", [&] {
    results["f1"] = f1_score(revealed, secret);
    results["reference_psnr"] = psnr(recon_reference, object);
  });

  if (thresholds.contains("f1"))
    checks.add_ge("f1", results["f1"].get<double>(),
                  thresholds.at("f1").get<double>());
  if (thresholds.contains("pattern_domain_accuracy"))
    checks.add_ge("pattern_domain_accuracy",
                  results["pattern_domain_accuracy"].get<double>(),
                  thresholds.at("pattern_domain_accuracy").get<double>());

  echo["dims"] = {{"width", w}, {"height", h}};
  echo["n"] = n;
  echo["seeds"] = {{"pair_base", base_seed},
                   {"pair_orient", orient_seed},
                   {"reference", ref_seed}};
  echo["noise"] = noise_echo(noise);
  echo["solver"] = solver_echo(solver);
}

void run_plain_spi(const json& manifest, const fs::path& manifest_dir,
                   const fs::path& out, json& echo, json& results,
                   json& outputs, Checks& checks) {
  const json dims = section(manifest, "dims");
  const int w = dims.value("width", 0), h = dims.value("height", 0);
  const int n = manifest.value("n", 0);
  const json seeds = section(manifest, "seeds");
  const std::uint64_t pattern_seed = seeds.value("pattern", std::uint64_t(0));
  const NoiseModel noise = parse_noise(section(manifest, "noise"));
  const SolverConfig solver = parse_solver(section(manifest, "solver"));
  const json thresholds = section(manifest, "thresholds");

  Image object = load_object(section(manifest, "object"), w, h, manifest_dir);

  PatternSequence patterns = stage(
      "patterns", [&] { return generate_patterns(w, h, n, pattern_seed); });

  MeasurementSeries series = stage("measure", [&] {
    MeasurementSeries s = measure(object, patterns);
    if (noise.kind != NoiseKind::kNone) s = add_noise(s, noise);
    write_series(s, (out / "series.json").string());
    return s;
  });
  outputs["series"] = "series.json";

  Image recon = stage("reconstruct", [&] {
    Image r = reconstruct(series, patterns, solver);
    write_image_outputs(r, out, "recon");
    return r;
  });
  outputs["recon"] = "recon.pgm";

  stage("metrics", [&] {
    results["psnr"] = psnr(recon, object);
    double max_abs = 0.0;
    for (double v : recon.pixels) max_abs = std::max(max_abs, std::abs(v));
    results["recon_max_abs"] = max_abs;
  });

  if (thresholds.contains("psnr"))
    checks.add_ge("psnr", results["psnr"].get<double>(),
                  thresholds.at("psnr").get<double>());
  if (thresholds.contains("recon_max_abs"))
    checks.add_le("recon_max_abs", results["recon_max_abs"].get<double>(),
                  thresholds.at("recon_max_abs").get<double>());

  echo["dims"] = {{"width", w}, {"height", h}};
  echo["n"] = n;
  echo["seeds"] = {{"pattern", pattern_seed}};
  echo["noise"] = noise_echo(noise);
  echo["solver"] = solver_echo(solver);
}

}  // namespace

int run_pipeline(const std::string& manifest_path, std::string out_dir) {
  json manifest;
  try {
    manifest = read_json_file(manifest_path);
  } catch (const std::exception& e) {
    fail("parse", e.what());
  }
  const fs::path manifest_dir = fs::path(manifest_path).parent_path();

  if (out_dir.empty()) out_dir = manifest.value("out_dir", ".");
  fs::path out(out_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) fail("write", "cannot create out dir '" + out_dir + "'");

  const std::string scheme = manifest.value("scheme", "");
  json echo{{"scheme", scheme}};
  json results = json::object();
  json outputs = json::object();
  Checks checks;

  if (scheme == "opaque-qr")
    run_opaque_qr(manifest, manifest_dir, out, echo, results, outputs, checks);
  else if (scheme == "pattern-share")
    run_pattern_share(manifest, manifest_dir, out, echo, results, outputs,
                      checks);
  else if (scheme == "plain-spi")
    run_plain_spi(manifest, manifest_dir, out, echo, results, outputs, checks);
  else
    fail("parse",
         "scheme must be opaque-qr, pattern-share, or plain-spi");

  json report{{"scheme", scheme},
              {"manifest", echo},
              {"results", results},
              {"outputs", outputs},
              {"checks", checks.list},
              {"pass", checks.all_pass}};
  write_json_file(report, (out / "report.json").string());
  return checks.all_pass ? 0 : 3;
}

}  // namespace spivc::cli
