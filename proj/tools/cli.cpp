// Copyright The cirng Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "cirng/attacks.hpp"
#include "cirng/image.hpp"
#include "cirng/pipeline.hpp"
#include "cirng/stats.hpp"
#include "cirng/watermark.hpp"

namespace cirng::cli {

namespace {

constexpr std::pair<GeneratorKind, std::string_view> kGeneratorNames[] = {
    {GeneratorKind::xorshift, "xorshift"},
    {GeneratorKind::bbs, "bbs"},
    {GeneratorKind::ciprng_v1, "ciprng-v1"},
    {GeneratorKind::ciprng_v2, "ciprng-v2"},
    {GeneratorKind::ciprng_fpga, "ciprng-fpga"},
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::optional<std::uint64_t> parse_uint(std::string_view s, int base) {
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v, base);
  if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
  return v;
}

std::optional<std::uint64_t> parse_hex_word(std::string_view s) {
  s = trim(s);
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) s.remove_prefix(2);
  if (s.empty() || s.size() > 16) return std::nullopt;
  return parse_uint(s, 16);
}

std::uint64_t script_number(std::string_view token, std::size_t line) {
  auto v = parse_uint(token, 10);
  if (!v) {
    throw FormatError("script line " + std::to_string(line) + ": bad integer '" +
                      std::string(token) + "'");
  }
  return *v;
}

std::unique_ptr<EntropySource> scripted(const std::vector<std::uint64_t>& values, const char* label) {
  if (values.empty()) throw PreconditionError(std::string("script has no '") + label + "' values");
  return make_scripted_source(values, label);
}

std::uint64_t seed_at(const std::vector<std::uint64_t>& seeds, std::size_t i) {
  return expand_seed(seeds.empty() ? std::vector<std::uint64_t>{1} : seeds, i + 1)[i];
}

}  // namespace

std::string_view generator_name(GeneratorKind kind) {
  for (const auto& [k, name] : kGeneratorNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<GeneratorKind> parse_generator_name(std::string_view name) {
  for (const auto& [k, n] : kGeneratorNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

StreamScript parse_stream_script(std::string_view text) {
  StreamScript script;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw FormatError("script line " + std::to_string(line_no) + ": missing label");
    }
    const std::string label(trim(line.substr(0, colon)));
    const auto words = tokens(line.substr(colon + 1));

    auto numbers = [&] {
      std::vector<std::uint64_t> v;
      for (auto w : words) v.push_back(script_number(w, line_no));
      return v;
    };
    auto single = [&]() -> std::uint64_t {
      if (words.size() != 1) {
        throw FormatError("script line " + std::to_string(line_no) + ": '" + label +
                          "' takes one value");
      }
      return script_number(words[0], line_no);
    };

    if (label == "prng1") {
      for (auto v : numbers()) script.prng1.push_back(v);
    } else if (label == "prng2") {
      for (auto v : numbers()) script.prng2.push_back(v);
    } else if (label == "xs1") {
      for (auto v : numbers()) script.xs1.push_back(v);
    } else if (label == "xs2") {
      for (auto v : numbers()) script.xs2.push_back(v);
    } else if (label == "bbs") {
      for (auto v : numbers()) script.bbs.push_back(v);
    } else if (label == "x0") {
      BitSequence bits;
      if (words.size() == 1 && words[0].size() > 1) {
        bits = from_bit_string(words[0]);
      } else {
        for (auto v : numbers()) {
          if (v > 1) throw FormatError("script line " + std::to_string(line_no) + ": x0 takes bits");
          bits.push_back(static_cast<std::uint8_t>(v));
        }
      }
      if (bits.empty()) throw FormatError("script line " + std::to_string(line_no) + ": empty x0");
      script.x0 = std::move(bits);
    } else if (label == "n") {
      script.n = static_cast<std::size_t>(single());
    } else if (label == "c") {
      script.c = static_cast<unsigned>(single());
    } else if (label == "z") {
      const auto v = single();
      if (v > 0xffff) throw FormatError("script line " + std::to_string(line_no) + ": z exceeds 16 bits");
      script.z = static_cast<std::uint16_t>(v);
    } else {
      throw FormatError("script line " + std::to_string(line_no) + ": unknown label '" + label + "'");
    }
  }
  return script;
}

std::unique_ptr<BitStream> make_generator(const GeneratorConfig& config) {
  const auto& s = config.seeds;
  switch (config.kind) {
    case GeneratorKind::xorshift:
      if (config.script) throw PreconditionError("xorshift takes no stream script");
      return std::make_unique<XorshiftStream>(Xorshift64(seed_at(s, 0)));
    case GeneratorKind::bbs:
      if (config.script) throw PreconditionError("bbs takes no stream script");
      return std::make_unique<BbsStream>(Bbs::from_user_seed(seed_at(s, 0), config.modulus), config.k);
    case GeneratorKind::ciprng_v1:
    case GeneratorKind::ciprng_v2: {
      const bool v1 = config.kind == GeneratorKind::ciprng_v1;
      if (const auto& sc = config.script) {
        if (!sc->x0) throw PreconditionError("script has no 'x0' line");
        BooleanStateVector x0(*sc->x0);
        if (sc->n && *sc->n != x0.size()) throw PreconditionError("script 'n' disagrees with 'x0'");
        auto p1 = scripted(sc->prng1, "prng1");
        auto p2 = scripted(sc->prng2, "prng2");
        if (v1) return std::make_unique<CiprngV1>(std::move(x0), std::move(p1), std::move(p2), sc->c.value_or(config.c));
        return std::make_unique<CiprngV2>(std::move(x0), std::move(p1), std::move(p2));
      }
      if (config.n < 1 || config.n > 64) throw PreconditionError("state size must lie in [1,64]");
      auto x0 = BooleanStateVector::from_word(seed_at(s, 0), config.n);
      if (v1) {
        return std::make_unique<CiprngV1>(std::move(x0),
                                          make_bbs_source(seed_at(s, 1), 32, config.modulus),
                                          make_xorshift_source(seed_at(s, 2) ? seed_at(s, 2) : 1),
                                          config.c);
      }
      return std::make_unique<CiprngV2>(std::move(x0),
                                        make_xorshift_source(seed_at(s, 1) ? seed_at(s, 1) : 1),
                                        make_xorshift_source(seed_at(s, 2) ? seed_at(s, 2) : 2));
    }
    case GeneratorKind::ciprng_fpga:
      if (const auto& sc = config.script) {
        return std::make_unique<FpgaCiprng>(sc->z.value_or(0), scripted(sc->xs1, "xs1"),
                                            scripted(sc->xs2, "xs2"), scripted(sc->bbs, "bbs"));
      }
      return std::make_unique<FpgaCiprng>(
          FpgaCiprng::from_seeds(FpgaSeeds::from_words(s.empty() ? std::vector<std::uint64_t>{1} : s)));
  }
  throw PreconditionError("unknown generator");
}

std::vector<std::uint64_t> parse_hex_list(std::string_view text) {
  std::vector<std::uint64_t> out;
  while (true) {
    const std::size_t comma = text.find(',');
    const auto word = text.substr(0, comma);
    const auto v = parse_hex_word(word);
    if (!v) throw UsageError("malformed hex word '" + std::string(trim(word)) + "'");
    out.push_back(*v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::vector<std::uint64_t> parse_key_file(std::string_view text) {
  std::vector<std::uint64_t> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto v = parse_hex_word(line);
    if (!v) throw FormatError("key line " + std::to_string(line_no) + ": malformed hex word");
    out.push_back(*v);
  }
  if (out.empty()) throw FormatError("key file holds no words");
  return out;
}

// ---------------------------------------------------------------------------

namespace {

namespace fs = std::filesystem;

void check_input(const std::string& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw IoError("cannot open " + path);
}

void check_output(const std::string& path) {
  std::error_code ec;
  const fs::path p(path);
  const fs::path parent = p.parent_path();
  if (!parent.empty() && !fs::is_directory(parent, ec)) {
    throw IoError("output directory does not exist: " + parent.string());
  }
  if (fs::is_directory(p, ec)) throw IoError("output path is a directory: " + path);
}

WatermarkMode parse_mode(const std::string& s) {
  return s == "auth" ? WatermarkMode::authenticated : WatermarkMode::unauthenticated;
}

std::pair<std::size_t, std::size_t> parse_size(const std::string& s) {
  const auto x = s.find('x');
  if (x == std::string::npos) throw UsageError("size must look like WxH");
  const auto w = parse_uint(std::string_view(s).substr(0, x), 10);
  const auto h = parse_uint(std::string_view(s).substr(x + 1), 10);
  if (!w || !h || *w == 0 || *h == 0) throw UsageError("size must look like WxH with positive W, H");
  return {static_cast<std::size_t>(*w), static_cast<std::size_t>(*h)};
}

std::string to_hex(const BitSequence& bits) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (auto byte : pack_bits(bits)) {
    out += kDigits[byte >> 4];
    out += kDigits[byte & 0xf];
  }
  return out;
}

// ASCII 0/1 text when the file holds only those and whitespace, raw bytes
// (MSB first) otherwise.
BitSequence read_bit_file(const std::string& path) {
  const std::string bytes = read_file(path);
  const bool text = std::all_of(bytes.begin(), bytes.end(), [](char c) {
    return c == '0' || c == '1' || std::isspace(static_cast<unsigned char>(c));
  });
  if (text) return from_bit_string(bytes);
  BitSequence bits;
  bits.reserve(bytes.size() * 8);
  for (char c : bytes) append_word_bits(bits, static_cast<unsigned char>(c), 8);
  return bits;
}

void emit(std::ostream& out, const std::optional<std::string>& path, const std::string& text) {
  if (path) {
    write_file(*path, text);
  } else {
    out << text;
  }
}

struct GeneratorFlags {
  std::string gen;
  std::string seed = "1";
  std::string script;
  std::size_t n = 32;
  unsigned c = 4;
  unsigned k = 4;
  std::uint32_t modulus = kDefaultBlumModulus;

  void attach(CLI::App* cmd, bool required) {
    auto* g = cmd->add_option("--gen", gen, "Generator")
                  ->check(CLI::IsMember({"xorshift", "bbs", "ciprng-v1", "ciprng-v2", "ciprng-fpga"}));
    if (required) g->required();
    cmd->add_option("--seed", seed, "Seed words, hex, comma separated")->capture_default_str();
    cmd->add_option("--script", script, "Scripted entropy streams (file)");
    cmd->add_option("--n", n, "State size for ciprng-v1/v2")->capture_default_str()->check(CLI::Range(1, 64));
    cmd->add_option("--c", c, "ciprng-v1 decimation offset")->capture_default_str();
    cmd->add_option("--k", k, "Bits per BBS squaring")->capture_default_str()->check(CLI::Range(1, 32));
    cmd->add_option("--modulus", modulus, "BBS Blum modulus")->capture_default_str();
  }

  void validate_paths() const {
    if (!script.empty()) check_input(script);
  }

  GeneratorConfig config() const {
    GeneratorConfig cfg;
    cfg.kind = *parse_generator_name(gen);
    cfg.seeds = parse_hex_list(seed);
    if (!script.empty()) cfg.script = parse_stream_script(read_file(script));
    cfg.n = n;
    cfg.c = c;
    cfg.k = k;
    cfg.modulus = modulus;
    return cfg;
  }
};

const char* kExitCodes =
    "\nExit codes:\n"
    "  0  success\n"
    "  1  internal error\n"
    "  2  usage error (unknown flag, bad value)\n"
    "  3  malformed input file\n"
    "  4  precondition violated (bad seed, size mismatch, ...)\n"
    "  5  file could not be opened or written\n"
    "  6  generator stopped (script exhausted or round limit hit)\n";

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Chaotic-iteration pseudorandom generators, randomness tests and watermarking"};
  app.name("cirng");
  app.footer(kExitCodes);
  app.require_subcommand(1);

  // generate
  GeneratorFlags gen_flags;
  long long gen_bits = 0;
  std::string gen_format = "raw";
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "Emit a bit stream");
  gen_flags.attach(generate, true);
  generate->add_option("--bits", gen_bits, "Number of bits")->required()->check(CLI::NonNegativeNumber);
  generate->add_option("--format", gen_format, "raw | hex")->check(CLI::IsMember({"raw", "hex"}))->capture_default_str();
  generate->add_option("--out", gen_out, "Output file (default stdout)");

  // test
  GeneratorFlags test_flags;
  std::string test_in;
  std::size_t test_sequences = 100;
  std::size_t test_bits = 20000;
  std::size_t test_jobs = std::max(1u, std::thread::hardware_concurrency());
  std::string test_format = "table";
  std::vector<std::string> test_names;
  auto* test = app.add_subcommand("test", "Run the statistical battery");
  test_flags.attach(test, false);
  test->add_option("--in", test_in, "Bits to test: ASCII 0/1 or raw bytes")->excludes("--gen");
  test->add_option("--sequences", test_sequences, "Sequence count")->capture_default_str()->check(CLI::PositiveNumber);
  test->add_option("--bits", test_bits, "Bits per sequence")->capture_default_str()->check(CLI::PositiveNumber);
  test->add_option("--jobs", test_jobs, "Worker threads")->check(CLI::PositiveNumber);
  test->add_option("--format", test_format, "table | lines")->check(CLI::IsMember({"table", "lines"}))->capture_default_str();
  test->add_option("--tests", test_names, "Subset of tests (default all)")->delimiter(',');
  stats::TestParams test_params;
  test->add_option("--block-m", test_params.block_frequency_m, "Block frequency block size")
      ->capture_default_str()->check(CLI::PositiveNumber);
  test->add_option("--serial-m", test_params.serial_m, "Serial pattern length")
      ->capture_default_str()->check(CLI::Range(3, 24));
  test->add_option("--apen-m", test_params.entropy_m, "Approximate entropy pattern length")
      ->capture_default_str()->check(CLI::Range(1, 23));

  // embed
  std::string emb_cover, emb_wm, emb_key, emb_mode = "unauth", emb_out;
  unsigned emb_lsc = 3;
  auto* embed_cmd = app.add_subcommand("embed", "Hide a PBM watermark in a PGM carrier");
  embed_cmd->add_option("--cover", emb_cover, "Carrier PGM")->required();
  embed_cmd->add_option("--wm", emb_wm, "Watermark PBM")->required();
  embed_cmd->add_option("--key", emb_key, "Key file, hex words")->required();
  embed_cmd->add_option("--mode", emb_mode, "auth | unauth")->check(CLI::IsMember({"auth", "unauth"}))->capture_default_str();
  embed_cmd->add_option("--lsc-bits", emb_lsc, "Low bit planes used")->check(CLI::Range(1, 4))->capture_default_str();
  embed_cmd->add_option("--out", emb_out, "Stego PGM")->required();

  // extract
  std::string ext_stego, ext_key, ext_mode = "unauth", ext_size, ext_out;
  unsigned ext_lsc = 3;
  auto* extract_cmd = app.add_subcommand("extract", "Recover a watermark");
  extract_cmd->add_option("--stego", ext_stego, "Stego PGM")->required();
  extract_cmd->add_option("--key", ext_key, "Key file, hex words")->required();
  extract_cmd->add_option("--mode", ext_mode, "auth | unauth")->check(CLI::IsMember({"auth", "unauth"}))->capture_default_str();
  extract_cmd->add_option("--lsc-bits", ext_lsc, "Low bit planes used")->check(CLI::Range(1, 4))->capture_default_str();
  extract_cmd->add_option("--wm-size", ext_size, "Watermark size WxH")->required();
  extract_cmd->add_option("--out", ext_out, "Recovered PBM")->required();

  // attack
  std::string atk_kind, atk_in, atk_out, atk_seed = "0", atk_interp = "nearest";
  double atk_param = 0.0;
  auto* attack_cmd = app.add_subcommand("attack", "Apply an attack to a PGM");
  attack_cmd->add_option("--kind", atk_kind, "crop | rotate | jpeg | noise")
      ->required()->check(CLI::IsMember({"crop", "rotate", "jpeg", "noise"}));
  attack_cmd->add_option("--param", atk_param, "Crop size, degrees, level or sigma")->required();
  attack_cmd->add_option("--noise-seed", atk_seed, "Noise seed, hex")->capture_default_str();
  attack_cmd->add_option("--interp", atk_interp, "Rotation sampling: nearest | bilinear")
      ->check(CLI::IsMember({"nearest", "bilinear"}))->capture_default_str();
  attack_cmd->add_option("--in", atk_in, "Input PGM")->required();
  attack_cmd->add_option("--out", atk_out, "Output PGM")->required();

  // similarity
  std::string sim_a, sim_b;
  auto* similarity_cmd = app.add_subcommand("similarity", "Percentage of equal bits of two PBMs");
  similarity_cmd->add_option("--a", sim_a, "First PBM")->required();
  similarity_cmd->add_option("--b", sim_b, "Second PBM")->required();

  // pipeline
  std::uint64_t pipe_cycles = 0;
  std::string pipe_mode = "overlapped", pipe_seed = "1,2";
  double pipe_mhz = 400.0;
  bool pipe_trace = false;
  auto* pipeline_cmd = app.add_subcommand("pipeline", "Cycle model of the hardware generator");
  pipeline_cmd->add_option("--cycles", pipe_cycles, "Clock cycles")->required()->check(CLI::PositiveNumber);
  pipeline_cmd->add_option("--mode", pipe_mode, "two-phase | overlapped")
      ->check(CLI::IsMember({"two-phase", "overlapped"}))->capture_default_str();
  pipeline_cmd->add_option("--mhz", pipe_mhz, "Clock frequency")->capture_default_str()->check(CLI::PositiveNumber);
  pipeline_cmd->add_option("--seed", pipe_seed, "Seed words [xs1, xs2, bbs, z], hex")->capture_default_str();
  pipeline_cmd->add_flag("--trace", pipe_trace, "Print one line per cycle");

  // reference
  std::string ref_carrier, ref_wm;
  auto* reference_cmd = app.add_subcommand("reference", "Write the built-in carrier and watermark");
  reference_cmd->add_option("--carrier", ref_carrier, "Carrier PGM path");
  reference_cmd->add_option("--watermark", ref_wm, "Watermark PBM path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  if (generate->parsed()) {
    gen_flags.validate_paths();
    if (!gen_out.empty()) check_output(gen_out);
    auto gen = make_generator(gen_flags.config());
    const BitSequence bits = stream_bits(*gen, gen_bits);
    const std::string text = (gen_format == "hex" ? to_hex(bits) : to_bit_string(bits)) + "\n";
    emit(out, gen_out.empty() ? std::nullopt : std::optional(gen_out), text);
    return kOk;
  }

  if (test->parsed()) {
    if (test_in.empty() && test_flags.gen.empty()) throw UsageError("test needs --in or --gen");
    if (!test_in.empty()) check_input(test_in);
    test_flags.validate_paths();
    stats::BatteryOptions opts;
    opts.jobs = test_jobs;
    opts.params = test_params;
    if (!test_names.empty()) {
      opts.tests.clear();
      for (const auto& name : test_names) {
        const auto kind = stats::parse_test_name(name);
        if (!kind) throw UsageError("unknown test '" + name + "'");
        opts.tests.push_back(*kind);
      }
    }
    stats::TestReport report;
    if (!test_in.empty()) {
      const BitSequence all = read_bit_file(test_in);
      if (all.size() / test_bits < test_sequences) {
        throw PreconditionError("input holds " + std::to_string(all.size()) + " bits, fewer than " +
                                std::to_string(test_sequences) + " x " + std::to_string(test_bits));
      }
      std::vector<BitSequence> seqs;
      for (std::size_t i = 0; i < test_sequences; ++i) {
        seqs.emplace_back(all.begin() + static_cast<std::ptrdiff_t>(i * test_bits),
                          all.begin() + static_cast<std::ptrdiff_t>((i + 1) * test_bits));
      }
      report = stats::analyze_sequences(seqs, opts);
    } else {
      auto gen = make_generator(test_flags.config());
      report = stats::run_battery(*gen, test_sequences, test_bits, opts);
    }
    out << (test_format == "lines" ? stats::format_lines(report) : stats::format_table(report));
    return kOk;
  }

  if (embed_cmd->parsed()) {
    check_input(emb_cover);
    check_input(emb_wm);
    check_input(emb_key);
    check_output(emb_out);
    const EmbeddingKey key{parse_key_file(read_file(emb_key)), parse_mode(emb_mode), emb_lsc};
    write_pgm(emb_out, embed(read_pgm(emb_cover), read_pbm(emb_wm), key));
    return kOk;
  }

  if (extract_cmd->parsed()) {
    check_input(ext_stego);
    check_input(ext_key);
    check_output(ext_out);
    const auto [w, h] = parse_size(ext_size);
    const EmbeddingKey key{parse_key_file(read_file(ext_key)), parse_mode(ext_mode), ext_lsc};
    write_pbm(ext_out, extract(read_pgm(ext_stego), key, w, h));
    return kOk;
  }

  if (attack_cmd->parsed()) {
    check_input(atk_in);
    check_output(atk_out);
    const auto seed = parse_hex_list(atk_seed);
    if (seed.size() != 1) throw UsageError("--noise-seed takes one hex word");
    attacks::AttackSpec spec;
    spec.kind = *attacks::parse_attack_name(atk_kind);
    spec.parameter = atk_param;
    spec.noise_seed = seed[0];
    spec.interpolation =
        atk_interp == "bilinear" ? attacks::Interpolation::bilinear : attacks::Interpolation::nearest;
    write_pgm(atk_out, attacks::apply(read_pgm(atk_in), spec));
    return kOk;
  }

  if (similarity_cmd->parsed()) {
    check_input(sim_a);
    check_input(sim_b);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f\n", similarity(read_pbm(sim_a), read_pbm(sim_b)));
    out << buf;
    return kOk;
  }

  if (pipeline_cmd->parsed()) {
    const FpgaSeeds seeds = FpgaSeeds::from_words(parse_hex_list(pipe_seed));
    const Schedule schedule = *parse_schedule(pipe_mode);
    PipelineModel model(seeds, schedule, pipe_mhz);
    for (std::uint64_t i = 0; i < pipe_cycles; ++i) {
      const CycleEvent ev = model.step_cycle();
      if (pipe_trace) out << format_trace_line(ev) << "\n";
    }
    out << format_report(summarize(model, seeds), schedule);
    return kOk;
  }

  if (reference_cmd->parsed()) {
    if (ref_carrier.empty() && ref_wm.empty()) throw UsageError("reference needs --carrier or --watermark");
    if (!ref_carrier.empty()) check_output(ref_carrier);
    if (!ref_wm.empty()) check_output(ref_wm);
    if (!ref_carrier.empty()) write_pgm(ref_carrier, reference_carrier());
    if (!ref_wm.empty()) write_pbm(ref_wm, reference_watermark());
    return kOk;
  }
  return kUsage;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    return run(argc, argv, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kMalformedInput;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kPrecondition;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const EntropyExhausted& e) {
    err << "error: " << e.what() << "\n";
    return kGeneratorStopped;
  } catch (const RoundLimitExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kGeneratorStopped;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace cirng::cli
