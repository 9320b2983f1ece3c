// Batch front end: parses a channel document, dispatches an experiment,
// and writes a results table plus a manifest echoing the full
// configuration. All randomness flows from --seed; identical invocations
// produce byte-identical files.
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "effsec/effsec.hpp"

namespace {

using effsec::BitsValue;

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string fmt(BitsValue v) { return v.infinite ? "inf" : fmt(v.bits); }

std::vector<int> parse_n_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoi(item));
  }
  if (out.empty()) throw effsec::DomainError("empty blocklength list");
  return out;
}

effsec::Pmf parse_pmf_arg(const std::string& text, const effsec::Alphabet& alphabet) {
  std::vector<double> probs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    probs.push_back(std::stod(item));
  }
  return effsec::Pmf(alphabet, std::move(probs));
}

struct CommonArgs {
  std::string channel_path;
  std::string out_path;
  std::uint64_t seed = 0;
  double rate = 0.1;
  double rate1 = 0.5;
  double lambda = 0.0;
  std::string n_list_text;
  int n_single = 0;
  double eps = 0.2;
  int codebooks = 200;
  long trials = 10000;
  std::uint64_t cap = effsec::kDefaultOpsCap;
  std::string qx_text;
  std::string qx_ref_text;
  std::size_t v_size = 0;
  std::size_t u_size = 0;
  int restarts = 16;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool needs_rates) {
  cmd->add_option("--channel", a.channel_path, "channel document (JSON)")->required();
  cmd->add_option("--out", a.out_path, "results file (CSV)")->required();
  cmd->add_option("--seed", a.seed, "RNG seed (all randomness derives from it)")->required();
  cmd->add_option("--cap", a.cap, "enumeration / work cap");
  if (needs_rates) {
    cmd->add_option("--rate", a.rate, "message rate R, bits/symbol");
    cmd->add_option("--rate1", a.rate1, "randomizer rate R1, bits/symbol");
    cmd->add_option("--n-list", a.n_list_text, "comma-separated blocklengths");
    cmd->add_option("--n", a.n_single, "single blocklength");
    cmd->add_option("--eps", a.eps, "decoder typicality slack");
    cmd->add_option("--qx", a.qx_text, "codebook input pmf, comma-separated");
  }
}

std::vector<int> resolve_n_list(const CommonArgs& a) {
  if (!a.n_list_text.empty()) return parse_n_list(a.n_list_text);
  if (a.n_single > 0) return {a.n_single};
  throw effsec::DomainError("one of --n or --n-list is required");
}

nlohmann::ordered_json base_manifest(const std::string& subcommand, const CommonArgs& a,
                                     const effsec::WiretapChannel& ch) {
  nlohmann::ordered_json m;
  m["tool"] = "effsec";
  m["version"] = effsec::kVersion;
  m["subcommand"] = subcommand;
  m["channel_file"] = a.channel_path;
  m["channel"] = effsec::channel_to_json(ch);
  m["seed"] = a.seed;
  m["cap"] = a.cap;
  return m;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::ios_base::failure("write to '" + path + "' failed");
}

void write_manifest(const std::string& out_path, const nlohmann::ordered_json& m) {
  write_text(out_path + ".manifest.json", m.dump(2) + "\n");
}

std::string regime_csv(const effsec::RegimeResult& res, std::uint64_t seed) {
  std::string csv =
      "n,confusion_bits,stealth_bits,effective_bits,error_prob,alpha_plus_beta_min,seed\n";
  for (const auto& rec : res.records) {
    csv += std::to_string(rec.n) + "," + fmt(rec.confusion) + "," + fmt(rec.stealth) + "," +
           fmt(rec.effective) + "," + fmt(rec.error_prob) + "," +
           fmt(rec.alpha_plus_beta_min) + "," + std::to_string(seed) + "\n";
  }
  return csv;
}

int run_capacity(const CommonArgs& a) {
  effsec::WiretapChannel ch = effsec::parse_channel(a.channel_path);
  effsec::SearchOptions opt;
  opt.seed = a.seed;
  opt.restarts = a.restarts;
  std::size_t v = a.v_size == 0 ? ch.input_size() : a.v_size;
  effsec::CapacityResult direct = effsec::maximize_direct(ch, opt);
  effsec::CapacityResult prefixed = effsec::maximize_prefixed(ch, v, opt);
  std::string csv = "method,value_bits,seed\n";
  csv += "direct," + fmt(direct.value) + "," + std::to_string(a.seed) + "\n";
  csv += "prefixed," + fmt(prefixed.value) + "," + std::to_string(a.seed) + "\n";
  write_text(a.out_path, csv);
  auto m = base_manifest("capacity", a, ch);
  m["v_size"] = v;
  m["restarts"] = a.restarts;
  m["direct_value_bits"] = direct.value.bits;
  m["prefixed_value_bits"] = prefixed.value.bits;
  write_manifest(a.out_path, m);
  return 0;
}

int run_bcc(const CommonArgs& a) {
  effsec::WiretapChannel ch = effsec::parse_channel(a.channel_path);
  effsec::SearchOptions opt;
  opt.seed = a.seed;
  opt.restarts = a.restarts;
  effsec::BccSizes sizes{a.u_size == 0 ? ch.input_size() : a.u_size,
                         a.v_size == 0 ? ch.input_size() : a.v_size};
  effsec::BccPoint pt = effsec::bcc_boundary(ch, a.lambda, sizes, opt);
  std::string csv = "lambda,r0_bits,r_bits,seed\n";
  csv += fmt(a.lambda) + "," + fmt(pt.r0) + "," + fmt(pt.r) + "," + std::to_string(a.seed) +
         "\n";
  write_text(a.out_path, csv);
  auto m = base_manifest("bcc", a, ch);
  m["lambda"] = a.lambda;
  m["u_size"] = sizes.u_size;
  m["v_size"] = sizes.v_size;
  m["restarts"] = a.restarts;
  write_manifest(a.out_path, m);
  return 0;
}

effsec::SweepConfig sweep_config(const CommonArgs& a) {
  effsec::SweepConfig cfg;
  cfg.rate = a.rate;
  cfg.rate1 = a.rate1;
  cfg.n_list = resolve_n_list(a);
  cfg.codebooks_per_n = a.codebooks;
  cfg.trials = a.trials;
  cfg.eps = a.eps;
  cfg.seed = a.seed;
  cfg.ops_cap = a.cap;
  return cfg;
}

void manifest_sweep_fields(nlohmann::ordered_json& m, const CommonArgs& a,
                           const effsec::SweepConfig& cfg,
                           const effsec::RegimeResult& res) {
  m["rate"] = cfg.rate;
  m["rate1"] = cfg.rate1;
  m["n_list"] = cfg.n_list;
  m["eps"] = cfg.eps;
  m["codebooks"] = cfg.codebooks_per_n;
  m["trials"] = cfg.trials;
  if (!a.qx_text.empty()) m["qx"] = a.qx_text;
  if (!a.qx_ref_text.empty()) m["qx_ref"] = a.qx_ref_text;
  m["warnings"] = res.warnings;
}

int run_sweep(const CommonArgs& a) {
  effsec::WiretapChannel ch = effsec::parse_channel(a.channel_path);
  effsec::Pmf q_x = a.qx_text.empty() ? effsec::Pmf::uniform(ch.input())
                                      : parse_pmf_arg(a.qx_text, ch.input());
  effsec::SweepConfig cfg = sweep_config(a);
  effsec::RegimeResult res = effsec::stealth_sweep(ch, q_x, cfg);
  for (const auto& w : res.warnings) std::cerr << "sweep: warning: " << w << "\n";
  write_text(a.out_path, regime_csv(res, a.seed));
  auto m = base_manifest("sweep", a, ch);
  manifest_sweep_fields(m, a, cfg, res);
  write_manifest(a.out_path, m);
  return 0;
}

int run_example1(const CommonArgs& a) {
  effsec::WiretapChannel ch = effsec::parse_channel(a.channel_path);
  effsec::Pmf intended = a.qx_ref_text.empty()
                             ? effsec::Pmf::uniform(ch.input())
                             : parse_pmf_arg(a.qx_ref_text, ch.input());
  effsec::Pmf actual = a.qx_text.empty() ? effsec::Pmf::uniform(ch.input())
                                         : parse_pmf_arg(a.qx_text, ch.input());
  effsec::SweepConfig cfg = sweep_config(a);
  effsec::RegimeResult res = effsec::example1_mismatch(ch, intended, actual, cfg);
  for (const auto& w : res.warnings) std::cerr << "example1: warning: " << w << "\n";
  write_text(a.out_path, regime_csv(res, a.seed));
  auto m = base_manifest("example1", a, ch);
  manifest_sweep_fields(m, a, cfg, res);
  m["single_letter_ref_divergence_bits"] = res.single_letter_ref_divergence;
  write_manifest(a.out_path, m);
  return 0;
}

int run_example2(const CommonArgs& a) {
  effsec::WiretapChannel ch = effsec::parse_channel(a.channel_path);
  effsec::Pmf q_x = a.qx_text.empty() ? effsec::Pmf::uniform(ch.input())
                                      : parse_pmf_arg(a.qx_text, ch.input());
  effsec::SweepConfig cfg = sweep_config(a);
  effsec::RegimeResult res = effsec::example2_leaky(ch, q_x, cfg);
  write_text(a.out_path, regime_csv(res, a.seed));
  auto m = base_manifest("example2", a, ch);
  manifest_sweep_fields(m, a, cfg, res);
  write_manifest(a.out_path, m);
  return 0;
}

int run_detect(const CommonArgs& a) {
  effsec::WiretapChannel ch = effsec::parse_channel(a.channel_path);
  effsec::Pmf actual = a.qx_text.empty() ? effsec::Pmf::uniform(ch.input())
                                         : parse_pmf_arg(a.qx_text, ch.input());
  effsec::Pmf reference = a.qx_ref_text.empty()
                              ? effsec::Pmf::uniform(ch.input())
                              : parse_pmf_arg(a.qx_ref_text, ch.input());
  effsec::Pmf qz_ref = effsec::push_forward(reference, ch.z_channel());
  std::string csv =
      "n,confusion_bits,stealth_bits,effective_bits,error_prob,alpha_plus_beta_min,seed\n";
  for (int n : resolve_n_list(a)) {
    effsec::CodeParams params =
        effsec::CodeParams::from_rates(n, a.rate, a.rate1, a.eps, a.cap);
    // same representative codebook the sweep would analyze
    effsec::Codebook cb = effsec::generate_codebook(
        actual, params, effsec::derive_seed(a.seed, static_cast<std::uint64_t>(n), 0));
    effsec::SecrecyReport rep = effsec::secrecy_report(cb, ch, qz_ref, a.cap);
    effsec::InducedDistributions ind = effsec::induced_distributions(cb, ch, a.cap);
    effsec::SequenceDist idle = effsec::product_extension(qz_ref, n, a.cap);
    effsec::HypothesisPair hp(std::move(idle), std::move(ind.marginal));
    double ab_min = effsec::min_alpha_plus_beta(hp);
    csv += std::to_string(n) + "," + fmt(rep.confusion) + "," + fmt(rep.stealth) + "," +
           fmt(rep.effective) + ",nan," + fmt(ab_min) + "," + std::to_string(a.seed) + "\n";
  }
  write_text(a.out_path, csv);
  auto m = base_manifest("detect", a, ch);
  m["rate"] = a.rate;
  m["rate1"] = a.rate1;
  m["n_list"] = resolve_n_list(a);
  m["eps"] = a.eps;
  if (!a.qx_text.empty()) m["qx"] = a.qx_text;
  if (!a.qx_ref_text.empty()) m["qx_ref"] = a.qx_ref_text;
  write_manifest(a.out_path, m);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wiretap-channel effective-secrecy toolkit"};
  app.require_subcommand(1);

  CommonArgs a;
  CLI::App* capacity = app.add_subcommand("capacity", "secrecy capacity (direct and prefixed)");
  add_common(capacity, a, false);
  capacity->add_option("--v-size", a.v_size, "auxiliary alphabet size (default |X|)");
  capacity->add_option("--restarts", a.restarts, "random optimizer restarts");

  CLI::App* bcc = app.add_subcommand("bcc", "confidential-broadcast boundary point");
  add_common(bcc, a, false);
  bcc->add_option("--lambda", a.lambda, "weight on the common rate")->required();
  bcc->add_option("--u-size", a.u_size, "common-layer alphabet size (default |X|)");
  bcc->add_option("--v-size", a.v_size, "secret-layer alphabet size (default |X|)");
  bcc->add_option("--restarts", a.restarts, "random optimizer restarts");

  CLI::App* sweep = app.add_subcommand("sweep", "matched stealth sweep over blocklengths");
  add_common(sweep, a, true);
  sweep->add_option("--codebooks", a.codebooks, "ensemble size per blocklength");
  sweep->add_option("--trials", a.trials, "total reliability trials per blocklength");

  CLI::App* ex1 = app.add_subcommand("example1", "mismatched codebook regime");
  add_common(ex1, a, true);
  ex1->add_option("--qx-ref", a.qx_ref_text, "intended (reference) input pmf");
  ex1->add_option("--codebooks", a.codebooks, "ensemble size per blocklength");
  ex1->add_option("--trials", a.trials, "total reliability trials per blocklength");

  CLI::App* ex2 = app.add_subcommand("example2", "leaky randomizer regime");
  add_common(ex2, a, true);
  ex2->add_option("--codebooks", a.codebooks, "ensemble size per blocklength");
  ex2->add_option("--trials", a.trials, "total reliability trials per blocklength");

  CLI::App* detect = app.add_subcommand("detect", "NP detection analysis of one codebook");
  add_common(detect, a, true);
  detect->add_option("--qx-ref", a.qx_ref_text, "reference (idle) input pmf");

  CLI11_PARSE(app, argc, argv);

  std::string sub = app.get_subcommands().front()->get_name();
  try {
    if (sub == "capacity") return run_capacity(a);
    if (sub == "bcc") return run_bcc(a);
    if (sub == "sweep") return run_sweep(a);
    if (sub == "example1") return run_example1(a);
    if (sub == "example2") return run_example2(a);
    if (sub == "detect") return run_detect(a);
  } catch (const effsec::ChannelFormatError& e) {
    std::cerr << sub << ": " << e.what() << "\n";
    return 3;
  } catch (const effsec::EnumerationOverflow& e) {
    std::cerr << sub << ": " << e.what() << "\n";
    return 5;
  } catch (const effsec::DomainError& e) {
    std::cerr << sub << ": " << e.what() << "\n";
    return 4;
  } catch (const effsec::PreconditionError& e) {
    std::cerr << sub << ": " << e.what() << "\n";
    return 4;
  } catch (const std::ios_base::failure& e) {
    std::cerr << sub << ": " << e.what() << "\n";
    return 6;
  } catch (const std::exception& e) {
    std::cerr << sub << ": " << e.what() << "\n";
    return 1;
  }
  return 2;
}
