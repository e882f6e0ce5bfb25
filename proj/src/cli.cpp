#include "blo/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "blo/analysis.hpp"
#include "blo/attack.hpp"
#include "blo/bitstring.hpp"
#include "blo/errors.hpp"
#include "blo/matcher.hpp"
#include "blo/store.hpp"
#include "blo/transform.hpp"

namespace blo::cli {

namespace {

namespace fs = std::filesystem;

using Action = std::function<int(std::ostream& out)>;

std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void print_decision(std::ostream& out, const MatchDecision& d) {
  out << "similarity\t" << fixed6(d.similarity) << "\n"
      << "threshold\t" << fixed6(d.threshold) << "\n"
      << "distance\t" << d.distance << "\n"
      << "accepted\t" << (d.accepted ? "true" : "false") << "\n";
}

int decision_exit(const MatchDecision& d) { return d.accepted ? kExitOk : kExitReject; }

void print_report(std::ostream& out, const analysis::AnalysisReport& r, bool json) {
  out << (json ? r.to_json() : r.to_tsv());
}

Selector parse_selector(const std::string& text, std::size_t block_count) {
  BitString bits = BitString::from_text(text);
  if (bits.size() == 1 && block_count != 1) return Selector::uniform(block_count, bits[0]);
  return Selector{std::move(bits)};
}

struct TransformFlags {
  std::size_t block_size = 5;
  std::string policy = "zero-pad";

  void add_to(CLI::App* cmd) {
    cmd->add_option("--block-size,-b", block_size, "Odd block size >= 3")->capture_default_str();
    cmd->add_option("--policy", policy, "Leftover-bit policy")
        ->check(CLI::IsMember({"zero-pad", "truncate"}))
        ->capture_default_str();
  }
  [[nodiscard]] TransformParams params() const { return TransformParams(block_size, parse_padding_policy(policy)); }
};

// Holds every option target; the app stores pointers into it.
struct Commands {
  Action action;

  // gen
  std::size_t gen_bits = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;

  // enroll
  std::string enroll_in;
  std::string enroll_out;
  TransformFlags enroll_tf;

  // match
  std::string match_template;
  std::string match_probe;
  double match_threshold = kDefaultMatchThreshold;

  // table
  std::size_t table_block_size = 5;

  // attack
  std::string pre_template;
  std::string pre_selector;
  bool pre_random = false;
  bool pre_enumerate = false;
  std::uint64_t pre_limit = 16;
  std::optional<std::uint64_t> pre_seed;
  std::string pre_out;
  std::string verify_template;
  std::string verify_probe;

  // analyze
  bool json = false;
  std::size_t census_bits = 0;
  std::size_t census_block_size = 5;
  std::size_t rec_bits = 10;
  std::size_t rec_block_size = 5;
  std::uint64_t rec_trials = 100000;
  std::uint64_t rec_seed = 0;
  analysis::LinkabilityConfig link{};
  std::size_t link_block_size = 5;
  std::string link_policy = "zero-pad";
  std::string revoke_in;
  TransformFlags revoke_tf;
  std::size_t revoke_attempts = 100;

  // store
  std::string store_root;
  std::string store_device;
  std::string store_user;
  std::string store_in;
  TransformFlags store_tf;
  std::optional<std::int64_t> store_enrolled_at;
  double store_threshold = kDefaultMatchThreshold;

  void build(CLI::App& app);
};

void Commands::build(CLI::App& app) {
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "Generate a deterministic random feature vector");
  gen->add_option("--bits", gen_bits, "Feature length in bits")->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "RNG seed")->required();
  gen->add_option("--out,-o", gen_out, "Output file (.bits text or .fbin packed)")->required();
  gen->callback([this] {
    action = [this](std::ostream& out) {
      const BitString bits = random_bits(gen_bits, gen_seed);
      write_feature_file(gen_out, bits);
      out << "bits\t" << bits.size() << "\n"
          << "seed\t" << gen_seed << "\n"
          << "out\t" << gen_out << "\n";
      return kExitOk;
    };
  });

  auto* enroll = app.add_subcommand("enroll", "Transform a feature file into a protected template");
  enroll->add_option("--in,-i", enroll_in, "Feature file (.bits or .fbin)")->required();
  enroll->add_option("--out,-o", enroll_out, "Template file (.blo)")->required();
  enroll_tf.add_to(enroll);
  enroll->callback([this] {
    action = [this](std::ostream& out) {
      const auto fv = read_feature_file(enroll_in);
      const auto tpl = transform(fv, enroll_tf.params());
      write_template_file(enroll_out, tpl);
      out << "original_bits\t" << tpl.original_length() << "\n"
          << "block_size\t" << tpl.params().block_size << "\n"
          << "padding\t" << to_string(tpl.params().padding) << "\n"
          << "block_count\t" << tpl.block_count() << "\n"
          << "template_bits\t" << tpl.data().size() << "\n"
          << "out\t" << enroll_out << "\n";
      return kExitOk;
    };
  });

  auto* match = app.add_subcommand("match", "Authenticate a probe feature file against a template");
  match->add_option("--template,-t", match_template, "Template file (.blo)")->required();
  match->add_option("--probe,-p", match_probe, "Probe feature file")->required();
  match->add_option("--threshold", match_threshold, "Similarity threshold in [0,1]")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  match->callback([this] {
    action = [this](std::ostream& out) {
      const auto stored = read_template_file(match_template);
      const auto probe = transform(read_feature_file(match_probe), stored.params());
      const auto d = match_templates(probe, stored, match_threshold);
      print_decision(out, d);
      return decision_exit(d);
    };
  });

  auto* table = app.add_subcommand("table", "Print every output block with its two pre-images");
  table->add_option("--block-size,-b", table_block_size, "Odd block size in [3,17]")->capture_default_str();
  table->callback([this] {
    action = [this](std::ostream& out) {
      out << format_table(build_table(table_block_size));
      return kExitOk;
    };
  });

  auto* attack = app.add_subcommand("attack", "Pre-image forgery against a template");
  attack->require_subcommand(1);

  auto* pre = attack->add_subcommand("preimage", "Forge feature vectors that map to a template");
  pre->add_option("--template,-t", pre_template, "Template file (.blo)")->required();
  auto* sel_opt = pre->add_option("--selector", pre_selector,
                                  "Per-block choice bits; a single bit applies to every block");
  auto* rnd_opt = pre->add_flag("--random", pre_random, "Draw a uniformly random selector (needs --seed)");
  auto* enum_opt = pre->add_flag("--enumerate", pre_enumerate, "List pre-images in ascending selector order");
  pre->add_option("--limit", pre_limit, "Maximum vectors listed by --enumerate")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  auto* seed_opt = pre->add_option("--seed", pre_seed, "RNG seed for --random");
  pre->add_option("--out,-o", pre_out, "Write the forged vector here instead of stdout");
  sel_opt->excludes(rnd_opt)->excludes(enum_opt);
  rnd_opt->excludes(enum_opt);
  rnd_opt->needs(seed_opt);
  pre->callback([this, sel_opt, rnd_opt, enum_opt] {
    if (sel_opt->count() + rnd_opt->count() + enum_opt->count() == 0) {
      throw CLI::RequiredError("one of --selector, --random or --enumerate");
    }
    action = [this](std::ostream& out) {
      const auto tpl = read_template_file(pre_template);
      out << "preimage_count\t" << count_preimages(tpl).to_string() << "\n";
      if (pre_enumerate) {
        for_each_preimage(tpl, pre_limit, [&](const Selector& sel, const FeatureVector& fv) {
          out << sel.choices.to_text() << "\t" << fv.data.to_text() << "\n";
        });
        return kExitOk;
      }
      const Selector sel = pre_random ? Selector::random(tpl.block_count(), *pre_seed)
                                      : parse_selector(pre_selector, tpl.block_count());
      const FeatureVector forged = forge(tpl, sel);
      out << "selector\t" << sel.choices.to_text() << "\n";
      if (pre_out.empty()) {
        out << "forged\t" << forged.data.to_text() << "\n";
      } else {
        write_feature_file(pre_out, forged.data);
        out << "out\t" << pre_out << "\n";
      }
      return kExitOk;
    };
  });

  auto* verify = attack->add_subcommand("verify", "Check that a feature file maps exactly onto a template");
  verify->add_option("--template,-t", verify_template, "Template file (.blo)")->required();
  verify->add_option("--probe,-p", verify_probe, "Feature file")->required();
  verify->callback([this] {
    action = [this](std::ostream& out) {
      const auto tpl = read_template_file(verify_template);
      const auto probe = read_feature_file(verify_probe);
      const auto produced = transform(probe, tpl.params());
      const bool maps = same_protected_content(produced, tpl);
      out << "maps_to_template\t" << (maps ? "true" : "false") << "\n";
      return maps ? kExitOk : kExitReject;
    };
  });

  auto* analyze = app.add_subcommand("analyze", "Security studies; reports as key<TAB>value lines");
  analyze->require_subcommand(1);
  analyze->add_flag("--json", json, "Emit the report as JSON");

  auto* census = analyze->add_subcommand("census", "Exhaustive fiber census over all inputs of a length");
  census->add_option("--bits", census_bits, "Input length (<= 24)")->required();
  census->add_option("--block-size,-b", census_block_size, "Odd block size dividing --bits")->capture_default_str();
  census->add_flag("--json", json, "Emit the report as JSON");
  census->callback([this] {
    action = [this](std::ostream& out) {
      print_report(out, analysis::fiber_census(census_bits, census_block_size), json);
      return kExitOk;
    };
  });

  auto* recovery = analyze->add_subcommand("recovery", "Monte Carlo rate of recovering the original feature");
  recovery->add_option("--bits", rec_bits, "Feature length")->capture_default_str();
  recovery->add_option("--block-size,-b", rec_block_size, "Odd block size dividing --bits")->capture_default_str();
  recovery->add_option("--trials", rec_trials, "Number of trials")->check(CLI::PositiveNumber)->capture_default_str();
  recovery->add_option("--seed", rec_seed, "RNG seed")->required();
  recovery->add_flag("--json", json, "Emit the report as JSON");
  recovery->callback([this] {
    action = [this](std::ostream& out) {
      print_report(out, analysis::recovery_probability(rec_bits, rec_block_size, rec_trials, rec_seed), json);
      return kExitOk;
    };
  });

  auto* link_cmd = analyze->add_subcommand("link", "Cross-device linkability of enrolled templates");
  link_cmd->add_option("--users", link.users, "Synthetic users (>= 2)")->capture_default_str();
  link_cmd->add_option("--devices", link.devices, "Devices (>= 2)")->capture_default_str();
  link_cmd->add_option("--feature-bits", link.feature_bits, "Feature length")->capture_default_str();
  link_cmd->add_option("--block-size,-b", link_block_size, "Odd block size")->capture_default_str();
  link_cmd->add_option("--policy", link_policy, "Leftover-bit policy")
      ->check(CLI::IsMember({"zero-pad", "truncate"}))
      ->capture_default_str();
  link_cmd->add_option("--seed", link.seed, "RNG seed")->required();
  link_cmd->add_flag("--keyed-baseline", link.keyed_baseline, "Also report a per-device XOR-masked contrast");
  link_cmd->add_flag("--json", json, "Emit the report as JSON");
  link_cmd->callback([this] {
    action = [this](std::ostream& out) {
      link.params = TransformParams(link_block_size, parse_padding_policy(link_policy));
      print_report(out, analysis::linkability_study(link), json);
      return kExitOk;
    };
  });

  auto* revoke = analyze->add_subcommand("revoke", "Re-enroll one feature repeatedly and count distinct templates");
  revoke->add_option("--in,-i", revoke_in, "Feature file")->required();
  revoke->add_option("--attempts", revoke_attempts, "Re-enrollments (>= 2)")->capture_default_str();
  revoke_tf.add_to(revoke);
  revoke->add_flag("--json", json, "Emit the report as JSON");
  revoke->callback([this] {
    action = [this](std::ostream& out) {
      const auto fv = read_feature_file(revoke_in);
      print_report(out, analysis::revocability_check(fv, revoke_tf.params(), revoke_attempts), json);
      return kExitOk;
    };
  });

  auto* store_cmd = app.add_subcommand("store", "Multi-device enrollment store");
  store_cmd->require_subcommand(1);

  auto* s_enroll = store_cmd->add_subcommand("enroll", "Enroll a feature file for a user on a device");
  s_enroll->add_option("--root", store_root, "Store directory (created if missing)")->required();
  s_enroll->add_option("--device", store_device, "Device id")->required();
  s_enroll->add_option("--user", store_user, "User id")->required();
  s_enroll->add_option("--in,-i", store_in, "Feature file")->required();
  s_enroll->add_option("--enrolled-at", store_enrolled_at, "Enrollment time, seconds since epoch (default: now)");
  store_tf.add_to(s_enroll);
  s_enroll->callback([this] {
    action = [this](std::ostream& out) {
      const auto fv = read_feature_file(store_in);
      const auto tpl = transform(fv, store_tf.params());
      const std::int64_t at = store_enrolled_at.value_or(
          std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
              .count());
      std::error_code ec;
      fs::create_directories(store_root, ec);
      if (ec) throw StorageError("cannot create store root: " + ec.message());
      store::enroll(store_root, {store_device, store_user, tpl, at});
      out << "device\t" << store_device << "\n"
          << "user\t" << store_user << "\n"
          << "block_count\t" << tpl.block_count() << "\n"
          << "template_bits\t" << tpl.data().size() << "\n";
      return kExitOk;
    };
  });

  auto* s_auth = store_cmd->add_subcommand("auth", "Authenticate a probe against a stored enrollment");
  s_auth->add_option("--root", store_root, "Store directory")->required();
  s_auth->add_option("--device", store_device, "Device id")->required();
  s_auth->add_option("--user", store_user, "User id")->required();
  s_auth->add_option("--probe,-p", store_in, "Probe feature file")->required();
  s_auth->add_option("--threshold", store_threshold, "Similarity threshold in [0,1]")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  s_auth->callback([this] {
    action = [this](std::ostream& out) {
      const auto d = store::authenticate(store_root, store_device, store_user, read_feature_file(store_in),
                                         store_threshold);
      print_decision(out, d);
      return decision_exit(d);
    };
  });

  auto* s_list = store_cmd->add_subcommand("list", "List enrollments in manifest order");
  s_list->add_option("--root", store_root, "Store directory")->required();
  s_list->callback([this] {
    action = [this](std::ostream& out) {
      for (const auto& r : store::list_records(store_root)) {
        out << r.device_id << "\t" << r.user_id << "\t" << r.file << "\t" << r.block_size << "\t"
            << r.original_length << "\t" << r.enrolled_at << "\n";
      }
      return kExitOk;
    };
  });
}

}  // namespace

CommandOutcome run(const std::vector<std::string>& args) {
  CommandOutcome outcome;
  std::ostringstream out;
  std::ostringstream err;

  CLI::App app{"Block Logic Operation template transform and its cryptanalysis", "blo"};
  Commands commands;
  commands.build(app);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    outcome.exit_code = code == 0 ? kExitOk : kExitError;
    if (code != 0) err << "\n" << app.help();
    outcome.out = out.str();
    outcome.err = err.str();
    return outcome;
  }

  try {
    outcome.exit_code = commands.action ? commands.action(out) : kExitError;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << "\n";
    outcome.exit_code = kExitCapacity;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    outcome.exit_code = kExitError;
  }
  outcome.out = out.str();
  outcome.err = err.str();
  return outcome;
}

}  // namespace blo::cli
