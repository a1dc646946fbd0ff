// Command-line front end: simulate, solve, sweep, verify.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mblab/adversaries.hpp"
#include "mblab/descriptor.hpp"
#include "mblab/errors.hpp"
#include "mblab/family.hpp"
#include "mblab/learners.hpp"
#include "mblab/solver.hpp"
#include "mblab/wmv.hpp"

namespace {

using namespace mblab;

enum Exit { kOk = 0, kUsage = 1, kReferee = 2, kVerify = 3, kCapacity = 4 };

/// Maps library errors to exit codes.
int report(const std::exception& e) {
  std::cerr << "error: " << e.what() << "\n";
  if (dynamic_cast<const CapacityError*>(&e)) return kCapacity;
  if (dynamic_cast<const InconsistencyError*>(&e) || dynamic_cast<const StructuralError*>(&e)) {
    return kReferee;
  }
  return kUsage;
}

struct Bounds {
  std::optional<BoundSpec> upper;
  std::optional<BoundSpec> lower;
};

Bounds bounds_for(const Learner& learner, std::string_view adversary, const Family& family,
                  const FeedbackModel& model) {
  Bounds b;
  if (const auto* w = dynamic_cast<const WmvLearner*>(&learner)) b.upper = w->bound();
  b.lower = forced_lower_bound(adversary, family, model);
  return b;
}

int cmd_simulate(const std::string& family_desc, const std::string& model_desc,
                 const std::string& learner_desc, const std::string& adversary_desc,
                 std::uint64_t seed, std::optional<std::size_t> cap) {
  const Family family = parse_family(family_desc);
  const FeedbackModel model = FeedbackModel::parse(model_desc);
  auto learner = make_learner(learner_desc, family, model);
  auto adversary = make_adversary(adversary_desc, family, model, seed);
  const auto t = run_game(family, model, *learner, *adversary, cap, seed);
  std::cout << serialize(t, family) << "\n";
  return kOk;
}

int cmd_solve(const std::string& family_desc, const std::string& model_desc,
              std::optional<std::size_t> budget) {
  const Family family = parse_family(family_desc);
  const FeedbackModel model = FeedbackModel::parse(model_desc);
  const auto start = std::chrono::steady_clock::now();
  ExactSolver solver(family.require_table("solve"), model, budget.value_or(default_solver_budget()));
  const auto value = solver.value();
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  nlohmann::ordered_json j;
  j["value"] = value;
  j["states_explored"] = solver.states_explored();
  j["elapsed_ms"] = ms.count();
  std::cout << j.dump() << "\n";
  return kOk;
}

int cmd_verify(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot read " << path << "\n";
    return kUsage;
  }
  VerificationReport report;
  try {
    const auto j = nlohmann::json::parse(in);
    if (!j.is_object() || !j.contains("family") || !j["family"].is_string()) {
      throw StructuralError("transcript lacks a 'family' string");
    }
    const Family family = parse_family(j["family"].get<std::string>());
    report = verify_transcript(transcript_from_json(j, family), family);
  } catch (const std::exception& e) {
    std::cerr << "error: malformed transcript: " << e.what() << "\n";
    return kUsage;
  }
  std::cout << to_json(report).dump() << "\n";
  return report.passed ? kOk : kVerify;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string decimal(double v) {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << v;
  return os.str();
}

const char* kSweepHeader =
    "cell,family,model,learner,adversary,seed,status,mistakes,rounds,terminal_reason,"
    "upper_bound,upper_exact,upper_decimal,upper_pass,lower_bound,lower_exact,lower_decimal,"
    "lower_pass";

int cmd_sweep(const std::vector<std::string>& families, const std::vector<std::string>& models,
              const std::vector<std::string>& learners, const std::vector<std::string>& adversaries,
              const std::vector<std::uint64_t>& seeds, std::optional<std::size_t> cap,
              const std::string& out_path) {
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return kUsage;
    }
  }
  std::ostream& out = out_path.empty() ? std::cout : file;
  out << kSweepHeader << "\n";
  bool violated = false;
  std::size_t cell = 0;
  for (const auto& fd : families) {
    for (const auto& md : models) {
      for (const auto& ld : learners) {
        for (const auto& ad : adversaries) {
          for (const auto seed : seeds) {
            std::vector<std::string> row = {std::to_string(cell++), fd, md, ld, ad, std::to_string(seed)};
            std::string status = "ok";
            std::vector<std::string> rest(11);
            try {
              const Family family = parse_family(fd);
              const FeedbackModel model = FeedbackModel::parse(md);
              auto learner = make_learner(ld, family, model);
              auto adversary = make_adversary(ad, family, model, seed);
              const auto t = run_game(family, model, *learner, *adversary, cap, seed);
              const auto b = bounds_for(*learner, ad, family, model);
              rest[0] = std::to_string(t.mistake_count);
              rest[1] = std::to_string(t.rounds.size());
              rest[2] = to_string(t.terminal_reason);
              auto fill = [&](const std::optional<BoundSpec>& spec, std::size_t at) {
                if (!spec) return;
                const bool pass = spec->admits(t.mistake_count);
                violated = violated || !pass;
                rest[at] = spec->name;
                rest[at + 1] = spec->exact_text();
                rest[at + 2] = decimal(spec->value);
                rest[at + 3] = pass ? "pass" : "fail";
              };
              fill(b.upper, 3);
              fill(b.lower, 7);
            } catch (const ConfigError& e) {
              status = "skipped: constraint";
            } catch (const CapacityError& e) {
              status = "skipped: capacity";
            } catch (const ParseError&) {
              throw;
            } catch (const Error& e) {
              status = std::string("error: ") + e.what();
              violated = true;
            }
            row.push_back(status);
            row.insert(row.end(), rest.begin(), rest.end());
            for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
            out << "\n";
          }
        }
      }
    }
  }
  return violated ? kVerify : kOk;
}

std::vector<std::uint64_t> parse_seeds(const std::vector<std::string>& specs) {
  std::vector<std::uint64_t> out;
  for (const auto& s : specs) {
    const auto dots = s.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_uint(s, "seed"));
      continue;
    }
    const auto lo = parse_uint(s.substr(0, dots), "seed");
    const auto hi = parse_uint(s.substr(dots + 2), "seed");
    for (auto v = lo; v <= hi; ++v) out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mistake-bound online learning lab"};
  app.require_subcommand(1);

  std::string family, model, learner, adversary, transcript_path, out_path;
  std::uint64_t seed = 0;
  std::optional<std::size_t> cap, budget;

  auto* sim = app.add_subcommand("simulate", "Play one game and print its transcript");
  sim->add_option("--family", family, "Family descriptor")->required();
  sim->add_option("--model", model, "std | bandit | amb:r=N | agn:eta=N")->required();
  sim->add_option("--learner", learner, "Learner descriptor")->required();
  sim->add_option("--adversary", adversary, "Adversary descriptor")->required();
  sim->add_option("--seed", seed, "Seed for all randomness");
  sim->add_option("--round-cap", cap, "Maximum number of rounds");

  auto* solve = app.add_subcommand("solve", "Compute the exact optimal mistake count");
  solve->add_option("--family", family, "Family descriptor")->required();
  solve->add_option("--model", model, "std | bandit | amb:r=N | agn:eta=N")->required();
  solve->add_option("--budget", budget, "Maximum number of solver states");

  std::vector<std::string> families, models, learners, adversaries, seed_specs{"0"};
  auto* sweep = app.add_subcommand("sweep", "Run a grid of games and check bounds (CSV)");
  sweep->add_option("--family", families, "Family descriptor (repeatable)");
  sweep->add_option("--model", models, "Feedback model (repeatable)");
  sweep->add_option("--learner", learners, "Learner descriptor (repeatable)");
  sweep->add_option("--adversary", adversaries, "Adversary descriptor (repeatable)");
  sweep->add_option("--seed", seed_specs, "Seed or range A..B (repeatable)");
  sweep->add_option("--round-cap", cap, "Maximum number of rounds");
  sweep->add_option("--out", out_path, "Output CSV path (default stdout)");

  auto* verify = app.add_subcommand("verify", "Replay a transcript through the referee");
  verify->add_option("transcript", transcript_path, "Transcript JSON path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*sim) return cmd_simulate(family, model, learner, adversary, seed, cap);
    if (*solve) return cmd_solve(family, model, budget);
    if (*sweep) {
      return cmd_sweep(families, models, learners, adversaries, parse_seeds(seed_specs), cap,
                       out_path);
    }
    if (*verify) return cmd_verify(transcript_path);
  } catch (const mblab::Error& e) {
    return report(e);
  }
  return kUsage;
}
