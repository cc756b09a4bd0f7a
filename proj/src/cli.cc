// Copyright 2026 The cpar Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cpar/cli.h"

#include <fstream>
#include <sstream>

#include "CLI11.hpp"

#include "cpar/engine.h"
#include "cpar/explorer.h"
#include "cpar/report.h"
#include "cpar/syntax.h"

namespace cpar::cli {

namespace {

struct Options {
  std::string file;
  std::string granularity = "fine";
  std::int64_t max_steps = 10000;
  std::string init;
  bool json = false;
  // run
  std::string policy;
  std::uint64_t seed = 0;
  std::vector<ThreadId> script;
  std::string trace = "off";
  // explore / check
  std::optional<std::string> assertion;
  std::int64_t max_schedules = 100000;
  std::int64_t max_states = 1000000;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string join(std::span<const ThreadId> ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(ids[i]);
  }
  return out;
}

SourceProgram load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_program(buf.str());
  } catch (const SyntaxError& e) {
    throw UsageError(path + ":" + e.what());
  }
}

EngineConfig engine_config(const Options& opts) {
  EngineConfig config;
  config.granularity = opts.granularity == "literal" ? Granularity::kLiteral
                                                     : Granularity::kFine;
  config.max_steps = opts.max_steps;
  try {
    config.initial_store = parse_bindings(opts.init);
  } catch (const PredicateError& e) {
    throw UsageError(std::string("--init: ") + e.what());
  }
  std::string policy = opts.policy;
  if (policy.empty()) policy = opts.script.empty() ? "round-robin" : "script";
  if (policy == "round-robin") {
    config.policy = RoundRobin{};
  } else if (policy == "random") {
    config.policy = RandomPolicy{opts.seed};
  } else {
    config.policy = ScriptPolicy{opts.script};
  }
  if (policy != "script" && !opts.script.empty()) {
    throw UsageError("--script requires --policy script");
  }
  return config;
}

ExploreBounds explore_bounds(const Options& opts) {
  return ExploreBounds{opts.max_steps, opts.max_schedules, opts.max_states};
}

std::string error_text(const ExecutionError& e) {
  std::string out;
  if (e.thread()) {
    out += "thread " + std::to_string(*e.thread()) + " at `" + e.statement() +
           "`: ";
  }
  return out + e.what();
}

int cmd_run(const Options& opts, std::ostream& out) {
  SourceProgram prog = load(opts.file);
  EngineConfig config = engine_config(opts);
  RunOutcome outcome = run(config, prog);

  if (opts.json) {
    out << to_json(outcome, opts.trace != "off").dump() << '\n';
  } else {
    if (opts.trace == "text") {
      for (const auto& e : outcome.trace) out << to_string(e) << '\n';
    } else if (opts.trace == "json") {
      out << to_json(std::span(outcome.trace)).dump() << '\n';
    }
    out << "status: " << to_string(outcome.status) << '\n';
    if (outcome.error) out << "error: " << error_text(*outcome.error) << '\n';
    out << "store: " << to_string(outcome.final_store) << '\n';
    out << "schedule: " << join(outcome.schedule) << '\n';
  }
  switch (outcome.status) {
    case RunStatus::kSuccess: return kExitOk;
    case RunStatus::kFailure: return kExitFailure;
    case RunStatus::kStepLimit: return kExitStepLimit;
  }
  return kExitFailure;
}

int cmd_explore(const Options& opts, std::ostream& out) {
  SourceProgram prog = load(opts.file);
  StorePredicate predicate;
  if (opts.assertion) {
    try {
      predicate = parse_predicate(*opts.assertion);
    } catch (const PredicateError& e) {
      throw UsageError(std::string("--assert: ") + e.what());
    }
  }
  ExplorationResult result =
      explore(engine_config(opts), prog, explore_bounds(opts));

  std::vector<const TerminalStore*> violations;
  for (const auto& t : result.terminal_stores) {
    if (!predicate.holds(t.store)) violations.push_back(&t);
  }

  if (opts.json) {
    Json doc = to_json(result);
    if (opts.assertion) {
      Json v = Json::array();
      for (const auto* t : violations) {
        v.push_back(Json{{"store", to_json(t->store)}, {"witness", t->witness}});
      }
      doc["violations"] = std::move(v);
    }
    out << doc.dump() << '\n';
  } else {
    out << "schedules: " << result.schedules_explored << '\n';
    out << "truncated: " << (result.truncated ? "true" : "false") << '\n';
    out << "stores: " << result.terminal_stores.size() << '\n';
    for (const auto& t : result.terminal_stores) {
      out << "  " << to_string(t.store) << " count=" << t.count
          << " witness=" << join(t.witness) << '\n';
    }
    out << "failures: " << result.failures.size() << '\n';
    for (const auto& f : result.failures) {
      out << "  " << f.message << " count=" << f.count
          << " witness=" << join(f.witness) << '\n';
    }
    for (const auto* t : violations) {
      out << "assertion violated by " << to_string(t->store)
          << " witness=" << join(t->witness) << '\n';
    }
  }
  return violations.empty() ? kExitOk : kExitFailure;
}

int cmd_check(const Options& opts, std::ostream& out) {
  SourceProgram prog = load(opts.file);
  std::int64_t checked = 0;
  std::vector<std::vector<ThreadId>> violations;
  ExplorationResult result = explore(
      engine_config(opts), prog, explore_bounds(opts),
      [&](const ScheduleLeaf& leaf) {
        ++checked;
        if (!check_atomicity(leaf.trace)) {
          violations.emplace_back(leaf.schedule.begin(), leaf.schedule.end());
        }
      });

  if (opts.json) {
    Json v = Json::array();
    for (const auto& w : violations) v.push_back(Json{{"witness", w}});
    out << Json{{"schedules", checked},
                {"truncated", result.truncated},
                {"atomic", violations.empty()},
                {"violations", std::move(v)}}
               .dump()
        << '\n';
  } else {
    out << "schedules: " << checked << '\n';
    out << "truncated: " << (result.truncated ? "true" : "false") << '\n';
    out << "atomicity violations: " << violations.size() << '\n';
    for (const auto& w : violations) out << "  witness=" << join(w) << '\n';
  }
  return violations.empty() ? kExitOk : kExitFailure;
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Interpreter and schedule explorer for C|| programs", "cpar"};
  app.require_subcommand(1);
  Options opts;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("FILE", opts.file, "Program source (.cpar)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--granularity", opts.granularity,
                    "Scheduling unit for `;` compositions")
        ->check(CLI::IsMember({"literal", "fine"}));
    sub->add_option("--max-steps", opts.max_steps,
                    "Scheduling units per run (and per sequential run)")
        ->envname("CPAR_MAX_STEPS")
        ->check(CLI::PositiveNumber);
    sub->add_option("--init", opts.init,
                    "Initial bindings, e.g. \"N=0, list[1]=tom\"");
    sub->add_flag("--json", opts.json, "Emit a single JSON document");
  };
  auto add_bounds = [&](CLI::App* sub) {
    sub->add_option("--max-schedules", opts.max_schedules)
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-states", opts.max_states)
        ->check(CLI::PositiveNumber);
  };

  CLI::App* run_cmd = app.add_subcommand("run", "Run one schedule");
  add_common(run_cmd);
  run_cmd->add_option("--policy", opts.policy)
      ->check(CLI::IsMember({"round-robin", "random", "script"}));
  run_cmd->add_option("--seed", opts.seed, "Seed for --policy random");
  run_cmd->add_option("--script", opts.script, "Comma-separated thread ids")
      ->delimiter(',');
  run_cmd->add_option("--trace", opts.trace)
      ->check(CLI::IsMember({"text", "json", "off"}));

  CLI::App* explore_cmd =
      app.add_subcommand("explore", "Enumerate every schedule");
  add_common(explore_cmd);
  add_bounds(explore_cmd);
  explore_cmd->add_option("--assert", opts.assertion,
                          "Predicate every terminal store must satisfy");

  CLI::App* check_cmd = app.add_subcommand(
      "check", "Check atomicity of every explored trace");
  add_common(check_cmd);
  add_bounds(check_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(opts, out);
    if (explore_cmd->parsed()) return cmd_explore(opts, out);
    return cmd_check(opts, out);
  } catch (const UsageError& e) {
    err << "cpar: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace cpar::cli
