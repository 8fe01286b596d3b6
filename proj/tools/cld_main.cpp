// cld: command-line front end over the C interface.
//
// Exit status: 0 success, 1 validation or verification failure, 2 usage
// error, 3 runtime error (I/O, numeric blow-up).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <regex>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cld/cld.h"

namespace {

enum Exit { kOk = 0, kFailed = 1, kUsage = 2, kRuntime = 3 };

struct ModelFree {
  void operator()(cld_model *m) const { cld_model_free(m); }
};
struct ScenarioFree {
  void operator()(cld_scenario *s) const { cld_scenario_free(s); }
};
struct TrajectoryFree {
  void operator()(cld_trajectory *t) const { cld_trajectory_free(t); }
};
struct StringFree {
  void operator()(char *s) const { cld_string_free(s); }
};

using ModelPtr = std::unique_ptr<cld_model, ModelFree>;
using ScenarioPtr = std::unique_ptr<cld_scenario, ScenarioFree>;
using TrajectoryPtr = std::unique_ptr<cld_trajectory, TrajectoryFree>;
using Text = std::unique_ptr<char, StringFree>;

int exit_for(cld_status s) {
  switch (s) {
    case CLD_OK: return kOk;
    case CLD_ERR_IO:
    case CLD_ERR_NUMERIC_BLOWUP:
    case CLD_ERR_INTERNAL: return kRuntime;
    case CLD_ERR_INVALID_ARGUMENT:
    case CLD_ERR_INVALID_SCENARIO: return kUsage;
    default: return kFailed;
  }
}

int report_error(cld_status s) {
  const std::string message = cld_last_error();
  std::cerr << "cld: " << (message.empty() ? cld_status_name(s) : message) << '\n';
  return exit_for(s);
}

// Loads a model, printing diagnostics to stderr. Warnings are shown only
// when `warnings` is set.
int load_model(const std::string &path, ModelPtr &out, bool warnings = false) {
  cld_model *m = nullptr;
  char *diag = nullptr;
  const auto s = cld_model_load(path.c_str(), &m, &diag);
  Text diagnostics(diag);
  if (diagnostics && (s != CLD_OK || warnings)) std::cerr << diagnostics.get();
  if (s == CLD_ERR_PARSE) return kFailed;
  if (s != CLD_OK) return report_error(s);
  out.reset(m);
  return kOk;
}

int write_file(const std::string &path, const char *text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!(f << text)) {
    std::cerr << "cld: cannot write " << path << '\n';
    return kRuntime;
  }
  return kOk;
}

cld_report_options options(bool json, bool color, std::size_t max_len = 0, std::size_t cap = 0) {
  return cld_report_options{json ? 1 : 0, color ? 1 : 0, max_len, cap};
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Causal loop diagram toolkit: parse, verify, analyze and simulate .cld models"};
  app.require_subcommand(1);
  bool color = false;
  app.add_flag("--color", color, "Colour loop classes in tables");

  std::string model_path, scenario_path;

  auto *check = app.add_subcommand("check", "Parse and validate a model");
  check->add_option("model", model_path, "Model file")->required();

  auto *loops = app.add_subcommand("loops", "List declared loops or enumerate every elementary cycle");
  bool all = false, declared = false, loops_json = false;
  std::size_t max_len = 0, cap = 0;
  loops->add_option("model", model_path, "Model file")->required();
  auto *all_flag = loops->add_flag("--all", all, "Enumerate every elementary cycle");
  loops->add_flag("--declared", declared, "Declared loops only (default)")->excludes(all_flag);
  loops->add_option("--max-len", max_len, "Longest cycle to enumerate")->check(CLI::PositiveNumber);
  loops->add_option("--cap", cap, "Fail when more cycles than this exist (default 1000000)")->check(CLI::PositiveNumber);
  loops->add_flag("--json", loops_json, "JSON output");

  auto *verify = app.add_subcommand("verify", "Check declared loops against the link graph");
  bool verify_json = false;
  verify->add_option("model", model_path, "Model file")->required();
  verify->add_flag("--json", verify_json, "JSON output");

  auto *infer = app.add_subcommand("infer-signs", "Infer unknown link polarities from declared loop classes");
  std::vector<std::string> fixes;
  bool emit = false, infer_json = false;
  infer->add_option("model", model_path, "Model file")->required();
  infer->add_option("--fix", fixes, "Fix a polarity before solving, e.g. 19->8:-");
  infer->add_flag("--emit", emit, "Print paste-ready link lines");
  infer->add_flag("--json", infer_json, "JSON output");

  auto *analyze = app.add_subcommand("analyze", "Loop participation of variables and links");
  std::string dot_out, json_out, over = "declared";
  analyze->add_option("model", model_path, "Model file")->required();
  analyze->add_option("--over", over, "Count declared loops or enumerated cycles")
      ->check(CLI::IsMember({"declared", "enumerated"}));
  analyze->add_option("--dot", dot_out, "Write a Graphviz rendering");
  analyze->add_option("--json", json_out, "Write the model as JSON");

  auto *simulate = app.add_subcommand("simulate", "Run a scenario and write the trajectory as CSV");
  std::string csv_out;
  bool jacobian = false;
  simulate->add_option("model", model_path, "Model file")->required();
  simulate->add_option("scenario", scenario_path, "Scenario file")->required();
  simulate->add_option("--out", csv_out, "CSV output path");
  simulate->add_flag("--jacobian", jacobian, "Also check link signs against the derivative at the all-ones state");

  auto *corpus = app.add_subcommand("corpus", "Validate a corpus directory and its goldens");
  std::string root;
  bool refresh = false;
  corpus->add_option("root", root, "Corpus directory")->required();
  corpus->add_flag("--refresh", refresh, "Regenerate goldens and manifest hashes first");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kUsage;
  }

  ModelPtr model;
  if (*check) {
    if (int rc = load_model(model_path, model, true)) return rc;
    char *report = nullptr;
    std::size_t violations = 0;
    if (auto s = cld_model_validate(model.get(), &report, &violations)) return report_error(s);
    Text text(report);
    if (violations) {
      std::cerr << text.get();
      return kFailed;
    }
    std::cout << model_path << ": ok (" << cld_model_variable_count(model.get()) << " variables, "
              << cld_model_link_count(model.get()) << " links, " << cld_model_loop_count(model.get())
              << " declared loops)\n";
    return kOk;
  }

  if (*loops) {
    if (int rc = load_model(model_path, model)) return rc;
    char *out = nullptr;
    const auto opts = options(loops_json, color, max_len, cap);
    if (auto s = cld_report_loops(model.get(), all ? CLD_LOOPS_ENUMERATED : CLD_LOOPS_DECLARED, &opts, &out, nullptr))
      return report_error(s);
    Text text(out);
    std::cout << text.get();
    return kOk;
  }

  if (*verify) {
    if (int rc = load_model(model_path, model)) return rc;
    char *out = nullptr;
    int ok = 0;
    const auto opts = options(verify_json, color);
    if (auto s = cld_report_verify(model.get(), &opts, &out, &ok)) return report_error(s);
    Text text(out);
    std::cout << text.get();
    return ok ? kOk : kFailed;
  }

  if (*infer) {
    if (int rc = load_model(model_path, model)) return rc;
    static const std::regex fix_re(R"(^\s*(\d+)\s*->\s*(\d+)\s*:\s*([-+?])\s*$)");
    for (const auto &fix : fixes) {
      std::smatch m;
      if (!std::regex_match(fix, m, fix_re)) {
        std::cerr << "cld: --fix expects FROM->TO:+|-|?, got '" << fix << "'\n";
        return kUsage;
      }
      cld_model *next = nullptr;
      auto s = cld_model_with_polarity(model.get(), std::stoi(m[1]), std::stoi(m[2]), m[3].str()[0], &next);
      if (s == CLD_ERR_UNKNOWN_REFERENCE) {
        std::cerr << "cld: --fix " << fix << ": " << cld_last_error() << '\n';
        return kUsage;
      }
      if (s) return report_error(s);
      model.reset(next);
    }
    char *out = nullptr;
    int consistent = 0;
    const auto opts = options(infer_json, color);
    if (auto s = cld_infer_signs(model.get(), emit ? 1 : 0, &opts, &out, &consistent, nullptr, nullptr, nullptr))
      return report_error(s);
    Text text(out);
    std::cout << text.get();
    return consistent ? kOk : kFailed;
  }

  if (*analyze) {
    if (int rc = load_model(model_path, model)) return rc;
    char *out = nullptr;
    const auto opts = options(false, color);
    if (auto s = cld_report_participation(model.get(), over == "enumerated" ? CLD_LOOPS_ENUMERATED : CLD_LOOPS_DECLARED,
                                          &opts, &out))
      return report_error(s);
    Text text(out);
    std::cout << text.get();
    if (!dot_out.empty()) {
      char *dot = nullptr;
      if (auto s = cld_model_export_dot(model.get(), &dot)) return report_error(s);
      Text d(dot);
      if (int rc = write_file(dot_out, d.get())) return rc;
    }
    if (!json_out.empty()) {
      char *js = nullptr;
      if (auto s = cld_model_export_json(model.get(), &js)) return report_error(s);
      Text j(js);
      if (int rc = write_file(json_out, j.get())) return rc;
    }
    return kOk;
  }

  if (*simulate) {
    if (int rc = load_model(model_path, model)) return rc;
    cld_scenario *sc = nullptr;
    char *diag = nullptr;
    auto s = cld_scenario_load(scenario_path.c_str(), &sc, &diag);
    Text diagnostics(diag);
    if (s == CLD_ERR_PARSE) {
      if (diagnostics) std::cerr << diagnostics.get();
      return kFailed;
    }
    if (s) return report_error(s);
    ScenarioPtr scenario(sc);

    cld_trajectory *tr = nullptr;
    if ((s = cld_simulate(model.get(), scenario.get(), &tr))) return report_error(s);
    TrajectoryPtr trajectory(tr);
    char *csv = nullptr, *summary = nullptr;
    if ((s = cld_trajectory_csv(trajectory.get(), &csv))) return report_error(s);
    Text csv_text(csv);
    if ((s = cld_trajectory_summary(trajectory.get(), &summary))) return report_error(s);
    Text summary_text(summary);
    if (csv_out.empty()) {
      std::cout << csv_text.get();
      std::cerr << summary_text.get();
    } else {
      if (int rc = write_file(csv_out, csv_text.get())) return rc;
      std::cout << summary_text.get();
    }
    if (jacobian) {
      char *jr = nullptr;
      std::size_t mismatches = 0;
      if ((s = cld_jacobian_check(model.get(), scenario.get(), 1.0, &jr, &mismatches))) return report_error(s);
      Text j(jr);
      std::cerr << j.get();
      if (mismatches) return kFailed;
    }
    return kOk;
  }

  if (*corpus) {
    char *out = nullptr;
    std::size_t stale = 0;
    if (auto s = cld_corpus_check(root.c_str(), refresh ? 1 : 0, &out, &stale)) return report_error(s);
    Text text(out);
    std::cout << text.get();
    return stale ? kFailed : kOk;
  }
  return kUsage;
}
