#include "cld/cld.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <map>
#include <optional>
#include <sstream>

#include "cld/corpus.hpp"
#include "cld/dsl.hpp"
#include "cld/error.hpp"
#include "cld/loops.hpp"
#include "cld/report.hpp"
#include "cld/signs.hpp"
#include "cld/sim.hpp"

struct cld_model {
  cld::Model model;
};

struct cld_scenario {
  cld::ScenarioSpec spec;
};

struct cld_trajectory {
  cld::Trajectory trajectory;
};

namespace {

thread_local std::string last_error;

cld_status status_of(cld::ErrorCode code) {
  using cld::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument: return CLD_ERR_INVALID_ARGUMENT;
    case ErrorCode::io: return CLD_ERR_IO;
    case ErrorCode::parse: return CLD_ERR_PARSE;
    case ErrorCode::duplicate_in_sequence: return CLD_ERR_DUPLICATE_IN_SEQUENCE;
    case ErrorCode::edge_missing: return CLD_ERR_EDGE_MISSING;
    case ErrorCode::cycle_limit: return CLD_ERR_CYCLE_LIMIT;
    case ErrorCode::unverified_loop: return CLD_ERR_UNVERIFIED_LOOP;
    case ErrorCode::inconsistent_solution: return CLD_ERR_INCONSISTENT_SOLUTION;
    case ErrorCode::unknown_polarity: return CLD_ERR_UNKNOWN_POLARITY;
    case ErrorCode::unknown_reference: return CLD_ERR_UNKNOWN_REFERENCE;
    case ErrorCode::invalid_scenario: return CLD_ERR_INVALID_SCENARIO;
    case ErrorCode::numeric_blowup: return CLD_ERR_NUMERIC_BLOWUP;
    case ErrorCode::corpus_corrupt: return CLD_ERR_CORPUS_CORRUPT;
  }
  return CLD_ERR_INTERNAL;
}

cld_status fail(cld_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs body, translating exceptions into status codes.
template <class F>
cld_status guarded(F &&body) {
  try {
    last_error.clear();
    return body();
  } catch (const cld::Error &e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc &) {
    return fail(CLD_ERR_INTERNAL, "out of memory");
  } catch (const std::exception &e) {
    return fail(CLD_ERR_INTERNAL, e.what());
  }
}

char *copy_string(const std::string &s) {
  auto *p = static_cast<char *>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.data(), s.size() + 1);
  return p;
}

void put(char **out, const std::string &s) {
  if (out) *out = copy_string(s);
}

cld::ReportStyle style_of(const cld_report_options *o) {
  return o ? cld::ReportStyle{o->json != 0, o->color != 0} : cld::ReportStyle{};
}

cld::LoopSet set_of(cld_loop_set s) {
  return s == CLD_LOOPS_ENUMERATED ? cld::LoopSet::enumerated : cld::LoopSet::declared;
}

cld::EnumerateOptions enum_options(const cld_report_options *o) {
  cld::EnumerateOptions opts;
  if (o && o->max_len) opts.max_len = o->max_len;
  if (o && o->cycle_cap) opts.cycle_cap = o->cycle_cap;
  return opts;
}

std::optional<cld::Polarity> polarity_of(char c) {
  if (c == '+') return cld::Polarity::plus;
  if (c == '-') return cld::Polarity::minus;
  if (c == '?') return cld::Polarity::unknown;
  return std::nullopt;
}

cld_status parse_model_text(std::string_view text, const char *origin, cld_model **out, char **diagnostics) {
  if (diagnostics) *diagnostics = nullptr;
  auto result = cld::parse_model(text);
  if (diagnostics && !result.diagnostics.empty())
    *diagnostics = copy_string(cld::format_diagnostics(result.diagnostics, origin ? origin : "<input>"));
  if (!result.ok()) return fail(CLD_ERR_PARSE, "model has errors");
  *out = new cld_model{std::move(*result.model)};
  return CLD_OK;
}

cld_status parse_scenario_text(std::string_view text, const char *origin, cld_scenario **out, char **diagnostics) {
  if (diagnostics) *diagnostics = nullptr;
  auto result = cld::parse_scenario(text);
  if (diagnostics && !result.diagnostics.empty())
    *diagnostics = copy_string(cld::format_diagnostics(result.diagnostics, origin ? origin : "<input>"));
  if (!result.ok()) return fail(CLD_ERR_PARSE, "scenario has errors");
  *out = new cld_scenario{std::move(*result.spec)};
  return CLD_OK;
}

}  // namespace

extern "C" {

const char *cld_status_name(cld_status status) {
  switch (status) {
    case CLD_OK: return "OK";
    case CLD_ERR_INVALID_ARGUMENT: return "INVALID_ARGUMENT";
    case CLD_ERR_IO: return "IO";
    case CLD_ERR_PARSE: return "PARSE";
    case CLD_ERR_DUPLICATE_IN_SEQUENCE: return "DUPLICATE_IN_SEQUENCE";
    case CLD_ERR_EDGE_MISSING: return "EDGE_MISSING";
    case CLD_ERR_CYCLE_LIMIT: return "CYCLE_LIMIT";
    case CLD_ERR_UNVERIFIED_LOOP: return "UNVERIFIED_LOOP";
    case CLD_ERR_INCONSISTENT_SOLUTION: return "INCONSISTENT_SOLUTION";
    case CLD_ERR_UNKNOWN_POLARITY: return "UNKNOWN_POLARITY";
    case CLD_ERR_UNKNOWN_REFERENCE: return "UNKNOWN_REFERENCE";
    case CLD_ERR_INVALID_SCENARIO: return "INVALID_SCENARIO";
    case CLD_ERR_NUMERIC_BLOWUP: return "NUMERIC_BLOWUP";
    case CLD_ERR_CORPUS_CORRUPT: return "CORPUS_CORRUPT";
    case CLD_ERR_INTERNAL: return "INTERNAL";
  }
  return "UNKNOWN";
}

const char *cld_last_error(void) { return last_error.c_str(); }

void cld_string_free(char *text) { std::free(text); }

cld_status cld_model_parse(const char *source, size_t length, const char *origin, cld_model **out,
                           char **diagnostics) {
  if (!out || (!source && length)) return fail(CLD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { return parse_model_text({source ? source : "", length}, origin, out, diagnostics); });
}

cld_status cld_model_load(const char *path, cld_model **out, char **diagnostics) {
  if (!path || !out) return fail(CLD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { return parse_model_text(cld::read_text_file(path), path, out, diagnostics); });
}

cld_status cld_model_import_json(const char *text, size_t length, cld_model **out) {
  if (!out || (!text && length)) return fail(CLD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new cld_model{cld::import_json({text ? text : "", length})};
    return CLD_OK;
  });
}

cld_status cld_model_canonical(cld_model **out) {
  if (!out) return fail(CLD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new cld_model{cld::canonical_hei_model()};
    return CLD_OK;
  });
}

void cld_model_free(cld_model *model) { delete model; }

size_t cld_model_variable_count(const cld_model *model) { return model ? model->model.variables().size() : 0; }
size_t cld_model_link_count(const cld_model *model) { return model ? model->model.links().size() : 0; }
size_t cld_model_loop_count(const cld_model *model) { return model ? model->model.declared_loops().size() : 0; }

char cld_model_link_polarity(const cld_model *model, int from, int to) {
  if (!model) return 0;
  const auto *l = model->model.find_link({cld::VariableId{from}, cld::VariableId{to}});
  return l ? cld::to_string(l->polarity)[0] : 0;
}

int cld_model_equal(const cld_model *a, const cld_model *b) { return a && b && a->model == b->model; }

cld_status cld_model_with_polarity(const cld_model *model, int from, int to, char polarity, cld_model **out) {
  if (!model || !out) return fail(CLD_ERR_INVALID_ARGUMENT, "null argument");
  const auto p = polarity_of(polarity);
  if (!p) return fail(CLD_ERR_INVALID_ARGUMENT, "polarity must be '+', '-' or '?'");
  return guarded([&] {
    *out = new cld_model{model->model.with_polarity({cld::VariableId{from}, cld::VariableId{to}}, *p)};
    return CLD_OK;
  });
}

cld_status cld_model_validate(const cld_model *model, char **report, size_t *violations) {
  if (!model) return fail(CLD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto found = cld::validate(model->model);
    std::string text;
    for (const auto &v : found) text += v.code + " " + v.location + ": " + v.message + "\n";
    put(report, text);
    if (violations) *violations = found.size();
    return CLD_OK;
  });
}

cld_status cld_model_emit(const cld_model *model, char **out) {
  if (!model || !out) return fail(CLD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    put(out, cld::emit_model(model->model));
    return CLD_OK;
  });
}

cld_status cld_model_export_dot(const cld_model *model, char **out) {
  if (!model || !out) return fail(CLD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    put(out, cld::export_dot(model->model));
    return CLD_OK;
  });
}

cld_status cld_model_export_json(const cld_model *model, char **out) {
  if (!model || !out) return fail(CLD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    put(out, cld::export_json(model->model));
    return CLD_OK;
  });
}

cld_status cld_report_loops(const cld_model *model, cld_loop_set set, const cld_report_options *options, char **out,
                            size_t *count) {
  if (!model) return fail(CLD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    if (set == CLD_LOOPS_ENUMERATED) {
      const auto loops = cld::enumerate_cycles(model->model, enum_options(options));
      put(out, cld::report_enumerated_loops(model->model, loops, style_of(options)));
      if (count) *count = loops.size();
    } else {
      put(out, cld::report_declared_loops(model->model, style_of(options)));
      if (count) *count = model->model.declared_loops().size();
    }
    return CLD_OK;
  });
}

cld_status cld_report_verify(const cld_model *model, const cld_report_options *options, char **out, int *all_ok) {
  if (!model) return fail(CLD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto verdicts = cld::verify_declared(model->model);
    put(out, cld::report_verdicts(verdicts, style_of(options)));
    if (all_ok) *all_ok = cld::all_verified(verdicts);
    return CLD_OK;
  });
}

cld_status cld_report_participation(const cld_model *model, cld_loop_set over, const cld_report_options *options,
                                    char **out) {
  if (!model) return fail(CLD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    put(out, cld::report_participation(model->model, set_of(over), style_of(options)));
    return CLD_OK;
  });
}

long cld_variable_participation(const cld_model *model, cld_loop_set over, int id) {
  if (!model) return -1;
  try {
    const auto counts = cld::loop_participation(model->model, set_of(over));
    auto it = counts.find(cld::VariableId{id});
    return it == counts.end() ? -1 : static_cast<long>(it->second);
  } catch (const std::exception &e) {
    last_error = e.what();
    return -1;
  }
}

long cld_link_participation(const cld_model *model, cld_loop_set over, int from, int to) {
  if (!model) return -1;
  try {
    const auto counts = cld::link_participation(model->model, set_of(over));
    auto it = counts.find({cld::VariableId{from}, cld::VariableId{to}});
    return it == counts.end() ? -1 : static_cast<long>(it->second);
  } catch (const std::exception &e) {
    last_error = e.what();
    return -1;
  }
}

cld_status cld_infer_signs(const cld_model *model, int emit, const cld_report_options *options, char **out,
                           int *consistent, size_t *rank, size_t *nullspace_dim, cld_model **solved) {
  if (!model) return fail(CLD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto system = cld::build_system(model->model);
    const auto solution = cld::solve(system, true);
    put(out, cld::report_signs(model->model, system, solution, emit != 0, style_of(options)));
    if (consistent) *consistent = solution.consistent;
    if (rank) *rank = solution.rank;
    if (nullspace_dim) *nullspace_dim = solution.nullspace_dim;
    if (solved) *solved = solution.consistent ? new cld_model{cld::apply(model->model, solution)} : nullptr;
    return CLD_OK;
  });
}

cld_status cld_scenario_parse(const char *source, size_t length, const char *origin, cld_scenario **out,
                              char **diagnostics) {
  if (!out || (!source && length)) return fail(CLD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { return parse_scenario_text({source ? source : "", length}, origin, out, diagnostics); });
}

cld_status cld_scenario_load(const char *path, cld_scenario **out, char **diagnostics) {
  if (!path || !out) return fail(CLD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { return parse_scenario_text(cld::read_text_file(path), path, out, diagnostics); });
}

void cld_scenario_free(cld_scenario *scenario) { delete scenario; }

cld_status cld_simulate(const cld_model *model, const cld_scenario *scenario, cld_trajectory **out) {
  if (!model || !scenario || !out) return fail(CLD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new cld_trajectory{cld::integrate(cld::compile(model->model, scenario->spec))};
    return CLD_OK;
  });
}

void cld_trajectory_free(cld_trajectory *trajectory) { delete trajectory; }

size_t cld_trajectory_length(const cld_trajectory *trajectory) {
  return trajectory ? trajectory->trajectory.times.size() : 0;
}

cld_status cld_trajectory_value(const cld_trajectory *trajectory, int id, size_t step, double *value) {
  if (!trajectory || !value) return fail(CLD_ERR_INVALID_ARGUMENT, "null argument");
  auto it = trajectory->trajectory.series.find(cld::VariableId{id});
  if (it == trajectory->trajectory.series.end())
    return fail(CLD_ERR_UNKNOWN_REFERENCE, "no series for variable " + std::to_string(id));
  if (step >= it->second.size()) return fail(CLD_ERR_INVALID_ARGUMENT, "step out of range");
  *value = it->second[step];
  return CLD_OK;
}

cld_status cld_trajectory_csv(const cld_trajectory *trajectory, char **out) {
  if (!trajectory || !out) return fail(CLD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    put(out, cld::export_csv(trajectory->trajectory, trajectory->trajectory.outputs));
    return CLD_OK;
  });
}

cld_status cld_trajectory_summary(const cld_trajectory *trajectory, char **out) {
  if (!trajectory || !out) return fail(CLD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    put(out, cld::report_trajectory_summary(trajectory->trajectory));
    return CLD_OK;
  });
}

cld_status cld_jacobian_check(const cld_model *model, const cld_scenario *scenario, double level, char **out,
                              size_t *mismatches) {
  if (!model || !scenario) return fail(CLD_ERR_INVALID_ARGUMENT, "null argument");
  if (!(level > 0)) return fail(CLD_ERR_INVALID_ARGUMENT, "level must be positive");
  return guarded([&] {
    const auto system = cld::compile(model->model, scenario->spec);
    std::map<cld::VariableId, double> state;
    for (const auto &v : model->model.variables()) state[v.id] = level;
    const auto found = cld::jacobian_sign_check(system, state);
    put(out, cld::report_sign_mismatches(found));
    if (mismatches) *mismatches = found.size();
    return CLD_OK;
  });
}

cld_status cld_corpus_check(const char *root, int refresh, char **report, size_t *stale) {
  if (!root) return fail(CLD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    if (refresh) cld::refresh_corpus(root);
    const auto entries = cld::load_corpus(root);
    const auto bad = cld::stale_goldens(root, entries);
    std::ostringstream os;
    for (const auto &e : entries) {
      const bool is_stale = std::find(bad.begin(), bad.end(), e.path) != bad.end();
      os << cld::to_string(e.kind) << ' ' << e.path << (is_stale ? "  STALE" : "  ok") << '\n';
    }
    os << entries.size() << " entries, " << bad.size() << " stale golden(s)\n";
    put(report, os.str());
    if (stale) *stale = bad.size();
    return CLD_OK;
  });
}

}  // extern "C"
