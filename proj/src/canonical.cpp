#include "cld/dsl.hpp"
#include "cld/error.hpp"
#include "cld/model.hpp"
#include "hei_ai_source.inc"

namespace cld {

std::string_view canonical_hei_source() { return kHeiAiSource; }

const Model &canonical_hei_model() {
  static const Model model = [] {
    auto result = parse_model(kHeiAiSource);
    if (!result.ok())
      throw Error(ErrorCode::corpus_corrupt,
                  "embedded models/hei-ai.cld:\n" + format_diagnostics(result.diagnostics, "hei-ai.cld"));
    return std::move(*result.model);
  }();
  return model;
}

}  // namespace cld
