#include "kedit/backend.hpp"

#include "kedit/prompt.hpp"
#include "kedit/text.hpp"

namespace kedit {

namespace {

// Backends are asked to stop at "#" / "\n" but not all of them honor stop
// sequences server-side, so clip client-side as well.
std::string clip_at_stops(const std::string& text,
                          const std::vector<std::string>& stops) {
  std::size_t cut = text.size();
  for (const auto& stop : stops) {
    if (stop.empty()) continue;
    auto pos = text.find(stop);
    if (pos != std::string::npos && pos < cut) cut = pos;
  }
  return text.substr(0, cut);
}

} // namespace

GeneratedStep generate_step(GeneratorBackend& backend,
                            const std::string& question,
                            const std::vector<std::string>& chain) {
  GenerationRequest request;
  request.prompt = render_generation_prompt(question, chain);
  request.temperature = 0.0;
  request.stop_sequences = step_stop_sequences();
  request.max_tokens = 64;

  GeneratedStep out;
  for (int attempt = 0; attempt < 2; ++attempt) {
    std::string raw = backend.complete(request);
    ++out.backend_calls;
    std::string step = collapse_ws(clip_at_stops(raw, request.stop_sequences));
    if (!step.empty()) {
      out.text = std::move(step);
      return out;
    }
  }
  return out; // dead end
}

} // namespace kedit
