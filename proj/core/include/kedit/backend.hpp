#pragma once

#include <optional>
#include <string>
#include <vector>

namespace kedit {

struct GenerationRequest {
  std::string prompt;
  double temperature = 0.0;
  std::vector<std::string> stop_sequences;
  int max_tokens = 64;
};

// Black-box text completion. Implementations must tolerate concurrent
// complete() calls from evaluation workers. Transport failures surface as
// ProviderError; an empty completion is a legitimate "nothing to say".
class GeneratorBackend {
public:
  virtual ~GeneratorBackend() = default;
  virtual std::string complete(const GenerationRequest& request) = 0;
  virtual std::string id() const = 0;
};

struct GeneratedStep {
  // nullopt means the generator produced nothing twice in a row: a dead end.
  std::optional<std::string> text;
  int backend_calls = 0;
};

// One reasoning step at temperature 0 with step-granular stop sequences.
// Retries a single time on an empty completion before declaring a dead end.
GeneratedStep generate_step(GeneratorBackend& backend,
                            const std::string& question,
                            const std::vector<std::string>& chain);

} // namespace kedit
