#pragma once

// Shared fixtures: a scripted generator backend, a small geography world for
// oracle/search tests, and shorthand for building stores and facts.

#include "kedit/backend.hpp"
#include "kedit/embedding.hpp"
#include "kedit/fact_graph.hpp"
#include "kedit/store.hpp"
#include "kedit/templates.hpp"
#include "kedit/triple.hpp"

#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kedit::testutil {

// Replays a fixed list of completions in order and records every request.
// Asking for more completions than were scripted throws, so a test that
// loops unexpectedly fails fast instead of hanging.
class ScriptedBackend final : public GeneratorBackend {
public:
  explicit ScriptedBackend(std::vector<std::string> replies)
      : replies_(std::move(replies)) {}

  std::string complete(const GenerationRequest& request) override {
    std::lock_guard<std::mutex> lock(mutex_);
    requests_.push_back(request);
    if (next_ >= replies_.size()) {
      throw std::runtime_error("ScriptedBackend: out of scripted replies (" +
                               std::to_string(replies_.size()) + " given)");
    }
    return replies_[next_++];
  }

  std::string id() const override { return "scripted"; }

  const std::vector<GenerationRequest>& requests() const { return requests_; }
  std::size_t calls() const { return requests_.size(); }

private:
  std::mutex mutex_;
  std::vector<std::string> replies_;
  std::size_t next_ = 0;
  std::vector<GenerationRequest> requests_;
};

inline std::shared_ptr<EmbeddingProvider> hashing_provider(
    std::size_t dimension = 64) {
  return std::make_shared<HashingEmbeddingProvider>(dimension);
}

inline EditedFact make_fact(const SentenceTemplates& templates,
                            const std::string& subject,
                            const std::string& relation,
                            const std::string& object,
                            const std::string& source = "test") {
  EditedFact fact;
  fact.triple = Triple{subject, relation, object};
  fact.text = templates.render(fact.triple);
  fact.source_instance = source;
  return fact;
}

inline KnowledgeStore make_store(std::vector<EditedFact> facts,
                                 std::size_t dimension = 64) {
  return KnowledgeStore::build(std::move(facts), hashing_provider(dimension));
}

// A small world the oracle can answer questions about:
//
//   Eiffel Tower --in-country--> France --capital-of--> Paris
//   France --led-by--> Emmanuel Macron
//   Paris / Lyon / Berlin --in-continent--> Europe
//   Germany --capital-of--> Berlin
//
// Registered questions (composed from the relation fragments):
//   two_hop:   subject "Eiffel Tower", path {in-country, capital-of}
//   three_hop: subject "Eiffel Tower", path {in-country, capital-of,
//              in-continent}
struct GeographyWorld {
  std::shared_ptr<FactGraph> graph;
  std::string two_hop_question;
  std::string three_hop_question;

  const SentenceTemplates& templates() const { return graph->templates(); }
};

inline GeographyWorld geography_world() {
  GeographyWorld world;
  world.graph = std::make_shared<FactGraph>();
  FactGraph& g = *world.graph;

  g.add_relation({"in-country", "{s} is located in the country of {o}.",
                  "the country where {x} is located"});
  g.add_relation({"capital-of", "The capital of {s} is {o}.",
                  "the capital of {x}"});
  g.add_relation({"in-continent", "{s} is located in the continent of {o}.",
                  "the continent where {x} is located"});
  g.add_relation({"led-by", "{s} is led by {o}.", "the leader of {x}"});

  g.add_triple({"Eiffel Tower", "in-country", "France"});
  g.add_triple({"France", "capital-of", "Paris"});
  g.add_triple({"France", "led-by", "Emmanuel Macron"});
  g.add_triple({"Paris", "in-continent", "Europe"});
  g.add_triple({"Lyon", "in-continent", "Europe"});
  g.add_triple({"Germany", "capital-of", "Berlin"});
  g.add_triple({"Berlin", "in-continent", "Europe"});

  const std::vector<std::string> two_hop = {"in-country", "capital-of"};
  const std::vector<std::string> three_hop = {"in-country", "capital-of",
                                              "in-continent"};
  world.two_hop_question = g.compose_question("Eiffel Tower", two_hop);
  world.three_hop_question = g.compose_question("Eiffel Tower", three_hop);
  g.register_question({world.two_hop_question, "Eiffel Tower", two_hop});
  g.register_question({world.three_hop_question, "Eiffel Tower", three_hop});
  return world;
}

} // namespace kedit::testutil
