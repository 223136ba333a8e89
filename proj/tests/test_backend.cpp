#include "kedit/backend.hpp"
#include "kedit/prompt.hpp"

#include "helpers.hpp"

#include "doctest.h"

using namespace kedit;
using namespace kedit::testutil;

TEST_CASE("generate_step clips the completion at the first stop sequence") {
  ScriptedBackend backend(
      {"France is led by Jean.# Jean died in Lyon.# Lyon is the answer."});
  auto step = generate_step(backend, "Q?", {});
  REQUIRE(step.text.has_value());
  CHECK(*step.text == "France is led by Jean.");
  CHECK(step.backend_calls == 1);
}

TEST_CASE("generate_step clips at newlines too") {
  ScriptedBackend backend({"First step.\nAnswer: nope"});
  auto step = generate_step(backend, "Q?", {});
  REQUIRE(step.text.has_value());
  CHECK(*step.text == "First step.");
}

TEST_CASE("one empty completion earns a single retry") {
  ScriptedBackend backend({"", "The capital of France is Lyon."});
  auto step = generate_step(backend, "Q?", {});
  REQUIRE(step.text.has_value());
  CHECK(*step.text == "The capital of France is Lyon.");
  CHECK(step.backend_calls == 2);
}

TEST_CASE("two empty completions are a dead end") {
  ScriptedBackend backend({"", "   \t "});
  auto step = generate_step(backend, "Q?", {});
  CHECK_FALSE(step.text.has_value());
  CHECK(step.backend_calls == 2);
}

TEST_CASE("a completion that is only a stop marker counts as empty") {
  ScriptedBackend backend({"# leftover", "Paris is the answer."});
  auto step = generate_step(backend, "Q?", {});
  REQUIRE(step.text.has_value());
  CHECK(*step.text == "Paris is the answer.");
  CHECK(step.backend_calls == 2);
}

TEST_CASE("the request pins decoding parameters") {
  ScriptedBackend backend({"Some step."});
  generate_step(backend, "The question?", {"Earlier step."});
  REQUIRE(backend.requests().size() == 1);
  const auto& req = backend.requests()[0];
  CHECK(req.temperature == 0.0);
  CHECK(req.max_tokens == 64);
  CHECK(req.stop_sequences == step_stop_sequences());
  CHECK(req.prompt.find("The question?") != std::string::npos);
  CHECK(req.prompt.find("Earlier step.# ") != std::string::npos);
}

TEST_CASE("whitespace inside a kept step is collapsed") {
  ScriptedBackend backend({"  The capital of   France is Lyon.  "});
  auto step = generate_step(backend, "Q?", {});
  REQUIRE(step.text.has_value());
  CHECK(*step.text == "The capital of France is Lyon.");
}
