#include "kedit/fact_graph.hpp"

#include "kedit/text.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <stdexcept>

namespace kedit {

void FactGraph::add_relation(const RelationSpec& spec) {
  if (spec.id.empty()) throw std::invalid_argument("relation id is empty");
  for (const auto& existing : relations_) {
    if (existing.id == spec.id) return;
  }
  if (spec.question_fragment.find("{x}") == std::string::npos) {
    throw std::invalid_argument("relation '" + spec.id +
                                "': question fragment needs an {x} hole");
  }
  relations_.push_back(spec);
  templates_.add(spec.id, spec.pattern);
}

void FactGraph::remember_entity(const std::string& name) {
  canonical_.emplace(normalize_entity(name), name);
}

void FactGraph::add_triple(const Triple& triple) {
  validate_triple(triple);
  const std::string key = triple.subject_relation_key();
  auto it = forward_.find(key);
  if (it != forward_.end()) {
    if (it->second == normalize_entity(triple.object)) return; // idempotent
    throw std::invalid_argument("graph is functional: (" + triple.subject +
                                ", " + triple.relation +
                                ") already has an object");
  }
  forward_.emplace(key, normalize_entity(triple.object));
  triples_.push_back(triple);
  remember_entity(triple.subject);
  remember_entity(triple.object);
}

void FactGraph::register_question(const QuestionSpec& spec) {
  question_index_[normalize_field(spec.text)] = questions_.size();
  questions_.push_back(spec);
  remember_entity(spec.subject);
}

std::optional<Triple> FactGraph::next_triple(const std::string& entity,
                                             const std::string& relation) const {
  Triple probe{entity, relation, "?"};
  auto it = forward_.find(probe.subject_relation_key());
  if (it == forward_.end()) return std::nullopt;
  return Triple{canonical_entity(entity), relation,
                canonical_entity(it->second)};
}

const QuestionSpec* FactGraph::find_question(
    const std::string& question_text) const {
  auto it = question_index_.find(normalize_field(question_text));
  if (it == question_index_.end()) return nullptr;
  return &questions_[it->second];
}

std::string FactGraph::canonical_entity(const std::string& name) const {
  auto it = canonical_.find(normalize_entity(name));
  if (it == canonical_.end()) return name;
  return it->second;
}

std::string FactGraph::compose_question(
    const std::string& subject, const std::vector<std::string>& path) const {
  std::string phrase = subject;
  for (const auto& rel : path) {
    const RelationSpec* spec = nullptr;
    for (const auto& r : relations_) {
      if (r.id == rel) {
        spec = &r;
        break;
      }
    }
    if (spec == nullptr)
      throw std::invalid_argument("unknown relation '" + rel + "'");
    std::string next = spec->question_fragment;
    auto pos = next.find("{x}");
    next.replace(pos, 3, phrase);
    phrase = std::move(next);
  }
  return "What is " + phrase + "?";
}

std::optional<std::string> FactGraph::walk(
    const std::string& subject, const std::vector<std::string>& path,
    const std::vector<EditedFact>* overlay) const {
  std::string entity = subject;
  for (const auto& rel : path) {
    std::optional<Triple> hop;
    if (overlay != nullptr) {
      Triple probe{entity, rel, "?"};
      for (const auto& edit : *overlay) {
        if (edit.triple.same_subject_relation(probe)) {
          hop = edit.triple;
          break;
        }
      }
    }
    if (!hop) hop = next_triple(entity, rel);
    if (!hop) return std::nullopt;
    entity = hop->object;
  }
  return canonical_entity(entity);
}

void FactGraph::save(const std::string& path) const {
  nlohmann::json doc;
  doc["relations"] = nlohmann::json::array();
  for (const auto& r : relations_) {
    doc["relations"].push_back({{"id", r.id},
                                {"pattern", r.pattern},
                                {"question_fragment", r.question_fragment}});
  }
  doc["triples"] = nlohmann::json::array();
  for (const auto& t : triples_) {
    doc["triples"].push_back({t.subject, t.relation, t.object});
  }
  doc["questions"] = nlohmann::json::array();
  for (const auto& q : questions_) {
    doc["questions"].push_back(
        {{"text", q.text}, {"subject", q.subject}, {"path", q.path}});
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write graph file: " + path);
  out << doc.dump(2) << '\n';
}

FactGraph FactGraph::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read graph file: " + path);
  nlohmann::json doc;
  in >> doc;

  FactGraph graph;
  for (const auto& r : doc.value("relations", nlohmann::json::array())) {
    graph.add_relation({r.at("id").get<std::string>(),
                        r.at("pattern").get<std::string>(),
                        r.at("question_fragment").get<std::string>()});
  }
  for (const auto& t : doc.value("triples", nlohmann::json::array())) {
    graph.add_triple({t.at(0).get<std::string>(), t.at(1).get<std::string>(),
                      t.at(2).get<std::string>()});
  }
  for (const auto& q : doc.value("questions", nlohmann::json::array())) {
    QuestionSpec spec;
    spec.text = q.at("text").get<std::string>();
    spec.subject = q.at("subject").get<std::string>();
    for (const auto& rel : q.at("path")) {
      spec.path.push_back(rel.get<std::string>());
    }
    graph.register_question(spec);
  }
  return graph;
}

} // namespace kedit
