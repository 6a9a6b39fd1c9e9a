// Copyright 2026 The colt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "colt/cli.h"
#include "colt/engine.h"
#include "colt/gateway.h"
#include "colt/harness.h"
#include "colt/metrics.h"
#include "colt/outline.h"
#include "colt/rank_filter.h"
#include "colt/taxonomy.h"

namespace py = pybind11;
using namespace pybind11::literals;

namespace colt {
namespace {

using StrEdge = std::pair<std::string, std::string>;

Taxonomy from_edges(const std::string& root, const std::vector<StrEdge>& edges) {
  std::vector<Edge> out;
  for (const auto& [p, c] : edges) out.push_back({Entity(p), Entity(c)});
  return Taxonomy::build(Entity(root), out);
}

std::vector<StrEdge> edge_list(const Taxonomy& t) {
  std::vector<StrEdge> out;
  for (const auto& e : t.edges()) out.emplace_back(e.parent.surface(), e.child.surface());
  return out;
}

std::vector<std::string> surfaces(const std::vector<Entity>& v) {
  std::vector<std::string> out;
  for (const auto& e : v) out.push_back(e.surface());
  return out;
}

py::dict prf(const PRF& p) {
  return py::dict("precision"_a = p.precision, "recall"_a = p.recall, "f1"_a = p.f1);
}

py::dict metrics(const MetricsReport& m) {
  return py::dict("ancestor"_a = prf(m.ancestor), "edge"_a = prf(m.edge),
                  "node"_a = prf(m.node));
}

std::string replay(const std::vector<std::string>& entities, const std::string& root,
                   const std::string& transcript, const std::string& method,
                   const std::string& script_mode, bool filter, bool strict) {
  std::vector<Entity> ents;
  for (const auto& s : entities) ents.emplace_back(s);
  InductionConfig c;
  c.mode = parse_induction_mode(method);
  c.filter_enabled = filter;
  c.strict_entity_set = strict;
  auto backend = ScriptedBackend::from_file(
      transcript, script_mode == "digest" ? ScriptMode::kDigest : ScriptMode::kPosition);
  LexicalScorer scorer;
  py::gil_scoped_release release;
  return report_to_json(induce(ents, Entity(root), c, *backend, filter ? &scorer : nullptr));
}

py::list ensemble(const std::string& query, const std::vector<std::string>& candidates,
                  const std::vector<RankMap>& per_template) {
  std::vector<Entity> c;
  for (const auto& s : candidates) c.emplace_back(s);
  ScoreTable t = ensemble_from_ranks(Entity(query), c, per_template);
  py::list out;
  for (const auto& row : t.rows) {
    out.append(py::make_tuple(row.candidate.surface(), row.score, row.rank));
  }
  return out;
}

py::tuple cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code;
  {
    py::gil_scoped_release release;
    code = run_cli(args, out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace
}  // namespace colt

PYBIND11_MODULE(_colt, m) {
  using namespace colt;
  m.doc() = "Layer-wise taxonomy induction core";

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
  error_type.call_once_and_store_result(
      [&]() -> py::object { return py::exception<Error>(m, "ColtError"); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const py::object& type = error_type.get_stored();
      py::object exc = type(e.what());
      exc.attr("code") = std::string(error_code_name(e.code()));
      PyErr_SetObject(type.ptr(), exc.ptr());
    }
  });

  m.def("normalize_key", [](const std::string& s) { return normalize_key(s); });

  py::class_<Taxonomy>(m, "Taxonomy")
      .def(py::init([](const std::string& root) { return Taxonomy(Entity(root)); }))
      .def_static("from_edges", &from_edges, "root"_a, "edges"_a)
      .def_static("from_outline",
                  [](const std::string& text, bool lenient) {
                    return outline_to_taxonomy(parse_outline(text).outline, lenient);
                  },
                  "text"_a, "lenient"_a = false)
      .def_property_readonly("root", [](const Taxonomy& t) { return t.root().surface(); })
      .def("nodes", [](const Taxonomy& t) { return surfaces(t.nodes()); })
      .def("edges", &edge_list)
      .def("parent_of",
           [](const Taxonomy& t, const std::string& s) -> std::optional<std::string> {
             auto p = t.parent_of(Entity(s));
             if (!p) return std::nullopt;
             return p->surface();
           })
      .def("levels", &Taxonomy::levels)
      .def("outline", [](const Taxonomy& t) { return render_outline(t); })
      .def("__len__", &Taxonomy::size)
      .def("__contains__",
           [](const Taxonomy& t, const std::string& s) { return t.contains(Entity(s)); })
      .def("__eq__", [](const Taxonomy& a, const Taxonomy& b) { return a == b; });

  py::class_<DatasetRecord>(m, "DatasetRecord")
      .def_readonly("name", &DatasetRecord::name)
      .def_property_readonly("root", [](const DatasetRecord& r) { return r.root.surface(); })
      .def_property_readonly("entities",
                             [](const DatasetRecord& r) { return surfaces(r.entities); })
      .def_readonly("gold", &DatasetRecord::gold)
      .def_property_readonly("split", [](const DatasetRecord& r) {
        return std::string(split_name(r.split));
      });

  m.def("load_dataset", &load_dataset, "path"_a);
  m.def("evaluate", [](const Taxonomy& pred, const Taxonomy& gold) {
    return metrics(evaluate(pred, gold));
  }, "pred"_a, "gold"_a);
  m.def("sample_subtaxonomy", &sample_subtaxonomy, "gold"_a, "size"_a, "seed"_a);
  m.def("ensemble_from_ranks", &ensemble, "query"_a, "candidates"_a, "per_template"_a);
  m.def("replay", &replay, "entities"_a, "root"_a, "transcript"_a, "method"_a = "col",
        "script_mode"_a = "position", "filter"_a = false, "strict"_a = true);
  m.def("run_experiment", [](const std::string& config, const std::string& out_dir) {
    ExperimentConfig c = load_experiment_config(config);
    if (!out_dir.empty()) c.out_dir = out_dir;
    py::gil_scoped_release release;
    return run_experiment(c).exit_code();
  }, "config"_a, "out_dir"_a = "");
  m.def("cli", &cli, "args"_a);
}
