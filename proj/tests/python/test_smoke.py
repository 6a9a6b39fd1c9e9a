# Copyright 2026 The colt Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import os
import pathlib

import pytest

import colt

FIXTURES = pathlib.Path(__file__).resolve().parents[2] / "data" / "fixtures"


def test_normalize_key():
  assert colt.normalize_key("  Flight   Maneuver ") == "flight maneuver"


def test_outline_round_trip():
  t = colt.Taxonomy.from_edges("a", [("a", "b"), ("b", "c"), ("a", "d")])
  back = colt.Taxonomy.from_outline(t.outline())
  assert back == t
  assert back.nodes() == ["a", "b", "c", "d"]
  assert t.parent_of("c") == "b"
  assert t.parent_of("a") is None
  assert len(t) == 4 and t.levels() == 3
  assert "C" in t


def test_evaluate_identity_and_partial():
  gold = colt.load_dataset(str(FIXTURES / "maneuver.json"))[0].gold
  m = colt.evaluate(gold, gold)
  assert m["edge"] == {"precision": 1.0, "recall": 1.0, "f1": 1.0}
  part = colt.Taxonomy.from_outline("1. maneuver\n1.1 clinch\n1.2 roll")
  m = colt.evaluate(part, gold)
  assert m["edge"]["precision"] == pytest.approx(0.5)
  assert m["edge"]["recall"] == pytest.approx(1 / 13)


def test_ensemble():
  rows = colt.ensemble_from_ranks(
      "q", ["a", "b", "c", "d"],
      [{"a": 1, "b": 2, "c": 3, "d": 4}, {"a": 4, "b": 1, "c": 2, "d": 3}])
  scores = {name: score for name, score, _ in rows}
  assert scores["a"] == pytest.approx(0.625, abs=1e-12)
  assert rows[0][0] == "b"


def test_replay_golden():
  rec = colt.load_dataset(str(FIXTURES / "maneuver.json"))[0]
  report = colt.induce_replay(
      rec, str(FIXTURES / "transcripts" / "maneuver.col.ndjson"))
  assert report["termination"] == "pool-empty"
  assert len(report["iterations"]) == 4


def test_sampler_deterministic():
  gold = colt.load_dataset(str(FIXTURES / "maneuver.json"))[0].gold
  a = colt.sample_subtaxonomy(gold, 6, 3)
  assert a == colt.sample_subtaxonomy(gold, 6, 3)
  assert len(a) == 6 and a.root == "maneuver"


def test_errors_carry_code():
  with pytest.raises(colt.ColtError) as info:
    colt.Taxonomy.from_edges("a", [("a", "b"), ("b", "a")])
  assert info.value.code == "CycleDetected"
  with pytest.raises(colt.ColtError) as info:
    colt.sample_subtaxonomy(colt.Taxonomy("a"), 2, 0)
  assert info.value.code == "TargetTooLarge"


def test_cli_and_experiment(tmp_path):
  code, out, _ = colt.cli(["evaluate", str(FIXTURES / "cutlery.json"),
                           str(FIXTURES / "cutlery.json")])
  assert code == 0 and "1.0000" in out
  assert colt.run_experiment(str(FIXTURES / "ablation.toml"), str(tmp_path)) == 0
  assert (tmp_path / "ablation-ablation.tsv").exists()
  assert os.listdir(tmp_path / "ablation-col-filter")
