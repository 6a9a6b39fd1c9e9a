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

"""Layer-wise taxonomy induction and evaluation."""

import json

from colt._colt import (
    ColtError,
    DatasetRecord,
    Taxonomy,
    cli,
    ensemble_from_ranks,
    evaluate,
    load_dataset,
    normalize_key,
    run_experiment,
    sample_subtaxonomy,
)
from colt import _colt

__all__ = [
    "ColtError",
    "DatasetRecord",
    "Taxonomy",
    "cli",
    "ensemble_from_ranks",
    "evaluate",
    "induce_replay",
    "load_dataset",
    "normalize_key",
    "run_experiment",
    "sample_subtaxonomy",
]


def induce_replay(record, transcript, method="col", script_mode="position",
                  filter=False, strict=True):
  """Replays a recorded dialogue over `record`; returns the report dict."""
  text = _colt.replay(record.entities, record.root, transcript, method,
                      script_mode, filter, strict)
  return json.loads(text)
