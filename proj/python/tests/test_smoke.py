# Copyright 2026 The cavent Authors
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

import json

import numpy as np
import pytest

import cavent


def test_version():
    assert cavent.__version__ == "0.1.0"


def test_presets():
    assert cavent.preset_names() == ["fig1a", "fig1b"]
    assert "[curve]" in cavent.preset_text("fig1a")


def test_boson_junction_shapes():
    j = cavent.boson_junction(12)
    assert len(j["alpha"]) == 3
    a0 = np.asarray(j["alpha"][0])
    assert a0.shape == (12, 12)
    assert np.allclose(a0, np.eye(12))
    assert np.allclose(j["beta"][0], 0.0)


def test_fermion_junction_shapes():
    a = cavent.fermion_junction(6)
    assert np.asarray(a[1]).shape == (13, 13)


def test_boson_vacuum_first_order():
    r = cavent.analyze("boson", "vacuum", 1, 4, u=0.3, n_max=16)
    assert r["power"] == 1
    assert not r["zero"]
    assert r["negativity"] > 0
    assert {c["name"] for c in r["closed_form"]} == {"lambda4", "lambda6"}


def test_sweep_rows_and_outputs():
    cfg = "steps = 3\nn_max = 12\n[curve]\nspecies = fermion\nstate = vacuum\nmodes = 2, -1\n"
    res = cavent.sweep(cfg, convergence_check=False)
    rows = res.rows
    assert len(rows) == 3
    assert rows[0]["negativity_normalized"] == 0.0
    assert res.to_csv().splitlines()[0] == (
        "u,negativity_normalized,power,state,species,mode_a,mode_b,converged"
    )
    doc = json.loads(res.to_json())
    assert doc["metadata"]["n_max"] == 12
    assert len(doc["rows"]) == 3


def test_errors():
    with pytest.raises(cavent.ConfigError):
        cavent.sweep("nonsense = 1\n")
    with pytest.raises(ValueError):
        cavent.analyze("boson", "pair", 1, 2, u=0.3)
