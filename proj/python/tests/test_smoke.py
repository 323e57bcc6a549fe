# Copyright 2026 The HDRR Authors.
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
import math

import pytest

import hdrr


def test_interval_iou_and_recall():
    assert hdrr.interval_iou((2.0, 6.0), (4.0, 8.0)) == pytest.approx(1.0 / 3.0)
    assert hdrr.recall_at([[(0.0, 8.0)], [(0.0, 4.0)]], [(0.0, 10.0), (0.0, 10.0)], 1, 0.5) == 0.5
    with pytest.raises(hdrr.UsageError):
        hdrr.interval_iou((5.0, 4.0), (0.0, 1.0))


def test_candidates():
    cands = hdrr.enumerate_candidates(75, [6, 12, 24, 48, 72])
    assert len(cands) == 218
    assert cands[0] == (0, 5, 6)
    assert all(e - s + 1 == w for s, e, w in cands)


def test_config_and_parameter_count():
    config = json.loads(hdrr.synthetic_config())
    full = hdrr.parameter_count(json.dumps(config))
    config["use_res_bigru"] = False
    assert hdrr.parameter_count(json.dumps(config)) < full
    config["d_s"] = 0
    with pytest.raises(hdrr.ConfigError):
        hdrr.parameter_count(json.dumps(config))


def test_cli_round_trip(tmp_path):
    config = json.loads(hdrr.synthetic_config())
    config.update(T_units=12, filter_sizes=[2, 4], epochs=1, d_s=4, d_f=8, d_w=4, d_v=4, heads=2)
    (tmp_path / "c.json").write_text(json.dumps(config))
    status, _, err = hdrr.run_cli(["synth", "--seed", "2", "--n", "5", "--out", str(tmp_path / "data"),
                                   "--config", str(tmp_path / "c.json")])
    assert status == hdrr.EXIT_OK, err
    status, _, err = hdrr.run_cli(["train", "--config", str(tmp_path / "c.json"), "--manifest",
                                   str(tmp_path / "data" / "manifest.jsonl"), "--out", str(tmp_path / "run")])
    assert status == hdrr.EXIT_OK, err
    status, out, err = hdrr.run_cli(["eval", "--config", str(tmp_path / "c.json"), "--checkpoint",
                                     str(tmp_path / "run" / "model.ckpt"), "--manifest",
                                     str(tmp_path / "data" / "manifest.jsonl")])
    assert status == hdrr.EXIT_OK, err
    report = json.loads(out)
    assert 0.0 <= report["r_at_1_iou_0.5"] <= 1.0
    assert math.isfinite(report["L_total"])
    assert hdrr.run_cli(["train"])[0] == hdrr.EXIT_USAGE


def test_gradcheck_passes():
    cases = hdrr.gradcheck(3)
    assert len(cases) > 100
    assert all(ok for _, ok, _ in cases)
