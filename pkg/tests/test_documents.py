import json

import numpy as np
import pytest

from lowrank_svp.documents import (
    dump_json,
    instance_from_document,
    instance_to_document,
    load_instance,
    oracle_document,
    result_document,
)
from lowrank_svp.errors import DocumentError
from lowrank_svp.model import random_instance, validate
from lowrank_svp.oracle import brute_force
from lowrank_svp.solver import solve


class TestInstanceRoundTrip:
    def test_bit_exact(self):
        for seed in range(10):
            inst = random_instance(5, 2, seed)
            doc = instance_to_document(inst)
            back = instance_from_document(json.loads(dump_json(doc)))
            assert np.array_equal(back.d, inst.d)
            assert np.array_equal(back.V, inst.V)

    def test_metadata_preserved(self):
        inst = random_instance(3, 1, 0)
        doc = instance_to_document(inst, metadata={"note": "x"})
        assert doc["metadata"] == {"note": "x"}

    def test_file_round_trip(self, tmp_path):
        inst = random_instance(4, 2, 7)
        path = tmp_path / "inst.json"
        path.write_text(dump_json(instance_to_document(inst)))
        back = load_instance(path)
        assert np.array_equal(back.d, inst.d)
        assert np.array_equal(back.V, inst.V)


class TestInstanceValidation:
    def base_doc(self):
        return json.loads(dump_json(instance_to_document(random_instance(3, 1, 1))))

    def test_missing_field(self):
        doc = self.base_doc()
        del doc["d"]
        with pytest.raises(DocumentError, match="missing required field 'd'"):
            instance_from_document(doc)

    def test_bad_schema_version(self):
        doc = self.base_doc()
        doc["schema_version"] = "999"
        with pytest.raises(DocumentError, match="schema_version"):
            instance_from_document(doc)

    def test_shape_mismatch(self):
        doc = self.base_doc()
        doc["d"] = doc["d"][:-1]
        with pytest.raises(DocumentError, match="d must be a list of 3"):
            instance_from_document(doc)

    def test_ragged_v(self):
        doc = self.base_doc()
        doc["V"][0] = doc["V"][0] + [1.0]
        with pytest.raises(DocumentError, match="rows of 1 reals"):
            instance_from_document(doc)

    def test_nonpositive_d(self):
        doc = self.base_doc()
        doc["d"][0] = -1.0
        with pytest.raises(DocumentError):
            instance_from_document(doc)

    def test_not_an_object(self):
        with pytest.raises(DocumentError, match="JSON object"):
            instance_from_document([1, 2])

    def test_malformed_json_reports_location(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"schema_version": "1",\n  "n": }\n')
        with pytest.raises(DocumentError, match="line 2, column"):
            load_instance(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DocumentError, match="cannot read"):
            load_instance(tmp_path / "absent.json")


class TestResultDocuments:
    def test_result_fields(self):
        inst = random_instance(4, 2, 2, shrink=0.5)
        stats = validate(inst)
        res = solve(inst)
        doc = result_document(res, stats, wall_time_ms=1.5)
        assert doc["a_star"] == [int(x) for x in res.a_star]
        assert doc["f_star"] == res.f_star
        assert doc["stats"]["used_path"] == res.used_path
        assert doc["stats"]["wall_time_ms"] == 1.5
        assert "rate" not in doc

    def test_timing_omitted(self):
        inst = random_instance(3, 1, 3, shrink=0.5)
        stats = validate(inst)
        doc = result_document(solve(inst), stats)
        assert "wall_time_ms" not in doc["stats"]

    def test_oracle_document(self):
        inst = random_instance(3, 1, 4, shrink=0.5)
        res = brute_force(inst, validate(inst))
        doc = oracle_document(res)
        assert doc["f_star"] == res.f_star
        assert len(doc["minimizers"]) == len(res.minimizers)
        assert doc["vectors_scanned"] == res.vectors_scanned

    def test_dump_json_stable(self):
        doc = {"b": 1, "a": [1.0, 2.5]}
        out = dump_json(doc)
        assert out == dump_json(doc)
        assert out.endswith("\n")
