#!/usr/bin/env python3
"""
Test suite for group files and certificate JSON
"""

import json
import sys
from pathlib import Path

import pytest

# Add parent directory to path to import niljordan modules
sys.path.insert(0, str(Path(__file__).parent.parent))

from niljordan.config import Caps
from niljordan.errors import CapExceeded, MalformedInput, ParseError, Singular
from niljordan.fileformat import (
    CapsBlock,
    CertificateModel,
    certificate_from_model,
    certificate_json,
    group_file_for,
    group_file_json,
    group_from_file,
    read_certificate,
    read_group_file,
)
from niljordan.jordan import dn_extract, groupmain_extract, verify_certificate
from niljordan.witness import heisenberg, semilinear_catalog

ARTIFACTS = Path(__file__).parent / "test_artifacts"


def load(name: str, **kwargs):
    return group_from_file(read_group_file(ARTIFACTS / name), **kwargs)


class TestGroupFiles:
    """Test reading, enumerating and re-writing group files"""

    @pytest.mark.parametrize(
        "name, order",
        [
            ("heisenberg5.json", 125),
            ("e2_3.json", 8),
            ("sym3.json", 6),
            ("q8.json", 8),
            ("semilinear8.json", 8),
            ("gamma_s3.json", 6),
            ("product_q8_c3.json", 24),
        ],
    )
    def test_fixture_orders(self, name, order):
        """Every element kind enumerates to the expected order"""
        assert load(name).order == order

    @pytest.mark.parametrize(
        "name", ["heisenberg5.json", "sym3.json", "q8.json", "semilinear8.json", "product_q8_c3.json"]
    )
    def test_rewrite_preserves_group(self, name):
        """Writing a group back out and reading it again gives the same group"""
        G = load(name)
        again = group_from_file(group_file_for(G))
        assert again.order == G.order
        assert again.is_abelian() == G.is_abelian()
        assert group_file_for(again) == group_file_for(G)

    def test_json_text_is_stable(self, tmp_path):
        """Two-space indent, trailing newline, and a readable round trip through disk"""
        text = group_file_json(heisenberg(3))
        assert text.endswith("}\n")
        assert json.loads(text)["header"] == {"kind": "heisenberg", "transcendental": False, "p": 3}
        path = tmp_path / "heis3.json"
        path.write_text(text)
        assert load(path).order == 27
        assert group_file_json(load(path)) == text

    def test_unknown_header_field(self):
        """Headers reject unknown keys"""
        with pytest.raises(MalformedInput):
            read_group_file(ARTIFACTS / "unknown_field.json")

    def test_truncated_json(self):
        with pytest.raises(MalformedInput):
            read_group_file(ARTIFACTS / "not_json.json")

    def test_missing_file(self, tmp_path):
        with pytest.raises(MalformedInput):
            read_group_file(tmp_path / "absent.json")

    def test_bad_cycle(self):
        """A cycle string that repeats a point fails to parse"""
        with pytest.raises(ParseError):
            load("bad_cycle.json")

    def test_wrong_matrix_shape(self, tmp_path):
        """Matrix generators must be n x n"""
        path = tmp_path / "shape.json"
        path.write_text(json.dumps({
            "header": {"kind": "matrix", "n": 2, "conductor": 4},
            "generators": [[["1", "0", "0"], ["0", "1", "0"]]],
        }))
        with pytest.raises(MalformedInput):
            load(path)

    @pytest.mark.parametrize("rows", [[["1", "0"], ["0", "0"]], [["0", "1"], ["0", "0"]]])
    def test_singular_generator(self, tmp_path, rows):
        """Matrix generators must be invertible"""
        path = tmp_path / "singular.json"
        path.write_text(json.dumps({
            "header": {"kind": "matrix", "n": 2, "conductor": 1},
            "generators": [rows],
        }))
        with pytest.raises(Singular):
            load(path)

    def test_zero_denominator(self, tmp_path):
        path = tmp_path / "zero_den.json"
        path.write_text(json.dumps({
            "header": {"kind": "matrix", "n": 1, "conductor": 1},
            "generators": [[["1/0"]]],
        }))
        with pytest.raises(ParseError):
            load(path)

    def test_missing_header_parameter(self, tmp_path):
        """A permutation header needs a degree"""
        path = tmp_path / "nodegree.json"
        path.write_text(json.dumps({"header": {"kind": "permutation"}, "generators": ["(1 2)"]}))
        with pytest.raises(MalformedInput):
            load(path)


class TestCapsPrecedence:
    """Test caps < file caps block < explicit overrides"""

    def test_file_caps_override_defaults(self):
        """A file cap below the group order stops enumeration"""
        model = read_group_file(ARTIFACTS / "heisenberg5.json")
        model.caps = CapsBlock(max_order=10)
        with pytest.raises(CapExceeded):
            group_from_file(model)

    def test_overrides_beat_file_caps(self):
        """Explicit overrides win over the file's caps block"""
        model = read_group_file(ARTIFACTS / "heisenberg5.json")
        model.caps = CapsBlock(max_order=10)
        assert group_from_file(model, overrides={"max_order": 200}).order == 125

    def test_file_caps_beat_base_caps(self):
        """The product fixture raises its own max_order above a small base cap"""
        base = Caps.default().merged({"max_order": 10})
        G = load("product_q8_c3.json", caps=base)
        assert G.order == 24
        assert G.caps.max_order == 1000

    def test_unknown_override(self):
        with pytest.raises(MalformedInput):
            Caps.default().merged({"max_orders": 10})


class TestCertificates:
    """Test certificate JSON"""

    def test_camel_case_fields(self):
        """Field names on disk are camelCase"""
        G = heisenberg(5)
        data = json.loads(certificate_json(dn_extract(G, G.generators, 1)))
        assert data["mode"] == "dn"
        assert data["groupOrder"] == 125
        assert data["subgroupOrder"] == 5
        assert data["verifiedClass"] == 1
        assert data["boundValue"] == 25
        assert data["inputGenerators"] == ["(1,0,0)", "(0,1,0)"]
        assert "hypothesisM" not in data

    def test_round_trip_verifies(self, tmp_path):
        """A written certificate verifies against a fresh enumeration of its group file"""
        source = ARTIFACTS / "semilinear8.json"
        G = load(source)
        cert = groupmain_extract(G, 1)
        path = tmp_path / "cert.json"
        path.write_text(certificate_json(cert))

        fresh = load(source)
        again = certificate_from_model(read_certificate(path), fresh)
        assert again.subgroup.order == cert.subgroup.order
        assert again.trace == cert.trace
        assert verify_certificate(again, fresh).valid

    def test_catalog_certificates_verify_after_reload(self):
        """Certificates of every catalog entry survive serialization"""
        for entry in semilinear_catalog():
            cert = groupmain_extract(entry.group, entry.c)
            model = json.loads(certificate_json(cert))
            again = certificate_from_model(CertificateModel.model_validate(model), entry.group)
            assert verify_certificate(again, entry.group).valid, entry.name

    def test_unknown_certificate_field(self, tmp_path):
        G = heisenberg(3)
        data = json.loads(certificate_json(dn_extract(G, G.generators, 1)))
        data["signature"] = "abc"
        path = tmp_path / "cert.json"
        path.write_text(json.dumps(data))
        with pytest.raises(MalformedInput):
            read_certificate(path)
